#pragma once

// Pairing between the Lie algebra of strictly upper matrices and its dual of
// strictly lower arrays, adjoint and coadjoint actions, corner-minor orbit
// invariants, subordinate subalgebras and characters.

#include <optional>
#include <string>
#include <vector>

#include "orbita/unimat.hpp"

namespace orbita {

/// Strictly upper-triangular array on an index range.
template <class T>
class AlgebraElement {
public:
    AlgebraElement() = default;
    explicit AlgebraElement(IndexRange r) : m_(r, r) {}

    static AlgebraElement unit(IndexRange r, int k, int c) {
        AlgebraElement e(r);
        e.set(k, c, T(1L));
        return e;
    }
    static AlgebraElement from_matrix(const Matrix<T>& a) {
        if (!a.square()) throw Error(Errc::WindowMismatch, "algebra element must be square");
        AlgebraElement e(a.rows());
        for (int i = a.rows().lo; i <= a.rows().hi; ++i)
            for (int j = a.cols().lo; j <= a.cols().hi; ++j)
                if (!is_zero(a(i, j))) e.set(i, j, a(i, j));
        return e;
    }

    IndexRange range() const { return m_.rows(); }
    const Matrix<T>& matrix() const { return m_; }
    const T& operator()(int k, int r) const { return m_(k, r); }
    void set(int k, int r, const T& v) {
        if (!(k < r))
            throw Error(Errc::InvalidArgument, "algebra entry (" + std::to_string(k) + "," + std::to_string(r) +
                                                   ") is not strictly upper");
        m_(k, r) = v;
    }
    bool is_zero_element() const {
        for (int i = range().lo; i <= range().hi; ++i)
            for (int j = i + 1; j <= range().hi; ++j)
                if (!is_zero(m_(i, j))) return false;
        return true;
    }

    friend bool operator==(const AlgebraElement& a, const AlgebraElement& b) { return a.m_ == b.m_; }

private:
    Matrix<T> m_;
};

using SymAlgebraElement = AlgebraElement<RatFun>;
using QAlgebraElement = AlgebraElement<Rational>;

template <class T>
AlgebraElement<T> bracket(const AlgebraElement<T>& a, const AlgebraElement<T>& b) {
    return AlgebraElement<T>::from_matrix(sub(mul(a.matrix(), b.matrix()), mul(b.matrix(), a.matrix())));
}

namespace detail {

/// Rank of a list of vectors over a field (Rational or RatFun).
template <class T>
std::size_t rank(std::vector<std::vector<T>> v) {
    std::size_t r = 0;
    const std::size_t cols = v.empty() ? 0 : v[0].size();
    for (std::size_t c = 0; c < cols && r < v.size(); ++c) {
        std::size_t p = r;
        while (p < v.size() && is_zero(v[p][c])) ++p;
        if (p == v.size()) continue;
        std::swap(v[r], v[p]);
        for (std::size_t i = r + 1; i < v.size(); ++i) {
            if (is_zero(v[i][c])) continue;
            T f = v[i][c] / v[r][c];
            for (std::size_t j = c; j < cols; ++j) v[i][j] -= f * v[r][j];
        }
        ++r;
    }
    return r;
}

template <class T>
std::vector<T> flatten(const AlgebraElement<T>& e) {
    std::vector<T> out;
    for (int i = e.range().lo; i <= e.range().hi; ++i)
        for (int j = i + 1; j <= e.range().hi; ++j) out.push_back(e(i, j));
    return out;
}

}  // namespace detail

template <class T>
struct Subalgebra {
    IndexRange range;
    std::vector<AlgebraElement<T>> basis;

    /// span{E_kr : (k,r) in pairs}.
    static Subalgebra from_units(IndexRange r, const std::vector<std::pair<int, int>>& pairs) {
        Subalgebra h{r, {}};
        for (const auto& [k, c] : pairs) h.basis.push_back(AlgebraElement<T>::unit(r, k, c));
        return h;
    }

    bool contains(const AlgebraElement<T>& x) const {
        std::vector<std::vector<T>> rows;
        for (const auto& b : basis) rows.push_back(detail::flatten(b));
        std::size_t base = detail::rank(rows);
        rows.push_back(detail::flatten(x));
        return detail::rank(rows) == base;
    }

    bool is_closed() const {
        for (std::size_t i = 0; i < basis.size(); ++i)
            for (std::size_t j = i + 1; j < basis.size(); ++j)
                if (!contains(bracket(basis[i], basis[j]))) return false;
        return true;
    }
};

/// <y, x> = tr(x y) = sum_{k<r} x_kr y_rk.
template <class T>
T pairing(const Functional<T>& y, const AlgebraElement<T>& x) {
    if (!(y.range() == x.range())) throw Error(Errc::WindowMismatch, "pairing across different windows");
    T sum(0L);
    const IndexRange r = x.range();
    for (int k = r.lo; k <= r.hi; ++k)
        for (int c = k + 1; c <= r.hi; ++c)
            if (!is_zero(x(k, c)) && !is_zero(y(c, k))) sum += x(k, c) * y(c, k);
    return sum;
}

/// (t^{-1} y t) restricted to the strictly lower part. A right action:
/// coadjoint(t2, coadjoint(t1, y)) = coadjoint(t1 t2, y).
template <class T>
Functional<T> coadjoint(const UnipotentMatrix<T>& t, const Functional<T>& y) {
    if (!(t.range() == y.range())) throw Error(Errc::WindowMismatch, "coadjoint across different windows");
    if (t.triangle() != Triangle::Upper) throw Error(Errc::InvalidArgument, "coadjoint needs an upper matrix");
    Matrix<T> c = mul(mul(invert_unipotent(t).matrix(), y.matrix()), t.matrix());
    Functional<T> out(y.range());
    for (int k = c.rows().lo; k <= c.rows().hi; ++k)
        for (int r = c.cols().lo; r < k; ++r)
            if (!is_zero(c(k, r))) out.set(k, r, c(k, r));
    return out;
}

/// t x t^{-1}.
template <class T>
AlgebraElement<T> adjoint(const UnipotentMatrix<T>& t, const AlgebraElement<T>& x) {
    if (!(t.range() == x.range())) throw Error(Errc::WindowMismatch, "adjoint across different windows");
    if (t.triangle() != Triangle::Upper) throw Error(Errc::InvalidArgument, "adjoint needs an upper matrix");
    return AlgebraElement<T>::from_matrix(mul(mul(t.matrix(), x.matrix()), invert_unipotent(t).matrix()));
}

/// Delta_k = minor on the last k rows and first k columns, k = 1..floor(n/2).
template <class T>
std::vector<T> orbit_invariants(const Functional<T>& y) {
    const IndexRange r = y.range();
    std::vector<T> out;
    for (int k = 1; k <= r.size() / 2; ++k) {
        std::vector<int> rows, cols;
        for (int i = 0; i < k; ++i) {
            rows.push_back(r.hi - k + 1 + i);
            cols.push_back(r.lo + i);
        }
        out.push_back(minor(y.matrix(), rows, cols));
    }
    return out;
}

template <class T>
struct SubordinationReport {
    bool subordinate = true;
    std::size_t first = 0;   // indices into the basis of the violating pair
    std::size_t second = 0;
    AlgebraElement<T> bracket;
    T value = T(0L);
};

/// <f, [b_i, b_j]> = 0 for all basis pairs.
template <class T>
SubordinationReport<T> is_subordinate(const Subalgebra<T>& h, const Functional<T>& f) {
    SubordinationReport<T> rep;
    for (std::size_t i = 0; i < h.basis.size(); ++i)
        for (std::size_t j = i + 1; j < h.basis.size(); ++j) {
            AlgebraElement<T> b = bracket(h.basis[i], h.basis[j]);
            T v = pairing(f, b);
            if (!is_zero(v)) return SubordinationReport<T>{false, i, j, b, v};
        }
    return rep;
}

/// Exponent tau * <f, x> of the character exp(2 pi i <f, x>). With a
/// subalgebra given, checks that f is subordinate to it and x lies in it.
inline RatFun character(const SymFunctional& f, const SymAlgebraElement& x,
                        const Subalgebra<RatFun>* validate = nullptr) {
    if (validate) {
        auto rep = is_subordinate(*validate, f);
        if (!rep.subordinate)
            throw Error(Errc::NotSubordinate, "<f,[b" + std::to_string(rep.first) + ",b" + std::to_string(rep.second) +
                                                  "]> = " + render(rep.value));
        if (!validate->contains(x)) throw Error(Errc::NotSubordinate, "element outside the subalgebra");
    }
    return RatFun(Poly::tau()) * pairing(f, x);
}

/// exp of a formal exponent (tau -> 2 pi i) at a numeric point.
inline std::complex<double> character_value(const Poly& exponent, const std::function<double(const VarId&)>& value) {
    return std::exp(evaluate(exponent, value));
}

/// y = sum_k y[k+1,k] E_{k+1,k}: the points with zero-dimensional orbits.
inline SymFunctional subdiagonal_point(IndexRange r) {
    SymFunctional y(r);
    for (int k = r.lo; k < r.hi; ++k) y.set(k + 1, k, RatFun(Poly::var(yv(k + 1, k))));
    return y;
}

}  // namespace orbita
