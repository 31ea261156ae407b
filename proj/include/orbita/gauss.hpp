#pragma once

// Gauss LDU factorization: fraction-free elimination, an entry-by-entry
// version built from quotients of minors, the UDL variant, and a stream over
// growing leading blocks of an infinite matrix.

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "orbita/unimat.hpp"

namespace orbita {

/// c = L * diag(D) * U; D[i] belongs to index rows().lo + i.
template <class T>
struct GaussFactors {
    Matrix<T> L;
    std::vector<T> D;
    Matrix<T> U;

    Matrix<T> diagonal() const {
        Matrix<T> d(L.rows(), L.rows());
        for (int i = 0; i < static_cast<int>(D.size()); ++i) d(L.rows().lo + i, L.rows().lo + i) = D[i];
        return d;
    }
    Matrix<T> reassemble() const { return mul(mul(L, diagonal()), U); }
};

namespace detail {

template <class R>
struct BareissTrace {
    std::vector<R> pivot;                // pivot[k] = leading principal minor of size k+1
    std::vector<std::vector<R>> below;   // below[i][k] = a^{(k)}_{ik}, i > k
    std::vector<std::vector<R>> right;   // right[k][j] = a^{(k)}_{kj}, j > k
};

/// Fraction-free elimination without pivoting. Stage numbers are 1-based.
template <class R>
BareissTrace<R> bareiss_ldu(std::vector<std::vector<R>> a) {
    const std::size_t n = a.size();
    BareissTrace<R> tr;
    tr.pivot.resize(n);
    tr.below.assign(n, std::vector<R>(n, R(0L)));
    tr.right.assign(n, std::vector<R>(n, R(0L)));
    R prev(1L);
    for (std::size_t k = 0; k < n; ++k) {
        if (is_zero(a[k][k]))
            throw Error(Errc::PrincipalMinorVanishes, "at stage " + std::to_string(k + 1), static_cast<int>(k + 1));
        tr.pivot[k] = a[k][k];
        for (std::size_t i = k + 1; i < n; ++i) tr.below[i][k] = a[i][k];
        for (std::size_t j = k + 1; j < n; ++j) tr.right[k][j] = a[k][j];
        for (std::size_t i = k + 1; i < n; ++i)
            for (std::size_t j = k + 1; j < n; ++j) a[i][j] = exact_div(a[k][k] * a[i][j] - a[i][k] * a[k][j], prev);
        prev = a[k][k];
    }
    return tr;
}

template <class T>
std::vector<std::vector<T>> rows_of(const Matrix<T>& c) {
    std::vector<std::vector<T>> a;
    for (int i = c.rows().lo; i <= c.rows().hi; ++i) {
        std::vector<T> row;
        for (int j = c.cols().lo; j <= c.cols().hi; ++j) row.push_back(c(i, j));
        a.push_back(std::move(row));
    }
    return a;
}

template <class T>
void require_square(const Matrix<T>& c) {
    if (!c.square()) throw Error(Errc::WindowMismatch, "LDU needs a square matrix with equal index ranges");
}

}  // namespace detail

inline GaussFactors<Rational> ldu(const QMatrix& c) {
    detail::require_square(c);
    const IndexRange r = c.rows();
    auto tr = detail::bareiss_ldu(detail::rows_of(c));
    GaussFactors<Rational> f{QMatrix::identity(r), {}, QMatrix::identity(r)};
    const int n = r.size();
    for (int k = 0; k < n; ++k) {
        Rational prev = k == 0 ? Rational(1) : tr.pivot[k - 1];
        f.D.push_back(Rational(tr.pivot[k] / prev));
        for (int i = k + 1; i < n; ++i) {
            f.L(r.lo + i, r.lo + k) = tr.below[i][k] / tr.pivot[k];
            f.U(r.lo + k, r.lo + i) = tr.right[k][i] / tr.pivot[k];
        }
    }
    return f;
}

/// Symbolic LDU. Rows are first cleared of denominators so the elimination
/// runs over polynomials with exact divisions; quotients appear only in the
/// final entries.
inline GaussFactors<RatFun> ldu(const SymMatrix& c) {
    detail::require_square(c);
    const IndexRange r = c.rows();
    auto [rows, scale] = detail::clear_row_denominators(detail::rows_of(c));
    auto tr = detail::bareiss_ldu(std::move(rows));
    GaussFactors<RatFun> f{SymMatrix::identity(r), {}, SymMatrix::identity(r)};
    const int n = r.size();
    for (int k = 0; k < n; ++k) {
        Poly prev = k == 0 ? Poly(1L) : tr.pivot[k - 1];
        f.D.push_back(RatFun(tr.pivot[k], prev * scale[k]));
        for (int i = k + 1; i < n; ++i) {
            f.L(r.lo + i, r.lo + k) = RatFun(tr.below[i][k] * scale[k], tr.pivot[k] * scale[i]);
            f.U(r.lo + k, r.lo + i) = RatFun(tr.right[k][i], tr.pivot[k]);
        }
    }
    return f;
}

/// Every entry from its own quotient of minors:
/// d_k = M^{1..k}_{1..k} / M^{1..k-1}_{1..k-1},
/// l_ik = M^{1..k-1,i}_{1..k} / M^{1..k}_{1..k},
/// u_kj = M^{1..k}_{1..k-1,j} / M^{1..k}_{1..k}.
template <class T>
GaussFactors<T> ldu_by_minors(const Matrix<T>& c) {
    detail::require_square(c);
    const IndexRange r = c.rows();
    const int n = r.size();
    GaussFactors<T> f{Matrix<T>::identity(r), {}, Matrix<T>::identity(r)};
    T prev(1L);
    for (int k = 1; k <= n; ++k) {
        std::vector<int> lead;
        for (int i = 0; i < k; ++i) lead.push_back(r.lo + i);
        T mk = minor(c, lead, lead);
        if (is_zero(mk)) throw Error(Errc::PrincipalMinorVanishes, "at stage " + std::to_string(k), k);
        f.D.push_back(mk / prev);
        std::vector<int> head(lead.begin(), lead.end() - 1);
        for (int i = k + 1; i <= n; ++i) {
            const int idx = r.lo + i - 1;
            std::vector<int> rows = head;
            rows.push_back(idx);
            f.L(idx, r.lo + k - 1) = minor(c, rows, lead) / mk;
            f.U(r.lo + k - 1, idx) = minor(c, lead, rows) / mk;
        }
        prev = mk;
    }
    return f;
}

/// c = U * diag(D) * L with U upper and L lower unitriangular, obtained from
/// the LDU factorization of J c J.
template <class T>
struct UdlFactors {
    Matrix<T> U;
    std::vector<T> D;
    Matrix<T> L;

    Matrix<T> diagonal() const {
        Matrix<T> d(U.rows(), U.rows());
        for (int i = 0; i < static_cast<int>(D.size()); ++i) d(U.rows().lo + i, U.rows().lo + i) = D[i];
        return d;
    }
    Matrix<T> reassemble() const { return mul(mul(U, diagonal()), L); }
};

template <class T>
UdlFactors<T> udl(const Matrix<T>& c) {
    detail::require_square(c);
    GaussFactors<T> f = ldu(antidiag_flip(c, FlipSide::Both));
    UdlFactors<T> out{antidiag_flip(f.L, FlipSide::Both), std::vector<T>(f.D.rbegin(), f.D.rend()),
                      antidiag_flip(f.U, FlipSide::Both)};
    return out;
}

// ---------------------------------------------------------------------------

/// Factors the leading blocks of an infinite matrix as the window grows.
/// Each new block must extend the previous one (same starting indices,
/// previous entries unchanged) and its factors must extend the previous
/// factors.
template <class T>
class LduStream {
public:
    using Supplier = std::function<Matrix<T>(int radius)>;

    LduStream(Supplier supplier, int first_radius) : supplier_(std::move(supplier)), radius_(first_radius) {}

    int radius() const { return radius_; }

    GaussFactors<T> next() {
        Matrix<T> c = supplier_(radius_);
        if (prev_) check_nested(*prev_, c);
        GaussFactors<T> f;
        try {
            f = ldu(c);
        } catch (const Error& e) {
            if (e.code() != Errc::PrincipalMinorVanishes) throw;
            throw Error(e.code(), "at stage " + std::to_string(e.stage()) + " at radius " + std::to_string(radius_),
                        e.stage());
        }
        if (prev_f_) check_stable(*prev_f_, f);
        prev_ = c;
        prev_f_ = f;
        ++radius_;
        return f;
    }

private:
    void check_nested(const Matrix<T>& a, const Matrix<T>& b) const {
        const std::string where = " at radius " + std::to_string(radius_);
        if (a.rows().lo != b.rows().lo || a.cols().lo != b.cols().lo || !b.rows().contains(a.rows()) ||
            !b.cols().contains(a.cols()) || b.rows().size() <= a.rows().size())
            throw Error(Errc::WindowNotNested, "window does not extend the previous one" + where);
        for (int i = a.rows().lo; i <= a.rows().hi; ++i)
            for (int j = a.cols().lo; j <= a.cols().hi; ++j)
                if (!(a(i, j) == b(i, j)))
                    throw Error(Errc::WindowNotNested, "entry (" + std::to_string(i) + "," + std::to_string(j) +
                                                           ") changed" + where);
    }
    void check_stable(const GaussFactors<T>& a, const GaussFactors<T>& b) const {
        bool ok = block(b.L, a.L.rows(), a.L.cols()) == a.L && block(b.U, a.U.rows(), a.U.cols()) == a.U;
        for (std::size_t i = 0; ok && i < a.D.size(); ++i) ok = a.D[i] == b.D[i];
        if (!ok) throw Error(Errc::WindowNotNested, "factors are not block-stable at radius " + std::to_string(radius_));
    }

    Supplier supplier_;
    int radius_;
    std::optional<Matrix<T>> prev_;
    std::optional<GaussFactors<T>> prev_f_;
};

template <class T>
std::vector<GaussFactors<T>> ldu_streamed(typename LduStream<T>::Supplier supplier, int first_radius,
                                          int last_radius) {
    LduStream<T> s(std::move(supplier), first_radius);
    std::vector<GaussFactors<T>> out;
    for (int r = first_radius; r <= last_radius; ++r) out.push_back(s.next());
    return out;
}

}  // namespace orbita
