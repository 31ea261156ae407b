#pragma once

// Induced representations on a split window: the cocycle h(x,t), the matrices
// B(x,y) and S = B^T, generators as first-order differential operators, and
// recovery of the coset point x from S.

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "orbita/gauss.hpp"
#include "orbita/orbit.hpp"

namespace orbita {

/// Point of the quotient: x_m supported on the tail block, x^(m) on the head
/// block, both stored on the full window range. The section embeds it as
/// s(x) = x_m * x^(m).
template <class T>
struct CosetPoint {
    UnipotentMatrix<T> x_m;
    UnipotentMatrix<T> x_sup;

    friend bool operator==(const CosetPoint&, const CosetPoint&) = default;
};

using SymCosetPoint = CosetPoint<RatFun>;
using QCosetPoint = CosetPoint<Rational>;

namespace detail {

template <class T>
void require_window(const IndexWindow& w, IndexRange r, const char* what) {
    if (!(w.range() == r))
        throw Error(Errc::WindowMismatch, std::string(what) + " on " + to_string(r) + ", window is " + to_string(w));
}

template <class T>
void require_point(const IndexWindow& w, const CosetPoint<T>& x) {
    require_window<T>(w, x.x_m.range(), "x_m");
    require_window<T>(w, x.x_sup.range(), "x^(m)");
    for (const auto& [k, r] : w.all_pairs()) {
        bool tail = k > w.m, head = r <= w.m;
        if ((!tail && !is_zero(x.x_m(k, r))) || (!head && !is_zero(x.x_sup(k, r))))
            throw Error(Errc::InvalidArgument, "coset point has an entry outside its block at (" + std::to_string(k) +
                                                   "," + std::to_string(r) + ")");
    }
}

template <class T>
UnipotentMatrix<T> section(const CosetPoint<T>& x) {
    return x.x_m * x.x_sup;
}

}  // namespace detail

/// Coset point of symbols x[k,r] over the head and tail pairs.
inline SymCosetPoint symbolic_point(const IndexWindow& w) {
    SymCosetPoint x{SymUnipotent(w.range(), Triangle::Upper), SymUnipotent(w.range(), Triangle::Upper)};
    for (const auto& [k, r] : w.tail_pairs()) x.x_m.set(k, r, RatFun(Poly::var(xv(k, r))));
    for (const auto& [k, r] : w.head_pairs()) x.x_sup.set(k, r, RatFun(Poly::var(xv(k, r))));
    return x;
}

/// Splits g = h * s(x) with h in the corner subgroup.
template <class T>
CosetPoint<T> coset_of(const UnipotentMatrix<T>& g, const IndexWindow& w) {
    TripleDecomposition<T> d = triple_decompose(g, w);
    return CosetPoint<T>{d.x_m, d.x_sup};
}

template <class T>
struct CocycleResult {
    UnipotentMatrix<T> h;  // corner block only
    CosetPoint<T> xt;
};

/// s(x) t = h(x,t) s(xt). With t = [[Ta, Tb], [0, Td]] and s(x) = diag(A, D):
/// xt = (D Td, A Ta) and the corner of h is A Tb (D Td)^{-1}.
template <class T>
CocycleResult<T> cocycle(const IndexWindow& w, const CosetPoint<T>& x, const UnipotentMatrix<T>& t) {
    detail::require_point(w, x);
    detail::require_window<T>(w, t.range(), "t");
    if (t.triangle() != Triangle::Upper) throw Error(Errc::InvalidArgument, "cocycle needs an upper matrix t");
    UnipotentMatrix<T> moved = detail::section(x) * t;
    CosetPoint<T> xt = coset_of(moved, w);
    UnipotentMatrix<T> h = UnipotentMatrix<T>::from_matrix(
        mul(moved.matrix(), invert_unipotent(detail::section(xt)).matrix()), Triangle::Upper);
    for (const auto& [k, r] : w.all_pairs())
        if (!(k <= w.m && r > w.m) && !is_zero(h(k, r)))
            throw Error(Errc::NotExact, "cocycle left the corner subgroup");
    return CocycleResult<T>{h, xt};
}

/// B(x,y) = x_m^{-1} y x^(m), rows on the tail block, columns on the head block.
template <class T>
Matrix<T> b_matrix(const IndexWindow& w, const CosetPoint<T>& x, const Functional<T>& y) {
    detail::require_point(w, x);
    detail::require_window<T>(w, y.range(), "y");
    Matrix<T> dinv = block(invert_unipotent(x.x_m).matrix(), w.tail(), w.tail());
    Matrix<T> yc = block(y.matrix(), w.tail(), w.head());
    Matrix<T> a = block(x.x_sup.matrix(), w.head(), w.head());
    return mul(mul(dinv, yc), a);
}

/// S = B(x,y)^T: rows on the head block, columns on the tail block, so
/// entry (k,r) is indexed by the corner pair (k,r).
template <class T>
struct SMatrix {
    IndexWindow window;
    Matrix<T> s;

    const T& operator()(int k, int r) const { return s(k, r); }
    friend bool operator==(const SMatrix& a, const SMatrix& b) { return a.window == b.window && a.s == b.s; }
};

template <class T>
SMatrix<T> s_matrix(const IndexWindow& w, const CosetPoint<T>& x, const Functional<T>& y) {
    return SMatrix<T>{w, transpose(b_matrix(w, x, y))};
}

/// S_kr = <y, h(x, I + E_kr) - I>, computed from the cocycle alone.
template <class T>
SMatrix<T> s_matrix_by_cocycle(const IndexWindow& w, const CosetPoint<T>& x, const Functional<T>& y) {
    SMatrix<T> out{w, Matrix<T>(w.head(), w.tail())};
    for (const auto& [k, r] : w.corner_pairs()) {
        CocycleResult<T> c = cocycle(w, x, elementary<T>(w.range(), k, r, T(1L)));
        AlgebraElement<T> e = AlgebraElement<T>::from_matrix(sub(c.h.matrix(), Matrix<T>::identity(w.range())));
        out.s(k, r) = pairing(y, e);
    }
    return out;
}

// ---------------------------------------------------------------------------
// First-order differential operators sum_v p_v d_v + q

struct DiffOp {
    std::map<VarId, Poly> first;
    Poly zero;

    static DiffOp derivative(const VarId& v) {
        DiffOp d;
        d.first[v] = Poly(1L);
        return d;
    }
    static DiffOp multiplication(const Poly& q) {
        DiffOp d;
        d.zero = q;
        return d;
    }

    bool is_zero() const { return first.empty() && zero.is_zero(); }

    /// Drops zero coefficients so that equal operators compare equal.
    DiffOp& canonicalize() {
        for (auto it = first.begin(); it != first.end();)
            it = it->second.is_zero() ? first.erase(it) : std::next(it);
        return *this;
    }

    friend DiffOp operator+(DiffOp a, const DiffOp& b) {
        for (const auto& [v, p] : b.first) a.first[v] += p;
        a.zero += b.zero;
        return a.canonicalize();
    }
    friend DiffOp operator-(const DiffOp& a) {
        DiffOp out;
        for (const auto& [v, p] : a.first) out.first[v] = -p;
        out.zero = -a.zero;
        return out;
    }
    friend DiffOp operator-(const DiffOp& a, const DiffOp& b) { return a + (-b); }
    friend DiffOp operator*(const Poly& c, const DiffOp& a) {
        DiffOp out;
        for (const auto& [v, p] : a.first) out.first[v] = c * p;
        out.zero = c * a.zero;
        return out.canonicalize();
    }
    friend bool operator==(const DiffOp& a, const DiffOp& b) {
        DiffOp d = a - b;
        return d.is_zero();
    }
};

/// First-order part applied to f (no zero-order term).
inline Poly apply_vector_field(const DiffOp& a, const Poly& f) {
    Poly out;
    for (const auto& [v, p] : a.first) out += p * partial(f, v);
    return out;
}

inline Poly apply(const DiffOp& a, const Poly& f) { return apply_vector_field(a, f) + a.zero * f; }

/// [a, b] = ab - ba.
inline DiffOp commutator(const DiffOp& a, const DiffOp& b) {
    DiffOp out;
    std::set<VarId> vars;
    for (const auto& [v, p] : a.first) vars.insert(v);
    for (const auto& [v, p] : b.first) vars.insert(v);
    for (const auto& v : vars) {
        auto pa = a.first.find(v), pb = b.first.find(v);
        Poly c = (pb == b.first.end() ? Poly() : apply_vector_field(a, pb->second)) -
                 (pa == a.first.end() ? Poly() : apply_vector_field(b, pa->second));
        if (!c.is_zero()) out.first[v] = c;
    }
    out.zero = apply_vector_field(a, b.zero) - apply_vector_field(b, a.zero);
    return out;
}

/// "x[1,2]*d[1,3] + d[2,3]", or "tau*(...)" for a pure multiplication by tau times a
/// tau-free polynomial.
inline std::string render(const DiffOp& a) {
    if (a.first.empty() && !a.zero.is_zero()) {
        auto q = try_divide(a.zero, Poly::tau());
        if (q && q->max_tau_degree() == 0) return "tau*(" + render(*q) + ")";
    }
    std::string out;
    for (const auto& [v, c] : a.first) {
        if (!out.empty()) out += " + ";
        Poly d = Poly::var(dv(v.row, v.col));
        out += c.terms().size() == 1 ? render(c * d) : "(" + render(c) + ")*" + render(d);
    }
    if (!a.zero.is_zero() || out.empty()) out += (out.empty() ? "" : " + ") + render(a.zero);
    return out;
}

inline DiffOp parse_diffop(std::string_view text) {
    Poly p = parse_poly_with_derivatives(text);
    DiffOp out;
    for (const auto& [m, c] : p.terms()) {
        std::optional<VarId> d;
        Monomial rest;
        rest.tau = m.tau;
        for (const auto& [v, e] : m.factors) {
            if (v.role == Role::Deriv) {
                if (d || e != 1) throw Error(Errc::Parse, "operator is not first order: " + std::string(text));
                d = v;
            } else {
                rest.factors.emplace_back(v, e);
            }
        }
        Poly term = Poly::term(rest, c);
        if (d) {
            out.first[VarId{Role::X, d->row, d->col}] += term;
        } else {
            out.zero += term;
        }
    }
    return out.canonicalize();
}

// ---------------------------------------------------------------------------
// Generators A_kr = d/dt T_{I + t E_kr} at t = 0

/// Drift of the measure on the quotient: D_kr = d_kr (Haar) or d_kr - b_kr x_kr
/// (Gaussian with density proportional to exp(-b x^2) per coordinate).
struct Drift {
    std::function<Poly(int, int)> weight;  // empty for Haar

    static Drift haar() { return Drift{}; }
    static Drift gaussian_symbolic() {
        return Drift{[](int k, int r) { return Poly::var(bv(k, r)); }};
    }
    static Drift gaussian(std::function<Rational(int, int)> b) {
        return Drift{[b = std::move(b)](int k, int r) { return Poly(b(k, r)); }};
    }
    bool is_haar() const { return !weight; }

    DiffOp d(int k, int r) const {
        DiffOp op = DiffOp::derivative(xv(k, r));
        if (weight) op.zero = -(weight(k, r) * Poly::var(xv(k, r)));
        return op;
    }
};

using GeneratorTable = std::map<std::pair<int, int>, DiffOp>;

namespace detail {

inline Poly as_poly(const RatFun& f, const std::string& where) {
    if (!f.is_polynomial()) throw Error(Errc::NotExact, where + " is not polynomial: " + render(f));
    return f.num();
}

}  // namespace detail

/// Generators on every pair of the window. Head pairs (k < r <= m) and tail
/// pairs (m < k < r) get sum_s x_{sk} D_{sr} + D_{kr} with s ranging over the
/// same block below k; corner pairs get tau * S_kr(x).
inline GeneratorTable generators(const IndexWindow& w, const SymFunctional& y, const Drift& drift = Drift::haar()) {
    if (auto bad = y.generic_violation(w)) throw Error(Errc::NotGenericPoint, *bad);
    GeneratorTable out;
    auto block_generator = [&](int k, int r, int first) {
        DiffOp a = drift.d(k, r);
        for (int s = first; s < k; ++s) a = a + Poly::var(xv(s, k)) * drift.d(s, r);
        return a;
    };
    for (const auto& [k, r] : w.head_pairs()) out[{k, r}] = block_generator(k, r, w.lo);
    for (const auto& [k, r] : w.tail_pairs()) out[{k, r}] = block_generator(k, r, w.m + 1);
    SMatrix<RatFun> s = s_matrix(w, symbolic_point(w), y);
    for (const auto& [k, r] : w.corner_pairs()) {
        Poly skr = detail::as_poly(s(k, r), "S" + std::to_string(k) + std::to_string(r));
        out[{k, r}] = DiffOp::multiplication(Poly::tau() * skr);
    }
    return out;
}

struct BracketReport {
    bool ok = true;
    std::pair<int, int> first{0, 0};
    std::pair<int, int> second{0, 0};
    std::string detail;
    std::size_t checked = 0;
};

/// Checks [A(E_ab), A(E_cd)] = delta_bc A(E_ad) - delta_da A(E_cb) on all pairs.
inline BracketReport verify_bracket_homomorphism(const GeneratorTable& gens, const IndexWindow& w) {
    BracketReport rep;
    auto pairs = w.all_pairs();
    auto gen = [&](int k, int r) -> const DiffOp& {
        auto it = gens.find({k, r});
        if (it == gens.end())
            throw Error(Errc::InvalidArgument, "missing generator A[" + std::to_string(k) + "," + std::to_string(r) + "]");
        return it->second;
    };
    for (std::size_t i = 0; i < pairs.size(); ++i)
        for (std::size_t j = i + 1; j < pairs.size(); ++j) {
            auto [a, b] = pairs[i];
            auto [c, d] = pairs[j];
            DiffOp lhs = commutator(gen(a, b), gen(c, d));
            DiffOp rhs;
            if (b == c) rhs = rhs + gen(a, d);
            if (d == a) rhs = rhs - gen(c, b);
            ++rep.checked;
            if (!(lhs == rhs)) {
                rep.ok = false;
                rep.first = pairs[i];
                rep.second = pairs[j];
                rep.detail = "[A" + std::to_string(a) + std::to_string(b) + ",A" + std::to_string(c) +
                             std::to_string(d) + "] = " + render(lhs) + " but expected " + render(rhs);
                return rep;
            }
        }
    return rep;
}

// ---------------------------------------------------------------------------
// Reconstruction of x from S

namespace detail {

template <class T>
Matrix<T> s_times_j(const SMatrix<T>& s) {
    const IndexWindow& w = s.window;
    if (!w.centered_at_split())
        throw Error(Errc::WindowMismatch, "reconstruction needs head and tail blocks of equal size, got " + to_string(w));
    if (!(s.s.rows() == w.head()) || !(s.s.cols() == w.tail()))
        throw Error(Errc::WindowMismatch, "S must have rows " + to_string(w.head()) + " and columns " + to_string(w.tail()));
    return flip_cols(s.s, w.flip_sum());
}

}  // namespace detail

/// S J = L D U with L = (x^(m))^T, D = y^T J and U = J (x_m^{-1})^T J.
template <class T>
CosetPoint<T> reconstruct(const SMatrix<T>& s, const Functional<T>& y) {
    const IndexWindow& w = s.window;
    detail::require_window<T>(w, y.range(), "y");
    Matrix<T> c = detail::s_times_j(s);
    if (auto bad = y.generic_violation(w)) throw Error(Errc::NotGenericPoint, *bad);
    GaussFactors<T> f = ldu(c);
    const int flip = w.flip_sum();
    for (int j = w.lo; j <= w.m; ++j) {
        const T& expect = y(flip - j, j);
        if (!(f.D[j - w.lo] == expect))
            throw Error(Errc::DiagonalMismatch, "pivot " + std::to_string(j) + " differs from " +
                                                    to_string(VarId{Role::Y, flip - j, j}));
    }
    CosetPoint<T> x{UnipotentMatrix<T>(w.range(), Triangle::Upper), UnipotentMatrix<T>(w.range(), Triangle::Upper)};
    for (const auto& [k, r] : w.head_pairs()) x.x_sup.set(k, r, f.L(r, k));
    UnipotentMatrix<T> xm_inv(w.range(), Triangle::Upper);
    for (const auto& [r, rr] : w.tail_pairs()) xm_inv.set(r, rr, f.U(flip - rr, flip - r));
    x.x_m = invert_unipotent(xm_inv);
    return x;
}

/// Infinite-window form: C = B J = U D L with U = x_m^{-1}, D = y J and
/// L = J x^(m) J, all indexed by the tail block.
template <class T>
UdlFactors<T> infinite_factors(const IndexWindow& w, const CosetPoint<T>& x, const Functional<T>& y) {
    Matrix<T> b = b_matrix(w, x, y);
    if (!w.centered_at_split()) throw Error(Errc::WindowMismatch, "B J needs a centered window");
    return udl(flip_cols(b, w.flip_sum()));
}

/// Reconstructs at radius first..last around the split m. Windows must grow
/// by one on each side and each recovered point must restrict to the previous
/// one; violations raise WindowNotNested.
template <class T>
std::vector<CosetPoint<T>> reconstruct_infinite_window(int m, const std::function<SMatrix<T>(int)>& s_supplier,
                                                       const std::function<Functional<T>(int)>& y_supplier,
                                                       int first, int last) {
    std::vector<CosetPoint<T>> out;
    std::optional<IndexWindow> prev;
    for (int radius = first; radius <= last; ++radius) {
        SMatrix<T> s = s_supplier(radius);
        const IndexWindow expect = IndexWindow::centered(m, radius);
        if (!(s.window == expect))
            throw Error(Errc::WindowNotNested,
                        "supplier returned " + to_string(s.window) + " at radius " + std::to_string(radius));
        CosetPoint<T> x;
        try {
            x = reconstruct(s, y_supplier(radius));
        } catch (const Error& e) {
            throw Error(e.code(), e.detail() + " at radius " + std::to_string(radius), radius);
        }
        if (prev) {
            const CosetPoint<T>& p = out.back();
            for (const auto& [k, r] : prev->all_pairs())
                if (!(x.x_m(k, r) == p.x_m(k, r)) || !(x.x_sup(k, r) == p.x_sup(k, r)))
                    throw Error(Errc::WindowNotNested, "recovered entry (" + std::to_string(k) + "," +
                                                           std::to_string(r) + ") changed at radius " +
                                                           std::to_string(radius));
        }
        prev = expect;
        out.push_back(std::move(x));
    }
    return out;
}

}  // namespace orbita
