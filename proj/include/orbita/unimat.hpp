#pragma once

// Windowed matrices with genuine integer indices, unitriangular matrices,
// functionals, closed-form unipotent inverses, anti-diagonal flips, minors,
// and the split g = x_m * x(m) * x^(m) of an upper unitriangular matrix.

#include <string>
#include <utility>
#include <vector>

#include "orbita/error.hpp"
#include "orbita/symbolic.hpp"

namespace orbita {

inline bool is_zero(const Rational& q) { return sgn(q) == 0; }
inline bool is_zero(const RatFun& f) { return f.is_zero(); }
inline bool is_zero(const Poly& p) { return p.is_zero(); }
inline bool is_zero(double d) { return d == 0.0; }

/// Closed integer interval [lo, hi]; empty when hi < lo.
struct IndexRange {
    int lo = 1;
    int hi = 0;

    int size() const { return hi >= lo ? hi - lo + 1 : 0; }
    bool contains(int i) const { return lo <= i && i <= hi; }
    bool contains(const IndexRange& o) const { return o.size() == 0 || (lo <= o.lo && o.hi <= hi); }
    bool operator==(const IndexRange&) const = default;
};

inline std::string to_string(const IndexRange& r) {
    return "[" + std::to_string(r.lo) + "," + std::to_string(r.hi) + "]";
}

/// Index window [lo, hi] split after m: the head block is [lo, m], the tail
/// block is [m+1, hi]. The centered window of radius n is [m-n, m+n+1].
struct IndexWindow {
    int lo = 1;
    int hi = 0;
    int m = 0;

    static IndexWindow centered(int m, int n) {
        if (n < 0) throw Error(Errc::InvalidArgument, "negative window radius");
        return IndexWindow{m - n, m + n + 1, m};
    }
    static IndexWindow sized(int size, int m) {
        if (m < 1 || m >= size) throw Error(Errc::InvalidArgument, "split outside 1..size-1");
        return IndexWindow{1, size, m};
    }

    IndexRange range() const { return {lo, hi}; }
    IndexRange head() const { return {lo, m}; }
    IndexRange tail() const { return {m + 1, hi}; }
    int size() const { return hi - lo + 1; }
    /// Index reflection i -> flip_sum() - i of the anti-diagonal matrix J.
    int flip_sum() const { return lo + hi; }
    bool centered_at_split() const { return lo + hi == 2 * m + 1; }
    int radius() const { return m - lo; }
    bool operator==(const IndexWindow&) const = default;

    /// Delta(m,n): k <= m < r.
    std::vector<std::pair<int, int>> corner_pairs() const {
        std::vector<std::pair<int, int>> out;
        for (int k = lo; k <= m; ++k)
            for (int r = m + 1; r <= hi; ++r) out.emplace_back(k, r);
        return out;
    }
    /// Delta^(m,n): k < r <= m.
    std::vector<std::pair<int, int>> head_pairs() const {
        std::vector<std::pair<int, int>> out;
        for (int k = lo; k <= m; ++k)
            for (int r = k + 1; r <= m; ++r) out.emplace_back(k, r);
        return out;
    }
    /// Delta_{m,n}: m < k < r.
    std::vector<std::pair<int, int>> tail_pairs() const {
        std::vector<std::pair<int, int>> out;
        for (int k = m + 1; k <= hi; ++k)
            for (int r = k + 1; r <= hi; ++r) out.emplace_back(k, r);
        return out;
    }
    std::vector<std::pair<int, int>> all_pairs() const {
        std::vector<std::pair<int, int>> out;
        for (int k = lo; k <= hi; ++k)
            for (int r = k + 1; r <= hi; ++r) out.emplace_back(k, r);
        return out;
    }
    /// Coordinates of the quotient X: head and tail pairs.
    std::vector<std::pair<int, int>> coordinate_pairs() const {
        auto out = head_pairs();
        auto t = tail_pairs();
        out.insert(out.end(), t.begin(), t.end());
        return out;
    }
    /// Lower-triangular positions (hi-p, lo+p) of a generic point y.
    std::vector<std::pair<int, int>> antidiagonal() const {
        std::vector<std::pair<int, int>> out;
        for (int p = 0; lo + p <= m && hi - p > m; ++p) out.emplace_back(hi - p, lo + p);
        return out;
    }
};

inline std::string to_string(const IndexWindow& w) {
    return "[" + std::to_string(w.lo) + "," + std::to_string(w.hi) + "] split " + std::to_string(w.m);
}

// ---------------------------------------------------------------------------

/// Dense matrix whose rows and columns carry integer index ranges.
template <class T>
class Matrix {
public:
    Matrix() = default;
    Matrix(IndexRange rows, IndexRange cols)
        : rows_(rows), cols_(cols), a_(static_cast<std::size_t>(rows.size()) * cols.size(), T(0L)) {}
    explicit Matrix(IndexRange square) : Matrix(square, square) {}

    static Matrix identity(IndexRange r) {
        Matrix m(r, r);
        for (int i = r.lo; i <= r.hi; ++i) m(i, i) = T(1L);
        return m;
    }

    const IndexRange& rows() const { return rows_; }
    const IndexRange& cols() const { return cols_; }
    bool square() const { return rows_ == cols_; }

    T& operator()(int k, int r) { return a_[offset(k, r)]; }
    const T& operator()(int k, int r) const { return a_[offset(k, r)]; }

    friend bool operator==(const Matrix& a, const Matrix& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.a_ == b.a_;
    }

private:
    std::size_t offset(int k, int r) const {
        if (!rows_.contains(k) || !cols_.contains(r))
            throw Error(Errc::IndexOutOfWindow,
                        "(" + std::to_string(k) + "," + std::to_string(r) + ") outside " + to_string(rows_) + "x" +
                            to_string(cols_));
        return static_cast<std::size_t>(k - rows_.lo) * cols_.size() + (r - cols_.lo);
    }

    IndexRange rows_;
    IndexRange cols_;
    std::vector<T> a_;
};

using SymMatrix = Matrix<RatFun>;
using QMatrix = Matrix<Rational>;

template <class T>
Matrix<T> mul(const Matrix<T>& a, const Matrix<T>& b) {
    if (!(a.cols() == b.rows()))
        throw Error(Errc::WindowMismatch, "product of " + to_string(a.cols()) + " columns with " +
                                              to_string(b.rows()) + " rows");
    Matrix<T> c(a.rows(), b.cols());
    for (int i = a.rows().lo; i <= a.rows().hi; ++i)
        for (int k = a.cols().lo; k <= a.cols().hi; ++k) {
            const T& aik = a(i, k);
            if (is_zero(aik)) continue;
            for (int j = b.cols().lo; j <= b.cols().hi; ++j) {
                const T& bkj = b(k, j);
                if (!is_zero(bkj)) c(i, j) += aik * bkj;
            }
        }
    return c;
}

template <class T>
Matrix<T> add(const Matrix<T>& a, const Matrix<T>& b) {
    if (!(a.rows() == b.rows() && a.cols() == b.cols())) throw Error(Errc::WindowMismatch, "sum of different shapes");
    Matrix<T> c = a;
    for (int i = a.rows().lo; i <= a.rows().hi; ++i)
        for (int j = a.cols().lo; j <= a.cols().hi; ++j) c(i, j) += b(i, j);
    return c;
}

template <class T>
Matrix<T> sub(const Matrix<T>& a, const Matrix<T>& b) {
    if (!(a.rows() == b.rows() && a.cols() == b.cols()))
        throw Error(Errc::WindowMismatch, "difference of different shapes");
    Matrix<T> c = a;
    for (int i = a.rows().lo; i <= a.rows().hi; ++i)
        for (int j = a.cols().lo; j <= a.cols().hi; ++j) c(i, j) -= b(i, j);
    return c;
}

template <class T>
Matrix<T> transpose(const Matrix<T>& a) {
    Matrix<T> t(a.cols(), a.rows());
    for (int i = a.rows().lo; i <= a.rows().hi; ++i)
        for (int j = a.cols().lo; j <= a.cols().hi; ++j) t(j, i) = a(i, j);
    return t;
}

template <class T>
Matrix<T> block(const Matrix<T>& a, IndexRange rows, IndexRange cols) {
    if (!a.rows().contains(rows) || !a.cols().contains(cols))
        throw Error(Errc::IndexOutOfWindow, "block " + to_string(rows) + "x" + to_string(cols) + " outside matrix");
    Matrix<T> b(rows, cols);
    for (int i = rows.lo; i <= rows.hi; ++i)
        for (int j = cols.lo; j <= cols.hi; ++j) b(i, j) = a(i, j);
    return b;
}

/// Writes `b` into `a` at b's own index ranges.
template <class T>
void place(Matrix<T>& a, const Matrix<T>& b) {
    for (int i = b.rows().lo; i <= b.rows().hi; ++i)
        for (int j = b.cols().lo; j <= b.cols().hi; ++j) a(i, j) = b(i, j);
}

/// J*a where J reflects row indices i -> s - i.
template <class T>
Matrix<T> flip_rows(const Matrix<T>& a, int s) {
    Matrix<T> out(IndexRange{s - a.rows().hi, s - a.rows().lo}, a.cols());
    for (int i = a.rows().lo; i <= a.rows().hi; ++i)
        for (int j = a.cols().lo; j <= a.cols().hi; ++j) out(s - i, j) = a(i, j);
    return out;
}

/// a*J where J reflects column indices j -> s - j.
template <class T>
Matrix<T> flip_cols(const Matrix<T>& a, int s) {
    Matrix<T> out(a.rows(), IndexRange{s - a.cols().hi, s - a.cols().lo});
    for (int i = a.rows().lo; i <= a.rows().hi; ++i)
        for (int j = a.cols().lo; j <= a.cols().hi; ++j) out(i, s - j) = a(i, j);
    return out;
}

/// The anti-diagonal permutation matrix J on a range.
template <class T>
Matrix<T> antidiagonal_j(IndexRange r) {
    Matrix<T> j(r, r);
    for (int i = r.lo; i <= r.hi; ++i) j(i, r.lo + r.hi - i) = T(1L);
    return j;
}

enum class FlipSide { Left, Right, Both };

/// J*a, a*J or J*a*J for a square matrix, J the anti-diagonal on its range.
template <class T>
Matrix<T> antidiag_flip(const Matrix<T>& a, FlipSide side) {
    if (!a.square()) throw Error(Errc::WindowMismatch, "anti-diagonal flip needs a square window");
    int s = a.rows().lo + a.rows().hi;
    switch (side) {
    case FlipSide::Left: return flip_rows(a, s);
    case FlipSide::Right: return flip_cols(a, s);
    case FlipSide::Both: return flip_cols(flip_rows(a, s), s);
    }
    return a;
}

template <class T>
bool is_identity(const Matrix<T>& a) {
    if (!a.square()) return false;
    for (int i = a.rows().lo; i <= a.rows().hi; ++i)
        for (int j = a.cols().lo; j <= a.cols().hi; ++j)
            if (!(a(i, j) == T(i == j ? 1L : 0L))) return false;
    return true;
}

inline QMatrix to_rational(const SymMatrix& a) {
    QMatrix q(a.rows(), a.cols());
    for (int i = a.rows().lo; i <= a.rows().hi; ++i)
        for (int j = a.cols().lo; j <= a.cols().hi; ++j) {
            if (!a(i, j).is_constant())
                throw Error(Errc::InvalidArgument, "entry (" + std::to_string(i) + "," + std::to_string(j) +
                                                       ") is not a rational constant");
            q(i, j) = a(i, j).constant_value();
        }
    return q;
}

inline SymMatrix to_symbolic(const QMatrix& a) {
    SymMatrix s(a.rows(), a.cols());
    for (int i = a.rows().lo; i <= a.rows().hi; ++i)
        for (int j = a.cols().lo; j <= a.cols().hi; ++j) s(i, j) = RatFun(a(i, j));
    return s;
}

// ---------------------------------------------------------------------------

enum class Triangle { Upper, Lower };

/// Unitriangular matrix on a square index range. Entries on the wrong side of
/// the diagonal are rejected; the diagonal is fixed to 1.
template <class T>
class UnipotentMatrix {
public:
    UnipotentMatrix() = default;
    UnipotentMatrix(IndexRange r, Triangle tri) : tri_(tri), m_(Matrix<T>::identity(r)) {}

    static UnipotentMatrix from_matrix(const Matrix<T>& a, Triangle tri) {
        if (!a.square()) throw Error(Errc::WindowMismatch, "unitriangular matrix must be square");
        UnipotentMatrix u(a.rows(), tri);
        for (int i = a.rows().lo; i <= a.rows().hi; ++i)
            for (int j = a.cols().lo; j <= a.cols().hi; ++j) {
                if (i == j) {
                    if (!(a(i, j) == T(1L)))
                        throw Error(Errc::InvalidArgument, "diagonal entry " + std::to_string(i) + " is not 1");
                } else if (!is_zero(a(i, j))) {
                    u.set(i, j, a(i, j));
                }
            }
        return u;
    }

    Triangle triangle() const { return tri_; }
    IndexRange range() const { return m_.rows(); }
    const Matrix<T>& matrix() const { return m_; }
    const T& operator()(int k, int r) const { return m_(k, r); }

    void set(int k, int r, const T& v) {
        bool ok = tri_ == Triangle::Upper ? k < r : k > r;
        if (!ok)
            throw Error(Errc::InvalidArgument, "entry (" + std::to_string(k) + "," + std::to_string(r) +
                                                   ") is not strictly " +
                                                   (tri_ == Triangle::Upper ? "upper" : "lower"));
        m_(k, r) = v;
    }

    friend bool operator==(const UnipotentMatrix& a, const UnipotentMatrix& b) {
        return a.tri_ == b.tri_ && a.m_ == b.m_;
    }

private:
    Triangle tri_ = Triangle::Upper;
    Matrix<T> m_;
};

using SymUnipotent = UnipotentMatrix<RatFun>;
using QUnipotent = UnipotentMatrix<Rational>;

template <class T>
UnipotentMatrix<T> operator*(const UnipotentMatrix<T>& a, const UnipotentMatrix<T>& b) {
    if (a.triangle() != b.triangle()) throw Error(Errc::InvalidArgument, "product of mixed triangles");
    return UnipotentMatrix<T>::from_matrix(mul(a.matrix(), b.matrix()), a.triangle());
}

template <class T>
UnipotentMatrix<T> transpose(const UnipotentMatrix<T>& a) {
    return UnipotentMatrix<T>::from_matrix(transpose(a.matrix()),
                                           a.triangle() == Triangle::Upper ? Triangle::Lower : Triangle::Upper);
}

/// I + v*E_{kr}.
template <class T>
UnipotentMatrix<T> elementary(IndexRange r, int k, int c, const T& v) {
    UnipotentMatrix<T> u(r, k < c ? Triangle::Upper : Triangle::Lower);
    u.set(k, c, v);
    return u;
}

/// Strictly lower-triangular array: a point of the dual of the Lie algebra.
template <class T>
class Functional {
public:
    Functional() = default;
    explicit Functional(IndexRange r) : m_(r, r) {}

    static Functional from_matrix(const Matrix<T>& a) {
        if (!a.square()) throw Error(Errc::WindowMismatch, "functional must be square");
        Functional f(a.rows());
        for (int i = a.rows().lo; i <= a.rows().hi; ++i)
            for (int j = a.cols().lo; j <= a.cols().hi; ++j)
                if (!is_zero(a(i, j))) f.set(i, j, a(i, j));
        return f;
    }

    IndexRange range() const { return m_.rows(); }
    const Matrix<T>& matrix() const { return m_; }
    const T& operator()(int k, int r) const { return m_(k, r); }
    void set(int k, int r, const T& v) {
        if (!(k > r))
            throw Error(Errc::InvalidArgument,
                        "functional entry (" + std::to_string(k) + "," + std::to_string(r) + ") is not strictly lower");
        m_(k, r) = v;
    }

    /// Nonzero exactly on the anti-diagonal positions of the window.
    bool is_generic_antidiagonal(const IndexWindow& w) const { return !generic_violation(w).has_value(); }

    /// First offending position, e.g. "y[4,2]=0".
    std::optional<std::string> generic_violation(const IndexWindow& w) const {
        if (!(w.range() == range())) return "window " + to_string(w) + " does not match " + to_string(range());
        auto anti = w.antidiagonal();
        for (const auto& [k, r] : anti)
            if (is_zero(m_(k, r))) return to_string(VarId{Role::Y, k, r}) + "=0";
        for (int k = range().lo; k <= range().hi; ++k)
            for (int r = range().lo; r < k; ++r) {
                if (is_zero(m_(k, r))) continue;
                if (std::find(anti.begin(), anti.end(), std::make_pair(k, r)) == anti.end())
                    return to_string(VarId{Role::Y, k, r}) + " off the anti-diagonal";
            }
        return std::nullopt;
    }

    friend bool operator==(const Functional& a, const Functional& b) { return a.m_ == b.m_; }

private:
    Matrix<T> m_;
};

using SymFunctional = Functional<RatFun>;
using QFunctional = Functional<Rational>;

// ---------------------------------------------------------------------------
// Inverses

namespace detail {

template <class T>
void chain_sum(const Matrix<T>& x, int cur, int end, const T& prod, int len, T& acc) {
    for (int next = cur + 1; next <= end; ++next) {
        const T& step = x(cur, next);
        if (is_zero(step)) continue;
        T p = prod * step;
        if (next == end) {
            // (-1)^{number of factors}
            if ((len + 1) % 2 == 0) {
                acc += p;
            } else {
                acc -= p;
            }
        } else {
            chain_sum(x, next, end, p, len + 1, acc);
        }
    }
}

template <class T>
Matrix<T> invert_upper_by_chains(const Matrix<T>& x) {
    const IndexRange r = x.rows();
    Matrix<T> inv = Matrix<T>::identity(r);
    for (int k = r.lo; k <= r.hi; ++k)
        for (int n = k + 1; n <= r.hi; ++n) {
            T acc(0L);
            chain_sum(x, k, n, T(1L), 0, acc);
            inv(k, n) = acc;
        }
    return inv;
}

}  // namespace detail

/// Inverse by the alternating sum over index chains k < i_1 < ... < i_r < n:
/// inv_kn = sum over chains of (-1)^{#factors} x_{k i_1} x_{i_1 i_2} ... x_{i_r n}.
template <class T>
UnipotentMatrix<T> invert_unipotent(const UnipotentMatrix<T>& x) {
    if (x.triangle() == Triangle::Upper)
        return UnipotentMatrix<T>::from_matrix(detail::invert_upper_by_chains(x.matrix()), Triangle::Upper);
    Matrix<T> up = detail::invert_upper_by_chains(transpose(x.matrix()));
    return UnipotentMatrix<T>::from_matrix(transpose(up), Triangle::Lower);
}

/// Reference inverse I - N + N^2 - ... with N = x - I nilpotent.
template <class T>
UnipotentMatrix<T> invert_unipotent_neumann(const UnipotentMatrix<T>& x) {
    const IndexRange r = x.range();
    Matrix<T> n = sub(x.matrix(), Matrix<T>::identity(r));
    Matrix<T> sum = Matrix<T>::identity(r);
    Matrix<T> power = Matrix<T>::identity(r);
    for (int j = 1; j < r.size(); ++j) {
        power = mul(power, n);
        if (j % 2 == 1) {
            sum = sub(sum, power);
        } else {
            sum = add(sum, power);
        }
    }
    return UnipotentMatrix<T>::from_matrix(sum, x.triangle());
}

// ---------------------------------------------------------------------------
// Determinants

namespace detail {

inline Poly exact_div(const Poly& a, const Poly& b) { return divide_exact(a, b); }
inline Rational exact_div(const Rational& a, const Rational& b) { return Rational(a / b); }

/// Fraction-free determinant with row swaps on zero pivots.
template <class R>
R bareiss_det(std::vector<std::vector<R>> a) {
    const std::size_t n = a.size();
    if (n == 0) return R(1L);
    R prev(1L);
    bool negate = false;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (is_zero(a[k][k])) {
            std::size_t p = k + 1;
            while (p < n && is_zero(a[p][k])) ++p;
            if (p == n) return R(0L);
            std::swap(a[k], a[p]);
            negate = !negate;
        }
        for (std::size_t i = k + 1; i < n; ++i)
            for (std::size_t j = k + 1; j < n; ++j) a[i][j] = exact_div(a[k][k] * a[i][j] - a[i][k] * a[k][j], prev);
        prev = a[k][k];
    }
    R d = a[n - 1][n - 1];
    return negate ? R(-d) : d;
}

/// Multiplies each row of a rational-function matrix by the product of its
/// distinct denominators. Returns the polynomial rows and the multipliers.
inline std::pair<std::vector<std::vector<Poly>>, std::vector<Poly>> clear_row_denominators(
    const std::vector<std::vector<RatFun>>& rows) {
    std::vector<std::vector<Poly>> out;
    std::vector<Poly> scale;
    for (const auto& row : rows) {
        std::vector<Poly> dens;
        for (const auto& e : row)
            if (!e.is_polynomial() && std::find(dens.begin(), dens.end(), e.den()) == dens.end())
                dens.push_back(e.den());
        Poly s(1L);
        for (const auto& d : dens) s = s * d;
        std::vector<Poly> prow;
        prow.reserve(row.size());
        for (const auto& e : row) {
            if (e.is_polynomial()) {
                prow.push_back(e.num() * s);
            } else {
                Poly p = e.num();
                for (const auto& d : dens)
                    if (!(d == e.den())) p = p * d;
                prow.push_back(std::move(p));
            }
        }
        out.push_back(std::move(prow));
        scale.push_back(std::move(s));
    }
    return {std::move(out), std::move(scale)};
}

template <class T>
std::vector<std::vector<T>> gather(const Matrix<T>& c, const std::vector<int>& rows, const std::vector<int>& cols) {
    std::vector<std::vector<T>> a;
    a.reserve(rows.size());
    for (int i : rows) {
        std::vector<T> row;
        row.reserve(cols.size());
        for (int j : cols) {
            if (!c.rows().contains(i) || !c.cols().contains(j))
                throw Error(Errc::IndexOutOfWindow,
                            "minor index (" + std::to_string(i) + "," + std::to_string(j) + ") outside matrix");
            row.push_back(c(i, j));
        }
        a.push_back(std::move(row));
    }
    return a;
}

}  // namespace detail

/// Determinant of the submatrix on the given ordered rows and columns.
inline Rational minor(const QMatrix& c, const std::vector<int>& rows, const std::vector<int>& cols) {
    if (rows.size() != cols.size() || rows.empty())
        throw Error(Errc::InvalidArgument, "minor needs equally many rows and columns");
    return detail::bareiss_det(detail::gather(c, rows, cols));
}

inline RatFun minor(const SymMatrix& c, const std::vector<int>& rows, const std::vector<int>& cols) {
    if (rows.size() != cols.size() || rows.empty())
        throw Error(Errc::InvalidArgument, "minor needs equally many rows and columns");
    auto [poly_rows, scale] = detail::clear_row_denominators(detail::gather(c, rows, cols));
    Poly det = detail::bareiss_det(std::move(poly_rows));
    Poly s(1L);
    for (const auto& d : scale) s = s * d;
    return RatFun(det, s);
}

// ---------------------------------------------------------------------------
// g = x_m * x(m) * x^(m)

template <class T>
struct TripleDecomposition {
    UnipotentMatrix<T> x_m;    // tail block only
    UnipotentMatrix<T> x_mid;  // corner block only
    UnipotentMatrix<T> x_sup;  // head block only
    UnipotentMatrix<T> h;      // x_m * x(m) * x_m^{-1}, corner block only
};

template <class T>
TripleDecomposition<T> triple_decompose(const UnipotentMatrix<T>& g, const IndexWindow& w) {
    if (g.triangle() != Triangle::Upper || !(g.range() == w.range()))
        throw Error(Errc::WindowMismatch, "triple decomposition needs an upper matrix on " + to_string(w));
    const IndexRange r = w.range();
    TripleDecomposition<T> out{UnipotentMatrix<T>(r, Triangle::Upper), UnipotentMatrix<T>(r, Triangle::Upper),
                               UnipotentMatrix<T>(r, Triangle::Upper), UnipotentMatrix<T>(r, Triangle::Upper)};
    for (const auto& [k, c] : w.tail_pairs()) out.x_m.set(k, c, g(k, c));
    for (const auto& [k, c] : w.corner_pairs()) out.x_mid.set(k, c, g(k, c));
    for (const auto& [k, c] : w.head_pairs()) out.x_sup.set(k, c, g(k, c));
    // x_m x(m) x_m^{-1} = I + (corner) * D^{-1}, D the tail block of g.
    Matrix<T> d_inv = block(invert_unipotent(out.x_m).matrix(), w.tail(), w.tail());
    Matrix<T> corner = mul(block(g.matrix(), w.head(), w.tail()), d_inv);
    for (const auto& [k, c] : w.corner_pairs()) out.h.set(k, c, corner(k, c));
    return out;
}

}  // namespace orbita
