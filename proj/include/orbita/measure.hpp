#pragma once

// Weight families, Gaussian product measures on the quotient coordinates,
// Radon-Nikodym factors, drift operators and three-valued adjudication of
// the series conditions for concentration, quasi-invariance and ergodicity.

#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "orbita/induced.hpp"

namespace orbita {

/// Positive weights w_kn depending on (k,n). The closed forms depend on the
/// distance d = n - k only: Geometric q^d, GaussLike q^(d^2), Factorial d!.
class WeightFamily {
public:
    enum class Kind { Geometric, GaussLike, Factorial, Table };

    static WeightFamily geometric(Rational q) { return WeightFamily(Kind::Geometric, positive(q)); }
    static WeightFamily gauss_like(Rational q) { return WeightFamily(Kind::GaussLike, positive(q)); }
    static WeightFamily factorial() { return WeightFamily(Kind::Factorial, Rational(1)); }
    static WeightFamily table(std::map<std::pair<int, int>, Rational> entries, std::string name = "table") {
        for (const auto& [kn, v] : entries)
            if (sgn(v) <= 0)
                throw Error(Errc::InvalidArgument, "weight (" + std::to_string(kn.first) + "," +
                                                       std::to_string(kn.second) + ") is not positive");
        WeightFamily w(Kind::Table, Rational(1));
        w.table_ = std::move(entries);
        w.name_ = std::move(name);
        return w;
    }

    Kind kind() const { return kind_; }
    const Rational& q() const { return q_; }

    Rational operator()(int k, int n) const {
        const int d = n - k;
        switch (kind_) {
        case Kind::Geometric: return power(q_, d);
        case Kind::GaussLike: return power(q_, d * d);
        case Kind::Factorial: {
            if (d < 0) throw Error(Errc::InvalidArgument, "factorial weight needs k <= n");
            Integer f = 1;
            for (int i = 2; i <= d; ++i) f *= i;
            return Rational(f);
        }
        case Kind::Table: {
            auto it = table_.find({k, n});
            if (it == table_.end())
                throw Error(Errc::IndexOutOfWindow,
                            "weight table has no entry (" + std::to_string(k) + "," + std::to_string(n) + ")");
            return it->second;
        }
        }
        return Rational(1);
    }

    std::string name() const {
        switch (kind_) {
        case Kind::Geometric: return "geometric:" + rational_str(q_);
        case Kind::GaussLike: return "gausslike:" + rational_str(q_);
        case Kind::Factorial: return "factorial";
        case Kind::Table: return name_;
        }
        return "?";
    }

private:
    WeightFamily(Kind k, Rational q) : kind_(k), q_(std::move(q)) {}

    static Rational positive(Rational q) {
        if (sgn(q) <= 0) throw Error(Errc::InvalidArgument, "weight parameter must be positive");
        return q;
    }
    static Rational power(const Rational& q, int e) {
        Rational base = e < 0 ? Rational(1 / q) : q;
        unsigned n = static_cast<unsigned>(e < 0 ? -e : e);
        mpz_class num, den;
        mpz_pow_ui(num.get_mpz_t(), base.get_num_mpz_t(), n);
        mpz_pow_ui(den.get_mpz_t(), base.get_den_mpz_t(), n);
        return Rational(num, den);
    }

    Kind kind_;
    Rational q_;
    std::map<std::pair<int, int>, Rational> table_;
    std::string name_;
};

/// Fixed-point decimal rendering of an exact rational in %g style.
inline std::string decimal(const Rational& q, int digits = 12) {
    mpf_class f(q, 256);
    char buf[128];
    gmp_snprintf(buf, sizeof buf, "%.*Fg", digits, f.get_mpf_t());
    return buf;
}

// ---------------------------------------------------------------------------

struct AdmissibilityReport {
    bool admissible = true;
    int k = 0, m = 0, n = 0;  // first violating triple
    Rational lhs, rhs;
};

/// a_kn <= C a_km a_mn for all k < m < n inside the range.
inline AdmissibilityReport weight_admissible(const WeightFamily& a, const Rational& c, IndexRange r) {
    AdmissibilityReport rep;
    for (int k = r.lo; k <= r.hi; ++k)
        for (int m = k + 1; m <= r.hi; ++m)
            for (int n = m + 1; n <= r.hi; ++n) {
                Rational lhs = a(k, n), rhs = c * a(k, m) * a(m, n);
                if (lhs > rhs) return AdmissibilityReport{false, k, m, n, lhs, rhs};
            }
    return rep;
}

/// Product of centered Gaussians sqrt(b/pi) exp(-b x^2) over the head and
/// tail coordinates of a window.
struct GaussianMeasure {
    IndexWindow window;
    WeightFamily b;

    std::vector<std::pair<int, int>> coordinates() const { return window.coordinate_pairs(); }
    Rational weight(int k, int r) const {
        bool inside = window.range().contains(k) && window.range().contains(r) && k < r &&
                      !(k <= window.m && r > window.m);
        if (!inside)
            throw Error(Errc::IndexOutOfWindow,
                        "(" + std::to_string(k) + "," + std::to_string(r) + ") is not a coordinate of " + to_string(window));
        return b(k, r);
    }
};

/// dmu(x + tE)/dmu(x) = exp(-b (2 x t + t^2)) for a shift of one coordinate.
struct RnFactor {
    Rational exponent;

    double ratio() const { return std::exp(exponent.get_d()); }
    double sqrt_ratio() const { return std::exp(exponent.get_d() / 2); }
};

inline RnFactor rn_cocycle(const GaussianMeasure& mu, int k, int r, const Rational& x, const Rational& t) {
    Rational b = mu.weight(k, r);
    return RnFactor{Rational(-b * (2 * x * t + t * t))};
}

/// The same exponent with x, t and b as symbols.
inline Poly rn_exponent_symbolic(int k, int r) {
    Poly x = Poly::var(xv(k, r)), t = Poly::var(tv(k, r)), b = Poly::var(bv(k, r));
    return -(b * (Rational(2) * x * t + t * t));
}

/// d/dx_kr - b x_kr.
inline DiffOp drift_operator(int k, int r, const Rational& b) {
    DiffOp d = DiffOp::derivative(xv(k, r));
    d.zero = -(Poly(b) * Poly::var(xv(k, r)));
    return d;
}

inline DiffOp drift_operator(const GaussianMeasure& mu, int k, int r) { return drift_operator(k, r, mu.weight(k, r)); }

/// E[p] under the product measure, exact: E[x^(2j)] = (2j-1)!!/(2b)^j.
inline Rational gaussian_expectation(const Poly& p, const std::function<Rational(const VarId&)>& b) {
    Rational sum = 0;
    for (const auto& [m, c] : p.terms()) {
        if (m.tau != 0) throw Error(Errc::InvalidArgument, "expectation of a tau term");
        Rational term = c;
        for (const auto& [v, e] : m.factors) {
            if (e % 2) {
                term = 0;
                break;
            }
            Rational moment = 1;
            for (unsigned j = 1; j <= e / 2; ++j) moment *= Rational(2 * j - 1) / (2 * b(v));
            term *= moment;
        }
        sum += term;
    }
    return sum;
}

// ---------------------------------------------------------------------------
// Verdicts

struct Verdict {
    enum class State { Converges, Diverges, Inconclusive };

    State state = State::Inconclusive;
    Rational partial_sum = 0;
    int depth = 0;
    std::optional<Rational> ratio_bound;  // Converges: tail ratios <= this < 1
    std::optional<Rational> term_bound;   // Diverges: tail terms >= this > 0
    std::string note;
};

inline const char* state_name(Verdict::State s) {
    switch (s) {
    case Verdict::State::Converges: return "CONVERGES";
    case Verdict::State::Diverges: return "DIVERGES";
    case Verdict::State::Inconclusive: return "INCONCLUSIVE";
    }
    return "?";
}

inline std::string to_string(const Verdict& v) {
    std::string out = std::string(state_name(v.state)) + " sum=" + decimal(v.partial_sum);
    if (v.ratio_bound) out += " certificate=ratio<=" + decimal(*v.ratio_bound, 6);
    if (v.term_bound) out += " certificate=term>=" + decimal(*v.term_bound, 6);
    if (!v.note.empty()) out += " note=" + v.note;
    out += " depth=" + std::to_string(v.depth);
    return out;
}

struct SeriesPolicy {
    Rational rho_max = Rational(19, 20);
};

/// Adjudicates a positive series from its first terms. On the second half of
/// the terms: every consecutive ratio <= rho_max < 1 certifies convergence;
/// every ratio >= 1 (terms non-decreasing, so bounded below by a positive
/// term) certifies divergence. Anything else is Inconclusive.
inline Verdict adjudicate(const std::vector<Rational>& terms, const SeriesPolicy& policy = {}) {
    Verdict v;
    v.depth = static_cast<int>(terms.size());
    for (const auto& t : terms) {
        if (sgn(t) <= 0) throw Error(Errc::InvalidArgument, "series terms must be positive");
        v.partial_sum += t;
    }
    const std::size_t start = terms.size() / 2;
    if (terms.size() < 2 || terms.size() - start < 2) return v;
    Rational max_ratio, min_ratio;
    for (std::size_t i = start; i + 1 < terms.size(); ++i) {
        Rational r = terms[i + 1] / terms[i];
        if (i == start || r > max_ratio) max_ratio = r;
        if (i == start || r < min_ratio) min_ratio = r;
    }
    if (max_ratio <= policy.rho_max && max_ratio < 1) {
        v.state = Verdict::State::Converges;
        v.ratio_bound = max_ratio;
    } else if (min_ratio >= 1) {
        v.state = Verdict::State::Diverges;
        v.term_bound = terms[start];
    }
    return v;
}

/// How the index set grows with depth. Row: the pairs (k0, k0 + d) for
/// d = 1..depth, one term per distance. Window: term s is the sum over the
/// pairs added when the centered window grows from radius s-1 to s.
enum class Growth { Row, Window };

/// sum a_kn / b_kn.
inline Verdict concentration_check(const WeightFamily& a, const WeightFamily& b, Growth growth, int depth,
                                   int m = 0, const SeriesPolicy& policy = {}) {
    std::vector<Rational> terms;
    if (growth == Growth::Row) {
        for (int d = 1; d <= depth; ++d) terms.push_back(a(m, m + d) / b(m, m + d));
    } else {
        for (int s = 1; s <= depth; ++s) {
            IndexWindow outer = IndexWindow::centered(m, s), inner = IndexWindow::centered(m, s - 1);
            Rational shell = 0;
            for (const auto& [k, n] : outer.coordinate_pairs())
                if (!(inner.range().contains(k) && inner.range().contains(n))) shell += a(k, n) / b(k, n);
            terms.push_back(shell);
        }
    }
    Verdict v = adjudicate(terms, policy);
    v.note = growth == Growth::Row ? "row" : "window";
    return v;
}

/// S^R_kn = sum_{r < k} b_rn / b_rk, terms taken at r = k-1, k-2, ..., k-depth.
inline Verdict quasi_invariance_check(const WeightFamily& b, int k, int n, int depth, const SeriesPolicy& policy = {}) {
    if (!(k < n)) throw Error(Errc::InvalidArgument, "quasi-invariance needs k < n");
    std::vector<Rational> terms;
    for (int j = 1; j <= depth; ++j) terms.push_back(b(k - j, n) / b(k - j, k));
    return adjudicate(terms, policy);
}

/// E = sum_{k < n <= m} S^R_kn / b_kn. Shell D collects the pairs with
/// k = m - D; each inner S^R_kn is adjudicated at the same depth and a
/// divergent inner sum makes E diverge.
inline Verdict ergodicity_check(const WeightFamily& b, int m, int depth, const SeriesPolicy& policy = {}) {
    std::vector<Rational> terms;
    for (int dd = 1; dd <= depth; ++dd) {
        const int k = m - dd;
        Rational shell = 0;
        for (int n = k + 1; n <= m; ++n) {
            Verdict inner = quasi_invariance_check(b, k, n, depth, policy);
            if (inner.state != Verdict::State::Converges) {
                Verdict out;
                out.depth = depth;
                out.state = inner.state;
                out.partial_sum = inner.partial_sum;
                out.term_bound = inner.term_bound;
                out.note = "inner S[" + std::to_string(k) + "," + std::to_string(n) + "] " +
                           (inner.state == Verdict::State::Diverges ? "diverges" : "inconclusive");
                return out;
            }
            shell += inner.partial_sum / b(k, n);
        }
        terms.push_back(shell);
    }
    return adjudicate(terms, policy);
}

}  // namespace orbita
