#pragma once

// Monte-Carlo probes of the induced representation on a window:
//   (T_t f)(x) = exp(2 pi i <y, h(x,t) - I>) (dmu(xt)/dmu(x))^{1/2} f(xt)
// evaluated on Gaussian samples. The character argument and the density
// exponent are computed exactly from the sampled doubles; only the final
// exponentials are taken in floating point.

#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <map>
#include <numbers>
#include <optional>
#include <random>
#include <vector>

#include "orbita/measure.hpp"

namespace orbita {

using Complex = std::complex<double>;

struct SamplePoint {
    std::map<std::pair<int, int>, double> coordinates;

    double operator()(int k, int r) const {
        auto it = coordinates.find({k, r});
        if (it == coordinates.end())
            throw Error(Errc::IndexOutOfWindow, "sample has no coordinate (" + std::to_string(k) + "," +
                                                    std::to_string(r) + ")");
        return it->second;
    }
};

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline std::uint64_t coordinate_key(int k, int r) {
    auto shift = [](int v) { return static_cast<std::uint64_t>(static_cast<std::int64_t>(v) + (1LL << 31)); };
    return (shift(k) << 32) | (shift(r) & 0xffffffffULL);
}

/// Standard normals by Box-Muller, one per pair of uniforms in (0,1].
class NormalStream {
public:
    explicit NormalStream(std::uint64_t seed) : rng_(seed) {}
    double next() {
        const double u1 = uniform(), u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

private:
    double uniform() { return static_cast<double>((rng_() >> 11) + 1) * 0x1.0p-53; }
    std::mt19937_64 rng_;
};

}  // namespace detail

/// Independent N(0, 1/(2 b_kr)) coordinates. Each coordinate has its own
/// stream keyed by (seed, k, r), so a coordinate's values do not depend on
/// which window it was sampled in.
inline std::vector<SamplePoint> sample(const GaussianMeasure& mu, std::size_t count, std::uint64_t seed) {
    if (count == 0) throw Error(Errc::InvalidArgument, "sample count must be at least 1");
    std::vector<SamplePoint> out(count);
    for (const auto& [k, r] : mu.coordinates()) {
        const double sd = std::sqrt(1.0 / (2.0 * mu.weight(k, r).get_d()));
        detail::NormalStream s(detail::splitmix64(seed ^ detail::splitmix64(detail::coordinate_key(k, r))));
        for (auto& p : out) p.coordinates[{k, r}] = sd * s.next();
    }
    return out;
}

/// Exact coset point with the sampled values (doubles convert exactly).
inline QCosetPoint to_coset(const IndexWindow& w, const SamplePoint& p) {
    QCosetPoint x{QUnipotent(w.range(), Triangle::Upper), QUnipotent(w.range(), Triangle::Upper)};
    for (const auto& [k, r] : w.head_pairs()) x.x_sup.set(k, r, Rational(p(k, r)));
    for (const auto& [k, r] : w.tail_pairs()) x.x_m.set(k, r, Rational(p(k, r)));
    return x;
}

/// Coordinate x_kr of a coset point: x^(m) on head pairs, x_m on tail pairs.
inline const Rational& coordinate(const IndexWindow& w, const QCosetPoint& x, int k, int r) {
    return r <= w.m ? x.x_sup(k, r) : x.x_m(k, r);
}

using TestFunction = std::function<Complex(const QCosetPoint&)>;

/// Polynomial in the window coordinates x[k,r], tau read as 2 pi i.
inline TestFunction polynomial_function(const IndexWindow& w, Poly f) {
    for (const auto& v : f.variables())
        if (v.role != Role::X || !(v.row < v.col) || (v.row <= w.m && v.col > w.m) || !w.range().contains(v.row) ||
            !w.range().contains(v.col))
            throw Error(Errc::IndexOutOfWindow, "test function variable " + to_string(v) + " is not a coordinate");
    return [w, f = std::move(f)](const QCosetPoint& x) {
        return evaluate(f, [&](const VarId& v) { return coordinate(w, x, v.row, v.col).get_d(); });
    };
}

/// Data of the representation: window, generic point y and Gaussian weights.
struct RepContext {
    IndexWindow window;
    QFunctional y;
    GaussianMeasure mu;
    bool include_density = true;  // false drops the density factor (deliberately broken)
};

struct RepTerms {
    QCosetPoint xt;
    Rational character_arg;    // <y, h(x,t) - I>
    Rational density_exponent;  // log dmu(xt)/dmu(x)
};

/// Block form of the cocycle: xt = (D Td, A Ta), h corner = A Tb (D Td)^{-1}.
inline RepTerms rep_terms(const RepContext& c, const QUnipotent& t, const QCosetPoint& x) {
    const IndexWindow& w = c.window;
    if (!(t.range() == w.range())) throw Error(Errc::WindowMismatch, "t is not on the window " + to_string(w));
    if (t.triangle() != Triangle::Upper) throw Error(Errc::InvalidArgument, "t must be upper unipotent");
    QCosetPoint xt{QUnipotent(w.range(), Triangle::Upper), QUnipotent(w.range(), Triangle::Upper)};
    Matrix<Rational> at = mul(x.x_sup.matrix(), t.matrix());
    Matrix<Rational> dt = mul(x.x_m.matrix(), t.matrix());
    for (const auto& [k, r] : w.head_pairs())
        if (sgn(at(k, r))) xt.x_sup.set(k, r, at(k, r));
    for (const auto& [k, r] : w.tail_pairs())
        if (sgn(dt(k, r))) xt.x_m.set(k, r, dt(k, r));
    Matrix<Rational> h = mul(at, invert_unipotent(xt.x_m).matrix());

    RepTerms out{std::move(xt), 0, 0};
    for (const auto& [k, r] : w.corner_pairs())
        if (sgn(h(k, r)) && sgn(c.y(r, k))) out.character_arg += h(k, r) * c.y(r, k);
    if (c.include_density)
        for (const auto& [k, r] : w.coordinate_pairs()) {
            const Rational& before = coordinate(w, x, k, r);
            Rational shift = coordinate(w, out.xt, k, r) - before;
            if (sgn(shift)) out.density_exponent += rn_cocycle(c.mu, k, r, before, shift).exponent;
        }
    return out;
}

/// exp(2 pi i a) with a reduced mod 1 exactly first.
inline Complex unit_character(const Rational& a) {
    mpz_class fl;
    mpz_fdiv_q(fl.get_mpz_t(), a.get_num_mpz_t(), a.get_den_mpz_t());
    Rational frac = a - Rational(fl);
    return std::polar(1.0, 2.0 * std::numbers::pi * frac.get_d());
}

inline Complex apply_rep_at(const RepContext& c, const QUnipotent& t, const TestFunction& f, const QCosetPoint& x) {
    RepTerms r = rep_terms(c, t, x);
    return unit_character(r.character_arg) * std::exp(r.density_exponent.get_d() / 2) * f(r.xt);
}

/// T_t f as a function, so that representations can be composed.
inline TestFunction transformed(const RepContext& c, const QUnipotent& t, TestFunction f) {
    return [c, t, f = std::move(f)](const QCosetPoint& x) { return apply_rep_at(c, t, f, x); };
}

inline std::vector<Complex> apply_rep(const RepContext& c, const QUnipotent& t, const TestFunction& f,
                                      const std::vector<QCosetPoint>& pts) {
    std::vector<Complex> out;
    out.reserve(pts.size());
    for (const auto& x : pts) out.push_back(apply_rep_at(c, t, f, x));
    return out;
}

inline std::vector<QCosetPoint> sample_points(const RepContext& c, std::size_t count, std::uint64_t seed) {
    std::vector<QCosetPoint> out;
    out.reserve(count);
    for (const auto& p : sample(c.mu, count, seed)) out.push_back(to_coset(c.window, p));
    return out;
}

// ---------------------------------------------------------------------------
// Unitarity

struct UnitarityReport {
    std::size_t count = 0;
    double lhs = 0;  // mean |T_t f|^2
    double rhs = 0;  // mean |f|^2
    double abs_err = 0;
    double std_err = 0;
    double tol = 0;  // 3 standard errors
    bool pass = false;
};

/// |T_t f|^2 - |f|^2 averaged over the first `count` points.
inline UnitarityReport unitarity_from_values(const std::vector<double>& tf2, const std::vector<double>& f2,
                                             std::size_t count) {
    UnitarityReport rep;
    rep.count = count;
    double sum_d = 0, sum_d2 = 0;
    for (std::size_t i = 0; i < count; ++i) {
        rep.lhs += tf2[i];
        rep.rhs += f2[i];
        const double d = tf2[i] - f2[i];
        sum_d += d;
        sum_d2 += d * d;
    }
    const double n = static_cast<double>(count);
    rep.lhs /= n;
    rep.rhs /= n;
    const double mean = sum_d / n;
    rep.abs_err = std::abs(mean);
    const double var = count > 1 ? std::max(0.0, (sum_d2 - n * mean * mean) / (n - 1)) : 0.0;
    rep.std_err = std::sqrt(var / n);
    rep.tol = 3 * rep.std_err;
    rep.pass = rep.abs_err <= rep.tol;
    return rep;
}

struct NormValues {
    std::vector<double> tf2, f2;
};

inline NormValues norm_values(const RepContext& c, const QUnipotent& t, const TestFunction& f, std::size_t count,
                              std::uint64_t seed) {
    NormValues v;
    v.tf2.reserve(count);
    v.f2.reserve(count);
    for (const auto& x : sample_points(c, count, seed)) {
        v.tf2.push_back(std::norm(apply_rep_at(c, t, f, x)));
        v.f2.push_back(std::norm(f(x)));
    }
    return v;
}

inline UnitarityReport unitarity_probe(const RepContext& c, const QUnipotent& t, const TestFunction& f,
                                       std::size_t count, std::uint64_t seed) {
    NormValues v = norm_values(c, t, f, count, seed);
    return unitarity_from_values(v.tf2, v.f2, count);
}

struct ScalingReport {
    std::vector<std::size_t> counts;
    std::vector<double> rms_err;
    double slope = 0;
    bool pass = false;
};

/// RMS unitarity error over independent replicates at each count (prefixes of
/// one stream per replicate) and the least-squares slope of log error against
/// log count.
inline ScalingReport unitarity_scaling(const RepContext& c, const QUnipotent& t, const TestFunction& f,
                                       std::vector<std::size_t> counts, int replicates, std::uint64_t seed) {
    if (counts.size() < 2 || replicates < 1) throw Error(Errc::InvalidArgument, "scaling needs two counts");
    std::sort(counts.begin(), counts.end());
    ScalingReport rep;
    rep.counts = counts;
    rep.rms_err.assign(counts.size(), 0.0);
    for (int i = 0; i < replicates; ++i) {
        NormValues v = norm_values(c, t, f, counts.back(), detail::splitmix64(seed + static_cast<std::uint64_t>(i)));
        for (std::size_t j = 0; j < counts.size(); ++j) {
            const double e = unitarity_from_values(v.tf2, v.f2, counts[j]).abs_err;
            rep.rms_err[j] += e * e;
        }
    }
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(counts.size());
    for (std::size_t j = 0; j < counts.size(); ++j) {
        rep.rms_err[j] = std::sqrt(rep.rms_err[j] / replicates);
        const double lx = std::log(static_cast<double>(counts[j])), ly = std::log(rep.rms_err[j]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    rep.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    rep.pass = rep.slope >= -0.65 && rep.slope <= -0.35;
    return rep;
}

// ---------------------------------------------------------------------------
// Group law

struct HomomorphismReport {
    double max_dev = 0;
    std::size_t points = 0;
    bool pass = false;
};

inline constexpr double homomorphism_tolerance = 1e-10;

/// T_{t1}(T_{t2} f) against T_{t1 t2} f pointwise.
inline HomomorphismReport homomorphism_probe(const RepContext& c, const QUnipotent& t1, const QUnipotent& t2,
                                             const TestFunction& f, const std::vector<QCosetPoint>& pts) {
    HomomorphismReport rep;
    TestFunction composed = transformed(c, t1, transformed(c, t2, f));
    QUnipotent product = t1 * t2;
    for (const auto& x : pts) {
        rep.max_dev = std::max(rep.max_dev, std::abs(composed(x) - apply_rep_at(c, product, f, x)));
        ++rep.points;
    }
    rep.pass = rep.max_dev < homomorphism_tolerance;
    return rep;
}

// ---------------------------------------------------------------------------
// Generators by finite differences

struct FdReport {
    std::vector<double> eps;
    std::vector<double> errors;  // max over points of |central difference - A f|
    std::vector<double> ratios;  // errors[i] / errors[i+1]
    bool pass = false;
};

/// Central differences (T_{I+eE} f - T_{I-eE} f)/2e against the generator
/// applied to f. Passes when each ratio of successive errors is within 20% of
/// (eps[i]/eps[i+1])^2.
inline FdReport generator_fd_probe(const RepContext& c, const DiffOp& generator, int k, int r, const Poly& f,
                                   const std::vector<double>& eps, const std::vector<QCosetPoint>& pts) {
    const IndexWindow& w = c.window;
    TestFunction fn = polynomial_function(w, f);
    Poly af = apply(generator, f);
    FdReport rep;
    rep.eps = eps;
    for (double e : eps) {
        Rational re(e);
        QUnipotent plus = elementary<Rational>(w.range(), k, r, re), minus = elementary<Rational>(w.range(), k, r, -re);
        double worst = 0;
        for (const auto& x : pts) {
            Complex fd = (apply_rep_at(c, plus, fn, x) - apply_rep_at(c, minus, fn, x)) / (2 * e);
            Complex exact = evaluate(af, [&](const VarId& v) { return coordinate(w, x, v.row, v.col).get_d(); });
            worst = std::max(worst, std::abs(fd - exact));
        }
        rep.errors.push_back(worst);
    }
    rep.pass = eps.size() >= 2;
    for (std::size_t i = 0; i + 1 < eps.size(); ++i) {
        const double ratio = rep.errors[i] / rep.errors[i + 1];
        const double expected = (eps[i] / eps[i + 1]) * (eps[i] / eps[i + 1]);
        rep.ratios.push_back(ratio);
        if (!(ratio >= 0.8 * expected && ratio <= 1.2 * expected)) rep.pass = false;
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Truncations T^{m,y_n} across growing windows

enum class Embedding {
    ZeroExtension,  // coordinates outside the smallest window are 0
    Sampled,        // every window's coordinates are sampled (shared per-coordinate streams)
};

struct TruncationSetup {
    int m = 0;
    std::function<Rational(int)> y;  // y at (m+1+j, m-j), j >= 0
    WeightFamily b = WeightFamily::geometric(1);
    std::function<QUnipotent(const IndexWindow&)> t;
    Poly f;  // in coordinates of the smallest window
    Embedding embedding = Embedding::ZeroExtension;
};

struct TruncationReport {
    std::vector<int> radii;
    std::vector<double> differences;  // max over points of |T_{R_i} f - T_{R_{i-1}} f|
    bool all_zero = true;
    bool decaying = true;
};

inline QFunctional truncated_y(const IndexWindow& w, const std::function<Rational(int)>& y) {
    QFunctional out(w.range());
    for (int j = 0; j <= w.radius(); ++j) out.set(w.m + 1 + j, w.m - j, y(j));
    return out;
}

inline TruncationReport truncation_convergence_probe(const TruncationSetup& s, std::vector<int> radii,
                                                     std::size_t count, std::uint64_t seed) {
    TruncationReport rep;
    std::sort(radii.begin(), radii.end());
    rep.radii = radii;
    if (radii.empty()) return rep;
    const IndexWindow inner = IndexWindow::centered(s.m, radii.front());
    const IndexWindow outer = IndexWindow::centered(s.m, radii.back());
    std::vector<SamplePoint> pts = sample(GaussianMeasure{s.embedding == Embedding::ZeroExtension ? inner : outer, s.b},
                                          count, seed);
    std::vector<std::vector<Complex>> values;
    for (int radius : radii) {
        const IndexWindow w = IndexWindow::centered(s.m, radius);
        RepContext c{w, truncated_y(w, s.y), GaussianMeasure{w, s.b}};
        TestFunction fn = polynomial_function(w, s.f);
        QUnipotent t = s.t(w);
        std::vector<Complex> v;
        for (const auto& p : pts) {
            SamplePoint restricted;
            for (const auto& [k, r] : w.coordinate_pairs()) {
                auto it = p.coordinates.find({k, r});
                restricted.coordinates[{k, r}] = it == p.coordinates.end() ? 0.0 : it->second;
            }
            v.push_back(apply_rep_at(c, t, fn, to_coset(w, restricted)));
        }
        values.push_back(std::move(v));
    }
    for (std::size_t i = 1; i < values.size(); ++i) {
        double d = 0;
        for (std::size_t j = 0; j < values[i].size(); ++j) d = std::max(d, std::abs(values[i][j] - values[i - 1][j]));
        rep.differences.push_back(d);
        if (d != 0) rep.all_zero = false;
        if (i > 1 && d > rep.differences[i - 2]) rep.decaying = false;
    }
    return rep;
}

}  // namespace orbita
