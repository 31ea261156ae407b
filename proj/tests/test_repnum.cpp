#include <catch_amalgamated.hpp>

#include <random>

#include "orbita/repnum.hpp"
#include "support.hpp"

using namespace orbita;
using testsupport::P;

namespace {

// B(4) split at 3 with y52 = 3/10, y43 = -7/10
RepContext b4_context(WeightFamily b = WeightFamily::geometric(1)) {
    IndexWindow w{2, 5, 3};
    QFunctional y(w.range());
    y.set(5, 2, Rational(3, 10));
    y.set(4, 3, Rational(-7, 10));
    return RepContext{w, y, GaussianMeasure{w, std::move(b)}};
}

RepContext b6_context() {
    IndexWindow w{1, 6, 3};
    QFunctional y(w.range());
    y.set(6, 1, Rational(1, 4));
    y.set(5, 2, Rational(-2, 5));
    y.set(4, 3, Rational(3, 7));
    return RepContext{w, y, GaussianMeasure{w, WeightFamily::geometric(Rational(3, 2))}};
}

QUnipotent random_group_element(std::mt19937& rng, const IndexWindow& w) {
    return testsupport::random_upper(rng, w.range(), -4, 4);
}

}  // namespace

TEST_CASE("sampling is seeded and has the right variance", "[repnum]") {
    GaussianMeasure mu{IndexWindow{2, 5, 3}, WeightFamily::geometric(2)};
    auto a = sample(mu, 50, 9), b = sample(mu, 50, 9), c = sample(mu, 50, 10);
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i].coordinates == b[i].coordinates);
    CHECK_FALSE(a[0].coordinates == c[0].coordinates);
    CHECK(a[0].coordinates.size() == 2);

    // a coordinate's stream does not depend on the window it is sampled in
    auto wide = sample(GaussianMeasure{IndexWindow{0, 7, 3}, WeightFamily::geometric(2)}, 50, 9);
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(wide[i](2, 3) == a[i](2, 3));

    const std::size_t n = 100000;
    auto big = sample(mu, n, 123);
    for (const auto& [k, r] : mu.coordinates()) {
        double s = 0, s2 = 0;
        for (const auto& p : big) {
            s += p(k, r);
            s2 += p(k, r) * p(k, r);
        }
        const double mean = s / n, var = s2 / n - mean * mean;
        const double expected = 1.0 / (2.0 * mu.weight(k, r).get_d());
        CHECK(std::abs(var - expected) < 0.05 * expected);
    }
    try {
        sample(mu, 0, 1);
        FAIL("expected InvalidArgument");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::InvalidArgument);
    }
}

TEST_CASE("block cocycle agrees with the general cocycle", "[repnum]") {
    std::mt19937 rng(5);
    for (const RepContext& c : {b4_context(), b6_context()}) {
        const IndexWindow& w = c.window;
        for (int rep = 0; rep < 25; ++rep) {
            QCosetPoint x{QUnipotent(w.range(), Triangle::Upper), QUnipotent(w.range(), Triangle::Upper)};
            for (const auto& [k, r] : w.head_pairs()) x.x_sup.set(k, r, testsupport::small_rational(rng));
            for (const auto& [k, r] : w.tail_pairs()) x.x_m.set(k, r, testsupport::small_rational(rng));
            QUnipotent t = random_group_element(rng, w);
            RepTerms terms = rep_terms(c, t, x);
            CocycleResult<Rational> ref = cocycle(w, x, t);
            CHECK(terms.xt == ref.xt);
            auto e = QAlgebraElement::from_matrix(sub(ref.h.matrix(), Matrix<Rational>::identity(w.range())));
            CHECK(terms.character_arg == pairing(c.y, e));
            // density exponent from the Gaussian densities directly
            Rational expected = 0;
            for (const auto& [k, r] : w.coordinate_pairs()) {
                Rational a = coordinate(w, x, k, r), b = coordinate(w, ref.xt, k, r);
                expected -= c.mu.weight(k, r) * (b * b - a * a);
            }
            CHECK(terms.density_exponent == expected);
        }
    }
}

TEST_CASE("representation values on simple inputs", "[repnum]") {
    RepContext c = b4_context();
    const IndexWindow& w = c.window;
    auto pts = sample_points(c, 200, 77);
    TestFunction f = polynomial_function(w, P("x[2,3]^2 + x[4,5] - 1/3"));

    auto same = apply_rep(c, QUnipotent(w.range(), Triangle::Upper), f, pts);
    for (std::size_t i = 0; i < pts.size(); ++i) CHECK(same[i] == f(pts[i]));

    // corner translation: the point does not move and S_25 = y52
    const Rational s(2, 5);
    QUnipotent t = elementary<Rational>(w.range(), 2, 5, s);
    auto v = apply_rep(c, t, f, pts);
    const Complex phase = std::polar(1.0, 2 * std::numbers::pi * Rational(s * c.y(5, 2)).get_d());
    for (std::size_t i = 0; i < pts.size(); ++i) CHECK(std::abs(v[i] - phase * f(pts[i])) < 1e-12);

    // every character value is unimodular
    std::mt19937 rng(3);
    for (int i = 0; i < 50; ++i) {
        RepTerms r = rep_terms(c, random_group_element(rng, w), pts[i]);
        CHECK(std::abs(std::abs(unit_character(r.character_arg)) - 1.0) < 1e-12);
    }
    CHECK(std::abs(unit_character(Rational(7, 4)) - Complex(0, -1)) < 1e-15);

    CHECK_THROWS_AS(polynomial_function(w, P("x[2,4]")), Error);
}

TEST_CASE("Heisenberg translation only rescales by the density", "[repnum]") {
    IndexWindow w{1, 3, 2};
    QFunctional y(w.range());
    y.set(3, 1, Rational(1, 3));
    RepContext c{w, y, GaussianMeasure{w, WeightFamily::geometric(1)}};
    TestFunction one = [](const QCosetPoint&) { return Complex(1, 0); };
    QUnipotent t = elementary<Rational>(w.range(), 1, 2, Rational(1, 2));
    auto pts = sample_points(c, 100, 4);
    auto v = apply_rep(c, t, one, pts);
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const double x = pts[i].x_sup(1, 2).get_d(), sh = 0.5;
        CHECK(std::abs(v[i]) == Catch::Approx(std::exp(-((x + sh) * (x + sh) - x * x) / 2)).epsilon(1e-12));
    }
}

TEST_CASE("unitarity probe", "[repnum]") {
    RepContext c = b4_context();
    const IndexWindow& w = c.window;
    TestFunction f = polynomial_function(w, P("x[2,3] + x[4,5]^2 + 1"));
    auto id = unitarity_probe(c, QUnipotent(w.range(), Triangle::Upper), f, 1000, 1);
    CHECK(id.abs_err == 0.0);
    CHECK(id.pass);

    QUnipotent t(w.range(), Triangle::Upper);
    t.set(2, 3, Rational(1, 2));
    t.set(4, 5, Rational(-1, 2));
    t.set(3, 5, Rational(2));
    auto rep = unitarity_probe(c, t, f, 20000, 2);
    CHECK(rep.pass);
    CHECK(rep.abs_err <= rep.tol);

    // without the density factor the norm is not preserved
    RepContext broken = c;
    broken.include_density = false;
    QUnipotent far(w.range(), Triangle::Upper);
    far.set(2, 3, Rational(2));
    far.set(4, 5, Rational(2));
    auto bad = unitarity_probe(broken, far, f, 20000, 2);
    CHECK_FALSE(bad.pass);

    auto scale = unitarity_scaling(c, t, f, {100, 1000, 10000}, 8, 11);
    CHECK(scale.rms_err.size() == 3);
    CHECK(scale.slope < 0);
}

TEST_CASE("group law holds pointwise", "[repnum]") {
    std::mt19937 rng(17);
    for (const RepContext& c : {b4_context(), b6_context()}) {
        const IndexWindow& w = c.window;
        auto pts = sample_points(c, 40, 8);
        TestFunction f = polynomial_function(w, P("1 + x[4,5]"));
        QUnipotent id(w.range(), Triangle::Upper);
        auto exact = homomorphism_probe(c, elementary<Rational>(w.range(), w.lo, w.hi, Rational(1, 3)), id, f, pts);
        CHECK(exact.max_dev == 0.0);
        for (int rep = 0; rep < 5; ++rep) {
            QUnipotent t1 = random_group_element(rng, w), t2 = random_group_element(rng, w);
            auto r = homomorphism_probe(c, t1, t2, f, pts);
            CHECK(r.pass);
            CHECK(r.max_dev < 1e-10);
        }
    }
    // reversing a non-commuting pair changes the operator
    RepContext c = b4_context();
    const IndexWindow& w = c.window;
    auto pts = sample_points(c, 40, 8);
    TestFunction f = polynomial_function(w, P("1 + x[4,5]"));
    QUnipotent t1 = elementary<Rational>(w.range(), 2, 3, Rational(1)), t2 = elementary<Rational>(w.range(), 3, 4, Rational(1));
    TestFunction lhs = transformed(c, t1, transformed(c, t2, f));
    double dev = 0;
    for (const auto& x : pts) dev = std::max(dev, std::abs(lhs(x) - apply_rep_at(c, t2 * t1, f, x)));
    CHECK(dev > 0.1);
}

TEST_CASE("generators are derivatives of the representation", "[repnum]") {
    RepContext c = b4_context(WeightFamily::geometric(Rational(1, 2)));
    const IndexWindow& w = c.window;
    SymFunctional ys(w.range());
    for (const auto& [r, k] : w.antidiagonal()) ys.set(r, k, RatFun(Poly(c.y(r, k))));
    GeneratorTable gens = generators(w, ys, Drift::gaussian([&](int k, int r) { return c.mu.weight(k, r); }));
    auto pts = sample_points(c, 30, 21);

    // corner pair on a constant: 2 pi i S_24(x)
    {
        auto rep = generator_fd_probe(c, gens.at({2, 4}), 2, 4, Poly(1L), {1e-2, 1e-3}, pts);
        CHECK(rep.pass);
        SMatrix<Rational> s = s_matrix(w, pts[0], c.y);
        Complex fd = (apply_rep_at(c, elementary<Rational>(w.range(), 2, 4, Rational(1e-4)), [](auto&) { return Complex(1); }, pts[0]) -
                      apply_rep_at(c, elementary<Rational>(w.range(), 2, 4, Rational(-1e-4)), [](auto&) { return Complex(1); }, pts[0])) /
                     2e-4;
        CHECK(std::abs(fd - Complex(0, 2 * std::numbers::pi * s(2, 4).get_d())) < 1e-6);
    }
    for (auto [k, r] : std::vector<std::pair<int, int>>{{2, 3}, {4, 5}, {3, 5}, {2, 5}}) {
        auto rep = generator_fd_probe(c, gens.at({k, r}), k, r, P("x[2,3]^2 + x[4,5] + 1"), {1e-2, 1e-3}, pts);
        INFO(k << "," << r << " ratio " << rep.ratios[0]);
        CHECK(rep.pass);
        CHECK(rep.errors[1] < 1e-4);
    }
    // the head generator on its own coordinate: 1 - b x_23^2 at x
    Poly af = apply(gens.at({2, 3}), P("x[2,3]"));
    CHECK(af == P("1 - 1/2*x[2,3]^2"));
}

TEST_CASE("truncations agree on window-supported translations", "[repnum]") {
    TruncationSetup s;
    s.m = 0;
    s.y = [](int j) { return Rational(1, j + 2); };
    s.b = WeightFamily::geometric(2);
    s.f = P("x[-1,0] + x[1,2]^2");
    s.t = [](const IndexWindow& w) {
        QUnipotent t(w.range(), Triangle::Upper);
        t.set(-1, 0, Rational(1, 2));
        t.set(0, 2, Rational(3, 4));
        t.set(1, 2, Rational(-1));
        return t;
    };
    auto rep = truncation_convergence_probe(s, {1, 2, 3, 4}, 50, 6);
    REQUIRE(rep.differences.size() == 3);
    CHECK(rep.all_zero);

    // t gains the corner entry 2^-R at (m-R, m+R+1) at each radius
    s.t = [](const IndexWindow& w) {
        QUnipotent t(w.range(), Triangle::Upper);
        t.set(-1, 0, Rational(1, 2));
        Rational c = 1;
        for (int radius = 1; radius <= w.radius(); ++radius) {
            c /= 2;
            t.set(w.m - radius, w.m + radius + 1, c);
        }
        return t;
    };
    auto grow = truncation_convergence_probe(s, {1, 2, 3, 4, 5}, 50, 6);
    CHECK_FALSE(grow.all_zero);
    CHECK(grow.decaying);
    for (double d : grow.differences) CHECK(d > 0);

    CHECK(truncation_convergence_probe(s, {2}, 10, 6).differences.empty());
}
