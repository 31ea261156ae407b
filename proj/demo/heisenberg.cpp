// The Heisenberg group B(3): coadjoint action, the representation induced
// from the character of H1 = {(1,3),(2,3)}, its generators, and a numeric
// check that T_{t1} T_{t2} = T_{t1 t2}.

#include <cstdio>
#include <iostream>

#include "orbita/io.hpp"
#include "orbita/repnum.hpp"

using namespace orbita;

int main() {
    const IndexWindow w{1, 3, 2};
    const IndexRange r = w.range();

    SymUnipotent t(r, Triangle::Upper);
    for (const auto& [k, c] : w.all_pairs()) t.set(k, c, RatFun(Poly::var(tv(k, c))));
    SymFunctional y(r);
    y.set(2, 1, RatFun(Poly::var(yv(2, 1))));
    y.set(3, 1, RatFun(Poly::var(yv(3, 1))));
    y.set(3, 2, RatFun(Poly::var(yv(3, 2))));

    std::cout << "coadjoint action (t^-1 y t)_-:\n";
    SymFunctional moved = coadjoint(t, y);
    for (const auto& [k, c] : std::vector<std::pair<int, int>>{{2, 1}, {3, 1}, {3, 2}})
        std::cout << "  (" << k << "," << c << ") " << render(moved(k, c)) << "\n";
    std::cout << "invariant Delta_1 = " << render(orbit_invariants(y)[0]) << "\n\n";

    SymFunctional y31(r);
    y31.set(3, 1, RatFun(Poly::var(yv(3, 1))));
    auto cocycle_at = cocycle(w, symbolic_point(w), t);
    auto h = SymAlgebraElement::from_matrix(sub(cocycle_at.h.matrix(), SymMatrix::identity(r)));
    std::cout << "(T_t f)(x) = exp(" << render(RatFun(Poly::tau()) * pairing(y31, h)) << ") f("
              << render(cocycle_at.xt.x_sup(1, 2)) << ")\n\n";

    std::cout << "generators:\n" << write_generator_table(generators(w, y31));

    QFunctional yq(r);
    yq.set(3, 1, Rational(2, 3));
    RepContext ctx{w, yq, GaussianMeasure{w, WeightFamily::geometric(1)}};
    QUnipotent t1(r, Triangle::Upper), t2(r, Triangle::Upper);
    t1.set(1, 2, Rational(1, 2));
    t1.set(2, 3, Rational(-1));
    t2.set(1, 3, Rational(3, 4));
    t2.set(1, 2, Rational(-2));
    TestFunction f = polynomial_function(w, parse_poly("1 + x[1,2]^2"));
    HomomorphismReport rep = homomorphism_probe(ctx, t1, t2, f, sample_points(ctx, 1000, 1));
    std::printf("\ngroup law on 1000 points: max deviation %.2e (%s)\n", rep.max_dev, rep.pass ? "PASS" : "FAIL");
    UnitarityReport u = unitarity_probe(ctx, t1, f, 50000, 2);
    std::printf("unitarity: |T f|^2 %.4f vs |f|^2 %.4f, error %.2e within %.2e (%s)\n", u.lhs, u.rhs, u.abs_err, u.tol,
                u.pass ? "PASS" : "FAIL");
    return rep.pass && u.pass ? 0 : 1;
}
