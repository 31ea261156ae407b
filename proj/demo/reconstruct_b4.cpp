// Recovering a point x of B(4) split at 3 from S(x,y) and y through the
// factorization S J = L D U.

#include <iostream>

#include "orbita/gauss.hpp"
#include "orbita/io.hpp"

using namespace orbita;

int main() {
    const IndexWindow w{2, 5, 3};

    SymFunctional ys(w.range());
    for (const auto& [k, r] : w.antidiagonal()) ys.set(k, r, RatFun(Poly::var(yv(k, r))));
    SMatrix<RatFun> s = s_matrix(w, symbolic_point(w), ys);
    std::cout << "symbolic S:\n";
    for (const auto& [k, r] : w.corner_pairs()) std::cout << "  S[" << k << "," << r << "] = " << render(s(k, r)) << "\n";

    GaussFactors<RatFun> f = ldu(flip_cols(s.s, w.flip_sum()));
    std::cout << "S J = L D U with L(3,2) = " << render(f.L(3, 2)) << ", D = (" << render(f.D[0]) << ", "
              << render(f.D[1]) << "), U(2,3) = " << render(f.U(2, 3)) << "\n\n";

    QCosetPoint x{QUnipotent(w.range(), Triangle::Upper), QUnipotent(w.range(), Triangle::Upper)};
    x.x_sup.set(2, 3, Rational(5, 2));
    x.x_m.set(4, 5, Rational(-1, 3));
    QFunctional y(w.range());
    y.set(5, 2, Rational(7));
    y.set(4, 3, Rational(-2, 5));
    SMatrix<Rational> sq = s_matrix(w, x, y);
    std::cout << "S at x23 = 5/2, x45 = -1/3, y52 = 7, y43 = -2/5:\n" << write_matrix_text(from_smatrix(sq));

    QCosetPoint back = reconstruct(sq, y);
    std::cout << "reconstructed x23 = " << back.x_sup(2, 3) << ", x45 = " << back.x_m(4, 5) << "\n";
    const bool ok = back == x;
    std::cout << (ok ? "recovered exactly\n" : "MISMATCH\n");
    return ok ? 0 : 1;
}
