#include <catch_amalgamated.hpp>

#include <random>

#include "orbita/unimat.hpp"
#include "support.hpp"

using namespace orbita;
using testsupport::F;

TEST_CASE("elementary products", "[unimat]") {
    IndexRange r{1, 3};
    auto a = elementary<RatFun>(r, 1, 2, F("x[1,2]"));
    auto b = elementary<RatFun>(r, 2, 3, F("x[2,3]"));
    SymUnipotent ab = a * b;
    CHECK(ab(1, 2) == F("x[1,2]"));
    CHECK(ab(2, 3) == F("x[2,3]"));
    CHECK(ab(1, 3) == F("x[1,2]*x[2,3]"));
    CHECK(mul(ab.matrix(), SymMatrix::identity(r)) == ab.matrix());
}

TEST_CASE("Heisenberg conjugation t^-1 y t", "[unimat]") {
    IndexRange r{1, 3};
    SymUnipotent tt(r, Triangle::Upper);
    for (auto [k, c] : std::vector<std::pair<int, int>>{{1, 2}, {1, 3}, {2, 3}})
        tt.set(k, c, RatFun(Poly::var(tv(k, c))));
    SymFunctional y(r);
    y.set(2, 1, F("y[2,1]"));
    y.set(3, 1, F("y[3,1]"));
    y.set(3, 2, F("y[3,2]"));
    SymMatrix conj = mul(mul(invert_unipotent(tt).matrix(), y.matrix()), tt.matrix());
    CHECK(conj(2, 1) == F("y[2,1] - t[2,3]*y[3,1]"));
    CHECK(conj(3, 1) == F("y[3,1]"));
    CHECK(conj(3, 2) == F("y[3,1]*t[1,2] + y[3,2]"));
}

TEST_CASE("inverse examples", "[unimat]") {
    QUnipotent x({1, 3}, Triangle::Upper);
    x.set(1, 2, Rational(1));
    x.set(1, 3, Rational(2));
    x.set(2, 3, Rational(3));
    QUnipotent inv = invert_unipotent(x);
    CHECK(inv(1, 2) == -1);
    CHECK(inv(2, 3) == -3);
    CHECK(inv(1, 3) == 1);
    CHECK(is_identity(mul(x.matrix(), inv.matrix())));

    SymUnipotent x45 = elementary<RatFun>({4, 5}, 4, 5, F("x[4,5]"));
    CHECK(invert_unipotent(x45)(4, 5) == F("-x[4,5]"));

    CHECK(is_identity(invert_unipotent(QUnipotent({-2, 3}, Triangle::Upper)).matrix()));
}

TEST_CASE("chain-formula inverse matches the Neumann series", "[unimat]") {
    std::mt19937 rng(21);
    for (int size = 1; size <= 8; ++size)
        for (int rep = 0; rep < 10; ++rep) {
            IndexRange r{-2, -2 + size - 1};
            QUnipotent x = testsupport::random_upper(rng, r);
            QUnipotent inv = invert_unipotent(x);
            CHECK(is_identity(mul(x.matrix(), inv.matrix())));
            CHECK(inv == invert_unipotent_neumann(x));
            QUnipotent lower = transpose(x);
            CHECK(is_identity(mul(invert_unipotent(lower).matrix(), lower.matrix())));
        }
    // symbolic dense 5x5
    IndexRange r{1, 5};
    std::vector<std::pair<int, int>> pairs;
    for (int k = 1; k <= 5; ++k)
        for (int c = k + 1; c <= 5; ++c) pairs.emplace_back(k, c);
    SymUnipotent xs = testsupport::symbolic_upper(r, pairs);
    SymUnipotent inv = invert_unipotent(xs);
    CHECK(inv == invert_unipotent_neumann(xs));
    CHECK(is_identity(mul(xs.matrix(), inv.matrix())));
    CHECK(inv(4, 5) == F("-x[4,5]"));
    CHECK(inv(3, 5) == F("-x[3,5] + x[3,4]*x[4,5]"));
}

TEST_CASE("anti-diagonal flips", "[unimat]") {
    IndexRange r{2, 5};
    QMatrix j = antidiagonal_j<Rational>(r);
    CHECK(is_identity(mul(j, j)));
    QMatrix d(r, r);
    for (int i = 2; i <= 5; ++i) d(i, i) = Rational(i * 10);
    QMatrix jdj = antidiag_flip(d, FlipSide::Both);
    for (int i = 2; i <= 5; ++i) CHECK(jdj(i, i) == (7 - i) * 10);
    CHECK(antidiag_flip(d, FlipSide::Left) == mul(j, d));
    CHECK(antidiag_flip(d, FlipSide::Right) == mul(d, j));

    std::mt19937 rng(22);
    for (int rep = 0; rep < 20; ++rep) {
        QMatrix a(r, r);
        for (int i = 2; i <= 5; ++i)
            for (int k = 2; k <= 5; ++k) a(i, k) = testsupport::small_rational(rng);
        CHECK(antidiag_flip(antidiag_flip(a, FlipSide::Both), FlipSide::Both) == a);
        CHECK(antidiag_flip(a, FlipSide::Both) == mul(mul(j, a), j));
    }
    QMatrix rect(IndexRange{1, 2}, IndexRange{1, 3});
    try {
        antidiag_flip(rect, FlipSide::Both);
        FAIL("expected WindowMismatch");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::WindowMismatch);
    }
}

TEST_CASE("minor examples", "[unimat]") {
    QMatrix c(IndexRange{1, 2});
    c(1, 1) = 2;
    c(1, 2) = 1;
    c(2, 1) = 1;
    c(2, 2) = 1;
    CHECK(minor(c, {1}, {1}) == 2);
    CHECK(minor(c, {1, 2}, {1, 2}) == 1);
    CHECK(minor(c, {1, 1}, {1, 2}) == 0);
    CHECK(minor(c, {2, 1}, {1, 2}) == -1);
    try {
        minor(c, {1, 3}, {1, 2});
        FAIL("expected IndexOutOfWindow");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::IndexOutOfWindow);
    }
}

TEST_CASE("minor agrees with cofactor expansion", "[unimat]") {
    std::mt19937 rng(23);
    for (int size = 1; size <= 4; ++size)
        for (int rep = 0; rep < 25; ++rep) {
            IndexRange r{0, size - 1};
            QMatrix c(r, r);
            std::vector<std::vector<Rational>> rows(size, std::vector<Rational>(size));
            for (int i = 0; i < size; ++i)
                for (int k = 0; k < size; ++k) rows[i][k] = c(i, k) = testsupport::small_rational(rng, -3, 3);
            if (rep % 5 == 0 && size > 1) {
                for (int k = 0; k < size; ++k) rows[0][k] = c(0, k) = Rational(0);
            }
            std::vector<int> idx;
            for (int i = 0; i < size; ++i) idx.push_back(i);
            CHECK(minor(c, idx, idx) == testsupport::cofactor_det(rows));
        }
    // symbolic 3x3 with a rational-function entry
    SymMatrix s(IndexRange{1, 3});
    std::vector<std::vector<RatFun>> rows(3, std::vector<RatFun>(3));
    const char* text[3][3] = {{"x[1,2]", "1/x[4,5]", "2"},
                              {"y[2,1]", "x[1,3]", "x[2,3]/(1+x[1,2])"},
                              {"3", "y[3,1]", "x[1,2]*x[2,3]"}};
    for (int i = 0; i < 3; ++i)
        for (int k = 0; k < 3; ++k) rows[i][k] = s(i + 1, k + 1) = F(text[i][k]);
    CHECK(minor(s, {1, 2, 3}, {1, 2, 3}) == testsupport::cofactor_det(rows));
    CHECK(minor(s, {3, 1}, {2, 3}) == rows[2][1] * rows[0][2] - rows[2][2] * rows[0][1]);
}

TEST_CASE("triple decomposition", "[unimat]") {
    // B(5) split at 3
    IndexWindow w{1, 5, 3};
    std::vector<std::pair<int, int>> all = w.all_pairs();
    SymUnipotent g = testsupport::symbolic_upper(w.range(), all);
    auto t = triple_decompose(g, w);
    CHECK(mul(mul(t.x_m.matrix(), t.x_mid.matrix()), t.x_sup.matrix()) == g.matrix());
    CHECK(t.x_m(4, 5) == F("x[4,5]"));
    CHECK(t.x_m(1, 2).is_zero());
    CHECK(t.x_sup(1, 2) == F("x[1,2]"));
    CHECK(t.x_sup(2, 3) == F("x[2,3]"));
    CHECK(t.x_sup(3, 4).is_zero());
    CHECK(t.x_mid(1, 5) == F("x[1,5]"));
    CHECK(t.x_mid(4, 5).is_zero());
    CHECK(t.h(1, 5) == F("x[1,5] - x[1,4]*x[4,5]"));
    CHECK(t.h(1, 4) == F("x[1,4]"));
    CHECK(t.h.matrix() ==
          mul(mul(t.x_m.matrix(), t.x_mid.matrix()), invert_unipotent(t.x_m).matrix()));

    // pure tail support
    SymUnipotent tail = testsupport::symbolic_upper(w.range(), w.tail_pairs());
    auto p = triple_decompose(tail, w);
    CHECK(p.x_m == tail);
    CHECK(is_identity(p.x_mid.matrix()));
    CHECK(is_identity(p.x_sup.matrix()));

    std::mt19937 rng(24);
    for (int rep = 0; rep < 200; ++rep) {
        int n = testsupport::small_int(rng, 0, 3);
        IndexWindow cw = IndexWindow::centered(testsupport::small_int(rng, -2, 3), n);
        QUnipotent q = testsupport::random_upper(rng, cw.range());
        auto d = triple_decompose(q, cw);
        CHECK(mul(mul(d.x_m.matrix(), d.x_mid.matrix()), d.x_sup.matrix()) == q.matrix());
    }
}

TEST_CASE("window index sets partition the pairs", "[unimat]") {
    for (int n = 0; n <= 4; ++n) {
        IndexWindow w = IndexWindow::centered(-1, n);
        auto c = w.corner_pairs(), h = w.head_pairs(), t = w.tail_pairs();
        CHECK(c.size() + h.size() + t.size() == w.all_pairs().size());
        std::set<std::pair<int, int>> u(c.begin(), c.end());
        u.insert(h.begin(), h.end());
        u.insert(t.begin(), t.end());
        CHECK(u.size() == w.all_pairs().size());
        CHECK(static_cast<int>(w.antidiagonal().size()) == n + 1);
    }
}

TEST_CASE("functional genericity", "[unimat]") {
    IndexWindow w{2, 5, 3};
    SymFunctional y = testsupport::symbolic_generic_y(w);
    CHECK(y.is_generic_antidiagonal(w));
    SymFunctional z(w.range());
    z.set(5, 2, F("y[5,2]"));
    REQUIRE(z.generic_violation(w).has_value());
    CHECK(*z.generic_violation(w) == "y[4,3]=0");
    z.set(4, 3, F("1"));
    z.set(3, 2, F("1"));
    CHECK(*z.generic_violation(w) == "y[3,2] off the anti-diagonal");
    try {
        z.set(2, 3, F("1"));
        FAIL("upper entry accepted");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::InvalidArgument);
    }
}
