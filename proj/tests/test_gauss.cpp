#include <catch_amalgamated.hpp>

#include <random>

#include "orbita/gauss.hpp"
#include "support.hpp"

using namespace orbita;
using testsupport::F;

namespace {

QMatrix two_by_two(long a, long b, long c, long d) {
    QMatrix m(IndexRange{1, 2});
    m(1, 1) = a;
    m(1, 2) = b;
    m(2, 1) = c;
    m(2, 2) = d;
    return m;
}

QMatrix random_matrix(std::mt19937& rng, IndexRange r) {
    QMatrix c(r, r);
    for (int i = r.lo; i <= r.hi; ++i)
        for (int k = r.lo; k <= r.hi; ++k) c(i, k) = testsupport::small_int(rng, -5, 5);
    return c;
}

bool leading_minors_nonzero(const QMatrix& c) {
    std::vector<int> idx;
    for (int i = c.rows().lo; i <= c.rows().hi; ++i) {
        idx.push_back(i);
        if (sgn(minor(c, idx, idx)) == 0) return false;
    }
    return true;
}

Errc error_of(const std::function<void()>& f, int* stage = nullptr) {
    try {
        f();
    } catch (const Error& e) {
        if (stage) *stage = e.stage();
        return e.code();
    }
    return Errc::NotExact;
}

}  // namespace

TEST_CASE("ldu examples", "[gauss]") {
    auto f = ldu(two_by_two(2, 1, 1, 1));
    CHECK(f.L(2, 1) == make_rational(1, 2));
    CHECK(f.D[0] == 2);
    CHECK(f.D[1] == make_rational(1, 2));
    CHECK(f.U(1, 2) == make_rational(1, 2));
    CHECK(f.reassemble() == two_by_two(2, 1, 1, 1));

    auto id = ldu(QMatrix::identity({-1, 2}));
    CHECK(is_identity(id.L));
    CHECK(is_identity(id.U));
    for (const auto& d : id.D) CHECK(d == 1);

    int stage = 0;
    CHECK(error_of([] { ldu(two_by_two(0, 1, 1, 0)); }, &stage) == Errc::PrincipalMinorVanishes);
    CHECK(stage == 1);
}

TEST_CASE("ldu by minors examples", "[gauss]") {
    auto f = ldu_by_minors(two_by_two(2, 1, 1, 1));
    CHECK(f.L(2, 1) == make_rational(1, 2));
    CHECK(f.U(1, 2) == make_rational(1, 2));
    CHECK(f.D[1] == make_rational(1, 2));

    SymMatrix d(IndexRange{1, 2});
    d(1, 1) = F("b[1,1]");
    d(2, 2) = F("b[2,2]");
    auto g = ldu_by_minors(d);
    CHECK(is_identity(g.L));
    CHECK(is_identity(g.U));
    CHECK(g.D[0] == F("b[1,1]"));
    CHECK(g.D[1] == F("b[2,2]"));
}

TEST_CASE("symbolic generic 3x3: elimination equals minor formulas", "[gauss]") {
    SymMatrix c(IndexRange{1, 3});
    for (int i = 1; i <= 3; ++i)
        for (int k = 1; k <= 3; ++k) c(i, k) = RatFun(Poly::var(bv(i, k)));
    auto a = ldu(c);
    auto b = ldu_by_minors(c);
    CHECK(a.L == b.L);
    CHECK(a.U == b.U);
    CHECK(a.D == b.D);
    CHECK(a.reassemble() == c);
    CHECK(a.D[0] == F("b[1,1]"));
    CHECK(a.D[1] == F("(b[1,1]*b[2,2] - b[1,2]*b[2,1])/b[1,1]"));
}

TEST_CASE("symbolic entries with denominators", "[gauss]") {
    SymMatrix c(IndexRange{0, 2});
    const char* text[3][3] = {{"x[1,2]", "1/x[4,5]", "2"},
                              {"y[2,1]", "x[1,3]", "x[2,3]/(1+x[1,2])"},
                              {"3", "y[3,1]/x[4,5]", "x[1,2]*x[2,3]"}};
    for (int i = 0; i < 3; ++i)
        for (int k = 0; k < 3; ++k) c(i, k) = F(text[i][k]);
    auto a = ldu(c);
    auto b = ldu_by_minors(c);
    CHECK(a.reassemble() == c);
    CHECK(a.L == b.L);
    CHECK(a.U == b.U);
    CHECK(a.D == b.D);
}

TEST_CASE("random rational matrices", "[gauss]") {
    std::mt19937 rng(31);
    int done = 0;
    while (done < 150) {
        int size = testsupport::small_int(rng, 2, 6);
        QMatrix c = random_matrix(rng, {1, size});
        if (!leading_minors_nonzero(c)) continue;
        ++done;
        auto a = ldu(c);
        auto b = ldu_by_minors(c);
        CHECK(a.reassemble() == c);
        CHECK(a.L == b.L);
        CHECK(a.U == b.U);
        CHECK(a.D == b.D);
        // d_k = M_k / M_{k-1}
        Rational prev(1);
        std::vector<int> idx;
        for (int k = 1; k <= size; ++k) {
            idx.push_back(k);
            Rational mk = minor(c, idx, idx);
            CHECK(a.D[k - 1] == mk / prev);
            prev = mk;
        }
    }
}

TEST_CASE("UDL from LDU of the flipped matrix", "[gauss]") {
    std::mt19937 rng(32);
    int done = 0;
    while (done < 60) {
        int size = testsupport::small_int(rng, 2, 6);
        QMatrix c = random_matrix(rng, {3, 3 + size - 1});
        if (!leading_minors_nonzero(antidiag_flip(c, FlipSide::Both))) continue;
        ++done;
        auto f = udl(c);
        CHECK(f.reassemble() == c);
        for (int i = f.U.rows().lo; i <= f.U.rows().hi; ++i)
            for (int k = f.U.cols().lo; k < i; ++k) {
                CHECK(is_zero(f.U(i, k)));
                CHECK(is_zero(f.L(k, i)));
            }
    }
}

TEST_CASE("streamed factorization", "[gauss]") {
    // identity at every radius
    auto ids = ldu_streamed<Rational>([](int r) { return QMatrix::identity({0, r}); }, 1, 4);
    for (const auto& f : ids) {
        CHECK(is_identity(f.L));
        CHECK(is_identity(f.U));
    }

    // nested random suppliers
    std::mt19937 rng(33);
    for (int rep = 0; rep < 50; ++rep) {
        QMatrix big = random_matrix(rng, {1, 6});
        if (!leading_minors_nonzero(big)) {
            --rep;
            continue;
        }
        auto fs = ldu_streamed<Rational>([&](int r) { return block(big, {1, r}, {1, r}); }, 2, 6);
        for (std::size_t i = 0; i + 1 < fs.size(); ++i) {
            CHECK(block(fs[i + 1].L, fs[i].L.rows(), fs[i].L.cols()) == fs[i].L);
            CHECK(block(fs[i + 1].U, fs[i].U.rows(), fs[i].U.cols()) == fs[i].U);
        }
    }

    // second principal minor vanishes once the radius-3 block appears
    QMatrix bad(IndexRange{1, 4});
    for (int i = 1; i <= 4; ++i) bad(i, i) = 1;
    bad(1, 2) = 1;
    bad(2, 1) = 1;  // M_2 = 0
    LduStream<Rational> s([&](int r) { return block(bad, {1, r}, {1, r}); }, 1);
    s.next();
    int stage = 0;
    CHECK(error_of([&] { s.next(); }, &stage) == Errc::PrincipalMinorVanishes);
    CHECK(stage == 2);

    // a supplier that changes an old entry
    LduStream<Rational> t(
        [](int r) {
            QMatrix m = QMatrix::identity({1, r});
            m(1, 1) = r;
            return m;
        },
        1);
    t.next();
    CHECK(error_of([&] { t.next(); }) == Errc::WindowNotNested);
}
