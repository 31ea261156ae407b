#include <catch_amalgamated.hpp>

#include <cstdio>
#include <filesystem>
#include <random>

#include "orbita/io.hpp"
#include "support.hpp"

using namespace orbita;
using testsupport::F;

namespace {

Errc code_of(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected an error");
    return Errc::InvalidArgument;
}

std::string temp_path(const std::string& name) {
    return (std::filesystem::temp_directory_path() / ("orbita_io_" + name)).string();
}

}  // namespace

TEST_CASE("matrix files parse with defaults and comments", "[io]") {
    MatrixFile f = parse_matrix_text(
        "# the B(4) window\n"
        "window 3 1\n"
        "triangle upper   # unipotent\n"
        "2 3 1/2\n"
        "4 5 x[4,5]\n"
        "\n"
        "2 2 1\n");
    REQUIRE(f.window);
    CHECK(*f.window == IndexWindow{2, 5, 3});
    CHECK(f.entries.size() == 2);
    QUnipotent u(f.range, Triangle::Upper);
    SymUnipotent s = to_unipotent<RatFun>(f);
    CHECK(s(2, 3) == F("1/2"));
    CHECK(s(4, 5) == F("x[4,5]"));
    CHECK(s(3, 3) == F("1"));
    CHECK(code_of([&] { to_unipotent<Rational>(f); }) == Errc::InvalidArgument);

    MatrixFile g = parse_matrix_text("size 3\ntriangle functional\n3 1 y[3,1]\n2 1 0\n");
    CHECK(g.range == IndexRange{1, 3});
    CHECK_FALSE(g.window);
    CHECK(g.entries.size() == 1);
    CHECK(to_functional<RatFun>(g)(3, 1) == F("y[3,1]"));
}

TEST_CASE("matrix file errors", "[io]") {
    CHECK(code_of([] { parse_matrix_text("window 3\ntriangle upper\n"); }) == Errc::Parse);
    CHECK(code_of([] { parse_matrix_text("size 3\ntriangle diagonal\n"); }) == Errc::Parse);
    CHECK(code_of([] { parse_matrix_text("size 3\ntriangle upper\n1 4 1\n"); }) == Errc::IndexOutOfWindow);
    CHECK(code_of([] { parse_matrix_text("size 3\ntriangle upper\n2 1 1\n"); }) == Errc::InvalidArgument);
    CHECK(code_of([] { parse_matrix_text("size 3\ntriangle upper\n1 1 2\n"); }) == Errc::InvalidArgument);
    CHECK(code_of([] { parse_matrix_text("size 3\ntriangle functional\n1 2 1\n"); }) == Errc::InvalidArgument);
    CHECK(code_of([] { parse_matrix_text("size 3\ntriangle upper\n1 2 1\n1 2 3\n"); }) == Errc::Parse);
    CHECK(code_of([] { parse_matrix_text("size 3\ntriangle upper\n1 2\n"); }) == Errc::Parse);
    CHECK(code_of([] { parse_matrix_text("size 3\ntriangle upper\n1 2 1/0\n"); }) == Errc::Parse);
    CHECK(code_of([] { parse_rational("1/0"); }) == Errc::DivisionByZero);
    CHECK(code_of([] { parse_matrix_text("size 4\ntriangle smatrix\n"); }) == Errc::Parse);
    CHECK(code_of([] { parse_matrix_text("window 3 1\ntriangle smatrix\n4 5 1\n"); }) == Errc::IndexOutOfWindow);

    try {
        read_matrix_file("/nonexistent/missing.mat");
        FAIL("expected Io");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::Io);
        CHECK(e.detail() == "cannot read matrix file");
        CHECK(e.is_input_error());
    }
}

TEST_CASE("matrix files round-trip", "[io]") {
    std::mt19937 rng(31);
    for (int rep = 0; rep < 30; ++rep) {
        IndexRange r{1, testsupport::small_int(rng, 2, 6)};
        QUnipotent u = testsupport::random_upper(rng, r);
        MatrixFile f = from_unipotent(u);
        std::string text = write_matrix_text(f);
        CHECK(parse_matrix_text(text) == f);
        CHECK(to_unipotent<Rational>(parse_matrix_text(text)) == u);
        CHECK(write_matrix_text(parse_matrix_text(text)) == text);
    }
    IndexWindow w{0, 7, 3};
    SymFunctional y = testsupport::symbolic_generic_y(w);
    MatrixFile fy = from_functional(y, w);
    CHECK(write_matrix_text(fy) ==
          "window 3 3\ntriangle functional\n4 3 y[4,3]\n5 2 y[5,2]\n6 1 y[6,1]\n7 0 y[7,0]\n");
    CHECK(to_functional<RatFun>(parse_matrix_text(write_matrix_text(fy))) == y);

    SMatrix<RatFun> s = s_matrix(IndexWindow{2, 5, 3}, symbolic_point(IndexWindow{2, 5, 3}),
                                 testsupport::symbolic_generic_y(IndexWindow{2, 5, 3}));
    MatrixFile fs = from_smatrix(s);
    CHECK(to_smatrix<RatFun>(parse_matrix_text(write_matrix_text(fs))) == s);

    // a lower triangle and a full matrix
    QUnipotent l = transpose(testsupport::random_upper(rng, {1, 4}));
    CHECK(to_unipotent<Rational>(parse_matrix_text(write_matrix_text(from_unipotent(l)))) == l);
    QMatrix a(IndexRange{1, 3}, IndexRange{1, 3});
    a(1, 1) = Rational(2);
    a(3, 2) = Rational(-5, 3);
    CHECK(to_matrix<Rational>(parse_matrix_text(write_matrix_text(from_matrix(a)))) == a);

    // ranges not starting at 1 need a centered header
    CHECK(code_of([] { from_unipotent(QUnipotent(IndexRange{0, 3}, Triangle::Upper)); }) == Errc::WindowMismatch);

    std::string path = temp_path("roundtrip.mat");
    write_text_file(path, write_matrix_text(fy));
    CHECK(read_matrix_file(path) == fy);
    std::remove(path.c_str());
}

TEST_CASE("weight tables and families", "[io]") {
    auto t = parse_weight_table("# weights\n1 2 3/4\n2 3 2   # note\n");
    CHECK(t.size() == 2);
    CHECK(t.at({1, 2}) == Rational(3, 4));
    CHECK(parse_weight_table(write_weight_table(t)) == t);
    CHECK(code_of([] { parse_weight_table("1 2\n"); }) == Errc::Parse);
    CHECK(code_of([] { parse_weight_table("1 2 x\n"); }) == Errc::Parse);
    CHECK(code_of([] { parse_weight_table("1 2 1\n1 2 1\n"); }) == Errc::Parse);

    CHECK(parse_family("geometric:2")(0, 3) == 8);
    CHECK(parse_family("gausslike:1/2")(0, 2) == Rational(1, 16));
    CHECK(parse_family("factorial")(0, 4) == 24);
    CHECK(parse_family("gausslike:4/2").name() == "gausslike:2");
    CHECK(code_of([] { parse_family("poisson:1"); }) == Errc::Parse);
    CHECK(code_of([] { parse_family("geometric:"); }) == Errc::Parse);
    CHECK(code_of([] { parse_family("geometric:-1"); }) == Errc::InvalidArgument);
    CHECK(code_of([] { parse_family("table:/nonexistent/w.txt"); }) == Errc::Io);

    std::string path = temp_path("weights.txt");
    write_text_file(path, "0 1 5\n");
    WeightFamily fam = parse_family("table:" + path);
    CHECK(fam(0, 1) == 5);
    CHECK(code_of([&] { fam(0, 2); }) == Errc::IndexOutOfWindow);
    std::remove(path.c_str());
}

TEST_CASE("generator tables and polynomial files round-trip", "[io]") {
    IndexWindow w{1, 6, 3};
    GeneratorTable gens = generators(w, testsupport::symbolic_generic_y(w), Drift::gaussian_symbolic());
    std::string text = write_generator_table(gens);
    CHECK(text.find("A[2,3] = ") != std::string::npos);
    CHECK(parse_generator_table(text) == gens);
    CHECK(write_generator_table(parse_generator_table(text)) == text);
    CHECK(code_of([] { parse_generator_table("B[1,2] = d[1,2]\n"); }) == Errc::Parse);

    std::string path = temp_path("f.poly");
    write_text_file(path, "# test function\nx[1,2]^2 +\n 3*x[4,5]\n");
    CHECK(read_poly_file(path) == testsupport::P("x[1,2]^2 + 3*x[4,5]"));
    std::remove(path.c_str());
}

TEST_CASE("machine records", "[io]") {
    MachineRecord r("verdict");
    r.field("state", "CONVERGES").field("depth", 12).field("sum", 0.5);
    CHECK(r.str() == "verdict\tstate=CONVERGES\tdepth=12\tsum=0.5");
    CHECK(write_diagonal_text<Rational>(IndexRange{2, 3}, {Rational(1, 2), Rational(-3)}) == "2 1/2\n3 -3\n");
}
