#pragma once

// Golden fixtures: engine output for the worked examples (S matrices of
// B(4), B(5), B(6), B(8), the Heisenberg group, generator tables) next to
// hand transcriptions of the same displays. `check` compares the two
// symbolically and compares the stored golden files byte for byte.

#include <filesystem>
#include <functional>
#include <string>
#include <variant>
#include <vector>

#include "orbita/io.hpp"

namespace orbita {

using FixtureValue = std::variant<RatFun, DiffOp>;

struct FixtureItem {
    std::string key;
    FixtureValue value;
};

struct Fixture {
    std::string name;  // golden file is <name>.txt
    std::string title;
    std::vector<FixtureItem> computed;
    std::vector<FixtureItem> transcribed;
};

inline std::string render(const FixtureValue& v) {
    return std::visit([](const auto& x) { return render(x); }, v);
}

inline bool operator==(const FixtureValue& a, const FixtureValue& b) {
    if (a.index() != b.index()) return false;
    if (const auto* r = std::get_if<RatFun>(&a)) return *r == std::get<RatFun>(b);
    return std::get<DiffOp>(a) == std::get<DiffOp>(b);
}

namespace fixture_detail {

inline RatFun X(int k, int r) { return RatFun(Poly::var(xv(k, r))); }
inline RatFun Y(int k, int r) { return RatFun(Poly::var(yv(k, r))); }
inline RatFun T(int k, int r) { return RatFun(Poly::var(tv(k, r))); }
inline RatFun tau() { return RatFun(Poly::tau()); }

/// Entry (k,n) of x^{-1} for the upper unipotent x of symbols x[.,.] by the
/// chain expansion: the sum over k = i0 < i1 < ... < iL = n of
/// (-1)^L x[i0,i1] ... x[i(L-1),iL].
inline RatFun XI(int k, int n) {
    if (k == n) return RatFun(Poly(1L));
    RatFun sum = -X(k, n);
    for (int i = k + 1; i < n; ++i) sum = sum - X(k, i) * XI(i, n);
    return sum;
}

inline DiffOp D(int k, int r) { return DiffOp::derivative(xv(k, r)); }
inline DiffOp Dmu(int k, int r) {
    return D(k, r) + DiffOp::multiplication(-(Poly::var(bv(k, r)) * Poly::var(xv(k, r))));
}
inline DiffOp times(const RatFun& c, const DiffOp& d) { return c.num() * d; }
inline DiffOp mult(const RatFun& c) { return DiffOp::multiplication(c.num()); }

inline std::string key(const char* what, int k, int r) {
    return std::string(what) + "[" + std::to_string(k) + "," + std::to_string(r) + "]";
}

inline std::vector<FixtureItem> s_items(const SMatrix<RatFun>& s) {
    std::vector<FixtureItem> out;
    for (const auto& [k, r] : s.window.corner_pairs()) out.push_back({key("S", k, r), s(k, r)});
    return out;
}

inline std::vector<FixtureItem> generator_items(const GeneratorTable& g) {
    std::vector<FixtureItem> out;
    for (const auto& [kr, op] : g) out.push_back({key("A", kr.first, kr.second), op});
    return out;
}

inline SymFunctional antidiagonal_y(const IndexWindow& w) {
    SymFunctional y(w.range());
    for (const auto& [r, k] : w.antidiagonal()) y.set(r, k, Y(r, k));
    return y;
}

inline SMatrix<RatFun> engine_s(const IndexWindow& w) { return s_matrix(w, symbolic_point(w), antidiagonal_y(w)); }

// Transcribed S matrices, one row of the display per line.

inline std::vector<FixtureItem> transcribed_s_b4() {
    return {{"S[2,4]", XI(4, 5) * Y(5, 2)},
            {"S[2,5]", Y(5, 2)},
            {"S[3,4]", Y(4, 3) + XI(4, 5) * Y(5, 2) * X(2, 3)},
            {"S[3,5]", Y(5, 2) * X(2, 3)}};
}

inline std::vector<FixtureItem> transcribed_s_b5() {
    return {{"S[1,4]", XI(4, 5) * Y(5, 1)},
            {"S[1,5]", Y(5, 1)},
            {"S[2,4]", Y(4, 2) + XI(4, 5) * Y(5, 1) * X(1, 2)},
            {"S[2,5]", Y(5, 1) * X(1, 2)},
            {"S[3,4]", Y(4, 2) * X(2, 3) + XI(4, 5) * Y(5, 1) * X(1, 3)},
            {"S[3,5]", Y(5, 1) * X(1, 3)}};
}

inline std::vector<FixtureItem> transcribed_s_b6() {
    return {{"S[1,4]", XI(4, 6) * Y(6, 1)},
            {"S[1,5]", XI(5, 6) * Y(6, 1)},
            {"S[1,6]", Y(6, 1)},
            {"S[2,4]", XI(4, 5) * Y(5, 2) + XI(4, 6) * Y(6, 1) * X(1, 2)},
            {"S[2,5]", Y(5, 2) + XI(5, 6) * Y(6, 1) * X(1, 2)},
            {"S[2,6]", Y(6, 1) * X(1, 2)},
            {"S[3,4]", Y(4, 3) + XI(4, 5) * Y(5, 2) * X(2, 3) + XI(4, 6) * Y(6, 1) * X(1, 3)},
            {"S[3,5]", Y(5, 2) * X(2, 3) + XI(5, 6) * Y(6, 1) * X(1, 3)},
            {"S[3,6]", Y(6, 1) * X(1, 3)}};
}

/// S = (x^(m))^T y^T (x_m^{-1})^T on [0,7] split at 3, multiplied out from
/// the three displayed factors.
inline std::vector<FixtureItem> transcribed_s_b8() {
    auto lower = [](int i, int j) {  // (x^(m))^T, indices 0..3
        if (i == j) return RatFun(Poly(1L));
        return i > j ? X(j, i) : RatFun();
    };
    auto middle = [](int i, int j) {  // y^T: row 0 holds y70, ..., row 3 holds y43
        return i + j == 7 ? Y(j, i) : RatFun();
    };
    auto right = [](int i, int j) {  // (x_m^{-1})^T, indices 4..7
        if (i == j) return RatFun(Poly(1L));
        return i > j ? XI(j, i) : RatFun();
    };
    std::vector<FixtureItem> out;
    for (int k = 0; k <= 3; ++k)
        for (int r = 4; r <= 7; ++r) {
            RatFun sum;
            for (int i = 0; i <= 3; ++i)
                for (int j = 4; j <= 7; ++j) sum = sum + lower(k, i) * middle(i, j) * right(j, r);
            out.push_back({key("S", k, r), sum});
        }
    return out;
}

inline std::vector<FixtureItem> transcribed_generators_b5() {
    std::vector<FixtureItem> out{{"A[1,2]", D(1, 2)},
                                 {"A[1,3]", D(1, 3)},
                                 {"A[2,3]", times(X(1, 2), D(1, 3)) + D(2, 3)},
                                 {"A[4,5]", D(4, 5)}};
    for (const auto& s : transcribed_s_b5()) out.push_back({"A" + s.key.substr(1), mult(tau() * std::get<RatFun>(s.value))});
    return out;
}

inline std::vector<FixtureItem> transcribed_generators_b6(bool gaussian) {
    auto d = [gaussian](int k, int r) { return gaussian ? Dmu(k, r) : D(k, r); };
    std::vector<FixtureItem> out{{"A[1,2]", d(1, 2)},
                                 {"A[1,3]", d(1, 3)},
                                 {"A[2,3]", times(X(1, 2), d(1, 3)) + d(2, 3)},
                                 {"A[4,5]", d(4, 5)},
                                 {"A[4,6]", d(4, 6)},
                                 {"A[5,6]", times(X(4, 5), d(4, 6)) + d(5, 6)}};
    for (const auto& s : transcribed_s_b6()) out.push_back({"A" + s.key.substr(1), mult(tau() * std::get<RatFun>(s.value))});
    return out;
}

inline SymUnipotent generic_t(IndexRange r) {
    SymUnipotent t(r, Triangle::Upper);
    for (int k = r.lo; k <= r.hi; ++k)
        for (int c = k + 1; c <= r.hi; ++c) t.set(k, c, T(k, c));
    return t;
}

}  // namespace fixture_detail

inline std::vector<Fixture> golden_fixtures() {
    using namespace fixture_detail;
    std::vector<Fixture> out;

    out.push_back({"s_b4", "S for B(4) on [2,5] split at 3", s_items(engine_s({2, 5, 3})), transcribed_s_b4()});
    out.push_back({"s_b5", "S for B(5) on [1,5] split at 3", s_items(engine_s({1, 5, 3})), transcribed_s_b5()});
    out.push_back({"s_b6", "S for B(6) on [1,6] split at 3", s_items(engine_s({1, 6, 3})), transcribed_s_b6()});
    out.push_back({"s_b8", "S for the window [0,7] split at 3", s_items(engine_s({0, 7, 3})), transcribed_s_b8()});

    {
        IndexRange r{1, 3};
        SymFunctional y(r);
        y.set(2, 1, Y(2, 1));
        y.set(3, 1, Y(3, 1));
        y.set(3, 2, Y(3, 2));
        SymFunctional c = coadjoint(generic_t(r), y);
        out.push_back({"heisenberg_coadjoint",
                       "coadjoint action (t^-1 y t)_- on the Heisenberg group",
                       {{"Ad[2,1]", c(2, 1)}, {"Ad[3,1]", c(3, 1)}, {"Ad[3,2]", c(3, 2)}},
                       {{"Ad[2,1]", Y(2, 1) - T(2, 3) * Y(3, 1)},
                        {"Ad[3,1]", Y(3, 1)},
                        {"Ad[3,2]", Y(3, 1) * T(1, 2) + Y(3, 2)}}});
    }
    {
        IndexWindow w{1, 3, 2};
        SymFunctional y(w.range());
        y.set(3, 1, Y(3, 1));
        auto c = cocycle(w, symbolic_point(w), generic_t(w.range()));
        auto h = SymAlgebraElement::from_matrix(sub(c.h.matrix(), SymMatrix::identity(w.range())));
        out.push_back({"heisenberg_representation",
                       "induced from H1 = {(1,3),(2,3)} at y = y31 E31: cocycle, character and shift",
                       {{"h[1,3]", c.h(1, 3)},
                        {"h[2,3]", c.h(2, 3)},
                        {"character", tau() * pairing(y, h)},
                        {"xt[1,2]", c.xt.x_sup(1, 2)}},
                       {{"h[1,3]", T(1, 3) + X(1, 2) * T(2, 3)},
                        {"h[2,3]", T(2, 3)},
                        {"character", tau() * (T(1, 3) + T(2, 3) * X(1, 2)) * Y(3, 1)},
                        {"xt[1,2]", X(1, 2) + T(1, 2)}}});
    }
    {
        IndexWindow w{1, 5, 3};
        SymFunctional y(w.range());
        y.set(5, 1, Y(5, 1));
        y.set(4, 2, Y(4, 2));
        out.push_back({"generators_b5", "generators of B(5) split at 3, Haar measure",
                       generator_items(generators(w, y)), transcribed_generators_b5()});
    }
    {
        IndexWindow w{1, 6, 3};
        out.push_back({"generators_b6", "generators of B(6) split at 3, Haar measure",
                       generator_items(generators(w, antidiagonal_y(w))), transcribed_generators_b6(false)});
        out.push_back({"generators_b6_gaussian", "generators of B(6) split at 3, drift d - b x",
                       generator_items(generators(w, antidiagonal_y(w), Drift::gaussian_symbolic())),
                       transcribed_generators_b6(true)});
    }
    return out;
}

inline std::string fixture_text(const Fixture& f) {
    std::string out = "# " + f.title + "\n";
    for (const auto& item : f.computed) out += item.key + " = " + render(item.value) + "\n";
    return out;
}

struct FixtureCheck {
    std::string name;
    bool transcription_ok = true;
    bool golden_ok = true;
    std::vector<std::string> problems;

    bool ok() const { return transcription_ok && golden_ok; }
};

/// Engine against transcription, then the golden file against the engine.
inline FixtureCheck check_fixture(const Fixture& f, const std::filesystem::path& dir) {
    FixtureCheck c{f.name};
    if (f.computed.size() != f.transcribed.size()) {
        c.transcription_ok = false;
        c.problems.push_back("engine has " + std::to_string(f.computed.size()) + " entries, transcription has " +
                             std::to_string(f.transcribed.size()));
    }
    for (const auto& t : f.transcribed) {
        auto it = std::find_if(f.computed.begin(), f.computed.end(), [&](const auto& e) { return e.key == t.key; });
        if (it == f.computed.end()) {
            c.transcription_ok = false;
            c.problems.push_back(t.key + " missing from engine output");
        } else if (!(it->value == t.value)) {
            c.transcription_ok = false;
            c.problems.push_back(t.key + ": engine " + render(it->value) + ", transcription " + render(t.value));
        }
    }

    const auto path = dir / (f.name + ".txt");
    std::string stored;
    try {
        stored = detail::read_text(path.string(), "golden file");
    } catch (const Error&) {
        c.golden_ok = false;
        c.problems.push_back("cannot read " + path.string());
        return c;
    }
    if (stored != fixture_text(f)) {
        c.golden_ok = false;
        c.problems.push_back(path.string() + " differs from the engine output");
    }
    // the stored text re-parses to the engine values
    for (const auto& line : detail::content_lines(stored)) {
        auto eq = line.find(" = ");
        if (eq == std::string::npos) {
            c.golden_ok = false;
            c.problems.push_back("malformed golden line '" + line + "'");
            continue;
        }
        const std::string k = line.substr(0, eq), v = line.substr(eq + 3);
        auto it = std::find_if(f.computed.begin(), f.computed.end(), [&](const auto& e) { return e.key == k; });
        if (it == f.computed.end()) continue;
        FixtureValue parsed = std::holds_alternative<RatFun>(it->value) ? FixtureValue(parse_ratfun(v))
                                                                         : FixtureValue(parse_diffop(v));
        if (!(parsed == it->value)) {
            c.golden_ok = false;
            c.problems.push_back(k + " in " + path.string() + " does not re-parse to the engine value");
        }
    }
    return c;
}

inline std::vector<FixtureCheck> check_fixtures(const std::filesystem::path& dir) {
    std::vector<FixtureCheck> out;
    for (const auto& f : golden_fixtures()) out.push_back(check_fixture(f, dir));
    return out;
}

inline std::vector<std::string> dump_fixtures(const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    std::vector<std::string> written;
    for (const auto& f : golden_fixtures()) {
        const auto path = dir / (f.name + ".txt");
        write_text_file(path.string(), fixture_text(f));
        written.push_back(path.string());
    }
    return written;
}

}  // namespace orbita
