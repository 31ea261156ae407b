// orbita: command-line front end for the library.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "orbita/fixtures.hpp"
#include "orbita/gauss.hpp"
#include "orbita/io.hpp"
#include "orbita/repnum.hpp"

using namespace orbita;

namespace {

const char* const kMachineHelp = R"(Machine format (--format machine): one record per line, fields tab separated.
  matrix   name kind range [window]      header of a printed matrix
  entry    name k r value                one nonzero entry of that matrix
  diag     name k value                  diagonal factor entry
  invariant k value                      orbit invariant Delta_k
  value    name value                    a single symbolic value
  generator k r op                       generator A[k,r]
  subordinate ok [first second value]
  verify   ok checked [first second detail]
  verdict  criterion state sum depth [ratio] [term] [note]
  repsim   probe window samples seed estimate tolerance verdict [extra fields]
  fixture  name transcription golden [problem]
  wrote    path
Exit codes: 0 success or PASS, 1 computed FAIL, 2 usage or input error,
3 mathematical precondition error.)";

struct Globals {
    std::string format = "text";
    std::uint64_t seed = 1;
    int depth = 16;

    bool machine() const { return format == "machine"; }
};

Globals g;

// ---------------------------------------------------------------------------
// Output helpers

void emit_matrix(const std::string& name, const MatrixFile& f) {
    if (!g.machine()) {
        std::cout << "# " << name << "\n" << write_matrix_text(f);
        return;
    }
    MachineRecord head("matrix");
    head.field("name", name).field("kind", kind_name(f.kind)).field("range", to_string(f.range));
    if (f.window) head.field("window", to_string(*f.window));
    std::cout << head.str() << "\n";
    for (const auto& [kr, v] : f.entries)
        std::cout << MachineRecord("entry").field("name", name).field("k", kr.first).field("r", kr.second)
                         .field("value", value_text(v)).str()
                  << "\n";
}

void emit_diagonal(const std::string& name, IndexRange r, const std::vector<RatFun>& d) {
    if (!g.machine()) {
        std::cout << "# " << name << "\n" << write_diagonal_text(r, d);
        return;
    }
    for (std::size_t i = 0; i < d.size(); ++i)
        std::cout << MachineRecord("diag").field("name", name).field("k", r.lo + static_cast<int>(i))
                         .field("value", value_text(d[i])).str()
                  << "\n";
}

void emit_value(const std::string& name, const RatFun& v) {
    if (g.machine())
        std::cout << MachineRecord("value").field("name", name).field("value", value_text(v)).str() << "\n";
    else
        std::cout << name << " = " << render(v) << "\n";
}

void emit_generators(const GeneratorTable& gens) {
    if (!g.machine()) {
        std::cout << write_generator_table(gens);
        return;
    }
    for (const auto& [kr, op] : gens)
        std::cout << MachineRecord("generator").field("k", kr.first).field("r", kr.second).field("op", render(op)).str()
                  << "\n";
}

std::string fmt_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, g.machine() ? "%.17g" : "%.6e", v);
    return buf;
}

std::string join_doubles(const std::vector<double>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + fmt_double(v[i]);
    return out;
}

/// Fixed-field report block for repsim.
class Report {
public:
    void add(const std::string& key, const std::string& value) { fields_.emplace_back(key, value); }

    void print() const {
        if (g.machine()) {
            MachineRecord r("repsim");
            for (const auto& [k, v] : fields_) r.field(k, v);
            std::cout << r.str() << "\n";
            return;
        }
        for (const auto& [k, v] : fields_) std::printf("%-12s %s\n", k.c_str(), v.c_str());
    }

private:
    std::vector<std::pair<std::string, std::string>> fields_;
};

// ---------------------------------------------------------------------------
// Input helpers

MatrixFile load(const std::string& path) { return read_matrix_file(path); }

std::pair<int, int> parse_pair(const std::string& s, const char* what) {
    int a = 0, b = 0, used = 0;
    if (std::sscanf(s.c_str(), "%d,%d%n", &a, &b, &used) != 2 || used != static_cast<int>(s.size()))
        throw Error(Errc::InvalidArgument, std::string(what) + " must be two integers 'a,b', got '" + s + "'");
    return {a, b};
}

IndexWindow centered_window(int m, int n) { return IndexWindow::centered(m, n); }

/// Window of a file: its header, or range [1,n] split at `m`.
IndexWindow window_of(const MatrixFile& f, std::optional<int> m) {
    if (f.window) return *f.window;
    if (!m) throw Error(Errc::InvalidArgument, "file has no window header; pass --m");
    return IndexWindow{f.range.lo, f.range.hi, *m};
}

void require_range(const IndexWindow& w, IndexRange r, const std::string& what) {
    if (!(w.range() == r))
        throw Error(Errc::WindowMismatch, what + " is on " + to_string(r) + ", window is " + to_string(w));
}

SymFunctional symbolic_antidiagonal(const IndexWindow& w) {
    SymFunctional y(w.range());
    for (const auto& [k, r] : w.antidiagonal()) y.set(k, r, RatFun(Poly::var(yv(k, r))));
    return y;
}

SymFunctional load_y_or_symbolic(const std::string& path, const IndexWindow& w) {
    if (path.empty()) return symbolic_antidiagonal(w);
    SymFunctional y = to_functional<RatFun>(load(path));
    require_range(w, y.range(), "y");
    return y;
}

WeightFamily family_spec(const std::string& spec) {
    for (const char* prefix : {"geometric:", "gausslike:", "table:"})
        if (spec.rfind(prefix, 0) == 0) return parse_family(spec);
    if (spec == "factorial") return parse_family(spec);
    return parse_family("table:" + spec);
}

/// haar | gauss (symbolic b) | gauss:<family or weight file>
Drift drift_spec(const std::string& spec) {
    if (spec == "haar") return Drift::haar();
    if (spec == "gauss") return Drift::gaussian_symbolic();
    if (spec.rfind("gauss:", 0) == 0) {
        WeightFamily b = family_spec(spec.substr(6));
        return Drift::gaussian([b](int k, int r) { return b(k, r); });
    }
    throw Error(Errc::InvalidArgument, "measure must be haar, gauss or gauss:<weights>, got '" + spec + "'");
}

// ---------------------------------------------------------------------------
// Commands

int cmd_ldu(const std::string& path, bool udl_form, const std::string& out_dir) {
    MatrixFile f = load(path);
    SymMatrix c = to_matrix<RatFun>(f);
    MatrixFile first, last, diag_m;
    std::vector<RatFun> d;
    std::string first_name, last_name;
    if (udl_form) {
        UdlFactors<RatFun> u = udl(c);
        first = from_unipotent(SymUnipotent::from_matrix(u.U, Triangle::Upper), f.window);
        last = from_unipotent(SymUnipotent::from_matrix(u.L, Triangle::Lower), f.window);
        diag_m = from_matrix(u.diagonal(), f.window);
        d = u.D;
        first_name = "U";
        last_name = "L";
    } else {
        GaussFactors<RatFun> l = ldu(c);
        first = from_unipotent(SymUnipotent::from_matrix(l.L, Triangle::Lower), f.window);
        last = from_unipotent(SymUnipotent::from_matrix(l.U, Triangle::Upper), f.window);
        diag_m = from_matrix(l.diagonal(), f.window);
        d = l.D;
        first_name = "L";
        last_name = "U";
    }
    if (!out_dir.empty()) {
        std::filesystem::create_directories(out_dir);
        const std::filesystem::path dir(out_dir);
        const std::vector<std::pair<std::string, std::string>> files{
            {first_name + ".mat", write_matrix_text(first)},
            {"D.mat", write_matrix_text(diag_m)},
            {last_name + ".mat", write_matrix_text(last)},
            {"D.txt", write_diagonal_text(f.range, d)}};
        for (const auto& [name, text] : files) {
            write_text_file((dir / name).string(), text);
            if (g.machine())
                std::cout << MachineRecord("wrote").field("path", (dir / name).string()).str() << "\n";
            else
                std::cout << "wrote " << (dir / name).string() << "\n";
        }
        return 0;
    }
    emit_matrix(first_name, first);
    emit_diagonal("D", f.range, d);
    emit_matrix(last_name, last);
    return 0;
}

int cmd_inverse(const std::string& path) {
    MatrixFile f = load(path);
    emit_matrix("inverse", from_unipotent(invert_unipotent(to_unipotent<RatFun>(f)), f.window));
    return 0;
}

int cmd_triple(const std::string& path, std::optional<int> m) {
    MatrixFile f = load(path);
    IndexWindow w = window_of(f, m);
    TripleDecomposition<RatFun> t = triple_decompose(to_unipotent<RatFun>(f), w);
    emit_matrix("x_m", from_unipotent(t.x_m, f.window));
    emit_matrix("x_mid", from_unipotent(t.x_mid, f.window));
    emit_matrix("x_sup", from_unipotent(t.x_sup, f.window));
    emit_matrix("h", from_unipotent(t.h, f.window));
    return 0;
}

int cmd_invariants(const std::string& y_path) {
    SymFunctional y = to_functional<RatFun>(load(y_path));
    auto inv = orbit_invariants(y);
    for (std::size_t k = 0; k < inv.size(); ++k) {
        if (g.machine())
            std::cout << MachineRecord("invariant").field("k", k + 1).field("value", value_text(inv[k])).str() << "\n";
        else
            std::cout << "Delta[" << k + 1 << "] = " << render(inv[k]) << "\n";
    }
    return 0;
}

int cmd_coadjoint(const std::string& t_path, const std::string& y_path) {
    MatrixFile yf = load(y_path);
    SymFunctional y = to_functional<RatFun>(yf);
    SymUnipotent t = to_unipotent<RatFun>(load(t_path));
    emit_matrix("coadjoint", from_functional(coadjoint(t, y), yf.window));
    return 0;
}

Subalgebra<RatFun> load_basis(const std::string& dir, IndexRange r) {
    std::vector<std::filesystem::path> files;
    std::error_code ec;
    for (const auto& e : std::filesystem::directory_iterator(dir, ec))
        if (e.path().extension() == ".mat") files.push_back(e.path());
    if (ec) throw Error(Errc::Io, "cannot read basis directory " + dir);
    std::sort(files.begin(), files.end());
    if (files.empty()) throw Error(Errc::InvalidArgument, "no .mat files in " + dir);
    Subalgebra<RatFun> h{r, {}};
    for (const auto& p : files) {
        MatrixFile f = load(p.string());
        if (!(f.range == r)) throw Error(Errc::WindowMismatch, p.filename().string() + " is not on " + to_string(r));
        h.basis.push_back(SymAlgebraElement::from_matrix(to_matrix<RatFun>(f)));
    }
    return h;
}

int cmd_subordinate(const std::string& dir, const std::string& y_path) {
    SymFunctional y = to_functional<RatFun>(load(y_path));
    Subalgebra<RatFun> h = load_basis(dir, y.range());
    auto rep = is_subordinate(h, y);
    if (g.machine()) {
        MachineRecord r("subordinate");
        r.field("ok", rep.subordinate ? "yes" : "no");
        if (!rep.subordinate) r.field("first", rep.first).field("second", rep.second).field("value", value_text(rep.value));
        std::cout << r.str() << "\n";
    } else if (rep.subordinate) {
        std::cout << "subordinate: yes (" << h.basis.size() << " basis elements)\n";
    } else {
        std::cout << "subordinate: no, <y,[b" << rep.first << ",b" << rep.second << "]> = " << render(rep.value) << "\n";
    }
    return rep.subordinate ? 0 : 1;
}

int cmd_character(const std::string& y_path, const std::string& x_path, const std::string& basis_dir) {
    SymFunctional y = to_functional<RatFun>(load(y_path));
    MatrixFile xf = load(x_path);
    SymAlgebraElement x = SymAlgebraElement::from_matrix(to_matrix<RatFun>(xf));
    std::optional<Subalgebra<RatFun>> h;
    if (!basis_dir.empty()) h = load_basis(basis_dir, y.range());
    emit_value("character", character(y, x, h ? &*h : nullptr));
    return 0;
}

int cmd_smatrix(int m, int n, const std::string& x_path, const std::string& y_path) {
    IndexWindow w = centered_window(m, n);
    SymFunctional y = load_y_or_symbolic(y_path, w);
    SymCosetPoint x = symbolic_point(w);
    if (!x_path.empty()) {
        SymUnipotent g_x = to_unipotent<RatFun>(load(x_path));
        require_range(w, g_x.range(), "x");
        x = coset_of(g_x, w);
    }
    emit_matrix("S", from_smatrix(s_matrix(w, x, y)));
    return 0;
}

int cmd_generators(int m, int n, const std::string& y_path, const std::string& measure) {
    IndexWindow w = centered_window(m, n);
    emit_generators(generators(w, load_y_or_symbolic(y_path, w), drift_spec(measure)));
    return 0;
}

int cmd_reconstruct(const std::string& s_path, const std::string& y_path) {
    SMatrix<RatFun> s = to_smatrix<RatFun>(load(s_path));
    SymFunctional y = to_functional<RatFun>(load(y_path));
    SymCosetPoint x = reconstruct(s, y);
    emit_matrix("x", from_unipotent(detail::section(x), s.window));
    return 0;
}

int cmd_verify(int m, int n, const std::string& measure) {
    IndexWindow w = centered_window(m, n);
    BracketReport rep = verify_bracket_homomorphism(generators(w, symbolic_antidiagonal(w), drift_spec(measure)), w);
    if (g.machine()) {
        MachineRecord r("verify");
        r.field("ok", rep.ok ? "yes" : "no").field("checked", rep.checked);
        if (!rep.ok) r.field("detail", rep.detail);
        std::cout << r.str() << "\n";
    } else {
        std::cout << "bracket homomorphism on " << to_string(w) << ": " << (rep.ok ? "PASS" : "FAIL") << " ("
                  << rep.checked << " pairs checked)\n";
        if (!rep.ok) std::cout << rep.detail << "\n";
    }
    return rep.ok ? 0 : 1;
}

int cmd_measure(const std::string& criterion, const std::string& a_spec, const std::string& b_spec,
                const std::string& window, const std::string& growth, const std::string& expect) {
    WeightFamily b = family_spec(b_spec);
    auto [p, q] = parse_pair(window, "--window");
    Verdict v;
    if (criterion == "zeroone") {
        if (a_spec.empty()) throw Error(Errc::InvalidArgument, "zeroone needs --a");
        if (growth != "row" && growth != "window")
            throw Error(Errc::InvalidArgument, "--growth must be row or window");
        v = concentration_check(family_spec(a_spec), b, growth == "row" ? Growth::Row : Growth::Window, g.depth, p);
    } else if (criterion == "quasi") {
        v = quasi_invariance_check(b, p, q, g.depth);
    } else if (criterion == "ergodic") {
        v = ergodicity_check(b, p, g.depth);
    } else {
        throw Error(Errc::InvalidArgument, "criterion must be zeroone, quasi or ergodic");
    }
    if (g.machine()) {
        MachineRecord r("verdict");
        r.field("criterion", criterion).field("state", state_name(v.state)).field("sum", decimal(v.partial_sum))
            .field("depth", v.depth);
        if (v.ratio_bound) r.field("ratio", decimal(*v.ratio_bound));
        if (v.term_bound) r.field("term", decimal(*v.term_bound));
        if (!v.note.empty()) r.field("note", v.note);
        std::cout << r.str() << "\n";
    } else {
        std::cout << to_string(v) << "\n";
    }
    if (expect.empty()) return 0;
    std::string want = expect;
    for (auto& ch : want) ch = static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
    return want == state_name(v.state) ? 0 : 1;
}

struct RepsimArgs {
    std::string probe;
    int m = 0, n = 1;
    std::string y_path, b_spec = "geometric:1", t_path, t2_path, f_path, pair, radii;
    std::size_t samples = 10000;
    std::vector<double> eps{1e-2, 1e-3};
};

QUnipotent restrict_to(const QUnipotent& t, const IndexWindow& w) {
    QUnipotent out(w.range(), Triangle::Upper);
    for (const auto& [k, r] : w.all_pairs())
        if (t.range().contains(k) && t.range().contains(r) && sgn(t(k, r))) out.set(k, r, t(k, r));
    for (int k = t.range().lo; k <= t.range().hi; ++k)
        for (int r = k + 1; r <= t.range().hi; ++r)
            if (sgn(t(k, r)) && !(w.range().contains(k) && w.range().contains(r)))
                throw Error(Errc::WindowMismatch, "t has entries outside " + to_string(w));
    return out;
}

int cmd_repsim(const RepsimArgs& a) {
    const IndexWindow w = centered_window(a.m, a.n);
    if (a.y_path.empty()) throw Error(Errc::InvalidArgument, "repsim needs --y");
    QFunctional y = to_functional<Rational>(load(a.y_path));
    WeightFamily b = family_spec(a.b_spec);
    Poly f = a.f_path.empty() ? Poly(1L) : read_poly_file(a.f_path);
    auto load_t = [&](const std::string& path, const char* flag) {
        if (path.empty()) throw Error(Errc::InvalidArgument, std::string("probe ") + a.probe + " needs " + flag);
        return to_unipotent<Rational>(load(path));
    };

    Report rep;
    rep.add("probe", a.probe);
    rep.add("window", to_string(w));
    rep.add("samples", std::to_string(a.samples));
    rep.add("seed", std::to_string(g.seed));
    bool pass = false;

    if (a.probe == "convergence") {
        std::vector<int> radii;
        if (a.radii.empty()) {
            for (int r = 1; r <= a.n; ++r) radii.push_back(r);
        } else {
            std::stringstream ss(a.radii);
            for (std::string item; std::getline(ss, item, ',');) radii.push_back(detail::parse_int(item, "radius"));
        }
        QUnipotent t_full = load_t(a.t_path, "--t");
        TruncationSetup s;
        s.m = a.m;
        s.y = [&](int j) {
            const int k = a.m + 1 + j, r = a.m - j;
            if (!y.range().contains(k) || !y.range().contains(r))
                throw Error(Errc::IndexOutOfWindow, "y has no entry at (" + std::to_string(k) + "," + std::to_string(r) + ")");
            return y(k, r);
        };
        s.b = b;
        s.t = [&](const IndexWindow& win) { return restrict_to(t_full, win); };
        s.f = f;
        TruncationReport tr = truncation_convergence_probe(s, radii, a.samples, g.seed);
        std::string rs;
        for (std::size_t i = 0; i < tr.radii.size(); ++i) rs += (i ? "," : "") + std::to_string(tr.radii[i]);
        rep.add("radii", rs);
        rep.add("estimate", join_doubles(tr.differences));
        rep.add("tolerance", "nonincreasing");
        rep.add("all_zero", tr.all_zero ? "yes" : "no");
        pass = tr.decaying;
    } else {
        require_range(w, y.range(), "y");
        RepContext c{w, y, GaussianMeasure{w, b}};
        TestFunction fn = polynomial_function(w, f);
        if (a.probe == "unitarity") {
            UnitarityReport u = unitarity_probe(c, load_t(a.t_path, "--t"), fn, a.samples, g.seed);
            rep.add("estimate", fmt_double(u.abs_err));
            rep.add("tolerance", fmt_double(u.tol));
            rep.add("lhs", fmt_double(u.lhs));
            rep.add("rhs", fmt_double(u.rhs));
            pass = u.pass;
        } else if (a.probe == "homomorphism") {
            QUnipotent t1 = load_t(a.t_path, "--t"), t2 = load_t(a.t2_path, "--t2");
            HomomorphismReport h = homomorphism_probe(c, t1, t2, fn, sample_points(c, a.samples, g.seed));
            rep.add("estimate", fmt_double(h.max_dev));
            rep.add("tolerance", fmt_double(homomorphism_tolerance));
            pass = h.pass;
        } else if (a.probe == "generator") {
            if (a.pair.empty()) throw Error(Errc::InvalidArgument, "probe generator needs --pair k,r");
            auto [k, r] = parse_pair(a.pair, "--pair");
            SymFunctional ys(w.range());
            for (const auto& [i, j] : w.antidiagonal()) ys.set(i, j, RatFun(y(i, j)));
            GeneratorTable gens = generators(w, ys, Drift::gaussian([b](int i, int j) { return b(i, j); }));
            auto it = gens.find({k, r});
            if (it == gens.end()) throw Error(Errc::IndexOutOfWindow, "no generator at " + a.pair);
            FdReport fd = generator_fd_probe(c, it->second, k, r, f, a.eps, sample_points(c, a.samples, g.seed));
            rep.add("pair", a.pair);
            rep.add("eps", join_doubles(fd.eps));
            rep.add("errors", join_doubles(fd.errors));
            rep.add("estimate", join_doubles(fd.ratios));
            rep.add("tolerance", "eps ratio squared +-20%");
            pass = fd.pass;
        } else {
            throw Error(Errc::InvalidArgument, "probe must be unitarity, homomorphism, generator or convergence");
        }
    }
    rep.add("verdict", pass ? "PASS" : "FAIL");
    rep.print();
    return pass ? 0 : 1;
}

int cmd_fixtures_check(const std::string& dir) {
    bool all = true;
    for (const auto& c : check_fixtures(dir)) {
        all = all && c.ok();
        if (g.machine()) {
            MachineRecord r("fixture");
            r.field("name", c.name).field("transcription", c.transcription_ok ? "ok" : "FAIL")
                .field("golden", c.golden_ok ? "ok" : "FAIL");
            if (!c.problems.empty()) r.field("problem", c.problems.front());
            std::cout << r.str() << "\n";
        } else {
            std::cout << (c.ok() ? "ok   " : "FAIL ") << c.name << "\n";
            for (const auto& p : c.problems) std::cout << "     " << p << "\n";
        }
    }
    return all ? 0 : 1;
}

int cmd_fixtures_dump(const std::string& dir) {
    for (const auto& path : dump_fixtures(dir)) {
        if (g.machine())
            std::cout << MachineRecord("wrote").field("path", path).str() << "\n";
        else
            std::cout << "wrote " << path << "\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Orbit-method computations for unipotent groups"};
    app.footer(kMachineHelp);
    app.require_subcommand(1);
    app.fallthrough();
    app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"text", "machine"}));
    app.add_option("--seed", g.seed, "Random seed for sampling");
    app.add_option("--depth", g.depth, "Series depth for measure verdicts")->check(CLI::NonNegativeNumber);

    int result = 0;
    std::optional<int> opt_m;
    int m = 0, n = 1;
    std::string path, path2, dir, out_dir, x_path, y_path, s_path, measure = "haar";
    bool udl_form = false;

    auto* ldu_cmd = app.add_subcommand("ldu", "L D U factors of a square matrix (UDL with --udl)");
    ldu_cmd->add_option("file", path, "Matrix file")->required();
    ldu_cmd->add_flag("--udl", udl_form, "Factor as U D L instead");
    ldu_cmd->add_option("--out-dir", out_dir, "Write the factor files into this directory");
    ldu_cmd->callback([&] { result = cmd_ldu(path, udl_form, out_dir); });

    auto* inv_cmd = app.add_subcommand("inverse", "Inverse of a unipotent matrix");
    inv_cmd->add_option("file", path, "Unipotent matrix file")->required();
    inv_cmd->callback([&] { result = cmd_inverse(path); });

    auto* triple_cmd = app.add_subcommand("triple", "x = x_m x(m) x^(m) split of an upper matrix");
    triple_cmd->add_option("file", path, "Upper unipotent matrix file")->required();
    triple_cmd->add_option("--m", opt_m, "Split index when the file has no window header");
    triple_cmd->callback([&] { result = cmd_triple(path, opt_m); });

    auto* orbit_cmd = app.add_subcommand("orbit", "Coadjoint orbit computations");
    orbit_cmd->require_subcommand(1);
    auto* inv_sub = orbit_cmd->add_subcommand("invariants", "Corner minors Delta_k of y");
    inv_sub->add_option("y", y_path, "Functional file")->required();
    inv_sub->callback([&] { result = cmd_invariants(y_path); });
    auto* co_sub = orbit_cmd->add_subcommand("coadjoint", "(t^-1 y t) restricted to the strictly lower part");
    co_sub->add_option("t", path, "Unipotent matrix file")->required();
    co_sub->add_option("y", y_path, "Functional file")->required();
    co_sub->callback([&] { result = cmd_coadjoint(path, y_path); });
    auto* sub_sub = orbit_cmd->add_subcommand("subordinate", "Is y zero on [h,h] for the basis in a directory");
    sub_sub->add_option("basis-dir", dir, "Directory of .mat basis elements")->required();
    sub_sub->add_option("y", y_path, "Functional file")->required();
    sub_sub->callback([&] { result = cmd_subordinate(dir, y_path); });
    auto* ch_sub = orbit_cmd->add_subcommand("character", "Exponent tau*<y,x> of the character");
    ch_sub->add_option("y", y_path, "Functional file")->required();
    ch_sub->add_option("x", path, "Algebra element file (triangle full)")->required();
    ch_sub->add_option("--basis-dir", dir, "Check subordination to this subalgebra first");
    ch_sub->callback([&] { result = cmd_character(y_path, path, dir); });

    auto* induced_cmd = app.add_subcommand("induced", "Induced representations");
    induced_cmd->require_subcommand(1);
    auto window_opts = [&](CLI::App* c) {
        c->add_option("--m", m, "Split index")->required();
        c->add_option("--n", n, "Window radius, window is [m-n, m+n+1]")->required()->check(CLI::NonNegativeNumber);
    };
    auto* sm_sub = induced_cmd->add_subcommand("smatrix", "S(x,y); symbolic x and y unless given");
    window_opts(sm_sub);
    sm_sub->add_option("--x", x_path, "Upper unipotent representative of the point x");
    sm_sub->add_option("--y", y_path, "Functional file");
    sm_sub->callback([&] { result = cmd_smatrix(m, n, x_path, y_path); });
    auto* gen_sub = induced_cmd->add_subcommand("generators", "Generators A[k,r] as differential operators");
    window_opts(gen_sub);
    gen_sub->add_option("--y", y_path, "Functional file (symbolic anti-diagonal if omitted)");
    gen_sub->add_option("--measure", measure, "haar, gauss or gauss:<weights>");
    gen_sub->callback([&] { result = cmd_generators(m, n, y_path, measure); });
    auto* rec_sub = induced_cmd->add_subcommand("reconstruct", "Recover x from S(x,y) and y");
    rec_sub->add_option("--s", s_path, "S matrix file")->required();
    rec_sub->add_option("--y", y_path, "Functional file")->required();
    rec_sub->callback([&] { result = cmd_reconstruct(s_path, y_path); });
    auto* ver_sub = induced_cmd->add_subcommand("verify", "Check the generators satisfy the bracket relations");
    window_opts(ver_sub);
    ver_sub->add_option("--measure", measure, "haar, gauss or gauss:<weights>");
    ver_sub->callback([&] { result = cmd_verify(m, n, measure); });

    std::string criterion, a_spec, b_spec, window = "0,1", growth = "row", expect;
    auto* measure_cmd = app.add_subcommand("measure", "Gaussian measure criteria");
    measure_cmd->require_subcommand(1);
    auto* check_sub = measure_cmd->add_subcommand("check", "Adjudicate a series criterion");
    check_sub->add_option("--criterion", criterion, "zeroone, quasi or ergodic")
        ->required()
        ->check(CLI::IsMember({"zeroone", "quasi", "ergodic"}));
    check_sub->add_option("--a", a_spec, "Weights a (zeroone only)");
    check_sub->add_option("--b", b_spec, "Weights b")->required();
    check_sub->add_option("--window", window, "zeroone: base index m; quasi: pair k,n; ergodic: split m (as m,_)");
    check_sub->add_option("--growth", growth, "zeroone index growth: row or window");
    check_sub->add_option("--expect", expect, "Exit 1 unless the verdict is this state");
    check_sub->callback([&] { result = cmd_measure(criterion, a_spec, b_spec, window, growth, expect); });

    RepsimArgs ra;
    auto* rep_cmd = app.add_subcommand("repsim", "Monte-Carlo probes of the induced representation");
    rep_cmd->add_option("--probe", ra.probe, "unitarity, homomorphism, generator or convergence")
        ->required()
        ->check(CLI::IsMember({"unitarity", "homomorphism", "generator", "convergence"}));
    rep_cmd->add_option("--m", ra.m, "Split index")->required();
    rep_cmd->add_option("--n", ra.n, "Window radius")->required()->check(CLI::NonNegativeNumber);
    rep_cmd->add_option("--y", ra.y_path, "Functional file")->required();
    rep_cmd->add_option("--b", ra.b_spec, "Gaussian weights b");
    rep_cmd->add_option("--t", ra.t_path, "Group element t");
    rep_cmd->add_option("--t2", ra.t2_path, "Second group element (homomorphism)");
    rep_cmd->add_option("--f", ra.f_path, "Polynomial test function file (default 1)");
    rep_cmd->add_option("--samples", ra.samples, "Sample count")->check(CLI::PositiveNumber);
    rep_cmd->add_option("--pair", ra.pair, "Generator pair k,r (generator probe)");
    rep_cmd->add_option("--eps", ra.eps, "Finite-difference steps (generator probe)");
    rep_cmd->add_option("--radii", ra.radii, "Comma separated radii (convergence probe, default 1..n)");
    rep_cmd->callback([&] { result = cmd_repsim(ra); });

    std::string fixture_dir = "fixtures";
    auto* fx_cmd = app.add_subcommand("fixtures", "Golden fixtures of the worked examples");
    fx_cmd->require_subcommand(1);
    auto* fx_check = fx_cmd->add_subcommand("check", "Compare engine, transcriptions and golden files");
    fx_check->add_option("--dir", fixture_dir, "Golden file directory");
    fx_check->callback([&] { result = cmd_fixtures_check(fixture_dir); });
    auto* fx_dump = fx_cmd->add_subcommand("dump", "Regenerate the golden files");
    fx_dump->add_option("--dir", fixture_dir, "Golden file directory");
    fx_dump->callback([&] { result = cmd_fixtures_dump(fixture_dir); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const Error& e) {
        std::cout.flush();
        std::cerr << "error: " << (e.code() == Errc::Io ? e.detail() : std::string(e.what())) << "\n";
        return e.is_input_error() ? 2 : 3;
    } catch (const std::exception& e) {
        std::cout.flush();
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    std::cout.flush();
    return result;
}
