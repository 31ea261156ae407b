#pragma once

// Text formats: matrix files, weight tables, weight-family specs, polynomial
// files, generator tables and machine-format records.
//
// Matrix file:
//   window <m> <n>        (centered window [m-n, m+n+1] split at m)  or  size <n>  (range [1,n])
//   triangle upper|lower|functional|full|smatrix
//   <k> <r> <value>       one line per entry; value is p/q or a polynomial
// '#' starts a comment. Unlisted entries are 0 off the diagonal and 1 on the
// diagonal of unipotent matrices.

#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "orbita/induced.hpp"
#include "orbita/measure.hpp"

namespace orbita {

enum class FileKind { Upper, Lower, Functional, Full, SMatrix };

inline const char* kind_name(FileKind k) {
    switch (k) {
    case FileKind::Upper: return "upper";
    case FileKind::Lower: return "lower";
    case FileKind::Functional: return "functional";
    case FileKind::Full: return "full";
    case FileKind::SMatrix: return "smatrix";
    }
    return "?";
}

struct MatrixFile {
    IndexRange range;
    std::optional<IndexWindow> window;  // set by a `window` header
    FileKind kind = FileKind::Full;
    std::map<std::pair<int, int>, RatFun> entries;

    friend bool operator==(const MatrixFile& a, const MatrixFile& b) {
        return a.range == b.range && a.window == b.window && a.kind == b.kind && a.entries == b.entries;
    }
};

namespace detail {

inline std::string strip_comment(std::string line) {
    if (auto p = line.find('#'); p != std::string::npos) line.erase(p);
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) return {};
    auto last = line.find_last_not_of(" \t\r");
    return line.substr(first, last - first + 1);
}

inline std::vector<std::string> content_lines(std::string_view text) {
    std::vector<std::string> out;
    std::istringstream in{std::string(text)};
    std::string line;
    while (std::getline(in, line))
        if (auto s = strip_comment(line); !s.empty()) out.push_back(s);
    return out;
}

inline int parse_int(const std::string& s, const std::string& what) {
    std::size_t used = 0;
    int v = 0;
    try {
        v = std::stoi(s, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != s.size() || s.empty()) throw Error(Errc::Parse, what + " is not an integer: '" + s + "'");
    return v;
}

inline std::string read_text(const std::string& path, const std::string& what) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(Errc::Io, "cannot read " + what + " " + path);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

}  // namespace detail

inline Rational parse_rational(const std::string& s) {
    Rational q;
    if (s.empty() || q.set_str(s, 10) != 0) throw Error(Errc::Parse, "not a rational number: '" + s + "'");
    if (q.get_den() == 0) throw Error(Errc::DivisionByZero, "zero denominator in '" + s + "'");
    q.canonicalize();
    return q;
}

inline MatrixFile parse_matrix_text(std::string_view text) {
    auto lines = detail::content_lines(text);
    if (lines.size() < 2) throw Error(Errc::Parse, "matrix file needs a window line and a triangle line");
    MatrixFile f;
    {
        std::istringstream h(lines[0]);
        std::string word, a, b, extra;
        h >> word >> a >> b >> extra;
        if (word == "window" && !b.empty() && extra.empty()) {
            f.window = IndexWindow::centered(detail::parse_int(a, "m"), detail::parse_int(b, "n"));
            f.range = f.window->range();
        } else if (word == "size" && !a.empty() && b.empty()) {
            int n = detail::parse_int(a, "size");
            if (n < 1) throw Error(Errc::Parse, "size must be positive");
            f.range = IndexRange{1, n};
        } else {
            throw Error(Errc::Parse, "expected 'window <m> <n>' or 'size <n>', got '" + lines[0] + "'");
        }
    }
    {
        std::istringstream t(lines[1]);
        std::string word, kind, extra;
        t >> word >> kind >> extra;
        static const std::map<std::string, FileKind> kinds{{"upper", FileKind::Upper},
                                                           {"lower", FileKind::Lower},
                                                           {"functional", FileKind::Functional},
                                                           {"full", FileKind::Full},
                                                           {"smatrix", FileKind::SMatrix}};
        if (word != "triangle" || !kinds.count(kind) || !extra.empty())
            throw Error(Errc::Parse, "expected 'triangle upper|lower|functional|full|smatrix', got '" + lines[1] + "'");
        f.kind = kinds.at(kind);
        if (f.kind == FileKind::SMatrix && !f.window)
            throw Error(Errc::Parse, "an smatrix file needs a 'window <m> <n>' header");
    }
    for (std::size_t i = 2; i < lines.size(); ++i) {
        std::istringstream e(lines[i]);
        std::string ks, rs;
        e >> ks >> rs;
        std::string value;
        std::getline(e, value);
        value = detail::strip_comment(value);
        if (value.empty()) throw Error(Errc::Parse, "entry line needs '<k> <r> <value>': '" + lines[i] + "'");
        const int k = detail::parse_int(ks, "row"), r = detail::parse_int(rs, "column");
        const std::string where = "(" + std::to_string(k) + "," + std::to_string(r) + ")";
        if (!f.range.contains(k) || !f.range.contains(r))
            throw Error(Errc::IndexOutOfWindow, "entry " + where + " outside " + to_string(f.range));
        RatFun v = parse_ratfun(value);
        switch (f.kind) {
        case FileKind::Upper:
        case FileKind::Lower: {
            bool diag = k == r, wrong = f.kind == FileKind::Upper ? k > r : k < r;
            if (wrong) throw Error(Errc::InvalidArgument, "entry " + where + " on the wrong side of the diagonal");
            if (diag) {
                if (!(v == RatFun(Poly(1L)))) throw Error(Errc::InvalidArgument, "diagonal entry " + where + " is not 1");
                continue;
            }
            break;
        }
        case FileKind::Functional:
            if (!(k > r)) throw Error(Errc::InvalidArgument, "functional entry " + where + " is not strictly lower");
            break;
        case FileKind::SMatrix:
            if (!(k <= f.window->m && r > f.window->m))
                throw Error(Errc::IndexOutOfWindow, "S entry " + where + " is not a corner pair of " + to_string(*f.window));
            break;
        case FileKind::Full: break;
        }
        if (!f.entries.emplace(std::make_pair(k, r), v).second)
            throw Error(Errc::Parse, "entry " + where + " listed twice");
    }
    std::erase_if(f.entries, [](const auto& e) { return e.second.is_zero(); });
    return f;
}

inline MatrixFile read_matrix_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(Errc::Io, "cannot read matrix file");
    std::ostringstream s;
    s << in.rdbuf();
    return parse_matrix_text(s.str());
}

/// Constants as p/q, everything else in the polynomial grammar.
inline std::string value_text(const RatFun& v) { return v.is_constant() ? rational_str(v.constant_value()) : render(v); }

inline std::string write_matrix_text(const MatrixFile& f) {
    std::string out;
    if (f.window) {
        out += "window " + std::to_string(f.window->m) + " " + std::to_string(f.window->radius()) + "\n";
    } else {
        out += "size " + std::to_string(f.range.size()) + "\n";
    }
    out += std::string("triangle ") + kind_name(f.kind) + "\n";
    for (const auto& [kr, v] : f.entries)
        if (!v.is_zero()) out += std::to_string(kr.first) + " " + std::to_string(kr.second) + " " + value_text(v) + "\n";
    return out;
}

inline void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(Errc::Io, "cannot write " + path);
    out << text;
    if (!out) throw Error(Errc::Io, "cannot write " + path);
}

// ---------------------------------------------------------------------------
// Conversions between files and typed matrices

namespace detail {

template <class T>
T convert_entry(const RatFun& v, std::pair<int, int> kr) {
    if constexpr (std::is_same_v<T, RatFun>) {
        return v;
    } else {
        if (!v.is_constant())
            throw Error(Errc::InvalidArgument, "entry (" + std::to_string(kr.first) + "," + std::to_string(kr.second) +
                                                   ") is not a number: " + render(v));
        return v.constant_value();
    }
}

template <class T>
RatFun to_ratfun(const T& v) {
    if constexpr (std::is_same_v<T, RatFun>) {
        return v;
    } else {
        return RatFun(Poly(v));
    }
}

inline void require_kind(const MatrixFile& f, std::initializer_list<FileKind> allowed, const char* what) {
    for (FileKind k : allowed)
        if (f.kind == k) return;
    throw Error(Errc::InvalidArgument, std::string("expected ") + what + ", file has triangle " + kind_name(f.kind));
}

}  // namespace detail

template <class T>
UnipotentMatrix<T> to_unipotent(const MatrixFile& f) {
    detail::require_kind(f, {FileKind::Upper, FileKind::Lower}, "a unipotent matrix");
    UnipotentMatrix<T> u(f.range, f.kind == FileKind::Upper ? Triangle::Upper : Triangle::Lower);
    for (const auto& [kr, v] : f.entries) u.set(kr.first, kr.second, detail::convert_entry<T>(v, kr));
    return u;
}

template <class T>
Functional<T> to_functional(const MatrixFile& f) {
    detail::require_kind(f, {FileKind::Functional, FileKind::Lower, FileKind::Full}, "a functional");
    Functional<T> y(f.range);
    for (const auto& [kr, v] : f.entries) {
        if (!(kr.first > kr.second))
            throw Error(Errc::InvalidArgument, "functional entry (" + std::to_string(kr.first) + "," +
                                                   std::to_string(kr.second) + ") is not strictly lower");
        y.set(kr.first, kr.second, detail::convert_entry<T>(v, kr));
    }
    return y;
}

template <class T>
Matrix<T> to_matrix(const MatrixFile& f) {
    Matrix<T> a(f.range, f.range);
    if (f.kind == FileKind::Upper || f.kind == FileKind::Lower)
        for (int i = f.range.lo; i <= f.range.hi; ++i) a(i, i) = T(1L);
    if (f.kind == FileKind::SMatrix) throw Error(Errc::InvalidArgument, "an smatrix file is not a square matrix");
    for (const auto& [kr, v] : f.entries) a(kr.first, kr.second) = detail::convert_entry<T>(v, kr);
    return a;
}

template <class T>
SMatrix<T> to_smatrix(const MatrixFile& f) {
    detail::require_kind(f, {FileKind::SMatrix}, "an smatrix");
    SMatrix<T> s{*f.window, Matrix<T>(f.window->head(), f.window->tail())};
    for (const auto& [kr, v] : f.entries) s.s(kr.first, kr.second) = detail::convert_entry<T>(v, kr);
    return s;
}

namespace detail {

inline std::optional<IndexWindow> header_window(IndexRange r, std::optional<IndexWindow> w) {
    if (w && !(w->range() == r)) throw Error(Errc::WindowMismatch, "window does not match the matrix range");
    if (w && !w->centered_at_split()) w.reset();
    return w;
}

inline IndexRange file_range(IndexRange r, const std::optional<IndexWindow>& w) {
    if (!w && r.lo != 1) throw Error(Errc::WindowMismatch, "range " + to_string(r) + " needs a centered window header");
    return r;
}

template <class T>
MatrixFile from_square(const Matrix<T>& a, FileKind kind, std::optional<IndexWindow> w, bool skip_diagonal) {
    MatrixFile f;
    f.window = header_window(a.rows(), w);
    f.range = file_range(a.rows(), f.window);
    f.kind = kind;
    for (int i = a.rows().lo; i <= a.rows().hi; ++i)
        for (int j = a.cols().lo; j <= a.cols().hi; ++j) {
            if (skip_diagonal && i == j) continue;
            if (!is_zero(a(i, j))) f.entries[{i, j}] = to_ratfun(a(i, j));
        }
    return f;
}

}  // namespace detail

template <class T>
MatrixFile from_unipotent(const UnipotentMatrix<T>& u, std::optional<IndexWindow> w = std::nullopt) {
    return detail::from_square(u.matrix(), u.triangle() == Triangle::Upper ? FileKind::Upper : FileKind::Lower, w, true);
}

template <class T>
MatrixFile from_functional(const Functional<T>& y, std::optional<IndexWindow> w = std::nullopt) {
    return detail::from_square(y.matrix(), FileKind::Functional, w, false);
}

template <class T>
MatrixFile from_matrix(const Matrix<T>& a, std::optional<IndexWindow> w = std::nullopt) {
    return detail::from_square(a, FileKind::Full, w, false);
}

template <class T>
MatrixFile from_smatrix(const SMatrix<T>& s) {
    if (!s.window.centered_at_split())
        throw Error(Errc::WindowMismatch, "S on " + to_string(s.window) + " has no centered window header");
    MatrixFile f;
    f.window = s.window;
    f.range = s.window.range();
    f.kind = FileKind::SMatrix;
    for (const auto& [k, r] : s.window.corner_pairs())
        if (!is_zero(s(k, r))) f.entries[{k, r}] = detail::to_ratfun(s(k, r));
    return f;
}

/// `k value` per line.
template <class T>
std::string write_diagonal_text(IndexRange r, const std::vector<T>& d) {
    std::string out;
    for (std::size_t i = 0; i < d.size(); ++i)
        out += std::to_string(r.lo + static_cast<int>(i)) + " " + value_text(detail::to_ratfun(d[i])) + "\n";
    return out;
}

// ---------------------------------------------------------------------------
// Weights

/// Lines `<k> <r> <p/q>`.
inline std::map<std::pair<int, int>, Rational> parse_weight_table(std::string_view text) {
    std::map<std::pair<int, int>, Rational> out;
    for (const auto& line : detail::content_lines(text)) {
        std::istringstream e(line);
        std::string ks, rs, vs, extra;
        e >> ks >> rs >> vs >> extra;
        if (vs.empty() || !extra.empty()) throw Error(Errc::Parse, "weight line needs '<k> <r> <p/q>': '" + line + "'");
        const int k = detail::parse_int(ks, "row"), r = detail::parse_int(rs, "column");
        if (!out.emplace(std::make_pair(k, r), parse_rational(vs)).second)
            throw Error(Errc::Parse, "weight (" + ks + "," + rs + ") listed twice");
    }
    return out;
}

inline std::string write_weight_table(const std::map<std::pair<int, int>, Rational>& t) {
    std::string out;
    for (const auto& [kr, v] : t)
        out += std::to_string(kr.first) + " " + std::to_string(kr.second) + " " + rational_str(v) + "\n";
    return out;
}

/// geometric:<q> | gausslike:<q> | factorial | table:<path>
inline WeightFamily parse_family(const std::string& spec) {
    auto colon = spec.find(':');
    const std::string kind = spec.substr(0, colon), arg = colon == std::string::npos ? "" : spec.substr(colon + 1);
    if (kind == "factorial" && colon == std::string::npos) return WeightFamily::factorial();
    if (kind == "geometric" && !arg.empty()) return WeightFamily::geometric(parse_rational(arg));
    if (kind == "gausslike" && !arg.empty()) return WeightFamily::gauss_like(parse_rational(arg));
    if (kind == "table" && !arg.empty())
        return WeightFamily::table(parse_weight_table(detail::read_text(arg, "weight table")), spec);
    throw Error(Errc::Parse, "unknown weight family '" + spec + "' (geometric:q, gausslike:q, factorial, table:path)");
}

/// Polynomial text with '#' comments.
inline Poly read_poly_file(const std::string& path) {
    std::string text;
    for (const auto& line : detail::content_lines(detail::read_text(path, "polynomial file"))) text += line + " ";
    return parse_poly(text);
}

// ---------------------------------------------------------------------------
// Generator tables: `A[k,r] = <operator>` per line

inline std::string write_generator_table(const GeneratorTable& gens) {
    std::string out;
    for (const auto& [kr, op] : gens)
        out += "A[" + std::to_string(kr.first) + "," + std::to_string(kr.second) + "] = " + render(op) + "\n";
    return out;
}

inline GeneratorTable parse_generator_table(std::string_view text) {
    GeneratorTable out;
    for (const auto& line : detail::content_lines(text)) {
        int k = 0, r = 0, used = 0;
        if (std::sscanf(line.c_str(), "A[%d,%d] =%n", &k, &r, &used) != 2 || used == 0)
            throw Error(Errc::Parse, "generator line needs 'A[k,r] = <operator>': '" + line + "'");
        if (!out.emplace(std::make_pair(k, r), parse_diffop(line.substr(static_cast<std::size_t>(used)))).second)
            throw Error(Errc::Parse, "generator A[" + std::to_string(k) + "," + std::to_string(r) + "] listed twice");
    }
    return out;
}

// ---------------------------------------------------------------------------
// Machine format: `<record>\t<field>=<value>` per line

class MachineRecord {
public:
    explicit MachineRecord(std::string name) : line_(std::move(name)) {}
    MachineRecord& field(const std::string& key, const std::string& value) {
        line_ += "\t" + key + "=" + value;
        return *this;
    }
    template <class I>
        requires std::is_integral_v<I>
    MachineRecord& field(const std::string& key, I value) {
        return field(key, std::to_string(value));
    }
    MachineRecord& field(const std::string& key, double value) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.17g", value);
        return field(key, std::string(buf));
    }
    const std::string& str() const { return line_; }

private:
    std::string line_;
};

}  // namespace orbita
