#pragma once

// Exact scalar kernel: GMP rationals, multivariate polynomials over indexed
// variables (with a formal central symbol tau standing for 2*pi*i), and
// unreduced rational functions compared by cross-multiplication.

#include <gmpxx.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <complex>
#include <compare>
#include <cstdint>
#include <functional>
#include <map>
#include <numbers>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "orbita/error.hpp"

namespace orbita {

using Rational = mpq_class;
using Integer = mpz_class;

inline Rational make_rational(long p, long q = 1) {
    if (q == 0) throw Error(Errc::DivisionByZero, "rational with zero denominator");
    Rational r(p, q);
    r.canonicalize();
    return r;
}

/// "p" or "p/q" with q > 0.
inline std::string rational_str(const Rational& q) { return q.get_str(); }

/// Coefficient form used inside polynomial text: bare positive integers,
/// everything else parenthesized, e.g. (-1), (3/2).
inline std::string rational_coef_str(const Rational& q) {
    if (sgn(q) > 0 && q.get_den() == 1) return q.get_str();
    return "(" + q.get_str() + ")";
}

// ---------------------------------------------------------------------------
// Variables

enum class Role : std::uint8_t { X, Y, T, Aux, Deriv };

/// x[k,r], y[k,r], t[k,r], b[k,r] (auxiliary symbols such as weights) and
/// d[k,r] (the derivative symbol, only meaningful in operator text).
struct VarId {
    Role role = Role::X;
    int row = 0;
    int col = 0;

    auto operator<=>(const VarId&) const = default;
    bool operator==(const VarId&) const = default;
};

inline char role_letter(Role r) {
    switch (r) {
    case Role::X: return 'x';
    case Role::Y: return 'y';
    case Role::T: return 't';
    case Role::Aux: return 'b';
    case Role::Deriv: return 'd';
    }
    return '?';
}

inline VarId make_var(Role role, int row, int col) {
    if ((role == Role::X || role == Role::T || role == Role::Deriv) && !(row < col))
        throw Error(Errc::InvalidArgument, std::string(1, role_letter(role)) + " variables need row < col");
    if (role == Role::Y && !(row > col))
        throw Error(Errc::InvalidArgument, "y variables need row > col");
    return VarId{role, row, col};
}

inline VarId xv(int k, int r) { return make_var(Role::X, k, r); }
inline VarId yv(int k, int r) { return make_var(Role::Y, k, r); }
inline VarId tv(int k, int r) { return make_var(Role::T, k, r); }
inline VarId bv(int k, int r) { return make_var(Role::Aux, k, r); }
inline VarId dv(int k, int r) { return make_var(Role::Deriv, k, r); }

inline std::string to_string(const VarId& v) {
    return std::string(1, role_letter(v.role)) + "[" + std::to_string(v.row) + "," + std::to_string(v.col) + "]";
}

// ---------------------------------------------------------------------------
// Monomials

struct Monomial {
    std::vector<std::pair<VarId, unsigned>> factors;  // sorted by VarId, exponents > 0
    unsigned tau = 0;

    unsigned degree() const {
        unsigned d = tau;
        for (const auto& f : factors) d += f.second;
        return d;
    }
    bool is_one() const { return tau == 0 && factors.empty(); }
    unsigned exponent(const VarId& v) const {
        auto it = std::lower_bound(factors.begin(), factors.end(), v,
                                   [](const auto& f, const VarId& w) { return f.first < w; });
        return (it != factors.end() && it->first == v) ? it->second : 0;
    }
    bool operator==(const Monomial&) const = default;
};

inline Monomial operator*(const Monomial& a, const Monomial& b) {
    Monomial out;
    out.tau = a.tau + b.tau;
    out.factors.reserve(a.factors.size() + b.factors.size());
    std::size_t i = 0, j = 0;
    while (i < a.factors.size() || j < b.factors.size()) {
        if (j == b.factors.size() || (i < a.factors.size() && a.factors[i].first < b.factors[j].first)) {
            out.factors.push_back(a.factors[i++]);
        } else if (i == a.factors.size() || b.factors[j].first < a.factors[i].first) {
            out.factors.push_back(b.factors[j++]);
        } else {
            out.factors.emplace_back(a.factors[i].first, a.factors[i].second + b.factors[j].second);
            ++i;
            ++j;
        }
    }
    return out;
}

/// True when `a` divides `b`.
inline bool divides(const Monomial& a, const Monomial& b) {
    if (a.tau > b.tau) return false;
    for (const auto& [v, e] : a.factors)
        if (b.exponent(v) < e) return false;
    return true;
}

/// b / a, assuming divides(a, b).
inline Monomial monomial_quotient(const Monomial& b, const Monomial& a) {
    Monomial out;
    out.tau = b.tau - a.tau;
    for (const auto& [v, e] : b.factors) {
        unsigned d = e - a.exponent(v);
        if (d > 0) out.factors.emplace_back(v, d);
    }
    return out;
}

inline Monomial monomial_gcd(const Monomial& a, const Monomial& b) {
    Monomial out;
    out.tau = std::min(a.tau, b.tau);
    for (const auto& [v, e] : a.factors) {
        unsigned f = std::min(e, b.exponent(v));
        if (f > 0) out.factors.emplace_back(v, f);
    }
    return out;
}

/// Graded order: total degree (tau counts), then lexicographic with tau most
/// significant and larger VarId more significant. This is a monomial order,
/// so the last element of an ordered container is the leading term.
struct MonomialLess {
    bool operator()(const Monomial& a, const Monomial& b) const {
        unsigned da = a.degree(), db = b.degree();
        if (da != db) return da < db;
        if (a.tau != b.tau) return a.tau < b.tau;
        std::size_t i = a.factors.size(), j = b.factors.size();
        while (i > 0 && j > 0) {
            const auto& fa = a.factors[i - 1];
            const auto& fb = b.factors[j - 1];
            if (fa.first != fb.first) return fa.first < fb.first;
            if (fa.second != fb.second) return fa.second < fb.second;
            --i;
            --j;
        }
        return i < j;
    }
};

// ---------------------------------------------------------------------------
// Polynomials

class Poly {
public:
    using Terms = std::map<Monomial, Rational, MonomialLess>;

    Poly() = default;
    Poly(long c) { if (c != 0) terms_.emplace(Monomial{}, Rational(c)); }
    Poly(const Rational& c) { if (sgn(c) != 0) terms_.emplace(Monomial{}, c); }

    static Poly var(const VarId& v, unsigned e = 1) {
        Poly p;
        if (e == 0) return Poly(1L);
        Monomial m;
        m.factors.emplace_back(v, e);
        p.terms_.emplace(std::move(m), Rational(1));
        return p;
    }
    static Poly tau(unsigned e = 1) {
        Poly p;
        Monomial m;
        m.tau = e;
        p.terms_.emplace(std::move(m), Rational(1));
        return p;
    }
    static Poly term(const Monomial& m, const Rational& c) {
        Poly p;
        if (sgn(c) != 0) p.terms_.emplace(m, c);
        return p;
    }

    const Terms& terms() const { return terms_; }
    std::size_t size() const { return terms_.size(); }
    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const { return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.is_one()); }
    Rational constant_term() const {
        auto it = terms_.find(Monomial{});
        return it == terms_.end() ? Rational(0) : it->second;
    }
    const std::pair<const Monomial, Rational>& leading() const { return *terms_.rbegin(); }

    unsigned max_tau_degree() const {
        unsigned t = 0;
        for (const auto& [m, c] : terms_) t = std::max(t, m.tau);
        return t;
    }
    unsigned degree() const { return terms_.empty() ? 0 : terms_.rbegin()->first.degree(); }

    std::set<VarId> variables() const {
        std::set<VarId> out;
        for (const auto& [m, c] : terms_)
            for (const auto& f : m.factors) out.insert(f.first);
        return out;
    }

    void add_term(const Monomial& m, const Rational& c) {
        if (sgn(c) == 0) return;
        auto [it, inserted] = terms_.emplace(m, c);
        if (!inserted) {
            it->second += c;
            if (sgn(it->second) == 0) terms_.erase(it);
        }
    }

    Poly& operator+=(const Poly& o) {
        for (const auto& [m, c] : o.terms_) add_term(m, c);
        return *this;
    }
    Poly& operator-=(const Poly& o) {
        for (const auto& [m, c] : o.terms_) add_term(m, -c);
        return *this;
    }
    Poly& operator*=(const Rational& s) {
        if (sgn(s) == 0) {
            terms_.clear();
        } else {
            for (auto& [m, c] : terms_) c *= s;
        }
        return *this;
    }

    friend Poly operator+(Poly a, const Poly& b) { return a += b; }
    friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
    friend Poly operator-(Poly a) { return a *= Rational(-1); }
    friend Poly operator*(const Poly& a, const Poly& b) {
        Poly out;
        for (const auto& [ma, ca] : a.terms_)
            for (const auto& [mb, cb] : b.terms_) out.add_term(ma * mb, Rational(ca * cb));
        return out;
    }
    friend Poly operator*(Poly a, const Rational& s) { return a *= s; }
    friend Poly operator*(const Rational& s, Poly a) { return a *= s; }
    friend bool operator==(const Poly& a, const Poly& b) { return a.terms_ == b.terms_; }

    Poly pow(unsigned e) const {
        Poly out(1L), base = *this;
        while (e) {
            if (e & 1u) out = out * base;
            e >>= 1u;
            if (e) base = base * base;
        }
        return out;
    }

private:
    Terms terms_;
};

/// Formal partial derivative.
inline Poly partial(const Poly& f, const VarId& v) {
    Poly out;
    for (const auto& [m, c] : f.terms()) {
        unsigned e = m.exponent(v);
        if (e == 0) continue;
        Monomial d;
        d.tau = m.tau;
        for (const auto& [w, k] : m.factors) {
            if (w == v) {
                if (k > 1) d.factors.emplace_back(w, k - 1);
            } else {
                d.factors.emplace_back(w, k);
            }
        }
        out.add_term(d, Rational(c * e));
    }
    return out;
}

/// Exact quotient a / b; throws NotExact if b does not divide a.
inline std::optional<Poly> try_divide(const Poly& a, const Poly& b) {
    if (b.is_zero()) throw Error(Errc::DivisionByZero, "polynomial division by zero");
    Poly q, r = a;
    const auto& [lm_b, lc_b] = b.leading();
    while (!r.is_zero()) {
        const auto& [lm_r, lc_r] = r.leading();
        if (!divides(lm_b, lm_r)) return std::nullopt;
        Poly t = Poly::term(monomial_quotient(lm_r, lm_b), Rational(lc_r / lc_b));
        q += t;
        r -= t * b;
    }
    return q;
}

inline Poly divide_exact(const Poly& a, const Poly& b) {
    auto q = try_divide(a, b);
    if (!q) throw Error(Errc::NotExact, "polynomial division is not exact");
    return *q;
}

inline Rational substitute(const Poly& f, const std::map<VarId, Rational>& at) {
    Rational sum(0);
    for (const auto& [m, c] : f.terms()) {
        if (m.tau > 0) throw Error(Errc::UnboundVariable, "tau");
        Rational t = c;
        for (const auto& [v, e] : m.factors) {
            auto it = at.find(v);
            if (it == at.end()) throw Error(Errc::UnboundVariable, to_string(v));
            for (unsigned i = 0; i < e; ++i) t *= it->second;
        }
        sum += t;
    }
    return sum;
}

/// Replace some variables by polynomials; the others are kept.
inline Poly substitute_poly(const Poly& f, const std::map<VarId, Poly>& at) {
    Poly out;
    for (const auto& [m, c] : f.terms()) {
        Monomial keep;
        keep.tau = m.tau;
        Poly t = Poly::term(Monomial{}, c);
        for (const auto& [v, e] : m.factors) {
            auto it = at.find(v);
            if (it == at.end()) {
                keep.factors.emplace_back(v, e);
            } else {
                t = t * it->second.pow(e);
            }
        }
        out += t * Poly::term(keep, Rational(1));
    }
    return out;
}

/// Numeric evaluation with tau = 2*pi*i.
inline std::complex<double> evaluate(const Poly& f, const std::function<double(const VarId&)>& value) {
    const std::complex<double> tau(0.0, 2.0 * std::numbers::pi);
    std::complex<double> sum(0.0, 0.0);
    for (const auto& [m, c] : f.terms()) {
        std::complex<double> t(c.get_d(), 0.0);
        for (unsigned i = 0; i < m.tau; ++i) t *= tau;
        for (const auto& [v, e] : m.factors) t *= std::pow(value(v), static_cast<int>(e));
        sum += t;
    }
    return sum;
}

// ---------------------------------------------------------------------------
// Rational functions

class RatFun {
public:
    RatFun() : num_(), den_(1L) {}
    RatFun(long c) : num_(c), den_(1L) {}
    RatFun(const Rational& c) : num_(c), den_(1L) {}
    RatFun(const Poly& p) : num_(p), den_(1L) {}
    RatFun(const Poly& n, const Poly& d) : num_(n), den_(d) { normalize(); }

    const Poly& num() const { return num_; }
    const Poly& den() const { return den_; }
    bool is_zero() const { return num_.is_zero(); }
    bool is_polynomial() const { return den_ == Poly(1L); }
    bool is_constant() const { return num_.is_constant() && den_.is_constant(); }
    Rational constant_value() const { return Rational(num_.constant_term() / den_.constant_term()); }

    friend RatFun operator+(const RatFun& a, const RatFun& b) {
        if (b.is_zero()) return a;
        if (a.is_zero()) return b;
        if (a.den_ == b.den_) return RatFun(a.num_ + b.num_, a.den_);
        return RatFun(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
    }
    friend RatFun operator-(const RatFun& a) { return RatFun(-a.num_, a.den_, Raw{}); }
    friend RatFun operator-(const RatFun& a, const RatFun& b) { return a + (-b); }
    friend RatFun operator*(const RatFun& a, const RatFun& b) {
        if (a.is_zero() || b.is_zero()) return RatFun();
        if (a.is_polynomial() && b.is_polynomial()) return RatFun(a.num_ * b.num_);
        return RatFun(a.num_ * b.num_, a.den_ * b.den_);
    }
    friend RatFun operator/(const RatFun& a, const RatFun& b) {
        if (b.is_zero()) throw Error(Errc::DivisionByZero, "rational function division by zero");
        return RatFun(a.num_ * b.den_, a.den_ * b.num_);
    }
    RatFun& operator+=(const RatFun& o) { return *this = *this + o; }
    RatFun& operator-=(const RatFun& o) { return *this = *this - o; }
    RatFun& operator*=(const RatFun& o) { return *this = *this * o; }
    RatFun& operator/=(const RatFun& o) { return *this = *this / o; }

    friend bool operator==(const RatFun& a, const RatFun& b) {
        if (a.den_ == b.den_) return a.num_ == b.num_;
        return a.num_ * b.den_ == b.num_ * a.den_;
    }

private:
    struct Raw {};
    RatFun(Poly n, Poly d, Raw) : num_(std::move(n)), den_(std::move(d)) {}

    void normalize() {
        if (den_.is_zero()) throw Error(Errc::DivisionByZero, "zero denominator");
        if (num_.is_zero()) {
            den_ = Poly(1L);
            return;
        }
        if (den_.is_constant()) {
            num_ *= Rational(1 / den_.constant_term());
            den_ = Poly(1L);
            return;
        }
        // Cancel the common monomial factor.
        Monomial g = num_.terms().begin()->first;
        for (const auto& [m, c] : num_.terms()) g = monomial_gcd(g, m);
        for (const auto& [m, c] : den_.terms()) g = monomial_gcd(g, m);
        if (!g.is_one()) {
            Poly n, d;
            for (const auto& [m, c] : num_.terms()) n.add_term(monomial_quotient(m, g), c);
            for (const auto& [m, c] : den_.terms()) d.add_term(monomial_quotient(m, g), c);
            num_ = std::move(n);
            den_ = std::move(d);
            if (den_.is_constant()) {
                num_ *= Rational(1 / den_.constant_term());
                den_ = Poly(1L);
                return;
            }
        }
        if (auto q = try_divide(num_, den_)) {
            num_ = std::move(*q);
            den_ = Poly(1L);
            return;
        }
        Rational lc = den_.leading().second;
        if (lc != 1) {
            Rational inv = 1 / lc;
            num_ *= inv;
            den_ *= inv;
        }
    }

    Poly num_;
    Poly den_;
};

inline Rational substitute(const RatFun& f, const std::map<VarId, Rational>& at) {
    Rational d = substitute(f.den(), at);
    if (sgn(d) == 0) throw Error(Errc::DenominatorVanishes, "at the given point");
    return Rational(substitute(f.num(), at) / d);
}

inline RatFun substitute_poly(const RatFun& f, const std::map<VarId, Poly>& at) {
    return RatFun(substitute_poly(f.num(), at), substitute_poly(f.den(), at));
}

inline std::set<VarId> variables(const RatFun& f) {
    auto v = f.num().variables();
    auto w = f.den().variables();
    v.insert(w.begin(), w.end());
    return v;
}

// ---------------------------------------------------------------------------
// Text rendering and parsing

inline std::string render(const Monomial& m) {
    std::string s;
    auto append = [&](const std::string& f) {
        if (!s.empty()) s += '*';
        s += f;
    };
    if (m.tau > 0) append(m.tau == 1 ? "tau" : "tau^" + std::to_string(m.tau));
    for (const auto& [v, e] : m.factors) append(e == 1 ? to_string(v) : to_string(v) + "^" + std::to_string(e));
    return s;
}

inline std::string render(const Poly& p) {
    if (p.is_zero()) return "0";
    std::string s;
    for (const auto& [m, c] : p.terms()) {
        if (!s.empty()) s += " + ";
        if (m.is_one()) {
            s += rational_coef_str(c);
        } else if (c == 1) {
            s += render(m);
        } else {
            s += rational_coef_str(c) + "*" + render(m);
        }
    }
    return s;
}

inline std::string render(const RatFun& f) {
    if (f.is_polynomial()) return render(f.num());
    return "(" + render(f.num()) + ")/(" + render(f.den()) + ")";
}

namespace detail {

class ExprParser {
public:
    ExprParser(std::string_view text, bool allow_deriv) : s_(text), allow_deriv_(allow_deriv) {}

    RatFun parse() {
        RatFun r = expr();
        skip_ws();
        if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
        return r;
    }

private:
    [[noreturn]] void fail(const std::string& what) const {
        throw Error(Errc::Parse, what + " at offset " + std::to_string(pos_) + " in \"" + std::string(s_) + "\"");
    }
    void skip_ws() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    bool accept(char c) {
        skip_ws();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }
    void expect(char c) {
        if (!accept(c)) fail(std::string("expected '") + c + "'");
    }
    long integer() {
        skip_ws();
        bool neg = false;
        if (pos_ < s_.size() && (s_[pos_] == '-' || s_[pos_] == '+')) neg = s_[pos_++] == '-';
        std::size_t start = pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        if (start == pos_) fail("expected integer");
        long v = std::stol(std::string(s_.substr(start, pos_ - start)));
        return neg ? -v : v;
    }

    RatFun expr() {
        RatFun acc = term();
        for (;;) {
            if (accept('+')) {
                acc = acc + term();
            } else if (accept('-')) {
                acc = acc - term();
            } else {
                return acc;
            }
        }
    }
    RatFun term() {
        RatFun acc = unary();
        for (;;) {
            if (accept('*')) {
                acc = acc * unary();
            } else if (accept('/')) {
                RatFun d = unary();
                if (d.is_zero()) fail("division by zero");
                acc = acc / d;
            } else {
                return acc;
            }
        }
    }
    RatFun unary() {
        if (accept('-')) return -unary();
        if (accept('+')) return unary();
        return power();
    }
    RatFun power() {
        RatFun base = atom();
        if (accept('^')) {
            long e = integer();
            if (e < 0) fail("negative exponent");
            RatFun out(1L);
            for (long i = 0; i < e; ++i) out = out * base;
            return out;
        }
        return base;
    }
    RatFun atom() {
        skip_ws();
        if (pos_ >= s_.size()) fail("unexpected end of input");
        char c = s_[pos_];
        if (c == '(') {
            ++pos_;
            RatFun r = expr();
            expect(')');
            return r;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t start = pos_;
            while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
            return RatFun(Rational(Integer(std::string(s_.substr(start, pos_ - start)))));
        }
        if (s_.substr(pos_, 3) == "tau") {
            pos_ += 3;
            return RatFun(Poly::tau());
        }
        Role role;
        switch (c) {
        case 'x': role = Role::X; break;
        case 'y': role = Role::Y; break;
        case 't': role = Role::T; break;
        case 'b': role = Role::Aux; break;
        case 'd':
            if (!allow_deriv_) fail("derivative symbol outside operator text");
            role = Role::Deriv;
            break;
        default: fail("unexpected '" + std::string(1, c) + "'");
        }
        ++pos_;
        expect('[');
        long k = integer();
        expect(',');
        long r = integer();
        expect(']');
        try {
            return RatFun(Poly::var(make_var(role, static_cast<int>(k), static_cast<int>(r))));
        } catch (const Error& e) {
            fail(e.detail());
        }
    }

    std::string_view s_;
    bool allow_deriv_;
    std::size_t pos_ = 0;
};

}  // namespace detail

/// Parses the rendering grammar (and ordinary infix arithmetic around it).
inline RatFun parse_ratfun(std::string_view text) { return detail::ExprParser(text, false).parse(); }

inline Poly parse_poly(std::string_view text) {
    RatFun f = parse_ratfun(text);
    if (!f.is_polynomial()) throw Error(Errc::Parse, "expected a polynomial: " + std::string(text));
    return f.num();
}

/// Like parse_poly, but d[k,r] symbols are accepted (operator text).
inline Poly parse_poly_with_derivatives(std::string_view text) {
    RatFun f = detail::ExprParser(text, true).parse();
    if (!f.is_polynomial()) throw Error(Errc::Parse, "expected a polynomial: " + std::string(text));
    return f.num();
}

}  // namespace orbita
