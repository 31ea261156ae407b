#pragma once

#include <random>
#include <string>
#include <vector>

#include "orbita/unimat.hpp"

namespace testsupport {

using namespace orbita;

inline RatFun F(const std::string& s) { return parse_ratfun(s); }
inline Poly P(const std::string& s) { return parse_poly(s); }

inline Rational small_rational(std::mt19937& rng, int lo = -5, int hi = 5) {
    std::uniform_int_distribution<int> num(lo, hi);
    std::uniform_int_distribution<int> den(1, 3);
    return make_rational(num(rng), den(rng));
}

inline int small_int(std::mt19937& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

inline QUnipotent random_upper(std::mt19937& rng, IndexRange r, int lo = -4, int hi = 4) {
    QUnipotent u(r, Triangle::Upper);
    for (int k = r.lo; k <= r.hi; ++k)
        for (int c = k + 1; c <= r.hi; ++c) u.set(k, c, small_rational(rng, lo, hi));
    return u;
}

/// Upper unitriangular matrix of symbols x[k,r] over the given pairs.
inline SymUnipotent symbolic_upper(IndexRange r, const std::vector<std::pair<int, int>>& pairs) {
    SymUnipotent u(r, Triangle::Upper);
    for (const auto& [k, c] : pairs) u.set(k, c, RatFun(Poly::var(xv(k, c))));
    return u;
}

/// Generic anti-diagonal point with symbolic entries y[r,k].
inline SymFunctional symbolic_generic_y(const IndexWindow& w) {
    SymFunctional y(w.range());
    for (const auto& [r, k] : w.antidiagonal()) y.set(r, k, RatFun(Poly::var(yv(r, k))));
    return y;
}

/// Cofactor expansion along the first row: the determinant oracle.
template <class T>
T cofactor_det(const std::vector<std::vector<T>>& a) {
    const std::size_t n = a.size();
    if (n == 1) return a[0][0];
    T sum(0L);
    for (std::size_t j = 0; j < n; ++j) {
        std::vector<std::vector<T>> sub;
        for (std::size_t i = 1; i < n; ++i) {
            std::vector<T> row;
            for (std::size_t c = 0; c < n; ++c)
                if (c != j) row.push_back(a[i][c]);
            sub.push_back(row);
        }
        T term = a[0][j] * cofactor_det(sub);
        if (j % 2 == 0) {
            sum += term;
        } else {
            sum -= term;
        }
    }
    return sum;
}

}  // namespace testsupport
