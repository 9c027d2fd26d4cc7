#pragma once

// Lambda operations on classes, via the power structure on the coefficient
// ring: the generating series of the symmetric powers of a class a is
//
//   Sum_k lambda^k(a) t^k  =  Prod_{(p,q)} (1 - u^p v^q t)^(-a_{pq}),
//
// expanded term by term.  Negative coefficients contribute finite binomial
// factors, positive ones the usual binomial series.  Nothing here rewrites
// lambda of a product symbolically; arguments are expanded as given.

#include <vector>

#include "motpairs/class_poly.hpp"

namespace motpairs {

inline Int binomial(const Int& n, int k) {
    if (k < 0) return 0;
    Int r = 1;
    for (int i = 0; i < k; ++i) {
        r *= (n - i);
        r /= (i + 1);
    }
    return r;
}

// Truncated series in t with ClassPoly coefficients; index = power of t.
using SymSeries = std::vector<ClassPoly>;

inline SymSeries series_mul(const SymSeries& a, const SymSeries& b, int cap) {
    SymSeries r(static_cast<std::size_t>(cap) + 1);
    for (std::size_t i = 0; i < a.size() && i <= static_cast<std::size_t>(cap); ++i) {
        if (a[i].is_zero()) continue;
        for (std::size_t j = 0; j < b.size() && i + j <= static_cast<std::size_t>(cap); ++j) {
            if (b[j].is_zero()) continue;
            r[i + j] += a[i] * b[j];
        }
    }
    return r;
}

// First cap+1 coefficients of Sum_k lambda^k(a) t^k.
inline SymSeries sym_series(const ClassPoly& a, int cap) {
    if (cap < 0) throw EngineError("sym_series: negative truncation order");
    SymSeries acc(static_cast<std::size_t>(cap) + 1);
    acc[0] = ClassPoly::one();
    for (const auto& [m, c] : a.terms()) {
        SymSeries factor(static_cast<std::size_t>(cap) + 1);
        if (c > 0) {
            // (1 - m t)^(-c) = Sum_j C(c+j-1, j) m^j t^j
            for (int j = 0; j <= cap; ++j)
                factor[j] = ClassPoly::monomial(m.p * j, m.q * j, binomial(c + j - 1, j));
        } else {
            // (1 - m t)^(|c|): finite expansion with alternating signs.
            Int k = -c;
            for (int j = 0; j <= cap; ++j) {
                Int b = binomial(k, j);
                if (b == 0) break;
                factor[j] = ClassPoly::monomial(m.p * j, m.q * j,
                                                (j % 2 == 0) ? b : -b);
            }
        }
        acc = series_mul(acc, factor, cap);
    }
    return acc;
}

// k-th lambda operation (the class of the k-th symmetric power when a is
// the class of a variety).  lambda^0 = 1 and lambda^1 = id by construction.
inline ClassPoly lambda_k(const ClassPoly& a, int k) {
    if (k < 0) throw EngineError("lambda_k: negative index");
    return sym_series(a, k)[static_cast<std::size_t>(k)];
}

}  // namespace motpairs
