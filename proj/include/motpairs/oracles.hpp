#pragma once

// Independent cross-checks.  Everything here is computed from first
// principles on top of the polynomial ring alone, so agreement with the
// engine's lambda-ring and wall-crossing routes is meaningful.

#include <numeric>
#include <set>
#include <vector>

#include "motpairs/class_poly.hpp"
#include "motpairs/triples_domain.hpp"

namespace motpairs::oracles {

// Coefficient of t^k in (1 - ut)^g (1 - vt)^g / ((1 - t)(1 - uvt)), the
// generating series of the symmetric powers of a genus-g curve.
inline ClassPoly macdonald_sym_curve(int k, int g) {
    // Pascal triangle, local on purpose: no shared code with the lambda ring.
    std::vector<std::vector<Int>> ch(g + 1, std::vector<Int>(g + 1, 0));
    for (int i = 0; i <= g; ++i) {
        ch[i][0] = 1;
        for (int j = 1; j <= i; ++j)
            ch[i][j] = ch[i - 1][j - 1] + (j <= i - 1 ? ch[i - 1][j] : Int(0));
    }
    // Numerator coefficients in t.
    std::vector<ClassPoly> nu(2 * g + 1);
    for (int i = 0; i <= g; ++i)
        for (int j = 0; j <= g; ++j) {
            Int c = ch[g][i] * ch[g][j];
            if ((i + j) % 2 == 1) c = -c;
            nu[i + j] += ClassPoly::monomial(i, j, c);
        }
    // 1/((1-t)(1-qt)) contributes sum_{b<=m} q^b at degree m.
    ClassPoly out;
    for (int i = 0; i <= std::min(k, 2 * g); ++i) {
        int m = k - i;
        ClassPoly dcoef;
        for (int b = 0; b <= m; ++b) dcoef += ClassPoly::lefschetz(b);
        out += nu[i] * dcoef;
    }
    return out;
}

// Unordered configurations of k distinct points of the affine line: the
// squarefree locus q^k - q^{k-1} for k >= 2.
inline ClassPoly distinct_affine_config(int k) {
    if (k == 0) return ClassPoly::one();
    if (k == 1) return ClassPoly::lefschetz();
    return ClassPoly::lefschetz(k) - ClassPoly::lefschetz(k - 1);
}

// Wall detection by direct scan over candidate destabilizing subtriple
// invariants (rank pair, degree), independent of the arithmetic progression
// form used by walls().
inline std::vector<Rational> walls_by_subtriple_scan(const PairProblem& p) {
    std::set<Rational> ws;
    if (p.n < 2) return {};
    Rational lo = sigma_min(p), hi = sigma_max(p);
    if (hi <= lo) return {};
    long long span = 4 * (std::abs(p.d) + std::abs(p.d0) + p.n + 8);
    for (int n1 = 0; n1 <= p.n; ++n1) {
        for (int n2 = 0; n2 <= 1; ++n2) {
            if (n1 + n2 == 0 || (n1 == p.n && n2 == 1)) continue;
            for (long long d1 = -span; d1 <= span; ++d1) {
                if (n1 == 0 && d1 != 0) continue;        // zero bundle part
                if (n1 == p.n && n2 == 0 && d1 > p.d) continue;  // full-rank sub
                long long d2 = n2 * p.d0;
                long long a = static_cast<long long>(n2) * (p.n + 1) - (n1 + n2);
                long long b = static_cast<long long>(p.n + 1) * (d1 + d2) -
                              static_cast<long long>(n1 + n2) * (p.d + p.d0);
                if (a == 0) continue;
                Rational s(-b, a);
                if (lo < s && s < hi) ws.insert(s);
            }
        }
    }
    return {ws.begin(), ws.end()};
}

namespace detail {

// Exact fraction of class polynomials; collapsed by one exact division at
// the very end.
struct Frac {
    ClassPoly num = ClassPoly::zero();
    ClassPoly den = ClassPoly::one();
};

inline Frac frac(ClassPoly n, ClassPoly d) { return {std::move(n), std::move(d)}; }

inline Frac operator*(const Frac& x, const Frac& y) {
    return {x.num * y.num, x.den * y.den};
}
inline Frac operator+(const Frac& x, const Frac& y) {
    return {x.num * y.den + y.num * x.den, x.den * y.den};
}
inline Frac operator-(const Frac& x, const Frac& y) {
    return {x.num * y.den - y.num * x.den, x.den * y.den};
}

inline Frac q_pow(long long e) {
    if (e >= 0) return {ClassPoly::lefschetz(static_cast<int>(e)), ClassPoly::one()};
    return {ClassPoly::one(), ClassPoly::lefschetz(static_cast<int>(-e))};
}

inline ClassPoly settle(const Frac& f, const char* what) {
    return ClassPoly::div_exact(f.num, f.den, what);
}

inline ClassPoly jac_poly(int g) {
    ClassPoly u1 = ClassPoly::one() - ClassPoly::monomial(1, 0);
    ClassPoly v1 = ClassPoly::one() - ClassPoly::monomial(0, 1);
    return u1.pow(g) * v1.pow(g);
}

// Zeta value Z_C(q^{-k}) as an exact fraction, k >= 2.
inline Frac zeta_value(int g, int k) {
    std::vector<std::vector<Int>> ch(g + 1, std::vector<Int>(g + 1, 0));
    for (int i = 0; i <= g; ++i) {
        ch[i][0] = 1;
        for (int j = 1; j <= i; ++j)
            ch[i][j] = ch[i - 1][j - 1] + (j <= i - 1 ? ch[i - 1][j] : Int(0));
    }
    ClassPoly num;
    for (int i = 0; i <= g; ++i)
        for (int j = 0; j <= g; ++j) {
            Int c = ch[g][i] * ch[g][j];
            if ((i + j) % 2 == 1) c = -c;
            // (-u)^i (-v)^j t^{i+j} evaluated at t = q^{-k}, rescaled by q^{2gk}.
            int shift = (2 * g - i - j) * k;
            num += ClassPoly::monomial(i + shift, j + shift, c);
        }
    ClassPoly qk = ClassPoly::lefschetz(k) - ClassPoly::one();
    ClassPoly qk1 = ClassPoly::lefschetz(k - 1) - ClassPoly::one();
    ClassPoly den = ClassPoly::lefschetz(2 * k * (g - 1) + 1) * qk * qk1;
    return {num, den};
}

// Stack class of all rank-n degree-d bundles (independent of d).
inline Frac bundle_stack_mass(int g, int n) {
    Frac m = frac(jac_poly(g) * ClassPoly::lefschetz((n * n - 1) * (g - 1)),
                  ClassPoly::lefschetz() - ClassPoly::one());
    for (int k = 2; k <= n; ++k) m = m * zeta_value(g, k);
    return m;
}

inline Frac picard_stack(int g) {
    return frac(jac_poly(g), ClassPoly::lefschetz() - ClassPoly::one());
}

// Stack class of the semistable locus, ranks 1..3, by removing the strata
// with destabilizing filtrations (summed as geometric series in q^{-1}).
inline Frac semistable_stack(int g, int n, long long d);

inline Frac hn_stratum_12(int g, long long d) {
    // Sub line bundle of degree d1 > d/3, semistable rank-2 quotient.
    Frac total{};
    long long d1min = floor_rat(Rational(d, 3)) + 1;
    for (int par = 0; par <= 1; ++par) {
        long long d1 = d1min;
        if (((d - d1) % 2 + 2) % 2 != par) ++d1;
        Frac series = frac(ClassPoly::lefschetz(6),
                           ClassPoly::lefschetz(6) - ClassPoly::one());
        Frac lead = q_pow(d - 3 * d1 + 2 * (g - 1));
        total = total + picard_stack(g) * semistable_stack(g, 2, d - d1) * lead * series;
    }
    return total;
}

inline Frac hn_stratum_21(int g, long long d) {
    // Semistable rank-2 sub of degree d1 > 2d/3, line bundle quotient.
    Frac total{};
    long long d1min = floor_rat(Rational(2 * d, 3)) + 1;
    for (int par = 0; par <= 1; ++par) {
        long long d1 = d1min;
        if ((d1 % 2 + 2) % 2 != par) ++d1;
        Frac series = frac(ClassPoly::lefschetz(6),
                           ClassPoly::lefschetz(6) - ClassPoly::one());
        Frac lead = q_pow(2 * d - 3 * d1 + 2 * (g - 1));
        total = total + semistable_stack(g, 2, d1) * picard_stack(g) * lead * series;
    }
    return total;
}

inline Frac hn_stratum_111(int g, long long d) {
    // Full flags of line bundles with d1 > d2 > d3; offsets a = d1 - d2,
    // b = d2 - d3 >= 1 with a + 2b = d mod 3.
    Frac total{};
    Frac pic = picard_stack(g);
    Frac geom2 = frac(ClassPoly::lefschetz(12),
                      (ClassPoly::lefschetz(6) - ClassPoly::one()) *
                          (ClassPoly::lefschetz(6) - ClassPoly::one()));
    for (long long alpha = 1; alpha <= 3; ++alpha)
        for (long long beta = 1; beta <= 3; ++beta) {
            if (((alpha + 2 * beta - d) % 3 + 3) % 3 != 0) continue;
            total = total + q_pow(-2 * (alpha + beta)) * geom2;
        }
    return pic * pic * pic * q_pow(3 * (g - 1)) * total;
}

inline Frac semistable_stack(int g, int n, long long d) {
    if (n == 1) return picard_stack(g);
    if (n == 2) {
        long long d1min = floor_rat(Rational(d, 2)) + 1;
        long long delta = 2 * d1min - d;  // 1 for odd d, 2 for even
        Frac pic = picard_stack(g);
        Frac tail = pic * pic *
                    frac(ClassPoly::lefschetz(static_cast<int>(g + 1 - delta)),
                         ClassPoly::lefschetz(2) - ClassPoly::one());
        return bundle_stack_mass(g, 2) - tail;
    }
    if (n == 3)
        return bundle_stack_mass(g, 3) - hn_stratum_12(g, d) -
               hn_stratum_21(g, d) - hn_stratum_111(g, d);
    throw EngineError("semistable stack mass implemented for rank <= 3");
}

}  // namespace detail

// Moduli of stable bundles, gcd(n, d) = 1, ranks 1..3: (q - 1) times the
// semistable stack class, collapsed by one exact division.
inline ClassPoly hn_coprime_bundle_class(int n, long long d, int g) {
    if (n < 1 || n > 3) throw EngineError("hn oracle covers ranks 1..3");
    if (n > 1 && std::gcd(static_cast<long long>(n), std::abs(d)) != 1)
        throw NotCoprime("hn oracle needs gcd(n, d) = 1");
    detail::Frac ss = detail::semistable_stack(g, n, d);
    detail::Frac cls = ss * detail::frac(ClassPoly::lefschetz() - ClassPoly::one(),
                                         ClassPoly::one());
    return detail::settle(cls, "hn bundle class");
}

// Univariate helpers for the rank-2 Poincare closed form.
using IntSeries = std::vector<Int>;

inline IntSeries useries_mul(const IntSeries& a, const IntSeries& b) {
    if (a.empty() || b.empty()) return {};
    IntSeries c(a.size() + b.size() - 1, 0);
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j) c[i + j] += a[i] * b[j];
    while (!c.empty() && c.back() == 0) c.pop_back();
    return c;
}

inline IntSeries useries_sub(IntSeries a, const IntSeries& b) {
    if (a.size() < b.size()) a.resize(b.size(), 0);
    for (size_t i = 0; i < b.size(); ++i) a[i] -= b[i];
    while (!a.empty() && a.back() == 0) a.pop_back();
    return a;
}

inline IntSeries useries_div_exact(IntSeries a, const IntSeries& b) {
    if (b.empty()) throw NonExactDivision("univariate division by zero");
    if (a.empty()) return {};
    if (a.size() < b.size()) throw NonExactDivision("univariate division underflow");
    IntSeries q(a.size() - b.size() + 1, 0);
    for (size_t step = q.size(); step-- > 0;) {
        Int lead = a[step + b.size() - 1];
        if (lead % b.back() != 0)
            throw NonExactDivision("univariate division not exact");
        Int t = lead / b.back();
        q[step] = t;
        for (size_t j = 0; j < b.size(); ++j) a[step + j] -= t * b[j];
    }
    for (const Int& c : a)
        if (c != 0) throw NonExactDivision("univariate division leaves remainder");
    return q;
}

// Poincare polynomial of the rank-2 odd-degree bundle moduli:
// [(1 + t^3)^{2g} - t^{2g} (1 + t)^{2g}] / [(1 - t^2)(1 - t^4)].
inline IntSeries rank2_poincare_closed_form(int g) {
    IntSeries cube{1, 0, 0, 1};  // 1 + t^3
    IntSeries lin{1, 1};         // 1 + t
    IntSeries a{1}, b{1};
    for (int i = 0; i < 2 * g; ++i) {
        a = useries_mul(a, cube);
        b = useries_mul(b, lin);
    }
    IntSeries shift(2 * g + 1, 0);
    shift[2 * g] = 1;
    b = useries_mul(b, shift);
    IntSeries num = useries_sub(a, b);
    IntSeries den = useries_mul(IntSeries{1, 0, -1}, IntSeries{1, 0, 0, 0, -1});
    return useries_div_exact(num, den);
}

}  // namespace motpairs::oracles
