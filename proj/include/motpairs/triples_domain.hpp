#pragma once

// Numerical side of the moduli problem: stability parameter ranges, walls,
// expected dimensions, and Euler/Ext bookkeeping for holomorphic triples
// (E1, E2, phi) with rk E2 <= 1 on a smooth curve of genus g >= 2.

#include <cstdlib>
#include <set>
#include <vector>

#include <boost/rational.hpp>

#include "motpairs/errors.hpp"

namespace motpairs {

using Rational = boost::rational<long long>;

inline long long floor_rat(const Rational& r) {
    long long q = r.numerator() / r.denominator();
    if (r.numerator() % r.denominator() != 0 && r.numerator() < 0) --q;
    return q;
}

inline long long ceil_rat(const Rational& r) {
    long long q = r.numerator() / r.denominator();
    if (r.numerator() % r.denominator() != 0 && r.numerator() > 0) ++q;
    return q;
}

// A pair problem: rank-n degree-d bundles paired with a fixed degree-d0 line
// bundle, genus-g base curve.  sigma is the stability parameter.
struct PairProblem {
    int g = 2;
    int n = 1;
    long long d = 0;
    long long d0 = 0;

    friend bool operator==(const PairProblem&, const PairProblem&) = default;
};

inline void validate(const PairProblem& p) {
    if (p.g < 2) throw EngineError("genus must be at least 2");
    if (p.n < 1) throw EngineError("rank must be at least 1");
}

// sigma-slope of a triple of total rank n+1 and total degree d+d0.
inline Rational sigma_slope(const PairProblem& p, const Rational& sigma) {
    return (Rational(p.d + p.d0) + sigma) / (p.n + 1);
}

inline Rational sigma_min(const PairProblem& p) {
    return Rational(p.d, p.n) - p.d0;
}

inline bool has_sigma_max(const PairProblem& p) { return p.n >= 2; }

inline Rational sigma_max(const PairProblem& p) {
    if (!has_sigma_max(p)) throw EngineError("sigma_max: unbounded for rank 1");
    return Rational(2 * p.n, p.n - 1) * (Rational(p.d, p.n) - p.d0);
}

inline bool sigma_in_range(const PairProblem& p, const Rational& sigma) {
    if (sigma <= sigma_min(p)) return false;
    if (has_sigma_max(p) && sigma >= sigma_max(p)) return false;
    return true;
}

// Critical values in the open range (sigma_min, sigma_max): parameters where
// a proper subtriple of rank m in 1..n-1 can share the sigma-slope.  These
// are sigma = ((n+1) k - m (d + d0)) / m over integers k, intersected with
// the open range.
inline std::vector<Rational> walls(const PairProblem& p) {
    validate(p);
    std::set<Rational> ws;
    if (p.n >= 2) {
        Rational lo = sigma_min(p), hi = sigma_max(p);
        if (lo < hi) {
            for (int m = 1; m <= p.n - 1; ++m) {
                Rational klo = Rational(m) * (Rational(p.d + p.d0) + lo) / (p.n + 1);
                Rational khi = Rational(m) * (Rational(p.d + p.d0) + hi) / (p.n + 1);
                for (long long k = floor_rat(klo); k <= ceil_rat(khi); ++k) {
                    Rational s(static_cast<long long>(p.n + 1) * k - m * (p.d + p.d0), m);
                    if (lo < s && s < hi) ws.insert(s);
                }
            }
        }
    }
    return {ws.begin(), ws.end()};
}

inline bool is_wall(const PairProblem& p, const Rational& sigma) {
    for (const auto& w : walls(p))
        if (w == sigma) return true;
    return false;
}

// Number of chambers cut out by the walls; chamber 0 sits just above
// sigma_min, the top chamber just below sigma_max.
inline int chamber_count(const PairProblem& p) {
    return static_cast<int>(walls(p).size()) + 1;
}

// A representative stability parameter interior to the given chamber.
inline Rational chamber_rep(const PairProblem& p, int chamber) {
    auto ws = walls(p);
    int count = static_cast<int>(ws.size()) + 1;
    if (chamber < 0 || chamber >= count)
        throw EngineError("chamber index out of range");
    Rational lo = (chamber == 0) ? sigma_min(p) : ws[chamber - 1];
    if (chamber == count - 1) {
        if (!has_sigma_max(p)) return lo + 1;
        Rational hi = sigma_max(p);
        if (hi <= lo) return lo + 1;
        return (lo + hi) / 2;
    }
    return (lo + ws[chamber]) / 2;
}

// Chamber containing a noncritical sigma (throws WallValue on walls).
inline int chamber_of(const PairProblem& p, const Rational& sigma) {
    auto ws = walls(p);
    int idx = 0;
    for (const auto& w : ws) {
        if (sigma == w)
            throw WallValue("sigma is a critical value");
        if (sigma > w) ++idx;
    }
    return idx;
}

// Expected dimension of the moduli space in any chamber with nonempty range.
inline long long moduli_dim(const PairProblem& p) {
    long long n = p.n;
    return (n * n - n + 1) * (p.g - 1) + 1 + p.d - n * p.d0;
}

// Numeric shadow of a triple E2 -> E1 with rk E2 in {0, 1}.
struct TripleNum {
    int rk1 = 0;
    long long deg1 = 0;
    int rk2 = 0;
    long long deg2 = 0;
};

inline long long chi_bundles(int g, int rka, long long dega, int rkb, long long degb) {
    if (rka == 0 || rkb == 0) return 0;
    return static_cast<long long>(rka) * rkb * (1 - g) +
           (static_cast<long long>(rka) * degb - static_cast<long long>(rkb) * dega);
}

// Euler pairing of triples; the hypercohomology of the relevant two-term
// complex has chi = chi(A1,B1) + chi(A2,B2) - chi(A2,B1).
inline long long triple_chi(int g, const TripleNum& a, const TripleNum& b) {
    return chi_bundles(g, a.rk1, a.deg1, b.rk1, b.deg1) +
           chi_bundles(g, a.rk2, a.deg2, b.rk2, b.deg2) -
           chi_bundles(g, a.rk2, a.deg2, b.rk1, b.deg1);
}

// dim Ext^1 between triples in the configurations the engine builds, where
// Hom and Ext^2 both vanish, so the dimension is minus the Euler pairing.
inline int ext1_dim(int g, const TripleNum& src, const TripleNum& tgt) {
    long long v = -triple_chi(g, src, tgt);
    if (v < 0)
        throw NegativeExtDim("ext1_dim: negative value " + std::to_string(v));
    return static_cast<int>(v);
}

}  // namespace motpairs
