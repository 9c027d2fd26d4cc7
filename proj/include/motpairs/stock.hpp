#pragma once

// Stock classes the engine composes: curve, Lefschetz, projective spaces,
// Grassmannians, frame and general-linear classes, the Jacobian and the
// symmetric powers of the curve.  Everything returns a Certified value, so
// each class carries an expression tree over {C, L, Z} witnessing it.

#include <map>

#include "motpairs/motive_expr.hpp"

namespace motpairs {

// Integer polynomial in L as a Certified value (class plus certificate).
inline Certified certified_l_poly(const std::map<int, Int>& coeffs) {
    ClassPoly cls;
    std::vector<MotiveExpr> parts;
    for (const auto& [k, c] : coeffs) {
        if (c == 0) continue;
        cls += ClassPoly::monomial(k, k, c);
        if (c == 1)
            parts.push_back(mk_l_power(k));
        else
            parts.push_back(mk_mul({mk_const(c), mk_l_power(k)}));
    }
    if (parts.empty()) return Certified::zero();
    return {cls, mk_add(std::move(parts))};
}

inline Certified cls_curve(int g) { return {curve_class(g), mk_c()}; }

inline Certified cls_lefschetz(int power = 1) {
    return Certified::lefschetz_power(power);
}

// [P^n] = 1 + L + ... + L^n; the zero class for n < 0 (empty space).
inline Certified cls_projective(int n) {
    std::map<int, Int> c;
    for (int i = 0; i <= n; ++i) c[i] = 1;
    return certified_l_poly(c);
}

// Frame class: ordered k-tuples of independent vectors in a w-dimensional
// space, prod_{i<k} (L^w - L^i).
inline Certified cls_frames(int k, int w) {
    Certified r = Certified::one();
    for (int i = 0; i < k; ++i) {
        std::map<int, Int> f;
        f[w] = 1;
        f[i] += -1;
        r = r * certified_l_poly(f);
    }
    return r;
}

inline Certified cls_gl(int k) { return cls_frames(k, k); }

// Grassmannian of k-planes in w-space: frames(k, w) / GL(k), divided exactly.
inline Certified cls_grassmannian(int k, int w) {
    if (k < 0 || w < k) return Certified::zero();
    if (k == 0) return Certified::one();
    return cert_div_exact(cls_frames(k, w), cls_gl(k), "grassmannian(k,w)");
}

// Jacobian of the curve: (1-u)^g (1-v)^g, certified as
// lambda^{2g-1}(C) / [P^{g-1}].
inline Certified cls_jacobian(int g) {
    ClassPoly u1 = ClassPoly::one() - ClassPoly::monomial(1, 0);
    ClassPoly v1 = ClassPoly::one() - ClassPoly::monomial(0, 1);
    ClassPoly jac = u1.pow(g) * v1.pow(g);
    MotiveExpr cert = mk_div(mk_lam(2 * g - 1, mk_c()), cls_projective(g - 1).cert,
                             "jacobian = lambda^{2g-1}(C) / P^{g-1}");
    return {jac, cert};
}

// k-th symmetric power of the curve.
inline Certified cls_sym_curve(int k, int g) {
    return {lambda_k(curve_class(g), k), mk_lam(k, mk_c())};
}

}  // namespace motpairs
