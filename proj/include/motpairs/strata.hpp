#pragma once

// Flip-locus stratification at a critical value of the stability parameter.
// A stratum type records which stable summands split off (the pieces), how
// their copies are distributed over the steps of the canonical filtration
// (the attachment matrix, column r is glued to the residual first, column 1
// is the socle), and the residual triple left over.  stratum_class turns a
// type into a motivic class; shapes derive from the iterated-extension
// structure of the stratum with its non-degeneration conditions.

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <string>
#include <vector>

#include "motpairs/json_io.hpp"
#include "motpairs/lambda.hpp"
#include "motpairs/motive_expr.hpp"
#include "motpairs/stock.hpp"
#include "motpairs/triples_domain.hpp"

namespace motpairs {

struct Piece {
    int n = 0;
    long long d = 0;
    friend auto operator<=>(const Piece&, const Piece&) = default;
};

struct StratumType {
    std::vector<Piece> pieces;          // one entry per matrix row, canonical order
    std::vector<std::vector<int>> a;    // rows x cols, nonnegative, no zero column
    int n_res = 0;                      // rank of the residual bundle part
    long long d_res = 0;                // its degree (0 when n_res == 0)

    int rows() const { return static_cast<int>(pieces.size()); }
    int cols() const { return a.empty() ? 0 : static_cast<int>(a[0].size()); }
    long long copies() const {
        long long c = 0;
        for (const auto& row : a) for (int x : row) c += x;
        return c;
    }
    long long mass() const {
        long long m = 0;
        for (int i = 0; i < rows(); ++i) {
            long long s = 0;
            for (int x : a[i]) s += x;
            m += s * pieces[i].n;
        }
        return m;
    }
    friend auto operator<=>(const StratumType&, const StratumType&) = default;
};

// The open stratum at sigma_min: the full-rank bundle itself as one piece.
inline bool is_base_type(const StratumType& t, const PairProblem& p) {
    return t.n_res == 0 && t.rows() == 1 && t.cols() == 1 && t.a[0][0] == 1 &&
           t.pieces[0].n == p.n && t.pieces[0].d == p.d;
}

inline bool is_critical(const PairProblem& p, const Rational& sigma) {
    if (sigma == sigma_min(p)) return true;
    if (has_sigma_max(p) && sigma == sigma_max(p)) return true;
    return is_wall(p, sigma);
}

// All stratum types at a critical value: pieces of slope mu_c, attachment
// matrices bounded by the rank budget, residual determined by what is left.
// Types are side-independent; only the class computation depends on the side.
inline std::vector<StratumType> enumerate_types(const PairProblem& p,
                                                const Rational& sigma_c) {
    validate(p);
    std::vector<StratumType> out;
    if (!is_critical(p, sigma_c)) return out;
    Rational mu = sigma_slope(p, sigma_c);
    bool at_bottom = (sigma_c == sigma_min(p));

    std::vector<Piece> cand;
    for (int nu = 1; nu <= p.n; ++nu) {
        Rational dd = mu * nu;
        if (dd.denominator() == 1) cand.push_back({nu, dd.numerator()});
    }
    if (cand.empty()) return out;

    for (int r = 1; r <= p.n; ++r) {
        // Candidate rows in canonical order: (rank, degree, vector).
        struct Row {
            Piece pc;
            std::vector<int> vec;
            long long mass;
        };
        std::vector<Row> rows;
        std::vector<int> cur(r, 0);
        std::function<void(int)> gen = [&](int pos) {
            if (pos == r) {
                long long s = std::accumulate(cur.begin(), cur.end(), 0LL);
                if (s == 0) return;
                for (const Piece& pc : cand)
                    if (s * pc.n <= p.n) rows.push_back({pc, cur, s * pc.n});
                return;
            }
            for (int x = 0; x <= p.n; ++x) {
                cur[pos] = x;
                gen(pos + 1);
            }
            cur[pos] = 0;
        };
        gen(0);
        std::sort(rows.begin(), rows.end(), [](const Row& x, const Row& y) {
            return std::tie(x.pc.n, x.pc.d, x.vec) < std::tie(y.pc.n, y.pc.d, y.vec);
        });

        std::vector<int> chosen;
        std::function<void(int, long long)> pick = [&](int from, long long mass) {
            if (!chosen.empty()) {
                // Every filtration step must do something.
                bool cols_ok = true;
                for (int j = 0; j < r && cols_ok; ++j) {
                    int colsum = 0;
                    for (int i : chosen) colsum += rows[i].vec[j];
                    if (colsum == 0) cols_ok = false;
                }
                int n_res = p.n - static_cast<int>(mass);
                if (cols_ok && n_res >= 0 && (n_res >= 1 || at_bottom)) {
                    StratumType t;
                    long long dsum = 0;
                    for (int i : chosen) {
                        t.pieces.push_back(rows[i].pc);
                        t.a.push_back(rows[i].vec);
                        long long s = std::accumulate(rows[i].vec.begin(),
                                                      rows[i].vec.end(), 0LL);
                        dsum += s * rows[i].pc.d;
                    }
                    t.n_res = n_res;
                    t.d_res = (n_res == 0) ? 0 : p.d - dsum;
                    bool ok = true;
                    if (n_res >= 1) {
                        // Residual sits on the same critical slope.
                        Rational lhs = (Rational(t.d_res + p.d0) + sigma_c);
                        ok = (lhs == mu * (n_res + 1));
                    }
                    if (ok) out.push_back(t);
                }
            }
            for (int i = from; i < static_cast<int>(rows.size()); ++i) {
                if (mass + rows[i].mass > p.n) continue;
                chosen.push_back(i);
                pick(i, mass + rows[i].mass);
                chosen.pop_back();
            }
        };
        pick(0, 0);
    }
    std::sort(out.begin(), out.end());
    return out;
}

// Order of the permutation symmetry among identical decorated rows.
inline Int sym_group_order(const StratumType& t) {
    Int result = 1;
    int run = 1;
    for (int i = 1; i < t.rows(); ++i) {
        if (t.pieces[i] == t.pieces[i - 1] && t.a[i] == t.a[i - 1])
            ++run;
        else
            run = 1;
        result *= run;
    }
    return result;
}

inline Json stratum_type_to_json(const StratumType& t) {
    Json pieces = Json::array();
    for (const auto& pc : t.pieces)
        pieces.push_back(Json{{"rank", pc.n}, {"deg", pc.d}});
    return Json{{"pieces", pieces},
                {"matrix", t.a},
                {"residual_rank", t.n_res},
                {"residual_deg", t.d_res},
                {"copies", t.copies()},
                {"sym_order", sym_group_order(t).str()}};
}

inline std::vector<std::vector<Int>> stirling2_table(int kmax) {
    std::vector<std::vector<Int>> s(kmax + 1, std::vector<Int>(kmax + 1, 0));
    s[0][0] = 1;
    for (int n = 1; n <= kmax; ++n)
        for (int k = 1; k <= n; ++k)
            s[n][k] = s[n - 1][k - 1] + Int(k) * s[n - 1][k];
    return s;
}

// Class of ordered k-tuples of pairwise distinct points of a base with class
// m: F(k) = m^k - sum_{j<k} S(k,j) F(j), with S the Stirling partition count.
inline Certified ordered_config_class(const Certified& m, int k) {
    if (k < 0) throw EngineError("ordered_config_class: negative k");
    auto s = stirling2_table(k);
    std::vector<Certified> f(k + 1, Certified::one());
    for (int n = 1; n <= k; ++n) {
        Certified pw = Certified::one();
        for (int i = 0; i < n; ++i) pw = pw * m;
        for (int j = 1; j < n; ++j) pw = pw - Certified::constant(s[n][j]) * f[j];
        f[n] = pw;
    }
    return f[k];
}

// A species for the decorated configuration count: `count` unordered points
// on the common base, each carrying a decoration with class `dec`.
struct DcqcSpecies {
    Certified dec;
    int count = 1;
};

namespace detail {

inline std::string dcqc_key(const std::vector<DcqcSpecies>& sp) {
    std::vector<std::string> parts;
    for (const auto& s : sp)
        parts.push_back(std::to_string(s.count) + "*" + serialize(s.dec.cert));
    std::sort(parts.begin(), parts.end());
    std::string key;
    for (const auto& x : parts) key += x + "|";
    return key;
}

// Set partitions of the slot multiset, canonicalized (each group a sorted
// vector of species ids, groups sorted), deduplicated across interchangeable
// slots of the same species.
inline std::set<std::vector<std::vector<int>>> slot_partitions(
    const std::vector<int>& slots) {
    std::set<std::vector<std::vector<int>>> out;
    int k = static_cast<int>(slots.size());
    std::vector<int> assign(k, 0);
    std::function<void(int, int)> rec = [&](int i, int blocks) {
        if (i == k) {
            std::vector<std::vector<int>> groups(blocks);
            for (int j = 0; j < k; ++j) groups[assign[j]].push_back(slots[j]);
            for (auto& grp : groups) std::sort(grp.begin(), grp.end());
            std::sort(groups.begin(), groups.end());
            out.insert(groups);
            return;
        }
        for (int b = 0; b < blocks; ++b) {
            assign[i] = b;
            rec(i + 1, blocks);
        }
        assign[i] = blocks;
        rec(i + 1, blocks + 1);
    };
    if (k > 0) rec(0, 0);
    else out.insert({});
    return out;
}

inline Certified dcqc_rec(const Certified& base,
                          const std::vector<DcqcSpecies>& species,
                          std::map<std::string, Certified>& memo) {
    std::string key = dcqc_key(species);
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;

    Certified result = Certified::one();
    for (const auto& s : species) result = result * cert_lambda(s.count, base * s.dec);

    std::vector<int> slots;
    for (int i = 0; i < static_cast<int>(species.size()); ++i)
        for (int c = 0; c < species[i].count; ++c) slots.push_back(i);

    for (const auto& part : slot_partitions(slots)) {
        if (part.size() == slots.size()) continue;  // the all-distinct pattern
        // Collapse each group to one point carrying the Sym-product of its
        // decorations; groups with equal content become one species.
        std::map<std::vector<int>, std::pair<Certified, int>> merged;
        for (const auto& grp : part) {
            std::vector<int> content(species.size(), 0);
            for (int id : grp) ++content[id];
            auto mit = merged.find(content);
            if (mit != merged.end()) {
                ++mit->second.second;
                continue;
            }
            Certified dec = Certified::one();
            for (int id = 0; id < static_cast<int>(species.size()); ++id)
                if (content[id] > 0) dec = dec * cert_lambda(content[id], species[id].dec);
            merged.emplace(content, std::make_pair(dec, 1));
        }
        std::vector<DcqcSpecies> ms;
        for (auto& [content, dc] : merged) ms.push_back({dc.first, dc.second});
        result = result - dcqc_rec(base, ms, memo);
    }
    memo.emplace(key, result);
    return result;
}

}  // namespace detail

// Configurations of pairwise distinct points of one base, grouped into
// species: points of a species are unordered among themselves and carry
// decorations with the given fiber class.  Computed by removing collision
// patterns from the product of Sym powers.
inline Certified dcqc_same_base(const Certified& base,
                                const std::vector<DcqcSpecies>& species) {
    std::map<std::string, Certified> memo;
    return detail::dcqc_rec(base, species, memo);
}

// Everything stratum_class needs from the engine.
struct StrataContext {
    int g = 2;
    PairProblem p;
    Rational sigma;
    // Moduli of stable bundles of coprime type.
    std::function<Certified(int, long long)> bundle_moduli;
    // For a non-coprime type (n1, d1): the pair moduli over semistable
    // bundles with a fixed very negative twist line, plus its fiber
    // dimension chi_e.  Used to realize stable-locus fibrations as ratios.
    std::function<std::pair<Certified, long long>(int, long long)> aux_pairs;
    // Class of the residual triples, stable at the ambient sigma; must
    // return the zero class for empty residual moduli.
    std::function<Certified(int, long long)> residual;
    std::function<void(const std::string&)> note;  // optional verbose sink
};

namespace detail {

inline void ctx_note(const StrataContext& ctx, const std::string& s) {
    if (ctx.note) ctx.note(s);
}

inline Certified P(int k) { return cls_projective(k - 1); }  // [P^{k-1}]

inline Certified QL(int k) {  // L^k - 1
    if (k == 0) return Certified::zero();
    return certified_l_poly({{k, 1}, {0, -1}});
}

inline Certified Lp(int k) { return Certified::lefschetz_power(k); }

// Stable-locus fibration with fiber class `fiber` over the stable bundles of
// non-coprime type (n1, d1), realized as an exact ratio against the
// fixed-twist pair moduli whose fiber is a full projective space.
inline Certified ratio_stable_fiber(const StrataContext& ctx, int n1, long long d1,
                                    const Certified& fiber) {
    auto [um, chi] = ctx.aux_pairs(n1, d1);
    Certified den = cls_jacobian(ctx.g) * P(static_cast<int>(chi));
    return cert_div_exact(um * fiber, den,
                          "stable-locus ratio for rank " + std::to_string(n1) +
                              " degree " + std::to_string(d1));
}

}  // namespace detail

// Motivic class of one stratum.  side > 0: the pieces are iterated subs and
// extension classes point from the residual into the pieces (the locus on
// the high side of the wall); side < 0 mirrors this with the residual as
// sub.  Throws UnsupportedShape for attachment patterns outside the
// catalogue (those would need rank budget above 4 to occur with nonempty
// residual).
inline Certified stratum_class(const StratumType& t, int side,
                               const StrataContext& ctx) {
    using detail::Lp;
    using detail::P;
    using detail::QL;
    const int g = ctx.g;

    Certified R = ctx.residual(t.n_res, t.d_res);
    if (R.cls.is_zero()) return Certified::zero();

    TripleNum resid{t.n_res, t.n_res > 0 ? t.d_res : 0, 1, ctx.p.d0};
    auto ext_base = [&](const Piece& pc) {
        TripleNum pn{pc.n, pc.d, 0, 0};
        return side > 0 ? ext1_dim(g, resid, pn) : ext1_dim(g, pn, resid);
    };

    bool all_coprime = true;
    for (const auto& pc : t.pieces)
        if (std::gcd(static_cast<long long>(pc.n), std::abs(pc.d)) != 1)
            all_coprime = false;

    const int r = t.cols();

    if (all_coprime) {
        for (const auto& pc : t.pieces)
            if (pc != t.pieces[0])
                throw UnsupportedShape(
                    "coprime pieces of unequal type in one stratum");
        Piece pc = t.pieces[0];
        int v = ext_base(pc);
        if (v == 0) return Certified::zero();
        int eps = pc.n * pc.n * (g - 1);
        Certified M = ctx.bundle_moduli(pc.n, pc.d);

        if (r == 1) {
            std::map<int, int> mult;
            for (int i = 0; i < t.rows(); ++i) ++mult[t.a[i][0]];
            std::vector<DcqcSpecies> sp;
            for (auto [k, c] : mult) {
                Certified gr = cls_grassmannian(k, v);
                if (gr.cls.is_zero()) return Certified::zero();
                sp.push_back({gr, c});
            }
            return dcqc_same_base(M, sp) * R;
        }

        // Rows are already sorted ascending since all pieces agree.
        const auto& A = t.a;
        auto is = [&](std::initializer_list<std::vector<int>> want) {
            return A == std::vector<std::vector<int>>(want);
        };
        Certified U2 = ordered_config_class(M, 2);

        if (r == 2) {
            if (is({{1, 1}}))
                return M * R * P(v) * Lp(v - 1) * P(eps + 1);
            if (is({{0, 1}, {1, 0}}))
                return U2 * R * P(v) * Lp(v) * P(eps);
            if (is({{2, 1}}))
                return M * R * P(v) *
                       (cls_grassmannian(2, v + eps) - cls_grassmannian(2, v - 1));
            if (is({{1, 2}}))
                return M * R * cls_grassmannian(2, v) * Lp(v - 1) * QL(eps + 1) * P(eps);
            if (is({{1, 0}, {1, 1}}))
                return U2 * R * P(v) * (P(v + eps) * P(v + eps) - P(v - 1) * P(v));
            if (is({{0, 1}, {1, 1}}))
                return U2 * R * P(v) * P(v) * Lp(v - 1) * QL(eps + 1) * P(eps);
            if (is({{0, 1}, {2, 0}}))
                return U2 * R * P(v) *
                       (cls_grassmannian(2, v + eps) - cls_grassmannian(2, v));
            if (is({{0, 2}, {1, 0}}))
                return U2 * R * cls_grassmannian(2, v) * Lp(v + 1) * QL(eps) * P(eps - 1);
            if (is({{0, 1}, {0, 1}, {1, 0}})) {
                // Two copies glued to the residual over a socle copy. The
                // section avoids the two intermediate rank-two subobjects.
                // Those are swapped wherever the unordered top pair is a
                // conjugate orbit, leaving only their common socle to avoid
                // there, so the avoided locus must be assembled from the
                // pair configuration rather than removed per member.
                Certified c = M - Certified::one();
                Certified pair_dec =
                    cert_lambda(2, c * P(eps)) - c * cert_lambda(2, P(eps));
                Certified ord = (c * c - c) * P(eps) * P(eps);
                return R * M * Lp(v) * (pair_dec * P(2 * v) - ord * P(v));
            }
            if (is({{0, 1}, {1, 0}, {1, 0}})) {
                // One copy glued to the residual, unordered socle pair whose
                // restrictions must not vanish simultaneously.
                int w = v + eps;
                Certified c = M - Certified::one();
                auto dq = [&](const Certified& fib) {
                    return cert_lambda(2, c * fib) - c * cert_lambda(2, fib);
                };
                return R * M * P(v) * (dq(P(w)) - dq(P(v)));
            }
        }

        if (r == 3) {
            if (is({{1, 1, 1}}))
                return M * R * P(v) * Lp(2 * v + eps - 2) * P(eps + 1) * P(eps + 1);
            if (is({{0, 0, 1}, {1, 1, 0}}))
                return U2 * R * P(v) * Lp(2 * v + eps - 1) * P(eps) * P(eps + 1);
            if (is({{0, 1, 0}, {1, 0, 1}}))
                return U2 * R * P(v) * Lp(2 * v + eps) * P(eps) * P(eps);
            if (is({{0, 1, 1}, {1, 0, 0}}))
                return U2 * R * P(v) * Lp(2 * v + eps - 1) * P(eps + 1) * P(eps);
            if (is({{0, 0, 1}, {0, 1, 0}, {1, 0, 0}}))
                return ordered_config_class(M, 3) * R * P(v) * Lp(2 * v + eps) *
                       P(eps) * P(eps);
        }

        throw UnsupportedShape("attachment pattern outside the catalogue (" +
                               std::to_string(t.rows()) + " rows, " +
                               std::to_string(r) + " cols, " +
                               std::to_string(t.copies()) + " copies)");
    }

    // Some piece has non-coprime type: only single-copy rows with at most
    // one such piece fit in the rank budget with nonempty residual.
    for (int i = 0; i < t.rows(); ++i) {
        long long s = std::accumulate(t.a[i].begin(), t.a[i].end(), 0LL);
        if (s != 1)
            throw UnsupportedShape("multiple copies of a non-coprime piece");
    }
    if (t.rows() > 2)
        throw UnsupportedShape("more than two rows with a non-coprime piece");

    std::vector<int> nc;
    for (int i = 0; i < t.rows(); ++i)
        if (std::gcd(static_cast<long long>(t.pieces[i].n), std::abs(t.pieces[i].d)) != 1)
            nc.push_back(i);
    if (nc.size() != 1)
        throw UnsupportedShape("two non-coprime pieces in one stratum");

    auto row_factor = [&](int i, const Certified& fiber) {
        const Piece& pc = t.pieces[i];
        if (std::gcd(static_cast<long long>(pc.n), std::abs(pc.d)) != 1)
            return detail::ratio_stable_fiber(ctx, pc.n, pc.d, fiber);
        return ctx.bundle_moduli(pc.n, pc.d) * fiber;
    };

    if (r == 1) {
        Certified xc = R;
        for (int i = 0; i < t.rows(); ++i) {
            int v = ext_base(t.pieces[i]);
            if (v == 0) return Certified::zero();
            xc = xc * row_factor(i, P(v));
        }
        return xc;
    }

    if (r == 2 && t.rows() == 2) {
        int deep = (t.a[0][1] == 1) ? 0 : 1;
        int socle = 1 - deep;
        if (t.a[deep][1] != 1 || t.a[socle][0] != 1)
            throw UnsupportedShape("unexpected two-step non-coprime pattern");
        int vd = ext_base(t.pieces[deep]);
        int vs = ext_base(t.pieces[socle]);
        if (vd == 0) return Certified::zero();
        int eps12 = t.pieces[deep].n * t.pieces[socle].n * (g - 1);
        Certified socle_fiber = P(vs + eps12) - P(vs);
        return row_factor(deep, P(vd)) * row_factor(socle, socle_fiber) * R;
    }

    throw UnsupportedShape("non-coprime stratum pattern outside the catalogue");
}

// Sum of the stratum classes on one side of a critical value, excluding the
// open bottom stratum (which is not a flip locus).
inline Certified flip_locus_class(const PairProblem& p, const Rational& sigma_c,
                                  int side, const StrataContext& ctx) {
    Certified total = Certified::zero();
    for (const auto& t : enumerate_types(p, sigma_c)) {
        if (is_base_type(t, p)) continue;
        total = total + stratum_class(t, side, ctx);
    }
    return total;
}

}  // namespace motpairs
