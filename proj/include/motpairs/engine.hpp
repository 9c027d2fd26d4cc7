#pragma once

// The wall-crossing engine.  Chamber classes descend from the top chamber
// (a sum of flip strata at sigma_max); crossing a wall downward removes the
// high-side flip locus and adds the low-side one.  Stable bundle moduli come
// out of the bottom stratum of an auxiliary pair problem with a very
// negative twist, divided exactly by its projective fiber.  Every cached
// value carries a certificate expression; entries reference each other by
// canonical cache key.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <mutex>
#include <string>
#include <utility>

#include "motpairs/json_io.hpp"
#include "motpairs/stock.hpp"
#include "motpairs/strata.hpp"
#include "motpairs/triples_domain.hpp"

namespace motpairs {

struct EngineOptions {
    std::string cache_path;                        // empty: no disk cache
    std::function<void(const std::string&)> note;  // optional verbose sink
};

inline constexpr int kCacheVersion = 1;
inline constexpr const char* kCacheFormat = "motpairs-cache";

class Engine {
  public:
    explicit Engine(int g, EngineOptions opt = {}) : g_(g), opt_(std::move(opt)) {
        if (g < 2) throw EngineError("genus must be at least 2");
        if (!opt_.cache_path.empty()) load_cache();
    }

    int genus() const { return g_; }

    // Moduli class at a noncritical sigma.  Zero outside the open range;
    // interior walls are a hard error (use nclass_stable_at_wall there).
    Certified nclass(const PairProblem& p, const Rational& sigma) {
        check_problem(p);
        if (p.n == 1) {
            if (sigma <= sigma_min(p) || p.d < p.d0) return Certified::zero();
            return nclass_chamber(p, 0);
        }
        if (!sigma_in_range(p, sigma)) return Certified::zero();
        int ch = chamber_of(p, sigma);  // throws WallValue on walls
        return nclass_chamber(p, ch);
    }

    Certified nclass_chamber(const PairProblem& p, int chamber) {
        check_problem(p);
        return compute_cached(key_chamber(p, chamber), [&]() -> Certified {
            if (p.n == 1) {
                if (chamber != 0) throw EngineError("rank 1 has a single chamber");
                if (p.d < p.d0) return Certified::zero();
                return cls_sym_curve(static_cast<int>(p.d - p.d0), g_) *
                       cls_jacobian(g_);
            }
            auto ws = walls(p);
            int count = static_cast<int>(ws.size()) + 1;
            if (chamber < 0 || chamber >= count)
                throw EngineError("chamber index out of range");
            if (sigma_max(p) <= sigma_min(p)) return Certified::zero();
            if (chamber == count - 1)
                return flip_ref(p, sigma_max(p), -1);
            // One step down across the wall above this chamber.
            const Rational& w = ws[chamber];
            Certified above = chamber_ref(p, chamber + 1);
            return above - flip_ref(p, w, +1) + flip_ref(p, w, -1);
        });
    }

    // Locus of triples stable exactly at a critical value.
    Certified nclass_stable_at_wall(const PairProblem& p, const Rational& sigma_c) {
        check_problem(p);
        if (!is_critical(p, sigma_c)) return nclass(p, sigma_c);
        if (sigma_c == sigma_min(p)) return Certified::zero();
        if (has_sigma_max(p) && sigma_c == sigma_max(p)) return Certified::zero();
        return compute_cached(key_nsw(p, sigma_c), [&]() -> Certified {
            auto ws = walls(p);
            int idx = 0;
            while (ws[idx] != sigma_c) ++idx;
            return chamber_ref(p, idx + 1) - flip_ref(p, sigma_c, +1);
        });
    }

    // Flip locus on one side of a critical value (side > 0: high side).
    Certified flip_locus(const PairProblem& p, const Rational& sigma_c, int side) {
        check_problem(p);
        if (!is_critical(p, sigma_c))
            throw WallValue("flip locus requested at a noncritical sigma");
        return compute_cached(key_flip(p, sigma_c, side), [&]() -> Certified {
            return flip_locus_class(p, sigma_c, side, make_context(p, sigma_c));
        });
    }

    // Strata on the low side at sigma_min: the part of the bottom chamber
    // where the bundle is properly semistable.
    Certified dm_class(const PairProblem& p) {
        check_problem(p);
        if (p.n == 1) return Certified::zero();
        return flip_locus(p, sigma_min(p), +1);
    }

    // Bottom stratum: pairs whose underlying bundle is stable.  Computed
    // directly from the bundle moduli when the fiber is a full projective
    // space everywhere, by subtraction otherwise.
    Certified um_class(const PairProblem& p) {
        check_problem(p);
        return compute_cached(key_um(p), [&]() -> Certified {
            if (p.n == 1) return chamber_ref(p, 0);
            bool coprime = std::gcd(static_cast<long long>(p.n), std::abs(p.d)) == 1;
            bool big_slope = Rational(p.d, p.n) - p.d0 > Rational(2 * g_ - 2);
            if (coprime && big_slope) {
                long long chi = p.d - p.n * p.d0 +
                                static_cast<long long>(p.n) * (1 - g_);
                return msbundle_ref(p.n, p.d) * cls_jacobian(g_) *
                       cls_projective(static_cast<int>(chi) - 1);
            }
            return chamber_ref(p, 0) - flip_ref(p, sigma_min(p), +1);
        });
    }

    // Moduli of stable bundles of rank n and degree d, gcd(n, d) = 1.
    Certified msbundle_class(int n, long long d) {
        if (n < 1) throw EngineError("rank must be at least 1");
        if (n > 1 && std::gcd(static_cast<long long>(n), std::abs(d)) != 1)
            throw NotCoprime("stable bundle moduli need gcd(n, d) = 1");
        return compute_cached(key_ms(n, d), [&]() -> Certified {
            if (n == 1) return cls_jacobian(g_);
            auto [aux, chi] = aux_problem(n, d);
            Certified um_sub = chamber_ref(aux, 0) - flip_ref(aux, sigma_min(aux), +1);
            Certified den = cls_jacobian(g_) * cls_projective(static_cast<int>(chi) - 1);
            return cert_div_exact(um_sub, den,
                                  "bundle moduli from twisted pair problem");
        });
    }

    // Pair moduli (d0 = 0) divided by the Jacobian factor of the line.
    Certified pairs_class(const PairProblem& p_in, int chamber) {
        PairProblem p = p_in;
        p.d0 = 0;
        check_problem(p);
        return compute_cached(key_pairs(p, chamber), [&]() -> Certified {
            return cert_div_exact(chamber_ref(p, chamber), cls_jacobian(g_),
                                  "pairs class: fixed line bundle");
        });
    }

    NameResolver resolver() {
        return [this](const std::string& key) -> ClassPoly {
            std::lock_guard<std::mutex> lk(mu_);
            auto it = memo_.find(key);
            if (it == memo_.end()) throw UnresolvedName("unknown cache key " + key);
            return it->second.cls;
        };
    }

    std::map<std::string, Certified> snapshot() const {
        std::lock_guard<std::mutex> lk(mu_);
        return memo_;
    }

    void load_cache() {
        std::ifstream in(opt_.cache_path);
        if (!in) return;
        Json j;
        try {
            in >> j;
        } catch (const Json::exception&) {
            return;  // unreadable cache: start fresh
        }
        if (!j.is_object() || j.value("format", "") != kCacheFormat ||
            j.value("version", -1) != kCacheVersion)
            return;
        if (!j.contains("entries") || !j["entries"].is_object()) return;
        std::lock_guard<std::mutex> lk(mu_);
        for (const auto& [key, entry] : j["entries"].items()) {
            try {
                Certified c{class_poly_from_json(entry.at("class")),
                            parse_expr(entry.at("certificate").get<std::string>())};
                memo_.emplace(key, std::move(c));
            } catch (const std::exception&) {
                // Skip damaged entries; they will be recomputed.
            }
        }
    }

    void save_cache() const {
        if (opt_.cache_path.empty()) return;
        Json entries = Json::object();
        {
            std::lock_guard<std::mutex> lk(mu_);
            for (const auto& [key, c] : memo_)
                entries[key] = Json{{"class", class_poly_to_json(c.cls)},
                                    {"certificate", serialize(c.cert)}};
        }
        Json j{{"format", kCacheFormat},
               {"version", kCacheVersion},
               {"entries", entries}};
        std::string tmp = opt_.cache_path + ".tmp";
        {
            std::ofstream out(tmp);
            out << j.dump(1) << "\n";
            if (!out) throw EngineError("cannot write cache file " + tmp);
        }
        std::filesystem::rename(tmp, opt_.cache_path);
    }

    // Canonical cache keys; they double as certificate names, so they avoid
    // whitespace and parentheses.
    std::string key_chamber(const PairProblem& p, int ch) const {
        return "N:" + prob_key(p) + ":ch=" + std::to_string(ch);
    }
    std::string key_nsw(const PairProblem& p, const Rational& s) const {
        return "NSW:" + prob_key(p) + ":s=" + rational_str(s);
    }
    std::string key_flip(const PairProblem& p, const Rational& s, int side) const {
        return "S:" + prob_key(p) + ":s=" + rational_str(s) +
               ":side=" + (side > 0 ? "hi" : "lo");
    }
    std::string key_um(const PairProblem& p) const { return "UM:" + prob_key(p); }
    std::string key_ms(int n, long long d) const {
        return "MS:g=" + std::to_string(g_) + ":n=" + std::to_string(n) +
               ":d=" + std::to_string(d);
    }
    std::string key_pairs(const PairProblem& p, int ch) const {
        return "PAIRS:" + prob_key(p) + ":ch=" + std::to_string(ch);
    }

  private:
    void check_problem(const PairProblem& p) const {
        validate(p);
        if (p.g != g_) throw EngineError("problem genus differs from engine genus");
        if (p.n > 4)
            throw UnsupportedShape("rank above 4 is outside the catalogue");
    }

    std::string prob_key(const PairProblem& p) const {
        return "g=" + std::to_string(p.g) + ":n=" + std::to_string(p.n) +
               ":d=" + std::to_string(p.d) + ":d0=" + std::to_string(p.d0);
    }

    Certified compute_cached(const std::string& key,
                             const std::function<Certified()>& fn) {
        {
            std::lock_guard<std::mutex> lk(mu_);
            auto it = memo_.find(key);
            if (it != memo_.end()) return it->second;
        }
        Certified val = fn();  // recursion happens unlocked
        std::lock_guard<std::mutex> lk(mu_);
        auto [it, inserted] = memo_.try_emplace(key, std::move(val));
        if (!inserted && !(it->second.cls == val.cls))
            throw EngineError("conflicting values computed for cache key " + key);
        return it->second;
    }

    // Named references keep certificate trees shallow: each cached entry
    // cites its ingredients by key.
    Certified chamber_ref(const PairProblem& p, int ch) {
        Certified c = nclass_chamber(p, ch);
        return {c.cls, mk_named(key_chamber(p, ch))};
    }
    Certified flip_ref(const PairProblem& p, const Rational& s, int side) {
        Certified c = flip_locus(p, s, side);
        return {c.cls, mk_named(key_flip(p, s, side))};
    }
    Certified msbundle_ref(int n, long long d) {
        Certified c = msbundle_class(n, d);
        return {c.cls, mk_named(key_ms(n, d))};
    }
    Certified um_ref(const PairProblem& p) {
        Certified c = um_class(p);
        return {c.cls, mk_named(key_um(p))};
    }

    std::pair<PairProblem, long long> aux_problem(int n, long long d) const {
        long long e = floor_rat(Rational(d, n)) - 2 * g_;
        PairProblem aux{g_, n, d, e};
        long long chi = d - static_cast<long long>(n) * e +
                        static_cast<long long>(n) * (1 - g_);
        return {aux, chi};
    }

    StrataContext make_context(const PairProblem& p, const Rational& sigma_c) {
        StrataContext ctx;
        ctx.g = g_;
        ctx.p = p;
        ctx.sigma = sigma_c;
        ctx.bundle_moduli = [this](int n, long long d) { return msbundle_ref(n, d); };
        ctx.aux_pairs = [this](int n1, long long d1) {
            auto [aux, chi] = aux_problem(n1, d1);
            return std::make_pair(um_ref(aux), chi);
        };
        ctx.residual = [this, p, sigma_c](int nr, long long dr) {
            return residual_class(p, nr, dr, sigma_c);
        };
        ctx.note = opt_.note;
        return ctx;
    }

    Certified residual_class(const PairProblem& p, int n_res, long long d_res,
                             const Rational& sigma_c) {
        if (n_res == 0) return cls_jacobian(g_);
        PairProblem q{g_, n_res, d_res, p.d0};
        if (q.n >= 2) {
            if (!sigma_in_range(q, sigma_c)) {
                if (opt_.note)
                    opt_.note("residual rank " + std::to_string(n_res) + " deg " +
                              std::to_string(d_res) +
                              " empty at sigma=" + rational_str(sigma_c) +
                              " (outside its range; emptiness assumed)");
                return Certified::zero();
            }
            if (is_wall(q, sigma_c)) {
                Certified c = nclass_stable_at_wall(q, sigma_c);
                return {c.cls, mk_named(key_nsw(q, sigma_c))};
            }
        }
        Certified c = nclass(q, sigma_c);
        if (c.cls.is_zero()) return Certified::zero();
        return {c.cls, mk_named(key_chamber(q, q.n == 1 ? 0 : chamber_of(q, sigma_c)))};
    }

    int g_;
    EngineOptions opt_;
    std::map<std::string, Certified> memo_;
    mutable std::mutex mu_;
};

}  // namespace motpairs
