#pragma once

// Command-line front end: wall listings, stratum types, chamber classes,
// pair moduli classes, and the self-check suite.  Output is deterministic
// for a fixed invocation and cache state; verbose notes go to the error
// stream so they never perturb stdout.

#include <algorithm>
#include <atomic>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "motpairs/engine.hpp"
#include "motpairs/oracles.hpp"

namespace motpairs::cli {

struct RunConfig {
    int g = 2;
    int n = 1;
    long long d = 0;
    long long d0 = 0;
    std::string chamber = "bottom";  // index, exact "p/q" sigma, top, bottom
    std::string sigma;               // types: critical value as "p/q"
    std::string output = "json";     // json or plain
    std::string cache_path;
    std::string grid = "small";
    int jobs = 1;
    bool verbose = false;
};

namespace detail {

inline bool tate_type(const ClassPoly& c) {
    for (const auto& [m, coef] : c.terms())
        if (m.p != m.q) return false;
    return true;
}

// Plain rendering: collapse to q = uv when the class is of Tate type.
inline std::string plain_class_str(const ClassPoly& c) {
    if (c.is_zero()) return "0";
    if (!tate_type(c)) return c.str();
    std::ostringstream os;
    bool first = true;
    for (const auto& [m, coef] : c.terms()) {
        Int a = coef;
        bool neg = a < 0;
        if (neg) a = -a;
        os << (first ? (neg ? "-" : "") : (neg ? " - " : " + "));
        if (m.p == 0) {
            os << a.str();
        } else {
            if (a != 1) os << a.str() << "*";
            os << (m.p == 1 ? "q" : "q^" + std::to_string(m.p));
        }
        first = false;
    }
    return os.str();
}

inline Json poincare_json(const ClassPoly& c) {
    Json arr = Json::array();
    for (const Int& b : c.poincare()) arr.push_back(b.str());
    return arr;
}

struct Selector {
    enum class Kind { index, sigma } kind = Kind::index;
    int index = 0;
    Rational sigma;
};

inline Selector parse_selector(const PairProblem& p, const std::string& s) {
    Selector sel;
    if (s == "bottom") {
        sel.index = 0;
    } else if (s == "top") {
        sel.index = chamber_count(p) - 1;
    } else if (s.find('/') != std::string::npos) {
        sel.kind = Selector::Kind::sigma;
        sel.sigma = rational_from_str(s);
    } else {
        try {
            sel.index = std::stoi(s);
        } catch (const std::exception&) {
            throw UsageError("chamber selector must be an index, \"p/q\", top, or bottom");
        }
        if (sel.index < 0 || sel.index >= chamber_count(p))
            throw UsageError("chamber index out of range (have " +
                             std::to_string(chamber_count(p)) + " chambers)");
    }
    return sel;
}

inline Json class_payload(Engine& eng, const PairProblem& p, const std::string& sel_str,
                          bool pairs_mode) {
    Selector sel = parse_selector(p, sel_str);
    Certified c = Certified::zero();
    Json chamber = nullptr;
    Json sigma = nullptr;
    if (sel.kind == Selector::Kind::index) {
        chamber = sel.index;
        sigma = rational_str(chamber_rep(p, sel.index));
        c = pairs_mode ? eng.pairs_class(p, sel.index) : eng.nclass_chamber(p, sel.index);
    } else {
        sigma = rational_str(sel.sigma);
        bool in_range = p.n == 1 ? sel.sigma > sigma_min(p) : sigma_in_range(p, sel.sigma);
        if (in_range) {
            int ch = p.n == 1 ? 0 : chamber_of(p, sel.sigma);  // walls are an error
            chamber = ch;
            c = pairs_mode ? eng.pairs_class(p, ch) : eng.nclass_chamber(p, ch);
        }
    }
    long long dim = moduli_dim(p) - (pairs_mode ? p.g : 0);
    return Json{{"g", p.g},
                {"n", p.n},
                {"d", p.d},
                {"d0", p.d0},
                {"space", pairs_mode ? "pairs" : "triples"},
                {"chamber", chamber},
                {"sigma", sigma},
                {"dimension", dim},
                {"empty", c.cls.is_zero()},
                {"epoly", class_poly_to_json(c.cls)},
                {"poincare", poincare_json(c.cls)},
                {"euler", c.cls.euler().str()},
                {"certificate", serialize(c.cert)}};
}

inline void print_class_plain(const Json& payload, std::ostream& out) {
    ClassPoly c = class_poly_from_json(payload["epoly"]);
    out << "dimension: " << payload["dimension"].get<long long>() << "\n";
    out << "euler: " << payload["euler"].get<std::string>() << "\n";
    out << "class: " << plain_class_str(c) << "\n";
    out << "poincare:";
    for (const auto& b : payload["poincare"]) out << " " << b.get<std::string>();
    out << "\n";
}

// One self-check: a named comparison of two exactly rendered values.
inline OracleReport report(std::string name, Json inputs, std::string expected,
                           std::string actual) {
    OracleReport r;
    r.name = std::move(name);
    r.inputs = std::move(inputs);
    r.pass = expected == actual;
    r.expected = std::move(expected);
    r.actual = std::move(actual);
    return r;
}

inline std::string wall_list_str(const std::vector<Rational>& ws) {
    std::string s;
    for (const auto& w : ws) s += rational_str(w) + ";";
    return s;
}

inline std::vector<OracleReport> run_small_grid(const std::string& cache_path,
                                                int jobs) {
    Engine eng(2, {cache_path, {}});
    std::vector<std::function<OracleReport()>> items;

    for (int n = 2; n <= 3; ++n)
        for (long long d = 4; d <= 9; ++d)
            items.push_back([n, d] {
                PairProblem p{2, n, d, 0};
                return report("walls-progressions-vs-scan",
                              Json{{"n", n}, {"d", d}},
                              wall_list_str(oracles::walls_by_subtriple_scan(p)),
                              wall_list_str(walls(p)));
            });

    for (int g = 2; g <= 3; ++g)
        for (int k = 2; k <= 6; k += 2)
            items.push_back([g, k] {
                return report("sym-curve-series-vs-lambda",
                              Json{{"g", g}, {"k", k}},
                              oracles::macdonald_sym_curve(k, g).str(),
                              lambda_k(curve_class(g), k).str());
            });

    for (long long d = 1; d <= 6; ++d)
        items.push_back([&eng, d] {
            PairProblem p{2, 1, d, 0};
            return report("pairs-vs-symmetric-power", Json{{"d", d}},
                          cls_sym_curve(static_cast<int>(d), 2).cls.str(),
                          eng.pairs_class(p, 0).cls.str());
        });

    {
        std::vector<std::pair<int, long long>> nd{{2, 5}, {2, 7}, {3, 1}, {3, 2}};
        for (auto [n, d] : nd)
            items.push_back([&eng, n, d] {
                return report("bundle-moduli-vs-filtration-recursion",
                              Json{{"n", n}, {"d", d}},
                              oracles::hn_coprime_bundle_class(n, d, 2).str(),
                              eng.msbundle_class(n, d).cls.str());
            });
    }

    for (int side : {+1, -1})
        items.push_back([&eng, side] {
            PairProblem p{2, 2, 5, 0};
            ClassPoly want = cls_jacobian(2).cls * cls_jacobian(2).cls *
                             cls_sym_curve(2, 2).cls * cls_projective(1).cls;
            return report("flip-locus-worked-example",
                          Json{{"n", 2}, {"d", 5}, {"sigma", "4"}, {"side", side}},
                          want.str(), eng.flip_locus(p, Rational(4), side).cls.str());
        });

    for (long long d : {5, 6}) {
        items.push_back([&eng, d] {
            PairProblem p{2, 2, d, 0};
            auto ws = walls(p);
            Certified cur = eng.um_class(p) + eng.dm_class(p);
            std::string got = "seed";
            std::string want = "seed";
            if (!(cur.cls == eng.nclass_chamber(p, 0).cls)) {
                got = "seed mismatch";
            } else {
                for (size_t i = 0; i < ws.size(); ++i) {
                    cur = cur + eng.flip_locus(p, ws[i], +1) -
                          eng.flip_locus(p, ws[i], -1);
                    if (!(cur.cls == eng.nclass_chamber(p, static_cast<int>(i) + 1).cls)) {
                        got = "mismatch above wall " + rational_str(ws[i]);
                        break;
                    }
                }
            }
            return report("ascent-vs-descent", Json{{"n", 2}, {"d", d}}, want, got);
        });
    }

    {
        PairProblem p{2, 2, 7, 0};
        for (int ch = 0; ch < chamber_count(p); ++ch)
            items.push_back([&eng, p, ch] {
                ClassPoly c = eng.nclass_chamber(p, ch).cls;
                long long dim = moduli_dim(p);
                std::ostringstream want, got;
                want << "deg=" << 2 * dim << " lead=1";
                got << "deg=" << c.total_degree() << " lead="
                    << c.coeff(static_cast<int>(dim), static_cast<int>(dim)).str();
                return report("chamber-dimension-and-lead",
                              Json{{"n", 2}, {"d", 7}, {"chamber", ch}}, want.str(),
                              got.str());
            });
    }

    std::vector<OracleReport> reports(items.size());
    std::atomic<size_t> next{0};
    auto worker = [&] {
        for (;;) {
            size_t i = next.fetch_add(1);
            if (i >= items.size()) return;
            try {
                reports[i] = items[i]();
            } catch (const std::exception& e) {
                OracleReport r;
                r.name = "check-item";
                r.expected = "no exception";
                r.actual = std::string("error: ") + e.what();
                r.pass = false;
                reports[i] = r;
            }
        }
    };
    int nthreads = std::max(1, jobs);
    std::vector<std::thread> pool;
    for (int t = 1; t < nthreads; ++t) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();
    if (!cache_path.empty()) eng.save_cache();
    return reports;
}

}  // namespace detail

inline int run(int argc, const char* const* argv, std::ostream& out,
               std::ostream& err) {
    RunConfig cfg;
    CLI::App app{"exact chamber classes for stable pair moduli on a curve"};
    app.require_subcommand(1);

    auto* walls_cmd = app.add_subcommand("walls", "list the critical values");
    auto* types_cmd = app.add_subcommand("types", "stratum types at a critical value");
    auto* class_cmd = app.add_subcommand("class", "chamber class of the triple moduli");
    auto* pairs_cmd = app.add_subcommand("pairs", "chamber class of the pair moduli");
    auto* check_cmd = app.add_subcommand("check", "run the self-check suite");

    for (CLI::App* sub : {walls_cmd, types_cmd, class_cmd, pairs_cmd}) {
        sub->add_option("--g", cfg.g, "curve genus")->required()->check(CLI::Range(2, 1000));
        sub->add_option("--n", cfg.n, "bundle rank")->required()->check(CLI::Range(1, 4));
        sub->add_option("--d", cfg.d, "bundle degree")->required();
        sub->add_option("--d0", cfg.d0, "twisting degree")->capture_default_str();
    }
    for (CLI::App* sub : {class_cmd, pairs_cmd})
        sub->add_option("--chamber", cfg.chamber,
                        "chamber index, exact sigma \"p/q\", top, or bottom")
            ->capture_default_str();
    types_cmd->add_option("--sigma", cfg.sigma, "critical value as \"p/q\"")->required();
    check_cmd->add_option("--grid", cfg.grid, "check grid name")->capture_default_str();

    for (CLI::App* sub : {walls_cmd, types_cmd, class_cmd, pairs_cmd, check_cmd}) {
        sub->add_option("--output", cfg.output, "json or plain")
            ->capture_default_str()
            ->check(CLI::IsMember({"json", "plain"}));
        sub->add_option("--cache", cfg.cache_path, "cache file path")
            ->envname("MOTPAIRS_CACHE");
        sub->add_option("--jobs", cfg.jobs, "worker threads for check")
            ->capture_default_str()
            ->check(CLI::Range(1, 64));
        sub->add_flag("--verbose,-v", cfg.verbose, "emit engine notes on stderr");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << "\n";
        return 2;
    }

    try {
        bool json = cfg.output == "json";
        EngineOptions opt;
        opt.cache_path = cfg.cache_path;
        if (cfg.verbose)
            opt.note = [&err](const std::string& s) { err << "note: " << s << "\n"; };

        if (*check_cmd) {
            if (cfg.grid != "small") throw UsageError("unknown check grid " + cfg.grid);
            auto reports = detail::run_small_grid(cfg.cache_path, cfg.jobs);
            int failed = 0;
            for (const auto& r : reports)
                if (!r.pass) ++failed;
            if (json) {
                Json arr = Json::array();
                for (const auto& r : reports) arr.push_back(oracle_report_to_json(r));
                Json payload{{"grid", cfg.grid},
                             {"reports", arr},
                             {"passed", static_cast<int>(reports.size()) - failed},
                             {"failed", failed}};
                out << payload.dump(1) << "\n";
            } else {
                for (const auto& r : reports) {
                    out << (r.pass ? "PASS " : "FAIL ") << r.name << " " << r.inputs.dump();
                    if (!r.pass)
                        out << " expected " << r.expected << " got " << r.actual;
                    out << "\n";
                }
                out << "passed " << reports.size() - failed << " failed " << failed << "\n";
            }
            return failed == 0 ? 0 : 1;
        }

        PairProblem p{cfg.g, cfg.n, cfg.d, cfg.d0};
        validate(p);

        if (*walls_cmd) {
            auto ws = walls(p);
            if (json) {
                Json arr = Json::array();
                for (const auto& w : ws)
                    arr.push_back(Json{{"sigma", rational_str(w)},
                                       {"mu", rational_str(sigma_slope(p, w))}});
                out << arr.dump(1) << "\n";
            } else {
                if (ws.empty()) out << "no walls\n";
                for (const auto& w : ws)
                    out << "sigma=" << rational_str(w)
                        << " mu=" << rational_str(sigma_slope(p, w)) << "\n";
            }
            return 0;
        }

        if (*types_cmd) {
            Rational s = rational_from_str(cfg.sigma);
            if (!is_critical(p, s))
                throw UsageError("sigma " + cfg.sigma + " is not a critical value");
            auto types = enumerate_types(p, s);
            if (json) {
                Json arr = Json::array();
                for (const auto& t : types) arr.push_back(stratum_type_to_json(t));
                Json payload{{"sigma", rational_str(s)},
                             {"mu", rational_str(sigma_slope(p, s))},
                             {"types", arr}};
                out << payload.dump(1) << "\n";
            } else {
                for (const auto& t : types) {
                    out << "pieces=";
                    for (const auto& pc : t.pieces) out << "(" << pc.n << "," << pc.d << ")";
                    out << " matrix=";
                    for (const auto& row : t.a) {
                        out << "[";
                        for (size_t j = 0; j < row.size(); ++j)
                            out << (j ? "," : "") << row[j];
                        out << "]";
                    }
                    out << " residual=(" << t.n_res << "," << t.d_res << ")"
                        << " sym=" << sym_group_order(t).str() << "\n";
                }
            }
            return 0;
        }

        Engine eng(cfg.g, opt);
        Json payload = detail::class_payload(eng, p, cfg.chamber, pairs_cmd->parsed());
        if (!cfg.cache_path.empty()) eng.save_cache();
        if (json)
            out << payload.dump(1) << "\n";
        else
            detail::print_class_plain(payload, out);
        return 0;
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const EngineError& e) {
        err << "error: " << e.what() << "\n";
        return 3;
    }
}

inline int run(const std::vector<std::string>& args, std::ostream& out,
               std::ostream& err) {
    std::vector<const char*> argv;
    argv.reserve(args.size());
    for (const auto& a : args) argv.push_back(a.c_str());
    return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace motpairs::cli
