#pragma once

// JSON encodings shared by the CLI and the disk cache.  A class polynomial
// is a lexicographically sorted array of [p, q, "coefficient"] triples with
// the coefficient in decimal so arbitrary precision survives the roundtrip.

#include <string>

#include <nlohmann/json.hpp>

#include "motpairs/class_poly.hpp"
#include "motpairs/triples_domain.hpp"

namespace motpairs {

using Json = nlohmann::json;

inline Json class_poly_to_json(const ClassPoly& a) {
    Json arr = Json::array();
    for (const auto& [m, c] : a.terms())
        arr.push_back(Json::array({m.p, m.q, c.str()}));
    return arr;
}

inline ClassPoly class_poly_from_json(const Json& j) {
    if (!j.is_array()) throw EngineError("class polynomial JSON must be an array");
    ClassPoly a;
    for (const auto& t : j) {
        if (!t.is_array() || t.size() != 3)
            throw EngineError("class polynomial term must be [p, q, coeff]");
        int p = t[0].get<int>();
        int q = t[1].get<int>();
        Int c(t[2].get<std::string>());
        a += ClassPoly::monomial(p, q, c);
    }
    return a;
}

inline std::string rational_str(const Rational& r) {
    std::string s = std::to_string(r.numerator());
    if (r.denominator() != 1) s += "/" + std::to_string(r.denominator());
    return s;
}

inline Rational rational_from_str(const std::string& s) {
    auto slash = s.find('/');
    try {
        if (slash == std::string::npos) return Rational(std::stoll(s));
        long long num = std::stoll(s.substr(0, slash));
        long long den = std::stoll(s.substr(slash + 1));
        if (den == 0) throw EngineError("rational with zero denominator");
        return Rational(num, den);
    } catch (const std::invalid_argument&) {
        throw EngineError("bad rational literal: " + s);
    } catch (const std::out_of_range&) {
        throw EngineError("rational literal out of range: " + s);
    }
}

// One check run by the self-test harness: what was compared and how it went.
struct OracleReport {
    std::string name;
    Json inputs;
    std::string expected;
    std::string actual;
    bool pass = false;
};

inline Json oracle_report_to_json(const OracleReport& r) {
    return Json{{"name", r.name},
                {"inputs", r.inputs},
                {"expected", r.expected},
                {"actual", r.actual},
                {"pass", r.pass}};
}

}  // namespace motpairs
