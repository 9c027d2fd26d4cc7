#pragma once

// Exact virtual Hodge (E-polynomial) classes, represented as polynomials in
// Z[u, v].  The class of a smooth projective variety records its Hodge
// numbers; the assignment is additive over locally closed decompositions and
// multiplicative over Zariski-locally-trivial fibrations, which is all the
// engine ever uses.  Only genuine polynomials are allowed: no Laurent terms
// and no rational functions.  Every division must be exact and goes through
// div_exact, which throws NonExactDivision otherwise.

#include <boost/multiprecision/cpp_int.hpp>

#include <compare>
#include <cstdlib>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "motpairs/errors.hpp"

namespace motpairs {

using Int = boost::multiprecision::cpp_int;

// Exponent pair of a monomial u^p v^q, ordered lexicographically.
struct Monomial {
    int p = 0;
    int q = 0;
    friend auto operator<=>(const Monomial&, const Monomial&) = default;
};

class ClassPoly {
  public:
    using TermMap = std::map<Monomial, Int>;

    ClassPoly() = default;

    static ClassPoly zero() { return ClassPoly(); }

    static ClassPoly constant(Int c) {
        ClassPoly r;
        if (c != 0) r.terms_[{0, 0}] = std::move(c);
        return r;
    }

    static ClassPoly one() { return constant(1); }

    static ClassPoly monomial(int p, int q, Int c = 1) {
        if (p < 0 || q < 0)
            throw EngineError("ClassPoly: negative exponent u^" + std::to_string(p) +
                              " v^" + std::to_string(q));
        ClassPoly r;
        if (c != 0) r.terms_[{p, q}] = std::move(c);
        return r;
    }

    // The Lefschetz class L = uv = q.
    static ClassPoly lefschetz(int power = 1) { return monomial(power, power); }

    const TermMap& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    Int coeff(int p, int q) const {
        auto it = terms_.find({p, q});
        return it == terms_.end() ? Int(0) : it->second;
    }

    friend bool operator==(const ClassPoly& a, const ClassPoly& b) {
        return a.terms_ == b.terms_;
    }
    friend bool operator!=(const ClassPoly& a, const ClassPoly& b) { return !(a == b); }

    ClassPoly& operator+=(const ClassPoly& o) {
        for (const auto& [m, c] : o.terms_) add_term(m, c);
        return *this;
    }
    ClassPoly& operator-=(const ClassPoly& o) {
        for (const auto& [m, c] : o.terms_) add_term(m, -c);
        return *this;
    }
    friend ClassPoly operator+(ClassPoly a, const ClassPoly& b) { return a += b; }
    friend ClassPoly operator-(ClassPoly a, const ClassPoly& b) { return a -= b; }

    ClassPoly operator-() const {
        ClassPoly r;
        for (const auto& [m, c] : terms_) r.terms_[m] = -c;
        return r;
    }

    friend ClassPoly operator*(const ClassPoly& a, const ClassPoly& b) {
        ClassPoly r;
        for (const auto& [ma, ca] : a.terms_)
            for (const auto& [mb, cb] : b.terms_)
                r.add_term({ma.p + mb.p, ma.q + mb.q}, ca * cb);
        return r;
    }
    ClassPoly& operator*=(const ClassPoly& o) { return *this = *this * o; }

    friend ClassPoly operator*(const ClassPoly& a, const Int& s) {
        ClassPoly r;
        if (s == 0) return r;
        for (const auto& [m, c] : a.terms_) r.terms_[m] = c * s;
        return r;
    }
    friend ClassPoly operator*(const Int& s, const ClassPoly& a) { return a * s; }

    ClassPoly pow(int e) const {
        if (e < 0) throw EngineError("ClassPoly::pow: negative exponent");
        ClassPoly r = one();
        ClassPoly base = *this;
        for (; e > 0; e >>= 1) {
            if (e & 1) r *= base;
            base *= base;
        }
        return r;
    }

    // Exact division over Z[u,v].  Long division by the lex-leading term of
    // the divisor; any step that fails to cancel exactly means the quotient
    // does not exist in the polynomial ring, which is a hard error here.
    static ClassPoly div_exact(const ClassPoly& a, const ClassPoly& b,
                               const std::string& context = "") {
        auto fail = [&](const std::string& why) -> ClassPoly {
            std::string msg = "div_exact: " + why;
            if (!context.empty()) msg += " [" + context + "]";
            throw NonExactDivision(msg);
        };
        if (b.is_zero()) return fail("division by zero");
        ClassPoly rem = a;
        ClassPoly quot;
        const auto& lead_b = *b.terms_.rbegin();  // lex-largest term of b
        while (!rem.is_zero()) {
            const auto& lead_r = *rem.terms_.rbegin();
            int dp = lead_r.first.p - lead_b.first.p;
            int dq = lead_r.first.q - lead_b.first.q;
            if (dp < 0 || dq < 0) return fail("leading monomial not divisible");
            if (lead_r.second % lead_b.second != 0)
                return fail("leading coefficient not divisible");
            Int c = lead_r.second / lead_b.second;
            ClassPoly t = monomial(dp, dq, c);
            quot += t;
            rem -= t * b;
        }
        return quot;
    }

    // Poincare specialization u = -t, v = -t.  Returns the coefficient list
    // of the resulting polynomial in t (index = power of t).
    std::vector<Int> poincare() const {
        std::vector<Int> out;
        for (const auto& [m, c] : terms_) {
            std::size_t k = static_cast<std::size_t>(m.p + m.q);
            if (out.size() <= k) out.resize(k + 1);
            out[k] += ((m.p + m.q) % 2 == 0) ? c : -c;
        }
        while (!out.empty() && out.back() == 0) out.pop_back();
        return out;
    }

    // Euler characteristic: the specialization u = v = 1 (a ring map).
    Int euler() const {
        Int s = 0;
        for (const auto& [m, c] : terms_) s += c;
        return s;
    }

    // Largest total degree p + q over all terms; -1 for the zero class.
    int total_degree() const {
        int d = -1;
        for (const auto& [m, c] : terms_) d = std::max(d, m.p + m.q);
        return d;
    }

    // Substitute u -> u^k, v -> v^k (used by the power-structure expansion
    // of lambda operations, where the k-th Adams-style layer scales degrees).
    ClassPoly scale_exponents(int k) const {
        ClassPoly r;
        for (const auto& [m, c] : terms_) r.terms_[{m.p * k, m.q * k}] = c;
        return r;
    }

    // Multiply every monomial by u^a v^b.
    ClassPoly shift(int a, int b) const {
        ClassPoly r;
        for (const auto& [m, c] : terms_) {
            if (m.p + a < 0 || m.q + b < 0)
                throw EngineError("ClassPoly::shift: negative exponent");
            r.terms_[{m.p + a, m.q + b}] = c;
        }
        return r;
    }

    std::string str() const {
        if (terms_.empty()) return "0";
        std::ostringstream os;
        bool first = true;
        for (const auto& [m, c] : terms_) {
            Int a = c;
            if (!first) {
                os << (a < 0 ? " - " : " + ");
                if (a < 0) a = -a;
            }
            first = false;
            bool unit = (a == 1 || a == -1);
            if (a == -1) os << '-';
            if (!unit || (m.p == 0 && m.q == 0)) os << (a < 0 ? -a : a);
            if (m.p > 0) {
                os << 'u';
                if (m.p > 1) os << '^' << m.p;
            }
            if (m.q > 0) {
                os << 'v';
                if (m.q > 1) os << '^' << m.q;
            }
        }
        return os.str();
    }

  private:
    void add_term(const Monomial& m, const Int& c) {
        if (c == 0) return;
        if (m.p < 0 || m.q < 0)
            throw EngineError("ClassPoly: negative exponent in term");
        auto [it, inserted] = terms_.try_emplace(m, c);
        if (!inserted) {
            it->second += c;
            if (it->second == 0) terms_.erase(it);
        }
    }

    TermMap terms_;
};

}  // namespace motpairs
