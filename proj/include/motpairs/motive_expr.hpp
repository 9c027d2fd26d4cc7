#pragma once

// Expression trees witnessing that a class is motivated by the curve: leaves
// are the curve class C, the Lefschetz class L and integer constants; internal
// nodes are sum, difference, product, exact division, lambda operations and
// named references to previously cached classes.  Every class the engine
// produces travels together with such a tree, and evaluate() recomputes the
// class from the tree so the two can be compared bit for bit.
//
// Serialized form is a small S-expression language:
//   C   L   42   (+ a b ...)   (- a b)   (* a b ...)   (/ a b)
//   (lam k a)   (named some.key)
// parse() and serialize() are mutually inverse on canonical trees.

#include <cctype>
#include <functional>
#include <memory>
#include <sstream>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "motpairs/class_poly.hpp"
#include "motpairs/lambda.hpp"

namespace motpairs {

enum class ExprKind { GenC, GenL, Const, Add, Sub, Mul, DivExact, Lambda, Named };

struct ExprNode;
using MotiveExpr = std::shared_ptr<const ExprNode>;

struct ExprNode {
    ExprKind kind;
    Int value;                        // Const
    int lam_k = 0;                    // Lambda
    std::string name;                 // Named
    std::string note;                 // DivExact: which identity produced it
    std::vector<MotiveExpr> children; // Add/Mul: n-ary; Sub/DivExact: 2; Lambda: 1
};

inline MotiveExpr mk_c() {
    static const MotiveExpr n = std::make_shared<ExprNode>(ExprNode{ExprKind::GenC, 0, 0, "", "", {}});
    return n;
}
inline MotiveExpr mk_l() {
    static const MotiveExpr n = std::make_shared<ExprNode>(ExprNode{ExprKind::GenL, 0, 0, "", "", {}});
    return n;
}
inline MotiveExpr mk_const(Int v) {
    return std::make_shared<ExprNode>(ExprNode{ExprKind::Const, std::move(v), 0, "", "", {}});
}
inline MotiveExpr mk_named(std::string key) {
    return std::make_shared<ExprNode>(ExprNode{ExprKind::Named, 0, 0, std::move(key), "", {}});
}

inline bool expr_is_const(const MotiveExpr& e, const Int& v) {
    return e && e->kind == ExprKind::Const && e->value == v;
}

inline MotiveExpr mk_add(std::vector<MotiveExpr> parts) {
    std::vector<MotiveExpr> flat;
    for (auto& p : parts) {
        if (!p || expr_is_const(p, 0)) continue;
        if (p->kind == ExprKind::Add)
            flat.insert(flat.end(), p->children.begin(), p->children.end());
        else
            flat.push_back(std::move(p));
    }
    if (flat.empty()) return mk_const(0);
    if (flat.size() == 1) return flat.front();
    return std::make_shared<ExprNode>(ExprNode{ExprKind::Add, 0, 0, "", "", std::move(flat)});
}

inline MotiveExpr mk_mul(std::vector<MotiveExpr> parts) {
    std::vector<MotiveExpr> flat;
    for (auto& p : parts) {
        if (!p) continue;
        if (expr_is_const(p, 0)) return mk_const(0);
        if (expr_is_const(p, 1)) continue;
        if (p->kind == ExprKind::Mul)
            flat.insert(flat.end(), p->children.begin(), p->children.end());
        else
            flat.push_back(std::move(p));
    }
    if (flat.empty()) return mk_const(1);
    if (flat.size() == 1) return flat.front();
    return std::make_shared<ExprNode>(ExprNode{ExprKind::Mul, 0, 0, "", "", std::move(flat)});
}

inline MotiveExpr mk_sub(MotiveExpr a, MotiveExpr b) {
    if (expr_is_const(b, 0)) return a;
    return std::make_shared<ExprNode>(
        ExprNode{ExprKind::Sub, 0, 0, "", "", {std::move(a), std::move(b)}});
}

inline MotiveExpr mk_div(MotiveExpr a, MotiveExpr b, std::string note = "") {
    if (expr_is_const(b, 1)) return a;
    return std::make_shared<ExprNode>(
        ExprNode{ExprKind::DivExact, 0, 0, "", std::move(note), {std::move(a), std::move(b)}});
}

inline MotiveExpr mk_lam(int k, MotiveExpr a) {
    if (k < 0) throw EngineError("mk_lam: negative index");
    if (k == 0) return mk_const(1);
    if (k == 1) return a;
    return std::make_shared<ExprNode>(
        ExprNode{ExprKind::Lambda, 0, k, "", "", {std::move(a)}});
}

// Convenience: an integer polynomial in L as an expression tree.
inline MotiveExpr mk_l_power(int k) {
    if (k == 0) return mk_const(1);
    if (k == 1) return mk_l();
    std::vector<MotiveExpr> f(static_cast<std::size_t>(k), mk_l());
    return std::make_shared<ExprNode>(ExprNode{ExprKind::Mul, 0, 0, "", "", std::move(f)});
}

// Structural equality; DivExact notes are documentation and are ignored.
inline bool expr_equal(const MotiveExpr& a, const MotiveExpr& b) {
    if (a == b) return true;
    if (!a || !b) return false;
    if (a->kind != b->kind) return false;
    switch (a->kind) {
        case ExprKind::GenC:
        case ExprKind::GenL: return true;
        case ExprKind::Const: return a->value == b->value;
        case ExprKind::Named: return a->name == b->name;
        case ExprKind::Lambda:
            if (a->lam_k != b->lam_k) return false;
            break;
        default: break;
    }
    if (a->children.size() != b->children.size()) return false;
    for (std::size_t i = 0; i < a->children.size(); ++i)
        if (!expr_equal(a->children[i], b->children[i])) return false;
    return true;
}

// ---------------------------------------------------------------------------
// Serialization

inline void serialize_into(const MotiveExpr& e, std::ostream& os) {
    switch (e->kind) {
        case ExprKind::GenC: os << 'C'; return;
        case ExprKind::GenL: os << 'L'; return;
        case ExprKind::Const: os << e->value; return;
        case ExprKind::Named: os << "(named " << e->name << ')'; return;
        case ExprKind::Lambda:
            os << "(lam " << e->lam_k << ' ';
            serialize_into(e->children[0], os);
            os << ')';
            return;
        case ExprKind::Add:
        case ExprKind::Sub:
        case ExprKind::Mul:
        case ExprKind::DivExact: {
            char op = e->kind == ExprKind::Add   ? '+'
                      : e->kind == ExprKind::Sub ? '-'
                      : e->kind == ExprKind::Mul ? '*'
                                                 : '/';
            os << '(' << op;
            for (const auto& c : e->children) {
                os << ' ';
                serialize_into(c, os);
            }
            os << ')';
            return;
        }
    }
}

inline std::string serialize(const MotiveExpr& e) {
    std::ostringstream os;
    serialize_into(e, os);
    return os.str();
}

// ---------------------------------------------------------------------------
// Parsing

namespace detail {

struct ExprParser {
    const std::string& s;
    std::size_t pos = 0;

    void skip_ws() {
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    }

    [[noreturn]] void fail(const std::string& why) { throw ParseError(why, pos); }

    std::string atom() {
        std::size_t start = pos;
        while (pos < s.size() && !std::isspace(static_cast<unsigned char>(s[pos])) &&
               s[pos] != '(' && s[pos] != ')')
            ++pos;
        if (pos == start) fail("expected token");
        return s.substr(start, pos - start);
    }

    static bool is_integer(const std::string& t) {
        std::size_t i = (t[0] == '-') ? 1 : 0;
        if (i == t.size()) return false;
        for (; i < t.size(); ++i)
            if (!std::isdigit(static_cast<unsigned char>(t[i]))) return false;
        return true;
    }

    MotiveExpr expr() {
        skip_ws();
        if (pos >= s.size()) fail("unexpected end of input");
        if (s[pos] != '(') {
            std::string t = atom();
            if (t == "C") return mk_c();
            if (t == "L") return mk_l();
            if (is_integer(t)) return mk_const(Int(t));
            fail("unknown atom '" + t + "'");
        }
        ++pos;  // '('
        skip_ws();
        std::string head = atom();
        std::vector<MotiveExpr> kids;
        MotiveExpr out;
        if (head == "lam") {
            skip_ws();
            std::string kt = atom();
            if (!is_integer(kt) || kt[0] == '-') fail("lam expects a nonnegative integer");
            int k = std::stoi(kt);
            MotiveExpr body = expr();
            out = mk_lam(k, std::move(body));
        } else if (head == "named") {
            skip_ws();
            std::string key = atom();
            out = mk_named(std::move(key));
        } else if (head == "+" || head == "*" || head == "-" || head == "/") {
            while (true) {
                skip_ws();
                if (pos < s.size() && s[pos] == ')') break;
                kids.push_back(expr());
            }
            if ((head == "-" || head == "/") && kids.size() != 2)
                fail("'" + head + "' expects exactly two operands");
            if (kids.size() < 2) fail("'" + head + "' expects at least two operands");
            if (head == "+") out = mk_add(std::move(kids));
            else if (head == "*") out = mk_mul(std::move(kids));
            else if (head == "-") out = mk_sub(kids[0], kids[1]);
            else out = mk_div(kids[0], kids[1]);
        } else {
            fail("unknown operator '" + head + "'");
        }
        skip_ws();
        if (pos >= s.size() || s[pos] != ')') fail("expected ')'");
        ++pos;
        return out;
    }
};

}  // namespace detail

inline MotiveExpr parse_expr(const std::string& text) {
    detail::ExprParser p{text};
    MotiveExpr e = p.expr();
    p.skip_ws();
    if (p.pos != text.size()) throw ParseError("trailing characters", p.pos);
    return e;
}

// ---------------------------------------------------------------------------
// Evaluation

// Resolver for named references; throws UnresolvedName when a key is unknown.
using NameResolver = std::function<ClassPoly(const std::string&)>;

inline ClassPoly curve_class(int g) {
    // E(C) = 1 - g(u + v) + uv for a smooth projective curve of genus g.
    ClassPoly c = ClassPoly::one();
    c -= ClassPoly::monomial(1, 0, g);
    c -= ClassPoly::monomial(0, 1, g);
    c += ClassPoly::lefschetz();
    return c;
}

inline ClassPoly evaluate(const MotiveExpr& e, int g, const NameResolver& resolve = {}) {
    if (g < 2) throw EngineError("evaluate: genus must be at least 2");
    std::unordered_map<const ExprNode*, ClassPoly> memo;
    std::function<ClassPoly(const MotiveExpr&)> go = [&](const MotiveExpr& n) -> ClassPoly {
        auto it = memo.find(n.get());
        if (it != memo.end()) return it->second;
        ClassPoly r;
        switch (n->kind) {
            case ExprKind::GenC: r = curve_class(g); break;
            case ExprKind::GenL: r = ClassPoly::lefschetz(); break;
            case ExprKind::Const: r = ClassPoly::constant(n->value); break;
            case ExprKind::Named:
                if (!resolve) throw UnresolvedName("evaluate: no resolver for '" + n->name + "'");
                r = resolve(n->name);
                break;
            case ExprKind::Add:
                for (const auto& c : n->children) r += go(c);
                break;
            case ExprKind::Sub: r = go(n->children[0]) - go(n->children[1]); break;
            case ExprKind::Mul:
                r = ClassPoly::one();
                for (const auto& c : n->children) r *= go(c);
                break;
            case ExprKind::DivExact:
                r = ClassPoly::div_exact(go(n->children[0]), go(n->children[1]), n->note);
                break;
            case ExprKind::Lambda: r = lambda_k(go(n->children[0]), n->lam_k); break;
        }
        memo.emplace(n.get(), r);
        return r;
    };
    return go(e);
}

// ---------------------------------------------------------------------------
// A class bundled with its certificate.  Arithmetic keeps the two in sync.

struct Certified {
    ClassPoly cls;
    MotiveExpr cert;

    static Certified zero() { return {ClassPoly::zero(), mk_const(0)}; }
    static Certified one() { return {ClassPoly::one(), mk_const(1)}; }
    static Certified constant(Int v) { return {ClassPoly::constant(v), mk_const(v)}; }
    static Certified lefschetz_power(int k) {
        return {ClassPoly::lefschetz(k), mk_l_power(k)};
    }

    bool is_zero() const { return cls.is_zero(); }

    friend Certified operator+(const Certified& a, const Certified& b) {
        if (a.is_zero()) return b;
        if (b.is_zero()) return a;
        return {a.cls + b.cls, mk_add({a.cert, b.cert})};
    }
    friend Certified operator-(const Certified& a, const Certified& b) {
        if (b.is_zero()) return a;
        return {a.cls - b.cls, mk_sub(a.cert, b.cert)};
    }
    friend Certified operator*(const Certified& a, const Certified& b) {
        if (a.is_zero() || b.is_zero()) return zero();
        return {a.cls * b.cls, mk_mul({a.cert, b.cert})};
    }
};

inline Certified cert_div_exact(const Certified& a, const Certified& b,
                                const std::string& note) {
    return {ClassPoly::div_exact(a.cls, b.cls, note), mk_div(a.cert, b.cert, note)};
}

inline Certified cert_lambda(int k, const Certified& a) {
    return {lambda_k(a.cls, k), mk_lam(k, a.cert)};
}

}  // namespace motpairs
