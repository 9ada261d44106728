#pragma once

#include <cctype>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "mahler/recognize.hpp"

namespace mahler {

// Abstract syntax of an input expression: literals, x, zeta(N), root(c, n),
// the four arithmetic operators, integer powers, and unary minus.
struct InputExpr;
using ExprPtr = std::shared_ptr<const InputExpr>;

struct InputExpr {
    enum class Kind { Number, Var, Zeta, Root, Neg, Add, Sub, Mul, Div, Pow };

    Kind kind;
    Rational value;  // Number: the literal; Root: the radicand c
    long n = 0;      // Zeta: the order N; Root: the root index
    long expo = 0;   // Pow: the integer exponent
    ExprPtr lhs, rhs;
    std::size_t pos = 0;  // byte offset in the source, for diagnostics
};

namespace detail {

struct Lexer {
    const std::string& src;
    std::size_t at = 0;

    explicit Lexer(const std::string& s) : src(s) { skip(); }

    void skip() {
        while (at < src.size() && (src[at] == ' ' || src[at] == '\t' || src[at] == '\n' ||
                                   src[at] == '\r'))
            ++at;
    }
    bool eof() const { return at >= src.size(); }
    char peek() const { return eof() ? '\0' : src[at]; }
    bool accept(char c) {
        if (peek() != c) return false;
        ++at;
        skip();
        return true;
    }
    void expect(char c, const char* what) {
        if (!accept(c)) throw ParseError(std::string("expected '") + c + "' " + what, at);
    }
    bool accept_word(const char* w) {
        std::size_t len = std::string(w).size();
        if (src.compare(at, len, w) != 0) return false;
        // must not run into a longer identifier
        std::size_t end = at + len;
        if (end < src.size() && (std::isalnum(static_cast<unsigned char>(src[end])) || src[end] == '_'))
            return false;
        at = end;
        skip();
        return true;
    }
    Integer integer() {
        if (eof() || !std::isdigit(static_cast<unsigned char>(peek())))
            throw ParseError("expected an integer literal", at);
        std::size_t start = at;
        while (!eof() && std::isdigit(static_cast<unsigned char>(src[at]))) ++at;
        Integer v(src.substr(start, at - start));
        skip();
        return v;
    }
    long small_integer(const char* what) {
        std::size_t here = at;
        Integer v = integer();
        if (!v.fits_slong_p()) throw ParseError(std::string(what) + " is out of range", here);
        return v.get_si();
    }
};

class Parser {
  public:
    Parser(const std::string& src, long p) : lex_(src), p_(p) {}

    ExprPtr parse() {
        ExprPtr e = sum();
        if (!lex_.eof()) throw ParseError("trailing input after the expression", lex_.at);
        return e;
    }

  private:
    static ExprPtr node(InputExpr e) { return std::make_shared<const InputExpr>(std::move(e)); }

    ExprPtr sum() {
        ExprPtr e = product();
        for (;;) {
            std::size_t here = lex_.at;
            if (lex_.accept('+'))
                e = node({InputExpr::Kind::Add, Rational(0), 0, 0, e, product(), here});
            else if (lex_.accept('-'))
                e = node({InputExpr::Kind::Sub, Rational(0), 0, 0, e, product(), here});
            else
                return e;
        }
    }

    ExprPtr product() {
        ExprPtr e = unary();
        for (;;) {
            std::size_t here = lex_.at;
            if (lex_.accept('*'))
                e = node({InputExpr::Kind::Mul, Rational(0), 0, 0, e, unary(), here});
            else if (lex_.accept('/'))
                e = node({InputExpr::Kind::Div, Rational(0), 0, 0, e, unary(), here});
            else
                return e;
        }
    }

    // unary minus binds below ^: -x^2 is -(x^2)
    ExprPtr unary() {
        std::size_t here = lex_.at;
        if (lex_.accept('-'))
            return node({InputExpr::Kind::Neg, Rational(0), 0, 0, unary(), nullptr, here});
        return power();
    }

    ExprPtr power() {
        ExprPtr base = primary();
        if (!lex_.accept('^')) return base;
        std::size_t here = lex_.at;
        bool neg = lex_.accept('-');
        long e = lex_.small_integer("exponent");
        if (neg) e = -e;
        return node({InputExpr::Kind::Pow, Rational(0), 0, e, base, nullptr, here});
    }

    ExprPtr primary() {
        std::size_t here = lex_.at;
        if (lex_.accept('(')) {
            ExprPtr e = sum();
            lex_.expect(')', "to close the parenthesis");
            return e;
        }
        if (lex_.accept_word("x"))
            return node({InputExpr::Kind::Var, Rational(0), 0, 0, nullptr, nullptr, here});
        if (lex_.accept_word("zeta")) {
            lex_.expect('(', "after zeta");
            long n = lex_.small_integer("root of unity order");
            if (n < 1) throw UnsupportedConstruct("zeta order must be positive", here);
            lex_.expect(')', "to close zeta(...)");
            return node({InputExpr::Kind::Zeta, Rational(0), n, 0, nullptr, nullptr, here});
        }
        if (lex_.accept_word("root")) {
            lex_.expect('(', "after root");
            ExprPtr carg = sum();
            lex_.expect(',', "between the radicand and the index");
            std::size_t ipos = lex_.at;
            long n = lex_.small_integer("root index");
            lex_.expect(')', "to close root(...)");
            Rational c = constant_value(carg);
            if (c <= 0) throw UnsupportedConstruct("root radicand must be a positive rational", here);
            long r = n;
            while (r > 1 && r % p_ == 0) r /= p_;
            if (n < 1 || r != 1)
                throw UnsupportedConstruct("root index is not a power of p", ipos);
            return node({InputExpr::Kind::Root, c, n, 0, nullptr, nullptr, here});
        }
        if (!lex_.eof() && std::isdigit(static_cast<unsigned char>(lex_.peek()))) {
            Integer v = lex_.integer();
            return node({InputExpr::Kind::Number, Rational(v), 0, 0, nullptr, nullptr, here});
        }
        throw ParseError("expected a number, x, zeta(...), root(...), or '('", here);
    }

    // fold a radicand down to a rational constant
    static Rational constant_value(const ExprPtr& e) {
        switch (e->kind) {
            case InputExpr::Kind::Number: return e->value;
            case InputExpr::Kind::Neg: return -constant_value(e->lhs);
            case InputExpr::Kind::Add: return constant_value(e->lhs) + constant_value(e->rhs);
            case InputExpr::Kind::Sub: return constant_value(e->lhs) - constant_value(e->rhs);
            case InputExpr::Kind::Mul: return constant_value(e->lhs) * constant_value(e->rhs);
            case InputExpr::Kind::Div: {
                Rational d = constant_value(e->rhs);
                if (d == 0) throw UnsupportedConstruct("division by zero in a radicand", e->pos);
                return constant_value(e->lhs) / d;
            }
            case InputExpr::Kind::Pow: {
                Rational b = constant_value(e->lhs);
                if (b == 0 && e->expo < 0)
                    throw UnsupportedConstruct("division by zero in a radicand", e->pos);
                return rat_pow(b, e->expo);
            }
            default:
                throw UnsupportedConstruct("root radicand must be a rational constant", e->pos);
        }
    }

    Lexer lex_;
    long p_;
};

inline void collect_literals(const ExprPtr& e, FieldHull& hull, long p) {
    if (!e) return;
    switch (e->kind) {
        case InputExpr::Kind::Zeta: hull.require_root_of_unity(e->n); break;
        case InputExpr::Kind::Root:
            if (e->n > 1)
                hull.add_monomial(RadicalMonomial::radical(p, e->value, Rational(1, e->n)));
            break;
        default: break;
    }
    collect_literals(e->lhs, hull, p);
    collect_literals(e->rhs, hull, p);
}

// Attach a root symbol to degree-1 polynomial values so that later division
// by them leaves a verifiable pole candidate for the recognizer.
inline RationalFunction tag_linear_root(RationalFunction f) {
    if (!f.is_zero() && f.is_polynomial() && f.num().deg() == 1) {
        TowerElement root = -(f.num().coeff(0) * f.num().coeff(1).inverse());
        if (!root.is_zero())
            if (auto m = recognize_monomial(root, f.field())) f.add_num_candidate(*m);
    }
    return f;
}

inline RationalFunction eval_expr(const ExprPtr& e, const FieldPtr& k, long p) {
    switch (e->kind) {
        case InputExpr::Kind::Number:
            return RationalFunction::constant(k, e->value);
        case InputExpr::Kind::Var:
            return RationalFunction::from_poly(TPoly::x(k));
        case InputExpr::Kind::Zeta:
            return RationalFunction::from_poly(TPoly::constant(
                k, RadicalMonomial::root_of_unity(p, e->n, 1).value(k)));
        case InputExpr::Kind::Root: {
            RadicalMonomial m = e->n > 1
                                    ? RadicalMonomial::radical(p, e->value, Rational(1, e->n))
                                    : RadicalMonomial::from_rational(p, e->value);
            return RationalFunction::from_poly(TPoly::constant(k, m.value(k)));
        }
        case InputExpr::Kind::Neg:
            return -eval_expr(e->lhs, k, p);
        case InputExpr::Kind::Add:
            return tag_linear_root(eval_expr(e->lhs, k, p) + eval_expr(e->rhs, k, p));
        case InputExpr::Kind::Sub:
            return tag_linear_root(eval_expr(e->lhs, k, p) - eval_expr(e->rhs, k, p));
        case InputExpr::Kind::Mul:
            return eval_expr(e->lhs, k, p) * eval_expr(e->rhs, k, p);
        case InputExpr::Kind::Div:
            return eval_expr(e->lhs, k, p) / eval_expr(e->rhs, k, p);
        case InputExpr::Kind::Pow: {
            RationalFunction b = eval_expr(e->lhs, k, p);
            long n = e->expo;
            if (n < 0) {
                b = RationalFunction::constant(k, Rational(1)) / b;
                n = -n;
            }
            RationalFunction r = RationalFunction::constant(k, Rational(1));
            for (long i = 0; i < n; ++i) r *= b;
            return r;
        }
    }
    throw Error("eval_expr: unreachable");
}

}  // namespace detail

inline ExprPtr parse(const std::string& src, long p) {
    if (p < 2) throw Error("parse: p must be >= 2");
    return detail::Parser(src, p).parse();
}

struct ParsedInput {
    ExprPtr ast;
    RationalFunction f;
};

// Parse and evaluate over the smallest tower field spanned by the literals.
inline ParsedInput parse_input(const std::string& src, long p) {
    ExprPtr ast = parse(src, p);
    FieldHull hull(p);
    detail::collect_literals(ast, hull, p);
    FieldPtr k = hull.build();
    return ParsedInput{ast, detail::eval_expr(ast, k, p)};
}

// ---------------------------------------------------------------------------
// Exact rendering back into the input grammar
// ---------------------------------------------------------------------------

// One additive term of a scalar: rational * zeta(N)^a * root(c,d)^t.
namespace detail {

inline std::string scalar_term(const Rational& q, const std::string& symb) {
    if (symb.empty()) return rational_to_string(q);
    if (q == 1) return symb;
    if (q == -1) return "-" + symb;
    return rational_to_string(q) + "*" + symb;
}

inline std::string join_terms(const std::vector<std::string>& terms) {
    if (terms.empty()) return "0";
    std::string out = terms[0];
    for (std::size_t i = 1; i < terms.size(); ++i) {
        if (!terms[i].empty() && terms[i][0] == '-')
            out += "-" + terms[i].substr(1);
        else
            out += "+" + terms[i];
    }
    return out;
}

}  // namespace detail

// Terms of v as strings in the input grammar, one per nonzero monomial.
inline std::vector<std::string> scalar_terms(const TowerElement& v) {
    std::vector<std::string> out;
    const FieldPtr& k = v.field();
    const long N = k->n();
    const long d = k->degree();
    for (long t = 0; t < d; ++t) {
        const CycloElement& cy = v.coeffs()[static_cast<std::size_t>(t)];
        const QPoly& qs = cy.coeffs();
        for (std::size_t a = 0; a < qs.size(); ++a) {
            if (qs[a] == 0) continue;
            std::string symb;
            if (a > 0) {
                symb = "zeta(" + std::to_string(N) + ")";
                if (a > 1) symb += "^" + std::to_string(a);
            }
            if (t > 0) {
                std::string root = "root(" + rational_to_string(k->c()) + "," +
                                   std::to_string(d) + ")";
                if (t > 1) root += "^" + std::to_string(t);
                symb = symb.empty() ? root : symb + "*" + root;
            }
            out.push_back(detail::scalar_term(qs[a], symb));
        }
    }
    return out;
}

inline std::string render_scalar(const TowerElement& v) {
    return detail::join_terms(scalar_terms(v));
}

// Polynomial in descending powers; multi-term coefficients get parentheses.
inline std::string render_poly(const TPoly& f) {
    if (f.is_zero()) return "0";
    std::vector<std::string> terms;
    for (long j = f.deg(); j >= 0; --j) {
        const TowerElement c = f.coeff(j);
        if (c.is_zero()) continue;
        std::string xpart;
        if (j == 1)
            xpart = "x";
        else if (j > 1)
            xpart = "x^" + std::to_string(j);
        auto parts = scalar_terms(c);
        std::string cs;
        if (parts.size() == 1)
            cs = parts[0];
        else
            cs = "(" + detail::join_terms(parts) + ")";
        if (xpart.empty())
            terms.push_back(cs);
        else if (cs == "1")
            terms.push_back(xpart);
        else if (cs == "-1")
            terms.push_back("-" + xpart);
        else
            terms.push_back(cs + "*" + xpart);
    }
    return detail::join_terms(terms);
}

inline std::string render_ratfun(const RationalFunction& f) {
    if (f.is_polynomial()) {
        // den is a monic constant; fold a non-1 unit into the numerator view
        return render_poly(f.num());
    }
    std::string num = render_poly(f.num());
    bool simple = f.num().deg() <= 0 && scalar_terms(f.num().lead()).size() == 1 &&
                  num.find('*') == std::string::npos;
    std::string out = simple ? num : "(" + num + ")";
    return out + "/(" + render_poly(f.den()) + ")";
}

inline std::string render_laurent(const LaurentPoly& l) {
    if (l.is_zero()) return "0";
    std::vector<std::string> terms;
    for (auto it = l.terms().rbegin(); it != l.terms().rend(); ++it) {
        const auto& [j, c] = *it;
        std::string xpart;
        if (j == 1)
            xpart = "x";
        else if (j != 0)
            xpart = "x^" + std::to_string(j);
        auto parts = scalar_terms(c);
        std::string cs = parts.size() == 1 ? parts[0] : "(" + detail::join_terms(parts) + ")";
        if (xpart.empty())
            terms.push_back(cs);
        else if (cs == "1")
            terms.push_back(xpart);
        else if (cs == "-1")
            terms.push_back("-" + xpart);
        else
            terms.push_back(cs + "*" + xpart);
    }
    return detail::join_terms(terms);
}

// Canonical echo of a parsed expression.
inline std::string render_expr(const ExprPtr& e) {
    using K = InputExpr::Kind;
    auto wrap = [](const ExprPtr& x, bool cond) {
        std::string s = render_expr(x);
        return cond ? "(" + s + ")" : s;
    };
    auto prec = [](const ExprPtr& x) {
        switch (x->kind) {
            case K::Add:
            case K::Sub: return 1;
            case K::Neg: return 2;
            case K::Mul:
            case K::Div: return 3;
            case K::Pow: return 4;
            default: return 5;
        }
    };
    switch (e->kind) {
        case K::Number: return rational_to_string(e->value);
        case K::Var: return "x";
        case K::Zeta: return "zeta(" + std::to_string(e->n) + ")";
        case K::Root:
            return "root(" + rational_to_string(e->value) + "," + std::to_string(e->n) + ")";
        case K::Neg: return "-" + wrap(e->lhs, prec(e->lhs) < 2);
        case K::Add: return wrap(e->lhs, prec(e->lhs) < 1) + "+" + wrap(e->rhs, prec(e->rhs) <= 1);
        case K::Sub: return wrap(e->lhs, prec(e->lhs) < 1) + "-" + wrap(e->rhs, prec(e->rhs) <= 1);
        case K::Mul: return wrap(e->lhs, prec(e->lhs) < 3) + "*" + wrap(e->rhs, prec(e->rhs) <= 3);
        case K::Div: return wrap(e->lhs, prec(e->lhs) < 3) + "/" + wrap(e->rhs, prec(e->rhs) <= 3);
        case K::Pow:
            return wrap(e->lhs, prec(e->lhs) < 5) + "^" + std::to_string(e->expo);
    }
    throw Error("render_expr: unreachable");
}

}  // namespace mahler
