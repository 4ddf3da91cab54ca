#include "hct/expr.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <utility>

namespace hct {

namespace {

std::string parse_error_text(std::size_t offset, const std::string& message) {
    return "parse error at offset " + std::to_string(offset) + ": " + message;
}

std::string domain_error_text(const std::string& message, const std::string& node, double x, double y) {
    if (node.empty()) return message;
    char buf[128];
    std::snprintf(buf, sizeof(buf), " in '%s' at (x=%.12g, y=%.12g)", node.c_str(), x, y);
    return message + buf;
}

}  // namespace

ParseError::ParseError(std::size_t offset_, std::string message_, std::vector<std::string> expected_)
    : std::runtime_error(parse_error_text(offset_, message_)),
      offset(offset_),
      message(std::move(message_)),
      expected(std::move(expected_)) {}

DomainError::DomainError(std::string message_)
    : std::runtime_error(message_), message(std::move(message_)) {}

DomainError::DomainError(std::string message_, std::string node_, double x_, double y_)
    : std::runtime_error(domain_error_text(message_, node_, x_, y_)),
      message(std::move(message_)),
      node(std::move(node_)),
      at_x(x_),
      at_y(y_) {}

NotConvergedError::NotConvergedError(const std::string& message) : std::runtime_error(message) {}

// ---------------------------------------------------------------------------
// ExprBuilder

std::int32_t ExprBuilder::constant(double v) {
    Node n;
    n.kind = NodeKind::Constant;
    n.value = v;
    nodes_.push_back(n);
    return static_cast<std::int32_t>(nodes_.size()) - 1;
}

std::int32_t ExprBuilder::variable(Var v) {
    Node n;
    n.kind = NodeKind::Variable;
    n.var = v;
    nodes_.push_back(n);
    return static_cast<std::int32_t>(nodes_.size()) - 1;
}

std::int32_t ExprBuilder::unary(UnaryOp op, std::int32_t child) {
    Node n;
    n.kind = NodeKind::Unary;
    n.uop = op;
    n.a = child;
    nodes_.push_back(n);
    return static_cast<std::int32_t>(nodes_.size()) - 1;
}

std::int32_t ExprBuilder::binary(BinaryOp op, std::int32_t lhs, std::int32_t rhs) {
    Node n;
    n.kind = NodeKind::Binary;
    n.bop = op;
    n.a = lhs;
    n.b = rhs;
    nodes_.push_back(n);
    return static_cast<std::int32_t>(nodes_.size()) - 1;
}

bool ExprBuilder::subtree_uses_variable(std::int32_t idx) const {
    const Node& n = nodes_[static_cast<std::size_t>(idx)];
    switch (n.kind) {
        case NodeKind::Constant: return false;
        case NodeKind::Variable: return true;
        case NodeKind::Unary: return subtree_uses_variable(n.a);
        case NodeKind::Binary: return subtree_uses_variable(n.a) || subtree_uses_variable(n.b);
    }
    return false;
}

std::int32_t ExprBuilder::power(std::int32_t base, std::int32_t exponent) {
    if (!subtree_uses_variable(exponent)) {
        return binary(BinaryOp::Pow, base, exponent);
    }
    // u^v with variable exponent: exp(v*ln(u))
    std::int32_t ln_base = unary(UnaryOp::Ln, base);
    std::int32_t prod = binary(BinaryOp::Mul, exponent, ln_base);
    return unary(UnaryOp::Exp, prod);
}

std::int32_t ExprBuilder::copy_subtree(const Expr& src, std::int32_t idx) {
    const Node& n = src.node(idx);
    switch (n.kind) {
        case NodeKind::Constant: return constant(n.value);
        case NodeKind::Variable: return variable(n.var);
        case NodeKind::Unary: {
            std::int32_t c = copy_subtree(src, n.a);
            return unary(n.uop, c);
        }
        case NodeKind::Binary: {
            std::int32_t l = copy_subtree(src, n.a);
            std::int32_t r = copy_subtree(src, n.b);
            return binary(n.bop, l, r);
        }
    }
    return -1;
}

Expr ExprBuilder::seal(std::int32_t root) {
    Expr e;
    e.nodes_ = std::move(nodes_);
    e.root_ = root;
    nodes_.clear();
    return e;
}

// ---------------------------------------------------------------------------
// Tokenizer / parser

namespace {

enum class TokType { Number, VarX, VarY, Plus, Minus, Star, Slash, Caret, LParen, RParen, Func, End };

struct Token {
    TokType type = TokType::End;
    double num = 0.0;
    UnaryOp func = UnaryOp::Exp;
    std::size_t offset = 0;
};

const std::vector<std::string> kOperandTokens = {"number", "x", "y", "(", "-", "function"};

struct Lexer {
    std::string_view text;
    std::size_t pos = 0;

    void skip_ws() {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    }

    Token next() {
        skip_ws();
        Token t;
        t.offset = pos;
        if (pos >= text.size()) {
            t.type = TokType::End;
            return t;
        }
        char c = text[pos];
        switch (c) {
            case '+': ++pos; t.type = TokType::Plus; return t;
            case '-': ++pos; t.type = TokType::Minus; return t;
            case '*': ++pos; t.type = TokType::Star; return t;
            case '/': ++pos; t.type = TokType::Slash; return t;
            case '^': ++pos; t.type = TokType::Caret; return t;
            case '(': ++pos; t.type = TokType::LParen; return t;
            case ')': ++pos; t.type = TokType::RParen; return t;
            default: break;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t end = pos;
            while (end < text.size() && std::isdigit(static_cast<unsigned char>(text[end]))) ++end;
            if (end < text.size() && text[end] == '.' && end + 1 < text.size() &&
                std::isdigit(static_cast<unsigned char>(text[end + 1]))) {
                ++end;
                while (end < text.size() && std::isdigit(static_cast<unsigned char>(text[end]))) ++end;
            }
            if (end < text.size() && (text[end] == 'e' || text[end] == 'E')) {
                std::size_t exp_end = end + 1;
                if (exp_end < text.size() && (text[exp_end] == '+' || text[exp_end] == '-')) ++exp_end;
                if (exp_end < text.size() && std::isdigit(static_cast<unsigned char>(text[exp_end]))) {
                    ++exp_end;
                    while (exp_end < text.size() && std::isdigit(static_cast<unsigned char>(text[exp_end]))) ++exp_end;
                    end = exp_end;
                }
            }
            double value = 0.0;
            auto res = std::from_chars(text.data() + pos, text.data() + end, value);
            if (res.ec != std::errc() || res.ptr != text.data() + end) {
                throw ParseError(pos, "malformed number", {"number"});
            }
            pos = end;
            t.type = TokType::Number;
            t.num = value;
            return t;
        }
        if (std::isalpha(static_cast<unsigned char>(c))) {
            std::size_t end = pos;
            while (end < text.size() && std::isalpha(static_cast<unsigned char>(text[end]))) ++end;
            std::string_view word = text.substr(pos, end - pos);
            if (word == "x") { pos = end; t.type = TokType::VarX; return t; }
            if (word == "y") { pos = end; t.type = TokType::VarY; return t; }
            t.type = TokType::Func;
            if (word == "exp") t.func = UnaryOp::Exp;
            else if (word == "ln") t.func = UnaryOp::Ln;
            else if (word == "sqrt") t.func = UnaryOp::Sqrt;
            else if (word == "abs") t.func = UnaryOp::Abs;
            else if (word == "sin") t.func = UnaryOp::Sin;
            else if (word == "cos") t.func = UnaryOp::Cos;
            else throw ParseError(pos, "unknown identifier '" + std::string(word) + "'",
                                  {"x", "y", "exp", "ln", "sqrt", "abs", "sin", "cos"});
            pos = end;
            return t;
        }
        throw ParseError(pos, std::string("unknown token '") + c + "'", kOperandTokens);
    }
};

struct Parser {
    Lexer lex;
    Token tok;
    ExprBuilder builder;

    explicit Parser(std::string_view text) : lex{text} { advance(); }

    void advance() { tok = lex.next(); }

    [[noreturn]] void fail(const std::string& message, std::vector<std::string> expected) {
        throw ParseError(tok.offset, message, std::move(expected));
    }

    std::int32_t parse_expr() {
        std::int32_t left = parse_term();
        while (tok.type == TokType::Plus || tok.type == TokType::Minus) {
            BinaryOp op = tok.type == TokType::Plus ? BinaryOp::Add : BinaryOp::Sub;
            advance();
            std::int32_t right = parse_term();
            left = builder.binary(op, left, right);
        }
        return left;
    }

    std::int32_t parse_term() {
        std::int32_t left = parse_factor();
        while (tok.type == TokType::Star || tok.type == TokType::Slash) {
            BinaryOp op = tok.type == TokType::Star ? BinaryOp::Mul : BinaryOp::Div;
            advance();
            std::int32_t right = parse_factor();
            left = builder.binary(op, left, right);
        }
        return left;
    }

    std::int32_t parse_factor() {
        if (tok.type == TokType::Minus) {
            advance();
            std::int32_t child = parse_factor();
            return builder.unary(UnaryOp::Neg, child);
        }
        std::int32_t base = parse_base();
        if (tok.type == TokType::Caret) {
            advance();
            std::int32_t exponent = parse_factor();  // right-associative
            return builder.power(base, exponent);
        }
        return base;
    }

    std::int32_t parse_base() {
        switch (tok.type) {
            case TokType::Number: {
                double v = tok.num;
                advance();
                return builder.constant(v);
            }
            case TokType::VarX: advance(); return builder.variable(Var::X);
            case TokType::VarY: advance(); return builder.variable(Var::Y);
            case TokType::LParen: {
                advance();
                std::int32_t inner = parse_expr();
                expect_rparen();
                return inner;
            }
            case TokType::Func: {
                UnaryOp f = tok.func;
                advance();
                if (tok.type != TokType::LParen) fail("expected '(' after function name", {"("});
                advance();
                std::int32_t inner = parse_expr();
                expect_rparen();
                return builder.unary(f, inner);
            }
            default: fail("expected operand", kOperandTokens);
        }
    }

    void expect_rparen() {
        if (tok.type != TokType::RParen) fail("expected ')'", {")"});
        advance();
    }

    Expr run() {
        std::int32_t root = parse_expr();
        if (tok.type != TokType::End) {
            fail("unexpected trailing input", {"end of input", "+", "-", "*", "/", "^"});
        }
        return builder.seal(root);
    }
};

}  // namespace

Expr parse(std::string_view text) {
    Parser p(text);
    return p.run();
}

// ---------------------------------------------------------------------------
// Evaluation

namespace {

double int_pow(double base, long long n) {
    // n != 0 here
    bool negative = n < 0;
    unsigned long long m = negative ? static_cast<unsigned long long>(-(n + 1)) + 1ull
                                    : static_cast<unsigned long long>(n);
    double acc = 1.0;
    double p = base;
    while (m != 0) {
        if (m & 1ull) acc *= p;
        m >>= 1;
        if (m != 0) p *= p;
    }
    return negative ? 1.0 / acc : acc;
}

struct Evaluator {
    const Expr& e;
    double x, y;

    [[noreturn]] void domain_fail(const char* what, std::int32_t idx) const {
        throw DomainError(what, format_subtree(e, idx), x, y);
    }

    double run(std::int32_t idx) const {
        const Node& n = e.node(idx);
        switch (n.kind) {
            case NodeKind::Constant: return n.value;
            case NodeKind::Variable: return n.var == Var::X ? x : y;
            case NodeKind::Unary: {
                double v = run(n.a);
                switch (n.uop) {
                    case UnaryOp::Neg: return -v;
                    case UnaryOp::Exp: return std::exp(v);
                    case UnaryOp::Ln:
                        if (!(v > 0.0)) domain_fail("ln of non-positive argument", idx);
                        return std::log(v);
                    case UnaryOp::Sqrt:
                        if (v < 0.0) domain_fail("sqrt of negative argument", idx);
                        return std::sqrt(v);
                    case UnaryOp::Abs: return std::fabs(v);
                    case UnaryOp::Sin: return std::sin(v);
                    case UnaryOp::Cos: return std::cos(v);
                    case UnaryOp::Sign: return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0);
                }
                break;
            }
            case NodeKind::Binary: {
                if (n.bop == BinaryOp::Pow) {
                    double base = run(n.a);
                    double expo = run(n.b);  // exponent subtree is variable-free
                    if (expo == std::floor(expo) && std::fabs(expo) <= 9.0e15) {
                        auto ie = static_cast<long long>(expo);
                        if (ie == 0) return 1.0;
                        if (base == 0.0 && ie < 0) domain_fail("zero base with negative exponent", idx);
                        return int_pow(base, ie);
                    }
                    if (base < 0.0) domain_fail("negative base with non-integer exponent", idx);
                    if (base == 0.0 && expo < 0.0) domain_fail("zero base with negative exponent", idx);
                    return std::pow(base, expo);
                }
                double l = run(n.a);
                double r = run(n.b);
                switch (n.bop) {
                    case BinaryOp::Add: return l + r;
                    case BinaryOp::Sub: return l - r;
                    case BinaryOp::Mul: return l * r;
                    case BinaryOp::Div:
                        if (r == 0.0) domain_fail("division by zero", idx);
                        return l / r;
                    case BinaryOp::Pow: break;  // handled above
                }
                break;
            }
        }
        return 0.0;  // unreachable
    }
};

}  // namespace

double eval(const Expr& e, double x, double y) {
    Evaluator ev{e, x, y};
    return ev.run(e.root());
}

// ---------------------------------------------------------------------------
// Differentiation

namespace {

struct Differentiator {
    const Expr& src;
    Var var;
    ExprBuilder out;

    std::int32_t cp(std::int32_t idx) { return out.copy_subtree(src, idx); }

    double const_subtree_value(std::int32_t idx) {
        // Pow exponents are variable-free by construction, so any (x, y)
        // works; domain errors in a constant exponent surface here.
        return Evaluator{src, 0.0, 0.0}.run(idx);
    }

    std::int32_t d(std::int32_t idx) {
        const Node& n = src.node(idx);
        switch (n.kind) {
            case NodeKind::Constant: return out.constant(0.0);
            case NodeKind::Variable: return out.constant(n.var == var ? 1.0 : 0.0);
            case NodeKind::Unary: {
                switch (n.uop) {
                    case UnaryOp::Neg: return out.unary(UnaryOp::Neg, d(n.a));
                    case UnaryOp::Exp: return out.binary(BinaryOp::Mul, out.unary(UnaryOp::Exp, cp(n.a)), d(n.a));
                    case UnaryOp::Ln: return out.binary(BinaryOp::Div, d(n.a), cp(n.a));
                    case UnaryOp::Sqrt:
                        return out.binary(BinaryOp::Div, d(n.a),
                                          out.binary(BinaryOp::Mul, out.constant(2.0),
                                                     out.unary(UnaryOp::Sqrt, cp(n.a))));
                    case UnaryOp::Abs:
                        return out.binary(BinaryOp::Mul, out.unary(UnaryOp::Sign, cp(n.a)), d(n.a));
                    case UnaryOp::Sin:
                        return out.binary(BinaryOp::Mul, out.unary(UnaryOp::Cos, cp(n.a)), d(n.a));
                    case UnaryOp::Cos:
                        return out.binary(BinaryOp::Mul,
                                          out.unary(UnaryOp::Neg, out.unary(UnaryOp::Sin, cp(n.a))), d(n.a));
                    case UnaryOp::Sign: return out.constant(0.0);
                }
                break;
            }
            case NodeKind::Binary: {
                switch (n.bop) {
                    case BinaryOp::Add: return out.binary(BinaryOp::Add, d(n.a), d(n.b));
                    case BinaryOp::Sub: return out.binary(BinaryOp::Sub, d(n.a), d(n.b));
                    case BinaryOp::Mul: {
                        std::int32_t left = out.binary(BinaryOp::Mul, d(n.a), cp(n.b));
                        std::int32_t right = out.binary(BinaryOp::Mul, cp(n.a), d(n.b));
                        return out.binary(BinaryOp::Add, left, right);
                    }
                    case BinaryOp::Div: {
                        std::int32_t num = out.binary(
                            BinaryOp::Sub, out.binary(BinaryOp::Mul, d(n.a), cp(n.b)),
                            out.binary(BinaryOp::Mul, cp(n.a), d(n.b)));
                        std::int32_t den = out.binary(BinaryOp::Mul, cp(n.b), cp(n.b));
                        return out.binary(BinaryOp::Div, num, den);
                    }
                    case BinaryOp::Pow: {
                        // Exponent is variable-free: d u^g = g*u^(g-1)*u'.
                        double g = const_subtree_value(n.b);
                        if (g == 0.0) return out.constant(0.0);
                        std::int32_t powered = out.binary(BinaryOp::Pow, cp(n.a), out.constant(g - 1.0));
                        std::int32_t coeff = out.binary(BinaryOp::Mul, out.constant(g), powered);
                        return out.binary(BinaryOp::Mul, coeff, d(n.a));
                    }
                }
                break;
            }
        }
        return out.constant(0.0);  // unreachable
    }
};

}  // namespace

Expr differentiate(const Expr& e, Var v) {
    Differentiator diff{e, v, {}};
    std::int32_t root = diff.d(e.root());
    return diff.out.seal(root);
}

Expr mixed_partial(const Expr& e) { return differentiate(differentiate(e, Var::X), Var::Y); }

// ---------------------------------------------------------------------------
// Formatting

namespace {

void fmt_double(std::string& out, double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    out += buf;
}

const char* func_name(UnaryOp op) {
    switch (op) {
        case UnaryOp::Exp: return "exp";
        case UnaryOp::Ln: return "ln";
        case UnaryOp::Sqrt: return "sqrt";
        case UnaryOp::Abs: return "abs";
        case UnaryOp::Sin: return "sin";
        case UnaryOp::Cos: return "cos";
        case UnaryOp::Sign: return "sign";
        case UnaryOp::Neg: return "-";
    }
    return "?";
}

// Precedence levels: add/sub 1, mul/div 2, unary minus 3, pow 4, atoms 5.
int node_precedence(const Node& n) {
    switch (n.kind) {
        case NodeKind::Constant:
        case NodeKind::Variable: return 5;
        case NodeKind::Unary: return n.uop == UnaryOp::Neg ? 3 : 5;
        case NodeKind::Binary:
            switch (n.bop) {
                case BinaryOp::Add:
                case BinaryOp::Sub: return 1;
                case BinaryOp::Mul:
                case BinaryOp::Div: return 2;
                case BinaryOp::Pow: return 4;
            }
    }
    return 5;
}

struct Formatter {
    const Expr& e;
    std::string out;

    void emit(std::int32_t idx, int min_prec) {
        const Node& n = e.node(idx);
        bool parens = node_precedence(n) < min_prec;
        if (parens) out += '(';
        switch (n.kind) {
            case NodeKind::Constant: fmt_double(out, n.value); break;
            case NodeKind::Variable: out += n.var == Var::X ? 'x' : 'y'; break;
            case NodeKind::Unary:
                if (n.uop == UnaryOp::Neg) {
                    out += '-';
                    emit(n.a, 4);  // "-a*b" would reparse as (-a)*b
                } else {
                    out += func_name(n.uop);
                    out += '(';
                    emit(n.a, 0);
                    out += ')';
                }
                break;
            case NodeKind::Binary: {
                switch (n.bop) {
                    case BinaryOp::Add: emit(n.a, 1); out += '+'; emit(n.b, 2); break;
                    case BinaryOp::Sub: emit(n.a, 1); out += '-'; emit(n.b, 2); break;
                    case BinaryOp::Mul: emit(n.a, 2); out += '*'; emit(n.b, 3); break;
                    case BinaryOp::Div: emit(n.a, 2); out += '/'; emit(n.b, 3); break;
                    case BinaryOp::Pow: emit(n.a, 5); out += '^'; emit(n.b, 4); break;
                }
                break;
            }
        }
        if (parens) out += ')';
    }
};

}  // namespace

std::string format_subtree(const Expr& e, std::int32_t idx) {
    Formatter f{e, {}};
    f.emit(idx, 0);
    return std::move(f.out);
}

std::string format(const Expr& e) { return format_subtree(e, e.root()); }

namespace {

bool nodes_equal(const Expr& lhs, std::int32_t li, const Expr& rhs, std::int32_t ri) {
    const Node& a = lhs.node(li);
    const Node& b = rhs.node(ri);
    if (a.kind != b.kind) return false;
    switch (a.kind) {
        case NodeKind::Constant: return a.value == b.value;
        case NodeKind::Variable: return a.var == b.var;
        case NodeKind::Unary: return a.uop == b.uop && nodes_equal(lhs, a.a, rhs, b.a);
        case NodeKind::Binary:
            return a.bop == b.bop && nodes_equal(lhs, a.a, rhs, b.a) && nodes_equal(lhs, a.b, rhs, b.b);
    }
    return false;
}

bool subtree_uses(const Expr& e, std::int32_t idx, Var v) {
    const Node& n = e.node(idx);
    switch (n.kind) {
        case NodeKind::Constant: return false;
        case NodeKind::Variable: return n.var == v;
        case NodeKind::Unary: return subtree_uses(e, n.a, v);
        case NodeKind::Binary: return subtree_uses(e, n.a, v) || subtree_uses(e, n.b, v);
    }
    return false;
}

}  // namespace

bool structurally_equal(const Expr& lhs, const Expr& rhs) {
    return nodes_equal(lhs, lhs.root(), rhs, rhs.root());
}

bool uses_variable(const Expr& e, Var v) { return subtree_uses(e, e.root(), v); }

Expr make_constant(double v) {
    ExprBuilder b;
    return b.seal(b.constant(v));
}

Expr make_variable(Var v) {
    ExprBuilder b;
    return b.seal(b.variable(v));
}

Expr make_unary(UnaryOp op, const Expr& child) {
    ExprBuilder b;
    std::int32_t c = b.copy_subtree(child, child.root());
    return b.seal(b.unary(op, c));
}

Expr make_binary(BinaryOp op, const Expr& lhs, const Expr& rhs) {
    ExprBuilder b;
    std::int32_t l = b.copy_subtree(lhs, lhs.root());
    std::int32_t r = b.copy_subtree(rhs, rhs.root());
    if (op == BinaryOp::Pow) return b.seal(b.power(l, r));
    return b.seal(b.binary(op, l, r));
}

}  // namespace hct
