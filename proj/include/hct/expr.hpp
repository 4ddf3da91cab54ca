#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace hct {

enum class Var : std::uint8_t { X, Y };

// Sign never comes out of the parser; differentiate() introduces it for abs,
// with the convention sign(0) = 0.
enum class UnaryOp : std::uint8_t { Neg, Exp, Ln, Sqrt, Abs, Sin, Cos, Sign };

enum class BinaryOp : std::uint8_t { Add, Sub, Mul, Div, Pow };

enum class NodeKind : std::uint8_t { Constant, Variable, Unary, Binary };

struct Node {
    NodeKind kind = NodeKind::Constant;
    double value = 0.0;            // Constant payload
    Var var = Var::X;              // Variable payload
    UnaryOp uop = UnaryOp::Neg;    // Unary payload
    BinaryOp bop = BinaryOp::Add;  // Binary payload
    std::int32_t a = -1;           // unary child / binary left
    std::int32_t b = -1;           // binary right
};

/// Immutable syntax tree of a bivariate function f(x, y).
///
/// Nodes live in a flat arena; children always precede their parent, so the
/// root is the last node. Pow nodes are guaranteed to have a variable-free
/// exponent subtree: u^v with v containing x or y is rewritten to
/// exp(v*ln(u)) at construction time.
class Expr {
  public:
    const Node& node(std::int32_t i) const { return nodes_[static_cast<std::size_t>(i)]; }
    std::int32_t root() const { return root_; }
    std::int32_t size() const { return static_cast<std::int32_t>(nodes_.size()); }

  private:
    std::vector<Node> nodes_;
    std::int32_t root_ = -1;
    friend class ExprBuilder;
};

/// Bottom-up construction helper. Every add_* returns the index of the new
/// node; seal() fixes the root.
class ExprBuilder {
  public:
    std::int32_t constant(double v);
    std::int32_t variable(Var v);
    std::int32_t unary(UnaryOp op, std::int32_t child);
    std::int32_t binary(BinaryOp op, std::int32_t lhs, std::int32_t rhs);
    /// Applies the exp/ln rewrite when the exponent subtree uses a variable.
    std::int32_t power(std::int32_t base, std::int32_t exponent);
    /// Deep-copies a subtree of another expression into this builder.
    std::int32_t copy_subtree(const Expr& src, std::int32_t idx);
    bool subtree_uses_variable(std::int32_t idx) const;
    Expr seal(std::int32_t root);

  private:
    std::vector<Node> nodes_;
};

struct ParseError : std::runtime_error {
    ParseError(std::size_t offset_, std::string message_, std::vector<std::string> expected_);
    std::size_t offset;              // byte offset into the input
    std::string message;
    std::vector<std::string> expected;  // token names that would have been accepted
};

struct DomainError : std::runtime_error {
    explicit DomainError(std::string message_);
    DomainError(std::string message_, std::string node_, double x_, double y_);
    std::string message;
    std::string node;  // formatted offending subexpression, empty if not tied to a node
    double at_x = 0.0;
    double at_y = 0.0;
};

struct NotConvergedError : std::runtime_error {
    explicit NotConvergedError(const std::string& message);
};

/// Parses the fixed expression grammar:
///
///   expr   := term (("+"|"-") term)*
///   term   := factor (("*"|"/") factor)*
///   factor := "-" factor | base ("^" factor)?
///   base   := NUMBER | "x" | "y" | "(" expr ")" | FUNC "(" expr ")"
///   FUNC   := "exp" | "ln" | "sqrt" | "abs" | "sin" | "cos"
///   NUMBER := digits ["." digits] [("e"|"E") ["+"|"-"] digits]
///
/// "^" binds tighter than unary minus and associates to the right. There is
/// no implicit multiplication; "2x" is rejected.
Expr parse(std::string_view text);

/// IEEE-754 binary64 evaluation. Throws DomainError for ln of a non-positive
/// argument, sqrt of a negative argument, division by zero, and invalid
/// power combinations. Pow with an integral exponent multiplies repeatedly,
/// so negative bases are fine there.
double eval(const Expr& e, double x, double y);

/// Exact structural derivative. abs differentiates as sign(u)*u' with
/// sign(0) = 0. No simplification is performed beyond d/du u^0 = 0.
Expr differentiate(const Expr& e, Var v);

/// differentiate(differentiate(e, X), Y).
Expr mixed_partial(const Expr& e);

/// Prints an expression that reparses to a structurally identical tree, for
/// every tree the grammar can produce. Trees containing Sign nodes (from
/// differentiation) or negative constants print fine but are outside the
/// grammar.
std::string format(const Expr& e);
std::string format_subtree(const Expr& e, std::int32_t idx);

bool structurally_equal(const Expr& lhs, const Expr& rhs);
bool uses_variable(const Expr& e, Var v);

// Programmatic construction, mainly for combining parsed expressions
// (e.g. |mixed partial|^q). make_binary applies the same Pow rewrite as the
// parser.
Expr make_constant(double v);
Expr make_variable(Var v);
Expr make_unary(UnaryOp op, const Expr& child);
Expr make_binary(BinaryOp op, const Expr& lhs, const Expr& rhs);

}  // namespace hct
