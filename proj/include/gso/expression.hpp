#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace gso {

/// Abstract syntax tree of the time-expression language:
/// literals, `t`, `pi`, unary minus, + - * / ^ and the functions
/// sin, cos, exp, sqrt, tanh, log, pow. `^` binds tighter than unary
/// minus and is right-associative; the other binary operators associate
/// to the left.
class Expression {
public:
    enum class Kind { Number, Var, Pi, Neg, Add, Sub, Mul, Div, Pow, Call };
    enum class Func { Sin, Cos, Exp, Sqrt, Tanh, Log, Pow };

    struct Node {
        Kind kind;
        double number = 0.0;
        Func func = Func::Sin;
        std::vector<std::shared_ptr<const Node>> args;
    };
    using NodePtr = std::shared_ptr<const Node>;

    Expression();  ///< the constant 0
    explicit Expression(NodePtr root);

    static Expression constant(double v);
    static Expression variable();

    double evaluate(double t) const;
    /// True when the tree does not mention `t`.
    bool is_constant() const;
    /// Text that parses back to a structurally identical tree.
    std::string to_string() const;

    const NodePtr& root() const { return root_; }

    friend bool structurally_equal(const Expression& a, const Expression& b);

private:
    NodePtr root_;
};

/// Recursive-descent parser. Throws SyntaxError (byte offset) or
/// ValidationError for identifiers outside the grammar.
Expression parse_expression(std::string_view text);

/// Symbolic d/dt, followed by `simplify`.
Expression differentiate(const Expression& e);

/// Constant folding and neutral-element removal; moves numeric factors
/// to the left of products so that e.g. d/dt sin(2*t) prints 2*cos(2*t).
Expression simplify(const Expression& e);

bool structurally_equal(const Expression& a, const Expression& b);

/// Shortest decimal representation that reads back to the same double.
std::string format_double(double v);

}  // namespace gso
