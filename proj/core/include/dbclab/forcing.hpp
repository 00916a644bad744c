#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace dbclab {

/// Values for the free variables of a data expression.  The caller derives
/// x = r cos(theta) and y = r sin(theta).
struct Bindings {
  double x = 0.0;
  double y = 0.0;
  double r = 0.0;
  double theta = 0.0;
  double t = 0.0;

  static Bindings polar(double r, double theta, double t = 0.0);
};

/// Parsed data expression: literals, the variables x y r theta t, the constant
/// pi, binary + - * / ^ (right associative), unary minus, and the functions
/// sin cos exp tanh log abs.  Immutable once built; evaluation does not allocate.
class Expression {
 public:
  enum class Op : std::uint8_t { Number, Var, Add, Sub, Mul, Div, Pow, Neg, Call };
  enum class Variable : std::uint8_t { X, Y, R, Theta, T };
  enum class Function : std::uint8_t { Sin, Cos, Exp, Tanh, Log, Abs };

  struct Node {
    Op op;
    Variable var = Variable::X;
    Function fn = Function::Sin;
    double number = 0.0;
    std::int32_t lhs = -1;
    std::int32_t rhs = -1;
  };

  Expression() = default;

  /// Throws DomainError for log of a non-positive value or any non-finite intermediate.
  double eval(const Bindings& b) const;
  /// Canonical, fully parenthesized text; parse(print()) reproduces the tree.
  std::string print() const;
  bool uses(Variable v) const noexcept;
  bool empty() const noexcept { return nodes_.empty(); }
  const std::string& source() const noexcept { return source_; }

 private:
  friend Expression parse(std::string_view text);
  friend class Parser;

  double eval_node(std::int32_t k, const Bindings& b) const;
  void print_node(std::int32_t k, std::string& out) const;

  std::vector<Node> nodes_;
  std::int32_t root_ = -1;
  std::string source_;
};

/// Throws ParseError (with byte offset) on malformed text or unknown identifiers.
Expression parse(std::string_view text);

}  // namespace dbclab
