#include "dbclab/forcing.hpp"

#include <charconv>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "dbclab/error.hpp"

namespace dbclab {

Bindings Bindings::polar(double r, double theta, double t) {
  return {r * std::cos(theta), r * std::sin(theta), r, theta, t};
}

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  Expression run() {
    out_.source_ = std::string(text_);
    out_.root_ = expr();
    skip();
    if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return std::move(out_);
  }

 private:
  using Node = Expression::Node;
  using Op = Expression::Op;

  [[noreturn]] void fail(const std::string& what) const { throw ParseError(what, pos_); }

  void skip() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  std::int32_t push(Node n) {
    out_.nodes_.push_back(n);
    return static_cast<std::int32_t>(out_.nodes_.size() - 1);
  }

  std::int32_t binary(Op op, std::int32_t a, std::int32_t b) {
    Node n{op};
    n.lhs = a;
    n.rhs = b;
    return push(n);
  }

  std::int32_t expr() {
    std::int32_t lhs = term();
    for (;;) {
      if (accept('+')) lhs = binary(Op::Add, lhs, term());
      else if (accept('-')) lhs = binary(Op::Sub, lhs, term());
      else return lhs;
    }
  }

  std::int32_t term() {
    std::int32_t lhs = unary();
    for (;;) {
      if (accept('*')) lhs = binary(Op::Mul, lhs, unary());
      else if (accept('/')) lhs = binary(Op::Div, lhs, unary());
      else return lhs;
    }
  }

  // Unary minus binds looser than '^', so -2^2 = -(2^2).
  std::int32_t unary() {
    if (accept('-')) {
      Node n{Op::Neg};
      n.lhs = unary();
      return push(n);
    }
    if (accept('+')) return unary();
    return power();
  }

  std::int32_t power() {
    std::int32_t base = primary();
    if (accept('^')) return binary(Op::Pow, base, unary());
    return base;
  }

  std::int32_t primary() {
    skip();
    if (pos_ >= text_.size()) fail("unexpected end of expression");
    const char c = text_[pos_];
    if (accept('(')) {
      const std::int32_t inner = expr();
      if (!accept(')')) fail("expected ')'");
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
    fail("unexpected '" + std::string(1, c) + "'");
  }

  std::int32_t number() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.'))
      ++pos_;
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      std::size_t p = pos_ + 1;
      if (p < text_.size() && (text_[p] == '+' || text_[p] == '-')) ++p;
      if (p < text_.size() && std::isdigit(static_cast<unsigned char>(text_[p]))) {
        pos_ = p;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      }
    }
    double value = 0.0;
    const char* first = text_.data() + start;
    const char* last = text_.data() + pos_;
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last) {
      pos_ = start;
      fail("malformed number");
    }
    Node n{Op::Number};
    n.number = value;
    return push(n);
  }

  std::int32_t identifier() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
      ++pos_;
    const std::string_view name = text_.substr(start, pos_ - start);

    using V = Expression::Variable;
    using F = Expression::Function;
    struct VarName { std::string_view name; V var; };
    static constexpr VarName vars[] = {
        {"x", V::X}, {"y", V::Y}, {"r", V::R}, {"theta", V::Theta}, {"t", V::T}};
    for (const auto& v : vars) {
      if (v.name == name) {
        Node n{Op::Var};
        n.var = v.var;
        return push(n);
      }
    }
    if (name == "pi") {
      Node n{Op::Number};
      n.number = std::numbers::pi;
      return push(n);
    }
    struct FnName { std::string_view name; F fn; };
    static constexpr FnName fns[] = {{"sin", F::Sin},   {"cos", F::Cos}, {"exp", F::Exp},
                                     {"tanh", F::Tanh}, {"log", F::Log}, {"abs", F::Abs}};
    for (const auto& f : fns) {
      if (f.name == name) {
        if (!accept('(')) fail("expected '(' after function " + std::string(name));
        Node n{Op::Call};
        n.fn = f.fn;
        n.lhs = expr();
        if (!accept(')')) fail("expected ')'");
        return push(n);
      }
    }
    pos_ = start;
    fail("unknown identifier '" + std::string(name) + "'");
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  Expression out_;
};

Expression parse(std::string_view text) { return Parser(text).run(); }

double Expression::eval(const Bindings& b) const {
  if (root_ < 0) throw DomainError("evaluating an empty expression");
  return eval_node(root_, b);
}

double Expression::eval_node(std::int32_t k, const Bindings& b) const {
  const Node& n = nodes_[static_cast<std::size_t>(k)];
  double v = 0.0;
  switch (n.op) {
    case Op::Number: return n.number;
    case Op::Var:
      switch (n.var) {
        case Variable::X: return b.x;
        case Variable::Y: return b.y;
        case Variable::R: return b.r;
        case Variable::Theta: return b.theta;
        case Variable::T: return b.t;
      }
      return 0.0;
    case Op::Add: v = eval_node(n.lhs, b) + eval_node(n.rhs, b); break;
    case Op::Sub: v = eval_node(n.lhs, b) - eval_node(n.rhs, b); break;
    case Op::Mul: v = eval_node(n.lhs, b) * eval_node(n.rhs, b); break;
    case Op::Div: v = eval_node(n.lhs, b) / eval_node(n.rhs, b); break;
    case Op::Pow: v = std::pow(eval_node(n.lhs, b), eval_node(n.rhs, b)); break;
    case Op::Neg: v = -eval_node(n.lhs, b); break;
    case Op::Call: {
      const double a = eval_node(n.lhs, b);
      switch (n.fn) {
        case Function::Sin: v = std::sin(a); break;
        case Function::Cos: v = std::cos(a); break;
        case Function::Exp: v = std::exp(a); break;
        case Function::Tanh: v = std::tanh(a); break;
        case Function::Abs: v = std::abs(a); break;
        case Function::Log:
          if (!(a > 0.0)) throw DomainError("log of non-positive value in '" + source_ + "'");
          v = std::log(a);
          break;
      }
      break;
    }
  }
  if (!std::isfinite(v)) throw DomainError("non-finite value while evaluating '" + source_ + "'");
  return v;
}

std::string Expression::print() const {
  std::string out;
  if (root_ >= 0) print_node(root_, out);
  return out;
}

void Expression::print_node(std::int32_t k, std::string& out) const {
  const Node& n = nodes_[static_cast<std::size_t>(k)];
  auto bin = [&](const char* op) {
    out += '(';
    print_node(n.lhs, out);
    out += op;
    print_node(n.rhs, out);
    out += ')';
  };
  switch (n.op) {
    case Op::Number: {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.17g", n.number);
      out += buf;
      return;
    }
    case Op::Var: {
      static constexpr const char* names[] = {"x", "y", "r", "theta", "t"};
      out += names[static_cast<int>(n.var)];
      return;
    }
    case Op::Add: bin("+"); return;
    case Op::Sub: bin("-"); return;
    case Op::Mul: bin("*"); return;
    case Op::Div: bin("/"); return;
    case Op::Pow: bin("^"); return;
    case Op::Neg:
      out += "(-";
      print_node(n.lhs, out);
      out += ')';
      return;
    case Op::Call: {
      static constexpr const char* names[] = {"sin", "cos", "exp", "tanh", "log", "abs"};
      out += names[static_cast<int>(n.fn)];
      out += '(';
      print_node(n.lhs, out);
      out += ')';
      return;
    }
  }
}

bool Expression::uses(Variable v) const noexcept {
  for (const Node& n : nodes_)
    if (n.op == Op::Var && n.var == v) return true;
  return false;
}

}  // namespace dbclab
