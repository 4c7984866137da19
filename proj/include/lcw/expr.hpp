#pragma once

// Closed-form expression language for metric components.
//
//   expr   := term (('+'|'-') term)*
//   term   := factor (('*'|'/') factor)*
//   factor := base ('^' integer)?
//   base   := number | ident | '(' expr ')' | func '(' expr ')' | '-' base
//   func   := sin | cos | tan | exp | log | sqrt | atan | bump
//
// `bump(t)` is the smooth cutoff exp(1 - 1/(1 - t)) for t < 1 and 0 otherwise.
// Exponents are integers; `x^-2` and `x^(-2)` are both accepted. Unary minus
// is part of `base`, so `-x^2` means (-x)^2.

#include <cmath>
#include <cstddef>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <type_traits>
#include <vector>

namespace lcw {

/// Syntax error with the byte offset where it was detected.
class ParseError : public std::runtime_error {
public:
  ParseError(const std::string &message, std::size_t offset);
  std::size_t offset() const noexcept { return offset_; }
  const std::string &detail() const noexcept { return detail_; }

private:
  std::string detail_;
  std::size_t offset_;
};

/// Domain error raised while evaluating a node (log of a non-positive value,
/// division by zero, ...). The offset points at the offending node.
class EvaluationError : public std::runtime_error {
public:
  EvaluationError(const std::string &message, std::size_t offset);
  std::size_t offset() const noexcept { return offset_; }

private:
  std::size_t offset_;
};

enum class NodeKind {
  constant,
  variable,
  neg,
  sin,
  cos,
  tan,
  exp,
  log,
  sqrt,
  atan,
  bump,
  add,
  sub,
  mul,
  div,
  pow,
};

struct ExprNode {
  NodeKind kind = NodeKind::constant;
  double value = 0.0; // constant
  int index = 0;      // variable index, or integer exponent for pow
  int lhs = -1;       // operand of unary nodes, left operand of binary nodes
  int rhs = -1;
  std::size_t offset = 0;
};

/// Immutable expression tree. Copies share the node storage.
class Expr {
public:
  Expr() = default;
  Expr(std::vector<ExprNode> nodes, int root, std::vector<std::string> coords);

  const ExprNode &node(int i) const { return (*nodes_)[static_cast<std::size_t>(i)]; }
  int root() const noexcept { return root_; }
  std::size_t node_count() const noexcept { return nodes_ ? nodes_->size() : 0; }
  const std::vector<std::string> &coordinates() const noexcept { return *coords_; }
  bool empty() const noexcept { return !nodes_; }

  /// True when the expression is the literal constant `c`.
  bool is_constant(double c) const;
  /// True when no variable occurs in the tree.
  bool is_constant_expression() const;

private:
  std::shared_ptr<const std::vector<ExprNode>> nodes_;
  std::shared_ptr<const std::vector<std::string>> coords_;
  int root_ = -1;
};

Expr parse_expr(std::string_view source, std::span<const std::string> coords);

/// Canonical text form; reparses to a structurally identical tree.
std::string to_string(const Expr &e);

/// Same shape, same constants (bitwise), same variables. Offsets are ignored.
bool structurally_equal(const Expr &a, const Expr &b);

/// Shortest decimal text that round-trips to the same double.
std::string format_number(double v);

bool is_reserved_name(std::string_view name);

namespace detail {

inline double value_of(double x) { return x; }

[[noreturn]] void throw_domain(const ExprNode &node, const char *what);

inline double ipow(double x, int k) { return std::pow(x, k); }

inline double bump(double t) {
  if (t >= 1.0)
    return 0.0;
  return std::exp(1.0 - 1.0 / (1.0 - t));
}

} // namespace detail

/// Evaluates over any scalar type providing the arithmetic operators and the
/// free functions sin, cos, tan, exp, log, sqrt, atan, bump, ipow, value_of
/// (double and Jet3 both qualify).
template <class Scalar>
Scalar eval_expr(const Expr &e, std::span<const Scalar> env) {
  using detail::bump;
  using detail::ipow;
  using detail::value_of;
  using std::atan;
  using std::cos;
  using std::exp;
  using std::log;
  using std::sin;
  using std::sqrt;
  using std::tan;

  if (env.empty())
    throw std::invalid_argument("eval_expr: empty environment");
  const Scalar &like = env[0];

  auto rec = [&](auto &self, int i) -> Scalar {
    const ExprNode &nd = e.node(i);
    switch (nd.kind) {
    case NodeKind::constant: {
      Scalar c = like;
      c = nd.value;
      return c;
    }
    case NodeKind::variable:
      return env[static_cast<std::size_t>(nd.index)];
    case NodeKind::neg:
      return -self(self, nd.lhs);
    case NodeKind::sin:
      return sin(self(self, nd.lhs));
    case NodeKind::cos:
      return cos(self(self, nd.lhs));
    case NodeKind::tan: {
      Scalar a = self(self, nd.lhs);
      if (std::cos(value_of(a)) == 0.0)
        detail::throw_domain(nd, "tan at a pole");
      return tan(a);
    }
    case NodeKind::exp:
      return exp(self(self, nd.lhs));
    case NodeKind::log: {
      Scalar a = self(self, nd.lhs);
      if (!(value_of(a) > 0.0))
        detail::throw_domain(nd, "log of a non-positive value");
      return log(a);
    }
    case NodeKind::sqrt: {
      Scalar a = self(self, nd.lhs);
      if constexpr (std::is_same_v<Scalar, double>) {
        if (!(a >= 0.0))
          detail::throw_domain(nd, "sqrt of a negative value");
      } else {
        if (!(value_of(a) > 0.0))
          detail::throw_domain(nd, "sqrt of a non-positive value (derivatives undefined)");
      }
      return sqrt(a);
    }
    case NodeKind::atan:
      return atan(self(self, nd.lhs));
    case NodeKind::bump:
      return bump(self(self, nd.lhs));
    case NodeKind::add:
      return self(self, nd.lhs) + self(self, nd.rhs);
    case NodeKind::sub:
      return self(self, nd.lhs) - self(self, nd.rhs);
    case NodeKind::mul:
      return self(self, nd.lhs) * self(self, nd.rhs);
    case NodeKind::div: {
      Scalar a = self(self, nd.lhs);
      Scalar b = self(self, nd.rhs);
      if (value_of(b) == 0.0)
        detail::throw_domain(nd, "division by zero");
      return a / b;
    }
    case NodeKind::pow: {
      Scalar a = self(self, nd.lhs);
      if (nd.index < 0 && value_of(a) == 0.0)
        detail::throw_domain(nd, "negative power of zero");
      return ipow(a, nd.index);
    }
    }
    detail::throw_domain(nd, "corrupt node");
  };
  return rec(rec, e.root());
}

inline double eval_expr(const Expr &e, std::span<const double> env) {
  return eval_expr<double>(e, env);
}

} // namespace lcw
