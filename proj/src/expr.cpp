#include "lcw/expr.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cstring>
#include <limits>
#include <utility>

namespace lcw {

ParseError::ParseError(const std::string &message, std::size_t offset)
    : std::runtime_error(message + " at offset " + std::to_string(offset)),
      detail_(message), offset_(offset) {}

EvaluationError::EvaluationError(const std::string &message, std::size_t offset)
    : std::runtime_error(message + " at offset " + std::to_string(offset)),
      offset_(offset) {}

void detail::throw_domain(const ExprNode &node, const char *what) {
  throw EvaluationError(std::string("domain error: ") + what, node.offset);
}

namespace {

struct FunctionName {
  const char *name;
  NodeKind kind;
};

constexpr std::array<FunctionName, 8> kFunctions{{
    {"sin", NodeKind::sin},
    {"cos", NodeKind::cos},
    {"tan", NodeKind::tan},
    {"exp", NodeKind::exp},
    {"log", NodeKind::log},
    {"sqrt", NodeKind::sqrt},
    {"atan", NodeKind::atan},
    {"bump", NodeKind::bump},
}};

const char *function_name(NodeKind k) {
  for (const auto &f : kFunctions)
    if (f.kind == k)
      return f.name;
  return nullptr;
}

bool is_ident_start(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}
bool is_ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

class Parser {
public:
  Parser(std::string_view src, std::span<const std::string> coords)
      : src_(src), coords_(coords) {}

  Expr run() {
    int root = parse_expr();
    skip_ws();
    if (pos_ != src_.size()) {
      if (src_[pos_] == ',')
        fail("arity mismatch: unexpected ','", pos_);
      if (src_[pos_] == ')')
        fail("unbalanced ')'", pos_);
      fail(std::string("unexpected character '") + src_[pos_] + "'", pos_);
    }
    return Expr(std::move(nodes_), root,
                std::vector<std::string>(coords_.begin(), coords_.end()));
  }

private:
  [[noreturn]] void fail(const std::string &msg, std::size_t at) {
    throw ParseError(msg, at);
  }

  void skip_ws() {
    while (pos_ < src_.size() &&
           std::isspace(static_cast<unsigned char>(src_[pos_])))
      ++pos_;
  }

  bool peek(char c) {
    skip_ws();
    return pos_ < src_.size() && src_[pos_] == c;
  }

  void expect(char c) {
    if (!peek(c)) {
      if (pos_ >= src_.size())
        fail(std::string("expected '") + c + "' before end of input", pos_);
      if (c == ')' && src_[pos_] == ',')
        fail("arity mismatch: functions take one argument", pos_);
      fail(std::string("expected '") + c + "'", pos_);
    }
    ++pos_;
  }

  int add(ExprNode n) {
    nodes_.push_back(n);
    return static_cast<int>(nodes_.size() - 1);
  }

  int binary(NodeKind k, int lhs, int rhs, std::size_t at) {
    ExprNode n;
    n.kind = k;
    n.lhs = lhs;
    n.rhs = rhs;
    n.offset = at;
    return add(n);
  }

  int parse_expr() {
    int lhs = parse_term();
    for (;;) {
      skip_ws();
      if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) {
        std::size_t at = pos_;
        NodeKind k = src_[pos_] == '+' ? NodeKind::add : NodeKind::sub;
        ++pos_;
        int rhs = parse_term();
        lhs = binary(k, lhs, rhs, at);
      } else {
        return lhs;
      }
    }
  }

  int parse_term() {
    int lhs = parse_factor();
    for (;;) {
      skip_ws();
      if (pos_ < src_.size() && (src_[pos_] == '*' || src_[pos_] == '/')) {
        std::size_t at = pos_;
        NodeKind k = src_[pos_] == '*' ? NodeKind::mul : NodeKind::div;
        ++pos_;
        int rhs = parse_factor();
        lhs = binary(k, lhs, rhs, at);
      } else {
        return lhs;
      }
    }
  }

  int parse_factor() {
    int base = parse_base();
    skip_ws();
    if (pos_ < src_.size() && src_[pos_] == '^') {
      std::size_t at = pos_;
      ++pos_;
      int k = parse_integer_exponent();
      ExprNode n;
      n.kind = NodeKind::pow;
      n.lhs = base;
      n.index = k;
      n.offset = at;
      return add(n);
    }
    return base;
  }

  int parse_integer_exponent() {
    skip_ws();
    bool paren = false;
    if (pos_ < src_.size() && src_[pos_] == '(') {
      paren = true;
      ++pos_;
      skip_ws();
    }
    std::size_t start = pos_;
    bool negative = false;
    if (pos_ < src_.size() && (src_[pos_] == '-' || src_[pos_] == '+')) {
      negative = src_[pos_] == '-';
      ++pos_;
    }
    std::size_t digits = pos_;
    while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_])))
      ++pos_;
    bool fractional = pos_ < src_.size() && (src_[pos_] == '.' || src_[pos_] == 'e' ||
                                             src_[pos_] == 'E');
    if (digits == pos_ || fractional)
      fail("non-integer exponent", start);
    int value = 0;
    auto [ptr, ec] = std::from_chars(src_.data() + digits, src_.data() + pos_, value);
    if (ec != std::errc() || value > 64)
      fail("exponent out of range", start);
    (void)ptr;
    if (paren)
      expect(')');
    return negative ? -value : value;
  }

  int parse_number() {
    std::size_t start = pos_;
    std::size_t p = pos_;
    while (p < src_.size() && std::isdigit(static_cast<unsigned char>(src_[p])))
      ++p;
    if (p < src_.size() && src_[p] == '.') {
      ++p;
      while (p < src_.size() && std::isdigit(static_cast<unsigned char>(src_[p])))
        ++p;
    }
    if (p < src_.size() && (src_[p] == 'e' || src_[p] == 'E')) {
      std::size_t q = p + 1;
      if (q < src_.size() && (src_[q] == '+' || src_[q] == '-'))
        ++q;
      if (q < src_.size() && std::isdigit(static_cast<unsigned char>(src_[q]))) {
        while (q < src_.size() && std::isdigit(static_cast<unsigned char>(src_[q])))
          ++q;
        p = q;
      }
    }
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(src_.data() + start, src_.data() + p, v);
    if (ec != std::errc() || ptr != src_.data() + p)
      fail("malformed number", start);
    pos_ = p;
    ExprNode n;
    n.kind = NodeKind::constant;
    n.value = v;
    n.offset = start;
    return add(n);
  }

  int parse_base() {
    skip_ws();
    if (pos_ >= src_.size())
      fail("unexpected end of input", pos_);
    char c = src_[pos_];
    std::size_t at = pos_;
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.')
      return parse_number();
    if (c == '(') {
      ++pos_;
      int inner = parse_expr();
      expect(')');
      return inner;
    }
    if (c == '-') {
      ++pos_;
      int operand = parse_base();
      ExprNode n;
      n.kind = NodeKind::neg;
      n.lhs = operand;
      n.offset = at;
      return add(n);
    }
    if (is_ident_start(c)) {
      std::size_t end = pos_;
      while (end < src_.size() && is_ident_char(src_[end]))
        ++end;
      std::string_view name = src_.substr(pos_, end - pos_);
      pos_ = end;
      for (const auto &f : kFunctions) {
        if (name == f.name) {
          if (!peek('('))
            fail("arity mismatch: function '" + std::string(name) + "' needs an argument", at);
          ++pos_;
          int arg = parse_expr();
          expect(')');
          ExprNode n;
          n.kind = f.kind;
          n.lhs = arg;
          n.offset = at;
          return add(n);
        }
      }
      auto it = std::find(coords_.begin(), coords_.end(), name);
      if (it == coords_.end()) {
        if (peek('('))
          fail("unknown function " + std::string(name), at);
        fail("unknown identifier " + std::string(name), at);
      }
      ExprNode n;
      n.kind = NodeKind::variable;
      n.index = static_cast<int>(it - coords_.begin());
      n.offset = at;
      return add(n);
    }
    fail(std::string("unexpected character '") + c + "'", at);
  }

  std::string_view src_;
  std::span<const std::string> coords_;
  std::size_t pos_ = 0;
  std::vector<ExprNode> nodes_;
};

int precedence(NodeKind k) {
  switch (k) {
  case NodeKind::add:
  case NodeKind::sub:
    return 1;
  case NodeKind::mul:
  case NodeKind::div:
    return 2;
  case NodeKind::pow:
    return 3;
  default:
    return 4; // atoms, calls, negation
  }
}

void print(const Expr &e, int i, std::string &out) {
  const ExprNode &n = e.node(i);
  auto atom = [&](int child) {
    // Operand of '-' or '^' must itself be a base.
    if (precedence(e.node(child).kind) < 4) {
      out += '(';
      print(e, child, out);
      out += ')';
    } else {
      print(e, child, out);
    }
  };
  switch (n.kind) {
  case NodeKind::constant:
    out += format_number(n.value);
    return;
  case NodeKind::variable:
    out += e.coordinates()[static_cast<std::size_t>(n.index)];
    return;
  case NodeKind::neg:
    out += '-';
    atom(n.lhs);
    return;
  case NodeKind::pow:
    atom(n.lhs);
    out += '^';
    if (n.index < 0)
      out += "(" + std::to_string(n.index) + ")";
    else
      out += std::to_string(n.index);
    return;
  case NodeKind::add:
  case NodeKind::sub:
  case NodeKind::mul:
  case NodeKind::div: {
    int p = precedence(n.kind);
    bool lp = precedence(e.node(n.lhs).kind) < p;
    bool rp = precedence(e.node(n.rhs).kind) <= p;
    if (lp)
      out += '(';
    print(e, n.lhs, out);
    if (lp)
      out += ')';
    switch (n.kind) {
    case NodeKind::add: out += " + "; break;
    case NodeKind::sub: out += " - "; break;
    case NodeKind::mul: out += '*'; break;
    default: out += '/'; break;
    }
    if (rp)
      out += '(';
    print(e, n.rhs, out);
    if (rp)
      out += ')';
    return;
  }
  default:
    out += function_name(n.kind);
    out += '(';
    print(e, n.lhs, out);
    out += ')';
    return;
  }
}

bool equal_rec(const Expr &a, int i, const Expr &b, int j) {
  const ExprNode &x = a.node(i);
  const ExprNode &y = b.node(j);
  if (x.kind != y.kind)
    return false;
  switch (x.kind) {
  case NodeKind::constant:
    return std::memcmp(&x.value, &y.value, sizeof(double)) == 0;
  case NodeKind::variable:
    return x.index == y.index;
  case NodeKind::pow:
    return x.index == y.index && equal_rec(a, x.lhs, b, y.lhs);
  case NodeKind::add:
  case NodeKind::sub:
  case NodeKind::mul:
  case NodeKind::div:
    return equal_rec(a, x.lhs, b, y.lhs) && equal_rec(a, x.rhs, b, y.rhs);
  default:
    return equal_rec(a, x.lhs, b, y.lhs);
  }
}

} // namespace

Expr::Expr(std::vector<ExprNode> nodes, int root, std::vector<std::string> coords)
    : nodes_(std::make_shared<const std::vector<ExprNode>>(std::move(nodes))),
      coords_(std::make_shared<const std::vector<std::string>>(std::move(coords))),
      root_(root) {}

bool Expr::is_constant(double c) const {
  return nodes_ && node(root_).kind == NodeKind::constant && node(root_).value == c;
}

bool Expr::is_constant_expression() const {
  if (!nodes_)
    return true;
  return std::none_of(nodes_->begin(), nodes_->end(),
                      [](const ExprNode &n) { return n.kind == NodeKind::variable; });
}

Expr parse_expr(std::string_view source, std::span<const std::string> coords) {
  return Parser(source, coords).run();
}

std::string to_string(const Expr &e) {
  std::string out;
  if (!e.empty())
    print(e, e.root(), out);
  return out;
}

bool structurally_equal(const Expr &a, const Expr &b) {
  if (a.empty() || b.empty())
    return a.empty() == b.empty();
  return equal_rec(a, a.root(), b, b.root());
}

std::string format_number(double v) {
  std::array<char, 64> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  (void)ec;
  return std::string(buf.data(), ptr);
}

bool is_reserved_name(std::string_view name) {
  return std::any_of(kFunctions.begin(), kFunctions.end(),
                     [&](const FunctionName &f) { return name == f.name; });
}

} // namespace lcw
