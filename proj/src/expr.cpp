#include "flannint/expr.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <optional>
#include <utility>

#include "flannint/errors.hpp"

namespace flannint {

std::string DomainError::format_x(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

namespace detail {

enum class NodeKind { Number, Variable, Negate, Binary, Call };
enum class Func { Sqrt, Exp, Log, Sin, Cos, Tan, Abs };

struct Node {
  NodeKind kind;
  double value = 0.0;  // Number
  char op = 0;         // Binary: + - * / ^
  Func func = Func::Sqrt;
  std::unique_ptr<const Node> lhs;  // operand for Negate and Call
  std::unique_ptr<const Node> rhs;
  std::size_t begin = 0;  // source span, for error messages
  std::size_t end = 0;
};

}  // namespace detail

namespace {

using detail::Func;
using detail::Node;
using detail::NodeKind;
using NodePtr = std::unique_ptr<Node>;

struct FuncName {
  std::string_view name;
  Func func;
};

constexpr std::array<FuncName, 7> kFunctions{{
    {"sqrt", Func::Sqrt},
    {"exp", Func::Exp},
    {"log", Func::Log},
    {"sin", Func::Sin},
    {"cos", Func::Cos},
    {"tan", Func::Tan},
    {"abs", Func::Abs},
}};

std::optional<Func> lookup_function(std::string_view name) {
  for (const auto& f : kFunctions) {
    if (f.name == name) return f.func;
  }
  return std::nullopt;
}

class Parser {
 public:
  explicit Parser(std::string_view src) : src_(src) {}

  NodePtr parse_all() {
    skip_ws();
    auto root = parse_expr();
    skip_ws();
    if (!at_end()) fail("operator or end of input");
    return root;
  }

 private:
  bool at_end() const { return pos_ >= src_.size(); }
  char peek() const { return at_end() ? '\0' : src_[pos_]; }

  void skip_ws() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }

  std::string describe_current() const {
    if (at_end()) return "end of input";
    return std::string("'") + src_[pos_] + "'";
  }

  [[noreturn]] void fail(const std::string& expected) const {
    throw ParseError(pos_, expected, describe_current());
  }

  static NodePtr make_binary(char op, NodePtr lhs, NodePtr rhs) {
    auto n = std::make_unique<Node>();
    n->kind = NodeKind::Binary;
    n->op = op;
    n->begin = lhs->begin;
    n->end = rhs->end;
    n->lhs = std::move(lhs);
    n->rhs = std::move(rhs);
    return n;
  }

  NodePtr parse_expr() {
    auto lhs = parse_term();
    for (;;) {
      skip_ws();
      const char c = peek();
      if (c != '+' && c != '-') return lhs;
      ++pos_;
      skip_ws();
      lhs = make_binary(c, std::move(lhs), parse_term());
    }
  }

  NodePtr parse_term() {
    auto lhs = parse_unary();
    for (;;) {
      skip_ws();
      const char c = peek();
      if (c != '*' && c != '/') return lhs;
      ++pos_;
      skip_ws();
      lhs = make_binary(c, std::move(lhs), parse_unary());
    }
  }

  NodePtr parse_unary() {
    skip_ws();
    if (peek() == '-') {
      const std::size_t begin = pos_++;
      auto operand = parse_unary();
      auto n = std::make_unique<Node>();
      n->kind = NodeKind::Negate;
      n->begin = begin;
      n->end = operand->end;
      n->lhs = std::move(operand);
      return n;
    }
    return parse_power();
  }

  NodePtr parse_power() {
    auto base = parse_primary();
    skip_ws();
    if (peek() != '^') return base;
    ++pos_;
    return make_binary('^', std::move(base), parse_unary());
  }

  NodePtr parse_primary() {
    skip_ws();
    const char c = peek();
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_identifier();
    if (c == '(') {
      const std::size_t begin = pos_++;
      auto inner = parse_expr();
      skip_ws();
      if (peek() != ')') fail("')'");
      ++pos_;
      inner->begin = begin;
      inner->end = pos_;
      return inner;
    }
    fail("number, 'x', constant, function call or '('");
  }

  NodePtr parse_number() {
    const std::size_t begin = pos_;
    std::size_t p = pos_;
    auto digits = [&] {
      const std::size_t start = p;
      while (p < src_.size() && std::isdigit(static_cast<unsigned char>(src_[p]))) ++p;
      return p - start;
    };
    std::size_t n_digits = digits();
    if (p < src_.size() && src_[p] == '.') {
      ++p;
      n_digits += digits();
    }
    if (n_digits == 0) fail("number");
    // Exponent only when a digit follows; otherwise 'e' is left for the lexer
    // and "2e" becomes an implicit-multiplication syntax error.
    if (p < src_.size() && (src_[p] == 'e' || src_[p] == 'E')) {
      std::size_t q = p + 1;
      if (q < src_.size() && (src_[q] == '+' || src_[q] == '-')) ++q;
      if (q < src_.size() && std::isdigit(static_cast<unsigned char>(src_[q]))) {
        p = q;
        digits();
      }
    }
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(src_.data() + begin, src_.data() + p, value);
    if (ec != std::errc() || ptr != src_.data() + p || !std::isfinite(value)) fail("finite number");
    pos_ = p;
    auto n = std::make_unique<Node>();
    n->kind = NodeKind::Number;
    n->value = value;
    n->begin = begin;
    n->end = p;
    return n;
  }

  NodePtr parse_identifier() {
    const std::size_t begin = pos_;
    while (!at_end() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_')) ++pos_;
    const std::string_view name = src_.substr(begin, pos_ - begin);

    auto leaf = [&](NodeKind kind, double value) {
      auto n = std::make_unique<Node>();
      n->kind = kind;
      n->value = value;
      n->begin = begin;
      n->end = pos_;
      return n;
    };
    if (name == "x") return leaf(NodeKind::Variable, 0.0);
    if (name == "pi") return leaf(NodeKind::Number, std::numbers::pi);
    if (name == "e") return leaf(NodeKind::Number, std::numbers::e);

    const auto func = lookup_function(name);
    if (!func) throw UnknownIdentifierError(std::string(name), begin);
    skip_ws();
    if (peek() != '(') fail("'(' after function name");
    ++pos_;
    auto arg = parse_expr();
    skip_ws();
    if (peek() != ')') fail("')'");
    ++pos_;
    auto n = std::make_unique<Node>();
    n->kind = NodeKind::Call;
    n->func = *func;
    n->lhs = std::move(arg);
    n->begin = begin;
    n->end = pos_;
    return n;
  }

  std::string_view src_;
  std::size_t pos_ = 0;
};

class Evaluator {
 public:
  Evaluator(const std::string& source, double x) : source_(source), x_(x) {}

  double eval(const Node& n) const {
    switch (n.kind) {
      case NodeKind::Number:
        return n.value;
      case NodeKind::Variable:
        return x_;
      case NodeKind::Negate:
        return -eval(*n.lhs);
      case NodeKind::Binary:
        return binary(n);
      case NodeKind::Call:
        return call(n);
    }
    return 0.0;
  }

 private:
  [[noreturn]] void fail(const Node& n, const std::string& reason) const {
    throw DomainError(source_.substr(n.begin, n.end - n.begin), x_, reason);
  }

  double check(const Node& n, double v) const {
    if (!std::isfinite(v)) fail(n, "non-finite result");
    return v;
  }

  double binary(const Node& n) const {
    const double l = eval(*n.lhs);
    const double r = eval(*n.rhs);
    switch (n.op) {
      case '+':
        return check(n, l + r);
      case '-':
        return check(n, l - r);
      case '*':
        return check(n, l * r);
      case '/':
        if (r == 0.0) fail(n, "division by zero");
        return check(n, l / r);
      case '^':
        return check(n, std::pow(l, r));
    }
    return 0.0;
  }

  double call(const Node& n) const {
    const double a = eval(*n.lhs);
    switch (n.func) {
      case Func::Sqrt:
        if (a < 0.0) fail(n, "square root of a negative number");
        return std::sqrt(a);
      case Func::Exp:
        return check(n, std::exp(a));
      case Func::Log:
        if (a <= 0.0) fail(n, "logarithm of a non-positive number");
        return std::log(a);
      case Func::Sin:
        return std::sin(a);
      case Func::Cos:
        return std::cos(a);
      case Func::Tan:
        return check(n, std::tan(a));
      case Func::Abs:
        return std::abs(a);
    }
    return 0.0;
  }

  const std::string& source_;
  double x_;
};

bool references_x(const Node& n) {
  switch (n.kind) {
    case NodeKind::Variable:
      return true;
    case NodeKind::Number:
      return false;
    case NodeKind::Negate:
    case NodeKind::Call:
      return references_x(*n.lhs);
    case NodeKind::Binary:
      return references_x(*n.lhs) || references_x(*n.rhs);
  }
  return false;
}

}  // namespace

Integrand::Integrand(std::string source, std::shared_ptr<const detail::Node> root, NativeFn native)
    : source_(std::move(source)), root_(std::move(root)), native_(std::move(native)) {}

Integrand Integrand::parse(std::string_view source) {
  Parser parser(source);
  std::shared_ptr<const Node> root = parser.parse_all();
  return Integrand(std::string(source), std::move(root), nullptr);
}

Integrand Integrand::native(std::string name, NativeFn fn) {
  if (!fn) throw InvalidArgumentError("native integrand '" + name + "' has no callable");
  return Integrand(std::move(name), nullptr, std::move(fn));
}

double Integrand::operator()(double x) const {
  if (!std::isfinite(x)) throw DomainError(source_, x, "argument is not finite");
  if (native_) {
    const double v = native_(x);
    if (!std::isfinite(v)) throw DomainError(source_, x, "non-finite result");
    return v;
  }
  return Evaluator(source_, x).eval(*root_);
}

bool Integrand::is_constant() const noexcept { return root_ && !references_x(*root_); }

bool Integrand::is_variable() const noexcept {
  return root_ && root_->kind == NodeKind::Variable;
}

}  // namespace flannint
