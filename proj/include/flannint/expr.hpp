#pragma once

// Integrand expressions f(x).
//
// Grammar (lowest to highest precedence):
//
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := '-' unary | power
//   power   := primary ('^' unary)?          right-associative
//   primary := number | 'x' | 'pi' | 'e' | func '(' expr ')' | '(' expr ')'
//   func    := sqrt | exp | log | sin | cos | tan | abs
//
// `log` is the natural logarithm. There is no implicit multiplication, so
// "2x" is a syntax error. Numbers accept a decimal point and an exponent
// ("1.5e-3").

#include <functional>
#include <memory>
#include <string>
#include <string_view>

namespace flannint {

namespace detail {
struct Node;
}

/// An immutable real function of one variable. Either a parsed expression
/// tree or a registered native callable. Copies share the same tree.
class Integrand {
 public:
  using NativeFn = std::function<double(double)>;

  /// Parses `source`. Throws ParseError or UnknownIdentifierError.
  static Integrand parse(std::string_view source);

  /// Wraps a native function. `name` is used in error messages. The callable
  /// must be safe to invoke concurrently if the Integrand is shared.
  static Integrand native(std::string name, NativeFn fn);

  /// f(x). Throws DomainError when the evaluation leaves the reals.
  double operator()(double x) const;

  const std::string& source() const noexcept { return source_; }

  /// True for parsed expressions that never reference `x`.
  bool is_constant() const noexcept;

  /// True when this wraps a bare `x` (used by tests of the identity case).
  bool is_variable() const noexcept;

 private:
  Integrand(std::string source, std::shared_ptr<const detail::Node> root, NativeFn native);

  std::string source_;
  std::shared_ptr<const detail::Node> root_;
  NativeFn native_;
};

inline Integrand parse(std::string_view source) { return Integrand::parse(source); }

inline double evaluate(const Integrand& f, double x) { return f(x); }

}  // namespace flannint
