#pragma once

// Small arithmetic expression language used by run configurations, e.g.
//
//   forcing  = if(t < 1, 16, 4) * cos(pi * t) + if(t < 1, -15, 4 * t - 30)
//   chi_init = F(u) + 0.1
//
// Operators: + - * / ^ and comparisons (< <= > >= ==, yielding 1 or 0).
// Built-ins: sin cos tan exp log sqrt abs floor, min(a, b), max(a, b),
// if(cond, a, b), constants pi and e. Extra one-argument functions and
// variables come from the Scope.

#include <functional>
#include <map>
#include <memory>
#include <string>
#include <string_view>

namespace cryostef::harness {

struct Scope {
  std::map<std::string, double, std::less<>> variables;
  std::map<std::string, std::function<double(double)>, std::less<>> functions;
};

class Expression {
 public:
  /// Throws ConfigError on syntax errors.
  static Expression parse(std::string_view text);
  static Expression constant(double value);

  /// Throws ConfigError on unknown names or wrong arity.
  double evaluate(const Scope& scope) const;

  const std::string& text() const noexcept { return text_; }
  /// True when the expression mentions the variable `name`.
  bool uses(std::string_view name) const;

  struct Node;

 private:
  std::shared_ptr<const Node> root_;
  std::string text_;
};

}  // namespace cryostef::harness
