#include "cryostef/harness/expression.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <numbers>
#include <vector>

#include "cryostef/errors.hpp"

namespace cryostef::harness {

struct Expression::Node {
  enum class Kind { Number, Variable, Unary, Binary, Call } kind = Kind::Number;
  double value = 0.0;
  std::string name;  // variable / function name, or operator spelling
  std::vector<std::unique_ptr<Node>> args;
};

namespace {

using Node = Expression::Node;
using NodePtr = std::unique_ptr<Node>;

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  NodePtr parse() {
    auto node = comparison();
    skip_space();
    if (pos_ != text_.size()) fail("unexpected trailing input");
    return node;
  }

 private:
  [[noreturn]] void fail(const std::string& why) const {
    throw ConfigError("expression '" + std::string(text_) + "': " + why + " at offset " +
                      std::to_string(pos_));
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(std::string_view token) {
    skip_space();
    if (text_.substr(pos_, token.size()) == token) {
      pos_ += token.size();
      return true;
    }
    return false;
  }

  static NodePtr binary(std::string op, NodePtr lhs, NodePtr rhs) {
    auto n = std::make_unique<Node>();
    n->kind = Node::Kind::Binary;
    n->name = std::move(op);
    n->args.push_back(std::move(lhs));
    n->args.push_back(std::move(rhs));
    return n;
  }

  NodePtr comparison() {
    auto lhs = additive();
    for (std::string_view op : {"<=", ">=", "==", "<", ">"}) {
      if (accept(op)) return binary(std::string(op), std::move(lhs), additive());
    }
    return lhs;
  }

  NodePtr additive() {
    auto lhs = term();
    while (true) {
      if (accept("+")) {
        lhs = binary("+", std::move(lhs), term());
      } else if (accept("-")) {
        lhs = binary("-", std::move(lhs), term());
      } else {
        return lhs;
      }
    }
  }

  NodePtr term() {
    auto lhs = unary();
    while (true) {
      if (accept("*")) {
        lhs = binary("*", std::move(lhs), unary());
      } else if (accept("/")) {
        lhs = binary("/", std::move(lhs), unary());
      } else {
        return lhs;
      }
    }
  }

  NodePtr unary() {
    if (accept("-")) {
      auto n = std::make_unique<Node>();
      n->kind = Node::Kind::Unary;
      n->name = "-";
      n->args.push_back(unary());
      return n;
    }
    if (accept("+")) return unary();
    return power();
  }

  NodePtr power() {
    auto base = primary();
    if (accept("^")) return binary("^", std::move(base), unary());
    return base;
  }

  NodePtr primary() {
    skip_space();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    if (accept("(")) {
      auto inner = comparison();
      if (!accept(")")) fail("expected ')'");
      return inner;
    }
    const char c = text_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return name();
    fail(std::string("unexpected character '") + c + "'");
  }

  NodePtr number() {
    double v = 0.0;
    const char* begin = text_.data() + pos_;
    const auto [end, ec] = std::from_chars(begin, text_.data() + text_.size(), v);
    if (ec != std::errc()) fail("malformed number");
    pos_ += static_cast<std::size_t>(end - begin);
    auto n = std::make_unique<Node>();
    n->value = v;
    return n;
  }

  NodePtr name() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
      ++pos_;
    }
    auto n = std::make_unique<Node>();
    n->name = std::string(text_.substr(start, pos_ - start));
    if (accept("(")) {
      n->kind = Node::Kind::Call;
      if (!accept(")")) {
        do {
          n->args.push_back(comparison());
        } while (accept(","));
        if (!accept(")")) fail("expected ')' after arguments");
      }
    } else {
      n->kind = Node::Kind::Variable;
    }
    return n;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

void require_arity(const Node& n, std::size_t arity) {
  if (n.args.size() != arity) {
    throw ConfigError("function '" + n.name + "' expects " + std::to_string(arity) +
                      " argument(s)");
  }
}

double eval(const Node& n, const Scope& scope) {
  switch (n.kind) {
    case Node::Kind::Number:
      return n.value;
    case Node::Kind::Variable: {
      if (const auto it = scope.variables.find(n.name); it != scope.variables.end()) {
        return it->second;
      }
      if (n.name == "pi") return std::numbers::pi;
      if (n.name == "e") return std::numbers::e;
      throw ConfigError("unknown variable '" + n.name + "'");
    }
    case Node::Kind::Unary:
      return -eval(*n.args[0], scope);
    case Node::Kind::Binary: {
      const double a = eval(*n.args[0], scope);
      const double b = eval(*n.args[1], scope);
      const std::string& op = n.name;
      if (op == "+") return a + b;
      if (op == "-") return a - b;
      if (op == "*") return a * b;
      if (op == "/") return a / b;
      if (op == "^") return std::pow(a, b);
      if (op == "<") return a < b ? 1.0 : 0.0;
      if (op == "<=") return a <= b ? 1.0 : 0.0;
      if (op == ">") return a > b ? 1.0 : 0.0;
      if (op == ">=") return a >= b ? 1.0 : 0.0;
      return a == b ? 1.0 : 0.0;
    }
    case Node::Kind::Call:
      break;
  }

  if (n.name == "if") {
    require_arity(n, 3);
    return eval(*n.args[0], scope) != 0.0 ? eval(*n.args[1], scope) : eval(*n.args[2], scope);
  }
  if (n.name == "min" || n.name == "max") {
    require_arity(n, 2);
    const double a = eval(*n.args[0], scope);
    const double b = eval(*n.args[1], scope);
    return n.name == "min" ? std::min(a, b) : std::max(a, b);
  }
  require_arity(n, 1);
  const double x = eval(*n.args[0], scope);
  if (const auto it = scope.functions.find(n.name); it != scope.functions.end()) {
    return it->second(x);
  }
  if (n.name == "sin") return std::sin(x);
  if (n.name == "cos") return std::cos(x);
  if (n.name == "tan") return std::tan(x);
  if (n.name == "exp") return std::exp(x);
  if (n.name == "log") return std::log(x);
  if (n.name == "sqrt") return std::sqrt(x);
  if (n.name == "abs") return std::abs(x);
  if (n.name == "floor") return std::floor(x);
  throw ConfigError("unknown function '" + n.name + "'");
}

bool mentions(const Node& n, std::string_view name) {
  if (n.kind == Node::Kind::Variable && n.name == name) return true;
  for (const auto& a : n.args) {
    if (mentions(*a, name)) return true;
  }
  return false;
}

}  // namespace

Expression Expression::parse(std::string_view text) {
  Expression e;
  e.root_ = Parser(text).parse();
  e.text_ = std::string(text);
  return e;
}

Expression Expression::constant(double value) {
  auto n = std::make_shared<Node>();
  n->value = value;
  Expression e;
  e.root_ = std::move(n);
  e.text_ = std::to_string(value);
  return e;
}

double Expression::evaluate(const Scope& scope) const { return eval(*root_, scope); }

bool Expression::uses(std::string_view name) const { return mentions(*root_, name); }

}  // namespace cryostef::harness
