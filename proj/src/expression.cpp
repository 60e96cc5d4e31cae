#include "sgbc/expression.hpp"

#include <cctype>
#include <cmath>
#include <numbers>
#include <vector>

namespace sgbc {

struct Expression::Node {
  enum class Kind { constant, coordinate, unary, binary, call } kind = Kind::constant;
  double value = 0.0;
  int coordinate = 0;
  char op = 0;
  double (*fn)(double) = nullptr;
  std::shared_ptr<const Node> lhs, rhs;

  double eval(const Point& x) const {
    switch (kind) {
      case Kind::constant:
        return value;
      case Kind::coordinate:
        return x[static_cast<std::size_t>(coordinate)];
      case Kind::unary:
        return -lhs->eval(x);
      case Kind::call:
        return fn(lhs->eval(x));
      case Kind::binary: {
        const double a = lhs->eval(x);
        const double b = rhs->eval(x);
        switch (op) {
          case '+':
            return a + b;
          case '-':
            return a - b;
          case '*':
            return a * b;
          case '/':
            return a / b;
          default:
            return std::pow(a, b);
        }
      }
    }
    return 0.0;
  }
};

namespace {

using NodePtr = std::shared_ptr<const Expression::Node>;
using Node = Expression::Node;

struct FunctionEntry {
  const char* name;
  double (*fn)(double);
};

double fn_sin(double v) { return std::sin(v); }
double fn_cos(double v) { return std::cos(v); }
double fn_tan(double v) { return std::tan(v); }
double fn_exp(double v) { return std::exp(v); }
double fn_log(double v) { return std::log(v); }
double fn_sqrt(double v) { return std::sqrt(v); }
double fn_abs(double v) { return std::abs(v); }

constexpr FunctionEntry kFunctions[] = {{"sin", fn_sin},   {"cos", fn_cos},   {"tan", fn_tan}, {"exp", fn_exp},
                                        {"log", fn_log},   {"sqrt", fn_sqrt}, {"abs", fn_abs}};

class Parser {
 public:
  explicit Parser(const std::string& text) : s_(text) {}

  NodePtr parse() {
    NodePtr n = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected character");
    return n;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw ConfigError("expression '" + s_ + "': " + what + " at position " + std::to_string(pos_));
  }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  static NodePtr binary(char op, NodePtr a, NodePtr b) {
    auto n = std::make_shared<Node>();
    n->kind = Node::Kind::binary;
    n->op = op;
    n->lhs = std::move(a);
    n->rhs = std::move(b);
    return n;
  }

  NodePtr expr() {
    NodePtr n = term();
    for (;;) {
      if (accept('+'))
        n = binary('+', n, term());
      else if (accept('-'))
        n = binary('-', n, term());
      else
        return n;
    }
  }

  NodePtr term() {
    NodePtr n = unary();
    for (;;) {
      if (accept('*'))
        n = binary('*', n, unary());
      else if (accept('/'))
        n = binary('/', n, unary());
      else
        return n;
    }
  }

  NodePtr unary() {
    if (accept('+')) return unary();
    if (accept('-')) {
      auto n = std::make_shared<Node>();
      n->kind = Node::Kind::unary;
      n->lhs = unary();
      return n;
    }
    return power();
  }

  NodePtr power() {
    NodePtr base = atom();
    if (accept('^')) return binary('^', base, unary());
    return base;
  }

  NodePtr atom() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of input");
    if (accept('(')) {
      NodePtr n = expr();
      if (!accept(')')) fail("missing ')'");
      return n;
    }
    const char c = s_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c))) return name();
    fail("unexpected character");
  }

  NodePtr number() {
    const char* begin = s_.c_str() + pos_;
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end == begin) fail("malformed number");
    pos_ += static_cast<std::size_t>(end - begin);
    auto n = std::make_shared<Node>();
    n->value = v;
    return n;
  }

  NodePtr name() {
    const std::size_t start = pos_;
    while (pos_ < s_.size() && std::isalnum(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    const std::string id = s_.substr(start, pos_ - start);
    auto n = std::make_shared<Node>();
    if (id == "x" || id == "x1") {
      n->kind = Node::Kind::coordinate;
      n->coordinate = 0;
      return n;
    }
    if (id == "x2") {
      n->kind = Node::Kind::coordinate;
      n->coordinate = 1;
      return n;
    }
    if (id == "pi") {
      n->value = std::numbers::pi;
      return n;
    }
    if (id == "e") {
      n->value = std::numbers::e;
      return n;
    }
    for (const auto& f : kFunctions) {
      if (id == f.name) {
        if (!accept('(')) fail("expected '(' after " + id);
        n->kind = Node::Kind::call;
        n->fn = f.fn;
        n->lhs = expr();
        if (!accept(')')) fail("missing ')'");
        return n;
      }
    }
    pos_ = start;
    fail("unknown name '" + id + "'");
  }

  std::string s_;
  std::size_t pos_ = 0;
};

}  // namespace

Expression::Expression(const std::string& text) : text_(text), root_(Parser(text).parse()) {}

double Expression::operator()(const Point& x) const { return root_->eval(x); }

ScalarField Expression::function() const {
  return [root = root_](const Point& x) { return root->eval(x); };
}

}  // namespace sgbc
