#include "dpkit/expression.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <vector>

#include "dpkit/errors.hpp"

namespace dpkit {

struct Expression::Node {
  enum class Kind { number, variable, negate, add, sub, mul, div, pow, call } kind = Kind::number;
  double value = 0.0;
  int variable = 0;  // index into x, y, s, xi1, xi2
  double (*function)(double) = nullptr;
  std::shared_ptr<const Node> lhs;
  std::shared_ptr<const Node> rhs;
};

namespace {

using Node = Expression::Node;
using NodePtr = std::shared_ptr<const Node>;

const char* const kVariables[] = {"x", "y", "s", "xi1", "xi2"};

double fabs_fn(double v) { return std::abs(v); }
double sin_fn(double v) { return std::sin(v); }
double cos_fn(double v) { return std::cos(v); }
double exp_fn(double v) { return std::exp(v); }
double log_fn(double v) { return std::log(v); }

NodePtr make(Node::Kind kind, NodePtr lhs, NodePtr rhs = nullptr) {
  auto n = std::make_shared<Node>();
  n->kind = kind;
  n->lhs = std::move(lhs);
  n->rhs = std::move(rhs);
  return n;
}

class Parser {
 public:
  explicit Parser(const std::string& text) : text_(text) {}

  NodePtr parse() {
    NodePtr root = expression();
    skip();
    if (pos_ != text_.size()) error("unexpected character");
    return root;
  }

 private:
  [[noreturn]] void error(const std::string& what) const {
    throw InvalidInput("expression '" + text_ + "': " + what + " at position " + std::to_string(pos_));
  }

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

  // expression := term (('+' | '-') term)*
  NodePtr expression() {
    NodePtr lhs = term();
    for (;;) {
      if (accept('+'))
        lhs = make(Node::Kind::add, lhs, term());
      else if (accept('-'))
        lhs = make(Node::Kind::sub, lhs, term());
      else
        return lhs;
    }
  }

  // term := unary (('*' | '/') unary)*
  NodePtr term() {
    NodePtr lhs = unary();
    for (;;) {
      if (accept('*'))
        lhs = make(Node::Kind::mul, lhs, unary());
      else if (accept('/'))
        lhs = make(Node::Kind::div, lhs, unary());
      else
        return lhs;
    }
  }

  // unary := '-' unary | '+' unary | power
  NodePtr unary() {
    if (accept('-')) return make(Node::Kind::negate, unary());
    if (accept('+')) return unary();
    return power();
  }

  // power := primary ('^' unary)?
  NodePtr power() {
    NodePtr base = primary();
    if (accept('^')) return make(Node::Kind::pow, base, unary());
    return base;
  }

  NodePtr primary() {
    skip();
    if (pos_ >= text_.size()) error("unexpected end of input");
    const char c = text_[pos_];
    if (accept('(')) {
      NodePtr inner = expression();
      if (!accept(')')) error("expected ')'");
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c))) return identifier();
    error("unexpected character");
  }

  NodePtr number() {
    const char* begin = text_.c_str() + pos_;
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end == begin) error("malformed number");
    pos_ += static_cast<std::size_t>(end - begin);
    auto n = std::make_shared<Node>();
    n->value = v;
    return n;
  }

  NodePtr identifier() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() && std::isalnum(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    const std::string name = text_.substr(start, pos_ - start);
    for (int k = 0; k < 5; ++k) {
      if (name == kVariables[k]) {
        auto n = std::make_shared<Node>();
        n->kind = Node::Kind::variable;
        n->variable = k;
        return n;
      }
    }
    if (name == "pi") {
      auto n = std::make_shared<Node>();
      n->value = std::numbers::pi;
      return n;
    }
    double (*fn)(double) = nullptr;
    if (name == "sin") fn = sin_fn;
    else if (name == "cos") fn = cos_fn;
    else if (name == "exp") fn = exp_fn;
    else if (name == "abs") fn = fabs_fn;
    else if (name == "log") fn = log_fn;
    if (!fn) {
      pos_ = start;
      error("unknown identifier '" + name + "'");
    }
    if (!accept('(')) error("expected '(' after " + name);
    NodePtr arg = expression();
    if (!accept(')')) error("expected ')'");
    auto n = std::make_shared<Node>();
    n->kind = Node::Kind::call;
    n->function = fn;
    n->lhs = std::move(arg);
    return n;
  }

  const std::string& text_;
  std::size_t pos_ = 0;
};

double eval(const Node& n, const double* vars) {
  switch (n.kind) {
    case Node::Kind::number:
      return n.value;
    case Node::Kind::variable:
      return vars[n.variable];
    case Node::Kind::negate:
      return -eval(*n.lhs, vars);
    case Node::Kind::add:
      return eval(*n.lhs, vars) + eval(*n.rhs, vars);
    case Node::Kind::sub:
      return eval(*n.lhs, vars) - eval(*n.rhs, vars);
    case Node::Kind::mul:
      return eval(*n.lhs, vars) * eval(*n.rhs, vars);
    case Node::Kind::div:
      return eval(*n.lhs, vars) / eval(*n.rhs, vars);
    case Node::Kind::pow:
      return std::pow(eval(*n.lhs, vars), eval(*n.rhs, vars));
    case Node::Kind::call:
      return n.function(eval(*n.lhs, vars));
  }
  return 0.0;
}

bool references(const Node& n, int variable) {
  if (n.kind == Node::Kind::variable) return n.variable == variable;
  return (n.lhs && references(*n.lhs, variable)) || (n.rhs && references(*n.rhs, variable));
}

}  // namespace

Expression Expression::parse(const std::string& text) {
  Expression e;
  e.text_ = text;
  e.root_ = Parser(e.text_).parse();
  return e;
}

double Expression::operator()(const ExpressionVariables& v) const {
  const double vars[] = {v.x, v.y, v.s, v.xi1, v.xi2};
  return eval(*root_, vars);
}

bool Expression::uses(const std::string& identifier) const {
  for (int k = 0; k < 5; ++k)
    if (identifier == kVariables[k]) return references(*root_, k);
  return false;
}

}  // namespace dpkit
