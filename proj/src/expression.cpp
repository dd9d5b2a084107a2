#include "mmt/expression.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <utility>

#include "mmt/error.hpp"

namespace mmt {

struct Expression::Node {
  enum class Kind { Constant, Variable, Negate, Add, Sub, Mul, Div, Pow, Call };
  Kind kind = Kind::Constant;
  double value = 0.0;
  std::size_t index = 0;
  double (*fn)(double) = nullptr;
  std::shared_ptr<const Node> lhs;
  std::shared_ptr<const Node> rhs;
};

namespace {

using Node = Expression::Node;
using NodePtr = std::shared_ptr<const Node>;

struct Function {
  const char* name;
  double (*fn)(double);
};

double fn_sin(double x) { return std::sin(x); }
double fn_cos(double x) { return std::cos(x); }
double fn_tan(double x) { return std::tan(x); }
double fn_exp(double x) { return std::exp(x); }
double fn_log(double x) { return std::log(x); }
double fn_sqrt(double x) { return std::sqrt(x); }
double fn_sinh(double x) { return std::sinh(x); }
double fn_cosh(double x) { return std::cosh(x); }
double fn_tanh(double x) { return std::tanh(x); }
double fn_abs(double x) { return std::abs(x); }

constexpr Function kFunctions[] = {
    {"sin", fn_sin},   {"cos", fn_cos},   {"tan", fn_tan},   {"exp", fn_exp},
    {"log", fn_log},   {"sqrt", fn_sqrt}, {"sinh", fn_sinh}, {"cosh", fn_cosh},
    {"tanh", fn_tanh}, {"abs", fn_abs},
};

NodePtr make(Node::Kind kind, NodePtr lhs, NodePtr rhs = nullptr) {
  auto n = std::make_shared<Node>();
  n->kind = kind;
  n->lhs = std::move(lhs);
  n->rhs = std::move(rhs);
  return n;
}

class Parser {
 public:
  Parser(const std::string& text, const std::vector<std::string>& vars)
      : text_(text), vars_(vars) {}

  NodePtr parse() {
    NodePtr n = expr();
    skip_space();
    if (pos_ != text_.size()) fail("unexpected character");
    return n;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw InvalidArgument("expression '" + text_ + "': " + msg + " at position " +
                          std::to_string(pos_));
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  NodePtr expr() {
    NodePtr n = term();
    for (;;) {
      if (accept('+')) {
        n = make(Node::Kind::Add, n, term());
      } else if (accept('-')) {
        n = make(Node::Kind::Sub, n, term());
      } else {
        return n;
      }
    }
  }

  NodePtr term() {
    NodePtr n = unary();
    for (;;) {
      if (accept('*')) {
        n = make(Node::Kind::Mul, n, unary());
      } else if (accept('/')) {
        n = make(Node::Kind::Div, n, unary());
      } else {
        return n;
      }
    }
  }

  NodePtr unary() {
    if (accept('-')) return make(Node::Kind::Negate, unary());
    if (accept('+')) return unary();
    return power();
  }

  NodePtr power() {
    NodePtr base = primary();
    if (accept('^')) return make(Node::Kind::Pow, base, unary());
    return base;
  }

  NodePtr primary() {
    skip_space();
    if (pos_ >= text_.size()) fail("unexpected end");
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      NodePtr n = expr();
      if (!accept(')')) fail("expected ')'");
      return n;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      const char* begin = text_.c_str() + pos_;
      char* end = nullptr;
      const double v = std::strtod(begin, &end);
      if (end == begin) fail("bad number");
      pos_ += static_cast<std::size_t>(end - begin);
      auto n = std::make_shared<Node>();
      n->value = v;
      return n;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      const std::size_t start = pos_;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
        ++pos_;
      const std::string name = text_.substr(start, pos_ - start);
      for (std::size_t i = 0; i < vars_.size(); ++i) {
        if (vars_[i] == name) {
          auto n = std::make_shared<Node>();
          n->kind = Node::Kind::Variable;
          n->index = i;
          return n;
        }
      }
      for (const auto& f : kFunctions) {
        if (name == f.name) {
          if (!accept('(')) fail("expected '(' after " + name);
          auto n = std::make_shared<Node>();
          n->kind = Node::Kind::Call;
          n->fn = f.fn;
          n->lhs = expr();
          if (!accept(')')) fail("expected ')'");
          return n;
        }
      }
      auto n = std::make_shared<Node>();
      if (name == "pi") {
        n->value = std::numbers::pi;
      } else if (name == "e") {
        n->value = std::numbers::e;
      } else {
        pos_ = start;
        fail("unknown identifier '" + name + "'");
      }
      return n;
    }
    fail(std::string("unexpected character '") + c + "'");
  }

  const std::string& text_;
  const std::vector<std::string>& vars_;
  std::size_t pos_ = 0;
};

double eval(const Node& n, std::span<const double> values) {
  switch (n.kind) {
    case Node::Kind::Constant:
      return n.value;
    case Node::Kind::Variable:
      return values[n.index];
    case Node::Kind::Negate:
      return -eval(*n.lhs, values);
    case Node::Kind::Add:
      return eval(*n.lhs, values) + eval(*n.rhs, values);
    case Node::Kind::Sub:
      return eval(*n.lhs, values) - eval(*n.rhs, values);
    case Node::Kind::Mul:
      return eval(*n.lhs, values) * eval(*n.rhs, values);
    case Node::Kind::Div:
      return eval(*n.lhs, values) / eval(*n.rhs, values);
    case Node::Kind::Pow: {
      const double b = eval(*n.lhs, values);
      const double p = eval(*n.rhs, values);
      if (p == 2.0) return b * b;
      return std::pow(b, p);
    }
    case Node::Kind::Call:
      return n.fn(eval(*n.lhs, values));
  }
  return 0.0;
}

}  // namespace

Expression::Expression(const std::string& text, const std::vector<std::string>& variables)
    : text_(text), variable_count_(variables.size()) {
  root_ = Parser(text_, variables).parse();
}

double Expression::operator()(std::span<const double> values) const {
  if (values.size() != variable_count_) {
    throw DimensionMismatch("expression '" + text_ + "': expected " +
                            std::to_string(variable_count_) + " values, got " +
                            std::to_string(values.size()));
  }
  return eval(*root_, values);
}

}  // namespace mmt
