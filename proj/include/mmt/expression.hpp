#pragma once

// A small arithmetic expression language for user-supplied metric components
// and tau-dependent coefficient tables, e.g. "x1^2*sin(x2)^2" or "1+tau^2".
//
// Grammar: numbers, named variables, the constants pi and e, + - * / ^ (right
// associative), unary minus, parentheses, and the one-argument functions
// sin cos tan exp log sqrt sinh cosh tanh abs.

#include <memory>
#include <span>
#include <string>
#include <vector>

namespace mmt {

class Expression {
 public:
  /// Parses `text`; every identifier must appear in `variables` or be a
  /// known constant. Throws InvalidArgument with the offending position.
  Expression(const std::string& text, const std::vector<std::string>& variables);

  /// Evaluates with values bound positionally to the declared variables.
  double operator()(std::span<const double> values) const;

  const std::string& text() const noexcept { return text_; }

  struct Node;

 private:
  std::string text_;
  std::size_t variable_count_;
  std::shared_ptr<const Node> root_;
};

}  // namespace mmt
