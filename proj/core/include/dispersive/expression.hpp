#pragma once

#include <memory>
#include <string>
#include <string_view>

namespace dispersive {

/// A parsed scalar expression in one variable `r`.
///
/// Grammar: numbers, `r`, the constants `pi` and `e`, binary `+ - * / ^`
/// (`^` is right associative), unary minus, parentheses, and the functions
/// sqrt, exp, log, sin, cos, tan, abs, pow(a, b).
class Expression {
 public:
  /// Throws std::invalid_argument with the byte offset of the first error.
  static Expression parse(std::string_view source);

  double operator()(double r) const;

  const std::string& source() const { return source_; }

  struct Node;

 private:
  Expression(std::string source, std::shared_ptr<const Node> root)
      : source_(std::move(source)), root_(std::move(root)) {}

  std::string source_;
  std::shared_ptr<const Node> root_;
};

}  // namespace dispersive
