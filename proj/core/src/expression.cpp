#include "dispersive/expression.hpp"

#include <cctype>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace dispersive {

struct Expression::Node {
  enum class Kind { kConstant, kVariable, kNegate, kAdd, kSub, kMul, kDiv, kPow, kCall };
  enum class Function { kSqrt, kExp, kLog, kSin, kCos, kTan, kAbs, kPow };

  Kind kind = Kind::kConstant;
  double value = 0.0;
  Function function = Function::kSqrt;
  std::vector<std::shared_ptr<const Node>> children;

  double eval(double r) const {
    switch (kind) {
      case Kind::kConstant: return value;
      case Kind::kVariable: return r;
      case Kind::kNegate: return -children[0]->eval(r);
      case Kind::kAdd: return children[0]->eval(r) + children[1]->eval(r);
      case Kind::kSub: return children[0]->eval(r) - children[1]->eval(r);
      case Kind::kMul: return children[0]->eval(r) * children[1]->eval(r);
      case Kind::kDiv: return children[0]->eval(r) / children[1]->eval(r);
      case Kind::kPow: return std::pow(children[0]->eval(r), children[1]->eval(r));
      case Kind::kCall: {
        const double a = children[0]->eval(r);
        switch (function) {
          case Function::kSqrt: return std::sqrt(a);
          case Function::kExp: return std::exp(a);
          case Function::kLog: return std::log(a);
          case Function::kSin: return std::sin(a);
          case Function::kCos: return std::cos(a);
          case Function::kTan: return std::tan(a);
          case Function::kAbs: return std::abs(a);
          case Function::kPow: return std::pow(a, children[1]->eval(r));
        }
      }
    }
    return std::nan("");
  }
};

namespace {

using NodePtr = std::shared_ptr<const Expression::Node>;
using Node = Expression::Node;

class Parser {
 public:
  explicit Parser(std::string_view src) : src_(src) {}

  NodePtr parse_all() {
    NodePtr node = parse_sum();
    skip_space();
    if (pos_ != src_.size()) fail("unexpected character");
    return node;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw std::invalid_argument("expression error at offset " + std::to_string(pos_) + ": " + what +
                                " in '" + std::string(src_) + "'");
  }

  void skip_space() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }

  bool consume(char c) {
    skip_space();
    if (pos_ < src_.size() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  static NodePtr binary(Node::Kind kind, NodePtr lhs, NodePtr rhs) {
    auto node = std::make_shared<Node>();
    node->kind = kind;
    node->children = {std::move(lhs), std::move(rhs)};
    return node;
  }

  NodePtr parse_sum() {
    NodePtr lhs = parse_product();
    for (;;) {
      if (consume('+')) {
        lhs = binary(Node::Kind::kAdd, lhs, parse_product());
      } else if (consume('-')) {
        lhs = binary(Node::Kind::kSub, lhs, parse_product());
      } else {
        return lhs;
      }
    }
  }

  NodePtr parse_product() {
    NodePtr lhs = parse_unary();
    for (;;) {
      if (consume('*')) {
        lhs = binary(Node::Kind::kMul, lhs, parse_unary());
      } else if (consume('/')) {
        lhs = binary(Node::Kind::kDiv, lhs, parse_unary());
      } else {
        return lhs;
      }
    }
  }

  NodePtr parse_unary() {
    if (consume('-')) {
      auto node = std::make_shared<Node>();
      node->kind = Node::Kind::kNegate;
      node->children = {parse_unary()};
      return node;
    }
    if (consume('+')) return parse_unary();
    return parse_power();
  }

  // '^' binds tighter than unary minus on its left: -r^2 == -(r^2).
  NodePtr parse_power() {
    NodePtr base = parse_primary();
    if (consume('^')) return binary(Node::Kind::kPow, base, parse_unary());
    return base;
  }

  NodePtr parse_primary() {
    skip_space();
    if (pos_ >= src_.size()) fail("unexpected end of input");
    const char c = src_[pos_];
    if (c == '(') {
      ++pos_;
      NodePtr inner = parse_sum();
      if (!consume(')')) fail("expected ')'");
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c))) return parse_identifier();
    fail(std::string("unexpected character '") + c + "'");
  }

  NodePtr parse_number() {
    const std::string rest(src_.substr(pos_));
    std::size_t used = 0;
    double value = 0.0;
    try {
      value = std::stod(rest, &used);
    } catch (const std::exception&) {
      fail("malformed number");
    }
    pos_ += used;
    auto node = std::make_shared<Node>();
    node->kind = Node::Kind::kConstant;
    node->value = value;
    return node;
  }

  NodePtr parse_identifier() {
    const std::size_t start = pos_;
    while (pos_ < src_.size() &&
           (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) {
      ++pos_;
    }
    const std::string_view name = src_.substr(start, pos_ - start);
    auto node = std::make_shared<Node>();
    if (name == "r") {
      node->kind = Node::Kind::kVariable;
      return node;
    }
    if (name == "pi") {
      node->value = std::numbers::pi;
      return node;
    }
    if (name == "e") {
      node->value = std::numbers::e;
      return node;
    }

    static constexpr std::pair<std::string_view, Node::Function> kFunctions[] = {
        {"sqrt", Node::Function::kSqrt}, {"exp", Node::Function::kExp},
        {"log", Node::Function::kLog},   {"sin", Node::Function::kSin},
        {"cos", Node::Function::kCos},   {"tan", Node::Function::kTan},
        {"abs", Node::Function::kAbs},   {"pow", Node::Function::kPow},
    };
    for (const auto& [fname, fn] : kFunctions) {
      if (name != fname) continue;
      node->kind = Node::Kind::kCall;
      node->function = fn;
      if (!consume('(')) fail("expected '(' after " + std::string(name));
      node->children.push_back(parse_sum());
      if (fn == Node::Function::kPow) {
        if (!consume(',')) fail("pow takes two arguments");
        node->children.push_back(parse_sum());
      }
      if (!consume(')')) fail("expected ')'");
      return node;
    }
    pos_ = start;
    fail("unknown identifier '" + std::string(name) + "'");
  }

  std::string_view src_;
  std::size_t pos_ = 0;
};

}  // namespace

Expression Expression::parse(std::string_view source) {
  Parser parser(source);
  NodePtr root = parser.parse_all();
  return Expression(std::string(source), std::move(root));
}

double Expression::operator()(double r) const { return root_->eval(r); }

}  // namespace dispersive
