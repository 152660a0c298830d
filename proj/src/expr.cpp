#include "abel/expr.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "abel/error.hpp"

namespace abel {

enum class NodeKind { Constant, Variable, Add, Sub, Mul, Div, Pow, Exp, Log, Sqrt, Abs };

struct Expr::Node {
  NodeKind kind;
  double value = 0.0;
  std::string name;  // for named constants; keeps pretty-printing faithful
  std::shared_ptr<const Node> lhs;
  std::shared_ptr<const Node> rhs;
};

using NodePtr = std::shared_ptr<const Expr::Node>;

namespace {

NodePtr make_leaf(NodeKind kind, double value = 0.0, std::string name = {}) {
  return std::make_shared<const Expr::Node>(Expr::Node{kind, value, std::move(name), nullptr, nullptr});
}

NodePtr make_node(NodeKind kind, NodePtr lhs, NodePtr rhs = nullptr) {
  return std::make_shared<const Expr::Node>(Expr::Node{kind, 0.0, {}, std::move(lhs), std::move(rhs)});
}

double checked(double v, const char* what) {
  if (!std::isfinite(v)) {
    throw Error(ErrorCode::Overflow, std::string("non-finite result in ") + what);
  }
  return v;
}

double eval_node(const Expr::Node& n, double x) {
  switch (n.kind) {
    case NodeKind::Constant:
      return n.value;
    case NodeKind::Variable:
      return x;
    case NodeKind::Add:
      return checked(eval_node(*n.lhs, x) + eval_node(*n.rhs, x), "+");
    case NodeKind::Sub:
      return checked(eval_node(*n.lhs, x) - eval_node(*n.rhs, x), "-");
    case NodeKind::Mul:
      return checked(eval_node(*n.lhs, x) * eval_node(*n.rhs, x), "*");
    case NodeKind::Div: {
      const double num = eval_node(*n.lhs, x);
      const double den = eval_node(*n.rhs, x);
      if (den == 0.0) throw Error(ErrorCode::DivisionByZero, "division by zero");
      return checked(num / den, "/");
    }
    case NodeKind::Pow: {
      const double base = eval_node(*n.lhs, x);
      const double expo = eval_node(*n.rhs, x);
      if (base < 0.0 && std::trunc(expo) != expo) {
        throw Error(ErrorCode::Domain, "negative base with non-integer exponent");
      }
      if (base == 0.0 && expo < 0.0) throw Error(ErrorCode::DivisionByZero, "zero raised to negative power");
      return checked(std::pow(base, expo), "^");
    }
    case NodeKind::Exp:
      return checked(std::exp(eval_node(*n.lhs, x)), "exp");
    case NodeKind::Log: {
      const double a = eval_node(*n.lhs, x);
      if (!(a > 0.0)) throw Error(ErrorCode::Domain, "log of non-positive argument");
      return std::log(a);
    }
    case NodeKind::Sqrt: {
      const double a = eval_node(*n.lhs, x);
      if (a < 0.0) throw Error(ErrorCode::Domain, "sqrt of negative argument");
      return std::sqrt(a);
    }
    case NodeKind::Abs:
      return std::abs(eval_node(*n.lhs, x));
  }
  return 0.0;
}

std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void print_node(const Expr::Node& n, std::string& out) {
  auto binary = [&](const char* op) {
    out += '(';
    print_node(*n.lhs, out);
    out += ' ';
    out += op;
    out += ' ';
    print_node(*n.rhs, out);
    out += ')';
  };
  auto call = [&](const char* fn) {
    out += fn;
    out += '(';
    print_node(*n.lhs, out);
    out += ')';
  };
  switch (n.kind) {
    case NodeKind::Constant:
      if (!n.name.empty()) {
        out += n.name;
      } else if (n.value < 0.0) {
        out += "(0 - " + format_number(-n.value) + ")";
      } else {
        out += format_number(n.value);
      }
      break;
    case NodeKind::Variable:
      out += 'x';
      break;
    case NodeKind::Add: binary("+"); break;
    case NodeKind::Sub: binary("-"); break;
    case NodeKind::Mul: binary("*"); break;
    case NodeKind::Div: binary("/"); break;
    case NodeKind::Pow: binary("^"); break;
    case NodeKind::Exp: call("exp"); break;
    case NodeKind::Log: call("log"); break;
    case NodeKind::Sqrt: call("sqrt"); break;
    case NodeKind::Abs: call("abs"); break;
  }
}

bool mentions_x(const Expr::Node& n) {
  if (n.kind == NodeKind::Variable) return true;
  return (n.lhs && mentions_x(*n.lhs)) || (n.rhs && mentions_x(*n.rhs));
}

}  // namespace

// Recursive-descent parser:
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := ('-' | '+') unary | power
//   power   := primary ('^' unary)?
//   primary := number | identifier | identifier '(' expr ')' | '(' expr ')'
class Parser {
 public:
  explicit Parser(std::string_view src) : src_(src) {}

  Expr run() {
    NodePtr root = parse_expr();
    skip_ws();
    if (pos_ < src_.size()) {
      if (src_[pos_] == ')') throw ParseError(ErrorCode::UnbalancedParentheses, pos_, "unmatched ')'");
      throw ParseError(ErrorCode::Syntax, pos_, std::string("unexpected character '") + src_[pos_] + "'");
    }
    return Expr(std::move(root));
  }

 private:
  void skip_ws() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < src_.size() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  NodePtr parse_expr() {
    NodePtr lhs = parse_term();
    for (;;) {
      if (accept('+')) {
        lhs = make_node(NodeKind::Add, lhs, parse_term());
      } else if (accept('-')) {
        lhs = make_node(NodeKind::Sub, lhs, parse_term());
      } else {
        return lhs;
      }
    }
  }

  NodePtr parse_term() {
    NodePtr lhs = parse_unary();
    for (;;) {
      if (accept('*')) {
        lhs = make_node(NodeKind::Mul, lhs, parse_unary());
      } else if (accept('/')) {
        lhs = make_node(NodeKind::Div, lhs, parse_unary());
      } else {
        return lhs;
      }
    }
  }

  NodePtr parse_unary() {
    if (accept('-')) return make_node(NodeKind::Sub, make_leaf(NodeKind::Constant, 0.0), parse_unary());
    if (accept('+')) return parse_unary();
    return parse_power();
  }

  NodePtr parse_power() {
    NodePtr base = parse_primary();
    if (accept('^')) return make_node(NodeKind::Pow, base, parse_unary());
    return base;
  }

  NodePtr parse_primary() {
    skip_ws();
    if (pos_ >= src_.size()) throw ParseError(ErrorCode::Syntax, pos_, "unexpected end of input");
    const char c = src_[pos_];
    if (c == '(') {
      const std::size_t open = pos_;
      ++pos_;
      NodePtr inner = parse_expr();
      if (!accept(')')) throw ParseError(ErrorCode::UnbalancedParentheses, open, "unclosed '('");
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_identifier();
    if (c == ')') throw ParseError(ErrorCode::UnbalancedParentheses, pos_, "unexpected ')'");
    throw ParseError(ErrorCode::Syntax, pos_, std::string("unexpected character '") + c + "'");
  }

  NodePtr parse_number() {
    const std::size_t start = pos_;
    auto digits = [&] {
      std::size_t n = 0;
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
        ++pos_;
        ++n;
      }
      return n;
    };
    std::size_t n = digits();
    if (pos_ < src_.size() && src_[pos_] == '.') {
      ++pos_;
      n += digits();
    }
    if (n == 0) throw ParseError(ErrorCode::Syntax, start, "malformed number");
    // Exponent only when followed by digits, so "2e" is not swallowed.
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      std::size_t look = pos_ + 1;
      if (look < src_.size() && (src_[look] == '+' || src_[look] == '-')) ++look;
      if (look < src_.size() && std::isdigit(static_cast<unsigned char>(src_[look]))) {
        pos_ = look;
        digits();
      }
    }
    const std::string text(src_.substr(start, pos_ - start));
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(value)) {
      throw ParseError(ErrorCode::Syntax, start, "malformed number '" + text + "'");
    }
    return make_leaf(NodeKind::Constant, value);
  }

  NodePtr parse_identifier() {
    const std::size_t start = pos_;
    while (pos_ < src_.size() &&
           (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) {
      ++pos_;
    }
    const std::string_view id = src_.substr(start, pos_ - start);
    if (id == "x") return make_leaf(NodeKind::Variable);
    if (id == "pi") return make_leaf(NodeKind::Constant, std::numbers::pi, "pi");
    if (id == "e") return make_leaf(NodeKind::Constant, std::numbers::e, "e");

    NodeKind fn;
    if (id == "exp") {
      fn = NodeKind::Exp;
    } else if (id == "log") {
      fn = NodeKind::Log;
    } else if (id == "sqrt") {
      fn = NodeKind::Sqrt;
    } else if (id == "abs") {
      fn = NodeKind::Abs;
    } else {
      throw ParseError(ErrorCode::UnknownIdentifier, start, "unknown identifier '" + std::string(id) + "'");
    }
    skip_ws();
    if (pos_ >= src_.size() || src_[pos_] != '(') {
      throw ParseError(ErrorCode::Syntax, pos_, "expected '(' after " + std::string(id));
    }
    const std::size_t open = pos_++;
    NodePtr arg = parse_expr();
    if (!accept(')')) throw ParseError(ErrorCode::UnbalancedParentheses, open, "unclosed '('");
    return make_node(fn, std::move(arg));
  }

  std::string_view src_;
  std::size_t pos_ = 0;
};

Expr Expr::parse(std::string_view source) { return Parser(source).run(); }

Expr Expr::constant(double value) { return Expr(make_leaf(NodeKind::Constant, value)); }

Expr Expr::variable() { return Expr(make_leaf(NodeKind::Variable)); }

double Expr::eval(double x) const {
  if (!std::isfinite(x)) throw Error(ErrorCode::InvalidArgument, "expression evaluated at non-finite x");
  return checked(eval_node(*root_, x), "expression");
}

std::string Expr::to_string() const {
  std::string out;
  print_node(*root_, out);
  return out;
}

bool Expr::is_constant() const { return !mentions_x(*root_); }

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::Syntax: return "syntax";
    case ErrorCode::UnknownIdentifier: return "unknown-identifier";
    case ErrorCode::UnbalancedParentheses: return "unbalanced-parentheses";
    case ErrorCode::Domain: return "domain";
    case ErrorCode::DivisionByZero: return "division-by-zero";
    case ErrorCode::Overflow: return "overflow";
    case ErrorCode::InvalidArgument: return "invalid-argument";
    case ErrorCode::LeadingCoefficientZero: return "leading-coefficient-zero";
    case ErrorCode::BranchLost: return "branch-lost";
    case ErrorCode::ZeroEigenvalue: return "zero-eigenvalue";
    case ErrorCode::BranchCoverage: return "branch-coverage";
    case ErrorCode::GridMismatch: return "grid-mismatch";
    case ErrorCode::NotASolution: return "not-a-solution";
    case ErrorCode::WrongDegree: return "wrong-degree";
    case ErrorCode::ReferenceFailure: return "reference-failure";
    case ErrorCode::Pole: return "pole";
    case ErrorCode::UnknownCase: return "unknown-case";
    case ErrorCode::Config: return "config";
    case ErrorCode::IntegrationFailure: return "integration-failure";
  }
  return "unknown";
}

}  // namespace abel
