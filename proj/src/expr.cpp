#include "dphase/expr.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>

#include "dphase/error.hpp"

namespace dphase {
namespace {

ExprPtr make_number(double v) {
  auto n = std::make_shared<ExprNode>();
  n->kind = ExprKind::Number;
  n->value = v;
  return n;
}

ExprPtr make_binary(BinaryOp op, ExprPtr lhs, ExprPtr rhs) {
  auto n = std::make_shared<ExprNode>();
  n->kind = ExprKind::Binary;
  n->op = op;
  n->args = {std::move(lhs), std::move(rhs)};
  return n;
}

struct FunctionInfo {
  std::string_view name;
  Function function;
  std::size_t arity;
};

constexpr FunctionInfo kFunctions[] = {
    {"sin", Function::Sin, 1},   {"cos", Function::Cos, 1},   {"exp", Function::Exp, 1},
    {"abs", Function::Abs, 1},   {"sqrt", Function::Sqrt, 1}, {"min", Function::Min, 2},
    {"max", Function::Max, 2},
};

const FunctionInfo* lookup_function(std::string_view name) {
  for (const auto& f : kFunctions) {
    if (f.name == name) return &f;
  }
  return nullptr;
}

std::string_view function_name(Function f) {
  for (const auto& info : kFunctions) {
    if (info.function == f) return info.name;
  }
  return "?";
}

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  ExprPtr parse() {
    auto e = expr();
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected character '" + std::string(1, text_[pos_]) + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, pos_); }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) {
      if (pos_ >= text_.size()) fail(std::string("expected '") + c + "' but reached end of input");
      fail(std::string("expected '") + c + "'");
    }
  }

  ExprPtr expr() {
    auto lhs = term();
    for (;;) {
      if (accept('+')) {
        lhs = make_binary(BinaryOp::Add, lhs, term());
      } else if (accept('-')) {
        lhs = make_binary(BinaryOp::Sub, lhs, term());
      } else {
        return lhs;
      }
    }
  }

  ExprPtr term() {
    auto lhs = factor();
    for (;;) {
      if (accept('*')) {
        lhs = make_binary(BinaryOp::Mul, lhs, factor());
      } else if (accept('/')) {
        lhs = make_binary(BinaryOp::Div, lhs, factor());
      } else {
        return lhs;
      }
    }
  }

  ExprPtr factor() {
    auto base = unary();
    if (accept('^')) return make_binary(BinaryOp::Pow, base, factor());
    return base;
  }

  ExprPtr unary() {
    if (accept('-')) {
      auto n = std::make_shared<ExprNode>();
      n->kind = ExprKind::Negate;
      n->args = {atom()};
      return n;
    }
    return atom();
  }

  ExprPtr atom() {
    skip_ws();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      auto e = expr();
      expect(')');
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
    fail("unexpected character '" + std::string(1, c) + "'");
  }

  ExprPtr number() {
    const std::size_t start = pos_;
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(text_.data() + pos_, text_.data() + text_.size(), v,
                                     std::chars_format::general);
    if (ec != std::errc() || !std::isfinite(v)) fail("malformed number");
    pos_ = static_cast<std::size_t>(ptr - text_.data());
    if (pos_ == start) fail("malformed number");
    return make_number(v);
  }

  ExprPtr identifier() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
      ++pos_;
    }
    const std::string_view name = text_.substr(start, pos_ - start);
    skip_ws();
    const bool is_call = pos_ < text_.size() && text_[pos_] == '(';
    if (!is_call) {
      if (name == "x" || name == "y") {
        auto n = std::make_shared<ExprNode>();
        n->kind = ExprKind::Variable;
        n->variable = name[0];
        return n;
      }
      pos_ = start;
      fail("unknown identifier '" + std::string(name) + "'");
    }
    const FunctionInfo* info = lookup_function(name);
    if (info == nullptr) {
      pos_ = start;
      fail("unknown function '" + std::string(name) + "'");
    }
    ++pos_;  // '('
    auto n = std::make_shared<ExprNode>();
    n->kind = ExprKind::Call;
    n->function = info->function;
    n->args.push_back(expr());
    if (accept(',')) n->args.push_back(expr());
    expect(')');
    if (n->args.size() != info->arity) {
      fail(std::string(name) + " takes " + std::to_string(info->arity) + " argument(s), got " +
           std::to_string(n->args.size()));
    }
    return n;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

[[noreturn]] void eval_fail(const std::string& msg, Point pt) {
  char buf[96];
  std::snprintf(buf, sizeof buf, " at (%.17g, %.17g)", pt.x, pt.y);
  throw Error(ErrorCode::Eval, msg + buf);
}

double eval_node(const ExprNode& n, Point pt) {
  switch (n.kind) {
    case ExprKind::Number:
      return n.value;
    case ExprKind::Variable:
      return n.variable == 'x' ? pt.x : pt.y;
    case ExprKind::Negate:
      return -eval_node(*n.args[0], pt);
    case ExprKind::Binary: {
      const double a = eval_node(*n.args[0], pt);
      const double b = eval_node(*n.args[1], pt);
      double r = 0.0;
      switch (n.op) {
        case BinaryOp::Add: r = a + b; break;
        case BinaryOp::Sub: r = a - b; break;
        case BinaryOp::Mul: r = a * b; break;
        case BinaryOp::Div:
          if (b == 0.0) eval_fail("division by zero", pt);
          r = a / b;
          break;
        case BinaryOp::Pow:
          if (a < 0.0 && std::trunc(b) != b) eval_fail("negative base with fractional exponent", pt);
          if (a == 0.0 && b < 0.0) eval_fail("zero raised to a negative power", pt);
          r = std::pow(a, b);
          break;
      }
      if (!std::isfinite(r)) eval_fail("non-finite result", pt);
      return r;
    }
    case ExprKind::Call: {
      const double a = eval_node(*n.args[0], pt);
      double r = 0.0;
      switch (n.function) {
        case Function::Sin: r = std::sin(a); break;
        case Function::Cos: r = std::cos(a); break;
        case Function::Exp: r = std::exp(a); break;
        case Function::Abs: r = std::fabs(a); break;
        case Function::Sqrt:
          if (a < 0.0) eval_fail("sqrt of negative value", pt);
          r = std::sqrt(a);
          break;
        case Function::Min: r = std::min(a, eval_node(*n.args[1], pt)); break;
        case Function::Max: r = std::max(a, eval_node(*n.args[1], pt)); break;
      }
      if (!std::isfinite(r)) eval_fail("non-finite result", pt);
      return r;
    }
  }
  eval_fail("corrupt expression node", pt);
}

void print_node(const ExprNode& n, std::string& out) {
  switch (n.kind) {
    case ExprKind::Number: {
      char buf[40];
      std::snprintf(buf, sizeof buf, "%.17g", n.value);
      out += buf;
      return;
    }
    case ExprKind::Variable:
      out += n.variable;
      return;
    case ExprKind::Negate:
      out += "(-";
      print_node(*n.args[0], out);
      out += ')';
      return;
    case ExprKind::Binary: {
      static constexpr const char* kOps[] = {" + ", " - ", " * ", " / ", " ^ "};
      out += '(';
      print_node(*n.args[0], out);
      out += kOps[static_cast<int>(n.op)];
      print_node(*n.args[1], out);
      out += ')';
      return;
    }
    case ExprKind::Call:
      out += function_name(n.function);
      out += '(';
      for (std::size_t i = 0; i < n.args.size(); ++i) {
        if (i > 0) out += ", ";
        print_node(*n.args[i], out);
      }
      out += ')';
      return;
  }
}

}  // namespace

ExprPtr parse_expr(std::string_view text) { return Parser(text).parse(); }

double eval_expr(const ExprNode& ast, Point point) {
  if (!std::isfinite(point.x) || !std::isfinite(point.y)) eval_fail("non-finite evaluation point", point);
  return eval_node(ast, point);
}

std::string print_expr(const ExprNode& ast) {
  std::string out;
  print_node(ast, out);
  return out;
}

bool structurally_equal(const ExprNode& lhs, const ExprNode& rhs) {
  if (lhs.kind != rhs.kind || lhs.args.size() != rhs.args.size()) return false;
  switch (lhs.kind) {
    case ExprKind::Number:
      if (lhs.value != rhs.value) return false;
      break;
    case ExprKind::Variable:
      if (lhs.variable != rhs.variable) return false;
      break;
    case ExprKind::Binary:
      if (lhs.op != rhs.op) return false;
      break;
    case ExprKind::Call:
      if (lhs.function != rhs.function) return false;
      break;
    case ExprKind::Negate:
      break;
  }
  for (std::size_t i = 0; i < lhs.args.size(); ++i) {
    if (!structurally_equal(*lhs.args[i], *rhs.args[i])) return false;
  }
  return true;
}

CoefficientField::CoefficientField() : source_("0"), ast_(make_number(0.0)) {}

CoefficientField::CoefficientField(std::string source)
    : source_(std::move(source)), ast_(parse_expr(source_)) {}

}  // namespace dphase
