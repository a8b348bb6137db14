#pragma once

// Coefficient expression language: a tiny arithmetic grammar over the
// variables x and y, used to describe the weight fields mu, alpha, beta
// and zeta in config files.
//
//   expr   := term (('+'|'-') term)*
//   term   := factor (('*'|'/') factor)*
//   factor := unary ('^' factor)?
//   unary  := '-'? atom
//   atom   := number | ident | ident '(' expr (',' expr)? ')' | '(' expr ')'
//
// '^' is right-associative and unary minus applies to the atom only, so
// "-x^2" reads as (-x)^2.

#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace dphase {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

enum class ExprKind { Number, Variable, Binary, Negate, Call };
enum class BinaryOp { Add, Sub, Mul, Div, Pow };
enum class Function { Sin, Cos, Exp, Abs, Sqrt, Min, Max };

struct ExprNode;
using ExprPtr = std::shared_ptr<const ExprNode>;

struct ExprNode {
  ExprKind kind = ExprKind::Number;
  double value = 0.0;   // Number
  char variable = 'x';  // Variable
  BinaryOp op = BinaryOp::Add;
  Function function = Function::Sin;
  std::vector<ExprPtr> args;  // operands / call arguments
};

/// Throws ParseError (syntax, unknown identifier, wrong arity).
ExprPtr parse_expr(std::string_view text);

/// Throws Error{Eval} for division by zero, domain errors and any non-finite result.
double eval_expr(const ExprNode& ast, Point point);

/// Fully parenthesized form; parse_expr(print_expr(a)) is structurally equal to a.
std::string print_expr(const ExprNode& ast);

bool structurally_equal(const ExprNode& lhs, const ExprNode& rhs);

/// A compiled weight field together with its source text.
class CoefficientField {
 public:
  CoefficientField();  // the constant 0
  explicit CoefficientField(std::string source);

  const std::string& source() const { return source_; }
  const ExprNode& ast() const { return *ast_; }
  double operator()(Point point) const { return eval_expr(*ast_, point); }

 private:
  std::string source_;
  ExprPtr ast_;
};

}  // namespace dphase
