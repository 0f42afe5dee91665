#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <vector>

#include "nf/jet.hpp"

namespace nf {

// Arithmetic expression language over coordinates x0..x{n-1} used for metric
// and vector-field components. ASTs are immutable after parse and safe to
// evaluate from many threads.

enum class Func { Sin, Cos, Exp, Sinh, Cosh, Tanh, Sqrt, Pow };

const char* func_name(Func f);

struct ExprNode;
using NodePtr = std::unique_ptr<ExprNode>;

struct ExprNode {
  enum class Kind { Number, Coord, Neg, Add, Sub, Mul, Div, PowOp, Call };
  Kind kind;
  double number = 0.0;   // Kind::Number
  int coord = -1;        // Kind::Coord
  Func func = Func::Sin; // Kind::Call
  std::vector<NodePtr> children;
  std::size_t offset = 0; // byte offset in the source, for error reporting
};

struct ExprError : std::runtime_error {
  std::size_t offset;
  ExprError(const std::string& msg, std::size_t off)
      : std::runtime_error(msg + " at byte " + std::to_string(off)), offset(off) {}
};

class Expr {
 public:
  Expr() = default;
  Expr(NodePtr root, int n) : root_(std::move(root)), n_(n) {}

  int dimension() const { return n_; }
  const ExprNode* root() const { return root_.get(); }

  double eval(const std::vector<double>& point) const;
  // Exact value, d/dx_a, d/dx_b and d^2/dx_a dx_b at the point.
  Jet2 eval_jet(const std::vector<double>& point, int dir_a, int dir_b) const;

 private:
  std::shared_ptr<const ExprNode> root_;
  int n_ = 0;
};

// Grammar:
//   expr   := term (('+'|'-') term)*
//   term   := factor (('*'|'/') factor)*
//   factor := ('-')? atom ('^' atom)?
//   atom   := number | 'x' digits | func '(' expr (',' expr)* ')' | '(' expr ')'
// '^' binds tighter than the unary minus on its left operand. pow takes two
// arguments, every other function takes one.
Expr parse(std::string_view source, int n);

// Canonical text form; parsing it back yields a structurally identical AST.
std::string print(const Expr& e);

bool structurally_equal(const Expr& a, const Expr& b);

}  // namespace nf
