#pragma once

#include "cfp/rational.hpp"
#include "cfp/simd/kernels.hpp"

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace cfp {

/// Immutable expression tree in one variable over exact rational constants:
/// +, -, *, /, unary minus and integer powers.
class Expr {
 public:
  enum class Kind { Constant, Variable, Add, Sub, Mul, Div, Neg, Pow };

  static Expr constant(Rational value);
  static Expr variable();
  static Expr binary(Kind kind, Expr lhs, Expr rhs);
  static Expr negate(Expr operand);
  static Expr power(Expr base, int exponent);

  Kind kind() const { return node_->kind; }
  const Rational& value() const { return node_->value; }
  int exponent() const { return node_->exponent; }
  const Expr& lhs() const { return *node_->lhs; }
  const Expr& rhs() const { return *node_->rhs; }

  /// Exact evaluation; throws DomainError when a divisor vanishes.
  Rational eval(const Rational& x) const;
  double eval(double x) const;

  friend bool operator==(const Expr& a, const Expr& b);

 private:
  struct Node {
    Kind kind;
    Rational value;
    int exponent = 0;
    std::shared_ptr<const Expr> lhs, rhs;
  };
  explicit Expr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

/// Pretty-prints with the minimal parentheses the grammar needs; `var` names
/// the variable. Parsing the output yields a structurally equal tree.
std::string to_string(const Expr& e, const std::string& var = "x");

/// slope * x + intercept
struct Affine {
  Rational slope;
  Rational intercept;
};

/// Symbolic reduction to affine form; nullopt when the expression is not
/// affine in the variable.
std::optional<Affine> as_affine(const Expr& e);

/// (a*x + b) / (c*x + d)
struct LinearFractional {
  Rational a, b, c, d;
};

/// Reduction to a ratio of two affine forms, e.g. x/(1 + x); nullopt when
/// some intermediate product would be quadratic in the variable.
std::optional<LinearFractional> as_linear_fractional(const Expr& e);

/// Postfix program for batch evaluation over arrays with the SIMD kernels.
class Program {
 public:
  explicit Program(const Expr& e);

  /// out[i] = e(xs[i]). Throws DomainError if a divisor is zero for some i.
  void run(std::span<const double> xs, std::span<double> out,
           const simd::KernelTable& k = simd::active_kernels()) const;

 private:
  enum class Op { PushConst, PushVar, Add, Sub, Mul, Div, Neg, AddC, MulC, RSubC, RDivC, PowI };
  struct Instr {
    Op op;
    double c = 0.0;
    int n = 0;
  };
  void emit(const Expr& e);
  std::vector<Instr> code_;
};

}  // namespace cfp
