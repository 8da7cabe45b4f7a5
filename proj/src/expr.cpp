#include "cfp/expr.hpp"

#include "cfp/errors.hpp"

#include <cmath>

namespace cfp {

Expr Expr::constant(Rational value) {
  return Expr(std::make_shared<const Node>(Node{Kind::Constant, std::move(value), 0, nullptr, nullptr}));
}

Expr Expr::variable() { return Expr(std::make_shared<const Node>(Node{Kind::Variable, 0, 0, nullptr, nullptr})); }

Expr Expr::binary(Kind kind, Expr lhs, Expr rhs) {
  return Expr(std::make_shared<const Node>(
      Node{kind, 0, 0, std::make_shared<const Expr>(std::move(lhs)), std::make_shared<const Expr>(std::move(rhs))}));
}

Expr Expr::negate(Expr operand) {
  return Expr(
      std::make_shared<const Node>(Node{Kind::Neg, 0, 0, std::make_shared<const Expr>(std::move(operand)), nullptr}));
}

Expr Expr::power(Expr base, int exponent) {
  return Expr(std::make_shared<const Node>(
      Node{Kind::Pow, 0, exponent, std::make_shared<const Expr>(std::move(base)), nullptr}));
}

Rational Expr::eval(const Rational& x) const {
  switch (kind()) {
    case Kind::Constant: return value();
    case Kind::Variable: return x;
    case Kind::Add: return lhs().eval(x) + rhs().eval(x);
    case Kind::Sub: return lhs().eval(x) - rhs().eval(x);
    case Kind::Mul: return lhs().eval(x) * rhs().eval(x);
    case Kind::Div: {
      Rational den = rhs().eval(x);
      if (den == 0) throw DomainError("division by zero at x = " + display_string(x));
      return lhs().eval(x) / den;
    }
    case Kind::Neg: return -lhs().eval(x);
    case Kind::Pow: {
      Rational base = lhs().eval(x);
      if (base == 0 && exponent() < 0) throw DomainError("division by zero at x = " + display_string(x));
      return ipow(base, exponent());
    }
  }
  return 0;
}

double Expr::eval(double x) const {
  switch (kind()) {
    case Kind::Constant: return to_double(value());
    case Kind::Variable: return x;
    case Kind::Add: return lhs().eval(x) + rhs().eval(x);
    case Kind::Sub: return lhs().eval(x) - rhs().eval(x);
    case Kind::Mul: return lhs().eval(x) * rhs().eval(x);
    case Kind::Div: {
      double den = rhs().eval(x);
      if (den == 0.0) throw DomainError("division by zero");
      return lhs().eval(x) / den;
    }
    case Kind::Neg: return -lhs().eval(x);
    case Kind::Pow: {
      double base = lhs().eval(x);
      if (base == 0.0 && exponent() < 0) throw DomainError("division by zero");
      return std::pow(base, exponent());
    }
  }
  return 0.0;
}

bool operator==(const Expr& a, const Expr& b) {
  if (a.node_ == b.node_) return true;
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case Expr::Kind::Constant: return a.value() == b.value();
    case Expr::Kind::Variable: return true;
    case Expr::Kind::Neg: return a.lhs() == b.lhs();
    case Expr::Kind::Pow: return a.exponent() == b.exponent() && a.lhs() == b.lhs();
    default: return a.lhs() == b.lhs() && a.rhs() == b.rhs();
  }
}

namespace {

// Binding strength: sums < products < unary minus < powers < atoms.
int precedence(const Expr& e) {
  switch (e.kind()) {
    case Expr::Kind::Add:
    case Expr::Kind::Sub: return 1;
    case Expr::Kind::Mul:
    case Expr::Kind::Div: return 2;
    case Expr::Kind::Neg: return 3;
    case Expr::Kind::Pow: return 4;
    case Expr::Kind::Constant: {
      const Rational& v = e.value();
      return (boost::multiprecision::denominator(v) == 1 && v >= 0) ? 5 : 0;
    }
    case Expr::Kind::Variable: return 5;
  }
  return 0;
}

std::string render(const Expr& e, const std::string& var);

std::string wrap(const Expr& e, const std::string& var, bool parens) {
  std::string s = render(e, var);
  return parens ? "(" + s + ")" : s;
}

std::string render(const Expr& e, const std::string& var) {
  using K = Expr::Kind;
  switch (e.kind()) {
    case K::Constant: return exact_string(e.value());
    case K::Variable: return var;
    case K::Neg: return "-" + wrap(e.lhs(), var, precedence(e.lhs()) < 3);
    case K::Pow: return wrap(e.lhs(), var, precedence(e.lhs()) < 5) + "^" + std::to_string(e.exponent());
    default: {
      const int p = precedence(e);
      const char* op = e.kind() == K::Add ? " + " : e.kind() == K::Sub ? " - " : e.kind() == K::Mul ? "*" : "/";
      return wrap(e.lhs(), var, precedence(e.lhs()) < p) + op + wrap(e.rhs(), var, precedence(e.rhs()) <= p);
    }
  }
}

}  // namespace

std::string to_string(const Expr& e, const std::string& var) {
  // A lone rational constant prints bare at top level.
  if (e.kind() == Expr::Kind::Constant) return exact_string(e.value());
  return render(e, var);
}

std::optional<Affine> as_affine(const Expr& e) {
  using K = Expr::Kind;
  switch (e.kind()) {
    case K::Constant: return Affine{0, e.value()};
    case K::Variable: return Affine{1, 0};
    case K::Neg: {
      auto a = as_affine(e.lhs());
      if (!a) return std::nullopt;
      return Affine{-a->slope, -a->intercept};
    }
    case K::Add:
    case K::Sub: {
      auto l = as_affine(e.lhs());
      auto r = as_affine(e.rhs());
      if (!l || !r) return std::nullopt;
      if (e.kind() == K::Add) return Affine{l->slope + r->slope, l->intercept + r->intercept};
      return Affine{l->slope - r->slope, l->intercept - r->intercept};
    }
    case K::Mul: {
      auto l = as_affine(e.lhs());
      auto r = as_affine(e.rhs());
      if (!l || !r) return std::nullopt;
      if (l->slope == 0) return Affine{l->intercept * r->slope, l->intercept * r->intercept};
      if (r->slope == 0) return Affine{r->intercept * l->slope, r->intercept * l->intercept};
      return std::nullopt;
    }
    case K::Div: {
      auto l = as_affine(e.lhs());
      auto r = as_affine(e.rhs());
      if (!l || !r || r->slope != 0 || r->intercept == 0) return std::nullopt;
      return Affine{l->slope / r->intercept, l->intercept / r->intercept};
    }
    case K::Pow: {
      auto b = as_affine(e.lhs());
      if (!b) return std::nullopt;
      if (e.exponent() == 1) return b;
      if (e.exponent() == 0) return Affine{0, 1};
      if (b->slope == 0) {
        if (b->intercept == 0 && e.exponent() < 0) return std::nullopt;
        return Affine{0, ipow(b->intercept, e.exponent())};
      }
      return std::nullopt;
    }
  }
  return std::nullopt;
}

namespace {

// Product of two affine forms when it stays affine.
std::optional<Affine> affine_product(const Affine& l, const Affine& r) {
  if (l.slope != 0 && r.slope != 0) return std::nullopt;
  return Affine{l.slope * r.intercept + r.slope * l.intercept, l.intercept * r.intercept};
}

struct Ratio {
  Affine num, den;
};

std::optional<Ratio> ratio_of(const Expr& e) {
  using K = Expr::Kind;
  switch (e.kind()) {
    case K::Constant: return Ratio{{0, e.value()}, {0, 1}};
    case K::Variable: return Ratio{{1, 0}, {0, 1}};
    case K::Neg: {
      auto r = ratio_of(e.lhs());
      if (!r) return std::nullopt;
      r->num = {-r->num.slope, -r->num.intercept};
      return r;
    }
    case K::Add:
    case K::Sub: {
      auto l = ratio_of(e.lhs()), r = ratio_of(e.rhs());
      if (!l || !r) return std::nullopt;
      auto ln = affine_product(l->num, r->den), rn = affine_product(r->num, l->den), d = affine_product(l->den, r->den);
      if (!ln || !rn || !d) return std::nullopt;
      const Rational s = e.kind() == K::Add ? 1 : -1;
      return Ratio{{ln->slope + s * rn->slope, ln->intercept + s * rn->intercept}, *d};
    }
    case K::Mul:
    case K::Div: {
      auto l = ratio_of(e.lhs()), r = ratio_of(e.rhs());
      if (!l || !r) return std::nullopt;
      if (e.kind() == K::Div) std::swap(r->num, r->den);
      auto n = affine_product(l->num, r->num), d = affine_product(l->den, r->den);
      if (!n || !d) return std::nullopt;
      return Ratio{*n, *d};
    }
    case K::Pow: {
      auto b = ratio_of(e.lhs());
      if (!b) return std::nullopt;
      if (e.exponent() == 1) return b;
      if (e.exponent() == -1) return Ratio{b->den, b->num};
      if (auto c = as_affine(e)) return Ratio{*c, {0, 1}};
      return std::nullopt;
    }
  }
  return std::nullopt;
}

}  // namespace

std::optional<LinearFractional> as_linear_fractional(const Expr& e) {
  auto r = ratio_of(e);
  if (!r || (r->den.slope == 0 && r->den.intercept == 0)) return std::nullopt;
  return LinearFractional{r->num.slope, r->num.intercept, r->den.slope, r->den.intercept};
}

namespace {

bool has_variable(const Expr& e) {
  switch (e.kind()) {
    case Expr::Kind::Constant: return false;
    case Expr::Kind::Variable: return true;
    case Expr::Kind::Neg:
    case Expr::Kind::Pow: return has_variable(e.lhs());
    default: return has_variable(e.lhs()) || has_variable(e.rhs());
  }
}

}  // namespace

Program::Program(const Expr& e) { emit(e); }

void Program::emit(const Expr& e) {
  using K = Expr::Kind;
  if (!has_variable(e)) {
    code_.push_back({Op::PushConst, to_double(e.eval(Rational(0)))});
    return;
  }
  switch (e.kind()) {
    case K::Variable: code_.push_back({Op::PushVar}); return;
    case K::Neg:
      emit(e.lhs());
      code_.push_back({Op::Neg});
      return;
    case K::Pow:
      emit(e.lhs());
      code_.push_back({Op::PowI, 0.0, e.exponent()});
      return;
    default: break;
  }
  const bool lconst = !has_variable(e.lhs());
  const bool rconst = !has_variable(e.rhs());
  if (rconst) {
    const Rational c = e.rhs().eval(Rational(0));
    emit(e.lhs());
    switch (e.kind()) {
      case K::Add: code_.push_back({Op::AddC, to_double(c)}); return;
      case K::Sub: code_.push_back({Op::AddC, to_double(-c)}); return;
      case K::Mul: code_.push_back({Op::MulC, to_double(c)}); return;
      case K::Div:
        if (c == 0) throw DomainError("division by constant zero");
        code_.push_back({Op::MulC, to_double(Rational(1) / c)});
        return;
      default: break;
    }
  }
  if (lconst) {
    const double c = to_double(e.lhs().eval(Rational(0)));
    emit(e.rhs());
    switch (e.kind()) {
      case K::Add: code_.push_back({Op::AddC, c}); return;
      case K::Sub: code_.push_back({Op::RSubC, c}); return;
      case K::Mul: code_.push_back({Op::MulC, c}); return;
      case K::Div: code_.push_back({Op::RDivC, c}); return;
      default: break;
    }
  }
  emit(e.lhs());
  emit(e.rhs());
  switch (e.kind()) {
    case K::Add: code_.push_back({Op::Add}); break;
    case K::Sub: code_.push_back({Op::Sub}); break;
    case K::Mul: code_.push_back({Op::Mul}); break;
    case K::Div: code_.push_back({Op::Div}); break;
    default: break;
  }
}

void Program::run(std::span<const double> xs, std::span<double> out, const simd::KernelTable& k) const {
  const std::size_t n = xs.size();
  std::vector<std::vector<double>> stack;
  stack.reserve(8);
  auto check_nonzero = [&](const std::vector<double>& den) {
    if (k.count_zero(den.data(), n) != 0) throw DomainError("division by zero in batch evaluation");
  };
  for (const Instr& in : code_) {
    switch (in.op) {
      case Op::PushConst: stack.emplace_back(n, in.c); break;
      case Op::PushVar: stack.emplace_back(xs.begin(), xs.end()); break;
      case Op::Neg: {
        auto& a = stack.back();
        k.rsub_scalar(a.data(), 0.0, a.data(), n);
        break;
      }
      case Op::AddC: k.add_scalar(stack.back().data(), in.c, stack.back().data(), n); break;
      case Op::MulC: k.mul_scalar(stack.back().data(), in.c, stack.back().data(), n); break;
      case Op::RSubC: k.rsub_scalar(stack.back().data(), in.c, stack.back().data(), n); break;
      case Op::RDivC:
        check_nonzero(stack.back());
        k.rdiv_scalar(stack.back().data(), in.c, stack.back().data(), n);
        break;
      case Op::PowI: {
        auto& base = stack.back();
        int e = in.n < 0 ? -in.n : in.n;
        std::vector<double> result(n, 1.0);
        std::vector<double> b = base;
        while (e) {
          if (e & 1) k.mul(result.data(), b.data(), result.data(), n);
          e >>= 1;
          if (e) k.mul(b.data(), b.data(), b.data(), n);
        }
        if (in.n < 0) {
          check_nonzero(result);
          k.rdiv_scalar(result.data(), 1.0, result.data(), n);
        }
        base = std::move(result);
        break;
      }
      case Op::Add:
      case Op::Sub:
      case Op::Mul:
      case Op::Div: {
        std::vector<double> rhs = std::move(stack.back());
        stack.pop_back();
        auto& lhs = stack.back();
        if (in.op == Op::Add) k.add(lhs.data(), rhs.data(), lhs.data(), n);
        if (in.op == Op::Sub) k.sub(lhs.data(), rhs.data(), lhs.data(), n);
        if (in.op == Op::Mul) k.mul(lhs.data(), rhs.data(), lhs.data(), n);
        if (in.op == Op::Div) {
          check_nonzero(rhs);
          k.div(lhs.data(), rhs.data(), lhs.data(), n);
        }
        break;
      }
    }
  }
  std::copy(stack.back().begin(), stack.back().end(), out.begin());
}

}  // namespace cfp
