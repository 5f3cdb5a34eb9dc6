#pragma once

#include "wk/jet.hpp"

#include <cmath>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace wk {

/// A compiled arithmetic expression over named variables.
///
/// Grammar: numbers, variables, + - * / ^ (right associative), unary minus,
/// parentheses, and the functions exp, log, sqrt, abs, sin, cos, pow(a, b) and
/// norm(...). `norm()` with no arguments is the Euclidean norm of all
/// variables; `norm(a, b, ...)` is sqrt(a^2 + b^2 + ...). The constant `pi` is
/// predefined.
///
/// Evaluation is generic over the number type, so the same expression yields
/// values (double) and exact derivatives (Jet).
class Expression {
 public:
  Expression() = default;
  static Expression parse(const std::string& source, std::vector<std::string> variables);

  const std::string& source() const { return source_; }
  const std::vector<std::string>& variables() const { return variables_; }

  template <typename T>
  T evaluate(std::span<const T> vars) const;

  double operator()(std::span<const double> vars) const { return evaluate<double>(vars); }

 private:
  enum class Op { Const, Var, Add, Sub, Mul, Div, Pow, Neg, Exp, Log, Sqrt, Abs, Sin, Cos, Norm, NormAll };
  struct Node {
    Op op;
    double constant = 0.0;
    int var = -1;
    std::vector<int> args;
  };
  friend class ExpressionParser;

  template <typename T>
  T eval_node(int id, std::span<const T> vars) const;

  std::string source_;
  std::vector<std::string> variables_;
  std::shared_ptr<const std::vector<Node>> nodes_;
  int root_ = -1;
};

/// Default variable names x1..xk.
std::vector<std::string> coordinate_names(const std::string& prefix, int count);

template <typename T>
T Expression::evaluate(std::span<const T> vars) const {
  return eval_node<T>(root_, vars);
}

template <typename T>
T Expression::eval_node(int id, std::span<const T> vars) const {
  using std::abs;
  using std::cos;
  using std::exp;
  using std::log;
  using std::pow;
  using std::sin;
  using std::sqrt;
  const Node& n = (*nodes_)[static_cast<std::size_t>(id)];
  auto arg = [&](std::size_t i) { return eval_node<T>(n.args[i], vars); };
  switch (n.op) {
    case Op::Const: return T(n.constant);
    case Op::Var: return vars[static_cast<std::size_t>(n.var)];
    case Op::Add: return arg(0) + arg(1);
    case Op::Sub: return arg(0) - arg(1);
    case Op::Mul: return arg(0) * arg(1);
    case Op::Div: return arg(0) / arg(1);
    case Op::Pow: return pow(arg(0), arg(1));
    case Op::Neg: return -arg(0);
    case Op::Exp: return exp(arg(0));
    case Op::Log: return log(arg(0));
    case Op::Sqrt: return sqrt(arg(0));
    case Op::Abs: return abs(arg(0));
    case Op::Sin: return sin(arg(0));
    case Op::Cos: return cos(arg(0));
    case Op::Norm: {
      T s(0.0);
      for (std::size_t i = 0; i < n.args.size(); ++i) {
        const T a = arg(i);
        s = s + a * a;
      }
      return sqrt(s);
    }
    case Op::NormAll: {
      T s(0.0);
      for (const T& v : vars) s = s + v * v;
      return sqrt(s);
    }
  }
  return T(0.0);
}

}  // namespace wk
