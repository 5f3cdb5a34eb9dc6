#include "wk/jet.hpp"

#include "wk/error.hpp"

#include <cmath>
#include <map>
#include <mutex>

namespace wk {

JetLayout::JetLayout(int vars, int order) : vars_(vars), order_(order) {
  monomials_ = enumerate_multiindices(vars, order);
  for (std::size_t i = 0; i < monomials_.size(); ++i) {
    for (std::size_t j = 0; j < monomials_.size(); ++j) {
      if (monomials_[i].order() + monomials_[j].order() > order) continue;
      const Eigen::Index out = find(monomials_[i] + monomials_[j]);
      products_.push_back({static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j), out});
    }
  }
}

std::shared_ptr<const JetLayout> JetLayout::get(int vars, int order) {
  if (vars < 1 || order < 0) fail(ErrorKind::InvalidArgument, "jet layout needs vars >= 1 and order >= 0");
  static std::mutex mutex;
  static std::map<std::pair<int, int>, std::shared_ptr<const JetLayout>> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto& slot = cache[{vars, order}];
  if (!slot) slot = std::make_shared<const JetLayout>(vars, order);
  return slot;
}

Eigen::Index JetLayout::find(const MultiIndex& mu) const {
  if (mu.dim() != vars_ || mu.order() > order_) return -1;
  // Graded blocks: all monomials of lower degree come first.
  Eigen::Index offset = static_cast<Eigen::Index>(multiindex_count(vars_, mu.order() - 1));
  if (mu.order() == 0) offset = 0;
  for (Eigen::Index i = offset; i < terms(); ++i) {
    if (monomials_[static_cast<std::size_t>(i)] == mu) return i;
  }
  return -1;
}

Jet::Jet(double constant) : c_(Eigen::VectorXd::Constant(1, constant)) {}

Jet::Jet(std::shared_ptr<const JetLayout> layout, Eigen::VectorXd coeffs)
    : layout_(std::move(layout)), c_(std::move(coeffs)) {
  if (layout_ && c_.size() != layout_->terms())
    fail(ErrorKind::InvalidArgument, "jet coefficient count does not match its layout");
}

Jet Jet::variable(const std::shared_ptr<const JetLayout>& layout, int var, double value) {
  Eigen::VectorXd c = Eigen::VectorXd::Zero(layout->terms());
  c[0] = value;
  if (layout->order() >= 1) c[layout->find(MultiIndex::unit(layout->vars(), var))] = 1.0;
  return Jet(layout, std::move(c));
}

double Jet::derivative(const MultiIndex& mu) const {
  if (!layout_) return mu.is_zero() ? c_[0] : 0.0;
  const Eigen::Index i = layout_->find(mu);
  if (i < 0) {
    if (mu.dim() != layout_->vars()) fail(ErrorKind::InvalidArgument, "jet derivative dimension mismatch");
    fail(ErrorKind::InvalidArgument, "derivative order exceeds jet order");
  }
  return c_[i] * mu.factorial();
}

bool Jet::is_constant() const { return !layout_ || c_.tail(c_.size() - 1).isZero(0.0); }

void Jet::adopt_layout(const Jet& o) {
  if (layout_ || !o.layout_) return;
  const double v = c_[0];
  layout_ = o.layout_;
  c_ = Eigen::VectorXd::Zero(layout_->terms());
  c_[0] = v;
}

Jet& Jet::operator+=(const Jet& o) {
  adopt_layout(o);
  if (o.layout_ && o.layout_ != layout_) fail(ErrorKind::InvalidArgument, "jet layout mismatch");
  if (o.layout_) c_ += o.c_;
  else c_[0] += o.c_[0];
  return *this;
}

Jet& Jet::operator-=(const Jet& o) {
  adopt_layout(o);
  if (o.layout_ && o.layout_ != layout_) fail(ErrorKind::InvalidArgument, "jet layout mismatch");
  if (o.layout_) c_ -= o.c_;
  else c_[0] -= o.c_[0];
  return *this;
}

Jet& Jet::operator*=(const Jet& o) {
  if (!o.layout_) {
    c_ *= o.c_[0];
    return *this;
  }
  if (!layout_) {
    const double s = c_[0];
    layout_ = o.layout_;
    c_ = o.c_ * s;
    return *this;
  }
  if (o.layout_ != layout_) fail(ErrorKind::InvalidArgument, "jet layout mismatch");
  Eigen::VectorXd out = Eigen::VectorXd::Zero(c_.size());
  for (const auto& p : layout_->products()) out[p.out] += c_[p.lhs] * o.c_[p.rhs];
  c_ = std::move(out);
  return *this;
}

Jet& Jet::operator/=(const Jet& o) {
  if (!o.layout_) {
    c_ /= o.c_[0];
    return *this;
  }
  return *this *= pow(o, -1.0);
}

Jet Jet::compose(const std::vector<double>& derivs) const {
  if (!layout_) return Jet(derivs.at(0));
  const int order = layout_->order();
  Eigen::VectorXd u = c_;
  u[0] = 0.0;
  const Jet du(layout_, u);
  Eigen::VectorXd out = Eigen::VectorXd::Zero(c_.size());
  out[0] = derivs.at(0);
  Jet power(layout_, Eigen::VectorXd::Unit(c_.size(), 0));
  double factorial = 1.0;
  for (int n = 1; n <= order; ++n) {
    power *= du;
    factorial *= n;
    out += power.c_ * (derivs.at(static_cast<std::size_t>(n)) / factorial);
  }
  return Jet(layout_, std::move(out));
}

Jet operator+(Jet a, const Jet& b) { return a += b; }
Jet operator-(Jet a, const Jet& b) { return a -= b; }
Jet operator*(Jet a, const Jet& b) { return a *= b; }
Jet operator/(Jet a, const Jet& b) { return a /= b; }
Jet operator-(const Jet& a) { return Jet(a.layout(), -a.coeffs()); }

namespace {

int order_of(const Jet& a) { return a.layout() ? a.layout()->order() : 0; }

}  // namespace

Jet exp(const Jet& a) {
  const double e = std::exp(a.value());
  return a.compose(std::vector<double>(static_cast<std::size_t>(order_of(a) + 1), e));
}

Jet log(const Jet& a) {
  const int n = order_of(a);
  std::vector<double> d(static_cast<std::size_t>(n + 1));
  d[0] = std::log(a.value());
  // d^j/dt^j log t = (-1)^(j-1) (j-1)! t^-j
  double fact = 1.0;
  for (int j = 1; j <= n; ++j) {
    if (j > 1) fact *= (j - 1);
    d[static_cast<std::size_t>(j)] = ((j % 2 == 1) ? 1.0 : -1.0) * fact * std::pow(a.value(), -j);
  }
  return a.compose(d);
}

Jet sin(const Jet& a) {
  const int n = order_of(a);
  std::vector<double> d(static_cast<std::size_t>(n + 1));
  const double s = std::sin(a.value()), c = std::cos(a.value());
  for (int j = 0; j <= n; ++j) {
    const double cycle[4] = {s, c, -s, -c};
    d[static_cast<std::size_t>(j)] = cycle[j % 4];
  }
  return a.compose(d);
}

Jet cos(const Jet& a) {
  const int n = order_of(a);
  std::vector<double> d(static_cast<std::size_t>(n + 1));
  const double s = std::sin(a.value()), c = std::cos(a.value());
  for (int j = 0; j <= n; ++j) {
    const double cycle[4] = {c, -s, -c, s};
    d[static_cast<std::size_t>(j)] = cycle[j % 4];
  }
  return a.compose(d);
}

Jet pow(const Jet& a, double p) {
  if (p >= 0.0 && p <= 64.0 && p == std::floor(p)) {
    Jet result(1.0), base = a;
    for (auto e = static_cast<unsigned>(p); e; e >>= 1) {
      if (e & 1u) result *= base;
      if (e > 1) base *= base;
    }
    return result;
  }
  const int n = order_of(a);
  std::vector<double> d(static_cast<std::size_t>(n + 1));
  const double t = a.value();
  double falling = 1.0;  // p (p-1) ... (p-j+1)
  for (int j = 0; j <= n; ++j) {
    d[static_cast<std::size_t>(j)] = falling == 0.0 ? 0.0 : falling * std::pow(t, p - j);
    falling *= (p - j);
  }
  return a.compose(d);
}

Jet pow(const Jet& a, const Jet& p) {
  if (p.is_constant()) return pow(a, p.value());
  return exp(p * log(a));
}

Jet sqrt(const Jet& a) { return pow(a, 0.5); }

Jet abs(const Jet& a) { return a.value() < 0.0 ? -a : a; }

}  // namespace wk
