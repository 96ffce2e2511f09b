#include "lipflow/grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace lipflow {

Mesh make_mesh(int n, double length) {
  if (n < 2) throw std::invalid_argument("mesh: need n >= 2 interior nodes, got " + std::to_string(n));
  if (!(length > 0.0) || !std::isfinite(length)) throw std::invalid_argument("mesh: domain length must be positive");
  return Mesh{n, length, length / (n + 1)};
}

GridFn GridFn::sample(const Mesh& m, const std::function<double(double)>& f) {
  GridFn u(static_cast<std::size_t>(m.n));
  for (int i = 0; i < m.n; ++i) u[i] = f(m.node(i));
  return u;
}

double GridFn::min() const { return values_.empty() ? 0.0 : *std::min_element(values_.begin(), values_.end()); }
double GridFn::max() const { return values_.empty() ? 0.0 : *std::max_element(values_.begin(), values_.end()); }

double GridFn::sup_norm() const {
  double s = 0.0;
  for (double v : values_) s = std::max(s, std::abs(v));
  return s;
}

bool GridFn::all_finite() const {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

GridFn& GridFn::operator+=(const GridFn& o) {
  if (o.size() != size()) throw std::invalid_argument("GridFn: size mismatch");
  for (std::size_t i = 0; i < size(); ++i) values_[i] += o.values_[i];
  return *this;
}

GridFn& GridFn::operator-=(const GridFn& o) {
  if (o.size() != size()) throw std::invalid_argument("GridFn: size mismatch");
  for (std::size_t i = 0; i < size(); ++i) values_[i] -= o.values_[i];
  return *this;
}

GridFn& GridFn::operator*=(double c) {
  for (double& v : values_) v *= c;
  return *this;
}

void check_conforms(const GridFn& u, const Mesh& m) {
  if (u.size() != static_cast<std::size_t>(m.n))
    throw std::invalid_argument("GridFn of size " + std::to_string(u.size()) + " does not match mesh with n=" +
                                std::to_string(m.n));
}

std::vector<double> grad(const GridFn& u, const Mesh& m) {
  check_conforms(u, m);
  const int n = m.n;
  std::vector<double> g(n + 1);
  double left = 0.0;
  for (int k = 0; k < n; ++k) {
    g[k] = (u[k] - left) / m.h;
    left = u[k];
  }
  g[n] = (0.0 - left) / m.h;
  return g;
}

double norm_w1p(const GridFn& u, double p, const Mesh& m) {
  if (!(p > 1.0)) throw std::invalid_argument("norm_w1p: need p > 1");
  double s = 0.0;
  for (double gk : grad(u, m)) s += std::pow(std::abs(gk), p);
  return std::pow(m.h * s, 1.0 / p);
}

double norm_lr(const GridFn& u, double r, const Mesh& m) {
  if (!(r >= 1.0)) throw std::invalid_argument("norm_lr: need r >= 1");
  check_conforms(u, m);
  double s = 0.0;
  for (double v : u.values()) s += std::pow(std::abs(v), r);
  return std::pow(m.h * s, 1.0 / r);
}

double inner_h(const GridFn& a, const GridFn& b, const Mesh& m) {
  check_conforms(a, m);
  check_conforms(b, m);
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return m.h * s;
}

double norm_h(const GridFn& a, const Mesh& m) { return std::sqrt(inner_h(a, a, m)); }

double sup_distance(const GridFn& a, const GridFn& b) {
  if (a.size() != b.size()) throw std::invalid_argument("sup_distance: size mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s = std::max(s, std::abs(a[i] - b[i]));
  return s;
}

}  // namespace lipflow
