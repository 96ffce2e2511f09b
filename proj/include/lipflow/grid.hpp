#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace lipflow {

/// Uniform mesh of (0, length) with homogeneous Dirichlet data at both ends.
/// Interior node i (0-based) sits at x = (i + 1) * h.
struct Mesh {
  int n = 0;
  double length = 0.0;
  double h = 0.0;

  double node(int i) const { return (i + 1) * h; }
};

Mesh make_mesh(int n, double length);

/// Interior nodal values of a function vanishing on the boundary.
class GridFn {
 public:
  GridFn() = default;
  explicit GridFn(std::size_t n, double value = 0.0) : values_(n, value) {}
  explicit GridFn(std::vector<double> values) : values_(std::move(values)) {}

  static GridFn sample(const Mesh& m, const std::function<double(double)>& f);

  std::size_t size() const { return values_.size(); }
  double& operator[](std::size_t i) { return values_[i]; }
  double operator[](std::size_t i) const { return values_[i]; }

  std::span<double> values() { return values_; }
  std::span<const double> values() const { return values_; }
  const std::vector<double>& vec() const { return values_; }

  double min() const;
  double max() const;
  double sup_norm() const;
  bool all_finite() const;

  GridFn& operator+=(const GridFn& o);
  GridFn& operator-=(const GridFn& o);
  GridFn& operator*=(double c);

  friend GridFn operator+(GridFn a, const GridFn& b) { return a += b; }
  friend GridFn operator-(GridFn a, const GridFn& b) { return a -= b; }
  friend GridFn operator*(double c, GridFn a) { return a *= c; }
  friend GridFn operator-(GridFn a) { return a *= -1.0; }
  friend bool operator==(const GridFn&, const GridFn&) = default;

 private:
  std::vector<double> values_;
};

void check_conforms(const GridFn& u, const Mesh& m);

/// Forward differences on the n+1 cells, boundary values taken as zero.
std::vector<double> grad(const GridFn& u, const Mesh& m);

/// (h * sum_k |grad_k|^p)^(1/p)
double norm_w1p(const GridFn& u, double p, const Mesh& m);

/// (h * sum_i |u_i|^r)^(1/r)
double norm_lr(const GridFn& u, double r, const Mesh& m);

/// Mass-weighted inner product h * sum_i a_i b_i.
double inner_h(const GridFn& a, const GridFn& b, const Mesh& m);

/// sqrt(inner_h(a, a)).
double norm_h(const GridFn& a, const Mesh& m);

double sup_distance(const GridFn& a, const GridFn& b);

}  // namespace lipflow
