#include "lipflow/tridiag.hpp"

#include <lapacke.h>

#include <cmath>

namespace lipflow {

std::vector<double> Tridiag::apply(const std::vector<double>& x) const {
  const int n = size();
  std::vector<double> y(n);
  for (int i = 0; i < n; ++i) {
    double v = diag[i] * x[i];
    if (i > 0) v += lower[i - 1] * x[i - 1];
    if (i + 1 < n) v += upper[i] * x[i + 1];
    y[i] = v;
  }
  return y;
}

bool Tridiag::solve(std::vector<double>& rhs) const {
  const int n = size();
  if (n == 0) return true;
  std::vector<double> dl = lower, d = diag, du = upper;
  const lapack_int info = LAPACKE_dgtsv(LAPACK_COL_MAJOR, n, 1, dl.data(), d.data(), du.data(), rhs.data(), n);
  if (info != 0) return false;
  for (double v : rhs)
    if (!std::isfinite(v)) return false;
  return true;
}

}  // namespace lipflow
