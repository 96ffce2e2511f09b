#pragma once

#include <vector>

namespace lipflow {

/// Tridiagonal matrix stored by diagonals; solved with LAPACK's partially pivoted dgtsv.
struct Tridiag {
  std::vector<double> lower;  // n-1
  std::vector<double> diag;   // n
  std::vector<double> upper;  // n-1

  explicit Tridiag(int n = 0) : lower(n > 0 ? n - 1 : 0), diag(n), upper(n > 0 ? n - 1 : 0) {}
  int size() const { return static_cast<int>(diag.size()); }

  std::vector<double> apply(const std::vector<double>& x) const;
  /// Returns false when the matrix is numerically singular.
  bool solve(std::vector<double>& rhs) const;
};

}  // namespace lipflow
