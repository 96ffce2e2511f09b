#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "lipflow/grid.hpp"
#include "lipflow/tridiag.hpp"

namespace lipflow {

/// Controls for the damped Newton solves of the discrete p-Laplacian.
/// Convergence means ||apply_plap(u) - f||_h <= tol * max(1, ||f||_h).
struct NewtonOpts {
  double tol = 1e-11;
  int max_iter = 200;
  int max_backtracks = 40;
  double armijo = 1e-4;
  /// Gradient regularization continuation, relative to the gradient scale of the initial guess.
  std::vector<double> eps_schedule{1e-2, 1e-4, 1e-8, 0.0};

  void validate() const;
};

class SolverError : public std::runtime_error {
 public:
  SolverError(const std::string& what, double residual, int iterations)
      : std::runtime_error(what), residual_(residual), iterations_(iterations) {}
  double residual() const { return residual_; }
  int iterations() const { return iterations_; }

 private:
  double residual_;
  int iterations_;
};

struct EigenPair {
  double lambda = 0.0;
  GridFn u;  // normalized to |u|_p = 1
  double residual = 0.0;
  int iterations = 0;
};

/// |v|^(p-2) v, with the value 0 at v = 0.
double phi_p(double v, double p);

/// Nodal values of -(|u'|^2 + eps^2)^((p-2)/2) u' differenced over the two cells of each node;
/// for p = 2, eps = 0 this is the second difference -(u_{i-1} - 2u_i + u_{i+1}) / h^2.
GridFn apply_plap(const GridFn& u, double p, const Mesh& m, double eps_reg = 0.0);

/// Jacobian of apply_plap at u with regularization eps_reg.
Tridiag plap_jacobian(const GridFn& u, double p, const Mesh& m, double eps_reg);

/// Solves apply_plap(u) = f with homogeneous Dirichlet data. Throws SolverError on non-convergence.
GridFn inverse_plap(const GridFn& f, double p, const Mesh& m, const NewtonOpts& opts = {});

double rayleigh_quotient(const GridFn& u, double p, const Mesh& m);

/// ||apply_plap(u) - lambda |u|^(p-2) u||_h
double eigen_residual(double lambda, const GridFn& u, double p, const Mesh& m);

/// Principal eigenpair by normalized inverse iteration; u > 0 at every interior node.
EigenPair eigen_first(double p, const Mesh& m, const NewtonOpts& opts = {});

/// Second eigenpair in 1-D: the first eigenfunction of the half interval, reflected with a sign
/// flip about the midpoint. Requires odd n so that the midpoint is a mesh node.
EigenPair eigen_second_1d(double p, const Mesh& m, const NewtonOpts& opts = {});

/// Half-period 2 pi / (p sin(pi / p)) of the 1-D p-sine.
double pi_p(double p);

/// (p - 1) (pi_p / L)^p, the continuous principal eigenvalue on (0, L).
double lambda1_exact(double p, double length);

}  // namespace lipflow
