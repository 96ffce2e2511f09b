#include "lipflow/plap.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace lipflow {

namespace {

double flux(double g, double p, double eps) {
  if (p == 2.0) return g;
  if (eps == 0.0) return phi_p(g, p);
  return std::pow(g * g + eps * eps, 0.5 * (p - 2.0)) * g;
}

double dflux(double g, double p, double eps) {
  if (p == 2.0) return 1.0;
  const double s = g * g + eps * eps;
  if (s == 0.0) return p > 2.0 ? 0.0 : HUGE_VAL;
  return std::pow(s, 0.5 * (p - 4.0)) * ((p - 1.0) * g * g + eps * eps);
}

// Frozen-coefficient operator -(a u')' with a_k = (g_k^2 + eps^2)^((p-2)/2).
Tridiag frozen_operator(const GridFn& u, double p, const Mesh& m, double eps) {
  const auto g = grad(u, m);
  const int n = m.n;
  const double h2 = m.h * m.h;
  std::vector<double> a(n + 1);
  for (int k = 0; k <= n; ++k) a[k] = p == 2.0 ? 1.0 : std::pow(g[k] * g[k] + eps * eps, 0.5 * (p - 2.0));
  Tridiag T(n);
  for (int i = 0; i < n; ++i) {
    T.diag[i] = (a[i] + a[i + 1]) / h2;
    if (i + 1 < n) {
      T.upper[i] = -a[i + 1] / h2;
      T.lower[i] = -a[i + 1] / h2;
    }
  }
  return T;
}

double max_abs_grad(const GridFn& u, const Mesh& m) {
  double s = 0.0;
  for (double gk : grad(u, m)) s = std::max(s, std::abs(gk));
  return s;
}

GridFn residual(const GridFn& u, const GridFn& f, double p, const Mesh& m, double eps) {
  GridFn r = apply_plap(u, p, m, eps);
  r -= f;
  return r;
}

// Unregularized 1-D solve by integrating the flux: F_{k+1} = F_k - h f_k, g_k = phi_{p'}(F_k), and
// the free constant F_0 fixed by sum_k h g_k = 0, a monotone scalar equation.
// `mismatch` receives |sum_k h g_k| / sum_k h |g_k|, the only error left besides rounding.
GridFn flux_solve(const GridFn& f, double p, const Mesh& m, double& mismatch) {
  const int n = m.n;
  std::vector<double> S(n + 1, 0.0);
  for (int k = 1; k <= n; ++k) S[k] = S[k - 1] + m.h * f[k - 1];
  const double pp = 1.0 / (p - 1.0);
  auto inv_flux = [pp](double F) { return F == 0.0 ? 0.0 : std::copysign(std::pow(std::abs(F), pp), F); };
  auto G = [&](double F0) {
    double s = 0.0;
    for (int k = 0; k <= n; ++k) s += inv_flux(F0 - S[k]);
    return s;
  };
  double lo = *std::min_element(S.begin(), S.end());
  double hi = *std::max_element(S.begin(), S.end());
  for (int it = 0; it < 2000 && lo < hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (G(mid) < 0.0 ? lo : hi) = mid;
  }
  const double F0 = std::abs(G(lo)) <= std::abs(G(hi)) ? lo : hi;
  GridFn u(static_cast<std::size_t>(n));
  double acc = 0.0, total = 0.0;
  for (int i = 0; i < n; ++i) {
    acc += m.h * inv_flux(F0 - S[i]);
    total += m.h * std::abs(inv_flux(F0 - S[i]));
    u[i] = acc;
  }
  const double last = m.h * inv_flux(F0 - S[n]);
  total += std::abs(last);
  mismatch = total > 0.0 ? std::abs(acc + last) / total : 0.0;
  return u;
}

}  // namespace

void NewtonOpts::validate() const {
  if (!(tol > 0.0)) throw std::invalid_argument("newton: tol must be positive");
  if (max_iter < 1) throw std::invalid_argument("newton: max_iter must be at least 1");
  if (eps_schedule.empty() || eps_schedule.back() != 0.0)
    throw std::invalid_argument("newton: eps schedule must end with 0");
}

double phi_p(double v, double p) {
  if (v == 0.0) return 0.0;
  if (p == 2.0) return v;
  return std::pow(std::abs(v), p - 2.0) * v;
}

GridFn apply_plap(const GridFn& u, double p, const Mesh& m, double eps_reg) {
  if (!(p > 1.0)) throw std::invalid_argument("apply_plap: need p > 1");
  const auto g = grad(u, m);
  GridFn out(static_cast<std::size_t>(m.n));
  double left = flux(g[0], p, eps_reg);
  for (int i = 0; i < m.n; ++i) {
    const double right = flux(g[i + 1], p, eps_reg);
    out[i] = (left - right) / m.h;
    left = right;
  }
  return out;
}

Tridiag plap_jacobian(const GridFn& u, double p, const Mesh& m, double eps_reg) {
  const auto g = grad(u, m);
  const int n = m.n;
  const double h2 = m.h * m.h;
  std::vector<double> d(n + 1);
  for (int k = 0; k <= n; ++k) d[k] = dflux(g[k], p, eps_reg);
  Tridiag J(n);
  for (int i = 0; i < n; ++i) {
    J.diag[i] = (d[i] + d[i + 1]) / h2;
    if (i + 1 < n) {
      J.upper[i] = -d[i + 1] / h2;
      J.lower[i] = -d[i + 1] / h2;
    }
  }
  return J;
}

GridFn inverse_plap(const GridFn& f, double p, const Mesh& m, const NewtonOpts& opts) {
  if (!(p > 1.0)) throw std::invalid_argument("inverse_plap: need p > 1");
  check_conforms(f, m);
  opts.validate();
  if (f.sup_norm() == 0.0) return GridFn(f.size());

  // Linear Dirichlet Laplacian: exact tridiagonal solve, also the initial guess for p != 2.
  std::vector<double> rhs = f.vec();
  if (!frozen_operator(GridFn(f.size()), 2.0, m, 0.0).solve(rhs))
    throw SolverError("inverse_plap: singular Laplacian", HUGE_VAL, 0);
  GridFn u(std::move(rhs));
  if (p == 2.0) return u;
  if (p < 2.0) {
    // The flux derivative blows up at vanishing gradients and Newton stalls at a rounding floor
    // well above tol; the 1-D equation integrates exactly instead.
    double mismatch = 1.0;
    GridFn v = flux_solve(f, p, m, mismatch);
    if (v.all_finite() && mismatch <= 1e-12) return v;
  }

  const double fnorm = norm_h(f, m);
  const double target = opts.tol * std::max(1.0, fnorm);

  // Scale the harmonic guess to the minimizer of the convex energy along its ray.
  const double fu = inner_h(f, u, m);
  const double up = std::pow(norm_w1p(u, p, m), p);
  if (fu > 0.0 && up > 0.0) u *= std::pow(fu / up, 1.0 / (p - 1.0));

  const double gscale = std::max(max_abs_grad(u, m), 1e-300);
  int total_iter = 0;
  double rnorm = HUGE_VAL;

  for (std::size_t stage = 0; stage < opts.eps_schedule.size(); ++stage) {
    const bool last = stage + 1 == opts.eps_schedule.size();
    const double eps = opts.eps_schedule[stage] * gscale;
    // At eps = 0 the Jacobian keeps the previous stage's regularization.
    const double eps_jac = last ? std::max(eps, 1e-8 * gscale) : eps;
    const double stage_target = last ? target : std::max(target, 1e-9 * std::max(1.0, fnorm));

    GridFn r = residual(u, f, p, m, eps);
    rnorm = norm_h(r, m);
    for (int it = 0; it < opts.max_iter && rnorm > stage_target; ++it, ++total_iter) {
      std::vector<double> step = r.vec();
      bool ok = plap_jacobian(u, p, m, eps_jac).solve(step);
      bool accepted = false;
      if (ok) {
        GridFn d(std::move(step));
        double alpha = 1.0;
        for (int bt = 0; bt < opts.max_backtracks; ++bt, alpha *= 0.5) {
          GridFn trial = u - alpha * d;
          GridFn rt = residual(trial, f, p, m, eps);
          const double rn = norm_h(rt, m);
          if (std::isfinite(rn) && rn <= (1.0 - opts.armijo * alpha) * rnorm) {
            u = std::move(trial);
            r = std::move(rt);
            rnorm = rn;
            accepted = true;
            break;
          }
        }
      }
      if (!accepted) {
        // Picard (Kacanov) step with frozen coefficients.
        std::vector<double> rhs2 = f.vec();
        if (!frozen_operator(u, p, m, eps_jac).solve(rhs2)) break;
        GridFn trial(std::move(rhs2));
        GridFn rt = residual(trial, f, p, m, eps);
        const double rn = norm_h(rt, m);
        if (!(std::isfinite(rn) && rn < rnorm)) break;
        u = std::move(trial);
        r = std::move(rt);
        rnorm = rn;
      }
    }
  }

  if (!(rnorm <= target)) {
    // Newton stalls where the flux derivative degenerates (p < 2 near vanishing gradients). There
    // the nodal residual itself has a rounding floor far above tol, because the flux |g|^(p-2) g
    // amplifies the O(eps |u| / h) error of recomputed gradients; the integrated flux solution is
    // accepted on its own consistency instead.
    double mismatch = 1.0;
    GridFn v = flux_solve(f, p, m, mismatch);
    const double rv = norm_h(residual(v, f, p, m, 0.0), m);
    if (v.all_finite() && mismatch <= 1e-12) return v;
    if (rv < rnorm) {
      u = std::move(v);
      rnorm = rv;
    }
  }
  if (!(rnorm <= target)) {
    std::ostringstream os;
    os << "inverse_plap: no convergence after " << total_iter << " iterations, residual " << rnorm;
    throw SolverError(os.str(), rnorm, total_iter);
  }
  return u;
}

double rayleigh_quotient(const GridFn& u, double p, const Mesh& m) {
  const double den = std::pow(norm_lr(u, p, m), p);
  if (den == 0.0) throw std::invalid_argument("rayleigh_quotient: zero function");
  return std::pow(norm_w1p(u, p, m), p) / den;
}

double eigen_residual(double lambda, const GridFn& u, double p, const Mesh& m) {
  GridFn r = apply_plap(u, p, m);
  for (std::size_t i = 0; i < u.size(); ++i) r[i] -= lambda * phi_p(u[i], p);
  return norm_h(r, m);
}

EigenPair eigen_first(double p, const Mesh& m, const NewtonOpts& opts) {
  if (!(p > 1.0)) throw std::invalid_argument("eigen_first: need p > 1");
  GridFn u = GridFn::sample(m, [&](double x) { return x * (m.length - x); });
  u *= 1.0 / norm_lr(u, p, m);
  double lambda = rayleigh_quotient(u, p, m);

  constexpr int max_iter = 2000;
  double res = HUGE_VAL;
  for (int it = 1; it <= max_iter; ++it) {
    GridFn f(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) f[i] = lambda * phi_p(u[i], p);
    GridFn v = inverse_plap(f, p, m, opts);
    v *= 1.0 / norm_lr(v, p, m);
    const double next = rayleigh_quotient(v, p, m);
    const double change = std::abs(next - lambda);
    u = std::move(v);
    lambda = next;
    res = eigen_residual(lambda, u, p, m);
    if (change <= 1e-10 * lambda && res <= 1e-10 * std::max(1.0, lambda)) return {lambda, u, res, it};
    // For p < 2 the nodal residual has a rounding floor (see inverse_plap) that grows without
    // bound as p -> 1; a stationary quotient is the convergence test there.
    if (p < 2.0 && change <= 1e-13 * lambda) return {lambda, u, res, it};
  }
  if (res <= 1e-8 * std::max(1.0, lambda)) return {lambda, u, res, max_iter};
  throw SolverError("eigen_first: inverse iteration did not converge", res, max_iter);
}

EigenPair eigen_second_1d(double p, const Mesh& m, const NewtonOpts& opts) {
  if (m.n % 2 == 0 || m.n < 5)
    throw std::invalid_argument("eigen_second_1d: need odd n >= 5 so that the midpoint is a node");
  const int half_n = (m.n - 1) / 2;
  const Mesh half = make_mesh(half_n, 0.5 * m.length);
  const EigenPair e = eigen_first(p, half, opts);
  GridFn u(static_cast<std::size_t>(m.n));
  for (int i = 0; i < half_n; ++i) {
    u[i] = e.u[i];
    u[i + half_n + 1] = -e.u[i];
  }
  u *= 1.0 / norm_lr(u, p, m);
  return {e.lambda, u, eigen_residual(e.lambda, u, p, m), e.iterations};
}

double pi_p(double p) { return 2.0 * std::numbers::pi / (p * std::sin(std::numbers::pi / p)); }

double lambda1_exact(double p, double length) { return (p - 1.0) * std::pow(pi_p(p) / length, p); }

}  // namespace lipflow
