#include "lipflow/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>

#include "lipflow/plap.hpp"

namespace lipflow::oracle {

namespace {

// f restricted to one piece between consecutive breakpoints and extended smoothly past its ends,
// so RK4 stages never straddle a discontinuity.
class PieceLockedF {
 public:
  PieceLockedF(const PotentialSpec* spec) : spec_(spec) {
    if (spec_ == nullptr) return;
    bps_ = spec_->breakpoints;
    for (std::size_t k = 0; k <= bps_.size(); ++k) {
      double r;
      if (bps_.empty()) r = 1.0;
      else if (k == 0) r = bps_.front() - 1.0;
      else if (k == bps_.size()) r = bps_.back() + 1.0;
      else r = 0.5 * (bps_[k - 1] + bps_[k]);
      offset_.push_back(spec_->kind == PotentialKind::custom_piecewise ? 0.0 : spec_->f(r) - power(r));
    }
  }

  int pieces() const { return static_cast<int>(bps_.size()) + 1; }

  double lower(int k) const { return k == 0 ? -std::numeric_limits<double>::infinity() : bps_[k - 1]; }
  double upper(int k) const {
    return k == static_cast<int>(bps_.size()) ? std::numeric_limits<double>::infinity() : bps_[k];
  }

  // Piece containing u; on a breakpoint the one entered when moving in direction dir.
  int piece_of(double u, double dir) const {
    int k = 0;
    for (double bp : bps_) {
      if (u > bp || (u == bp && dir > 0.0)) ++k;
    }
    return k;
  }

  double operator()(double u, int k) const {
    if (spec_ == nullptr) return 0.0;
    if (spec_->kind == PotentialKind::custom_piecewise) {
      const auto& cs = spec_->pieces[k].coeffs;
      double acc = 0.0;
      for (auto it = cs.rbegin(); it != cs.rend(); ++it) acc = acc * u + *it;
      return acc;
    }
    return power(u) + offset_[k];
  }

 private:
  double power(double s) const {
    double a = std::abs(s);
    if (a == 0.0) return 0.0;
    return std::pow(a, spec_->q - 2.0) * s;
  }

  const PotentialSpec* spec_;
  std::vector<double> bps_;
  std::vector<double> offset_;
};

struct Ivp {
  double p;
  double lambda;
  PieceLockedF f;

  double phi_p(double s) const {
    if (p == 2.0) return s;
    double a = std::abs(s);
    return a == 0.0 ? 0.0 : std::pow(a, p - 2.0) * s;
  }
  double phi_pprime(double w) const {
    if (p == 2.0) return w;
    double a = std::abs(w);
    return a == 0.0 ? 0.0 : std::pow(a, 1.0 / (p - 1.0) - 1.0) * w;
  }

  struct Y {
    double u, w;
  };

  Y rhs(Y y, int k) const { return {phi_pprime(y.w), -lambda * phi_p(y.u) - f(y.u, k)}; }

  Y rk4(Y y, double H, int k) const {
    Y k1 = rhs(y, k);
    Y k2 = rhs({y.u + 0.5 * H * k1.u, y.w + 0.5 * H * k1.w}, k);
    Y k3 = rhs({y.u + 0.5 * H * k2.u, y.w + 0.5 * H * k2.w}, k);
    Y k4 = rhs({y.u + H * k3.u, y.w + H * k3.w}, k);
    return {y.u + H / 6.0 * (k1.u + 2.0 * k2.u + 2.0 * k3.u + k4.u),
            y.w + H / 6.0 * (k1.w + 2.0 * k2.w + 2.0 * k3.w + k4.w)};
  }
};

int count_nodes(const std::vector<double>& u) {
  int nodes = 0;
  int last = 0;
  // skip the left endpoint and the (near-zero) right endpoint
  for (std::size_t i = 1; i + 1 < u.size(); ++i) {
    int s = u[i] > 0.0 ? 1 : (u[i] < 0.0 ? -1 : 0);
    if (s == 0) continue;
    if (last != 0 && s != last) ++nodes;
    last = s;
  }
  return nodes;
}

ShootingResult run_ivp(double p, double lambda, const PotentialSpec* spec, double length, double s,
                       const ShootingOptions& opts) {
  Ivp ivp{p, lambda, PieceLockedF(spec)};
  ShootingResult r;
  r.s0 = s;
  const double H = length / opts.steps;
  Ivp::Y y{0.0, ivp.phi_p(s)};
  int k = ivp.f.piece_of(0.0, s);
  double x = 0.0;
  r.x.reserve(opts.steps + 8);
  r.u.reserve(opts.steps + 8);
  r.x.push_back(0.0);
  r.u.push_back(0.0);
  int guard = 0;
  while (x < length && guard++ < 4 * opts.steps + 1000) {
    double step = std::min(H, length - x);
    if (length - x - step < 1e-12 * H) step = length - x;
    Ivp::Y y1 = ivp.rk4(y, step, k);
    if (!std::isfinite(y1.u) || !std::isfinite(y1.w)) throw std::runtime_error("shooting: IVP blew up");
    const double lo = ivp.f.lower(k), hi = ivp.f.upper(k);
    if (y1.u >= lo && y1.u <= hi) {
      y = y1;
      x = (step == length - x) ? length : x + step;
      r.x.push_back(x);
      r.u.push_back(y.u);
      continue;
    }
    // event location: bisect the step length for the crossing of the piece boundary
    const bool up = y1.u > hi;
    const double target = up ? hi : lo;
    double a = 0.0, b = step;
    for (int it = 0; it < 80 && b - a > 1e-16 * std::max(1.0, x); ++it) {
      double m = 0.5 * (a + b);
      double um = ivp.rk4(y, m, k).u;
      if ((up && um > target) || (!up && um < target)) b = m;
      else a = m;
    }
    y = ivp.rk4(y, b, k);
    y.u = target;
    x += b;
    r.x.push_back(x);
    r.u.push_back(y.u);
    k += up ? 1 : -1;
    ++r.breakpoint_crossings;
  }
  r.boundary_miss = std::abs(r.u.back());
  r.node_count = count_nodes(r.u);
  return r;
}

}  // namespace

double ShootingResult::at(double xq) const {
  if (x.empty()) return 0.0;
  if (xq <= x.front()) return u.front();
  if (xq >= x.back()) return u.back();
  auto it = std::upper_bound(x.begin(), x.end(), xq);
  std::size_t j = static_cast<std::size_t>(it - x.begin());
  double x0 = x[j - 1], x1 = x[j];
  double t = x1 > x0 ? (xq - x0) / (x1 - x0) : 0.0;
  return (1.0 - t) * u[j - 1] + t * u[j];
}

GridFn ShootingResult::on_mesh(const Mesh& m) const {
  return GridFn::sample(m, [this](double xq) { return at(xq); });
}

ShootingResult integrate_ivp(const Problem& prob, double s, const ShootingOptions& opts) {
  prob.validate();
  return run_ivp(prob.p, prob.lambda, &prob.spec, prob.mesh.length, s, opts);
}

ShootingResult shoot(const Problem& prob, int target_nodes, double slope_lo, double slope_hi,
                     const ShootingOptions& opts) {
  prob.validate();
  auto F = [&](double s) { return integrate_ivp(prob, s, opts).u.back(); };
  double a = slope_lo, b = slope_hi;
  double fa = F(a), fb = F(b);
  if (!(fa < 0.0 && fb > 0.0) && !(fa > 0.0 && fb < 0.0)) {
    throw std::invalid_argument("shooting: slope bracket does not straddle u(L) = 0");
  }
  for (int it = 0; it < opts.max_bisections; ++it) {
    double m = 0.5 * (a + b);
    if (m == a || m == b || std::abs(b - a) <= opts.slope_tol * std::max(std::abs(a), std::abs(b))) break;
    double fm = F(m);
    if (fm == 0.0) {
      a = b = m;
      break;
    }
    if ((fm > 0.0) == (fa > 0.0)) {
      a = m;
      fa = fm;
    } else {
      b = m;
    }
  }
  ShootingResult best = integrate_ivp(prob, a, opts);
  if (b != a) {
    ShootingResult other = integrate_ivp(prob, b, opts);
    if (other.boundary_miss < best.boundary_miss) best = std::move(other);
  }
  (void)target_nodes;  // node count is reported in the result; callers compare it
  return best;
}

std::optional<std::pair<double, double>> find_slope_bracket(const Problem& prob, int target_nodes, double s_min,
                                                            double s_max, int samples,
                                                            const ShootingOptions& opts) {
  if (s_min == 0.0 || std::abs(s_max) <= std::abs(s_min) || samples < 2) {
    throw std::invalid_argument("shooting: bad slope scan range");
  }
  const double sign = s_min > 0.0 ? 1.0 : -1.0;
  const double a = std::abs(s_min), b = std::abs(s_max);
  double prev_s = 0.0, prev_f = 0.0;
  int prev_nodes = -1;
  for (int i = 0; i < samples; ++i) {
    double s = sign * a * std::pow(b / a, static_cast<double>(i) / (samples - 1));
    ShootingResult r = integrate_ivp(prob, s, opts);
    double fs = r.u.back();
    if (i > 0 && prev_nodes == target_nodes && ((prev_f > 0.0) != (fs > 0.0))) {
      return std::make_pair(prev_s, s);
    }
    prev_s = s;
    prev_f = fs;
    prev_nodes = r.node_count;
  }
  return std::nullopt;
}

double shoot_eigenvalue(double p, double length, int target_nodes, double lambda_lo, double lambda_hi,
                        const ShootingOptions& opts) {
  if (!(p > 1.0) || !(length > 0.0) || !(lambda_lo < lambda_hi)) {
    throw std::invalid_argument("shoot_eigenvalue: bad arguments");
  }
  auto run = [&](double lam) { return run_ivp(p, lam, nullptr, length, 1.0, opts); };
  ShootingResult ra = run(lambda_lo), rb = run(lambda_hi);
  double fa = ra.u.back(), fb = rb.u.back();
  if ((fa > 0.0) == (fb > 0.0)) throw std::invalid_argument("shoot_eigenvalue: bracket does not straddle");
  double a = lambda_lo, b = lambda_hi;
  for (int it = 0; it < opts.max_bisections; ++it) {
    double m = 0.5 * (a + b);
    if (m == a || m == b || b - a <= 1e-15 * b) break;
    double fm = run(m).u.back();
    if ((fm > 0.0) == (fa > 0.0)) a = m;
    else b = m;
  }
  double lam = 0.5 * (a + b);
  int nodes = run(lam).node_count;
  if (nodes != target_nodes) {
    throw std::runtime_error("shoot_eigenvalue: eigenfunction in bracket has " + std::to_string(nodes) +
                             " interior zeros, expected " + std::to_string(target_nodes));
  }
  return lam;
}

// ---------------------------------------------------------------------------------------------

void SmallProblem::validate() const {
  const std::size_t d = static_cast<std::size_t>(dim);
  if (dim < 1 || dim > 3) throw std::invalid_argument("SmallProblem: dim must be in [1, 3]");
  if (Q.size() != d * d || b.size() != d || c.size() != d || k.size() != d) {
    throw std::invalid_argument("SmallProblem: size mismatch");
  }
  for (double ci : c) {
    if (!(ci >= 0.0)) throw std::invalid_argument("SmallProblem: kink weights must be nonnegative");
  }
}

double SmallProblem::value(const std::vector<double>& x) const {
  double v = 0.0;
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) v += 0.5 * (x[i] - b[i]) * Q[i * dim + j] * (x[j] - b[j]);
    v += c[i] * std::abs(x[i] - k[i]);
  }
  return v;
}

std::vector<Interval> SmallProblem::subdiff(const std::vector<double>& x) const {
  std::vector<Interval> box(dim);
  for (int i = 0; i < dim; ++i) {
    double g = 0.0;
    for (int j = 0; j < dim; ++j) g += Q[i * dim + j] * (x[j] - b[j]);
    if (x[i] > k[i]) box[i] = {g + c[i], g + c[i]};
    else if (x[i] < k[i]) box[i] = {g - c[i], g - c[i]};
    else box[i] = {g - c[i], g + c[i]};
  }
  return box;
}

SmallProblem SmallProblem::quadratic(std::vector<double> b) {
  SmallProblem sp;
  sp.dim = static_cast<int>(b.size());
  sp.Q.assign(b.size() * b.size(), 0.0);
  for (int i = 0; i < sp.dim; ++i) sp.Q[i * sp.dim + i] = 1.0;
  sp.b = std::move(b);
  sp.c.assign(sp.b.size(), 0.0);
  sp.k.assign(sp.b.size(), 0.0);
  return sp;
}

double cone_ball_support(const std::vector<double>& c_in, const std::vector<double>& x_in, int cone_sign) {
  // For the negative cone substitute d -> -d.
  std::vector<double> c = c_in, x = x_in;
  if (cone_sign < 0) {
    for (auto& v : c) v = -v;
    for (auto& v : x) v = -v;
  }
  const std::size_t d = c.size();
  // Maximizer is d(s)_i = min(x_i, c_i s) with s >= 0 chosen so that |d(s)| = 1, unless the
  // constraint d <= x caps the norm below 1.
  std::vector<std::size_t> order;
  double C2 = 0.0, sat = 0.0, lin = 0.0;
  for (std::size_t i = 0; i < d; ++i) {
    if (c[i] == 0.0) continue;
    if (c[i] > 0.0 && x[i] <= 0.0) {
      double xi = std::max(0.0, x[i]);
      sat += xi * xi;
      lin += c[i] * xi;
      continue;
    }
    C2 += c[i] * c[i];
    if (c[i] > 0.0) order.push_back(i);
  }
  if (C2 == 0.0 && lin == 0.0) return 0.0;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return x[a] / c[a] < x[b] / c[b]; });
  std::vector<char> saturated(d, 0);
  std::size_t next = 0;
  double s = std::numeric_limits<double>::infinity();
  while (true) {
    double s_star = C2 > 0.0 ? std::sqrt(std::max(0.0, 1.0 - sat) / C2) : std::numeric_limits<double>::infinity();
    if (next >= order.size()) {
      s = s_star;
      break;
    }
    std::size_t i = order[next];
    double thr = x[i] / c[i];
    if (s_star <= thr) {
      s = s_star;
      break;
    }
    saturated[i] = 1;
    sat += x[i] * x[i];
    lin += c[i] * x[i];
    C2 -= c[i] * c[i];
    if (C2 < 0.0) C2 = 0.0;
    ++next;
  }
  double val = lin;
  if (std::isfinite(s)) {
    for (std::size_t i = 0; i < d; ++i) {
      if (c[i] == 0.0 || saturated[i] || (c[i] > 0.0 && x[i] <= 0.0)) continue;
      val += c[i] * c[i] * s;
    }
  }
  return std::max(0.0, val);
}

double cone_ball_support_sampled(const std::vector<double>& c, const std::vector<double>& x, int cone_sign,
                                 int samples_per_dim) {
  const int d = static_cast<int>(c.size());
  const double shell = 1e-9;
  auto feasible = [&](const std::vector<double>& dv) {
    double nn = 0.0;
    for (int i = 0; i < d; ++i) {
      nn += dv[i] * dv[i];
      double y = x[i] - dv[i];
      if (cone_sign > 0 ? y < 0.0 : y > 0.0) return false;
    }
    return nn <= (1.0 - shell) * (1.0 - shell);
  };
  auto score = [&](const std::vector<double>& dv) {
    double v = 0.0;
    for (int i = 0; i < d; ++i) v += c[i] * dv[i];
    return v;
  };
  std::vector<double> best(d, 0.0), cur(d);
  double best_v = 0.0;
  double lo = -1.0, width = 2.0;
  std::vector<double> center(d, 0.0);
  // The objective is flat to second order along the sphere, so each refinement window spans
  // +-10 grid spacings of the previous level.
  for (int level = 0; level < 8; ++level) {
    const int n = samples_per_dim;
    long total = 1;
    for (int i = 0; i < d; ++i) total *= n;
    for (long idx = 0; idx < total; ++idx) {
      long r = idx;
      for (int i = 0; i < d; ++i) {
        int j = static_cast<int>(r % n);
        r /= n;
        cur[i] = (level == 0 ? lo : center[i] - 0.5 * width) + width * j / (n - 1);
      }
      if (!feasible(cur)) continue;
      double v = score(cur);
      if (v > best_v) {
        best_v = v;
        best = cur;
      }
    }
    center = best;
    width = 20.0 * width / (n - 1);
  }
  return best_v;
}

double brute_m(const SmallProblem& sp, const std::vector<double>& x) {
  auto box = sp.subdiff(x);
  double s = 0.0;
  for (const auto& iv : box) {
    double v = iv.clamp(0.0);
    s += v * v;
  }
  return std::sqrt(s);
}

double brute_mP(const SmallProblem& sp, const std::vector<double>& x, int cone_sign) {
  auto box = sp.subdiff(x);
  const int d = sp.dim;
  std::vector<double> xs(d);
  for (int i = 0; i < d; ++i) xs[i] = box[i].clamp(0.0);
  double best = cone_ball_support(xs, x, cone_sign);
  if (best == 0.0) return 0.0;

  std::vector<int> free;
  for (int i = 0; i < d; ++i) {
    if (!box[i].degenerate()) free.push_back(i);
  }
  if (free.empty()) return best;

  // Coarse grid over the nondegenerate coordinates, then shrinking local grids around the best
  // candidate. S is convex in x*, so the local search cannot get stuck away from the minimum.
  const int nf = static_cast<int>(free.size());
  std::vector<double> lo(nf), width(nf), arg(nf);
  for (int j = 0; j < nf; ++j) {
    lo[j] = box[free[j]].lo;
    width[j] = box[free[j]].hi - box[free[j]].lo;
    arg[j] = xs[free[j]];
  }
  std::vector<double> cand = xs;
  auto sweep = [&](int n, const std::vector<double>& l, const std::vector<double>& w) {
    long total = 1;
    for (int j = 0; j < nf; ++j) total *= n;
    std::vector<double> win = arg;
    for (long idx = 0; idx < total; ++idx) {
      long r = idx;
      for (int j = 0; j < nf; ++j) {
        int t = static_cast<int>(r % n);
        r /= n;
        double v = l[j] + w[j] * t / (n - 1);
        cand[free[j]] = box[free[j]].clamp(v);
      }
      double s = cone_ball_support(cand, x, cone_sign);
      if (s < best) {
        best = s;
        for (int j = 0; j < nf; ++j) win[j] = cand[free[j]];
      }
    }
    arg = win;
  };
  const int coarse = nf <= 2 ? 101 : 41;
  sweep(coarse, lo, width);
  std::vector<double> spacing(nf), l(nf), w(nf);
  for (int j = 0; j < nf; ++j) spacing[j] = width[j] / (coarse - 1);
  for (int round = 0; round < 6 && best > 0.0; ++round) {
    for (int j = 0; j < nf; ++j) {
      l[j] = arg[j] - 2.0 * spacing[j];
      w[j] = 4.0 * spacing[j];
      spacing[j] = w[j] / 10.0;
    }
    sweep(11, l, w);
  }
  return best;
}

InvarianceVerdict check_invariance_condition(const SmallProblem& sp, const std::vector<double>& x, int cone_sign) {
  InvarianceVerdict v;
  auto box = sp.subdiff(x);
  const int d = sp.dim;
  // reflect into the nonnegative orthant
  std::vector<double> xr(d);
  std::vector<Interval> br(d);
  for (int i = 0; i < d; ++i) {
    xr[i] = cone_sign > 0 ? x[i] : -x[i];
    br[i] = cone_sign > 0 ? box[i] : Interval{-box[i].hi, -box[i].lo};
  }
  v.schauder = true;
  for (int i = 0; i < d; ++i) {
    if (xr[i] == 0.0) v.on_boundary = true;
    if (xr[i] - br[i].hi < 0.0) v.schauder = false;
  }
  // A nonzero z* in -N_P(x) has z*_i = 0 where x_i > 0 and z*_i >= 0 where x_i = 0.
  bool zero_ok = true, positive_possible = false;
  for (int i = 0; i < d; ++i) {
    if (xr[i] > 0.0) {
      if (!br[i].contains(0.0)) zero_ok = false;
    } else {
      if (br[i].hi < 0.0) zero_ok = false;
      if (br[i].hi > 0.0) positive_possible = true;
    }
  }
  v.outward = !(zero_ok && positive_possible);
  v.implication = !v.schauder || v.outward;
  return v;
}

// ---------------------------------------------------------------------------------------------

std::vector<SlopeSample> make_slope_samples(std::uint64_t seed, long count) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  std::vector<SlopeSample> out;
  out.reserve(static_cast<std::size_t>(std::max(0L, count)));
  for (long s = 0; s < count; ++s) {
    SlopeSample smp;
    const int d = (s % 2 == 0) ? 2 : 3;
    smp.cone_sign = (s / 2) % 2 == 0 ? 1 : -1;
    SmallProblem& sp = smp.sp;
    sp.dim = d;
    // Q = I - S with S >= 0 entrywise and row sums below 1: positive definite, and (I - grad)
    // maps the orthant into itself once Qb >= c.
    sp.Q.assign(d * d, 0.0);
    for (int i = 0; i < d; ++i) {
      sp.Q[i * d + i] = 1.0 - 0.5 * U(rng);
      for (int j = i + 1; j < d; ++j) {
        double o = 0.1 * U(rng);
        sp.Q[i * d + j] = sp.Q[j * d + i] = -o;
      }
    }
    sp.b.resize(d);
    sp.c.resize(d);
    sp.k.resize(d);
    for (int i = 0; i < d; ++i) sp.b[i] = 2.0 * U(rng);
    for (int i = 0; i < d; ++i) {
      double qb = 0.0;
      for (int j = 0; j < d; ++j) qb += sp.Q[i * d + j] * sp.b[j];
      sp.c[i] = U(rng) * std::max(0.0, qb);
      sp.k[i] = U(rng) < 0.5 ? 0.0 : 2.0 * U(rng);
    }
    const int type = static_cast<int>(s % 5);
    std::vector<double> x(d);
    for (int i = 0; i < d; ++i) x[i] = 2.0 * U(rng);
    if (type == 1) {
      int zeros = 1 + static_cast<int>(U(rng) * (d - 1));
      for (int z = 0; z < zeros; ++z) x[static_cast<int>(U(rng) * d) % d] = 0.0;
    } else if (type == 2) {
      // kinks at the center: b is a critical point
      sp.k = sp.b;
      x = sp.b;
    } else if (type == 3) {
      int i = static_cast<int>(U(rng) * d) % d;
      x[i] = sp.k[i];
    } else if (type == 4) {
      // boundary point sitting on a kink at zero
      int i = static_cast<int>(U(rng) * d) % d;
      sp.k[i] = 0.0;
      x[i] = 0.0;
    }
    if (smp.cone_sign < 0) {
      for (auto& v : sp.b) v = -v;
      for (auto& v : sp.k) v = -v;
      for (auto& v : x) v = -v;
    }
    smp.x = std::move(x);
    out.push_back(std::move(smp));
  }
  return out;
}

SlopeVerdict evaluate_slope_sample(const SlopeSample& s) {
  SlopeVerdict v;
  v.m = brute_m(s.sp, s.x);
  v.mP = brute_mP(s.sp, s.x, s.cone_sign);
  v.margin = v.mP - std::min(0.5, v.m) * v.m;
  v.inequality_ok = v.margin >= -kGridTolerance;
  const bool mz = v.m <= kZeroThreshold;
  const bool pz = v.mP <= kZeroThreshold;
  // m in (threshold, threshold / (1/2 ... )) cannot be resolved by a threshold test; the
  // inequality forces mP > threshold only once min(1/2, m) m exceeds it.
  if (!mz && pz && v.m * std::min(0.5, v.m) <= kZeroThreshold) {
    v.equivalence_indeterminate = true;
  } else {
    v.equivalence_ok = (mz == pz);
  }
  v.inv = check_invariance_condition(s.sp, s.x, s.cone_sign);
  return v;
}

namespace {

SlopeSuiteResult summarize(const std::vector<SlopeVerdict>& vs) {
  SlopeSuiteResult r;
  r.samples = static_cast<long>(vs.size());
  r.min_margin = std::numeric_limits<double>::infinity();
  for (long i = 0; i < r.samples; ++i) {
    const auto& v = vs[i];
    bool bad = false;
    if (!v.inequality_ok) {
      ++r.inequality_violations;
      bad = true;
    }
    if (v.equivalence_indeterminate) ++r.equivalence_indeterminate;
    else if (!v.equivalence_ok) {
      ++r.equivalence_violations;
      bad = true;
    }
    if (v.m <= kZeroThreshold) ++r.zero_slope_samples;
    if (v.inv.on_boundary) {
      ++r.boundary_samples;
      if (v.inv.schauder) ++r.schauder_premise;
      if (!v.inv.implication) {
        ++r.implication_violations;
        bad = true;
      }
    }
    r.min_margin = std::min(r.min_margin, v.margin);
    if (bad && !r.first_violation) r.first_violation = i;
  }
  if (r.samples == 0) r.min_margin = 0.0;
  return r;
}

}  // namespace

SlopeSuiteResult run_slope_suite(const std::vector<SlopeSample>& samples) {
  std::vector<SlopeVerdict> vs(samples.size());
  const long n = static_cast<long>(samples.size());
#pragma omp parallel for schedule(dynamic, 16)
  for (long i = 0; i < n; ++i) vs[i] = evaluate_slope_sample(samples[i]);
  return summarize(vs);
}

SlopeSuiteResult run_slope_suite_serial(const std::vector<SlopeSample>& samples) {
  std::vector<SlopeVerdict> vs(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) vs[i] = evaluate_slope_sample(samples[i]);
  return summarize(vs);
}

}  // namespace lipflow::oracle
