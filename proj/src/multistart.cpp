#include "lipflow/multistart.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace lipflow {

namespace {

double sign_tol(const GridFn& u) { return 1e-10 * std::max(1.0, u.sup_norm()); }

FlowConfig predicate_config(const FlowConfig& cfg) {
  FlowConfig p = cfg;
  // Energy is non-increasing and vanishes at the origin: once negative, capture is impossible.
  p.phi_floor = 0.0;
  p.trace_stride = 0;
  return p;
}

struct Bracket {
  bool ok = false;
  double lo = 0.0;  // captured
  double hi = 0.0;  // escaped
};

// Brackets the basin boundary on the ray s -> s * dir around s0, then bisects to tol.
Bracket bracket_on_ray(const Problem& prob, const GridFn& dir, double s0, double tol, const FlowConfig& pcfg,
                       FlowStats& stats, std::vector<BisectionStep>* history) {
  auto captured = [&](double s) {
    const bool c = captured_from(prob, s * dir, pcfg, &stats);
    if (history) history->push_back({s, c});
    return c;
  };
  Bracket b;
  double step = 1e-3 * s0;
  constexpr int max_expand = 60;
  if (captured(s0)) {
    b.lo = s0;
    b.hi = s0 + step;
    int k = 0;
    while (captured(b.hi)) {
      if (++k > max_expand) return b;
      b.lo = b.hi;
      step *= 2.0;
      b.hi += step;
    }
  } else {
    b.hi = s0;
    b.lo = s0 - step;
    int k = 0;
    while (!captured(b.lo)) {
      if (++k > max_expand || b.lo <= 0.0) return b;
      b.hi = b.lo;
      step *= 2.0;
      b.lo = std::max(b.lo - step, 0.5 * b.lo);
    }
  }
  while (b.hi - b.lo > tol) {
    const double mid = 0.5 * (b.lo + b.hi);
    if (mid <= b.lo || mid >= b.hi) break;
    if (captured(mid)) b.lo = mid;
    else b.hi = mid;
  }
  b.ok = true;
  return b;
}

SolutionRecord make_record(const Problem& prob, const GridFn& u, double theta, double t_star) {
  SolutionRecord r;
  r.u = u;
  r.phi = phi(prob, u);
  r.residual = residual_m(prob, u);
  r.sign = classify_sign(u, sign_tol(u));
  r.theta = theta;
  r.t_star = t_star;
  r.interior_zeros = count_sign_changes(u);
  return r;
}

// Edge tracking from a launch point near the basin boundary, then Newton if the flow stalled.
SolutionRecord follow_to_critical(const Problem& prob, const GridFn& launch, double theta, double t_star,
                                  const FlowConfig& cfg, const MultistartConfig& mcfg, FlowStats& stats,
                                  std::vector<double>& edge_residuals, bool mixed_only) {
  EdgeTrackResult et = track_edge(prob, launch, cfg, mcfg, mixed_only);
  stats.merge(et.stats);
  edge_residuals = et.round_residuals;

  SolutionRecord rec = make_record(prob, et.best.u, theta, t_star);
  rec.edge_rounds = et.rounds;
  rec.flow_residual = et.best.residual;
  if (!et.reached && mcfg.polish && rec.residual > cfg.eps_crit) {
    const PolishResult pr = polish_critical(prob, et.best.u, 1e-3 * cfg.eps_crit, mcfg.polish_max_iter, cfg.newton);
    if (pr.converged) {
      const int edge_rounds = rec.edge_rounds;
      const double flow_residual = rec.flow_residual;
      rec = make_record(prob, pr.u, theta, t_star);
      rec.edge_rounds = edge_rounds;
      rec.flow_residual = flow_residual;
      rec.polished = true;
      rec.newton_iterations = pr.iterations;
    }
  }
  return rec;
}

// Launch along +u1 or -u1 (sign = +1 / -1); exact negation keeps odd problems symmetric.
BranchReport cone_branch(const Problem& prob, const EigenPair& e1, const EigenPair& e2, double sign,
                         SignClass expected, const FlowConfig& cfg, const MultistartConfig& mcfg, FlowStats& stats) {
  BranchReport br;
  br.name = to_string(expected);
  const double theta = sign > 0.0 ? 0.0 : std::numbers::pi;
  br.ray = ray_escape_radius(prob, plane_point(e1, e2, sign, 0.0, prob.p, prob.mesh), cfg, mcfg);
  br.ray.theta = theta;
  stats.merge(br.ray.stats);
  if (!br.ray.ok) {
    br.error = "ray bisection failed: " + br.ray.error;
    return br;
  }
  const GridFn launch = (br.ray.t_star + mcfg.margin_factor * mcfg.bisect_tol) * br.ray.dir.u;
  SolutionRecord rec = follow_to_critical(prob, launch, theta, br.ray.t_star, cfg, mcfg, stats, br.edge_residuals, false);
  std::ostringstream os;
  if (rec.residual > cfg.eps_crit) os << "residual " << rec.residual << " above eps_crit; ";
  if (rec.sign != expected) os << "terminal state is " << to_string(rec.sign) << "; ";
  br.error = os.str();
  br.ok = br.error.empty();
  br.record = std::move(rec);
  return br;
}

}  // namespace

void MultistartConfig::validate() const {
  if (sweep < 4) throw std::invalid_argument("multistart: sweep needs at least 4 directions");
  if (refine_depth < 0) throw std::invalid_argument("multistart: refine_depth must be nonnegative");
  if (!(bisect_tol > 0.0)) throw std::invalid_argument("multistart: bisect_tol must be positive");
  if (!(margin_factor >= 0.0)) throw std::invalid_argument("multistart: margin_factor must be nonnegative");
  if (!(t_min > 0.0) || !(t_start > t_min) || !(t_cap > t_start))
    throw std::invalid_argument("multistart: need 0 < t_min < t_start < t_cap");
  if (edge_rounds < 1) throw std::invalid_argument("multistart: edge_rounds must be at least 1");
}

PlanePoint plane_point(const EigenPair& e1, const EigenPair& e2, double a, double b, double p, const Mesh& m) {
  PlanePoint pp;
  pp.u = a == 0.0 ? b * e2.u : (b == 0.0 ? a * e1.u : a * e1.u + b * e2.u);
  const double nrm = norm_w1p(pp.u, p, m);
  pp.u *= 1.0 / nrm;
  pp.a = a / nrm;
  pp.b = b / nrm;
  return pp;
}

PlanePoint plane_direction(const EigenPair& e1, const EigenPair& e2, double theta, double p, const Mesh& m) {
  return plane_point(e1, e2, std::cos(theta), std::sin(theta), p, m);
}

void FlowStats::add(const FlowTrace& tr) {
  ++flows;
  accepted_steps += tr.steps;
  monotonicity_violations += tr.monotonicity_violations;
  max_phi_increase = std::max(max_phi_increase, tr.max_phi_increase);
  min_nodal = std::min(min_nodal, tr.min_nodal);
  max_nodal = std::max(max_nodal, tr.max_nodal);
}

void FlowStats::merge(const FlowStats& o) {
  flows += o.flows;
  accepted_steps += o.accepted_steps;
  monotonicity_violations += o.monotonicity_violations;
  max_phi_increase = std::max(max_phi_increase, o.max_phi_increase);
  min_nodal = std::min(min_nodal, o.min_nodal);
  max_nodal = std::max(max_nodal, o.max_nodal);
}

bool captured_from(const Problem& prob, const GridFn& v0, const FlowConfig& cfg, FlowStats* stats) {
  const FlowTrace tr = integrate(prob, v0, predicate_config(cfg));
  if (stats) stats->add(tr);
  return tr.status == FlowStatus::reached_origin_basin;
}

RayResult ray_escape_radius(const Problem& prob, const PlanePoint& dir, const FlowConfig& cfg,
                            const MultistartConfig& mcfg) {
  mcfg.validate();
  RayResult r;
  r.dir = dir;
  const FlowConfig pcfg = predicate_config(cfg);
  auto captured = [&](double t) {
    const bool c = captured_from(prob, t * dir.u, pcfg, &r.stats);
    r.history.push_back({t, c});
    return c;
  };

  if (!captured(mcfg.t_min)) {
    r.error = "start at t_min is not captured by the origin";
    return r;
  }
  double lo = mcfg.t_min, t = mcfg.t_start;
  while (captured(t)) {
    lo = t;
    t *= 2.0;
    if (t > mcfg.t_cap) {
      r.error = "no escape below t_cap";
      return r;
    }
  }
  double hi = t;
  while (hi - lo > mcfg.bisect_tol) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (captured(mid)) lo = mid;
    else hi = mid;
  }
  r.t_lo = lo;
  r.t_hi = hi;
  r.t_star = 0.5 * (lo + hi);
  r.verified = captured(r.t_star - mcfg.bisect_tol) && !captured(r.t_star + mcfg.bisect_tol);
  r.ok = true;
  if (!r.verified) {
    // Near higher-index saddles rounding makes the predicate noisy at the bisect_tol scale.
    const double margin = mcfg.margin_factor * mcfg.bisect_tol;
    r.margin_consistent = captured(r.t_star - margin) && !captured(r.t_star + margin);
    r.error = r.margin_consistent ? "predicate noisy at bisect_tol, consistent at the launch margin"
                                  : "predicate is not monotone near t*";
  } else {
    r.margin_consistent = true;
  }
  return r;
}

EdgeTrackResult track_edge(const Problem& prob, const GridFn& launch, const FlowConfig& cfg,
                           const MultistartConfig& mcfg, bool mixed_only) {
  EdgeTrackResult res;
  FlowConfig ecfg = predicate_config(cfg);
  res.best = make_state(prob, launch, 0.0, ecfg);
  GridFn cur = launch;
  int stale = 0;
  for (int round = 0; round < mcfg.edge_rounds; ++round) {
    const FlowTrace tr = integrate(prob, cur, ecfg);
    res.stats.add(tr);
    ++res.rounds;
    if (mixed_only && !tr.has_mixed) break;
    const FlowState& best = mixed_only ? tr.best_mixed : tr.best;
    res.round_residuals.push_back(best.residual);
    if (tr.status == FlowStatus::critical_point && tr.terminal.residual <= cfg.eps_crit &&
        (!mixed_only || tr.terminal.cone == ConeStatus::mixed)) {
      res.best = tr.terminal;
      res.reached = true;
      break;
    }
    if (best.residual < (1.0 - 1e-3) * res.best.residual) {
      res.best = best;
      stale = 0;
    } else if (++stale >= mcfg.edge_patience) {
      break;
    }

    const double s0 = norm_w1p(best.u, prob.p, prob.mesh);
    if (!(s0 > 0.0)) break;
    const GridFn dir = (1.0 / s0) * best.u;
    const Bracket b = bracket_on_ray(prob, dir, s0, mcfg.bisect_tol, ecfg, res.stats, nullptr);
    if (!b.ok) break;
    cur = (0.5 * (b.lo + b.hi) + mcfg.margin_factor * mcfg.bisect_tol) * dir;
  }
  return res;
}

PolishResult polish_critical(const Problem& prob, const GridFn& u0, double tol, int max_iter,
                             const NewtonOpts& newton) {
  const Mesh& m = prob.mesh;
  PolishResult out;
  GridFn u = u0;
  GridFn G = min_norm_residual(prob, u);
  double rn = norm_h(G, m);
  double gscale = 0.0;
  for (double gk : grad(u, m)) gscale = std::max(gscale, std::abs(gk));
  const double eps_jac = prob.p == 2.0 ? 0.0 : 1e-8 * std::max(gscale, 1e-300);
  const double ufloor = 1e-8 * std::max(u.sup_norm(), 1e-300);

  int it = 0;
  for (; it < max_iter && rn > tol; ++it) {
    Tridiag J = plap_jacobian(u, prob.p, m, eps_jac);
    for (int i = 0; i < m.n; ++i) {
      double lin = prob.lambda;
      if (prob.p != 2.0) lin *= (prob.p - 1.0) * std::pow(std::max(std::abs(u[i]), ufloor), prob.p - 2.0);
      double df = prob.spec.df(u[i]);
      if (!std::isfinite(df)) df = 0.0;
      J.diag[i] -= lin + df;
    }
    std::vector<double> d = G.vec();
    if (!J.solve(d)) break;
    const GridFn step(std::move(d));
    bool accepted = false;
    double alpha = 1.0;
    for (int bt = 0; bt < newton.max_backtracks; ++bt, alpha *= 0.5) {
      GridFn trial = u - alpha * step;
      GridFn Gt = min_norm_residual(prob, trial);
      const double rt = norm_h(Gt, m);
      if (std::isfinite(rt) && rt <= (1.0 - newton.armijo * alpha) * rn) {
        u = std::move(trial);
        G = std::move(Gt);
        rn = rt;
        accepted = true;
        break;
      }
    }
    if (!accepted) break;
  }
  out.u = std::move(u);
  out.residual = rn;
  out.iterations = it;
  out.converged = rn <= tol;
  return out;
}

int count_sign_changes(const GridFn& u) {
  const double tol = sign_tol(u);
  int changes = 0, last = 0;
  for (double v : u.values()) {
    const int s = v > tol ? 1 : (v < -tol ? -1 : 0);
    if (s == 0) continue;
    if (last != 0 && s != last) ++changes;
    last = s;
  }
  return changes;
}

RayOutcome probe_direction(const Problem& prob, const EigenPair& e1, const EigenPair& e2, double theta, int level,
                           const FlowConfig& cfg, const MultistartConfig& mcfg) {
  RayOutcome o;
  o.theta = theta;
  o.level = level;
  RayResult ray = ray_escape_radius(prob, plane_direction(e1, e2, theta, prob.p, prob.mesh), cfg, mcfg);
  o.stats = ray.stats;
  if (!ray.ok) {
    o.error = ray.error;
    return o;
  }
  o.t_star = ray.t_star;
  o.verified = ray.verified;
  const GridFn launch = (ray.t_star + mcfg.margin_factor * mcfg.bisect_tol) * ray.dir.u;
  const FlowTrace tr = integrate(prob, launch, predicate_config(cfg));
  o.stats.add(tr);
  o.ok = true;
  o.outcome = tr.first_cone == ConeStatus::in_P     ? SignClass::positive
              : tr.first_cone == ConeStatus::in_negP ? SignClass::negative
                                                     : SignClass::sign_changing;
  o.best_residual = tr.best.residual;
  o.best_phi = tr.best.phi;
  o.has_mixed = tr.has_mixed;
  if (tr.has_mixed) {
    o.best_mixed_residual = tr.best_mixed.residual;
    o.best_mixed = tr.best_mixed.u;
  }
  return o;
}

std::vector<RayOutcome> sweep_rays(const Problem& prob, const EigenPair& e1, const EigenPair& e2,
                                   const std::vector<double>& thetas, const FlowConfig& cfg,
                                   const MultistartConfig& mcfg) {
  std::vector<RayOutcome> out(thetas.size());
  const long n = static_cast<long>(thetas.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (long k = 0; k < n; ++k) out[k] = probe_direction(prob, e1, e2, thetas[k], 0, cfg, mcfg);
  return out;
}

std::vector<RayOutcome> sweep_rays_serial(const Problem& prob, const EigenPair& e1, const EigenPair& e2,
                                          const std::vector<double>& thetas, const FlowConfig& cfg,
                                          const MultistartConfig& mcfg) {
  std::vector<RayOutcome> out;
  out.reserve(thetas.size());
  for (double th : thetas) out.push_back(probe_direction(prob, e1, e2, th, 0, cfg, mcfg));
  return out;
}

ThreeSolutions find_three(const Problem& prob, const FlowConfig& cfg, const MultistartConfig& mcfg) {
  prob.validate();
  const EigenPair e1 = eigen_first(prob.p, prob.mesh, cfg.newton);
  const EigenPair e2 = eigen_second_1d(prob.p, prob.mesh, cfg.newton);
  return find_three(prob, e1, e2, cfg, mcfg);
}

ThreeSolutions find_three(const Problem& prob, const EigenPair& e1, const EigenPair& e2, const FlowConfig& cfg,
                          const MultistartConfig& mcfg) {
  prob.validate();
  cfg.validate();
  mcfg.validate();
  if (!(prob.lambda > 0.0 && prob.lambda < e1.lambda))
    throw std::invalid_argument("find_three: need 0 < lambda < lambda_1 of the mesh");

  ThreeSolutions out;
  out.e1 = e1;
  out.e2 = e2;

  FlowStats pos_stats;
  out.positive = cone_branch(prob, e1, e2, 1.0, SignClass::positive, cfg, mcfg, pos_stats);
  out.positive_min_nodal = pos_stats.min_nodal;
  out.stats.merge(pos_stats);
  out.negative = cone_branch(prob, e1, e2, -1.0, SignClass::negative, cfg, mcfg, out.stats);

  // Sign-changing branch: sweep, refine between one-signed outcomes, then follow candidates.
  BranchReport& sc = out.sign_changing;
  sc.name = to_string(SignClass::sign_changing);
  const int N = mcfg.sweep;
  std::vector<double> thetas(N);
  for (int k = 0; k < N; ++k) thetas[k] = 2.0 * std::numbers::pi * k / N;
  out.sweep = sweep_rays(prob, e1, e2, thetas, cfg, mcfg);
  for (const auto& o : out.sweep) out.stats.merge(o.stats);

  auto is_candidate = [](const RayOutcome& o) { return o.ok && o.outcome == SignClass::sign_changing; };
  const bool any_mixed = std::any_of(out.sweep.begin(), out.sweep.end(), is_candidate);
  if (!any_mixed) {
    std::vector<int> usable;
    for (int k = 0; k < N; ++k)
      if (out.sweep[k].ok) usable.push_back(k);
    const int U = static_cast<int>(usable.size());
    for (int idx = 0; idx < U && U > 1; ++idx) {
      const RayOutcome a = out.sweep[usable[idx]];
      const RayOutcome b = out.sweep[usable[(idx + 1) % U]];
      if (a.outcome == b.outcome) continue;
      double ta = a.theta, tb = b.theta;
      if (tb <= ta) tb += 2.0 * std::numbers::pi;
      SignClass ca = a.outcome;
      for (int level = 1; level <= mcfg.refine_depth; ++level) {
        RayOutcome mid = probe_direction(prob, e1, e2, 0.5 * (ta + tb), level, cfg, mcfg);
        out.stats.merge(mid.stats);
        out.sweep.push_back(mid);
        if (is_candidate(mid)) break;
        if (!mid.ok || mid.outcome == ca) {
          ta = 0.5 * (ta + tb);
        } else {
          tb = 0.5 * (ta + tb);
        }
      }
    }
  }

  // Candidates: the sign-changing states closest to criticality seen by any probe.
  std::vector<const RayOutcome*> cands;
  for (const auto& o : out.sweep)
    if (o.ok && o.has_mixed) cands.push_back(&o);
  std::stable_sort(cands.begin(), cands.end(), [](const RayOutcome* x, const RayOutcome* y) {
    return x->best_mixed_residual < y->best_mixed_residual;
  });
  if (cands.empty()) sc.error = "no sign-changing state in the sweep (resolution " + std::to_string(N) +
                                " directions, refinement depth " + std::to_string(mcfg.refine_depth) + ")";

  const int tries = std::min<int>(mcfg.max_candidates, static_cast<int>(cands.size()));
  for (int c = 0; c < tries && !sc.ok; ++c) {
    const RayOutcome& cand = *cands[c];
    SolutionRecord rec =
        follow_to_critical(prob, cand.best_mixed, cand.theta, cand.t_star, cfg, mcfg, out.stats, sc.edge_residuals, true);
    const bool good = rec.residual <= cfg.eps_crit && rec.sign == SignClass::sign_changing;
    if (good || !sc.record) sc.record = rec;
    if (good) {
      sc.ok = true;
      sc.error.clear();
      sc.ray.theta = cand.theta;
      sc.ray.t_star = cand.t_star;
      sc.ray.ok = true;
      sc.ray.verified = cand.verified;
    } else {
      std::ostringstream os;
      os << "candidate theta=" << rec.theta << " ended " << to_string(rec.sign) << " with residual " << rec.residual;
      sc.error = os.str();
    }
  }

  if (out.positive.record && out.negative.record && out.sign_changing.record) {
    const SolutionRecord* r[3] = {&*out.positive.record, &*out.negative.record, &*out.sign_changing.record};
    bool distinct = true;
    for (int i = 0; i < 3; ++i)
      for (int j = i + 1; j < 3; ++j) {
        if (r[i]->sign == r[j]->sign) distinct = false;
        if (norm_w1p(r[i]->u - r[j]->u, prob.p, prob.mesh) < 10.0 * cfg.eps_crit) distinct = false;
      }
    out.distinct = distinct;
  }
  return out;
}

}  // namespace lipflow
