#include "lipflow/functional.hpp"

#include <cmath>
#include <stdexcept>

#include "lipflow/plap.hpp"

namespace lipflow {

void Problem::validate() const {
  if (!(p > 1.0)) throw std::invalid_argument("problem: need p > 1");
  if (!(lambda >= 0.0)) throw std::invalid_argument("problem: need lambda >= 0");
  if (mesh.n < 2 || !(mesh.h > 0.0)) throw std::invalid_argument("problem: invalid mesh");
  spec.validate();
}

std::string to_string(SelectionRule r) {
  switch (r) {
    case SelectionRule::min_norm: return "min_norm";
    case SelectionRule::midpoint: return "midpoint";
    case SelectionRule::lower: return "lower";
    case SelectionRule::upper: return "upper";
  }
  return "unknown";
}

SelectionRule selection_rule_from_string(const std::string& s) {
  if (s == "min_norm") return SelectionRule::min_norm;
  if (s == "midpoint") return SelectionRule::midpoint;
  if (s == "lower") return SelectionRule::lower;
  if (s == "upper") return SelectionRule::upper;
  throw std::invalid_argument("unknown selection rule '" + s + "'");
}

double phi(const Problem& prob, const GridFn& u) {
  const Mesh& m = prob.mesh;
  check_conforms(u, m);
  double grad_term = 0.0;
  for (double gk : grad(u, m)) grad_term += std::pow(std::abs(gk), prob.p);
  double lp = 0.0, jsum = 0.0;
  for (int i = 0; i < m.n; ++i) {
    lp += std::pow(std::abs(u[i]), prob.p);
    jsum += j_eval(prob.spec, m.node(i), u[i]);
  }
  return m.h * (grad_term / prob.p - prob.lambda * lp / prob.p - jsum);
}

GridFn smooth_part(const Problem& prob, const GridFn& u) {
  GridFn c = apply_plap(u, prob.p, prob.mesh);
  for (std::size_t i = 0; i < u.size(); ++i) c[i] -= prob.lambda * phi_p(u[i], prob.p);
  return c;
}

SubgradientSelection select_w(const Problem& prob, const GridFn& u, SelectionRule rule) {
  const Mesh& m = prob.mesh;
  check_conforms(u, m);
  GridFn w(u.size());
  GridFn c;
  if (rule == SelectionRule::min_norm) c = smooth_part(prob, u);
  for (int i = 0; i < m.n; ++i) {
    const Interval I = clarke_interval(prob.spec, m.node(i), u[i]);
    switch (rule) {
      case SelectionRule::min_norm: w[i] = I.clamp(c[i]); break;
      case SelectionRule::midpoint: w[i] = I.mid(); break;
      case SelectionRule::lower: w[i] = I.lo; break;
      case SelectionRule::upper: w[i] = I.hi; break;
    }
  }
  return {std::move(w)};
}

bool is_valid_selection(const Problem& prob, const GridFn& u, const SubgradientSelection& w, double tol) {
  if (w.w.size() != u.size()) return false;
  for (int i = 0; i < prob.mesh.n; ++i)
    if (!clarke_interval(prob.spec, prob.mesh.node(i), u[i]).contains(w.w[i], tol)) return false;
  return true;
}

GridFn subdiff_element(const Problem& prob, const GridFn& u, const SubgradientSelection& w) {
  check_conforms(w.w, prob.mesh);
  GridFn g = smooth_part(prob, u);
  g -= w.w;
  return g;
}

GridFn min_norm_residual(const Problem& prob, const GridFn& u) {
  GridFn g = smooth_part(prob, u);
  for (int i = 0; i < prob.mesh.n; ++i) {
    const Interval I = clarke_interval(prob.spec, prob.mesh.node(i), u[i]);
    g[i] -= I.clamp(g[i]);
  }
  return g;
}

double residual_m(const Problem& prob, const GridFn& u) { return norm_h(min_norm_residual(prob, u), prob.mesh); }

}  // namespace lipflow
