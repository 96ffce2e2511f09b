#pragma once

#include <string>

#include "lipflow/grid.hpp"
#include "lipflow/potential.hpp"

namespace lipflow {

/// Discrete Dirichlet inclusion -Delta_p u - lambda |u|^(p-2) u in dj(x, u).
struct Problem {
  Mesh mesh;
  double p = 2.0;
  double lambda = 0.0;
  PotentialSpec spec;

  void validate() const;
};

enum class SelectionRule { min_norm, midpoint, lower, upper };

std::string to_string(SelectionRule r);
SelectionRule selection_rule_from_string(const std::string& s);

/// Pointwise element w_i of the Clarke interval at (x_i, u_i).
struct SubgradientSelection {
  GridFn w;
};

/// (1/p)||u||^p - (lambda/p)|u|_p^p - h sum_i j(x_i, u_i)
double phi(const Problem& prob, const GridFn& u);

/// A_h(u) - lambda |u|^(p-2) u, the part of the residual not involving the potential.
GridFn smooth_part(const Problem& prob, const GridFn& u);

SubgradientSelection select_w(const Problem& prob, const GridFn& u, SelectionRule rule);

/// True when w_i lies in the Clarke interval at every node.
bool is_valid_selection(const Problem& prob, const GridFn& u, const SubgradientSelection& w, double tol = 0.0);

/// Strong residual g = A_h(u) - lambda |u|^(p-2) u - w; g = 0 iff u solves the inclusion with w.
GridFn subdiff_element(const Problem& prob, const GridFn& u, const SubgradientSelection& w);

/// Strong residual for the min-norm selection (nodewise clamp of the smooth part).
GridFn min_norm_residual(const Problem& prob, const GridFn& u);

/// Mass-weighted Euclidean norm of the min-norm residual.
double residual_m(const Problem& prob, const GridFn& u);

}  // namespace lipflow
