#include "lipflow/potential.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace lipflow {

namespace {

double sgn(double s) { return s > 0.0 ? 1.0 : (s < 0.0 ? -1.0 : 0.0); }

double power_part(double q, double s) { return s == 0.0 ? 0.0 : std::pow(std::abs(s), q - 2.0) * s; }

// Jump term c * sign(s) * H(|s| - b) with the one-sided convention at |s| == b.
double jump_part(const PotentialSpec& sp, double s, int side) {
  if (sp.c == 0.0) return 0.0;
  const double a = std::abs(s);
  bool active;
  if (a > sp.b) {
    active = true;
  } else if (a < sp.b) {
    active = false;
  } else if (s > 0.0) {
    active = side > 0;
  } else if (s < 0.0) {
    active = side < 0;
  } else {
    active = side != 0;
  }
  if (!active) return 0.0;
  const double dir = s != 0.0 ? sgn(s) : static_cast<double>(side > 0 ? 1 : -1);
  return sp.c * dir;
}

double poly(const PolyPiece& pc, double s) {
  double v = 0.0;
  for (auto it = pc.coeffs.rbegin(); it != pc.coeffs.rend(); ++it) v = v * s + *it;
  return v;
}

double dpoly(const PolyPiece& pc, double s) {
  double v = 0.0;
  for (std::size_t m = pc.coeffs.size(); m-- > 1;) v = v * s + static_cast<double>(m) * pc.coeffs[m];
  return v;
}

double poly_integral(const PolyPiece& pc, double l, double r) {
  double v = 0.0;
  for (std::size_t m = 0; m < pc.coeffs.size(); ++m) {
    const double e = static_cast<double>(m + 1);
    v += pc.coeffs[m] * (std::pow(r, e) - std::pow(l, e)) / e;
  }
  return v;
}

std::size_t piece_index(const PotentialSpec& sp, double s, int side) {
  const auto& bp = sp.breakpoints;
  auto it = std::lower_bound(bp.begin(), bp.end(), s);
  std::size_t idx = static_cast<std::size_t>(it - bp.begin());
  if (it != bp.end() && *it == s && side > 0) ++idx;
  return idx;
}

double custom_integral(const PotentialSpec& sp, double l, double r) {
  double total = 0.0;
  double a = l;
  for (double b : sp.breakpoints) {
    if (b <= a) continue;
    if (b >= r) break;
    total += poly_integral(sp.pieces[piece_index(sp, 0.5 * (a + b), 0)], a, b);
    a = b;
  }
  total += poly_integral(sp.pieces[piece_index(sp, 0.5 * (a + r), 0)], a, r);
  return total;
}

}  // namespace

std::string to_string(PotentialKind k) {
  switch (k) {
    case PotentialKind::smooth_power: return "smooth_power";
    case PotentialKind::kinked_power: return "kinked_power";
    case PotentialKind::jump_derivative: return "jump_derivative";
    case PotentialKind::custom_piecewise: return "custom_piecewise";
  }
  return "unknown";
}

PotentialKind potential_kind_from_string(const std::string& s) {
  if (s == "smooth_power") return PotentialKind::smooth_power;
  if (s == "kinked_power") return PotentialKind::kinked_power;
  if (s == "jump_derivative") return PotentialKind::jump_derivative;
  if (s == "custom_piecewise") return PotentialKind::custom_piecewise;
  throw std::invalid_argument("unknown potential kind '" + s + "'");
}

PotentialSpec PotentialSpec::smooth_power(double q, double mu, double M) {
  PotentialSpec sp;
  sp.kind = PotentialKind::smooth_power;
  sp.q = q;
  sp.mu = mu;
  sp.M = M;
  sp.a1 = 1.0;
  sp.c = 0.0;
  sp.validate();
  return sp;
}

PotentialSpec PotentialSpec::kinked_power(double q, double c, double b, double mu, double M) {
  PotentialSpec sp;
  sp.kind = PotentialKind::kinked_power;
  sp.q = q;
  sp.c = c;
  sp.b = b;
  sp.mu = mu;
  sp.M = M;
  sp.a1 = std::max(1.0, c);
  sp.breakpoints = b > 0.0 ? std::vector<double>{-b, b} : std::vector<double>{0.0};
  sp.validate();
  return sp;
}

PotentialSpec PotentialSpec::jump_derivative(double q, double height, double at, double mu, double M) {
  PotentialSpec sp = kinked_power(q, height, at, mu, M);
  sp.kind = PotentialKind::jump_derivative;
  return sp;
}

PotentialSpec PotentialSpec::custom_piecewise(std::vector<double> breakpoints, std::vector<PolyPiece> pieces,
                                              double q, double mu, double M, double a1) {
  PotentialSpec sp;
  sp.kind = PotentialKind::custom_piecewise;
  sp.breakpoints = std::move(breakpoints);
  sp.pieces = std::move(pieces);
  sp.q = q;
  sp.mu = mu;
  sp.M = M;
  sp.a1 = a1;
  sp.validate();
  return sp;
}

void PotentialSpec::validate() const {
  if (!(q > 1.0)) throw std::invalid_argument("potential: growth exponent q must exceed 1");
  if (!(mu > 0.0)) throw std::invalid_argument("potential: mu must be positive");
  if (!(M > 0.0)) throw std::invalid_argument("potential: M must be positive");
  if (!(a1 > 0.0)) throw std::invalid_argument("potential: a1 must be positive");
  if (kind == PotentialKind::custom_piecewise) {
    if (pieces.size() != breakpoints.size() + 1)
      throw std::invalid_argument("potential: custom_piecewise needs breakpoints.size() + 1 pieces");
    for (std::size_t i = 1; i < breakpoints.size(); ++i)
      if (!(breakpoints[i - 1] < breakpoints[i]))
        throw std::invalid_argument("potential: breakpoints must be strictly increasing");
    for (const auto& pc : pieces)
      for (double v : pc.coeffs)
        if (!std::isfinite(v)) throw std::invalid_argument("potential: non-finite piece coefficient");
  } else {
    if (!(c >= 0.0)) throw std::invalid_argument("potential: kink/jump height must be nonnegative");
    if (!(b >= 0.0)) throw std::invalid_argument("potential: kink/jump location must be nonnegative");
  }
}

bool PotentialSpec::is_breakpoint(double s) const {
  if (kind == PotentialKind::smooth_power) return false;
  if (kind != PotentialKind::custom_piecewise && c == 0.0) return false;
  return std::binary_search(breakpoints.begin(), breakpoints.end(), s);
}

double PotentialSpec::f_one_sided(double s, int side) const {
  if (kind == PotentialKind::custom_piecewise) return poly(pieces[piece_index(*this, s, side)], s);
  return power_part(q, s) + jump_part(*this, s, side);
}

double PotentialSpec::df(double s) const {
  if (kind == PotentialKind::custom_piecewise) {
    if (is_breakpoint(s))
      return 0.5 * (dpoly(pieces[piece_index(*this, s, -1)], s) + dpoly(pieces[piece_index(*this, s, 1)], s));
    return dpoly(pieces[piece_index(*this, s, 0)], s);
  }
  if (s == 0.0) return q == 2.0 ? 1.0 : (q > 2.0 ? 0.0 : HUGE_VAL);
  return (q - 1.0) * std::pow(std::abs(s), q - 2.0);
}

double j_eval(const PotentialSpec& spec, double /*x*/, double s) {
  if (s == 0.0) return 0.0;
  if (spec.kind == PotentialKind::custom_piecewise)
    return s > 0.0 ? custom_integral(spec, 0.0, s) : -custom_integral(spec, s, 0.0);
  const double a = std::abs(s);
  return std::pow(a, spec.q) / spec.q + spec.c * std::max(0.0, a - spec.b);
}

Interval clarke_interval(const PotentialSpec& spec, double /*x*/, double s) {
  if (!spec.is_breakpoint(s)) {
    const double v = spec.f_one_sided(s, 0);
    return {v, v};
  }
  const double l = spec.f_one_sided(s, -1);
  const double r = spec.f_one_sided(s, 1);
  return {std::min(l, r), std::max(l, r)};
}

double j0_dir(const PotentialSpec& spec, double x, double s, double dir) {
  const Interval I = clarke_interval(spec, x, s);
  return dir >= 0.0 ? I.hi * dir : I.lo * dir;
}

bool HjReport::all_passed() const {
  return std::all_of(conditions.begin(), conditions.end(), [](const HjCondition& c) { return c.passed; });
}

const HjCondition& HjReport::get(const std::string& name) const {
  for (const auto& c : conditions)
    if (c.name == name) return c;
  throw std::out_of_range("no (H_j) condition named " + name);
}

HjReport check_Hj(const PotentialSpec& spec, double p, std::span<const double> s_samples) {
  if (s_samples.empty()) throw std::invalid_argument("check_Hj: need at least one sample");
  HjReport rep;
  HjCondition growth, superlinear, origin, sign;
  growth.name = "ii";
  superlinear.name = "iii";
  origin.name = "iv";
  sign.name = "v";

  auto fail = [](HjCondition& c, double s, const std::string& why) {
    if (c.passed) {
      c.passed = false;
      c.first_violation = s;
      c.detail = why;
    }
  };

  for (double s : s_samples) {
    const Interval I = clarke_interval(spec, 0.0, s);
    const double bound = spec.a1 * (1.0 + std::pow(std::abs(s), spec.q - 1.0));
    if (std::max(std::abs(I.lo), std::abs(I.hi)) > bound * (1.0 + 1e-12)) fail(growth, s, "|xi| exceeds a1(1+|s|^(q-1))");

    if (std::abs(s) >= spec.M) {
      const double lhs = spec.mu * j_eval(spec, 0.0, s);
      const double rhs = -j0_dir(spec, 0.0, s, -s);
      const bool ok = lhs <= rhs + 1e-12 * std::max(1.0, std::abs(rhs));
      if (!ok) {
        if (s > 0.0) {
          fail(superlinear, s, "mu j(z) > -j0(z;-z)");
        } else if (!superlinear.flagged) {
          superlinear.flagged = true;
          if (superlinear.passed) superlinear.detail = "inequality fails on the negative side";
          if (!superlinear.first_violation) superlinear.first_violation = s;
        }
      }
    }

    if (s * I.lo < 0.0 || s * I.hi < 0.0) fail(sign, s, "s * xi < 0 for some xi in the subdifferential");
  }

  // Ratio p j(s)/|s|^p at the two smallest nonzero |s| must be small and shrinking.
  std::vector<double> small;
  for (double s : s_samples)
    if (s != 0.0) small.push_back(s);
  std::sort(small.begin(), small.end(), [](double a, double b) { return std::abs(a) < std::abs(b); });
  if (small.empty()) {
    origin.detail = "no nonzero samples";
  } else {
    auto ratio = [&](double s) { return p * j_eval(spec, 0.0, s) / std::pow(std::abs(s), p); };
    const double r0 = ratio(small.front());
    bool ok = std::abs(r0) <= 1e-2;
    if (ok && small.size() > 1 && std::abs(small[1]) > std::abs(small[0])) {
      const double r1 = ratio(small[1]);
      ok = std::abs(r0) < std::abs(r1) || std::abs(r0) <= 1e-12;
    }
    if (!ok) {
      std::ostringstream os;
      os << "p j(s)/|s|^p = " << r0 << " does not tend to 0";
      fail(origin, small.front(), os.str());
    }
  }

  rep.conditions = {growth, superlinear, origin, sign};
  return rep;
}

std::vector<double> default_Hj_samples(const PotentialSpec& spec) {
  std::vector<double> s;
  for (int k = -60; k <= 20; ++k) {
    const double v = std::pow(10.0, k / 10.0);
    s.push_back(v);
    s.push_back(-v);
  }
  for (double b : spec.breakpoints) {
    s.push_back(b);
    s.push_back(std::nextafter(b, HUGE_VAL));
    s.push_back(std::nextafter(b, -HUGE_VAL));
  }
  s.push_back(spec.M);
  s.push_back(-spec.M);
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());
  return s;
}

}  // namespace lipflow
