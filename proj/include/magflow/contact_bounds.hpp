#pragma once

// The rotation-invariant primitive beta = (Gamma + dgamma) dtheta, its norm
// m_gamma, and the interval of m where contact type is certified.

#include <cmath>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include "magflow/numerics.hpp"
#include "magflow/profile.hpp"

namespace magflow {

inline constexpr double inf = std::numeric_limits<double>::infinity();

/// Open interval (lo, hi); hi may be infinite.
struct Interval {
  double lo, hi;
  bool contains(double x) const { return x > lo && x < hi; }
};

struct ContactBoundsReport {
  double m_gamma = 0.0;
  double argmax_t = 0.0;
  std::optional<double> m_minus, m_plus;
  std::vector<Interval> certified_intervals;
  double min_K = 0.0;
  double km_positive_threshold = inf;

  bool certified(double m) const {
    for (const auto& iv : certified_intervals)
      if (iv.contains(m)) return true;
    return false;
  }
};

inline double beta_theta(const ProfileFunction& p, double t) {
  const auto j = p.jet(t);
  return j.Gamma + j.dgamma;
}

/// beta_theta / gamma, with the pole limit (gamma + ddgamma)/dgamma near the ends.
inline double beta_ratio(const ProfileFunction& p, double t) {
  const auto j = p.jet(t);
  if (std::abs(j.gamma) < 1e-7 * p.ell()) return (j.gamma + j.ddgamma) / j.dgamma;
  return (j.Gamma + j.dgamma) / j.gamma;
}

/// d/dt (beta_theta / gamma)
inline double beta_ratio_derivative(const ProfileFunction& p, double t) {
  const auto j = p.jet(t);
  return ((j.gamma + j.ddgamma) * j.gamma - (j.Gamma + j.dgamma) * j.dgamma) / (j.gamma * j.gamma);
}

inline std::vector<double> profile_grid(const ProfileFunction& p, std::size_t n = 4096) { return scan_grid(0.0, p.ell(), n, p.knots()); }

/// sup |beta_theta / gamma| with its location.
inline std::pair<double, double> m_gamma_arg(const ProfileFunction& p) {
  return grid_max([&](double t) { return std::abs(beta_ratio(p, t)); }, profile_grid(p));
}

inline double m_gamma(const ProfileFunction& p) { return m_gamma_arg(p).second; }

/// Roots of m^2 - M m + inf_f = 0, present iff M^2 >= 4 inf_f.
inline std::optional<std::pair<double, double>> m_plus_minus(double M, double inf_f = 1.0) {
  const double disc = M * M - 4.0 * inf_f;
  if (disc < 0) return std::nullopt;
  const double s = std::sqrt(disc);
  const double plus = 0.5 * (M + s);
  return std::make_pair(inf_f / plus, plus);
}

/// (min K, location) over the grid with refinement.
inline std::pair<double, double> min_curvature(const ProfileFunction& p) {
  auto [t, v] = grid_max([&](double x) { return -p.curvature(x); }, profile_grid(p));
  return {-v, t};
}

inline double magnetic_curvature(const ProfileFunction& p, double m, double t) { return m * m * p.curvature(t) + 1.0; }

inline double km_threshold(double min_K) { return min_K >= 0 ? inf : 1.0 / std::sqrt(-min_K); }

inline bool km_positive(const ProfileFunction& p, double m) { return m * m * min_curvature(p).first + 1.0 > 0.0; }

inline ContactBoundsReport contact_interval(const ProfileFunction& p) {
  ContactBoundsReport r;
  std::tie(r.argmax_t, r.m_gamma) = m_gamma_arg(p);
  if (r.m_gamma < 2.0) {
    r.certified_intervals = {{0.0, inf}};
  }
  if (auto pm = m_plus_minus(r.m_gamma)) {
    r.m_minus = pm->first;
    r.m_plus = pm->second;
    if (r.m_gamma >= 2.0) r.certified_intervals = {{0.0, pm->first}, {pm->second, inf}};
  }
  r.min_K = min_curvature(p).first;
  r.km_positive_threshold = km_threshold(r.min_K);
  return r;
}

struct SymmetricIncreasingCheck {
  bool symmetric;
  bool K_increasing;
  bool hypothesis_holds;
  double m_gamma;
  bool conclusion_holds;
};

/// Hypothesis: gamma(t) = gamma(ell - t) and K nondecreasing on [0, ell/2].
/// Conclusion: m_gamma <= 1.
inline SymmetricIncreasingCheck symmetric_increasing_check(const ProfileFunction& p, double tol = 1e-6) {
  SymmetricIncreasingCheck c{};
  c.symmetric = symmetry_defect(p) <= 1e-8 * std::max(1.0, p.ell());
  const std::size_t n = 2048;
  double prev = p.curvature(0.0);
  double scale = std::abs(prev);
  std::vector<double> K(n + 1);
  for (std::size_t i = 0; i <= n; ++i) {
    K[i] = p.curvature(0.5 * p.ell() * double(i) / double(n));
    scale = std::max(scale, std::abs(K[i]));
  }
  c.K_increasing = true;
  for (std::size_t i = 1; i <= n; ++i) {
    if (K[i] < prev - 1e-9 * std::max(1.0, scale)) {
      c.K_increasing = false;
      break;
    }
    prev = K[i];
  }
  c.hypothesis_holds = c.symmetric && c.K_increasing;
  c.m_gamma = m_gamma(p);
  c.conclusion_holds = c.m_gamma <= 1.0 + tol;
  return c;
}

}  // namespace magflow
