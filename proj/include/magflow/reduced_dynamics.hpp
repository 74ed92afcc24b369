#pragma once

// Reduction by the rotational symmetry: the first integral
// I(t, phi) = m gamma sin(phi) - Gamma, latitudes, turning points, and the
// time average of h over each invariant torus.

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "magflow/contact_bounds.hpp"
#include "magflow/numerics.hpp"
#include "magflow/profile.hpp"

namespace magflow {

struct ReducedLevel {
  double I = 0.0;
  double t_minus = 0.0;
  double t_plus = 0.0;
  double s_half = 0.0;
  double action = 0.0;
};

struct LatitudeOrbit {
  double t0 = 0.0;
  int sign = 1;
  double m_t0 = 0.0;
  double action = 0.0;
  double I_value = 0.0;
  bool degenerate = false;
};

struct IRange {
  double I_min, I_max, argmin_t, argmax_t;
};

inline double I_hat(const ProfileFunction& p, double m, double t, double phi) {
  const auto j = p.jet(t);
  return m * j.gamma * std::sin(phi) - j.Gamma;
}

/// (I^+, I^-) = (m gamma - Gamma, -m gamma - Gamma)
inline std::pair<double, double> I_hat_pm(const ProfileFunction& p, double m, double t) {
  const auto j = p.jet(t);
  return {m * j.gamma - j.Gamma, -m * j.gamma - j.Gamma};
}

inline LatitudeOrbit latitude_action(const ProfileFunction& p, double t0) {
  const auto j = p.jet(t0);
  if (std::abs(j.dgamma) < 1e-8) throw domain_error("latitude_action: dgamma(t0) vanishes (equator-degenerate latitude)");
  LatitudeOrbit o;
  o.t0 = t0;
  o.sign = j.dgamma > 0 ? 1 : -1;
  o.m_t0 = std::abs(j.gamma / j.dgamma);
  o.action = (j.gamma * j.gamma - j.dgamma * j.Gamma) / (j.dgamma * j.dgamma);
  o.I_value = j.dgamma * o.action;
  return o;
}

/// Small-oscillation half period pi / sqrt(K_m) at a latitude.
inline double latitude_half_period(const ProfileFunction& p, double m, double t0) {
  const double km = magnetic_curvature(p, m, t0);
  if (!(km > 0)) throw precondition_error("latitude half period needs K_m > 0 at the latitude");
  return pi / std::sqrt(km);
}

/// All roots of +-m dgamma = gamma: sign changes on the scan grid refined by
/// bisection, plus tangential roots flagged degenerate.
inline std::vector<LatitudeOrbit> latitudes(const ProfileFunction& p, double m) {
  if (!(m > 0)) throw domain_error("latitudes: m must be positive");
  const auto grid = profile_grid(p);
  std::vector<LatitudeOrbit> out;
  for (int sgn : {1, -1}) {
    auto f = [&](double t) {
      const auto j = p.jet(t);
      return sgn * m * j.dgamma - j.gamma;
    };
    std::vector<double> v(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) v[i] = f(grid[i]);
    for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
      if (v[i] == 0.0 && i > 0 && i + 1 < grid.size() && (v[i - 1] > 0) != (v[i + 1] > 0)) {
        out.push_back(latitude_action(p, grid[i]));
        continue;
      }
      if ((v[i] > 0 && v[i + 1] < 0) || (v[i] < 0 && v[i + 1] > 0)) {
        out.push_back(latitude_action(p, bisect(f, grid[i], grid[i + 1], 1e-15)));
        continue;
      }
      // tangency: local extremum of |f| close to zero without a sign change
      if (i > 0 && std::abs(v[i]) < std::abs(v[i - 1]) && std::abs(v[i]) <= std::abs(v[i + 1]) && std::abs(v[i]) < 1e-6) {
        auto [t, a] = golden_max([&](double x) { return -std::abs(f(x)); }, grid[i - 1], grid[i + 1], 1e-12);
        if (-a < 1e-10) {
          auto o = latitude_action(p, t);
          o.degenerate = true;
          out.push_back(o);
        }
      }
    }
  }
  std::sort(out.begin(), out.end(), [](const LatitudeOrbit& a, const LatitudeOrbit& b) { return a.t0 < b.t0; });
  return out;
}

inline IRange I_range(const ProfileFunction& p, double m) {
  const auto grid = profile_grid(p);
  auto [tmax, vmax] = grid_max([&](double t) { return I_hat_pm(p, m, t).first; }, grid, 5, 1e-12);
  auto [tmin, vmin] = grid_max([&](double t) { return -I_hat_pm(p, m, t).second; }, grid, 5, 1e-12);
  return {-vmin, vmax, tmin, tmax};
}

/// Boundary of {t : I^- <= I <= I^+}. Needs K_m > 0 so that the set is an interval.
inline std::pair<double, double> turning_points(const ProfileFunction& p, double m, double I, const IRange& R) {
  if (!(I > R.I_min && I < R.I_max)) throw domain_error("turning_points: I = " + std::to_string(I) + " outside the open range of the first integral");
  auto up = [&](double t) { return I_hat_pm(p, m, t).first - I; };
  auto dn = [&](double t) { return I_hat_pm(p, m, t).second - I; };
  const double tol = 1e-15 * std::max(1.0, p.ell());
  if (I >= 1.0) return {bisect(up, 0.0, R.argmax_t, tol), bisect(up, R.argmax_t, p.ell(), tol)};
  if (I <= -1.0) return {bisect(dn, 0.0, R.argmin_t, tol), bisect(dn, R.argmin_t, p.ell(), tol)};
  return {bisect(dn, 0.0, R.argmin_t, tol), bisect(up, R.argmax_t, p.ell(), tol)};
}

inline std::pair<double, double> turning_points(const ProfileFunction& p, double m, double I) {
  if (!km_positive(p, m)) throw precondition_error("turning_points: K_m is not positive, level sets may be disconnected");
  return turning_points(p, m, I, I_range(p, m));
}

namespace detail {

/// Integrates F dt / (m cos phi) over [t-, t+] of level I, with
/// t = t- + (t+ - t-) sin^2 u. Returns {int dt/(m cos phi), int F dt/(m cos phi)}.
///
/// cos^2 phi = (I^+ - I)(I - I^-) / (m gamma)^2; the factor vanishing at the
/// nearer turning point is evaluated as a difference from that point.
template <class F>
std::pair<double, double> level_quadrature(const ProfileFunction& p, double m, double I, double tm, double tp, F&& weight) {
  const double D = tp - tm;
  const auto jm = p.jet(tm);
  const auto jp = p.jet(tp);
  // which factor vanishes at each end: +1 for I^+ - I, -1 for I - I^-
  const int f_lo = I >= 1.0 ? 1 : -1;
  const int f_hi = I <= -1.0 ? -1 : 1;
  auto ds = [&](double u, double& fval) {
    const double su = std::sin(u), cu = std::cos(u);
    const bool lower = u < pi / 4;
    const double te = lower ? tm : tp;
    const double t = std::clamp(te + (lower ? D * su * su : -D * cu * cu), 0.0, p.ell());
    // the rounded offset keeps the Jacobian consistent with the vanishing factor
    const double dt = t - te;
    const auto& je = lower ? jm : jp;
    const int fv = lower ? f_lo : f_hi;
    if (dt == 0.0) {
      const double slope = std::abs(m * je.dgamma - fv * je.gamma);
      const double mg = m * je.gamma;
      const double other = std::abs(m * je.gamma + fv * (je.Gamma + I));
      fval = weight(je, (I + je.Gamma) / mg, 0.0);
      return 2.0 * std::sqrt(D) * (lower ? cu : su) * mg / (m * std::sqrt(slope * other));
    }
    const auto j = p.jet(t);
    const double root = std::sqrt(std::abs(dt) / D);
    // near the end the difference of values cancels; integrate its derivative instead
    const double vanishing = std::abs(dt) < 1e-3 * D ? boost::math::quadrature::gauss<double, 15>::integrate(
                                                           [&](double x) {
                                                             const auto jx = p.jet(x);
                                                             return m * jx.dgamma - fv * jx.gamma;
                                                           },
                                                           te, t)
                                                     : m * (j.gamma - je.gamma) - fv * (j.Gamma - je.Gamma);
    const double other = m * j.gamma + fv * (j.Gamma + I);
    const double mg = m * j.gamma;
    const double c2 = std::abs(vanishing * other) / (mg * mg);
    const double sp = (I + j.Gamma) / mg;
    fval = weight(j, sp, std::sqrt(c2));
    return 2.0 * D * root * (lower ? cu : su) / (m * std::sqrt(c2));
  };
  double err1 = 0.0, err2 = 0.0, l1a = 0.0, l1b = 0.0;
  const double s = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
      [&](double u) {
        double f;
        return ds(u, f);
      },
      0.0, pi / 2, 10, 1e-11, &err1, &l1a);
  const double a = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
      [&](double u) {
        double f;
        const double w = ds(u, f);
        return w * f;
      },
      0.0, pi / 2, 10, 1e-11, &err2, &l1b);
  if (!(err1 <= 1e-8 * std::max(1.0, l1a)) || !(err2 <= 1e-8 * std::max(1.0, l1b)) || !std::isfinite(s) || !std::isfinite(a))
    throw numeric_error("level quadrature did not converge", std::max(err1, err2));
  return {s, a};
}

}  // namespace detail

inline ReducedLevel birkhoff_action(const ProfileFunction& p, double m, double I, const IRange& R) {
  auto [tm, tp] = turning_points(p, m, I, R);
  auto h = [&](const ProfileFunction::Jet& j, double sp, double) {
    return m * m + 1.0 - m * (j.Gamma + j.dgamma) * sp / j.gamma;
  };
  auto [s, a] = detail::level_quadrature(p, m, I, tm, tp, h);
  return {I, tm, tp, s, a / s};
}

/// A(I) = (1/s) int_0^s (m^2 + 1 - m beta_theta sin(phi) / gamma) ds over half an oscillation.
inline ReducedLevel birkhoff_action(const ProfileFunction& p, double m, double I) {
  if (!km_positive(p, m)) throw precondition_error("birkhoff_action: K_m is not positive, level sets may be disconnected");
  return birkhoff_action(p, m, I, I_range(p, m));
}

/// theta advance over one full reduced period of level I.
inline double theta_advance(const ProfileFunction& p, double m, double I, const IRange& R) {
  auto [tm, tp] = turning_points(p, m, I, R);
  auto th = [&](const ProfileFunction::Jet& j, double sp, double) { return m * sp / j.gamma; };
  return 2.0 * detail::level_quadrature(p, m, I, tm, tp, th).second;
}

struct ActionScan {
  std::vector<ReducedLevel> rows;  // sorted by I; first and last are latitudes
  double min_action() const {
    double a = inf;
    for (const auto& r : rows) a = std::min(a, r.action);
    return a;
  }
};

inline ReducedLevel latitude_row(const ProfileFunction& p, double m, double t0) {
  const auto lat = latitude_action(p, t0);
  return {lat.I_value, t0, t0, latitude_half_period(p, m, t0), lat.action};
}

/// Uniform grid of n levels strictly inside (I_min, I_max), plus the two latitudes.
inline ActionScan action_scan(const ProfileFunction& p, double m, std::size_t n, unsigned jobs = 1) {
  if (!(m > 0)) throw domain_error("action_scan: m must be positive");
  if (!km_positive(p, m)) throw precondition_error("action_scan: K_m is not positive");
  const IRange R = I_range(p, m);
  std::vector<double> levels;
  const double band = 1e-6;
  for (std::size_t k = 0; k < n; ++k) {
    double I = R.I_min + (R.I_max - R.I_min) * double(k + 1) / double(n + 1);
    I = std::clamp(I, R.I_min + band, R.I_max - band);
    levels.push_back(I);
  }
  ActionScan scan;
  scan.rows.push_back(latitude_row(p, m, R.argmin_t));
  auto mid = parallel_map<ReducedLevel>(levels.size(), jobs, [&](std::size_t i) { return birkhoff_action(p, m, levels[i], R); });
  scan.rows.insert(scan.rows.end(), mid.begin(), mid.end());
  scan.rows.push_back(latitude_row(p, m, R.argmax_t));
  return scan;
}

enum class VerdictKind { certified_contact, numerically_contact, not_contact_witness, inconclusive };

inline const char* to_string(VerdictKind v) {
  switch (v) {
    case VerdictKind::certified_contact: return "certified_contact";
    case VerdictKind::numerically_contact: return "numerically_contact";
    case VerdictKind::not_contact_witness: return "not_contact_witness";
    case VerdictKind::inconclusive: return "inconclusive";
  }
  return "?";
}

struct ContactVerdict {
  VerdictKind kind = VerdictKind::inconclusive;
  std::optional<LatitudeOrbit> latitude;  // witness
  std::optional<ReducedLevel> level;      // witness
  std::vector<LatitudeOrbit> latitudes;
  double min_action = inf;
  std::string reason;
};

inline ContactVerdict contact_verdict(const ProfileFunction& p, double m, std::size_t n_levels = 100, unsigned jobs = 1) {
  ContactVerdict v;
  if (m == 0.0) {
    v.kind = VerdictKind::certified_contact;
    v.reason = "m = 0: h = 1";
    return v;
  }
  const auto rep = contact_interval(p);
  if (rep.certified(m)) {
    v.kind = VerdictKind::certified_contact;
    v.reason = "m lies in the certified interval";
    return v;
  }
  v.latitudes = latitudes(p, m);
  for (const auto& l : v.latitudes) {
    v.min_action = std::min(v.min_action, l.action);
    if (l.action <= 0 && !v.latitude) v.latitude = l;
  }
  if (v.latitude) {
    v.kind = VerdictKind::not_contact_witness;
    v.reason = "latitude with non-positive action";
    return v;
  }
  if (!km_positive(p, m)) {
    v.kind = VerdictKind::inconclusive;
    v.reason = "K_m not positive and no latitude witness";
    return v;
  }
  const auto scan = action_scan(p, m, n_levels, jobs);
  for (const auto& r : scan.rows) {
    v.min_action = std::min(v.min_action, r.action);
    if (r.action <= 0 && !v.level) v.level = r;
  }
  if (v.level) {
    v.kind = VerdictKind::not_contact_witness;
    v.reason = "invariant torus with non-positive action";
  } else {
    v.kind = VerdictKind::numerically_contact;
    v.reason = "all scanned actions positive";
  }
  return v;
}

}  // namespace magflow
