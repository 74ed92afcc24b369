#pragma once

// Linearized Reeb flow in the trivialization chi(Z) = sqrt(h) (eta(Z), alpha(Z))
// of the contact structure, winding intervals and Conley-Zehnder indices.

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "magflow/contact_bounds.hpp"
#include "magflow/error.hpp"
#include "magflow/flow.hpp"
#include "magflow/numerics.hpp"
#include "magflow/profile.hpp"
#include "magflow/reduced_dynamics.hpp"

namespace magflow {

/// Row-major 2x2 matrix.
using Mat2 = std::array<double, 4>;

inline Mat2 mat_mul(const Mat2& a, const Mat2& b) {
  return {a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3], a[2] * b[0] + a[3] * b[2], a[2] * b[1] + a[3] * b[3]};
}
inline double mat_det(const Mat2& a) { return a[0] * a[3] - a[1] * a[2]; }
inline Mat2 mat_inv(const Mat2& a) {
  const double d = mat_det(a);
  return {a[3] / d, -a[1] / d, -a[2] / d, a[0] / d};
}
/// Spectral norm.
inline double mat_norm(const Mat2& a) {
  const double s = a[0] * a[0] + a[1] * a[1] + a[2] * a[2] + a[3] * a[3];
  const double d = mat_det(a);
  return std::sqrt(0.5 * (s + std::sqrt(std::max(0.0, s * s - 4.0 * d * d))));
}
inline constexpr Mat2 J_std{0.0, -1.0, 1.0, 0.0};

struct Coframe {
  double alpha, psi, eta;
};

/// (alpha, psi, eta) on W = w_t d/dt + w_phi d/dphi + w_theta d/dtheta.
inline Coframe coframe_eval(const ProfileFunction& p, const PhasePoint& x, const std::array<double, 3>& w) {
  check_interior(p, x[0]);
  const auto j = p.jet(x[0]);
  const double sp = std::sin(x[1]), cp = std::cos(x[1]);
  return {w[0] * cp + w[2] * j.gamma * sp, w[1] + w[2] * j.dgamma, -w[0] * sp + w[2] * j.gamma * cp};
}

/// h = tau(X^m) for tau = m alpha + psi - beta_theta dtheta.
inline double h_value(const ProfileFunction& p, double m, const PhasePoint& x) {
  check_interior(p, x[0]);
  const double h = h_integrand(p, m, x);
  if (!(h > 0)) throw precondition_error("h_value: h <= 0, tau is not a contact primitive at this m");
  return h;
}

inline double tau_eval(const ProfileFunction& p, double m, const PhasePoint& x, const std::array<double, 3>& w) {
  const auto c = coframe_eval(p, x, w);
  return m * c.alpha + c.psi - beta_theta(p, x[0]) * w[2];
}

/// chi^{-1}(a, b): the vector of ker tau with sqrt(h) eta = a, sqrt(h) alpha = b.
inline std::array<double, 3> chi_inverse(const ProfileFunction& p, double m, const PhasePoint& x, double a, double b) {
  const auto j = p.jet(x[0]);
  const double sh = std::sqrt(h_value(p, m, x));
  const double sp = std::sin(x[1]), cp = std::cos(x[1]);
  const double c1 = b / sh, c2 = a / sh;  // X and H components
  const double c3 = (j.Gamma + j.dgamma) * (c1 * sp + c2 * cp) / j.gamma - m * c1;
  // X = cos d_t - (dgamma sin / gamma) d_phi + (sin / gamma) d_theta
  // H = -sin d_t - (dgamma cos / gamma) d_phi + (cos / gamma) d_theta
  return {c1 * cp - c2 * sp, -j.dgamma * (c1 * sp + c2 * cp) / j.gamma + c3, (c1 * sp + c2 * cp) / j.gamma};
}

/// Reeb field X^m / h and its Jacobian in (t, phi, theta).
struct ReebJet {
  PhasePoint R;
  std::array<std::array<double, 3>, 3> DR;
};

inline ReebJet reeb_jet(const ProfileFunction& p, double m, const PhasePoint& x) {
  const auto j = p.jet(x[0]);
  const double sp = std::sin(x[1]), cp = std::cos(x[1]);
  const double g = j.gamma, g2 = g * g;
  const PhasePoint X{m * cp, 1.0 - m * j.dgamma * sp / g, m * sp / g};
  const double b = (j.Gamma + j.dgamma) / g;
  const double db = ((g + j.ddgamma) * g - (j.Gamma + j.dgamma) * j.dgamma) / g2;
  const double h = m * m + 1.0 - m * b * sp;
  const std::array<double, 3> dh{-m * db * sp, -m * b * cp, 0.0};
  const std::array<std::array<double, 3>, 3> DX{{{0.0, -m * sp, 0.0},
                                                 {-m * sp * (j.ddgamma * g - j.dgamma * j.dgamma) / g2, -m * j.dgamma * cp / g, 0.0},
                                                 {-m * sp * j.dgamma / g2, m * cp / g, 0.0}}};
  ReebJet r;
  for (int i = 0; i < 3; ++i) {
    r.R[i] = X[i] / h;
    for (int k = 0; k < 3; ++k) r.DR[i][k] = DX[i][k] / h - X[i] * dh[k] / (h * h);
  }
  return r;
}

/// A periodic Reeb orbit: start point and Reeb period of one traversal.
struct ReebOrbit {
  PhasePoint start;
  double period;
  std::string label;
};

struct SymplecticPath {
  std::vector<double> times;
  std::vector<Mat2> matrices;
  std::vector<double> h;  // h along the orbit at each sample
  double m = 0.0;
  std::string orbit;
  int covers = 1;
  double max_det_defect = 0.0;
};

struct WindingInterval {
  double lo, hi;
  double length() const { return hi - lo; }
};

/// Reeb orbit along a latitude; phi = sign pi / 2 and h is constant.
inline ReebOrbit latitude_orbit(const ProfileFunction& p, double m, const LatitudeOrbit& lat) {
  const PhasePoint x{lat.t0, lat.sign * pi / 2.0, 0.0};
  const double h = h_value(p, m, x);
  return {x, h * 2.0 * pi * p.gamma(lat.t0) / m, "latitude t0=" + std::to_string(lat.t0)};
}

/// Fiber through the equator at m = 0, period 2 pi.
inline ReebOrbit fiber_orbit(const ProfileFunction& p) { return {{p.ell() / 2.0, 0.0, 0.0}, 2.0 * pi, "fiber"}; }

/// Integrates the variational equation of the Reeb field along the orbit
/// over covers * period and samples Psi on a uniform grid.
inline SymplecticPath linearized_flow(const ProfileFunction& p, double m, const ReebOrbit& orbit, int covers = 1,
                                      int samples_per_cover = 0, const IntegrateOptions& opts = {}) {
  if (covers < 1) throw domain_error("linearized_flow: covers must be >= 1");
  if (!(orbit.period > 0)) throw domain_error("linearized_flow: period must be positive");
  using State = std::array<double, 9>;
  const PhasePoint& z0 = orbit.start;
  h_value(p, m, z0);
  const auto e1 = chi_inverse(p, m, z0, 1.0, 0.0);
  const auto e2 = chi_inverse(p, m, z0, 0.0, 1.0);
  State x0{z0[0], z0[1], z0[2], e1[0], e1[1], e1[2], e2[0], e2[1], e2[2]};
  auto sys = [&](const State& x, State& dx, double) {
    if (!detail::interior(p, x[0])) {
      dx.fill(1e30);
      return;
    }
    const auto r = reeb_jet(p, m, {x[0], x[1], x[2]});
    for (int i = 0; i < 3; ++i) {
      dx[i] = r.R[i];
      dx[3 + i] = r.DR[i][0] * x[3] + r.DR[i][1] * x[4] + r.DR[i][2] * x[5];
      dx[6 + i] = r.DR[i][0] * x[6] + r.DR[i][1] * x[7] + r.DR[i][2] * x[8];
    }
  };
  const double T = covers * orbit.period;
  int n = samples_per_cover > 0 ? samples_per_cover : std::max(256, int(std::ceil(orbit.period / 0.02)));
  const std::size_t N = std::size_t(n) * covers;
  const double ds = orbit.period / n;

  SymplecticPath path;
  path.m = m;
  path.orbit = orbit.label;
  path.covers = covers;
  std::size_t next = 0;
  auto record = [&](double s, const State& x) {
    const PhasePoint z{x[0], x[1], x[2]};
    const double h = h_value(p, m, z);
    const double sh = std::sqrt(h);
    const auto R = reeb_jet(p, m, z).R;
    Mat2 M{};
    for (int c = 0; c < 2; ++c) {
      std::array<double, 3> w{x[3 + 3 * c], x[4 + 3 * c], x[5 + 3 * c]};
      const double tw = tau_eval(p, m, z, w);
      for (int i = 0; i < 3; ++i) w[i] -= tw * R[i];
      const auto cf = coframe_eval(p, z, w);
      M[c] = sh * cf.eta;
      M[2 + c] = sh * cf.alpha;
    }
    path.times.push_back(s);
    path.matrices.push_back(M);
    path.h.push_back(h);
    path.max_det_defect = std::max(path.max_det_defect, std::abs(mat_det(M) - 1.0));
  };
  record(0.0, x0);
  next = 1;
  detail::run_dense<State>(p, sys, x0, T, opts, State{0, 1, 1, 0, 0, 0, 0, 0, 0}, State{}, [&](auto& st) {
    while (next <= N && double(next) * ds <= st.current_time()) {
      State x;
      st.calc_state(double(next) * ds, x);
      record(double(next) * ds, x);
      ++next;
    }
  });
  if (path.max_det_defect > 1e-5)
    throw numeric_error("linearized_flow: symplecticity defect " + std::to_string(path.max_det_defect), path.max_det_defect);
  return path;
}

namespace detail {

inline double direction_angle(const Mat2& M, double c, double s) { return std::atan2(M[2] * c + M[3] * s, M[0] * c + M[1] * s); }

/// Delta theta / 2 pi of Psi(t) u for u = (cos a, sin a); nullopt if a step turns by >= pi/2.
inline std::optional<double> winding_of(const SymplecticPath& path, double a) {
  const double c = std::cos(a), s = std::sin(a);
  double prev = direction_angle(path.matrices.front(), c, s);
  const double start = prev;
  double acc = prev;
  for (std::size_t k = 1; k < path.matrices.size(); ++k) {
    const double cur = direction_angle(path.matrices[k], c, s);
    double d = cur - prev;
    d -= 2.0 * pi * std::round(d / (2.0 * pi));
    if (std::abs(d) >= pi / 2.0) return std::nullopt;
    acc += d;
    prev = cur;
  }
  return (acc - start) / (2.0 * pi);
}

}  // namespace detail

inline WindingInterval winding_interval(const SymplecticPath& path, int n_dirs = 256) {
  if (path.matrices.size() < 2) throw domain_error("winding_interval: path needs at least two samples");
  auto w = [&](double a) {
    auto v = detail::winding_of(path, a);
    if (!v) throw numeric_error("winding_interval: angle step >= pi/2 between samples, resample the path");
    return *v;
  };
  std::vector<double> vals(n_dirs);
  for (int i = 0; i < n_dirs; ++i) vals[i] = w(pi * i / n_dirs);
  const auto [mn, mx] = std::minmax_element(vals.begin(), vals.end());
  auto refine = [&](std::ptrdiff_t i, double sign) {
    const double a0 = pi * double(i - 1) / n_dirs, a1 = pi * double(i + 1) / n_dirs;
    const double best = golden_max([&](double x) { return sign * w(x); }, a0, a1, 1e-10).second;
    return sign * std::max(best, sign * vals[i]);
  };
  WindingInterval I{refine(mn - vals.begin(), -1.0), refine(mx - vals.begin(), 1.0)};
  if (I.hi - I.lo >= 0.5) throw numeric_error("winding_interval: length >= 1/2", I.hi - I.lo);
  return I;
}

struct CZResult {
  WindingInterval interval;
  int index;
  bool degenerate;
};

inline CZResult cz_from_interval(WindingInterval I, double tol = 1e-6) {
  CZResult r{I, 0, false};
  for (double e : {I.lo, I.hi})
    if (std::abs(e - std::round(e)) < tol) r.degenerate = true;
  if (r.degenerate) {
    I.lo -= 2.0 * tol;
    I.hi -= 2.0 * tol;
  }
  const double k = std::floor(I.hi);
  r.index = k >= I.lo ? int(2 * k) : int(2 * std::floor(I.lo) + 1);
  return r;
}

inline CZResult cz_index(const SymplecticPath& path) { return cz_from_interval(winding_interval(path)); }

struct LatitudeCZ {
  LatitudeOrbit latitude;
  double reeb_period;  // one traversal
  int covers;
  bool contractible;
  CZResult cz;
  double max_det_defect;
};

/// Latitudes are generators of the order-two fundamental group; even covers are contractible.
inline LatitudeCZ latitude_cz(const ProfileFunction& p, double m, const LatitudeOrbit& lat, int covers = 2) {
  const auto orbit = latitude_orbit(p, m, lat);
  const auto path = linearized_flow(p, m, orbit, covers);
  return {lat, orbit.period, covers, covers % 2 == 0, cz_index(path), path.max_det_defect};
}

/// m = 0: the fiber orbit.
inline LatitudeCZ fiber_cz(const ProfileFunction& p, int covers = 2) {
  const auto path = linearized_flow(p, 0.0, fiber_orbit(p), covers);
  LatitudeOrbit none{};
  none.t0 = p.ell() / 2.0;
  return {none, 2.0 * pi, covers, covers % 2 == 0, cz_index(path), path.max_det_defect};
}

/// sup ||Psi' Psi^{-1} - J|| with Psi' from fourth-order central differences
/// on the uniform sample grid.
inline double rho_sup(const SymplecticPath& path) {
  double r = 0.0;
  const auto& M = path.matrices;
  for (std::size_t k = 2; k + 2 < M.size(); ++k) {
    const double dt = path.times[k + 1] - path.times[k];
    Mat2 D;
    for (int i = 0; i < 4; ++i) D[i] = (M[k - 2][i] - 8.0 * M[k - 1][i] + 8.0 * M[k + 1][i] - M[k + 2][i]) / (12.0 * dt);
    Mat2 B = mat_mul(D, mat_inv(M[k]));
    for (int i = 0; i < 4; ++i) B[i] -= J_std[i];
    r = std::max(r, mat_norm(B));
  }
  return r;
}

struct PeriodicCandidate {
  std::string kind;  // "latitude" or "torus"
  double I;
  int q, p;          // reduced periods and theta turns
  double reeb_period;
  bool contractible;
};

struct ConvexityReport {
  double m;
  double T0_estimate;
  double rho_sup_empirical;
  double lhs, rhs;
  bool verdict;
  std::vector<PeriodicCandidate> orbits;
};

/// Contractible orbits: latitude double covers and resonant torus levels
/// (rotation number p/q), whose class is p + q w_phi mod 2 with w_phi = 1
/// when phi turns once per reduced period (|I| < 1).
inline ConvexityReport dynamical_convexity_report(const ProfileFunction& p, double m, int n_levels = 64, int q_max = 4,
                                                  int rho_orbits = 4) {
  ConvexityReport rep{};
  rep.m = m;
  if (m == 0.0) {
    const auto path = linearized_flow(p, 0.0, fiber_orbit(p), 2);
    rep.T0_estimate = 4.0 * pi;
    rep.rho_sup_empirical = rho_sup(path);
    rep.orbits.push_back({"fiber", -0.0, 2, 0, 4.0 * pi, true});
  } else {
    if (!(m > 0)) throw domain_error("dynamical_convexity_report: m must be >= 0");
    if (!km_positive(p, m)) throw precondition_error("dynamical_convexity_report: K_m is not positive");
    for (double x : scan_grid(0.0, p.ell(), 257))
      if (x > pole_guard(p) && x < p.ell() - pole_guard(p))
        for (double ph : {pi / 2.0, -pi / 2.0}) h_value(p, m, {x, ph, 0.0});
    rep.T0_estimate = inf;
    rep.rho_sup_empirical = 0.0;
    const auto lats = latitudes(p, m);
    for (const auto& lat : lats) {
      if (lat.degenerate) continue;
      const auto orbit = latitude_orbit(p, m, lat);
      rep.orbits.push_back({"latitude", lat.I_value, 1, 1, orbit.period, false});
      rep.orbits.push_back({"latitude", lat.I_value, 2, 2, 2.0 * orbit.period, true});
      rep.T0_estimate = std::min(rep.T0_estimate, 2.0 * orbit.period);
      rep.rho_sup_empirical = std::max(rep.rho_sup_empirical, rho_sup(linearized_flow(p, m, orbit, 2)));
    }
    // rotation-number scan over interior levels
    const IRange R = I_range(p, m);
    std::vector<double> Is, rho, per;
    for (int k = 1; k <= n_levels; ++k) {
      const double I = R.I_min + (R.I_max - R.I_min) * k / (n_levels + 1.0);
      const auto lev = birkhoff_action(p, m, I, R);
      Is.push_back(I);
      rho.push_back(theta_advance(p, m, I, R) / (2.0 * pi));
      per.push_back(2.0 * lev.s_half * lev.action);
    }
    auto add = [&](double I, int q, int pp, double period) {
      const int w_phi = std::abs(I) < 1.0 ? 1 : 0;
      const bool contractible = (pp + q * w_phi) % 2 == 0;
      rep.orbits.push_back({"torus", I, q, pp, q * period, contractible});
      if (contractible) rep.T0_estimate = std::min(rep.T0_estimate, q * period);
    };
    for (int q = 1; q <= q_max; ++q) {
      for (std::size_t k = 0; k < Is.size(); ++k) {
        const double a = q * rho[k];
        const double pr = std::round(a);
        if (std::abs(a - pr) < 1e-9) {
          add(Is[k], q, int(pr), per[k]);
          continue;
        }
        if (k + 1 == Is.size()) continue;
        // theta jumps by one turn across the levels through the poles
        if ((Is[k] - 1.0) * (Is[k + 1] - 1.0) <= 0.0 || (Is[k] + 1.0) * (Is[k + 1] + 1.0) <= 0.0) continue;
        const double b = q * rho[k + 1];
        for (double pp = std::ceil(std::min(a, b)); pp <= std::floor(std::max(a, b)); pp += 1.0) {
          if (std::abs(b - pp) < 1e-9) continue;  // handled at k + 1
          const double I = bisect(
              [&](double x) { return q * theta_advance(p, m, x, R) / (2.0 * pi) - pp; }, Is[k], Is[k + 1], 1e-12);
          const auto lev = birkhoff_action(p, m, I, R);
          add(I, q, int(pp), 2.0 * lev.s_half * lev.action);
        }
      }
    }
    // rho along a few torus trajectories over one reduced period
    for (int k = 0; k < rho_orbits; ++k) {
      const std::size_t i = (Is.size() - 1) * (2 * k + 1) / (2 * rho_orbits);
      const auto lev = birkhoff_action(p, m, Is[i], R);
      const PhasePoint z{lev.t_minus, Is[i] >= 1.0 ? pi / 2.0 : -pi / 2.0, 0.0};
      const double zt = std::min(std::max(z[0], 2.0 * pole_guard(p)), p.ell() - 2.0 * pole_guard(p));
      ReebOrbit o{{zt, z[1], 0.0}, per[i], "torus"};
      rep.rho_sup_empirical = std::max(rep.rho_sup_empirical, rho_sup(linearized_flow(p, m, o, 1)));
    }
  }
  rep.lhs = 2.0 * pi / rep.T0_estimate;
  rep.rhs = 1.0 - rep.rho_sup_empirical;
  rep.verdict = rep.lhs < rep.rhs;
  return rep;
}

}  // namespace magflow
