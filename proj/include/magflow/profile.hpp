#pragma once

// Profile functions of surfaces of revolution: gamma on [0, ell] with
// gamma(0) = gamma(ell) = 0, dgamma = +1 / -1 at the ends, int gamma = 2.

#include <array>
#include <cmath>
#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <boost/math/tools/roots.hpp>

#include "magflow/error.hpp"
#include "magflow/numerics.hpp"

namespace magflow {

enum class ProfileKind { round_sphere, ellipsoid, revolution, sampled_spline, stretched };

inline const char* to_string(ProfileKind k) {
  switch (k) {
    case ProfileKind::round_sphere: return "round-sphere";
    case ProfileKind::ellipsoid: return "ellipsoid";
    case ProfileKind::revolution: return "revolution";
    case ProfileKind::sampled_spline: return "sampled-spline";
    case ProfileKind::stretched: return "stretched";
  }
  return "?";
}

struct ProfileValues {
  double gamma, dgamma, ddgamma, Gamma, K;
};

/// Free-form description attached to a profile (construction parameters).
struct ProfileInfo {
  std::vector<std::pair<std::string, double>> params;
  std::string note;
};

/// Odd smooth ramp psi(t) = S((t - center)/half_width), clipped to +-1 outside
/// the core. S(u) = 35/16 (u - u^3 + 3u^5/5 - u^7/7), S'(u) = 35/16 (1 - u^2)^3.
struct RampBump {
  double center = 0.0;
  double half_width = 0.0;
};

namespace ramp {

inline constexpr double slope0 = 35.0 / 16.0;

inline double S(double u) {
  if (u >= 1.0) return 1.0;
  const double u2 = u * u;
  return slope0 * u * (1.0 - u2 * (1.0 - u2 * (0.6 - u2 / 7.0)));
}

inline double dS(double u) {
  if (u >= 1.0) return 0.0;
  const double v = 1.0 - u * u;
  return slope0 * v * v * v;
}

// 1/S(v) - 1/(S'(0) v), written without cancellation
inline double log_time_remainder_integrand(double v) {
  const double v2 = v * v;
  const double P = 1.0 - v2 * (1.0 - v2 * (0.6 - v2 / 7.0));
  return v * (1.0 - v2 * (0.6 - v2 / 7.0)) / (slope0 * P);
}

/// q(u) = -int_u^1 (1/S - 1/(S'(0) v)) dv
inline double remainder(double u) {
  if (u >= 1.0) return 0.0;
  return -gauss32(log_time_remainder_integrand, u, 1.0);
}

/// g(u) = int_1^u dv / S(v), u in (0, 1]: the time the flow of S needs from 1 to u.
inline double log_time(double u) { return std::log(u) / slope0 + remainder(u); }

/// Inverse of log_time; returns 0 on underflow.
inline double log_time_inverse(double G) {
  if (G >= 0.0) return 1.0;
  const double q0 = remainder(0.0);
  double v = slope0 * (G - q0);
  if (v < -740.0) return 0.0;
  for (int it = 0; it < 60; ++it) {
    const double u = std::exp(v);
    const double F = log_time(u) - G;
    const double dv = F / (u / S(u));
    double vn = v - dv;
    if (vn > 0.0) vn = 0.5 * v;
    if (std::abs(vn - v) < 1e-15 * std::max(1.0, std::abs(v))) {
      v = vn;
      break;
    }
    v = vn;
    if (v < -740.0) return 0.0;
  }
  return std::exp(v);
}

}  // namespace ramp

/// Parametrization of a meridian (r(u), z(u)), u in [0, u_end], with r(0) = r(u_end) = 0.
/// The callback returns {r, r', r'', z', z''}.
struct Meridian {
  std::function<std::array<double, 5>(double)> jet;
  double u_end = pi;
};

class ProfileFunction;

namespace detail {
/// gamma and its first three derivatives of the stretched profile at s
std::array<double, 4> stretched_jet(const ProfileFunction& p, double C, const RampBump& b, double s);
}  // namespace detail

class ProfileFunction {
 public:
  struct Jet {
    double gamma, dgamma, ddgamma, dddgamma, Gamma;
  };

  /// round sphere of radius r (area 4 pi r^2)
  static ProfileFunction sphere(double radius = 1.0) {
    if (!(radius > 0) || !std::isfinite(radius)) throw domain_error("sphere radius must be positive");
    ProfileFunction p;
    p.rep_ = Sphere{radius};
    p.ell_ = pi * radius;
    p.kind_ = ProfileKind::round_sphere;
    p.info_.params = {{"radius", radius}};
    return p;
  }

  /// Wrap a spline of gamma; Gamma is its exact antiderivative with Gamma(0) = -1.
  static ProfileFunction from_spline(const PiecewiseQuintic& s, ProfileKind kind, ProfileInfo info) {
    ProfileFunction p;
    p.rep_ = std::make_shared<const PiecewiseQuintic>(PiecewiseQuintic(s.nodes(), -1.0));
    p.ell_ = s.back();
    p.kind_ = kind;
    p.info_ = std::move(info);
    return p;
  }

  /// s -> base(F_C^{-1}(s)) evaluated exactly; Gamma is interpolated from
  /// quadrature values at `nodes` (which must resolve gamma).
  static ProfileFunction stretched(const ProfileFunction& base, double C, const RampBump& bump,
                                   const std::vector<double>& nodes, ProfileInfo info) {
    Stretch st{std::make_shared<const ProfileFunction>(base), C, bump, {}};
    std::vector<PiecewiseQuintic::Node> g;
    double G = -1.0;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      if (i > 0) G += gauss32([&](double s) { return detail::stretched_jet(base, C, bump, s)[0]; }, nodes[i - 1], nodes[i]);
      const auto j = detail::stretched_jet(base, C, bump, nodes[i]);
      g.push_back({nodes[i], G, j[0], j[1]});
    }
    st.Gamma = std::make_shared<const PiecewiseQuintic>(PiecewiseQuintic(std::move(g), 0.0));
    ProfileFunction p;
    p.rep_ = std::move(st);
    p.ell_ = nodes.back();
    p.kind_ = ProfileKind::stretched;
    p.info_ = std::move(info);
    return p;
  }

  double ell() const { return ell_; }
  ProfileKind kind() const { return kind_; }
  const ProfileInfo& info() const { return info_; }
  ProfileInfo& info() { return info_; }

  /// breakpoints of the representation (empty for closed forms)
  std::vector<double> knots() const {
    if (auto s = std::get_if<Spline>(&rep_)) return (*s)->knots();
    if (auto s = std::get_if<Stretch>(&rep_)) {
      auto k = s->Gamma->knots();
      for (double& x : k) x *= s->scale;
      k.back() = ell_;
      return k;
    }
    return {};
  }

  Jet jet(double t) const {
    check(t);
    if (auto s = std::get_if<Sphere>(&rep_)) {
      const double r = s->r;
      const double near = std::min(t, ell_ - t);
      const double g = r * std::sin(near / r);
      const double c = std::cos(t / r);
      return {g, c, -g / (r * r), -c / (r * r), -1.0 + r * r * (1.0 - c)};
    }
    if (auto s = std::get_if<Stretch>(&rep_)) {
      const double l = s->scale;
      const auto j = detail::stretched_jet(*s->base, s->C, s->bump, std::min(t / l, s->Gamma->back()));
      return {l * j[0], j[1], j[2] / l, j[3] / (l * l), -1.0 + l * l * (s->Gamma->jet(t / l).y + 1.0)};
    }
    const auto j = std::get<Spline>(rep_)->jet(t);
    return {j.y, j.dy, j.ddy, j.dddy, j.integral};
  }

  ProfileValues eval(double t) const {
    const Jet j = jet(t);
    return {j.gamma, j.dgamma, j.ddgamma, j.Gamma, curvature_from(j)};
  }

  double gamma(double t) const { return jet(t).gamma; }
  double dgamma(double t) const { return jet(t).dgamma; }
  double ddgamma(double t) const { return jet(t).ddgamma; }
  double Gamma(double t) const { return jet(t).Gamma; }
  double curvature(double t) const { return curvature_from(jet(t)); }

  /// gamma_l(t) = l gamma(t / l); area scales by l^2.
  ProfileFunction rescaled(double lambda) const {
    if (!(lambda > 0)) throw domain_error("rescale factor must be positive");
    if (auto s = std::get_if<Sphere>(&rep_)) {
      ProfileFunction p = sphere(s->r * lambda);
      p.kind_ = kind_;
      p.info_ = info_;
      return p;
    }
    if (auto s = std::get_if<Stretch>(&rep_)) {
      ProfileFunction p = *this;
      Stretch st = *s;
      st.scale *= lambda;
      p.rep_ = st;
      p.ell_ = ell_ * lambda;
      return p;
    }
    std::vector<PiecewiseQuintic::Node> nodes = std::get<Spline>(rep_)->nodes();
    for (auto& n : nodes) {
      n.t *= lambda;
      n.y *= lambda;
      n.ddy /= lambda;
    }
    nodes.back().t = lambda * ell_;
    return from_spline(PiecewiseQuintic(std::move(nodes), -1.0), kind_, info_);
  }

 private:
  struct Sphere {
    double r;
  };
  using Spline = std::shared_ptr<const PiecewiseQuintic>;
  struct Stretch {
    std::shared_ptr<const ProfileFunction> base;
    double C;
    RampBump bump;
    std::shared_ptr<const PiecewiseQuintic> Gamma;  // unscaled coordinates
    double scale = 1.0;
  };

  void check(double t) const {
    if (!(t >= 0.0 && t <= ell_)) throw domain_error("t = " + std::to_string(t) + " outside [0, " + std::to_string(ell_) + "]");
  }

  double curvature_from(const Jet& j) const {
    if (std::abs(j.gamma) < 1e-7 * std::max(1.0, ell_) && std::abs(j.dgamma) > 0.5) return -j.dddgamma / j.dgamma;
    return -j.ddgamma / j.gamma;
  }

  std::variant<Sphere, Spline, Stretch> rep_{Sphere{1.0}};
  double ell_ = pi;
  ProfileKind kind_ = ProfileKind::round_sphere;
  ProfileInfo info_;
};

/// 2 pi int gamma
inline double area(const ProfileFunction& p) {
  auto g = [&](double t) { return p.gamma(t); };
  auto k = p.knots();
  if (k.empty()) return 2.0 * pi * integrate(g, 0.0, p.ell());
  double s = 0.0;
  for (std::size_t i = 0; i + 1 < k.size(); ++i) s += gauss32(g, k[i], k[i + 1]);
  return 2.0 * pi * s;
}

inline double gamma_integral(const ProfileFunction& p) { return area(p) / (2.0 * pi); }

inline bool is_normalized(const ProfileFunction& p, double tol = 1e-8) { return std::abs(gamma_integral(p) - 2.0) <= tol; }

/// Isotropic rescale to int gamma = 2.
inline ProfileFunction normalized(const ProfileFunction& p) { return p.rescaled(std::sqrt(2.0 / gamma_integral(p))); }

struct ValidationEntry {
  std::string condition;
  bool passed;
  double residual;
};

struct ValidationReport {
  std::vector<ValidationEntry> entries;

  bool passed() const {
    for (const auto& e : entries)
      if (!e.passed) return false;
    return true;
  }
  std::vector<std::string> violations() const {
    std::vector<std::string> v;
    for (const auto& e : entries)
      if (!e.passed) v.push_back(e.condition);
    return v;
  }
  const ValidationEntry* find(const std::string& name) const {
    for (const auto& e : entries)
      if (e.condition == name) return &e;
    return nullptr;
  }
};

/// Checks the profile conditions on a sample grid plus the endpoints.
inline ValidationReport validate(const ProfileFunction& p, double tol = 1e-8, std::size_t n = 4096) {
  ValidationReport r;
  const double L = p.ell();
  const auto a = p.jet(0.0);
  const auto b = p.jet(L);
  const double bv = std::max(std::abs(a.gamma), std::abs(b.gamma));
  r.entries.push_back({"boundary_values", bv <= tol, bv});
  const double bd = std::max(std::abs(a.dgamma - 1.0), std::abs(b.dgamma + 1.0));
  r.entries.push_back({"boundary_derivative", bd <= tol, bd});
  const double ev = std::max(std::abs(a.ddgamma), std::abs(b.ddgamma));
  r.entries.push_back({"even_derivatives", ev <= tol, ev});

  double min_g = std::numeric_limits<double>::infinity();
  double max_dg = 0.0;
  const double guard = 1e-6 * L;
  for (double t : scan_grid(0.0, L, n, p.knots())) {
    if (t < guard || t > L - guard) continue;
    const auto j = p.jet(t);
    min_g = std::min(min_g, j.gamma);
    max_dg = std::max(max_dg, std::abs(j.dgamma));
  }
  r.entries.push_back({"interior_positive", min_g > 0.0, min_g});
  r.entries.push_back({"interior_slope", max_dg < 1.0, max_dg});
  const double nr = std::abs(gamma_integral(p) - 2.0);
  r.entries.push_back({"normalization", nr <= tol, nr});
  return r;
}

/// max |gamma(t) - gamma(ell - t)| on a grid
inline double symmetry_defect(const ProfileFunction& p, std::size_t n = 2048) {
  double d = 0.0;
  for (std::size_t i = 0; i <= n; ++i) {
    const double t = p.ell() * double(i) / double(n);
    d = std::max(d, std::abs(p.gamma(t) - p.gamma(p.ell() - t)));
  }
  return d;
}

inline ProfileFunction make_sphere() { return ProfileFunction::sphere(1.0); }

namespace detail {

inline PiecewiseQuintic pin_ends(PiecewiseQuintic s) {
  auto nodes = s.nodes();
  nodes.front().y = 0.0;
  nodes.front().ddy = 0.0;
  nodes.back().y = 0.0;
  nodes.back().ddy = 0.0;
  return PiecewiseQuintic(std::move(nodes), 0.0);
}

/// Arc-length parametrization of a meridian: s -> u by table + Newton.
class ArcLength {
 public:
  explicit ArcLength(const Meridian& m, std::size_t panels = 256) : m_(m), u_(panels + 1), s_(panels + 1, 0.0) {
    for (std::size_t k = 0; k <= panels; ++k) u_[k] = m.u_end * double(k) / double(panels);
    for (std::size_t k = 0; k < panels; ++k) s_[k + 1] = s_[k] + gauss32([&](double u) { return speed(u); }, u_[k], u_[k + 1]);
  }

  double length() const { return s_.back(); }

  double speed(double u) const {
    const auto j = m_.jet(u);
    return std::hypot(j[1], j[3]);
  }

  double u_of(double s) const {
    if (s <= 0.0) return 0.0;
    if (s >= s_.back()) return m_.u_end;
    const std::size_t k = std::min<std::size_t>(std::upper_bound(s_.begin(), s_.end(), s) - s_.begin() - 1, s_.size() - 2);
    double lo = u_[k];
    double hi = u_[k + 1];
    double u = lo + (hi - lo) * (s - s_[k]) / (s_[k + 1] - s_[k]);
    for (int it = 0; it < 50; ++it) {
      const double F = s_[k] + gauss32([&](double v) { return speed(v); }, u_[k], u) - s;
      if (F > 0) hi = u;
      else lo = u;
      if (std::abs(F) < 4e-16 * std::max(1.0, s)) break;
      double un = u - F / speed(u);
      if (!(un > lo && un < hi)) un = 0.5 * (lo + hi);
      u = un;
    }
    return u;
  }

 private:
  const Meridian& m_;
  std::vector<double> u_, s_;
};

}  // namespace detail

/// Surface of revolution from a meridian: arc-length reparametrization, spline
/// fit, then isotropic rescale to area 4 pi.
inline ProfileFunction make_meridian_profile(const Meridian& m, ProfileKind kind, ProfileInfo info) {
  detail::ArcLength arc(m);
  auto jet = [&](double s) -> std::array<double, 3> {
    const double u = arc.u_of(s);
    const auto d = m.jet(u);
    const double sg = std::hypot(d[1], d[3]);
    const double s4 = sg * sg * sg * sg;
    return {d[0], d[1] / sg, d[3] * (d[2] * d[3] - d[1] * d[4]) / s4};
  };
  auto spline = detail::pin_ends(fit_quintic(jet, 0.0, arc.length(), 64, 1e-12));
  return normalized(ProfileFunction::from_spline(spline, kind, std::move(info)));
}

/// Ellipsoid of revolution with axis ratio b/a (r = sin u, z = -ratio cos u).
inline ProfileFunction make_ellipsoid(double ratio) {
  if (!(ratio > 0) || !std::isfinite(ratio)) throw domain_error("ellipsoid ratio must be finite and positive");
  if (ratio == 1.0) return make_sphere();
  Meridian m{[ratio](double u) -> std::array<double, 5> {
               const double s = std::sin(u), c = std::cos(u);
               return {s, c, -s, ratio * s, ratio * c};
             },
             pi};
  return make_meridian_profile(m, ProfileKind::ellipsoid, {{{"ratio", ratio}}, ""});
}

/// Symmetric family r = sin u, z = -b cos u - c cos^3 u.
inline ProfileFunction make_revolution(double b, double c) {
  Meridian m{[b, c](double u) -> std::array<double, 5> {
               const double s = std::sin(u), co = std::cos(u);
               return {s, co, -s, b * s + 3 * c * co * co * s, b * co + 3 * c * (co * co * co - 2 * co * s * s)};
             },
             pi};
  ProfileInfo info{{{"b", b}, {"c", c}}, ""};
  for (int i = 0; i <= 64; ++i) {
    const double u = pi * i / 64.0;
    const auto d = m.jet(u);
    if (!(std::hypot(d[1], d[3]) > 1e-8)) throw domain_error("meridian speed vanishes");
  }
  return make_meridian_profile(m, ProfileKind::revolution, std::move(info));
}

/// Sampled profile: node derivatives from 7-point Fornberg stencils on the
/// data extended by point reflection through both endpoints; the second
/// derivative is set to zero at the ends.
inline ProfileFunction make_sampled(const std::vector<double>& t, const std::vector<double>& g) {
  const std::size_t n = t.size();
  if (n < 4 || g.size() != n) throw domain_error("samples: need at least 4 matching (t, gamma) pairs");
  if (t.front() != 0.0) throw domain_error("samples: first abscissa must be 0");
  for (std::size_t i = 1; i < n; ++i)
    if (!(t[i] > t[i - 1])) throw domain_error("samples: abscissae must increase");
  const double L = t.back();
  const std::size_t pad = std::min<std::size_t>(3, n - 1);
  std::vector<double> xe, ye;
  for (std::size_t k = pad; k >= 1; --k) {
    xe.push_back(-t[k]);
    ye.push_back(2 * g[0] - g[k]);
  }
  for (std::size_t i = 0; i < n; ++i) {
    xe.push_back(t[i]);
    ye.push_back(g[i]);
  }
  for (std::size_t k = 1; k <= pad; ++k) {
    xe.push_back(2 * L - t[n - 1 - k]);
    ye.push_back(2 * g[n - 1] - g[n - 1 - k]);
  }
  std::vector<PiecewiseQuintic::Node> nodes;
  const std::size_t w = std::min<std::size_t>(7, xe.size());
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t c = i + pad;
    std::size_t lo = c >= w / 2 ? c - w / 2 : 0;
    lo = std::min(lo, xe.size() - w);
    std::vector<double> xs(xe.begin() + lo, xe.begin() + lo + w);
    const auto wts = fornberg_weights(t[i], xs, 2);
    double d1 = 0, d2 = 0;
    for (std::size_t j = 0; j < w; ++j) {
      d1 += wts[1][j] * ye[lo + j];
      d2 += wts[2][j] * ye[lo + j];
    }
    if (i == 0 || i + 1 == n) d2 = 0.0;
    nodes.push_back({t[i], g[i], d1, d2});
  }
  ProfileInfo info{{{"samples", double(n)}}, ""};
  return ProfileFunction::from_spline(PiecewiseQuintic(std::move(nodes), -1.0), ProfileKind::sampled_spline, info);
}

namespace detail {

inline void check_bump(const ProfileFunction& p, const RampBump& b) {
  if (!(b.half_width > 0) || !std::isfinite(b.center))
    throw domain_error("bump: half width must be positive");
  if (!(b.center - b.half_width > 0.0 && b.center + b.half_width < p.ell()))
    throw domain_error("bump: core interval must lie strictly inside (0, ell)");
}

}  // namespace detail

inline std::array<double, 4> detail::stretched_jet(const ProfileFunction& p, double C, const RampBump& b, double s) {
  const double c = b.center, w = b.half_width;
  const double y = s - C;
  const double d = y - c;
  const double a = std::abs(d);
  if (a >= w + C) {
    const double x = d > 0 ? y - C : y + C;
    const auto j = p.jet(std::clamp(x, 0.0, p.ell()));
    return {j.gamma, j.dgamma, j.ddgamma, j.dddgamma};
  }
  const double sgn = d >= 0 ? 1.0 : -1.0;
  const double Gy = a >= w ? a - w : w * ramp::log_time(a / w);
  double ux, Sy, dSy;
  if (a == 0.0) {
    ux = 0.0;
    Sy = 0.0;
    dSy = ramp::slope0;
  } else {
    ux = ramp::log_time_inverse((Gy - C) / w);
    Sy = a >= w ? 1.0 : ramp::S(a / w);
    dSy = a >= w ? 0.0 : ramp::dS(a / w);
  }
  const double x = c + sgn * w * ux;
  const auto j = p.jet(x);
  double r, tail;
  if (a == 0.0) {
    r = std::exp(-C * ramp::slope0 / w);
    tail = 0.0;
  } else {
    r = ramp::S(ux) / Sy;
    tail = (ramp::dS(ux) - dSy) / w / (sgn * Sy);
  }
  // third derivative is only needed for the pole curvature limit, where r = 1
  return {j.gamma, j.dgamma * r, j.ddgamma * r * r + j.dgamma * r * tail, j.dddgamma * r * r * r};
}

namespace detail {

inline double stretched_integral(const ProfileFunction& p, double C, const RampBump& b) {
  const double c = b.center, w = b.half_width;
  auto g = [&](double x) { return p.gamma(x); };
  double outside = integrate(g, 0.0, c - w) + integrate(g, c + w, p.ell());
  auto gs = [&](double s) { return stretched_jet(p, C, b, s)[0]; };
  const double lo = c - w, hi = c + w + 2 * C;
  // the ramp transition lives within a few half-widths of each image edge;
  // in between gamma is constant to round-off
  const double W = w * (2.0 + 40.0 / ramp::slope0);
  if (2 * W >= hi - lo) return outside + integrate(gs, lo, c + C) + integrate(gs, c + C, hi);
  return outside + integrate(gs, lo, lo + W) + integrate(gs, lo + W, hi - W) + integrate(gs, hi - W, hi);
}

}  // namespace detail

/// s -> gamma(F_C^{-1}(s)) where F_C is the time-C flow of the ramp; domain grows by 2C.
inline ProfileFunction stretch(const ProfileFunction& p, double C, const RampBump& bump) {
  if (!(C >= 0) || !std::isfinite(C)) throw domain_error("stretch: C must be finite and >= 0");
  detail::check_bump(p, bump);
  if (C == 0.0) return p;
  auto jet = [&](double s) {
    const auto j = detail::stretched_jet(p, C, bump, s);
    return std::array<double, 3>{j[0], j[1], j[2]};
  };
  const double L = p.ell() + 2 * C;
  auto knots = scan_grid(0.0, L, 64, {bump.center - bump.half_width, bump.center + bump.half_width + 2 * C});
  std::vector<double> nodes;
  for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
    auto piece = fit_quintic(jet, knots[i], knots[i + 1], 4, 1e-10);
    const auto& pn = piece.nodes();
    for (std::size_t k = nodes.empty() ? 0 : 1; k < pn.size(); ++k) nodes.push_back(pn[k].t);
  }
  nodes.back() = L;
  ProfileInfo info = p.info();
  info.params.push_back({"C", C});
  info.params.push_back({"bump_center", bump.center});
  info.params.push_back({"bump_half_width", bump.half_width});
  info.note = std::string("base ") + to_string(p.kind()) + "; bump S(u) = 35/16 (u - u^3 + 3u^5/5 - u^7/7) on |u| <= 1";
  return ProfileFunction::stretched(p, C, bump, nodes, info);
}

/// Finds C with int gamma = 2 by bracketing + TOMS 748, then removes the
/// remaining residual by an isotropic rescale.
inline ProfileFunction normalize_stretch(const ProfileFunction& p, const RampBump& bump, double* C_out = nullptr) {
  detail::check_bump(p, bump);
  const double base = gamma_integral(p);
  if (base >= 2.0 - 1e-12) throw infeasible_error("normalize_stretch: base area is already >= 4 pi, no stretch needed");
  auto resid = [&](double C) { return detail::stretched_integral(p, C, bump) - 2.0; };
  double lo = 0.0;
  double hi = std::max(1e-6, (2.0 - base) / (2.0 * std::max(p.gamma(bump.center), 1e-12)));
  int guard = 0;
  while (resid(hi) < 0.0) {
    lo = hi;
    hi *= 2.0;
    if (++guard > 80) throw numeric_error("normalize_stretch: could not bracket C");
  }
  double C = hi;
  if (lo < hi) {
    std::uintmax_t iters = 100;
    const auto [a, b] = boost::math::tools::toms748_solve(resid, lo, hi, boost::math::tools::eps_tolerance<double>(40), iters);
    C = 0.5 * (a + b);
  }
  if (C_out) *C_out = C;
  return normalized(stretch(p, C, bump));
}

/// Convex normalized profile with dgamma(delta) < eps: a small round cap whose
/// equatorial band is stretched into a cylinder.
inline ProfileFunction make_spindle(double delta, double eps) {
  if (!(delta > 0 && delta < pi / 2)) throw infeasible_error("spindle: delta must lie in (0, pi/2)");
  if (!(eps > 0)) throw infeasible_error("spindle: eps must be positive");
  const double theta = 0.5 * (std::acos(std::min(eps, 1.0)) + pi / 2);
  const double a = delta / theta;
  if (!(a < 1.0)) throw infeasible_error("spindle: no radius a in (2 delta/pi, 1) with cos(delta/a) < eps");
  auto base = ProfileFunction::sphere(a);
  RampBump bump{pi * a / 2, pi * a / 2 - delta};
  auto p = normalize_stretch(base, bump);
  p.info().params.insert(p.info().params.begin(), {{"delta", delta}, {"eps", eps}, {"radius", a}});
  return p;
}

/// Normalized profile with dgamma(delta) < -eps: a cap of radius a slightly
/// larger than delta/pi, stretched beyond delta.
inline ProfileFunction make_negative_action(double delta, double eps) {
  if (!(delta > 0)) throw infeasible_error("negative action: delta must be positive");
  if (!(eps > 0 && eps < 1)) throw infeasible_error("negative action: eps must lie in (0, 1)");
  const double theta = 0.5 * (pi - std::acos(eps) + pi);
  const double a = delta / theta;
  if (!(a < 1.0)) throw infeasible_error("negative action: delta too large for a cap of radius < 1");
  auto base = ProfileFunction::sphere(a);
  const double c = 0.5 * (delta + pi * a);
  RampBump bump{c, 0.8 * 0.5 * (pi * a - delta)};
  auto p = normalize_stretch(base, bump);
  p.info().params.insert(p.info().params.begin(), {{"delta", delta}, {"eps", eps}, {"radius", a}});
  return p;
}

}  // namespace magflow
