#pragma once

// The magnetic vector field X^m = m X + V in (t, phi, theta) coordinates and
// its numerical integration.

#include <array>
#include <cmath>
#include <cstddef>
#include <vector>

#include <boost/numeric/odeint.hpp>

#include "magflow/contact_bounds.hpp"
#include "magflow/error.hpp"
#include "magflow/numerics.hpp"
#include "magflow/profile.hpp"
#include "magflow/reduced_dynamics.hpp"

namespace magflow {

/// (t, phi, theta); angles are kept unwrapped.
using PhasePoint = std::array<double, 3>;

struct IntegrateOptions {
  double rtol = 1e-12;
  double atol = 1e-13;
  double sample_dt = 0.0;  // 0: one sample per accepted step
  std::size_t max_steps = 50'000'000;
};

struct Trajectory {
  std::vector<double> s;
  std::vector<PhasePoint> x;
  double I_drift = 0.0;
  std::size_t steps = 0;
};

inline double pole_guard(const ProfileFunction& p) { return 1e-6 * p.ell(); }

inline void check_interior(const ProfileFunction& p, double t) {
  const double eps = pole_guard(p);
  if (!(t > eps && t < p.ell() - eps)) throw domain_error("pole guard: t = " + std::to_string(t) + " too close to a pole");
}

/// (dt/ds, dphi/ds, dtheta/ds) = (m cos phi, 1 - m dgamma sin phi / gamma, m sin phi / gamma)
inline PhasePoint vector_field(const ProfileFunction& p, double m, const PhasePoint& x) {
  check_interior(p, x[0]);
  const auto j = p.jet(x[0]);
  const double sp = std::sin(x[1]), cp = std::cos(x[1]);
  return {m * cp, 1.0 - m * j.dgamma * sp / j.gamma, m * sp / j.gamma};
}

/// h = m^2 + 1 - m beta_theta sin(phi) / gamma, the contact form on X^m
inline double h_integrand(const ProfileFunction& p, double m, const PhasePoint& x) {
  const auto j = p.jet(x[0]);
  return m * m + 1.0 - m * (j.Gamma + j.dgamma) * std::sin(x[1]) / j.gamma;
}

namespace detail {

inline bool interior(const ProfileFunction& p, double t) {
  const double eps = pole_guard(p);
  return t > eps && t < p.ell() - eps;
}

// Trial stages may leave the chart; a huge slope forces the step to be rejected.
inline PhasePoint trial_field(const ProfileFunction& p, double m, const PhasePoint& x) {
  if (!interior(p, x[0])) return {1e30, 1e30, 1e30};
  return vector_field(p, m, x);
}

// Accepted-step view handed to observers. Angles are re-based inside the
// stepper so that relative tolerances do not loosen as they grow; the view
// adds the offsets back.
template <class State, class Stepper>
struct StepView {
  Stepper& st;
  const State& offset;
  double current_time() const { return st.current_time(); }
  double previous_time() const { return st.previous_time(); }
  State current_state() const { return shift(st.current_state()); }
  void calc_state(double s, State& x) const {
    st.calc_state(s, x);
    x = shift(x);
  }
  State shift(State x) const {
    for (std::size_t i = 0; i < x.size(); ++i) x[i] += offset[i];
    return x;
  }
};

// angle_mask: components wrapped by multiples of 2 pi; sum_mask: running
// integrals reset to zero.
template <class State, class System, class Observer>
std::size_t run_dense(const ProfileFunction& p, System sys, State x0, double T, const IntegrateOptions& o, const State& angle_mask, const State& sum_mask,
                      Observer&& obs) {
  using namespace boost::numeric::odeint;
  auto stepper = make_dense_output(o.atol, o.rtol, runge_kutta_dopri5<State>());
  const double dir = T >= 0 ? 1.0 : -1.0;
  State offset{};
  State local = x0;
  stepper.initialize(local, 0.0, dir * std::min(1e-3, std::abs(T)));
  StepView<State, decltype(stepper)> view{stepper, offset};
  std::size_t steps = 0;
  while (dir * stepper.current_time() < dir * T) {
    stepper.do_step(sys);
    if (++steps > o.max_steps) throw numeric_error("integrator: step budget exhausted");
    const double h = stepper.current_time() - stepper.previous_time();
    if (!(std::abs(h) > 1e-15 * std::max(1.0, std::abs(stepper.current_time())))) throw numeric_error("integrator: step size underflow");
    if (!interior(p, stepper.current_state()[0])) throw domain_error("pole guard: trajectory reached t = " + std::to_string(stepper.current_state()[0]));
    obs(view);
    bool rebase = false;
    local = stepper.current_state();
    for (std::size_t i = 0; i < local.size(); ++i) {
      if (angle_mask[i] != 0 && std::abs(local[i]) > pi) {
        const double k = 2.0 * pi * std::round(local[i] / (2.0 * pi));
        local[i] -= k;
        offset[i] += k;
        rebase = true;
      }
      if (sum_mask[i] != 0 && std::abs(local[i]) > 64.0) {
        offset[i] += local[i];
        local[i] = 0.0;
        rebase = true;
      }
    }
    if (rebase) stepper.initialize(local, stepper.current_time(), h);
  }
  return steps;
}

}  // namespace detail

inline Trajectory integrate(const ProfileFunction& p, double m, const PhasePoint& x0, double T, const IntegrateOptions& o = {}) {
  if (T == 0.0) throw domain_error("integrate: T must be nonzero");
  check_interior(p, x0[0]);
  auto sys = [&](const PhasePoint& x, PhasePoint& dx, double) { dx = detail::trial_field(p, m, x); };
  Trajectory tr;
  tr.s.push_back(0.0);
  tr.x.push_back(x0);
  const double dir = T > 0 ? 1.0 : -1.0;
  const double eps_s = 1e-12 * std::abs(T);
  double next = dir * o.sample_dt;
  PhasePoint end = x0;
  tr.steps = detail::run_dense<PhasePoint>(p, sys, x0, T, o, {0, 1, 1}, {0, 0, 0}, [&](auto& st) {
    const bool past = dir * st.current_time() >= dir * T;
    if (past) st.calc_state(T, end);
    if (o.sample_dt > 0) {
      while (dir * next < dir * T - eps_s && dir * next <= dir * st.current_time()) {
        PhasePoint x;
        st.calc_state(next, x);
        tr.s.push_back(next);
        tr.x.push_back(x);
        next += dir * o.sample_dt;
      }
    } else if (!past) {
      tr.s.push_back(st.current_time());
      tr.x.push_back(st.current_state());
    }
  });
  tr.s.push_back(T);
  tr.x.push_back(end);
  const double I0 = I_hat(p, m, x0[0], x0[1]);
  for (const auto& x : tr.x) tr.I_drift = std::max(tr.I_drift, std::abs(I_hat(p, m, x[0], x[1]) - I0));
  return tr;
}

inline double invariant_drift(const ProfileFunction& p, double m, const Trajectory& tr) {
  if (tr.x.empty()) return 0.0;
  const double I0 = I_hat(p, m, tr.x.front()[0], tr.x.front()[1]);
  double d = 0.0;
  for (const auto& x : tr.x) d = std::max(d, std::abs(I_hat(p, m, x[0], x[1]) - I0));
  return d;
}

struct BirkhoffAverage {
  double raw;         // (1/T) int_0^T h ds
  double trimmed;     // average over whole reduced periods
  int periods;        // number of whole reduced periods used
  double tail;        // |raw - trimmed|
};

/// Time average of h along the orbit of x0. The trimmed value averages
/// between the first and last upward crossings of cos(phi), i.e. over whole
/// periods of the reduced motion.
inline BirkhoffAverage birkhoff_action_ode(const ProfileFunction& p, double m, const PhasePoint& x0, double T,
                                          const IntegrateOptions& o = {}) {
  using State = std::array<double, 4>;
  check_interior(p, x0[0]);
  auto sys = [&](const State& x, State& dx, double) {
    const auto v = detail::trial_field(p, m, {x[0], x[1], x[2]});
    dx = {v[0], v[1], v[2], v[0] == 1e30 ? 1e30 : h_integrand(p, m, {x[0], x[1], x[2]})};
  };
  std::vector<std::pair<double, double>> crossings;  // (s, int h)
  State prev{x0[0], x0[1], x0[2], 0.0};
  double prev_s = 0.0;
  State last = prev;
  detail::run_dense<State>(p, sys, prev, T, o, {0, 1, 1, 0}, {0, 0, 0, 1}, [&](auto& st) {
    const State cur = st.current_state();
    const double c0 = std::cos(prev[1]), c1 = std::cos(cur[1]);
    if (c0 <= 0.0 && c1 > 0.0 && st.current_time() <= T) {
      State tmp;
      const double sc = bisect(
          [&](double s) {
            st.calc_state(s, tmp);
            return std::cos(tmp[1]);
          },
          prev_s, st.current_time(), 1e-13);
      st.calc_state(sc, tmp);
      crossings.emplace_back(sc, tmp[3]);
    }
    if (st.current_time() >= T) st.calc_state(T, last);
    else last = cur;
    prev = cur;
    prev_s = st.current_time();
  });
  BirkhoffAverage b{};
  b.raw = last[3] / T;
  if (crossings.size() >= 2) {
    const auto& a = crossings.front();
    const auto& z = crossings.back();
    b.trimmed = (z.second - a.second) / (z.first - a.first);
    b.periods = int(crossings.size()) - 1;
  } else {
    b.trimmed = b.raw;
    b.periods = 0;
  }
  b.tail = std::abs(b.raw - b.trimmed);
  return b;
}

/// Average of h over the unit tangent bundle against the Liouville measure
/// gamma dt dphi dtheta.
inline double liouville_action(const ProfileFunction& p, double m) {
  auto inner = [&](double t) {
    if (t <= 0.0 || t >= p.ell()) return 0.0;
    const auto j = p.jet(t);
    const double b = (j.Gamma + j.dgamma) / j.gamma;
    const double hphi = gauss32([&](double phi) { return m * m + 1.0 - m * b * std::sin(phi); }, 0.0, 2.0 * pi);
    return j.gamma * hphi;
  };
  auto k = p.knots();
  if (k.size() < 64) k = scan_grid(0.0, p.ell(), 64, k);
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i + 1 < k.size(); ++i) {
    num += gauss32(inner, k[i], k[i + 1]);
    den += gauss32([&](double t) { return p.gamma(t); }, k[i], k[i + 1]);
  }
  return num / (2.0 * pi * den);
}

}  // namespace magflow
