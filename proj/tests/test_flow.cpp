#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "magflow/flow.hpp"

using namespace magflow;

TEST(Flow, VectorFieldLatitude) {
  const auto v = vector_field(make_sphere(), 1.0, {pi / 4, pi / 2, 0.0});
  EXPECT_NEAR(v[0], 0.0, 1e-15);
  EXPECT_NEAR(v[1], 0.0, 1e-15);
  EXPECT_NEAR(v[2], std::sqrt(2.0), 1e-14);
}

TEST(Flow, VectorFieldSpecialCases) {
  const auto e = make_ellipsoid(2.0);
  const auto v0 = vector_field(e, 0.0, {1.0, 0.7, 0.3});
  EXPECT_EQ(v0[0], 0.0);
  EXPECT_EQ(v0[1], 1.0);
  EXPECT_EQ(v0[2], 0.0);
  const auto v = vector_field(e, 0.8, {1.0, 0.0, 0.0});
  EXPECT_NEAR(v[0], 0.8, 1e-15);
  EXPECT_NEAR(v[2], 0.0, 1e-15);
  EXPECT_THROW(vector_field(e, 0.8, {0.0, 0.0, 0.0}), domain_error);
}

TEST(Flow, StaysBetweenTurningPoints) {
  const auto s = make_sphere();
  const auto [a, b] = turning_points(s, 1.0, 1.2);
  // phi = pi/2 at t where sin t - cos t ... start at a turning point
  const auto tr = integrate(s, 1.0, {a, pi / 2, 0.0}, 100.0, {1e-12, 1e-13, 0.01});
  double lo = 10, hi = -10;
  for (const auto& x : tr.x) {
    lo = std::min(lo, x[0]);
    hi = std::max(hi, x[0]);
  }
  EXPECT_NEAR(lo, a, 1e-6);
  EXPECT_NEAR(hi, b, 1e-6);
}

TEST(Flow, LatitudeIsEquilibrium) {
  const auto e = make_ellipsoid(2.0);
  const double m = 0.6;
  for (const auto& l : latitudes(e, m)) {
    const auto tr = integrate(e, m, {l.t0, l.sign * pi / 2, 0.0}, 100.0);
    for (const auto& x : tr.x) {
      EXPECT_NEAR(x[0], l.t0, 1e-9);
      EXPECT_NEAR(x[1], l.sign * pi / 2, 1e-9);
    }
  }
}

TEST(Flow, FiberRotationReturns) {
  const auto tr = integrate(make_ellipsoid(3.0), 0.0, {1.0, 0.2, 0.5}, 4 * pi);
  const auto& x = tr.x.back();
  EXPECT_EQ(tr.s.back(), 4 * pi);
  EXPECT_NEAR(x[0], 1.0, 1e-14);
  EXPECT_NEAR(x[1], 0.2 + 4 * pi, 1e-9);
  EXPECT_NEAR(x[2], 0.5, 1e-14);
  EXPECT_LT(tr.I_drift, 1e-15);
}

TEST(Flow, DriftAtDefaultTolerance) {
  const auto e = make_ellipsoid(2.0);
  const auto tr = integrate(e, 1.0, {0.9, 0.3, 0.0}, 1000.0);
  EXPECT_LT(tr.I_drift, 1e-8);
  EXPECT_NEAR(invariant_drift(e, 1.0, tr), tr.I_drift, 0.0);
}

TEST(Flow, DriftGrowsWithTolerance) {
  const auto e = make_ellipsoid(2.0);
  double prev = 0.0;
  for (double tol : {1e-12, 1e-9, 1e-6}) {
    const double d = integrate(e, 1.0, {0.9, 0.3, 0.0}, 300.0, {tol, tol * 0.1}).I_drift;
    EXPECT_GT(d, prev) << tol;
    prev = d;
  }
}

TEST(Flow, Reversible) {
  const auto e = make_ellipsoid(0.5);
  const PhasePoint x0{1.3, 0.4, 0.1};
  const auto fwd = integrate(e, 0.7, x0, 100.0);
  const auto back = integrate(e, 0.7, fwd.x.back(), -100.0);
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(back.x.back()[i], x0[i], 1e-7);
}

TEST(Flow, SampleGrid) {
  const auto tr = integrate(make_sphere(), 0.5, {1.0, 0.0, 0.0}, 1.0, {1e-12, 1e-13, 0.25});
  ASSERT_EQ(tr.s.size(), 5u);
  for (int i = 0; i < 5; ++i) EXPECT_NEAR(tr.s[i], 0.25 * i, 1e-15);
}

TEST(Flow, RejectsZeroTime) { EXPECT_THROW(integrate(make_sphere(), 1.0, {1.0, 0.0, 0.0}, 0.0), domain_error); }

TEST(Flow, BirkhoffSphere) {
  for (double m : {0.3, 1.0, 2.0}) {
    const auto b = birkhoff_action_ode(make_sphere(), m, {1.0, 0.2, 0.0}, 200.0);
    EXPECT_NEAR(b.raw, 1 + m * m, 1e-8);
  }
}

TEST(Flow, BirkhoffMatchesQuadrature) {
  const auto e = make_ellipsoid(2.0);
  const double m = 1.0;
  const double a = turning_points(e, m, 0.0).first;
  const double phi = std::abs(I_hat(e, m, a, pi / 2)) < 1e-8 ? pi / 2 : -pi / 2;
  const auto avg = birkhoff_action_ode(e, m, {a, phi, 0.0}, 500.0);
  const double q = birkhoff_action(e, m, 0.0).action;
  EXPECT_NEAR(avg.trimmed, q, 1e-3 * std::abs(q));
  EXPECT_GT(avg.periods, 10);
}

TEST(Flow, BirkhoffOnLatitude) {
  const auto e = make_ellipsoid(4.0);
  const double m = 0.5;
  for (const auto& l : latitudes(e, m)) {
    const auto avg = birkhoff_action_ode(e, m, {l.t0, l.sign * pi / 2, 0.0}, 50.0);
    EXPECT_NEAR(avg.raw, l.action, 1e-8);
  }
}

TEST(Flow, LiouvilleAverage) {
  EXPECT_NEAR(liouville_action(make_sphere(), 1.0), 2.0, 1e-8);
  for (const auto& p : {make_ellipsoid(3.0), make_spindle(0.1, 0.2)}) {
    EXPECT_NEAR(liouville_action(p, 0.0), 1.0, 1e-8);
    EXPECT_NEAR(liouville_action(p, 3.0), 10.0, 1e-6);
  }
}
