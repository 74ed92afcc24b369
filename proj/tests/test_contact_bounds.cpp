#include <gtest/gtest.h>

#include <cmath>

#include "magflow/contact_bounds.hpp"

using namespace magflow;

TEST(ContactBounds, BetaVanishesOnSphere) {
  const auto p = make_sphere();
  for (double t : {0.0, 0.4, pi / 2, 2.9, pi}) EXPECT_NEAR(beta_theta(p, t), 0.0, 1e-10);
}

TEST(ContactBounds, BetaVanishesAtPoles) {
  for (const auto& p : {make_ellipsoid(3.0), make_spindle(0.1, 0.2)}) {
    EXPECT_NEAR(beta_theta(p, 0.0), 0.0, 1e-10);
    EXPECT_NEAR(beta_theta(p, p.ell()), 0.0, 1e-10);
  }
}

TEST(ContactBounds, MGammaSphere) {
  EXPECT_NEAR(m_gamma(make_sphere()), 0.0, 1e-8);
  EXPECT_NEAR(m_gamma(make_ellipsoid(1.0)), 0.0, 1e-8);
}

TEST(ContactBounds, MGammaSpindleIsLarge) { EXPECT_GT(m_gamma(make_spindle(0.05, 0.1)), 18.05); }

TEST(ContactBounds, IntervalForSphere) {
  const auto r = contact_interval(make_sphere());
  ASSERT_EQ(r.certified_intervals.size(), 1u);
  EXPECT_EQ(r.certified_intervals[0].lo, 0.0);
  EXPECT_TRUE(std::isinf(r.certified_intervals[0].hi));
  EXPECT_FALSE(r.m_minus);
  EXPECT_TRUE(r.certified(123.0));
}

TEST(ContactBounds, QuadraticRoots) {
  auto d = m_plus_minus(2.0);
  ASSERT_TRUE(d);
  EXPECT_NEAR(d->first, 1.0, 1e-12);
  EXPECT_NEAR(d->second, 1.0, 1e-12);
  auto r = m_plus_minus(2.5);
  ASSERT_TRUE(r);
  EXPECT_NEAR(r->first, 0.5, 1e-12);
  EXPECT_NEAR(r->second, 2.0, 1e-12);
  EXPECT_FALSE(m_plus_minus(1.5));
}

TEST(ContactBounds, GapExcludedFromIntervals) {
  const auto r = contact_interval(make_ellipsoid(4.0));
  ASSERT_TRUE(r.m_minus);
  EXPECT_TRUE(r.certified(0.5 * *r.m_minus));
  EXPECT_FALSE(r.certified(0.5 * (*r.m_minus + *r.m_plus)));
  EXPECT_TRUE(r.certified(2.0 * *r.m_plus));
  EXPECT_NEAR(*r.m_minus * *r.m_plus, 1.0, 1e-10);
}

TEST(ContactBounds, MagneticCurvature) {
  const auto p = make_sphere();
  EXPECT_NEAR(magnetic_curvature(p, 2.0, pi / 2), 5.0, 1e-12);
  const auto e = make_ellipsoid(2.0);
  for (double m : {0.1, 1.0, 10.0})
    for (double t : {0.1, 1.0, 2.0}) EXPECT_GE(magnetic_curvature(e, m, t), 1.0 - 1e-12);
}

TEST(ContactBounds, KmThreshold) {
  EXPECT_NEAR(km_threshold(-4.0), 0.5, 1e-15);
  EXPECT_TRUE(std::isinf(km_threshold(0.3)));
  const auto p = make_negative_action(0.1, 0.9);
  const double mk = km_threshold(min_curvature(p).first);
  EXPECT_TRUE(km_positive(p, 0.9 * mk));
  EXPECT_FALSE(km_positive(p, 1.1 * mk));
}

TEST(ContactBounds, SymmetricIncreasing) {
  const auto s = symmetric_increasing_check(make_sphere());
  EXPECT_TRUE(s.hypothesis_holds);
  EXPECT_TRUE(s.conclusion_holds);
  const auto o = symmetric_increasing_check(make_ellipsoid(0.5));
  EXPECT_TRUE(o.hypothesis_holds);
  EXPECT_TRUE(o.conclusion_holds);
  // round caps joined by a flat band: curvature drops toward the equator
  const auto sp = symmetric_increasing_check(make_spindle(0.1, 0.2));
  EXPECT_FALSE(sp.K_increasing);
  EXPECT_FALSE(sp.hypothesis_holds);
}
