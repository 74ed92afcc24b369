#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "magflow/profile.hpp"

using namespace magflow;

TEST(Profile, SphereEquator) {
  const auto p = make_sphere();
  const auto j = p.jet(pi / 2);
  EXPECT_NEAR(j.gamma, 1.0, 1e-14);
  EXPECT_NEAR(j.dgamma, 0.0, 1e-14);
  EXPECT_NEAR(j.Gamma, 0.0, 1e-14);
  EXPECT_NEAR(p.curvature(pi / 2), 1.0, 1e-12);
}

TEST(Profile, SpherePole) {
  const auto p = make_sphere();
  const auto j = p.jet(0.0);
  EXPECT_EQ(j.gamma, 0.0);
  EXPECT_NEAR(j.dgamma, 1.0, 1e-14);
  EXPECT_NEAR(j.Gamma, -1.0, 1e-14);
  EXPECT_NEAR(p.curvature(0.0), 1.0, 1e-10);
}

TEST(Profile, OutsideDomainThrows) {
  const auto p = make_sphere();
  EXPECT_THROW(p.jet(-0.1), domain_error);
  EXPECT_THROW(p.jet(pi + 0.1), domain_error);
}

TEST(Profile, UnitRatioEllipsoidIsSphere) {
  const auto e = make_ellipsoid(1.0);
  const auto s = make_sphere();
  for (double t : {0.0, 0.3, 1.0, pi / 2, 2.5, pi}) {
    EXPECT_NEAR(e.gamma(t), s.gamma(t), 1e-10);
    EXPECT_NEAR(e.dgamma(t), s.dgamma(t), 1e-10);
    EXPECT_NEAR(e.Gamma(t), s.Gamma(t), 1e-10);
  }
}

TEST(Profile, Areas) {
  EXPECT_NEAR(area(make_sphere()), 4 * pi, 1e-10);
  EXPECT_NEAR(area(make_ellipsoid(0.5)), 4 * pi, 1e-8);
  EXPECT_NEAR(area(make_ellipsoid(4.0)), 4 * pi, 1e-8);
  EXPECT_NEAR(area(make_spindle(0.05, 0.1)), 4 * pi, 1e-8);
  // unit-integral rescaling of the sphere
  const auto half = make_sphere().rescaled(std::sqrt(0.5));
  EXPECT_NEAR(area(half), 2 * pi, 1e-10);
}

TEST(Profile, ValidateSphere) { EXPECT_TRUE(validate(make_sphere()).passed()); }

TEST(Profile, ValidateCatchesHalfIntegral) {
  // 0.5 sin t on [0, pi] integrates to 1
  std::vector<double> t, g;
  for (int i = 0; i <= 400; ++i) {
    t.push_back(pi * i / 400.0);
    g.push_back(0.5 * std::sin(t.back()));
  }
  const auto r = validate(make_sampled(t, g), 1e-6);
  EXPECT_FALSE(r.passed());
  ASSERT_NE(r.find("normalization"), nullptr);
  EXPECT_FALSE(r.find("normalization")->passed);
  EXPECT_FALSE(r.find("boundary_derivative")->passed);
}

TEST(Profile, ValidateCatchesBoundarySlope) {
  std::vector<double> t, g;
  for (int i = 0; i <= 400; ++i) {
    t.push_back(pi * i / 400.0);
    g.push_back(0.9 * std::sin(t.back()));
  }
  const auto r = validate(make_sampled(t, g), 1e-6);
  EXPECT_FALSE(r.find("boundary_derivative")->passed);
}

TEST(Profile, SampledSphereRoundTrip) {
  std::vector<double> t, g;
  for (int i = 0; i <= 2000; ++i) {
    t.push_back(pi * i / 2000.0);
    g.push_back(std::sin(t.back()));
  }
  const auto p = make_sampled(t, g);
  for (double x : {0.1, 1.0, 2.0, 3.0}) {
    EXPECT_NEAR(p.gamma(x), std::sin(x), 1e-9);
    EXPECT_NEAR(p.dgamma(x), std::cos(x), 1e-7);
  }
  EXPECT_TRUE(validate(p, 1e-6).passed());
}

TEST(Profile, EllipsoidsValidateAndAreSymmetric) {
  for (double r : {0.5, 2.0, 4.0}) {
    const auto p = make_ellipsoid(r);
    EXPECT_TRUE(validate(p).passed()) << r;
    EXPECT_LT(symmetry_defect(p), 1e-8) << r;
  }
}

TEST(Profile, EllipsoidRejectsBadRatio) {
  EXPECT_ANY_THROW(make_ellipsoid(0.0));
  EXPECT_ANY_THROW(make_ellipsoid(-1.0));
}

TEST(Profile, StretchByZeroIsIdentity) {
  const auto base = ProfileFunction::sphere(0.8);
  const RampBump b{0.4 * pi, 0.3};
  const auto s = stretch(base, 0.0, b);
  for (double t : {0.1, 0.7, 1.2, 2.0})
    EXPECT_NEAR(s.gamma(t), base.gamma(t), 1e-12);
}

TEST(Profile, StretchAreaIncreases) {
  const auto base = ProfileFunction::sphere(0.6);
  const RampBump b{0.3 * pi, 0.2};
  double prev = area(base);
  for (double C : {0.1, 0.5, 1.0, 2.0}) {
    const auto s = stretch(base, C, b);
    const double A = area(s);
    EXPECT_GT(A, prev) << C;
    prev = A;
    const auto r = validate(s);
    EXPECT_TRUE(r.find("boundary_values")->passed);
    EXPECT_TRUE(r.find("boundary_derivative")->passed);
    EXPECT_TRUE(r.find("interior_positive")->passed);
  }
}

TEST(Profile, NormalizeStretchHitsUnitIntegral) {
  const auto base = ProfileFunction::sphere(0.8);
  const auto p = normalize_stretch(base, RampBump{0.4 * pi, 0.3});
  EXPECT_NEAR(area(p), 4 * pi, 1e-8);
  EXPECT_ANY_THROW(normalize_stretch(make_sphere(), RampBump{pi / 2, 0.3}));
}

TEST(Profile, SpindleSlopeAndConvexity) {
  const auto p = make_spindle(0.1, 0.05);
  EXPECT_LT(p.dgamma(0.1), 0.05);
  double minK = 1e300;
  for (int i = 0; i <= 4000; ++i) minK = std::min(minK, p.curvature(p.ell() * i / 4000.0));
  EXPECT_GE(minK, -1e-10);
  EXPECT_TRUE(validate(p).passed());
}

TEST(Profile, SpindleInfeasible) {
  EXPECT_THROW(make_spindle(1.6, 0.1), infeasible_error);
  EXPECT_THROW(make_spindle(0.1, 0.0), infeasible_error);
}

TEST(Profile, NegativeActionProfile) {
  const auto p = make_negative_action(0.1, 0.9);
  EXPECT_LT(p.dgamma(0.1), -0.9);
  EXPECT_TRUE(validate(p).passed());
  EXPECT_NEAR(area(p), 4 * pi, 1e-8);
}
