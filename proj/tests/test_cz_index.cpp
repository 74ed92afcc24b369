#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "magflow/cz_index.hpp"

using namespace magflow;

namespace {

SymplecticPath synthetic(double T, int n, const std::function<Mat2(double)>& f) {
  SymplecticPath p;
  for (int k = 0; k <= n; ++k) {
    const double t = T * k / n;
    p.times.push_back(t);
    p.matrices.push_back(f(t));
    p.h.push_back(1.0);
  }
  return p;
}

Mat2 rotation(double a) { return {std::cos(a), -std::sin(a), std::sin(a), std::cos(a)}; }

}  // namespace

TEST(CZ, CoframeBasics) {
  const auto e = make_ellipsoid(2.0);
  const PhasePoint x{1.1, 0.4, 0.0};
  const auto v = coframe_eval(e, x, {0.0, 1.0, 0.0});
  EXPECT_NEAR(v.alpha, 0.0, 1e-15);
  EXPECT_NEAR(v.psi, 1.0, 1e-15);
  EXPECT_NEAR(v.eta, 0.0, 1e-15);
  const auto w = coframe_eval(e, {1.1, 0.0, 0.0}, {1.0, 0.0, 0.0});
  EXPECT_NEAR(w.alpha, 1.0, 1e-15);
  EXPECT_NEAR(w.psi, 0.0, 1e-15);
  EXPECT_NEAR(w.eta, 0.0, 1e-15);
}

TEST(CZ, HValues) {
  const auto s = make_sphere();
  EXPECT_NEAR(h_value(s, 1.7, {0.8, 1.0, 0.0}), 1.7 * 1.7 + 1, 1e-13);
  EXPECT_NEAR(h_value(make_ellipsoid(4.0), 0.0, {0.8, 1.0, 0.0}), 1.0, 1e-15);
}

TEST(CZ, HPositiveInCertifiedBand) {
  const auto e = make_ellipsoid(2.0);
  ASSERT_LT(m_gamma(e), 2.0);
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> ut(1e-3, e.ell() - 1e-3), uphi(-pi, pi);
  for (double m : {0.1, 1.0, 5.0})
    for (int k = 0; k < 10000; ++k) ASSERT_GT(h_value(e, m, {ut(rng), uphi(rng), 0.0}), 0.0);
}

TEST(CZ, ChiInverseRoundTrip) {
  const auto e = make_ellipsoid(3.0);
  const double m = 0.2;
  const PhasePoint x{0.9, 0.7, 0.0};
  const auto w = chi_inverse(e, m, x, 0.3, -0.6);
  EXPECT_NEAR(tau_eval(e, m, x, w), 0.0, 1e-14);
  const auto c = coframe_eval(e, x, w);
  const double sh = std::sqrt(h_value(e, m, x));
  EXPECT_NEAR(sh * c.eta, 0.3, 1e-13);
  EXPECT_NEAR(sh * c.alpha, -0.6, 1e-13);
}

TEST(CZ, FiberPathIsRotation) {
  const auto path = linearized_flow(make_ellipsoid(2.0), 0.0, fiber_orbit(make_ellipsoid(2.0)), 2);
  for (std::size_t k = 0; k < path.times.size(); ++k) {
    const auto R = rotation(path.times[k]);
    for (int i = 0; i < 4; ++i) ASSERT_NEAR(path.matrices[k][i], R[i], 1e-6);
  }
}

TEST(CZ, LatitudeDetStaysOne) {
  const auto s = make_sphere();
  const auto lat = latitudes(s, 0.05).front();
  const auto path = linearized_flow(s, 0.05, latitude_orbit(s, 0.05, lat), 2);
  for (const auto& M : path.matrices) ASSERT_NEAR(mat_det(M), 1.0, 1e-6);
}

TEST(CZ, CoversRestrict) {
  const auto e = make_ellipsoid(2.0);
  const double m = 0.3;
  const auto lat = latitudes(e, m).front();
  const auto orb = latitude_orbit(e, m, lat);
  const auto one = linearized_flow(e, m, orb, 1, 512);
  const auto two = linearized_flow(e, m, orb, 2, 512);
  for (std::size_t k = 0; k < one.times.size(); ++k) {
    ASSERT_NEAR(two.times[k], one.times[k], 1e-12);
    for (int i = 0; i < 4; ++i) ASSERT_NEAR(two.matrices[k][i], one.matrices[k][i], 1e-8);
  }
}

TEST(CZ, WindingOfRotation) {
  const auto I = winding_interval(synthetic(4 * pi, 800, rotation));
  EXPECT_NEAR(I.lo, 2.0, 1e-9);
  EXPECT_NEAR(I.hi, 2.0, 1e-9);
}

TEST(CZ, WindingOfHyperbolic) {
  const double lambda = 0.7;
  const auto I = winding_interval(synthetic(3.0, 600, [&](double t) { return Mat2{std::exp(lambda * t), 0, 0, std::exp(-lambda * t)}; }));
  EXPECT_GT(I.lo, -0.25);
  EXPECT_LT(I.hi, 0.25);
  EXPECT_LT(I.length(), 0.5);
}

TEST(CZ, IndexFromInterval) {
  const auto d = cz_from_interval({2.0, 2.0});
  EXPECT_EQ(d.index, 3);
  EXPECT_TRUE(d.degenerate);
  EXPECT_EQ(cz_from_interval({0.6, 0.9}).index, 1);
  const auto e = cz_from_interval({1.8, 2.2});
  EXPECT_EQ(e.index, 4);
  EXPECT_FALSE(e.degenerate);
}

TEST(CZ, FiberIndex) {
  const auto r = fiber_cz(make_sphere(), 2);
  EXPECT_NEAR(r.cz.interval.lo, 2.0, 1e-6);
  EXPECT_NEAR(r.cz.interval.hi, 2.0, 1e-6);
  EXPECT_EQ(r.cz.index, 3);
  EXPECT_TRUE(r.cz.degenerate);
}

TEST(CZ, SphereLatitudeIndex) {
  const auto s = make_sphere();
  for (const auto& lat : latitudes(s, 0.1)) {
    const auto two = latitude_cz(s, 0.1, lat, 2);
    EXPECT_EQ(two.cz.index, 3);
    EXPECT_TRUE(two.contractible);
    EXPECT_LT(two.cz.interval.length(), 0.5);
    const auto one = latitude_cz(s, 0.1, lat, 1);
    EXPECT_FALSE(one.contractible);
    EXPECT_NEAR(one.cz.interval.lo, 0.5 * two.cz.interval.lo, 1e-3);
  }
}

TEST(CZ, EllipsoidIntervalsShort) {
  const auto e = make_ellipsoid(3.0);
  for (double m : {0.1, 0.3})
    for (const auto& lat : latitudes(e, m)) {
      const auto r = latitude_cz(e, m, lat, 2);
      EXPECT_LT(r.cz.interval.length(), 0.5);
      EXPECT_LT(r.max_det_defect, 1e-6);
    }
}

TEST(CZ, ReportSmallM) {
  const auto r0 = dynamical_convexity_report(make_sphere(), 0.0);
  EXPECT_NEAR(r0.lhs, 0.5, 1e-12);
  EXPECT_NEAR(r0.rhs, 1.0, 1e-7);
  EXPECT_TRUE(r0.verdict);
  const auto r = dynamical_convexity_report(make_sphere(), 0.05);
  EXPECT_LT(r.lhs, 0.6);
  EXPECT_GT(r.rhs, 0.9);
  EXPECT_TRUE(r.verdict);
}

TEST(CZ, RhoVanishesWithM) {
  const auto s = make_sphere();
  double prev = 1.0;
  for (double m : {0.2, 0.1, 0.05}) {
    const auto lat = latitudes(s, m).front();
    const double r = rho_sup(linearized_flow(s, m, latitude_orbit(s, m, lat), 1));
    EXPECT_NEAR(r, m * m / (1 + m * m), 1e-6);
    EXPECT_LT(r, prev);
    prev = r;
  }
}
