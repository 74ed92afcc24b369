#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "magflow/cz_index.hpp"
#include "magflow/hopf_cover.hpp"

using namespace magflow;

namespace {

Quaternion fiber_point(const Quaternion& U, double t) { return Quaternion{std::cos(t), std::sin(t), 0, 0} * U; }

KnotPolyline fiber(const Quaternion& U) {
  return KnotPolyline::sample([&](double t) { return fiber_point(U, t); }, 128);
}

}  // namespace

TEST(Hopf, ConjugationIdentity) {
  std::mt19937_64 rng(3);
  const auto V = Quaternion::imag({0.3, -0.2, 0.9});
  const auto W = conj_rot(q_one, V);
  EXPECT_EQ(W.w, V.w);
  EXPECT_EQ(W.x, V.x);
  EXPECT_EQ(W.y, V.y);
  EXPECT_EQ(W.z, V.z);
  const auto U = random_unit(rng);
  EXPECT_NEAR(conj_rot(U, V).norm(), V.norm(), 1e-14);
  EXPECT_THROW(conj_rot(Quaternion{2, 0, 0, 0}, V), domain_error);
}

TEST(Hopf, QuarterTurn) {
  const Quaternion U{std::cos(pi / 4), std::sin(pi / 4), 0, 0};
  const auto r = conj_rot(U, q_j);
  // rotation by -pi/2 about i sends j to -k
  EXPECT_NEAR(r.w, 0.0, 1e-15);
  EXPECT_NEAR(r.x, 0.0, 1e-15);
  EXPECT_NEAR(r.y, 0.0, 1e-15);
  EXPECT_NEAR(r.z, -1.0, 1e-15);
}

TEST(Hopf, P0AtIdentityAndParity) {
  const auto z = p0(q_one);
  EXPECT_EQ((z.u1 - q_i).norm(), 0.0);
  EXPECT_EQ((z.u2 - q_j).norm(), 0.0);
  std::mt19937_64 rng(11);
  for (int k = 0; k < 100; ++k) {
    const auto U = random_unit(rng);
    const auto a = p0(U), b = p0(-U);
    ASSERT_EQ((a.u1 - b.u1).norm(), 0.0);
    ASSERT_EQ((a.u2 - b.u2).norm(), 0.0);
  }
}

TEST(Hopf, DerivativeMatchesDifference) {
  std::mt19937_64 rng(5);
  const auto U = random_unit(rng);
  const auto W = random_tangent(U, rng);
  const double h = 1e-6;
  const auto a = p0((U + W * h).normalized()), b = p0((U - W * h).normalized());
  const auto d = dp0(U, W);
  EXPECT_NEAR(((a.u1 - b.u1) * (1 / (2 * h)) - d.u1).norm(), 0.0, 1e-8);
  EXPECT_NEAR(((a.u2 - b.u2) * (1 / (2 * h)) - d.u2).norm(), 0.0, 1e-8);
  EXPECT_THROW(dp0(U, U), domain_error);
}

TEST(Hopf, Pullback) {
  EXPECT_LT(pullback_residual(1000), 1e-10);
  // pinned sample at the identity: W = i gives lambda = 1, psi0 = -2
  EXPECT_NEAR(lambda_st(q_one, q_i), 1.0, 1e-15);
  EXPECT_NEAR(psi0(p0(q_one), dp0(q_one, q_i)), -2.0, 1e-15);
}

TEST(Hopf, RoundHessian) {
  const auto c = hessian_convexity([](const Quaternion&) { return 2.0; }, 64);
  EXPECT_NEAR(c.min_eigenvalue, 1.0, 1e-6);
}

TEST(Hopf, SmallPerturbationConvex) {
  auto rho = [](const Quaternion& z) { return 2.0 * std::exp(0.005 * (z.x * z.y + z.z * z.z - 0.3 * z.w)); };
  EXPECT_GT(hessian_convexity(rho, 64).min_eigenvalue, 0.0);
}

TEST(Hopf, SteepBumpNotConvex) {
  auto rho = [](const Quaternion& z) {
    const double d = (z - q_one).norm();
    return 2.0 * std::exp(5.0 * std::exp(-d * d / 0.02));
  };
  EXPECT_LT(hessian_convexity(rho, 256).min_eigenvalue, 0.0);
}

TEST(Hopf, HopfFibersLink) {
  std::mt19937_64 rng(9);
  for (int k = 0; k < 3; ++k) {
    const auto a = random_unit(rng), b = random_unit(rng);
    EXPECT_EQ(std::abs(gauss_linking(fiber(a), fiber(b), 2)), 1);
  }
}

TEST(Hopf, SeparatedCircles) {
  auto circle = [](double w0) {
    const double r = std::sqrt(1 - w0 * w0);
    return KnotPolyline::sample([=](double t) { return Quaternion{w0, r * std::cos(t), r * std::sin(t), 0}; }, 128);
  };
  EXPECT_EQ(gauss_linking(circle(0.8), circle(-0.8)), 0);
}

TEST(Hopf, TwoTwistAntipodalPair) {
  const auto k = KnotPolyline::sample(
      [](double s) { return Quaternion{std::cos(s), std::sin(s), std::cos(2 * s), std::sin(2 * s)} * (1 / std::sqrt(2.0)); }, 256);
  const auto r = antipodal_link_parity(k);
  ASSERT_TRUE(r.disjoint);
  ASSERT_TRUE(r.lk);
  EXPECT_EQ(std::abs(*r.lk), 2);
  EXPECT_TRUE(r.even);
}

TEST(Hopf, FiberMeetsItsAntipode) {
  std::mt19937_64 rng(2);
  const auto r = antipodal_link_parity(fiber(random_unit(rng)));
  EXPECT_FALSE(r.disjoint);
  EXPECT_FALSE(r.lk);
}

TEST(Hopf, ContractibleLoopsLinkEvenly) {
  for (double a : {0.3, 0.6, 1.0}) {
    auto c = [a](double s) { return std::array<double, 3>{a * std::sin(s), 0.5 * a * std::sin(s) * std::cos(s), 1.0}; };
    std::vector<SpherePair> path;
    for (int i = 0; i <= 800; ++i) path.push_back(curve_state(c, 2 * pi * i / 800));
    const auto L = lift_path(path, 1e-6);
    ASSERT_TRUE(L.closes_once);
    std::vector<Quaternion> pts(L.lift.begin(), L.lift.end() - 1);
    const auto r = antipodal_link_parity(KnotPolyline::from_points(pts));
    ASSERT_TRUE(r.disjoint);
    EXPECT_TRUE(r.even);
  }
}

TEST(Hopf, FiberLoopLiftsOpen) {
  std::vector<SpherePair> one, two;
  for (int i = 0; i <= 400; ++i) one.push_back(round_sphere_state(1.0, 2 * pi * i / 400, 0.3));
  for (int i = 0; i <= 800; ++i) two.push_back(round_sphere_state(1.0, 4 * pi * i / 800, 0.3));
  const auto a = lift_path(one);
  EXPECT_FALSE(a.closes_once);
  EXPECT_TRUE(a.closes_twice);
  EXPECT_TRUE(lift_path(two).closes_once);
}

TEST(Hopf, ConstantPathLift) {
  const std::vector<SpherePair> path(10, round_sphere_state(0.7, 0.2, 1.0));
  const auto L = lift_path(path);
  for (const auto& U : L.lift) EXPECT_EQ((U - L.lift.front()).norm(), 0.0);
  EXPECT_TRUE(L.closes_once);
}

TEST(Hopf, PreimageProjects) {
  std::mt19937_64 rng(4);
  for (int k = 0; k < 50; ++k) {
    const auto z = p0(random_unit(rng));
    EXPECT_LT(ss2_distance(p0(p0_preimage(z)), z), 1e-13);
  }
}

// Prime torus orbits on the ratio-2 ellipsoid at m = 1, carried to the round
// sphere by t -> pi t / ell. Lift closes after one period iff labeled contractible.
TEST(Hopf, TorusOrbitLiftsMatchContractibility) {
  const auto e = make_ellipsoid(2.0);
  const double m = 1.0;
  const auto R = I_range(e, m);
  int checked = 0, contractible = 0;
  for (const auto& o : dynamical_convexity_report(e, m, 64, 7).orbits) {
    if (o.kind != "torus" || std::gcd(std::abs(o.p), o.q) != 1) continue;
    const auto lev = birkhoff_action(e, m, o.I, R);
    const double phi = std::abs(I_hat(e, m, lev.t_minus, pi / 2) - o.I) < 1e-8 ? pi / 2 : -pi / 2;
    const auto tr = integrate(e, m, {lev.t_minus, phi, 0.0}, o.q * 2 * lev.s_half, {1e-12, 1e-13, 0.02});
    std::vector<SpherePair> path;
    for (const auto& x : tr.x) path.push_back(round_sphere_state(pi * x[0] / e.ell(), x[1], x[2]));
    const auto L = lift_path(path, 1e-6);
    EXPECT_EQ(L.closes_once, o.contractible) << "p " << o.p << " q " << o.q;
    ++checked;
    if (!L.closes_once) continue;
    ++contractible;
    const auto r = antipodal_link_parity(KnotPolyline::from_points({L.lift.begin(), L.lift.end() - 1}));
    ASSERT_TRUE(r.disjoint);
    EXPECT_TRUE(r.even) << "lk " << *r.lk;
  }
  EXPECT_GE(checked, 10);
  EXPECT_GE(contractible, 4);
}
