#pragma once

// The quaternionic double cover p0 : S^3 -> SS^2 of the unit tangent bundle of
// the round sphere, star-shaped embeddings, and Gauss linking numbers of knots
// in S^3.

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "magflow/error.hpp"
#include "magflow/numerics.hpp"

namespace magflow {

struct Quaternion {
  double w = 0.0, x = 0.0, y = 0.0, z = 0.0;

  static Quaternion real(double a) { return {a, 0, 0, 0}; }
  static Quaternion imag(const std::array<double, 3>& v) { return {0, v[0], v[1], v[2]}; }

  Quaternion conj() const { return {w, -x, -y, -z}; }
  double norm2() const { return w * w + x * x + y * y + z * z; }
  double norm() const { return std::sqrt(norm2()); }
  Quaternion inverse() const {
    const double n = norm2();
    return {w / n, -x / n, -y / n, -z / n};
  }
  Quaternion normalized() const { return *this * (1.0 / norm()); }
  bool is_unit(double tol = 1e-12) const { return std::abs(norm() - 1.0) <= tol; }
  std::array<double, 3> im() const { return {x, y, z}; }
  std::array<double, 4> to_array() const { return {w, x, y, z}; }

  friend Quaternion operator+(const Quaternion& a, const Quaternion& b) { return {a.w + b.w, a.x + b.x, a.y + b.y, a.z + b.z}; }
  friend Quaternion operator-(const Quaternion& a, const Quaternion& b) { return {a.w - b.w, a.x - b.x, a.y - b.y, a.z - b.z}; }
  friend Quaternion operator-(const Quaternion& a) { return {-a.w, -a.x, -a.y, -a.z}; }
  friend Quaternion operator*(const Quaternion& a, double s) { return {a.w * s, a.x * s, a.y * s, a.z * s}; }
  friend Quaternion operator*(double s, const Quaternion& a) { return a * s; }
  friend Quaternion operator*(const Quaternion& a, const Quaternion& b) {
    return {a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z, a.w * b.x + a.x * b.w + a.y * b.z - a.z * b.y,
            a.w * b.y - a.x * b.z + a.y * b.w + a.z * b.x, a.w * b.z + a.x * b.y - a.y * b.x + a.z * b.w};
  }
  friend bool operator==(const Quaternion&, const Quaternion&) = default;
};

inline const Quaternion q_one{1, 0, 0, 0}, q_i{0, 1, 0, 0}, q_j{0, 0, 1, 0}, q_k{0, 0, 0, 1};

/// Euclidean inner product on R^4 = H.
inline double g_st(const Quaternion& a, const Quaternion& b) { return a.w * b.w + a.x * b.x + a.y * b.y + a.z * b.z; }

/// Cross product of imaginary quaternions, Im(a b).
inline Quaternion cross(const Quaternion& a, const Quaternion& b) {
  auto c = a * b;
  c.w = 0.0;
  return c;
}

inline Quaternion random_unit(std::mt19937_64& rng) {
  std::normal_distribution<double> n;
  return Quaternion{n(rng), n(rng), n(rng), n(rng)}.normalized();
}

/// Random vector tangent to S^3 at U.
inline Quaternion random_tangent(const Quaternion& U, std::mt19937_64& rng) {
  std::normal_distribution<double> n;
  Quaternion W{n(rng), n(rng), n(rng), n(rng)};
  return W - U * g_st(U, W);
}

inline void require_unit(const Quaternion& U, const char* who) {
  if (!U.is_unit(1e-10)) throw domain_error(std::string(who) + ": quaternion is not a unit");
}

/// U^{-1} V U
inline Quaternion conj_rot(const Quaternion& U, const Quaternion& V) {
  require_unit(U, "conj_rot");
  return U.conj() * V * U;
}

/// Point of SS^2: base point u1 and unit tangent u2, as imaginary quaternions.
struct SpherePair {
  Quaternion u1, u2;
};

inline SpherePair p0(const Quaternion& U) { return {conj_rot(U, q_i), conj_rot(U, q_j)}; }

/// Differential of p0 at U along W, using d(U^{-1}) = -U^{-1} W U^{-1}.
inline SpherePair dp0(const Quaternion& U, const Quaternion& W) {
  require_unit(U, "dp0");
  if (std::abs(g_st(U, W)) > 1e-10 * std::max(1.0, W.norm())) throw domain_error("dp0: W is not tangent to S^3 at U");
  const Quaternion Ui = U.conj();
  const Quaternion dUi = -(Ui * W * Ui);
  auto d = [&](const Quaternion& a) { return dUi * a * U + Ui * a * W; };
  return {d(q_i), d(q_j)};
}

/// psi0 at (u1, u2) on the tangent vector (v1, v2): g(v2, u1 x u2).
inline double psi0(const SpherePair& z, const SpherePair& v) { return g_st(v.u2, cross(z.u1, z.u2)); }

/// lambda_st at U on W: g(iU, W).
inline double lambda_st(const Quaternion& U, const Quaternion& W) { return g_st(q_i * U, W); }

/// |psi0(dp0 W) + 2 lambda_st(W)| at one sample.
inline double pullback_defect(const Quaternion& U, const Quaternion& W) { return std::abs(psi0(p0(U), dp0(U, W)) + 2.0 * lambda_st(U, W)); }

/// Max defect of p0^* psi0 = -2 lambda_st over random unit U and unit tangent W.
inline double pullback_residual(int n_samples, std::uint64_t seed = 1) {
  if (n_samples < 1) throw domain_error("pullback_residual: n_samples must be >= 1");
  std::mt19937_64 rng(seed);
  double r = 0.0;
  for (int k = 0; k < n_samples; ++k) {
    const auto U = random_unit(rng);
    const auto W = random_tangent(U, rng).normalized();
    r = std::max(r, pullback_defect(U, W));
  }
  return r;
}

// ---- star-shaped embeddings ----

using StarFunction = std::function<double(const Quaternion&)>;

inline Quaternion star_embed(const StarFunction& rho, const Quaternion& z) {
  const double r = rho(z);
  if (!(r > 0)) throw domain_error("star_embed: rho must be positive");
  return z * std::sqrt(r);
}

/// Q_rho(z) = |z|^2 / rho(z / |z|)
inline double q_rho(const StarFunction& rho, const Quaternion& z) {
  const double n = z.norm();
  if (!(n > 0)) throw domain_error("q_rho: z must be nonzero");
  const double r = rho(z * (1.0 / n));
  if (!(r > 0)) throw domain_error("q_rho: rho must be positive");
  return n * n / r;
}

struct ConvexityCheck {
  double min_eigenvalue;
  Quaternion argmin;
};

/// Central-difference Hessian of Q_rho at z.
inline Eigen::Matrix4d q_rho_hessian(const StarFunction& rho, const Quaternion& z, double h = 1e-4) {
  const Eigen::Vector4d z0(z.w, z.x, z.y, z.z);
  auto Q = [&](const Eigen::Vector4d& v) { return q_rho(rho, Quaternion{v[0], v[1], v[2], v[3]}); };
  Eigen::Matrix4d H;
  const double q0 = Q(z0);
  for (int a = 0; a < 4; ++a) {
    for (int b = a; b < 4; ++b) {
      Eigen::Vector4d ea = Eigen::Vector4d::Unit(a) * h, eb = Eigen::Vector4d::Unit(b) * h;
      double v;
      if (a == b) v = (Q(z0 + ea) - 2.0 * q0 + Q(z0 - ea)) / (h * h);
      else v = (Q(z0 + ea + eb) - Q(z0 + ea - eb) - Q(z0 - ea + eb) + Q(z0 - ea - eb)) / (4.0 * h * h);
      H(a, b) = H(b, a) = v;
    }
  }
  return H;
}

/// Minimal Hessian eigenvalue of Q_rho over random points of {Q_rho = 1}.
inline ConvexityCheck hessian_convexity(const StarFunction& rho, int n_samples, std::uint64_t seed = 1) {
  std::mt19937_64 rng(seed);
  ConvexityCheck c{std::numeric_limits<double>::infinity(), {}};
  for (int k = 0; k < n_samples; ++k) {
    const Quaternion z = star_embed(rho, random_unit(rng));
    const Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> es(q_rho_hessian(rho, z), Eigen::EigenvaluesOnly);
    if (es.eigenvalues()[0] < c.min_eigenvalue) c = {es.eigenvalues()[0], z};
  }
  return c;
}

// ---- knots and linking ----

struct KnotPolyline {
  std::vector<Quaternion> points;  // closed: front() == back()

  /// Projects to S^3, closes the loop and subdivides chords longer than max_chord.
  static KnotPolyline from_points(std::vector<Quaternion> pts, double max_chord = 0.1) {
    if (pts.size() < 3) throw domain_error("KnotPolyline: need at least three points");
    for (auto& q : pts) q = q.normalized();
    if ((pts.front() - pts.back()).norm() > 1e-14) pts.push_back(pts.front());
    pts.back() = pts.front();
    KnotPolyline k;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
      const int n = std::max(1, int(std::ceil((pts[i + 1] - pts[i]).norm() / (0.999 * max_chord))));
      for (int s = 0; s < n; ++s) k.points.push_back((pts[i] * (1.0 - double(s) / n) + pts[i + 1] * (double(s) / n)).normalized());
    }
    k.points.push_back(k.points.front());
    return k;
  }

  std::size_t segments() const { return points.size() - 1; }

  /// Each segment split in two, midpoints pushed to S^3.
  KnotPolyline doubled() const {
    KnotPolyline k;
    for (std::size_t i = 0; i + 1 < points.size(); ++i) {
      k.points.push_back(points[i]);
      k.points.push_back((points[i] + points[i + 1]).normalized());
    }
    k.points.push_back(points.front());
    return k;
  }

  KnotPolyline antipode() const {
    KnotPolyline k = *this;
    for (auto& q : k.points) q = -q;
    return k;
  }

  static KnotPolyline sample(const std::function<Quaternion(double)>& f, int n) {
    std::vector<Quaternion> pts;
    for (int i = 0; i < n; ++i) pts.push_back(f(2.0 * pi * i / n));
    return from_points(pts);
  }
};

inline double min_distance(const KnotPolyline& a, const KnotPolyline& b) {
  double d = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < a.points.size(); ++i)
    for (std::size_t j = 0; j + 1 < b.points.size(); ++j) d = std::min(d, (a.points[i] - b.points[j]).norm());
  return d;
}

namespace detail {

using Vec3 = std::array<double, 3>;

/// Stereographic chart from pole P with an oriented basis of P^perp.
struct Stereo {
  Quaternion P;
  std::array<Quaternion, 3> e;

  explicit Stereo(const Quaternion& pole) : P(pole.normalized()) {
    // for unit P, (iP, jP, kP) is orthonormal in P^perp
    e = {q_i * P, q_j * P, q_k * P};
  }
  Vec3 operator()(const Quaternion& x) const {
    const double d = 1.0 - g_st(x, P);
    return {g_st(x, e[0]) / d, g_st(x, e[1]) / d, g_st(x, e[2]) / d};
  }
};

inline Quaternion choose_pole(const KnotPolyline& a, const KnotPolyline& b) {
  std::mt19937_64 rng(12345);
  Quaternion best;
  double best_d = -1.0;
  for (int k = 0; k < 512; ++k) {
    const auto P = random_unit(rng);
    double d = std::numeric_limits<double>::infinity();
    for (const auto* K : {&a, &b})
      for (const auto& q : K->points) d = std::min(d, (q - P).norm());
    if (d > best_d) {
      best_d = d;
      best = P;
    }
  }
  return best;
}

/// Midpoint Gauss sum (1/4 pi) sum (r1 - r2) . (dr1 x dr2) / |r1 - r2|^3.
inline double gauss_sum(const std::vector<Vec3>& A, const std::vector<Vec3>& B, unsigned jobs) {
  const std::size_t n = A.size() - 1;
  const auto rows = parallel_map<double>(n, jobs, [&](std::size_t i) {
    const Vec3 m1{0.5 * (A[i][0] + A[i + 1][0]), 0.5 * (A[i][1] + A[i + 1][1]), 0.5 * (A[i][2] + A[i + 1][2])};
    const Vec3 d1{A[i + 1][0] - A[i][0], A[i + 1][1] - A[i][1], A[i + 1][2] - A[i][2]};
    double s = 0.0;
    for (std::size_t j = 0; j + 1 < B.size(); ++j) {
      const Vec3 d2{B[j + 1][0] - B[j][0], B[j + 1][1] - B[j][1], B[j + 1][2] - B[j][2]};
      const Vec3 r{m1[0] - 0.5 * (B[j][0] + B[j + 1][0]), m1[1] - 0.5 * (B[j][1] + B[j + 1][1]), m1[2] - 0.5 * (B[j][2] + B[j + 1][2])};
      const Vec3 c{d1[1] * d2[2] - d1[2] * d2[1], d1[2] * d2[0] - d1[0] * d2[2], d1[0] * d2[1] - d1[1] * d2[0]};
      const double rn = std::sqrt(r[0] * r[0] + r[1] * r[1] + r[2] * r[2]);
      s += (r[0] * c[0] + r[1] * c[1] + r[2] * c[2]) / (rn * rn * rn);
    }
    return s;
  });
  double total = 0.0;
  for (double v : rows) total += v;
  return total / (4.0 * pi);
}

}  // namespace detail

struct LinkingResult {
  int lk;
  double raw;       // unrounded Gauss sum at the final resolution
  std::size_t segments;
};

inline LinkingResult gauss_linking_detail(KnotPolyline a, KnotPolyline b, unsigned jobs = 1, std::size_t max_segments = 1 << 14) {
  if (min_distance(a, b) <= 1e-3) throw domain_error("gauss_linking: knots are not disjoint (distance <= 1e-3)");
  const detail::Stereo S(detail::choose_pole(a, b));
  std::optional<long> prev;
  double raw = 0.0;
  while (true) {
    std::vector<detail::Vec3> A, B;
    for (const auto& q : a.points) A.push_back(S(q));
    for (const auto& q : b.points) B.push_back(S(q));
    raw = detail::gauss_sum(A, B, jobs);
    const long r = std::lround(raw);
    if (std::abs(raw - double(r)) < 0.05 && prev && *prev == r) return {int(r), raw, a.segments()};
    prev = std::abs(raw - double(r)) < 0.05 ? std::optional<long>(r) : std::nullopt;
    if (std::max(a.segments(), b.segments()) >= max_segments)
      throw numeric_error("gauss_linking: residual too large at maximal resolution, refine the knots", std::abs(raw - double(r)));
    a = a.doubled();
    b = b.doubled();
  }
}

inline int gauss_linking(const KnotPolyline& a, const KnotPolyline& b, unsigned jobs = 1) { return gauss_linking_detail(a, b, jobs).lk; }

struct AntipodalParity {
  std::optional<int> lk;
  bool even = false;
  bool disjoint = false;
};

inline AntipodalParity antipodal_link_parity(const KnotPolyline& k, unsigned jobs = 1) {
  AntipodalParity r;
  const auto A = k.antipode();
  r.disjoint = min_distance(k, A) > 1e-3;
  if (!r.disjoint) return r;
  r.lk = gauss_linking(k, A, jobs);
  r.even = *r.lk % 2 == 0;
  return r;
}

// ---- lifting paths through p0 ----

/// Unit quaternion q with q v q^{-1} = M v on imaginary quaternions (M a rotation).
inline Quaternion quaternion_from_rotation(const Eigen::Matrix3d& M) {
  const double tr = M.trace();
  Quaternion q;
  if (tr >= M(0, 0) && tr >= M(1, 1) && tr >= M(2, 2)) {
    const double s = std::sqrt(1.0 + tr) * 2.0;
    q = {0.25 * s, (M(2, 1) - M(1, 2)) / s, (M(0, 2) - M(2, 0)) / s, (M(1, 0) - M(0, 1)) / s};
  } else if (M(0, 0) >= M(1, 1) && M(0, 0) >= M(2, 2)) {
    const double s = std::sqrt(1.0 + M(0, 0) - M(1, 1) - M(2, 2)) * 2.0;
    q = {(M(2, 1) - M(1, 2)) / s, 0.25 * s, (M(0, 1) + M(1, 0)) / s, (M(0, 2) + M(2, 0)) / s};
  } else if (M(1, 1) >= M(2, 2)) {
    const double s = std::sqrt(1.0 + M(1, 1) - M(0, 0) - M(2, 2)) * 2.0;
    q = {(M(0, 2) - M(2, 0)) / s, (M(0, 1) + M(1, 0)) / s, 0.25 * s, (M(1, 2) + M(2, 1)) / s};
  } else {
    const double s = std::sqrt(1.0 + M(2, 2) - M(0, 0) - M(1, 1)) * 2.0;
    q = {(M(1, 0) - M(0, 1)) / s, (M(0, 2) + M(2, 0)) / s, (M(1, 2) + M(2, 1)) / s, 0.25 * s};
  }
  return q.normalized();
}

/// One of the two U with p0(U) = z.
inline Quaternion p0_preimage(const SpherePair& z) {
  const auto a = z.u1.im(), b = z.u2.im();
  const double na = std::hypot(a[0], a[1], a[2]), nb = std::hypot(b[0], b[1], b[2]);
  if (std::abs(na - 1.0) > 1e-8 || std::abs(nb - 1.0) > 1e-8 || std::abs(a[0] * b[0] + a[1] * b[1] + a[2] * b[2]) > 1e-8)
    throw domain_error("p0_preimage: (u1, u2) is not an orthonormal pair");
  const auto c = cross(z.u1, z.u2).im();
  Eigen::Matrix3d M;
  M << a[0], b[0], c[0], a[1], b[1], c[1], a[2], b[2], c[2];
  // p0(U) = (U^{-1} i U, U^{-1} j U), so U^{-1} rotates the standard frame onto (u1, u2, u1 x u2)
  return quaternion_from_rotation(M).conj();
}

inline double ss2_distance(const SpherePair& a, const SpherePair& b) { return std::max((a.u1 - b.u1).norm(), (a.u2 - b.u2).norm()); }

struct LiftResult {
  std::vector<Quaternion> lift;  // over one traversal
  bool closes_once;              // U(end) = U(0)
  bool closes_twice;             // U(end) = -U(0), so the doubled path closes
};

/// Continuous lift of a closed path of SS^2 through p0, choosing the sheet
/// closest to the previous point at every sample.
inline LiftResult lift_path(const std::vector<SpherePair>& path, double tol = 1e-8) {
  if (path.empty()) throw domain_error("lift_path: empty path");
  for (std::size_t k = 1; k < path.size(); ++k)
    if (ss2_distance(path[k - 1], path[k]) >= 0.1) throw domain_error("lift_path: consecutive samples farther apart than 0.1");
  LiftResult r;
  r.lift.push_back(p0_preimage(path.front()));
  for (std::size_t k = 1; k < path.size(); ++k) {
    Quaternion U = p0_preimage(path[k]);
    if (g_st(U, r.lift.back()) < 0) U = -U;
    r.lift.push_back(U);
  }
  const double closing = ss2_distance(path.front(), path.back());
  const Quaternion &a = r.lift.front(), &b = r.lift.back();
  r.closes_once = closing < tol && (a - b).norm() < 1e-6;
  r.closes_twice = closing < tol && (r.closes_once || (a + b).norm() < 1e-6);
  return r;
}

/// Unit tangent bundle point of the round unit sphere at (t, phi, theta):
/// t is measured from the south pole and phi from the meridian direction.
inline SpherePair round_sphere_state(double t, double phi, double theta) {
  const double st = std::sin(t), ct = std::cos(t), sth = std::sin(theta), cth = std::cos(theta);
  const std::array<double, 3> x{st * cth, st * sth, -ct};
  const std::array<double, 3> et{ct * cth, ct * sth, st};
  const std::array<double, 3> eth{-sth, cth, 0.0};
  const double cp = std::cos(phi), sp = std::sin(phi);
  return {Quaternion::imag(x), Quaternion::imag({cp * et[0] + sp * eth[0], cp * et[1] + sp * eth[1], cp * et[2] + sp * eth[2]})};
}

/// Point and unit tangent of a curve on S^2 given as a function of the parameter.
inline SpherePair curve_state(const std::function<std::array<double, 3>(double)>& c, double s, double h = 1e-6) {
  auto unit = [](std::array<double, 3> v) {
    const double n = std::hypot(v[0], v[1], v[2]);
    return std::array<double, 3>{v[0] / n, v[1] / n, v[2] / n};
  };
  const auto x = unit(c(s));
  const auto a = unit(c(s + h)), b = unit(c(s - h));
  std::array<double, 3> v{a[0] - b[0], a[1] - b[1], a[2] - b[2]};
  const double d = v[0] * x[0] + v[1] * x[1] + v[2] * x[2];
  for (int i = 0; i < 3; ++i) v[i] -= d * x[i];
  return {Quaternion::imag(x), Quaternion::imag(unit(v))};
}

}  // namespace magflow
