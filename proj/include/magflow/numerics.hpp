#pragma once

// Small numerical toolbox shared by the modules.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <functional>
#include <limits>
#include <numbers>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "magflow/error.hpp"

namespace magflow {

inline constexpr double pi = std::numbers::pi;

/// Adaptive Gauss-Kronrod on [a, b].
template <class F>
double integrate(F&& f, double a, double b, double tol = 1e-12, unsigned max_depth = 12) {
  if (a == b) return 0.0;
  double err = 0.0;
  return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, max_depth, tol, &err);
}

/// Fixed 32 point Gauss-Legendre on [a, b].
template <class F>
double gauss32(F&& f, double a, double b) {
  return boost::math::quadrature::gauss<double, 32>::integrate(f, a, b);
}

/// Bisection on a sign change of f over [a, b]. Stops when the bracket is below xtol.
template <class F>
double bisect(F&& f, double a, double b, double xtol = 1e-14, int max_iter = 200) {
  double fa = f(a);
  double fb = f(b);
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;
  if ((fa > 0) == (fb > 0)) throw numeric_error("bisect: no sign change in bracket", std::min(std::abs(fa), std::abs(fb)));
  for (int it = 0; it < max_iter && std::abs(b - a) > xtol; ++it) {
    const double c = 0.5 * (a + b);
    if (c <= std::min(a, b) || c >= std::max(a, b)) break;
    const double fc = f(c);
    if (fc == 0.0) return c;
    if ((fc > 0) == (fa > 0)) {
      a = c;
      fa = fc;
    } else {
      b = c;
    }
  }
  return 0.5 * (a + b);
}

/// Golden-section search for a local maximum of f on [a, b].
template <class F>
std::pair<double, double> golden_max(F&& f, double a, double b, double xtol = 1e-9) {
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - g * (b - a);
  double d = a + g * (b - a);
  double fc = f(c);
  double fd = f(d);
  while (std::abs(b - a) > xtol) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - g * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + g * (b - a);
      fd = f(d);
    }
  }
  const double x = 0.5 * (a + b);
  const double fx = f(x);
  if (fc > fx && fc >= fd) return {c, fc};
  if (fd > fx) return {d, fd};
  return {x, fx};
}

/// Uniform grid of n intervals on [a, b] merged with extra points inside it.
inline std::vector<double> scan_grid(double a, double b, std::size_t n, const std::vector<double>& extra = {}) {
  std::vector<double> g;
  g.reserve(n + 1 + extra.size());
  for (std::size_t i = 0; i <= n; ++i) g.push_back(a + (b - a) * double(i) / double(n));
  for (double x : extra)
    if (x > a && x < b) g.push_back(x);
  std::sort(g.begin(), g.end());
  g.erase(std::unique(g.begin(), g.end()), g.end());
  return g;
}

/// Maximize f over [a, b]: dense scan, then golden refinement around the best
/// `n_refine` local maxima. Ties go to the smaller abscissa.
template <class F>
std::pair<double, double> grid_max(F&& f, const std::vector<double>& grid, std::size_t n_refine = 5, double xtol = 1e-9) {
  const std::size_t n = grid.size();
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = f(grid[i]);
  std::vector<std::size_t> peaks;
  for (std::size_t i = 0; i < n; ++i) {
    const bool left = i == 0 || v[i] >= v[i - 1];
    const bool right = i + 1 == n || v[i] >= v[i + 1];
    if (left && right) peaks.push_back(i);
  }
  std::stable_sort(peaks.begin(), peaks.end(), [&](std::size_t i, std::size_t j) { return v[i] > v[j]; });
  if (peaks.size() > n_refine) peaks.resize(n_refine);
  double best_x = grid[peaks.front()];
  double best_v = v[peaks.front()];
  for (std::size_t i : peaks) {
    const double lo = grid[i == 0 ? 0 : i - 1];
    const double hi = grid[i + 1 == n ? n - 1 : i + 1];
    auto [x, fx] = golden_max(f, lo, hi, xtol);
    if (v[i] > fx) {
      x = grid[i];
      fx = v[i];
    }
    if (fx > best_v || (fx == best_v && x < best_x)) {
      best_v = fx;
      best_x = x;
    }
  }
  return {best_x, best_v};
}

/// Fornberg finite-difference weights: w[k][j] is the weight of f(x[j]) in
/// the k-th derivative at z, for k = 0..m.
inline std::vector<std::vector<double>> fornberg_weights(double z, const std::vector<double>& x, int m) {
  const int n = static_cast<int>(x.size()) - 1;
  std::vector<std::vector<double>> c(m + 1, std::vector<double>(n + 1, 0.0));
  double c1 = 1.0;
  double c4 = x[0] - z;
  c[0][0] = 1.0;
  for (int i = 1; i <= n; ++i) {
    const int mn = std::min(i, m);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = x[i] - z;
    for (int j = 0; j < i; ++j) {
      const double c3 = x[i] - x[j];
      c2 *= c3;
      if (j == i - 1) {
        for (int k = mn; k >= 1; --k) c[k][i] = c1 * (k * c[k - 1][i - 1] - c5 * c[k][i - 1]) / c2;
        c[0][i] = -c1 * c5 * c[0][i - 1] / c2;
      }
      for (int k = mn; k >= 1; --k) c[k][j] = (c4 * c[k][j] - k * c[k - 1][j]) / c3;
      c[0][j] = c4 * c[0][j] / c3;
    }
    c1 = c2;
  }
  return c;
}

/// Piecewise quintic Hermite interpolant from (value, first, second) derivative
/// data at nodes, with its exact antiderivative.
class PiecewiseQuintic {
 public:
  struct Node {
    double t, y, dy, ddy;
  };

  PiecewiseQuintic() = default;

  PiecewiseQuintic(std::vector<Node> nodes, double integral_at_start) : nodes_(std::move(nodes)) {
    if (nodes_.size() < 2) throw domain_error("PiecewiseQuintic: need at least two nodes");
    coef_.resize(nodes_.size() - 1);
    cum_.assign(nodes_.size(), integral_at_start);
    for (std::size_t i = 0; i + 1 < nodes_.size(); ++i) {
      const Node& a = nodes_[i];
      const Node& b = nodes_[i + 1];
      const double h = b.t - a.t;
      if (!(h > 0)) throw domain_error("PiecewiseQuintic: nodes must be strictly increasing");
      auto& c = coef_[i];
      c[0] = a.y;
      c[1] = h * a.dy;
      c[2] = 0.5 * h * h * a.ddy;
      const double A = b.y - c[0] - c[1] - c[2];
      const double B = h * b.dy - c[1] - 2.0 * c[2];
      const double C = h * h * b.ddy - 2.0 * c[2];
      c[3] = 10.0 * A - 4.0 * B + 0.5 * C;
      c[4] = -15.0 * A + 7.0 * B - C;
      c[5] = 6.0 * A - 3.0 * B + 0.5 * C;
      double s = 0.0;
      for (int k = 0; k < 6; ++k) s += c[k] / (k + 1);
      cum_[i + 1] = cum_[i] + h * s;
    }
  }

  double front() const { return nodes_.front().t; }
  double back() const { return nodes_.back().t; }
  const std::vector<Node>& nodes() const { return nodes_; }

  /// value and derivatives up to order three, plus the antiderivative
  struct Jet {
    double y, dy, ddy, dddy, integral;
  };

  Jet jet(double t) const {
    const std::size_t i = panel(t);
    const double h = nodes_[i + 1].t - nodes_[i].t;
    const double u = (t - nodes_[i].t) / h;
    const auto& c = coef_[i];
    const double p = c[0] + u * (c[1] + u * (c[2] + u * (c[3] + u * (c[4] + u * c[5]))));
    const double p1 = c[1] + u * (2 * c[2] + u * (3 * c[3] + u * (4 * c[4] + u * 5 * c[5])));
    const double p2 = 2 * c[2] + u * (6 * c[3] + u * (12 * c[4] + u * 20 * c[5]));
    const double p3 = 6 * c[3] + u * (24 * c[4] + u * 60 * c[5]);
    const double q = u * (c[0] + u * (c[1] / 2 + u * (c[2] / 3 + u * (c[3] / 4 + u * (c[4] / 5 + u * c[5] / 6)))));
    return {p, p1 / h, p2 / (h * h), p3 / (h * h * h), cum_[i] + h * q};
  }

  std::vector<double> knots() const {
    std::vector<double> k;
    k.reserve(nodes_.size());
    for (const auto& n : nodes_) k.push_back(n.t);
    return k;
  }

 private:
  std::size_t panel(double t) const {
    auto it = std::upper_bound(nodes_.begin(), nodes_.end(), t, [](double x, const Node& n) { return x < n.t; });
    std::size_t i = it == nodes_.begin() ? 0 : std::size_t(it - nodes_.begin()) - 1;
    return std::min(i, nodes_.size() - 2);
  }

  std::vector<Node> nodes_;
  std::vector<std::array<double, 6>> coef_;
  std::vector<double> cum_;
};

/// Adaptive quintic Hermite fit of an exact jet evaluator on [a, b].
/// Panels are split until the midpoint and quarter points agree with the
/// evaluator to `tol` (value) and 10*tol (first derivative).
inline PiecewiseQuintic fit_quintic(const std::function<std::array<double, 3>(double)>& jet, double a, double b,
                                    std::size_t initial_panels = 64, double tol = 1e-12,
                                    std::size_t max_nodes = 50000) {
  using Node = PiecewiseQuintic::Node;
  auto node_at = [&](double t) {
    auto j = jet(t);
    return Node{t, j[0], j[1], j[2]};
  };
  std::vector<Node> done;
  std::vector<std::pair<Node, Node>> stack;
  std::vector<Node> init;
  for (std::size_t i = 0; i <= initial_panels; ++i) init.push_back(node_at(a + (b - a) * double(i) / double(initial_panels)));
  for (std::size_t i = initial_panels; i-- > 0;) stack.emplace_back(init[i], init[i + 1]);
  done.push_back(init.front());
  std::size_t count = init.size();
  while (!stack.empty()) {
    auto [l, r] = stack.back();
    stack.pop_back();
    PiecewiseQuintic piece({l, r}, 0.0);
    bool ok = true;
    const double h = r.t - l.t;
    for (double f : {0.25, 0.5, 0.75}) {
      const double t = l.t + f * h;
      const auto ex = jet(t);
      const auto ap = piece.jet(t);
      const double scale = std::max(1.0, std::abs(ex[0]));
      if (std::abs(ex[0] - ap.y) > tol * scale || std::abs(ex[1] - ap.dy) > 10 * tol * std::max(1.0, std::abs(ex[1]))) {
        ok = false;
        break;
      }
    }
    if (ok || count >= max_nodes || h < 1.5e-5 * (b - a)) {
      done.push_back(r);
    } else {
      const Node mid = node_at(l.t + 0.5 * h);
      ++count;
      stack.emplace_back(mid, r);
      stack.emplace_back(l, mid);
    }
  }
  return PiecewiseQuintic(std::move(done), 0.0);
}

/// Number of worker threads: MAGFLOW_JOBS wins over the requested value.
inline unsigned resolve_jobs(unsigned requested) {
  if (const char* env = std::getenv("MAGFLOW_JOBS")) {
    const int v = std::atoi(env);
    if (v > 0) return unsigned(v);
  }
  if (requested == 0) return std::max(1u, std::thread::hardware_concurrency());
  return requested;
}

/// Evaluate fn(i) for i in [0, n) on `jobs` threads; results stay in index order.
template <class R, class F>
std::vector<R> parallel_map(std::size_t n, unsigned jobs, F&& fn) {
  std::vector<R> out(n);
  std::vector<std::exception_ptr> errs(n);
  auto work = [&](std::size_t begin, std::size_t step) {
    for (std::size_t i = begin; i < n; i += step) {
      try {
        out[i] = fn(i);
      } catch (...) {
        errs[i] = std::current_exception();
      }
    }
  };
  jobs = std::max(1u, std::min<unsigned>(jobs, unsigned(std::max<std::size_t>(n, 1))));
  if (jobs == 1) {
    work(0, 1);
  } else {
    std::vector<std::thread> pool;
    for (unsigned j = 0; j < jobs; ++j) pool.emplace_back(work, j, jobs);
    for (auto& th : pool) th.join();
  }
  for (auto& e : errs)
    if (e) std::rethrow_exception(e);
  return out;
}

}  // namespace magflow
