#include "snalab/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <string>
#include <vector>

namespace snalab::kernels {

double pullback_value(const CircleMapFamily& fam, GraphDirection dir, Phase theta, int depth, double seed) {
  const Phase w = fam.omega();
  double x = wrap_unit(seed);
  if (dir == GraphDirection::Attractor) {
    Phase t = rotate(theta, -depth, w);
    for (int k = 0; k < depth; ++k) {
      x = wrap_unit(fiber_lift(fam, t, x));
      t = wrap_phase(t + w);
    }
  } else {
    Phase t = rotate(theta, depth, w);
    for (int k = 0; k < depth; ++k) {
      t = wrap_phase(t - w);
      x = wrap_unit(fiber_lift_inverse(fam, t, x));
    }
  }
  return x;
}

double invariance_defect(const CircleMapFamily& fam, GraphDirection dir, Phase theta, double phi, int depth,
                         double seed) {
  const Phase w = fam.omega();
  if (dir == GraphDirection::Attractor) {
    double step = fiber_map(fam, theta, CircleAngle(phi)).value();
    return circle_distance(step, pullback_value(fam, dir, wrap_phase(theta + w), depth, seed));
  }
  Phase prev = wrap_phase(theta - w);
  double step = fiber_inverse(fam, prev, CircleAngle(phi)).value();
  return circle_distance(step, pullback_value(fam, dir, prev, depth, seed));
}

void pullback_serial(const CircleMapFamily& fam, GraphDirection dir, std::span<const Phase> theta, int depth,
                     double seed, std::span<double> phi, std::span<double> residual) {
  for (std::size_t i = 0; i < theta.size(); ++i) {
    phi[i] = pullback_value(fam, dir, theta[i], depth, seed);
    residual[i] = invariance_defect(fam, dir, theta[i], phi[i], depth, seed);
  }
}

void pullback_parallel(const CircleMapFamily& fam, GraphDirection dir, std::span<const Phase> theta, int depth,
                       double seed, std::span<double> phi, std::span<double> residual) {
  const std::int64_t n = static_cast<std::int64_t>(theta.size());
#pragma omp parallel for schedule(dynamic, 64)
  for (std::int64_t i = 0; i < n; ++i) {
    phi[i] = pullback_value(fam, dir, theta[i], depth, seed);
    residual[i] = invariance_defect(fam, dir, theta[i], phi[i], depth, seed);
  }
}

bool critical_membership(const CircleMapFamily& fam, const Arc& C, const Arc& E, Phase theta, std::int64_t M,
                         bool* long_arc) {
  const Phase w = fam.omega();
  bool wide = false;

  double a = C.left, b = C.left + C.length;
  Phase t = rotate(theta, -(M - 1), w);
  for (std::int64_t k = 0; k < M - 1; ++k) {
    a = fiber_lift(fam, t, a);
    b = fiber_lift(fam, t, b);
    double s = std::floor(a);
    a -= s;
    b -= s;
    t = wrap_phase(t + w);
    wide = wide || b - a > 0.5;
  }

  double c = E.left, d = E.left + E.length;
  t = rotate(theta, M + 1, w);
  for (std::int64_t k = 0; k < M + 1; ++k) {
    t = wrap_phase(t - w);
    c = fiber_lift_inverse(fam, t, c);
    d = fiber_lift_inverse(fam, t, d);
    double s = std::floor(c);
    c -= s;
    d -= s;
    wide = wide || d - c > 0.5;
  }
  if (long_arc) *long_arc = wide;

  double c0 = c - std::floor(c - a);  // c0 in [a, a + 1)
  return c0 <= b || c0 + (d - c) >= a + 1.0;
}

void critical_scan_serial(const CircleMapFamily& fam, const Arc& C, const Arc& E, std::span<const Phase> theta,
                          std::int64_t M, std::span<char> member, std::span<char> long_arc) {
  for (std::size_t i = 0; i < theta.size(); ++i) {
    bool wide = false;
    member[i] = critical_membership(fam, C, E, theta[i], M, &wide);
    long_arc[i] = wide;
  }
}

void critical_scan_parallel(const CircleMapFamily& fam, const Arc& C, const Arc& E, std::span<const Phase> theta,
                            std::int64_t M, std::span<char> member, std::span<char> long_arc) {
  const std::int64_t n = static_cast<std::int64_t>(theta.size());
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < n; ++i) {
    bool wide = false;
    member[i] = critical_membership(fam, C, E, theta[i], M, &wide);
    long_arc[i] = wide;
  }
}

OrbitSummary orbit_summary(const CircleMapFamily& fam, Phase theta0, double x0, std::int64_t n) {
  constexpr int kBlocks = 32;
  const Phase w = fam.omega();
  double x = wrap_unit(x0);
  std::int64_t turns = 0;
  Phase t = wrap_phase(theta0);
  double block_sum[kBlocks] = {};
  std::int64_t block_len[kBlocks] = {};
  double total = 0.0;
  for (std::int64_t k = 0; k < n; ++k) {
    double lg = std::log(fiber_derivative_lift(fam, t, x));
    total += lg;
    int b = static_cast<int>(k * kBlocks / n);
    block_sum[b] += lg;
    ++block_len[b];
    double y = fiber_lift(fam, t, x);
    double fl = std::floor(y);
    turns += static_cast<std::int64_t>(fl);
    x = y - fl;
    if (x >= 1.0) {
      x -= 1.0;
      ++turns;
    }
    t = wrap_phase(t + w);
  }
  OrbitSummary s;
  s.rotation_number = (static_cast<double>(turns) + (x - wrap_unit(x0))) / static_cast<double>(n);
  s.lyapunov = total / static_cast<double>(n);
  int nb = 0;
  double mm = 0.0;
  double means[kBlocks];
  for (int b = 0; b < kBlocks; ++b) {
    if (block_len[b] == 0) continue;
    means[nb] = block_sum[b] / static_cast<double>(block_len[b]);
    mm += means[nb];
    ++nb;
  }
  if (nb >= 2) {
    mm /= nb;
    double var = 0.0;
    for (int b = 0; b < nb; ++b) var += (means[b] - mm) * (means[b] - mm);
    s.lyapunov_se = std::sqrt(var / (nb - 1) / nb);
  }
  return s;
}

namespace {

void sweep_point(std::span<const CircleMapFamily> members, std::size_t i, Phase theta0, double x0,
                 std::int64_t n, OrbitSummary& out, std::string& err) {
  try {
    out = orbit_summary(members[i], theta0, x0, n);
  } catch (const std::exception& e) {
    err = e.what();
  }
}

}  // namespace

void sweep_serial(std::span<const CircleMapFamily> members, Phase theta0, double x0, std::int64_t n,
                  const SweepRow& row) {
  for (std::size_t i = 0; i < members.size(); ++i) {
    OrbitSummary r;
    std::string err;
    sweep_point(members, i, theta0, x0, n, r, err);
    row(i, err.empty() ? &r : nullptr, err.empty() ? nullptr : err.c_str());
  }
}

void sweep_parallel(std::span<const CircleMapFamily> members, Phase theta0, double x0, std::int64_t n,
                    const SweepRow& row) {
  const std::int64_t m = static_cast<std::int64_t>(members.size());
#pragma omp parallel for ordered schedule(dynamic, 1)
  for (std::int64_t i = 0; i < m; ++i) {
    OrbitSummary r;
    std::string err;
    sweep_point(members, static_cast<std::size_t>(i), theta0, x0, n, r, err);
#pragma omp ordered
    row(static_cast<std::size_t>(i), err.empty() ? &r : nullptr, err.empty() ? nullptr : err.c_str());
  }
}

namespace {

double ball_fraction(std::span<const double> theta, std::span<const double> phi, const GraphPoint& c,
                     double eps) {
  // Open window (tc - eps, tc + eps) on the circle, split at 0 when needed.
  double lo = c.theta - eps, hi = c.theta + eps;
  std::int64_t n = 0;
  auto strict = [&](double a, double b) {
    auto ib = std::upper_bound(theta.begin(), theta.end(), a);
    auto ie = std::lower_bound(theta.begin(), theta.end(), b);
    std::int64_t k = 0;
    for (auto it = ib; it < ie; ++it) {
      std::size_t i = static_cast<std::size_t>(it - theta.begin());
      if (circle_distance(phi[i], c.x) < eps) ++k;
    }
    return k;
  };
  if (eps >= 0.5) {
    n = strict(-1.0, 2.0);
  } else if (lo < 0.0) {
    n = strict(lo + 1.0, 2.0) + strict(-1.0, hi);
  } else if (hi > 1.0) {
    n = strict(lo, 2.0) + strict(-1.0, hi - 1.0);
  } else {
    n = strict(lo, hi);
  }
  return static_cast<double>(n) / static_cast<double>(theta.size());
}

}  // namespace

void ball_measures_serial(std::span<const double> theta, std::span<const double> phi,
                          std::span<const GraphPoint> centers, std::span<const double> eps, std::span<double> out) {
  for (std::size_t c = 0; c < centers.size(); ++c) {
    for (std::size_t e = 0; e < eps.size(); ++e) out[c * eps.size() + e] = ball_fraction(theta, phi, centers[c], eps[e]);
  }
}

void ball_measures_parallel(std::span<const double> theta, std::span<const double> phi,
                            std::span<const GraphPoint> centers, std::span<const double> eps,
                            std::span<double> out) {
  const std::int64_t total = static_cast<std::int64_t>(centers.size() * eps.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (std::int64_t k = 0; k < total; ++k) {
    std::size_t c = static_cast<std::size_t>(k) / eps.size(), e = static_cast<std::size_t>(k) % eps.size();
    out[k] = ball_fraction(theta, phi, centers[c], eps[e]);
  }
}

}  // namespace snalab::kernels
