#include "snalab/attractor.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "snalab/stats.hpp"

namespace snalab {

InvariantGraphSample pullback_graph(const CircleMapFamily& fam, GraphDirection dir, std::int64_t grid_size,
                                    int depth, double seed_x, Exec exec) {
  if (grid_size < 256) throw std::invalid_argument("pullback_graph needs N >= 256");
  if (depth < 1) throw std::invalid_argument("pullback_graph needs depth >= 1");
  InvariantGraphSample g;
  g.grid_size = grid_size;
  g.pullback_depth = depth;
  g.seed = wrap_unit(seed_x);
  g.direction = dir;
  std::vector<Phase> angles(static_cast<std::size_t>(grid_size));
  g.theta.resize(angles.size());
  for (std::int64_t i = 0; i < grid_size; ++i) {
    angles[i] = static_cast<Phase>(i) / static_cast<Phase>(grid_size);
    g.theta[i] = static_cast<double>(angles[i]);
  }
  g.phi.resize(angles.size());
  g.residual.resize(angles.size());
  if (exec == Exec::Serial) {
    kernels::pullback_serial(fam, dir, angles, depth, g.seed, g.phi, g.residual);
  } else {
    kernels::pullback_parallel(fam, dir, angles, depth, g.seed, g.phi, g.residual);
  }
  g.residual_p50 = quantile(g.residual, 0.5);
  g.residual_p90 = quantile(g.residual, 0.9);
  g.residual_max = *std::max_element(g.residual.begin(), g.residual.end());
  g.converged = g.residual_p50 <= kConvergenceThreshold;
  return g;
}

double graph_value_at(const CircleMapFamily& fam, const InvariantGraphSample& g, Phase theta) {
  return kernels::pullback_value(fam, g.direction, theta, g.pullback_depth, g.seed);
}

namespace {

LyapunovEstimate from_samples(const std::vector<double>& v) {
  MeanEstimate m = batch_means(v, 32);
  return {m.mean, static_cast<std::int64_t>(v.size()), m.std_error};
}

}  // namespace

LyapunovEstimate lyapunov_of_graph(const CircleMapFamily& fam, const InvariantGraphSample& g) {
  std::vector<double> v(g.phi.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    v[i] = std::log(fiber_derivative(fam, static_cast<Phase>(i) / g.grid_size, CircleAngle(g.phi[i])));
  }
  return from_samples(v);
}

LyapunovEstimate inverse_lyapunov_of_graph(const CircleMapFamily& fam, const InvariantGraphSample& g) {
  // The skew inverse at theta uses the fibre inverse of f_{theta - omega}.
  std::vector<double> v(g.phi.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    Phase prev = wrap_phase(static_cast<Phase>(i) / g.grid_size - fam.omega());
    CircleAngle pre = fiber_inverse(fam, prev, CircleAngle(g.phi[i]));
    v[i] = -std::log(fiber_derivative(fam, prev, pre));
  }
  return from_samples(v);
}

LyapunovEstimate birkhoff_lyapunov_estimate(const CircleMapFamily& fam, Phase theta0, double x0, std::int64_t n) {
  if (n < 1000) throw std::invalid_argument("birkhoff_lyapunov needs n >= 1000");
  OrbitSummary s = kernels::orbit_summary(fam, theta0, x0, n);
  return {s.lyapunov, n, s.lyapunov_se};
}

double birkhoff_lyapunov(const CircleMapFamily& fam, Phase theta0, double x0, std::int64_t n) {
  return birkhoff_lyapunov_estimate(fam, theta0, x0, n).value;
}

double rotation_number(const CircleMapFamily& fam, Phase theta0, double x0, std::int64_t n) {
  if (n < 1000) throw std::invalid_argument("rotation_number needs n >= 1000");
  return kernels::orbit_summary(fam, theta0, x0, n).rotation_number;
}

}  // namespace snalab
