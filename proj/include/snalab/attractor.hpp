#pragma once

#include <cstdint>
#include <vector>

#include "snalab/families.hpp"
#include "snalab/kernels.hpp"

namespace snalab {

// Uniform-grid sample theta_i = i / N of an invariant graph.
struct InvariantGraphSample {
  std::int64_t grid_size = 0;
  std::vector<double> theta;
  std::vector<double> phi;
  std::vector<double> residual;
  int pullback_depth = 0;
  double seed = 0.0;
  double residual_p50 = 0.0;
  double residual_p90 = 0.0;
  double residual_max = 0.0;
  GraphDirection direction = GraphDirection::Attractor;
  bool converged = false;
};

inline constexpr double kConvergenceThreshold = 1e-4;

InvariantGraphSample pullback_graph(const CircleMapFamily& fam, GraphDirection dir, std::int64_t grid_size,
                                    int depth, double seed_x, Exec exec = Exec::Parallel);

// Graph value at an arbitrary angle by fresh pullback with the sample's depth and seed.
double graph_value_at(const CircleMapFamily& fam, const InvariantGraphSample& g, Phase theta);

struct LyapunovEstimate {
  double value = 0.0;
  std::int64_t n_samples = 0;
  double std_error = 0.0;
};

// Grid average of log f' along the graph.
LyapunovEstimate lyapunov_of_graph(const CircleMapFamily& fam, const InvariantGraphSample& g);
// Grid average of log (f^{-1})' along the graph, i.e. the exponent of the graph viewed under f^{-1}.
LyapunovEstimate inverse_lyapunov_of_graph(const CircleMapFamily& fam, const InvariantGraphSample& g);

LyapunovEstimate birkhoff_lyapunov_estimate(const CircleMapFamily& fam, Phase theta0, double x0, std::int64_t n);
double birkhoff_lyapunov(const CircleMapFamily& fam, Phase theta0, double x0, std::int64_t n);
double rotation_number(const CircleMapFamily& fam, Phase theta0, double x0, std::int64_t n);

}  // namespace snalab
