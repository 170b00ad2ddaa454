#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "snalab/arcset.hpp"
#include "snalab/attractor.hpp"
#include "snalab/families.hpp"
#include "snalab/multiscale.hpp"

namespace snalab {

// Orbit of length N from (theta0, x0) with the per-step masks behind P_n^N.
struct VisitStats {
  Phase theta0 = 0.0L;
  double x0 = 0.0;
  std::int64_t N = 0;
  std::vector<char> in_C_mask;
  std::vector<char> in_I0_mask;
  std::vector<std::int64_t> suffix;  // suffix[n] = P_n^N, size N + 1
  std::vector<std::pair<std::int64_t, std::int64_t>> counts;  // requested (n, P_n^N)

  std::int64_t P(std::int64_t n) const { return suffix.at(static_cast<std::size_t>(n)); }
  // P_k^n of the same orbit: steps l in [k, n - 1].
  std::int64_t P_range(std::int64_t k, std::int64_t n) const { return P(k) - P(n); }

  static VisitStats from_masks(Phase theta0, double x0, std::vector<char> in_C, std::vector<char> in_I0,
                               std::span<const std::int64_t> n_list = {});
};

VisitStats visit_counts(const CircleMapFamily& fam, const ContractionExpansionData& k, Phase theta0, double x0,
                        std::int64_t N, std::span<const std::int64_t> n_list = {});

// p_k^n(theta) = max{p : exists l in [M_{p-1}, min(n, n-k+M_p+1)] with theta - l omega in I_p}, -1 if none.
int p_index(const ScaleHierarchy& h, Phase omega, Phase theta, std::int64_t n, std::int64_t k);
// i_k^n = max{l : n - k >= 2 K_l M_l - M_l - 1} over stored levels, -1 if none.
int i_index(const ScaleHierarchy& h, std::int64_t n, std::int64_t k);

struct VisitBoundRow {
  std::int64_t k = 0;
  std::int64_t P = 0;
  int p = -1;
  int i = -1;
  double stay_bound = 0.0;
  bool stay_holds = false;
  double b2_bound = 0.0;
  bool b2_holds = false;
};

struct VisitBoundReport {
  bool admissible = false;
  std::string reason;
  int j = 0;             // smallest j with theta in the truncated Omega_j
  std::int64_t k_max = -1;
  std::vector<VisitBoundRow> rows;
  std::int64_t stay_holds = 0;
  std::int64_t b2_holds = 0;
  bool i_ge_p = true;
};

// Orbit start is (theta0, x0) = (theta - n omega, x) with n = stats.N.
VisitBoundReport check_visit_lower_bound(const VisitStats& stats, const ScaleHierarchy& h, Phase omega,
                                         const Arc& C, std::int64_t k_stride = 1);

// Qualifying flags for the pair orbit theta + m omega, theta' + m omega, m = -1 .. length - 2.
struct DualOrbitMask {
  Phase theta = 0.0L;
  Phase theta_prime = 0.0L;
  std::vector<char> qualifies;  // index m + 1
};

DualOrbitMask dual_orbit_mask(const CircleMapFamily& fam, const InvariantGraphSample& g,
                              const ContractionExpansionData& k, Phase theta, Phase theta_prime,
                              std::int64_t length);
// wp^n at the pair shifted by `offset` rotations, read off the stored mask.
std::int64_t wp_from_mask(const DualOrbitMask& mask, std::int64_t offset, std::int64_t n);
std::int64_t wp_counts(const CircleMapFamily& fam, const InvariantGraphSample& g, const ContractionExpansionData& k,
                       Phase theta, Phase theta_prime, std::int64_t n);

struct LjBound {
  std::int64_t start = 0;  // 2 K_{j-1} M_{j-1} - M_{j-1} - 1
  double c0 = 0.0;
  double log_value = 0.0;
  double value = 0.0;  // exp(log_value), may be inf
};

LjBound l_j_bound(double S, double alpha, double b, std::int64_t K_prev, std::int64_t M_prev);

struct LipschitzPair {
  double theta = 0.0;
  double theta_prime = 0.0;
  double pair_dist = 0.0;
  double graph_dist = 0.0;
};

struct LipschitzReport {
  int j = 0;
  std::int64_t pair_count = 0;
  double max_slope = 0.0;
  double L_j_bound = 0.0;
  double log_L_j_bound = 0.0;
  double slack = 0.0;
  bool within_bound = false;
  std::string status;  // "ok", "empty-set"
  std::vector<LipschitzPair> pairs;
  std::vector<LipschitzPair> offending;
};

using GraphFunction = std::function<double(Phase)>;
using MembershipFunction = std::function<bool(Phase)>;

LipschitzReport empirical_lipschitz(const GraphFunction& graph, const ArcSet& omega_set, double S, double E_length,
                                    std::int64_t pair_budget, std::uint64_t seed,
                                    const MembershipFunction& exact_member = {}, Exec exec = Exec::Parallel);
void attach_bound(LipschitzReport& r, int j, const LjBound& L);

double fraction_outside_E(const InvariantGraphSample& g, const Arc& E);

double ball_measure(std::span<const double> theta, std::span<const double> phi, GraphPoint center, double eps);

enum class DimensionKind { Pointwise, Box };

struct DimensionEstimate {
  DimensionKind kind = DimensionKind::Pointwise;
  std::vector<double> scales;
  std::vector<double> values;  // mean ball measure per scale, or occupied boxes
  double slope = 0.0;
  double r2 = 0.0;
  std::vector<double> center_slopes;
  std::vector<double> flagged_scales;  // below the 16/N noise floor for some center
  std::string warning;
};

// Geometric scale ladder base^-from .. base^-to.
std::vector<double> dyadic_scales(int from_exp, int to_exp);

std::vector<GraphPoint> sample_centers(std::span<const double> theta, std::span<const double> phi, int count,
                                       std::uint64_t seed);

DimensionEstimate pointwise_dimension(std::span<const double> theta, std::span<const double> phi,
                                      std::span<const GraphPoint> centers, std::span<const double> eps,
                                      Exec exec = Exec::Parallel);

DimensionEstimate box_dimension(std::span<const GraphPoint> points, std::span<const double> scales);

}  // namespace snalab
