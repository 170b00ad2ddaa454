#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "snalab/arcset.hpp"
#include "snalab/families.hpp"
#include "snalab/kernels.hpp"

namespace snalab {

inline const double kBThreshold = 0.91287092917527690;  // sqrt(5/6)

struct BSequence {
  std::vector<double> values;  // b_0 .. b_n
  double limit = 0.0;          // lower bound for lim b_n
  bool below_threshold = false;
};

BSequence b_sequence(std::int64_t K0, std::int64_t kappa, int n);

struct HierarchyParams {
  std::int64_t K0 = 100;
  std::int64_t kappa = 2;
  std::int64_t M0 = 2;
  std::int64_t M_cap = 1000000;
  double s = 1.0;
  int n_max = 2;
  int samples_per_component = 1 << 14;
  std::optional<double> eps0;
  bool operator==(const HierarchyParams&) const = default;
};

struct ScaleHierarchy {
  std::int64_t K0 = 0;
  std::int64_t kappa = 2;
  double s = 1.0;
  double alpha = 0.0;  // alpha_bound used by the M and eps rules
  int n_max = 0;
  std::int64_t M_cap = 1000000;
  std::size_t n_components = 0;
  std::vector<std::int64_t> K;
  std::vector<std::int64_t> M;
  std::vector<double> eps;
  BSequence b;
  std::vector<ArcSet> levels;
  std::vector<std::int64_t> long_arc_samples;  // per computed level >= 1

  double b_limit() const { return b.limit; }
};

// K, M, eps and b for levels 0..n_max with level 0 set to I0. Higher levels start empty.
ScaleHierarchy make_hierarchy(const HierarchyParams& params, double alpha, const ArcSet& I0);

struct CriticalStepResult {
  ArcSet next;
  std::int64_t samples = 0;
  std::int64_t long_arc_samples = 0;
};

CriticalStepResult critical_step(const CircleMapFamily& fam, const ContractionExpansionData& k,
                                 const ScaleHierarchy& h, int n, int samples_per_component,
                                 Exec exec = Exec::Parallel);

// Fills levels 1..n_max by repeated critical steps.
ScaleHierarchy build_hierarchy(const CircleMapFamily& fam, const ContractionExpansionData& k,
                               const HierarchyParams& params, Exec exec = Exec::Parallel);

struct F1Result {
  bool holds = true;
  int j = -1;
  std::int64_t k = 0;
};
F1Result check_F1(const ScaleHierarchy& h, Phase omega, int n);

struct F2Result {
  bool holds = true;
  int j = -1;
};
F2Result check_F2(const ScaleHierarchy& h, Phase omega, int n);

struct EResult {
  bool holds = false;
  std::size_t components = 0;
  std::size_t expected = 0;
  std::vector<double> lengths;
  double eps = 0.0;
};
EResult check_E(const ScaleHierarchy& h, int n);

// W_n^+ = U_{j<=n} U_{l=1}^{M_j+1} I_j + l omega, W_n^- = U_{j<=n} U_{l=-(M_j-1)}^{0} I_j + l omega.
ArcSet w_plus(const ScaleHierarchy& h, Phase omega, int n);
ArcSet w_minus(const ScaleHierarchy& h, Phase omega, int n);
// Z_n^- = U_{j<=n} U_{l=-(M_j-2)}^{0} I_j + l omega; empty for n < 0.
ArcSet z_minus(const ScaleHierarchy& h, Phase omega, int n);

struct OmegaSet {
  int j = 0;
  int n_max = 0;
  ArcSet set;
  double leb_lower_bound = 0.0;  // 1 - sum (2 K_k M_k + 1) N eps_k over nonempty levels k = j..n_max
  double tail_bound = 0.0;       // sum over k > n_max of eps_k^{1/2}, extrapolated; may be inf
  bool bound_positive = false;
};
OmegaSet omega_j(const ScaleHierarchy& h, Phase omega, int j, int n_max);

// Direct membership in the truncated Omega_j by rotating theta back through each level.
bool in_omega_j(const ScaleHierarchy& h, Phase omega, int j, int n_max, Phase theta);

struct BudgetReport {
  double total = 0.0;
  std::vector<double> summands;
  std::vector<bool> summand_ok;  // summand <= eps_n^{1/2}
  bool all_summands_ok = true;
  bool below_one_sixteenth = false;
};
BudgetReport measure_budget(const ScaleHierarchy& h, int n_max);

// Non-authoritative minimality heuristic: fraction of eps-boxes of T^2 visited by one orbit.
double orbit_net_coverage(const CircleMapFamily& fam, Phase theta0, double x0, std::int64_t n, int boxes);

}  // namespace snalab
