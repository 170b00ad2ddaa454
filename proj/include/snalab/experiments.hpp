#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "snalab/attractor.hpp"
#include "snalab/config.hpp"
#include "snalab/csv.hpp"
#include "snalab/families.hpp"
#include "snalab/multiscale.hpp"
#include "snalab/rectifiability.hpp"

namespace snalab {

inline constexpr int kExitOk = 0;
inline constexpr int kExitViolation = 1;
inline constexpr int kExitConfig = 2;

struct Plateau {
  std::int64_t p = 0;
  std::int64_t q = 1;
  std::size_t first = 0;  // sweep index where the run starts; may wrap past the end
  std::size_t count = 0;
  double tau_from = 0.0;
  double tau_to = 0.0;
  double width = 0.0;  // count * step
};

struct SweepPoint {
  double tau = 0.0;
  bool ok = false;
  std::string error;
  OrbitSummary summary;
};

struct SweepResult {
  std::int64_t iterations = 0;
  double step = 0.0;
  bool circular = false;
  std::vector<SweepPoint> points;
  std::vector<Plateau> plateaus;
};

// Maximal runs of at least two points whose rotation number is within 2/n of
// p/q, q <= 10, taking the smallest such q. `circular` joins the last run to
// the first and compares rho mod 1.
std::vector<Plateau> detect_plateaus(const std::vector<SweepPoint>& points, std::int64_t n, double step,
                                     bool circular);

// Caches the expensive intermediate objects shared between stages.
class Session {
 public:
  explicit Session(ExperimentConfig cfg);

  const ExperimentConfig& config() const { return cfg_; }
  const CircleMapFamily& family() const { return fam_; }
  const std::filesystem::path& out_dir() const { return out_; }

  const ConstantsEstimate& constants();
  bool in_regime() { return constants().split_found; }
  double seed_x();
  const InvariantGraphSample& attractor();
  const InvariantGraphSample& repeller();
  const ScaleHierarchy& hierarchy();  // requires in_regime()

  // Stage seeds, derived from run.seed.
  std::uint64_t stage_seed(std::uint64_t stage) const;

 private:
  ExperimentConfig cfg_;
  CircleMapFamily fam_;
  std::filesystem::path out_;
  std::optional<ConstantsEstimate> constants_;
  std::optional<InvariantGraphSample> attractor_;
  std::optional<InvariantGraphSample> repeller_;
  std::optional<ScaleHierarchy> hierarchy_;
};

// Every stage adds its diagnostics to `summary` and writes its files under the
// session output directory. Keys starting with "diagnostic." decide the exit code.
void write_resolved_config(const Session& s);
void stage_constants(Session& s, KeyValueFile& summary);
void stage_attractor(Session& s, KeyValueFile& summary);
void stage_lyapunov(Session& s, KeyValueFile& summary);
void stage_hierarchy(Session& s, KeyValueFile& summary);
void stage_omega_sets(Session& s, KeyValueFile& summary);
void stage_lipschitz(Session& s, KeyValueFile& summary);
void stage_dimension(Session& s, KeyValueFile& summary);
void stage_visits(Session& s, KeyValueFile& summary);

SweepResult run_staircase(const ExperimentConfig& cfg, KeyValueFile* summary = nullptr);

// Full report; returns the exit code and writes summary.txt.
int run_sna_report(const ExperimentConfig& cfg);
// Hierarchy with conditions only.
int run_hierarchy(const ExperimentConfig& cfg);

// 1 if any "diagnostic.*" entry is "fail".
int exit_code_for(const KeyValueFile& summary);

}  // namespace snalab
