#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "snalab/families.hpp"
#include "snalab/multiscale.hpp"

namespace snalab {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct FamilySpec {
  FamilyKind kind = FamilyKind::ArctanFamily;
  int q = 2;
  double alpha = 1000.0;
  double tau = 0.2;
  ForcingKind forcing = ForcingKind::Cosine;
  double amplitude = 1.0;
  bool operator==(const FamilySpec&) const = default;
};

struct SweepSpec {
  std::string parameter = "tau";
  double min = 0.0;
  double max = 1.0;
  int steps = 512;
  std::int64_t iterations = 1000000;
  double x0 = 0.0;
  double theta0 = 0.0;
  bool operator==(const SweepSpec&) const = default;
};

struct ExperimentConfig {
  FamilySpec family;
  std::string omega = "golden";
  std::int64_t grid_size = 16384;
  int depth = 400;
  std::optional<double> seed_x;  // default: midpoint of C when known, else 0
  int constants_theta_grid = 1024;
  int constants_x_grid = 4096;
  HierarchyParams hierarchy{25, 2, 2, 1000000, 1.0, 2, 1 << 14, std::nullopt};
  SweepSpec sweep;
  std::int64_t lyapunov_orbit = 1000000;
  std::int64_t lipschitz_pairs = 100000;
  int lipschitz_j_max = 3;
  std::int64_t dimension_grid = 131072;
  int dimension_centers = 32;
  int pointwise_eps_from = 4;
  int pointwise_eps_to = 13;
  int box_eps_from = 4;
  int box_eps_to = 8;
  std::int64_t visit_horizon = 20000;
  int visit_samples = 32;
  int diophantine_nmax = 1000000;
  double diophantine_gamma = 0.1;
  double diophantine_nu = 1.0;
  std::string out_dir = "out";
  int workers = 0;  // execution setting only; not serialized
  std::uint64_t seed = 1;

  bool operator==(const ExperimentConfig&) const = default;
};

// Flat `key = value` lines with dotted keys; '#' starts a comment.
ExperimentConfig parse_config(std::string_view text);
ExperimentConfig load_config(const std::filesystem::path& path);
std::string serialize_config(const ExperimentConfig& cfg);

CircleMapFamily make_family(const ExperimentConfig& cfg);

std::string format_number(double v);
double parse_double(std::string_view s, std::string_view key);
std::int64_t parse_int(std::string_view s, std::string_view key);

}  // namespace snalab
