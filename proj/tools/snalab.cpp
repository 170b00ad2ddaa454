#include <omp.h>

#include <CLI11.hpp>
#include <cstdio>
#include <functional>
#include <map>
#include <optional>
#include <string>

#include "snalab/config.hpp"
#include "snalab/experiments.hpp"

using namespace snalab;

namespace {

struct Overrides {
  std::string config;
  std::optional<std::string> out;
  std::optional<int> workers;
  std::optional<std::uint64_t> seed;
  std::optional<double> tau;
  std::optional<std::int64_t> grid;
  std::optional<int> depth;
};

ExperimentConfig resolve(const Overrides& o) {
  ExperimentConfig cfg = o.config.empty() ? ExperimentConfig{} : load_config(o.config);
  if (o.out) cfg.out_dir = *o.out;
  if (o.workers) cfg.workers = *o.workers;
  if (o.seed) cfg.seed = *o.seed;
  if (o.tau) cfg.family.tau = *o.tau;
  if (o.grid) cfg.grid_size = *o.grid;
  if (o.depth) cfg.depth = *o.depth;
  // Re-validate the overridden values through the text form.
  int workers = cfg.workers;
  cfg = parse_config(serialize_config(cfg));
  cfg.workers = workers;
  if (cfg.workers > 0) omp_set_num_threads(cfg.workers);
  return cfg;
}

using Stage = std::function<void(Session&, KeyValueFile&)>;

int run_stages(const ExperimentConfig& cfg, std::initializer_list<Stage> stages) {
  Session s(cfg);
  write_resolved_config(s);
  KeyValueFile summary;
  summary.set("family", to_string(cfg.family.kind));
  summary.set("omega", cfg.omega);
  for (const Stage& st : stages) st(s, summary);
  int code = exit_code_for(summary);
  summary.set("exit_code", code);
  summary.save(s.out_dir() / "summary.txt");
  std::fputs(summary.str().c_str(), stdout);
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quasiperiodically forced circle maps: strange non-chaotic attractors and their diagnostics"};
  app.require_subcommand(1);
  app.fallthrough();
  Overrides o;
  app.add_option("--config", o.config, "config file (key = value lines)");
  app.add_option("--out", o.out, "output directory");
  app.add_option("--workers", o.workers, "OpenMP threads (0: runtime default)");
  app.add_option("--seed", o.seed, "run seed");
  app.add_option("--tau", o.tau, "family parameter tau");
  app.add_option("--grid", o.grid, "graph grid size N");
  app.add_option("--depth", o.depth, "pullback depth m");

  std::map<std::string, std::function<int(const ExperimentConfig&)>> commands = {
      {"constants", [](const ExperimentConfig& c) { return run_stages(c, {stage_constants}); }},
      {"attractor", [](const ExperimentConfig& c) { return run_stages(c, {stage_constants, stage_attractor}); }},
      {"lyapunov", [](const ExperimentConfig& c) { return run_stages(c, {stage_constants, stage_lyapunov}); }},
      {"hierarchy", [](const ExperimentConfig& c) { return run_hierarchy(c); }},
      {"omega-sets",
       [](const ExperimentConfig& c) { return run_stages(c, {stage_constants, stage_omega_sets}); }},
      {"lipschitz",
       [](const ExperimentConfig& c) { return run_stages(c, {stage_constants, stage_lipschitz}); }},
      {"dimension",
       [](const ExperimentConfig& c) { return run_stages(c, {stage_constants, stage_dimension}); }},
      {"staircase",
       [](const ExperimentConfig& c) {
         KeyValueFile summary;
         run_staircase(c, &summary);
         std::fputs(summary.str().c_str(), stdout);
         return kExitOk;
       }},
      {"report", [](const ExperimentConfig& c) { return run_sna_report(c); }},
  };
  std::map<std::string, std::string> help = {
      {"constants", "estimate C, E, alpha, S and I0"},
      {"attractor", "pullback attractor and repeller graphs"},
      {"lyapunov", "graph and orbit Lyapunov exponents"},
      {"hierarchy", "critical regions with F1/F2/E verdicts"},
      {"omega-sets", "truncated Omega_j sets and measure bounds"},
      {"lipschitz", "empirical Lipschitz slopes on Omega_j"},
      {"dimension", "pointwise and box dimension estimates"},
      {"staircase", "rotation number sweep over tau with plateaus"},
      {"report", "every stage with a pass/fail summary"},
  };
  for (const auto& [name, _] : commands) app.add_subcommand(name, help[name]);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }
  try {
    ExperimentConfig cfg = resolve(o);
    for (const auto& [name, fn] : commands) {
      if (app.got_subcommand(name)) return fn(cfg);
    }
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitConfig;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitViolation;
  }
  return kExitConfig;
}
