#include "snalab/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <set>
#include <sstream>
#include <vector>

#include "snalab/diophantine.hpp"

namespace snalab {

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

double parse_double(std::string_view s, std::string_view key) {
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  double v = 0.0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
    throw ConfigError("bad number for " + std::string(key) + ": '" + std::string(s) + "'");
  }
  return v;
}

std::int64_t parse_int(std::string_view s, std::string_view key) {
  std::int64_t v = 0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
    throw ConfigError("bad integer for " + std::string(key) + ": '" + std::string(s) + "'");
  }
  return v;
}

namespace {

struct Field {
  std::string key;
  std::function<std::string(const ExperimentConfig&)> get;
  std::function<void(ExperimentConfig&, std::string_view)> set;
};

template <class T>
Field int_field(std::string key, T ExperimentConfig::*member) {
  return {key, [member](const ExperimentConfig& c) { return std::to_string(c.*member); },
          [member, key](ExperimentConfig& c, std::string_view v) { c.*member = static_cast<T>(parse_int(v, key)); }};
}

Field double_field(std::string key, std::function<double&(ExperimentConfig&)> ref) {
  return {key, [ref](const ExperimentConfig& c) { return format_number(ref(const_cast<ExperimentConfig&>(c))); },
          [ref, key](ExperimentConfig& c, std::string_view v) { ref(c) = parse_double(v, key); }};
}

template <class T>
Field int_ref_field(std::string key, std::function<T&(ExperimentConfig&)> ref) {
  return {key, [ref](const ExperimentConfig& c) { return std::to_string(ref(const_cast<ExperimentConfig&>(c))); },
          [ref, key](ExperimentConfig& c, std::string_view v) { ref(c) = static_cast<T>(parse_int(v, key)); }};
}

FamilyKind parse_kind(std::string_view v) {
  if (v == "arctan") return FamilyKind::ArctanFamily;
  if (v == "arnold") return FamilyKind::DrivenArnold;
  if (v == "cocycle") return FamilyKind::ProjectiveCocycle;
  if (v == "rigid") return FamilyKind::RigidTest;
  throw ConfigError("unknown family.kind '" + std::string(v) + "'");
}

ForcingKind parse_forcing(std::string_view v) {
  if (v == "cosine") return ForcingKind::Cosine;
  if (v == "arctan-sine") return ForcingKind::ArctanSine;
  if (v == "none") return ForcingKind::None;
  throw ConfigError("unknown family.forcing '" + std::string(v) + "'");
}

Field optional_field(std::string key, std::function<std::optional<double>&(ExperimentConfig&)> ref) {
  return {key,
          [ref](const ExperimentConfig& c) {
            const auto& o = ref(const_cast<ExperimentConfig&>(c));
            return o ? format_number(*o) : std::string("auto");
          },
          [ref, key](ExperimentConfig& c, std::string_view v) {
            if (v == "auto") {
              ref(c).reset();
            } else {
              ref(c) = parse_double(v, key);
            }
          }};
}

const std::vector<Field>& fields() {
  using C = ExperimentConfig;
  static const std::vector<Field> table = {
      {"family.kind", [](const C& c) { return to_string(c.family.kind); },
       [](C& c, std::string_view v) { c.family.kind = parse_kind(v); }},
      int_ref_field<int>("family.q", [](C& c) -> int& { return c.family.q; }),
      double_field("family.alpha", [](C& c) -> double& { return c.family.alpha; }),
      double_field("family.tau", [](C& c) -> double& { return c.family.tau; }),
      {"family.forcing", [](const C& c) { return to_string(c.family.forcing); },
       [](C& c, std::string_view v) { c.family.forcing = parse_forcing(v); }},
      double_field("family.amplitude", [](C& c) -> double& { return c.family.amplitude; }),
      {"omega", [](const C& c) { return c.omega; },
       [](C& c, std::string_view v) {
         try {
           parse_frequency(v);
         } catch (const std::invalid_argument& e) {
           throw ConfigError(e.what());
         }
         c.omega = std::string(v);
       }},
      int_field("grid.size", &C::grid_size),
      int_field("grid.depth", &C::depth),
      optional_field("grid.seed_x", [](C& c) -> std::optional<double>& { return c.seed_x; }),
      int_field("constants.theta_grid", &C::constants_theta_grid),
      int_field("constants.x_grid", &C::constants_x_grid),
      int_ref_field<std::int64_t>("hierarchy.K0", [](C& c) -> std::int64_t& { return c.hierarchy.K0; }),
      int_ref_field<std::int64_t>("hierarchy.kappa", [](C& c) -> std::int64_t& { return c.hierarchy.kappa; }),
      int_ref_field<std::int64_t>("hierarchy.M0", [](C& c) -> std::int64_t& { return c.hierarchy.M0; }),
      int_ref_field<std::int64_t>("hierarchy.M_cap", [](C& c) -> std::int64_t& { return c.hierarchy.M_cap; }),
      double_field("hierarchy.s", [](C& c) -> double& { return c.hierarchy.s; }),
      int_ref_field<int>("hierarchy.levels", [](C& c) -> int& { return c.hierarchy.n_max; }),
      int_ref_field<int>("hierarchy.samples", [](C& c) -> int& { return c.hierarchy.samples_per_component; }),
      optional_field("hierarchy.eps0", [](C& c) -> std::optional<double>& { return c.hierarchy.eps0; }),
      {"sweep.parameter", [](const C& c) { return c.sweep.parameter; },
       [](C& c, std::string_view v) {
         if (v != "tau") throw ConfigError("sweep.parameter must be 'tau'");
         c.sweep.parameter = std::string(v);
       }},
      double_field("sweep.min", [](C& c) -> double& { return c.sweep.min; }),
      double_field("sweep.max", [](C& c) -> double& { return c.sweep.max; }),
      int_ref_field<int>("sweep.steps", [](C& c) -> int& { return c.sweep.steps; }),
      int_ref_field<std::int64_t>("sweep.iterations", [](C& c) -> std::int64_t& { return c.sweep.iterations; }),
      double_field("sweep.x0", [](C& c) -> double& { return c.sweep.x0; }),
      double_field("sweep.theta0", [](C& c) -> double& { return c.sweep.theta0; }),
      int_field("lyapunov.orbit", &C::lyapunov_orbit),
      int_field("lipschitz.pairs", &C::lipschitz_pairs),
      int_field("lipschitz.j_max", &C::lipschitz_j_max),
      int_field("dimension.grid", &C::dimension_grid),
      int_field("dimension.centers", &C::dimension_centers),
      int_field("dimension.pointwise_from", &C::pointwise_eps_from),
      int_field("dimension.pointwise_to", &C::pointwise_eps_to),
      int_field("dimension.box_from", &C::box_eps_from),
      int_field("dimension.box_to", &C::box_eps_to),
      int_field("visits.horizon", &C::visit_horizon),
      int_field("visits.samples", &C::visit_samples),
      int_field("diophantine.n_max", &C::diophantine_nmax),
      double_field("diophantine.gamma", [](C& c) -> double& { return c.diophantine_gamma; }),
      double_field("diophantine.nu", [](C& c) -> double& { return c.diophantine_nu; }),
      {"run.out", [](const C& c) { return c.out_dir; }, [](C& c, std::string_view v) { c.out_dir = std::string(v); }},
      {"run.seed", [](const C& c) { return std::to_string(c.seed); },
       [](C& c, std::string_view v) {
         std::uint64_t s = 0;
         auto res = std::from_chars(v.data(), v.data() + v.size(), s);
         if (res.ec != std::errc{} || res.ptr != v.data() + v.size()) throw ConfigError("bad run.seed");
         c.seed = s;
       }},
  };
  return table;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

void validate(const ExperimentConfig& c) {
  if (c.grid_size < 256) throw ConfigError("grid.size must be >= 256");
  if (c.depth < 1) throw ConfigError("grid.depth must be >= 1");
  if (c.constants_theta_grid < 256 || c.constants_x_grid < 256) throw ConfigError("constants grids must be >= 256");
  if (c.sweep.steps < 1) throw ConfigError("sweep.steps must be >= 1");
  if (c.sweep.iterations < 1000) throw ConfigError("sweep.iterations must be >= 1000");
  if (c.lyapunov_orbit < 1000) throw ConfigError("lyapunov.orbit must be >= 1000");
  if (c.hierarchy.n_max < 0 || c.hierarchy.M0 < 2) throw ConfigError("hierarchy.levels >= 0 and hierarchy.M0 >= 2 required");
  if (c.hierarchy.K0 < 2 || c.hierarchy.kappa < 2) throw ConfigError("hierarchy.K0 and hierarchy.kappa must be >= 2");
  if (c.dimension_grid < 256) throw ConfigError("dimension.grid must be >= 256");
  if (c.workers < 0) throw ConfigError("run.workers must be >= 0");
}

}  // namespace

ExperimentConfig parse_config(std::string_view text) {
  ExperimentConfig cfg;
  std::set<std::string> seen;
  std::size_t line_no = 0;
  while (!text.empty()) {
    std::size_t nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    std::size_t eq = line.find('=');
    if (eq == std::string_view::npos) throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
    std::string key(trim(line.substr(0, eq)));
    std::string_view value = trim(line.substr(eq + 1));
    if (!seen.insert(key).second) throw ConfigError("duplicate key " + key);
    if (key == "run.workers") {
      cfg.workers = static_cast<int>(parse_int(value, key));
      continue;
    }
    bool found = false;
    for (const Field& f : fields()) {
      if (f.key == key) {
        f.set(cfg, value);
        found = true;
        break;
      }
    }
    if (!found) throw ConfigError("unknown key " + key);
  }
  validate(cfg);
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string serialize_config(const ExperimentConfig& cfg) {
  std::string out;
  for (const Field& f : fields()) out += f.key + " = " + f.get(cfg) + "\n";
  return out;
}

CircleMapFamily make_family(const ExperimentConfig& cfg) {
  const FamilySpec& f = cfg.family;
  Forcing forcing{f.forcing, f.forcing == ForcingKind::None ? 0.0 : f.amplitude};
  try {
    Phase w = parse_frequency(cfg.omega).value;
    switch (f.kind) {
      case FamilyKind::ArctanFamily: return CircleMapFamily::arctan(f.q, f.alpha, f.tau, forcing, w);
      case FamilyKind::DrivenArnold:
        return CircleMapFamily::driven_arnold(f.alpha, 0.0, f.tau, w).with_forcing(forcing);
      case FamilyKind::ProjectiveCocycle: return CircleMapFamily::projective_cocycle(f.alpha, f.tau, forcing, w);
      case FamilyKind::RigidTest: return CircleMapFamily::rigid(f.tau, w, forcing);
    }
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("family: ") + e.what());
  } catch (const std::domain_error& e) {
    throw ConfigError(std::string("family: ") + e.what());
  }
  throw ConfigError("unknown family");
}

}  // namespace snalab
