#include "snalab/multiscale.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace snalab {

BSequence b_sequence(std::int64_t K0, std::int64_t kappa, int n) {
  if (K0 < 2 || kappa < 2) throw std::invalid_argument("b_sequence needs K0 >= 2 and kappa >= 2");
  if (n < 0) throw std::invalid_argument("b_sequence needs n >= 0");
  BSequence out;
  out.values.push_back(1.0);
  double K = static_cast<double>(K0);
  for (int i = 1; i <= n; ++i) {
    out.values.push_back((1.0 - 1.0 / K) * out.values.back());
    K *= static_cast<double>(kappa);
  }
  // Full product until the factors are 1 to machine precision; the remainder
  // satisfies prod (1 - x_k) >= 1 - sum x_k with sum x_k <= 2 / K_last.
  double p = 1.0;
  K = static_cast<double>(K0);
  while (1.0 / K > 1e-18) {
    p *= 1.0 - 1.0 / K;
    K *= static_cast<double>(kappa);
  }
  out.limit = p * (1.0 - 2.0 / K);
  out.below_threshold = !(out.limit > kBThreshold);
  return out;
}

ScaleHierarchy make_hierarchy(const HierarchyParams& params, double alpha, const ArcSet& I0) {
  if (params.n_max < 0) throw std::invalid_argument("hierarchy needs n_max >= 0");
  if (params.M0 < 2) throw std::invalid_argument("hierarchy needs M0 >= 2");
  if (!(params.s > 0)) throw std::invalid_argument("hierarchy needs s > 0");
  if (!(alpha > 1)) throw std::invalid_argument("hierarchy needs alpha > 1");
  ScaleHierarchy h;
  h.K0 = params.K0;
  h.kappa = params.kappa;
  h.s = params.s;
  h.alpha = alpha;
  h.n_max = params.n_max;
  h.M_cap = params.M_cap;
  h.n_components = I0.component_count();
  h.b = b_sequence(params.K0, params.kappa, params.n_max + 1);
  if (h.b.below_threshold) {
    throw std::invalid_argument("(K0, kappa) give lim b_n <= sqrt(5/6)");
  }
  std::int64_t K = params.K0;
  std::int64_t M = params.M0;
  double eps = params.eps0 ? *params.eps0 : std::min(1.0, 1.01 * I0.max_component_length());
  for (int n = 0; n <= params.n_max; ++n) {
    h.K.push_back(K);
    h.M.push_back(M);
    h.eps.push_back(eps);
    K *= params.kappa;
    eps = std::min(eps, 2.0 * std::pow(alpha, -static_cast<double>(M) / 4.0) / params.s);
    double next = std::floor(2.0 * std::pow(alpha, static_cast<double>(M) / 16.0));
    M = static_cast<std::int64_t>(std::min(next, static_cast<double>(params.M_cap)));
  }
  h.levels.assign(static_cast<std::size_t>(params.n_max) + 1, ArcSet{});
  h.levels[0] = I0;
  h.long_arc_samples.assign(static_cast<std::size_t>(params.n_max) + 1, 0);
  return h;
}

CriticalStepResult critical_step(const CircleMapFamily& fam, const ContractionExpansionData& k,
                                 const ScaleHierarchy& h, int n, int samples_per_component, Exec exec) {
  if (n < 0 || n >= static_cast<int>(h.levels.size())) throw std::out_of_range("critical_step: no level n");
  if (samples_per_component < 4) throw std::invalid_argument("critical_step needs >= 4 samples per component");
  CriticalStepResult out;
  const ArcSet& In = h.levels[n];
  if (In.empty()) return out;
  const std::int64_t M = h.M[n];
  const auto& comps = In.arcs();
  const std::size_t K = static_cast<std::size_t>(samples_per_component);

  std::vector<Phase> samples(comps.size() * K);
  for (std::size_t c = 0; c < comps.size(); ++c) {
    for (std::size_t i = 0; i < K; ++i) {
      Phase pos = static_cast<Phase>(comps[c].left) +
                  (static_cast<Phase>(i) + 0.5L) * static_cast<Phase>(comps[c].length) / static_cast<Phase>(K);
      samples[c * K + i] = wrap_phase(pos);
    }
  }
  std::vector<char> member(samples.size()), wide(samples.size());
  if (exec == Exec::Serial) {
    kernels::critical_scan_serial(fam, k.C, k.E, samples, M, member, wide);
  } else {
    kernels::critical_scan_parallel(fam, k.C, k.E, samples, M, member, wide);
  }
  out.samples = static_cast<std::int64_t>(samples.size());
  out.long_arc_samples = std::count(wide.begin(), wide.end(), 1);

  auto is_member = [&](double lift) {
    return kernels::critical_membership(fam, k.C, k.E, static_cast<Phase>(wrap_unit(lift)), M);
  };
  auto refine = [&](double inside, double outside) {
    while (std::fabs(outside - inside) > 1e-8) {
      double mid = 0.5 * (inside + outside);
      if (is_member(mid)) {
        inside = mid;
      } else {
        outside = mid;
      }
    }
    return 0.5 * (inside + outside);
  };

  std::vector<Arc> pieces;
  for (std::size_t c = 0; c < comps.size(); ++c) {
    const double left = comps[c].left;
    const double st = comps[c].length / static_cast<double>(K);
    auto pos = [&](std::size_t i) { return left + (static_cast<double>(i) + 0.5) * st; };
    std::vector<std::pair<double, double>> runs;
    std::size_t i = 0;
    while (i < K) {
      if (!member[c * K + i]) {
        ++i;
        continue;
      }
      std::size_t j = i;
      while (j + 1 < K && member[c * K + j + 1]) ++j;
      double l = i == 0 ? left : refine(pos(i), pos(i - 1));
      double r = j + 1 == K ? left + comps[c].length : refine(pos(j), pos(j + 1));
      runs.emplace_back(l, r);
      i = j + 1;
    }
    std::vector<std::pair<double, double>> merged;
    for (const auto& run : runs) {
      if (!merged.empty() && run.first - merged.back().second < 2.0 * st) {
        merged.back().second = run.second;
      } else {
        merged.push_back(run);
      }
    }
    for (const auto& [l, r] : merged) pieces.push_back({wrap_unit(l), r - l});
  }
  out.next = ArcSet::from_arcs(pieces).intersect(In);
  return out;
}

ScaleHierarchy build_hierarchy(const CircleMapFamily& fam, const ContractionExpansionData& k,
                               const HierarchyParams& params, Exec exec) {
  ScaleHierarchy h = make_hierarchy(params, k.alpha_bound, k.I0);
  for (int n = 0; n < params.n_max; ++n) {
    CriticalStepResult r = critical_step(fam, k, h, n, params.samples_per_component, exec);
    h.levels[n + 1] = r.next;
    h.long_arc_samples[n + 1] = r.long_arc_samples;
  }
  return h;
}

namespace {

ArcSet rotated_union(const ArcSet& base, Phase omega, std::int64_t l_from, std::int64_t l_to) {
  std::vector<ArcSet> parts;
  if (base.empty()) return {};
  for (std::int64_t l = l_from; l <= l_to; ++l) parts.push_back(base.translate(rotate(0.0L, l, omega)));
  return ArcSet::union_of(parts);
}

int clamp_level(const ScaleHierarchy& h, int n) {
  return std::min(n, static_cast<int>(h.levels.size()) - 1);
}

}  // namespace

F1Result check_F1(const ScaleHierarchy& h, Phase omega, int n) {
  n = clamp_level(h, n);
  for (int j = 0; j <= n; ++j) {
    const ArcSet& I = h.levels[j];
    if (I.empty()) continue;
    std::int64_t kmax = 2 * h.K[j] * h.M[j];
    for (std::int64_t k = 1; k <= kmax; ++k) {
      if (I.intersects(I.translate(rotate(0.0L, k, omega)))) return {false, j, k};
    }
  }
  return {};
}

ArcSet w_plus(const ScaleHierarchy& h, Phase omega, int n) {
  std::vector<ArcSet> parts;
  for (int j = 0; j <= clamp_level(h, n); ++j) parts.push_back(rotated_union(h.levels[j], omega, 1, h.M[j] + 1));
  return ArcSet::union_of(parts);
}

ArcSet w_minus(const ScaleHierarchy& h, Phase omega, int n) {
  std::vector<ArcSet> parts;
  for (int j = 0; j <= clamp_level(h, n); ++j) parts.push_back(rotated_union(h.levels[j], omega, -(h.M[j] - 1), 0));
  return ArcSet::union_of(parts);
}

ArcSet z_minus(const ScaleHierarchy& h, Phase omega, int n) {
  std::vector<ArcSet> parts;
  for (int j = 0; j <= clamp_level(h, n); ++j) parts.push_back(rotated_union(h.levels[j], omega, -(h.M[j] - 2), 0));
  return ArcSet::union_of(parts);
}

F2Result check_F2(const ScaleHierarchy& h, Phase omega, int n) {
  n = clamp_level(h, n);
  for (int j = 1; j <= n; ++j) {
    const ArcSet& I = h.levels[j];
    if (I.empty()) continue;
    ArcSet lhs = I.translate(rotate(0.0L, -(h.M[j] - 1), omega)).unite(I.translate(rotate(0.0L, h.M[j] + 1, omega)));
    ArcSet rhs = w_plus(h, omega, j - 1).unite(w_minus(h, omega, j - 1));
    if (lhs.intersects(rhs)) return {false, j};
  }
  return {};
}

EResult check_E(const ScaleHierarchy& h, int n) {
  EResult r;
  if (n < 0 || n >= static_cast<int>(h.levels.size())) throw std::out_of_range("check_E: no level n");
  const ArcSet& I = h.levels[n];
  r.components = I.component_count();
  r.expected = h.n_components;
  r.eps = h.eps[n];
  bool short_enough = true;
  for (const Arc& a : I.arcs()) {
    r.lengths.push_back(a.length);
    short_enough = short_enough && a.length < r.eps;
  }
  r.holds = r.components == r.expected && short_enough;
  return r;
}

OmegaSet omega_j(const ScaleHierarchy& h, Phase omega, int j, int n_max) {
  if (j < 1) throw std::invalid_argument("omega_j needs j >= 1");
  OmegaSet out;
  out.j = j;
  out.n_max = n_max = clamp_level(h, n_max);
  std::vector<ArcSet> parts;
  double used = 0.0;
  for (int k = j; k <= n_max; ++k) {
    if (h.levels[k].empty()) continue;
    parts.push_back(rotated_union(h.levels[k], omega, 0, 2 * h.K[k] * h.M[k]));
    used += static_cast<double>(2 * h.K[k] * h.M[k] + 1) * static_cast<double>(h.n_components) * h.eps[k];
  }
  out.set = ArcSet::union_of(parts).complement();
  out.leb_lower_bound = 1.0 - used;

  // Tail: stored levels beyond the truncation, then the M and eps rules
  // extrapolated until eps underflows or reaches a fixed point (divergent tail).
  double tail = 0.0;
  for (int k = n_max + 1; k <= h.n_max; ++k) tail += std::sqrt(h.eps[k]);
  double eps = h.eps.back();
  double M = static_cast<double>(h.M.back());
  for (int step = 0; step < 400 && eps > 0.0; ++step) {
    double next = std::min(eps, 2.0 * std::pow(h.alpha, -M / 4.0) / h.s);
    double M_next = std::min(static_cast<double>(h.M_cap), std::floor(2.0 * std::pow(h.alpha, M / 16.0)));
    if (next == eps && M_next == M) {
      tail = std::numeric_limits<double>::infinity();
      break;
    }
    tail += std::sqrt(next);
    eps = next;
    M = M_next;
  }
  out.tail_bound = tail;
  out.bound_positive = out.leb_lower_bound - out.tail_bound > 0.0;
  return out;
}

bool in_omega_j(const ScaleHierarchy& h, Phase omega, int j, int n_max, Phase theta) {
  n_max = clamp_level(h, n_max);
  for (int k = j; k <= n_max; ++k) {
    const ArcSet& I = h.levels[k];
    if (I.empty()) continue;
    std::int64_t lmax = 2 * h.K[k] * h.M[k];
    for (std::int64_t l = 0; l <= lmax; ++l) {
      if (I.contains(static_cast<double>(rotate(theta, -l, omega)))) return false;
    }
  }
  return true;
}

BudgetReport measure_budget(const ScaleHierarchy& h, int n_max) {
  BudgetReport r;
  n_max = clamp_level(h, n_max);
  for (int n = 0; n <= n_max; ++n) {
    double s = static_cast<double>(h.M[n] + 1) * static_cast<double>(h.n_components) * h.eps[n];
    bool ok = s <= std::sqrt(h.eps[n]);
    r.summands.push_back(s);
    r.summand_ok.push_back(ok);
    r.all_summands_ok = r.all_summands_ok && ok;
    r.total += s;
  }
  r.below_one_sixteenth = r.total < 1.0 / 16.0;
  return r;
}

double orbit_net_coverage(const CircleMapFamily& fam, Phase theta0, double x0, std::int64_t n, int boxes) {
  std::vector<char> seen(static_cast<std::size_t>(boxes) * boxes, 0);
  Phase t = wrap_phase(theta0);
  double x = wrap_unit(x0);
  for (std::int64_t k = 0; k < n; ++k) {
    int i = std::min(boxes - 1, static_cast<int>(static_cast<double>(t) * boxes));
    int j = std::min(boxes - 1, static_cast<int>(x * boxes));
    seen[static_cast<std::size_t>(i) * boxes + j] = 1;
    x = wrap_unit(fiber_lift(fam, t, x));
    t = wrap_phase(t + fam.omega());
  }
  return static_cast<double>(std::count(seen.begin(), seen.end(), 1)) / static_cast<double>(seen.size());
}

}  // namespace snalab
