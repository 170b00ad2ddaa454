#include "snalab/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "snalab/diophantine.hpp"
#include "snalab/kernels.hpp"

namespace snalab {

namespace {

namespace fs = std::filesystem;

std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

double mid_of(const Arc& a) { return wrap_unit(a.left + 0.5 * a.length); }

std::vector<std::pair<std::string, std::string>> family_comments(const Session& s) {
  const ExperimentConfig& c = s.config();
  return {{"family", to_string(c.family.kind)},
          {"q", std::to_string(c.family.q)},
          {"alpha", format_number(c.family.alpha)},
          {"tau", format_number(c.family.tau)},
          {"forcing", to_string(c.family.forcing)},
          {"amplitude", format_number(c.family.amplitude)},
          {"omega", c.omega}};
}

void write_graph(const Session& s, const InvariantGraphSample& g, const std::string& name) {
  auto comments = family_comments(s);
  comments.emplace_back("N", std::to_string(g.grid_size));
  comments.emplace_back("m", std::to_string(g.pullback_depth));
  comments.emplace_back("seed_x", format_number(g.seed));
  CsvWriter w(s.out_dir() / name, {"theta", "phi", "residual"}, comments);
  for (std::size_t i = 0; i < g.phi.size(); ++i) w.values(g.theta[i], g.phi[i], g.residual[i]);
}

void write_arcset_rows(CsvWriter& w, int level, const ArcSet& set) {
  std::size_t c = 0;
  for (const Arc& a : set.arcs()) w.values(level, static_cast<long long>(c++), a.left, a.length);
}

void skip(KeyValueFile& summary, const std::string& key, const std::string& reason) {
  summary.set(key, "skipped (" + reason + ")");
}

}  // namespace

std::vector<Plateau> detect_plateaus(const std::vector<SweepPoint>& points, std::int64_t n, double step,
                                     bool circular) {
  const double tol = 2.0 / static_cast<double>(n);
  const std::size_t m = points.size();
  // Label each point with the first p/q (q <= 10) within tolerance, -1 if none.
  std::vector<std::pair<std::int64_t, std::int64_t>> label(m, {-1, 0});
  for (std::size_t i = 0; i < m; ++i) {
    if (!points[i].ok) continue;
    double rho = points[i].summary.rotation_number;
    if (circular) rho = wrap_unit(rho);
    for (std::int64_t q = 1; q <= 10 && label[i].first < 0; ++q) {
      double p = std::round(rho * static_cast<double>(q));
      double d = std::fabs(rho - p / static_cast<double>(q));
      if (circular) d = std::min(d, 1.0 - d);
      if (d <= tol) {
        std::int64_t pi = static_cast<std::int64_t>(p);
        if (circular) pi = ((pi % q) + q) % q;
        label[i] = {pi, q};
      }
    }
  }
  std::vector<Plateau> out;
  std::size_t i = 0;
  while (i < m) {
    if (label[i].first < 0) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j + 1 < m && label[j + 1] == label[i]) ++j;
    Plateau p;
    p.p = label[i].first;
    p.q = label[i].second;
    p.first = i;
    p.count = j - i + 1;
    out.push_back(p);
    i = j + 1;
  }
  if (circular && out.size() >= 2 && out.front().first == 0 && out.back().first + out.back().count == m &&
      out.front().p == out.back().p && out.front().q == out.back().q) {
    out.back().count += out.front().count;
    out.erase(out.begin());
  }
  std::vector<Plateau> kept;
  for (Plateau& p : out) {
    if (p.count < 2) continue;
    p.width = static_cast<double>(p.count) * step;
    p.tau_from = points[p.first].tau;
    p.tau_to = points[(p.first + p.count - 1) % m].tau;
    kept.push_back(p);
  }
  return kept;
}

Session::Session(ExperimentConfig cfg) : cfg_(std::move(cfg)), fam_(make_family(cfg_)), out_(cfg_.out_dir) {
  fs::create_directories(out_);
}

std::uint64_t Session::stage_seed(std::uint64_t stage) const { return splitmix(cfg_.seed ^ splitmix(stage)); }

const ConstantsEstimate& Session::constants() {
  if (!constants_) constants_ = estimate_constants(fam_, cfg_.constants_theta_grid, cfg_.constants_x_grid);
  return *constants_;
}

double Session::seed_x() {
  if (cfg_.seed_x) return wrap_unit(*cfg_.seed_x);
  const ConstantsEstimate& k = constants();
  return k.split_found ? mid_of(k.data.C) : 0.0;
}

const InvariantGraphSample& Session::attractor() {
  if (!attractor_) {
    attractor_ = pullback_graph(fam_, GraphDirection::Attractor, cfg_.grid_size, cfg_.depth, seed_x());
  }
  return *attractor_;
}

const InvariantGraphSample& Session::repeller() {
  if (!repeller_) {
    const ConstantsEstimate& k = constants();
    double seed = k.split_found ? mid_of(k.data.E) : wrap_unit(seed_x() + 0.5);
    repeller_ = pullback_graph(fam_, GraphDirection::Repeller, cfg_.grid_size, cfg_.depth, seed);
  }
  return *repeller_;
}

const ScaleHierarchy& Session::hierarchy() {
  if (!hierarchy_) {
    const ConstantsEstimate& k = constants();
    if (!k.split_found) throw std::logic_error("hierarchy requested without a contraction/expansion split");
    hierarchy_ = build_hierarchy(fam_, k.data, cfg_.hierarchy);
  }
  return *hierarchy_;
}

void write_resolved_config(const Session& s) {
  std::ofstream out(s.out_dir() / "config.resolved.txt", std::ios::binary | std::ios::trunc);
  out << serialize_config(s.config());
}

void stage_constants(Session& s, KeyValueFile& summary) {
  const ExperimentConfig& c = s.config();
  const ConstantsEstimate& est = s.constants();
  KeyValueFile f;
  f.set("family", to_string(c.family.kind));
  f.set("omega", c.omega);
  f.set("split", est.split_found);
  if (!est.split_found) f.set("reason", est.reason);
  const ContractionExpansionData& k = est.data;
  f.set("level", k.level);
  f.set("sup_derivative", k.sup_derivative);
  f.set("inf_derivative", k.inf_derivative);
  if (est.split_found) {
    f.set("C.left", k.C.left);
    f.set("C.length", k.C.length);
    f.set("E.left", k.E.left);
    f.set("E.length", k.E.length);
    f.set("alpha_bound", k.alpha_bound);
    f.set("S", k.S);
    f.set("I0.components", static_cast<std::int64_t>(k.n_components));
    f.set("I0.measure", k.I0.measure());
    std::size_t i = 0;
    for (const Arc& a : k.I0.arcs()) {
      f.set("I0." + std::to_string(i) + ".left", a.left);
      f.set("I0." + std::to_string(i) + ".length", a.length);
      ++i;
    }
  }
  DiophantineReport d = check_diophantine(s.family().omega(), c.diophantine_gamma, c.diophantine_nu,
                                          c.diophantine_nmax);
  f.set("diophantine.gamma", d.gamma);
  f.set("diophantine.nu", d.nu);
  f.set("diophantine.n_max", d.n_max);
  f.set("diophantine.worst_n", d.worst_n);
  f.set("diophantine.worst_margin", d.worst_margin);
  f.set("diophantine.holds", d.holds);
  f.save(s.out_dir() / "constants.txt");

  summary.set("regime", est.split_found ? "sna" : "out-of-regime");
  if (!est.split_found) summary.set("regime.reason", est.reason);
  summary.set("condition.diophantine", d.holds);
}

void stage_attractor(Session& s, KeyValueFile& summary) {
  const InvariantGraphSample& a = s.attractor();
  const InvariantGraphSample& r = s.repeller();
  write_graph(s, a, "attractor.csv");
  write_graph(s, r, "repeller.csv");
  std::string prefix = s.in_regime() ? "diagnostic." : "info.";
  summary.set("attractor.residual_p50", a.residual_p50);
  summary.set("attractor.residual_max", a.residual_max);
  summary.set("repeller.residual_p50", r.residual_p50);
  summary.set("repeller.residual_max", r.residual_max);
  summary.set(prefix + "attractor_converged", a.converged);
  summary.set(prefix + "repeller_converged", r.converged);
}

void stage_lyapunov(Session& s, KeyValueFile& summary) {
  const ExperimentConfig& c = s.config();
  const InvariantGraphSample& a = s.attractor();
  const InvariantGraphSample& r = s.repeller();
  LyapunovEstimate la = lyapunov_of_graph(s.family(), a);
  LyapunovEstimate li = inverse_lyapunov_of_graph(s.family(), r);
  double lr = -li.value;
  LyapunovEstimate lb = birkhoff_lyapunov_estimate(s.family(), 0.0L, a.phi.front(), c.lyapunov_orbit);
  double joint = std::sqrt(la.std_error * la.std_error + lb.std_error * lb.std_error);
  double gap = std::fabs(la.value - lb.value);
  // The absolute floor covers orbits sitting on a fixed point, where both errors vanish.
  bool agree = std::isfinite(gap) ? gap <= std::max(3.0 * joint, 1e-9) : la.value == lb.value;

  KeyValueFile f;
  f.set("lambda_attractor", la.value);
  f.set("lambda_attractor_se", la.std_error);
  f.set("lambda_repeller", lr);
  f.set("lambda_repeller_se", li.std_error);
  f.set("lambda_birkhoff", lb.value);
  f.set("lambda_birkhoff_se", lb.std_error);
  f.set("birkhoff_orbit", lb.n_samples);
  f.set("joint_se", joint);
  f.set("gap", gap);
  f.set("attractor_label", la.value < 0 ? "attractor" : "repeller of f, attractor of f^-1");
  f.set("repeller_label", lr > 0 ? "repeller" : "not repelling");
  f.save(s.out_dir() / "lyapunov.txt");

  std::string prefix = s.in_regime() ? "diagnostic." : "info.";
  summary.set("lambda_attractor", la.value);
  summary.set("lambda_repeller", lr);
  summary.set("lambda_birkhoff", lb.value);
  summary.set(prefix + "lambda_attractor_negative", la.value < 0);
  summary.set(prefix + "lambda_repeller_positive", lr > 0);
  summary.set(prefix + "lambda_agreement", agree);
}

void stage_hierarchy(Session& s, KeyValueFile& summary) {
  if (!s.in_regime()) {
    skip(summary, "condition.hierarchy", "no contraction/expansion split");
    return;
  }
  const ScaleHierarchy& h = s.hierarchy();
  const Phase w = s.family().omega();
  {
    CsvWriter lv(s.out_dir() / "hierarchy.csv", {"level", "component", "left", "length"}, family_comments(s));
    for (int n = 0; n <= h.n_max; ++n) write_arcset_rows(lv, n, h.levels[static_cast<std::size_t>(n)]);
  }
  {
    CsvWriter p(s.out_dir() / "hierarchy_params.csv",
                {"level", "K", "M", "eps", "b", "measure", "components", "long_arc_samples"});
    for (int n = 0; n <= h.n_max; ++n) {
      auto i = static_cast<std::size_t>(n);
      p.values(n, static_cast<long long>(h.K[i]), static_cast<long long>(h.M[i]), h.eps[i], h.b.values[i],
               h.levels[i].measure(), static_cast<long long>(h.levels[i].component_count()),
               static_cast<long long>(h.long_arc_samples[i]));
    }
  }
  KeyValueFile f;
  f.set("b_limit", h.b_limit());
  bool F1 = true, F2 = true, E = true, nested = true;
  std::int64_t long_arc = 0;
  for (int n = 0; n <= h.n_max; ++n) {
    auto i = static_cast<std::size_t>(n);
    F1Result f1 = check_F1(h, w, n);
    F2Result f2 = check_F2(h, w, n);
    EResult e = check_E(h, n);
    std::string tag = std::to_string(n);
    f.set("F1." + tag, f1.holds ? std::string("pass")
                                : "fail at j=" + std::to_string(f1.j) + " k=" + std::to_string(f1.k));
    f.set("F2." + tag, f2.holds ? std::string("pass") : "fail at j=" + std::to_string(f2.j));
    f.set("E." + tag, e.holds);
    f.set("E." + tag + ".components", static_cast<std::int64_t>(e.components));
    f.set("E." + tag + ".expected", static_cast<std::int64_t>(e.expected));
    F1 = F1 && f1.holds;
    F2 = F2 && f2.holds;
    E = E && e.holds;
    if (n > 0) nested = nested && h.levels[i].subset_of(h.levels[i - 1]);
    long_arc += h.long_arc_samples[i];
  }
  BudgetReport b = measure_budget(h, h.n_max);
  f.set("F1", F1);
  f.set("F2", F2);
  f.set("E", E);
  f.set("nesting", nested);
  f.set("budget", b.total);
  f.set("budget.below_one_sixteenth", b.below_one_sixteenth);
  f.set("budget.summands_ok", b.all_summands_ok);
  f.set("long_arc_samples", long_arc);
  f.save(s.out_dir() / "conditions.txt");

  summary.set("hierarchy.levels", h.n_max);
  summary.set("condition.F1", F1);
  summary.set("condition.F2", F2);
  summary.set("condition.E", E);
  summary.set("condition.nesting", nested);
  summary.set("condition.budget", b.below_one_sixteenth && b.all_summands_ok);
  summary.set("hierarchy.budget", b.total);
  summary.set("hierarchy.long_arc_samples", long_arc);
}

void stage_omega_sets(Session& s, KeyValueFile& summary) {
  if (!s.in_regime()) {
    skip(summary, "condition.omega", "no contraction/expansion split");
    return;
  }
  const ScaleHierarchy& h = s.hierarchy();
  const Phase w = s.family().omega();
  CsvWriter cw(s.out_dir() / "omega_sets.csv", {"j", "component", "left", "length"}, family_comments(s));
  KeyValueFile f;
  for (int j = 1; j <= std::max(1, h.n_max); ++j) {
    OmegaSet o = omega_j(h, w, j, h.n_max);
    write_arcset_rows(cw, j, o.set);
    std::string tag = "omega." + std::to_string(j);
    f.set(tag + ".measure", o.set.measure());
    f.set(tag + ".components", static_cast<std::int64_t>(o.set.component_count()));
    f.set(tag + ".leb_lower_bound", o.leb_lower_bound);
    f.set(tag + ".tail_bound", o.tail_bound);
    f.set(tag + ".bound_positive", o.bound_positive);
    summary.set(tag + ".measure", o.set.measure());
    summary.set("condition." + tag + ".bound_positive", o.bound_positive);
  }
  f.save(s.out_dir() / "omega_sets.txt");
}

void stage_lipschitz(Session& s, KeyValueFile& summary) {
  const ExperimentConfig& c = s.config();
  if (!s.in_regime()) {
    skip(summary, "diagnostic.lipschitz", "no contraction/expansion split");
    return;
  }
  const ScaleHierarchy& h = s.hierarchy();
  const ContractionExpansionData& k = s.constants().data;
  const CircleMapFamily& fam = s.family();
  const InvariantGraphSample& a = s.attractor();
  const Phase w = fam.omega();
  KeyValueFile f;
  for (int j = 1; j <= c.lipschitz_j_max; ++j) {
    std::string tag = "lipschitz.j" + std::to_string(j);
    if (j - 1 > h.n_max) {
      skip(summary, "diagnostic." + tag, "level j-1 not computed");
      continue;
    }
    OmegaSet o = omega_j(h, w, j, h.n_max);
    auto graph = [&](Phase t) { return graph_value_at(fam, a, t); };
    auto member = [&](Phase t) { return in_omega_j(h, w, j, h.n_max, t); };
    LipschitzReport r = empirical_lipschitz(graph, o.set, k.S, k.E.length, c.lipschitz_pairs,
                                            s.stage_seed(100 + static_cast<std::uint64_t>(j)), member);
    auto jm = static_cast<std::size_t>(j - 1);
    LjBound L = l_j_bound(k.S, h.alpha, h.b_limit(), h.K[jm], h.M[jm]);
    attach_bound(r, j, L);
    {
      CsvWriter cw(s.out_dir() / ("lipschitz_j" + std::to_string(j) + ".csv"),
                   {"theta", "theta_prime", "pair_dist", "graph_dist"},
                   {{"j", std::to_string(j)}, {"log_L_j", format_number(L.log_value)}});
      for (const LipschitzPair& p : r.pairs) cw.values(p.theta, p.theta_prime, p.pair_dist, p.graph_dist);
    }
    f.set(tag + ".status", r.status);
    f.set(tag + ".pairs", r.pair_count);
    f.set(tag + ".max_slope", r.max_slope);
    f.set(tag + ".L_j", L.value);
    f.set(tag + ".log_L_j", L.log_value);
    f.set(tag + ".slack", r.slack);
    f.set(tag + ".offending", static_cast<std::int64_t>(r.offending.size()));
    f.set(tag + ".within_bound", r.within_bound);
    summary.set(tag + ".max_slope", r.max_slope);
    summary.set(tag + ".log_L_j", L.log_value);
    summary.set("diagnostic." + tag, r.status == "ok" && r.within_bound);
  }
  f.save(s.out_dir() / "lipschitz.txt");
}

void stage_dimension(Session& s, KeyValueFile& summary) {
  const ExperimentConfig& c = s.config();
  if (!s.in_regime()) {
    skip(summary, "diagnostic.pointwise_dimension", "no contraction/expansion split");
    skip(summary, "diagnostic.box_dimension", "no contraction/expansion split");
    return;
  }
  const InvariantGraphSample& base = s.attractor();
  InvariantGraphSample g = c.dimension_grid == base.grid_size
                               ? base
                               : pullback_graph(s.family(), GraphDirection::Attractor, c.dimension_grid, c.depth,
                                                base.seed);
  // Fraction outside E on the configured report grid.
  const ContractionExpansionData& k = s.constants().data;
  const ScaleHierarchy& h = s.hierarchy();
  double outside = fraction_outside_E(base, k.E);
  summary.set("prop_b.fraction_outside_E", outside);
  summary.set("prop_b.threshold", h.b_limit() - 1.0 / 3.0);
  summary.set("diagnostic.prop_b", outside >= h.b_limit() - 1.0 / 3.0);

  std::vector<double> peps = dyadic_scales(c.pointwise_eps_from, c.pointwise_eps_to);
  std::vector<GraphPoint> centers = sample_centers(g.theta, g.phi, c.dimension_centers, s.stage_seed(200));
  DimensionEstimate pw = pointwise_dimension(g.theta, g.phi, centers, peps);
  std::vector<GraphPoint> pts(g.phi.size());
  for (std::size_t i = 0; i < pts.size(); ++i) pts[i] = {g.theta[i], g.phi[i]};
  std::vector<double> beps = dyadic_scales(c.box_eps_from, c.box_eps_to);
  DimensionEstimate bx = box_dimension(pts, beps);

  {
    CsvWriter cw(s.out_dir() / "dimension_pointwise.csv", {"eps", "value"},
                 {{"slope", format_number(pw.slope)}, {"r2", format_number(pw.r2)},
                  {"N", std::to_string(g.grid_size)}, {"centers", std::to_string(centers.size())}});
    for (std::size_t i = 0; i < pw.scales.size(); ++i) cw.values(pw.scales[i], pw.values[i]);
  }
  {
    CsvWriter cw(s.out_dir() / "dimension_box.csv", {"eps", "value"},
                 {{"slope", format_number(bx.slope)}, {"r2", format_number(bx.r2)},
                  {"N", std::to_string(g.grid_size)}});
    for (std::size_t i = 0; i < bx.scales.size(); ++i) cw.values(bx.scales[i], bx.values[i]);
  }
  summary.set("dimension.pointwise_slope", pw.slope);
  summary.set("dimension.pointwise_r2", pw.r2);
  if (!pw.warning.empty()) summary.set("dimension.pointwise_warning", pw.warning);
  summary.set("dimension.box_slope", bx.slope);
  summary.set("dimension.box_r2", bx.r2);
  summary.set("diagnostic.pointwise_dimension", pw.slope >= 0.85 && pw.slope <= 1.15);
  summary.set("diagnostic.box_dimension", bx.slope >= 1.5);
}

void stage_visits(Session& s, KeyValueFile& summary) {
  const ExperimentConfig& c = s.config();
  if (!s.in_regime()) {
    skip(summary, "condition.visits", "no contraction/expansion split");
    return;
  }
  const ContractionExpansionData& k = s.constants().data;
  const ScaleHierarchy& h = s.hierarchy();
  const Phase w = s.family().omega();
  std::mt19937_64 rng(s.stage_seed(300));
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  CsvWriter cw(s.out_dir() / "visits.csv",
               {"sample", "theta0", "x0", "N", "P", "admissible", "j", "k_max", "rows", "stay_holds",
                "b2_holds", "i_ge_p"});
  std::int64_t admissible = 0, cor_rows = 0, cor_ok = 0, b2_ok = 0;
  bool order_ok = true;
  const double x0 = mid_of(k.C);
  const std::int64_t stride = std::max<std::int64_t>(1, c.visit_horizon / 1000);
  for (int i = 0; i < c.visit_samples; ++i) {
    Phase t0 = static_cast<Phase>(u01(rng));
    VisitStats st = visit_counts(s.family(), k, t0, x0, c.visit_horizon);
    VisitBoundReport rep = check_visit_lower_bound(st, h, w, k.C, stride);
    cw.values(i, t0, x0, static_cast<long long>(st.N), static_cast<long long>(st.P(0)), rep.admissible, rep.j,
              static_cast<long long>(rep.k_max), static_cast<long long>(rep.rows.size()),
              static_cast<long long>(rep.stay_holds), static_cast<long long>(rep.b2_holds), rep.i_ge_p);
    if (!rep.admissible) continue;
    ++admissible;
    cor_rows += static_cast<std::int64_t>(rep.rows.size());
    cor_ok += rep.stay_holds;
    b2_ok += rep.b2_holds;
    order_ok = order_ok && rep.i_ge_p;
  }
  summary.set("visits.admissible", admissible);
  summary.set("visits.rows", cor_rows);
  summary.set("visits.stay_holds", cor_ok);
  summary.set("visits.b2_holds", b2_ok);
  summary.set("condition.visits.stay", cor_ok == cor_rows);
  summary.set("condition.visits.b2", b2_ok == cor_rows);
  summary.set("condition.visits.i_ge_p", order_ok);
}

SweepResult run_staircase(const ExperimentConfig& cfg, KeyValueFile* summary) {
  SweepResult res;
  res.iterations = cfg.sweep.iterations;
  const int steps = cfg.sweep.steps;
  const double span = cfg.sweep.max - cfg.sweep.min;
  res.step = span / steps;
  res.circular = std::fabs(span - 1.0) < 1e-12;
  CircleMapFamily base = make_family(cfg);
  std::vector<CircleMapFamily> members;
  res.points.resize(static_cast<std::size_t>(steps));
  for (int i = 0; i < steps; ++i) {
    double tau = cfg.sweep.min + res.step * i;
    res.points[static_cast<std::size_t>(i)].tau = tau;
    members.push_back(base.with_tau(tau));
  }
  fs::create_directories(cfg.out_dir);
  CsvWriter cw(fs::path(cfg.out_dir) / "staircase.csv", {"index", "tau", "rho", "lambda", "lambda_se", "error"},
               {{"family", to_string(cfg.family.kind)},
                {"alpha", format_number(cfg.family.alpha)},
                {"forcing", to_string(cfg.family.forcing)},
                {"amplitude", format_number(cfg.family.amplitude)},
                {"omega", cfg.omega},
                {"iterations", std::to_string(cfg.sweep.iterations)}});
  kernels::sweep_parallel(members, static_cast<Phase>(cfg.sweep.theta0), cfg.sweep.x0, cfg.sweep.iterations,
                          [&](std::size_t i, const OrbitSummary* r, const char* err) {
                            SweepPoint& p = res.points[i];
                            if (r) {
                              p.ok = true;
                              p.summary = *r;
                              cw.values(static_cast<long long>(i), p.tau, r->rotation_number, r->lyapunov,
                                        r->lyapunov_se, std::string());
                            } else {
                              p.error = err ? err : "unknown error";
                              std::string e = p.error;
                              std::replace(e.begin(), e.end(), ',', ';');
                              cw.values(static_cast<long long>(i), p.tau, std::string("nan"), std::string("nan"),
                                        std::string("nan"), e);
                            }
                          });
  res.plateaus = detect_plateaus(res.points, res.iterations, res.step, res.circular);
  CsvWriter pc(fs::path(cfg.out_dir) / "plateaus.csv", {"p", "q", "tau_from", "tau_to", "count", "width"});
  for (const Plateau& p : res.plateaus) {
    pc.values(static_cast<long long>(p.p), static_cast<long long>(p.q), p.tau_from, p.tau_to,
              static_cast<long long>(p.count), p.width);
  }
  if (summary) {
    std::int64_t failed = 0;
    for (const SweepPoint& p : res.points) failed += p.ok ? 0 : 1;
    summary->set("staircase.points", static_cast<std::int64_t>(res.points.size()));
    summary->set("staircase.failed_points", failed);
    summary->set("staircase.plateaus", static_cast<std::int64_t>(res.plateaus.size()));
    for (const Plateau& p : res.plateaus) {
      if (p.p == 0 && p.q == 1) summary->set("staircase.plateau_0.width", p.width);
    }
  }
  return res;
}

int exit_code_for(const KeyValueFile& summary) {
  for (const auto& [k, v] : summary.entries()) {
    if (k.rfind("diagnostic.", 0) == 0 && v == "fail") return kExitViolation;
  }
  return kExitOk;
}

int run_sna_report(const ExperimentConfig& cfg) {
  Session s(cfg);
  write_resolved_config(s);
  KeyValueFile summary;
  summary.set("family", to_string(cfg.family.kind));
  summary.set("omega", cfg.omega);
  stage_constants(s, summary);
  stage_attractor(s, summary);
  stage_lyapunov(s, summary);
  if (s.in_regime()) {
    stage_hierarchy(s, summary);
    stage_omega_sets(s, summary);
    stage_lipschitz(s, summary);
    stage_dimension(s, summary);
    stage_visits(s, summary);
  } else {
    const std::string why = "no contraction/expansion split";
    for (const char* key : {"condition.hierarchy", "condition.omega", "diagnostic.prop_b", "diagnostic.lipschitz",
                            "diagnostic.pointwise_dimension", "diagnostic.box_dimension", "condition.visits"}) {
      skip(summary, key, why);
    }
  }
  int code = exit_code_for(summary);
  summary.set("exit_code", code);
  summary.save(s.out_dir() / "summary.txt");
  return code;
}

int run_hierarchy(const ExperimentConfig& cfg) {
  Session s(cfg);
  write_resolved_config(s);
  KeyValueFile summary;
  stage_constants(s, summary);
  if (s.in_regime()) {
    stage_hierarchy(s, summary);
  } else {
    // An empty I_0 is still a hierarchy: every level stays empty.
    skip(summary, "condition.hierarchy", "no contraction/expansion split");
  }
  summary.save(s.out_dir() / "summary.txt");
  return exit_code_for(summary);
}

}  // namespace snalab
