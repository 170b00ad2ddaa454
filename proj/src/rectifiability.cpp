#include "snalab/rectifiability.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "snalab/stats.hpp"

namespace snalab {

VisitStats VisitStats::from_masks(Phase theta0, double x0, std::vector<char> in_C, std::vector<char> in_I0,
                                  std::span<const std::int64_t> n_list) {
  if (in_C.size() != in_I0.size()) throw std::invalid_argument("visit masks differ in length");
  VisitStats s;
  s.theta0 = theta0;
  s.x0 = x0;
  s.N = static_cast<std::int64_t>(in_C.size());
  s.in_C_mask = std::move(in_C);
  s.in_I0_mask = std::move(in_I0);
  s.suffix.assign(static_cast<std::size_t>(s.N) + 1, 0);
  for (std::int64_t l = s.N - 1; l >= 0; --l) {
    bool q = s.in_C_mask[l] && !s.in_I0_mask[l];
    s.suffix[l] = s.suffix[l + 1] + (q ? 1 : 0);
  }
  for (std::int64_t n : n_list) {
    if (n < 0 || n > s.N) throw std::out_of_range("visit_counts: requested n outside [0, N]");
    s.counts.emplace_back(n, s.suffix[n]);
  }
  return s;
}

VisitStats visit_counts(const CircleMapFamily& fam, const ContractionExpansionData& k, Phase theta0, double x0,
                        std::int64_t N, std::span<const std::int64_t> n_list) {
  if (N < 0 || N > 10000000) throw std::invalid_argument("visit_counts needs 0 <= N <= 1e7");
  std::vector<char> in_C(static_cast<std::size_t>(N)), in_I0(static_cast<std::size_t>(N));
  Phase t = wrap_phase(theta0);
  double x = wrap_unit(x0);
  for (std::int64_t l = 0; l < N; ++l) {
    in_C[l] = k.C.contains(x);
    in_I0[l] = k.I0.contains(static_cast<double>(t));
    x = wrap_unit(fiber_lift(fam, t, x));
    t = wrap_phase(t + fam.omega());
  }
  return VisitStats::from_masks(theta0, x0, std::move(in_C), std::move(in_I0), n_list);
}

namespace {

// Smallest l in [M_{p-1}, n] with theta - l omega in I_p, or n + 1 when none.
std::vector<std::int64_t> first_hits(const ScaleHierarchy& h, Phase omega, Phase theta, std::int64_t n) {
  std::vector<std::int64_t> hit(h.levels.size(), n + 1);
  for (std::size_t p = 0; p < h.levels.size(); ++p) {
    const ArcSet& I = h.levels[p];
    if (I.empty()) continue;
    std::int64_t lo = p == 0 ? 0 : h.M[p - 1];
    for (std::int64_t l = lo; l <= n; ++l) {
      if (I.contains(static_cast<double>(rotate(theta, -l, omega)))) {
        hit[p] = l;
        break;
      }
    }
  }
  return hit;
}

int p_from_hits(const ScaleHierarchy& h, const std::vector<std::int64_t>& hit, std::int64_t n, std::int64_t k) {
  int best = -1;
  for (std::size_t p = 0; p < hit.size(); ++p) {
    std::int64_t upper = std::min(n, n - k + h.M[p] + 1);
    if (hit[p] <= upper) best = static_cast<int>(p);
  }
  return best;
}

std::int64_t return_threshold(const ScaleHierarchy& h, int l) { return 2 * h.K[l] * h.M[l] - h.M[l] - 1; }

}  // namespace

int p_index(const ScaleHierarchy& h, Phase omega, Phase theta, std::int64_t n, std::int64_t k) {
  return p_from_hits(h, first_hits(h, omega, theta, n), n, k);
}

int i_index(const ScaleHierarchy& h, std::int64_t n, std::int64_t k) {
  int best = -1;
  for (int l = 0; l < static_cast<int>(h.levels.size()); ++l) {
    if (n - k >= return_threshold(h, l)) best = l;
  }
  return best;
}

VisitBoundReport check_visit_lower_bound(const VisitStats& stats, const ScaleHierarchy& h, Phase omega,
                                         const Arc& C, std::int64_t k_stride) {
  VisitBoundReport rep;
  const std::int64_t n = stats.N;
  const Phase theta = rotate(stats.theta0, n, omega);
  std::vector<std::int64_t> hit = first_hits(h, omega, theta, n);
  int p0 = p_from_hits(h, hit, n, 0);
  if (!C.contains(stats.x0) || z_minus(h, omega, p0).contains(static_cast<double>(stats.theta0))) {
    rep.reason = "start not (B1)-admissible";
    return rep;
  }
  rep.admissible = true;
  rep.j = h.n_max + 1;
  for (int j = 1; j <= h.n_max; ++j) {
    if (in_omega_j(h, omega, j, h.n_max, theta)) {
      rep.j = j;
      break;
    }
  }
  rep.k_max = n - return_threshold(h, rep.j - 1);
  const double b = h.b.limit;
  for (std::int64_t k = 0; k <= rep.k_max; k += std::max<std::int64_t>(1, k_stride)) {
    VisitBoundRow row;
    row.k = k;
    row.P = stats.P_range(k, n);
    row.p = p_from_hits(h, hit, n, k);
    row.i = i_index(h, n, k);
    double used = 0.0;
    for (int q = 0; q <= row.p; ++q) used += static_cast<double>(h.M[q] + 2);
    row.stay_bound = h.b.values[static_cast<std::size_t>(row.p + 1)] * (static_cast<double>(n - k) - used);
    row.stay_holds = static_cast<double>(row.P) >= row.stay_bound;
    row.b2_bound = b * b * static_cast<double>(n - k);
    row.b2_holds = static_cast<double>(row.P) > row.b2_bound;
    rep.stay_holds += row.stay_holds;
    rep.b2_holds += row.b2_holds;
    rep.i_ge_p = rep.i_ge_p && row.i >= row.p;
    rep.rows.push_back(row);
  }
  return rep;
}

DualOrbitMask dual_orbit_mask(const CircleMapFamily& fam, const InvariantGraphSample& g,
                              const ContractionExpansionData& k, Phase theta, Phase theta_prime,
                              std::int64_t length) {
  DualOrbitMask m;
  m.theta = wrap_phase(theta);
  m.theta_prime = wrap_phase(theta_prime);
  m.qualifies.resize(static_cast<std::size_t>(std::max<std::int64_t>(length, 0)));
  const Phase w = fam.omega();
  Phase t = wrap_phase(m.theta - w), tp = wrap_phase(m.theta_prime - w);
  // Forward iteration from a fresh pullback equals a pullback of growing depth.
  double x = graph_value_at(fam, g, t), xp = graph_value_at(fam, g, tp);
  for (std::int64_t idx = 0; idx < length; ++idx) {
    m.qualifies[idx] = k.C.contains(x) && k.C.contains(xp) && !k.I0.contains(static_cast<double>(t)) &&
                       !k.I0.contains(static_cast<double>(tp));
    x = wrap_unit(fiber_lift(fam, t, x));
    xp = wrap_unit(fiber_lift(fam, tp, xp));
    t = wrap_phase(t + w);
    tp = wrap_phase(tp + w);
  }
  return m;
}

std::int64_t wp_from_mask(const DualOrbitMask& mask, std::int64_t offset, std::int64_t n) {
  if (offset < 0 || n < 0 || offset + n > static_cast<std::int64_t>(mask.qualifies.size())) {
    throw std::out_of_range("wp_from_mask: range outside stored mask");
  }
  std::int64_t c = 0;
  for (std::int64_t i = offset; i < offset + n; ++i) c += mask.qualifies[i] ? 1 : 0;
  return c;
}

std::int64_t wp_counts(const CircleMapFamily& fam, const InvariantGraphSample& g, const ContractionExpansionData& k,
                       Phase theta, Phase theta_prime, std::int64_t n) {
  return wp_from_mask(dual_orbit_mask(fam, g, k, theta, theta_prime, n), 0, n);
}

LjBound l_j_bound(double S, double alpha, double b, std::int64_t K_prev, std::int64_t M_prev) {
  LjBound r;
  r.c0 = 6.0 * b * b - 5.0;
  if (!(r.c0 > 0.0)) throw std::invalid_argument("l_j_bound needs c0 = 6 b^2 - 5 > 0");
  if (!(alpha > 1.0)) throw std::invalid_argument("l_j_bound needs alpha > 1");
  if (!(S >= 0.0)) throw std::invalid_argument("l_j_bound needs S >= 0");
  r.start = 2 * K_prev * M_prev - M_prev - 1;
  if (r.start < 1) throw std::invalid_argument("l_j_bound needs 2 K M - M - 1 >= 1");
  const double la = std::log(alpha);
  const double st = static_cast<double>(r.start);
  if (S == 0.0) {
    r.log_value = -std::numeric_limits<double>::infinity();
    r.value = 0.0;
    return r;
  }
  // S sum_{k >= start} alpha^{6 - c0 k} and S sum_{k < start} alpha^{2k}, in logs.
  double tail = std::log(S) + (6.0 - r.c0 * st) * la - std::log1p(-std::exp(-r.c0 * la));
  double head = std::log(S) + 2.0 * st * la + std::log1p(-std::exp(-2.0 * st * la)) - std::log(alpha * alpha - 1.0);
  double hi = std::max(head, tail), lo = std::min(head, tail);
  r.log_value = hi + std::log1p(std::exp(lo - hi));
  r.value = std::exp(r.log_value);
  return r;
}

LipschitzReport empirical_lipschitz(const GraphFunction& graph, const ArcSet& omega_set, double S, double E_length,
                                    std::int64_t pair_budget, std::uint64_t seed,
                                    const MembershipFunction& exact_member, Exec exec) {
  LipschitzReport r;
  r.status = "ok";
  if (omega_set.empty() || pair_budget <= 0) {
    r.status = "empty-set";
    return r;
  }
  const double dmax = S > 0.0 ? std::min(0.5, E_length / (4.0 * S)) : 0.5;
  const auto& iv = omega_set.intervals();
  std::vector<double> cum;
  double total = 0.0;
  for (const auto& [a, b] : iv) {
    total += b - a;
    cum.push_back(total);
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  auto draw = [&]() {
    double u = u01(rng) * total;
    std::size_t i = static_cast<std::size_t>(std::lower_bound(cum.begin(), cum.end(), u) - cum.begin());
    i = std::min(i, iv.size() - 1);
    double before = i == 0 ? 0.0 : cum[i - 1];
    return std::min(iv[i].first + (u - before), std::nextafter(iv[i].second, 0.0));
  };
  auto member = [&](double t) { return omega_set.contains(t) && (!exact_member || exact_member(t)); };

  std::vector<LipschitzPair> pairs;
  const std::int64_t max_attempts = 50 * pair_budget;
  for (std::int64_t a = 0; a < max_attempts && static_cast<std::int64_t>(pairs.size()) < pair_budget; ++a) {
    double t = draw();
    double d = (2.0 * u01(rng) - 1.0) * dmax;
    double tp = wrap_unit(t + d);
    if (d == 0.0 || !member(t) || !member(tp)) continue;
    pairs.push_back({t, tp, circle_distance(t, tp), 0.0});
  }
  if (pairs.empty()) {
    r.status = "empty-set";
    return r;
  }
  const std::int64_t np = static_cast<std::int64_t>(pairs.size());
  if (exec == Exec::Serial) {
    for (std::int64_t i = 0; i < np; ++i) {
      pairs[i].graph_dist = circle_distance(graph(pairs[i].theta), graph(pairs[i].theta_prime));
    }
  } else {
#pragma omp parallel for schedule(dynamic, 16)
    for (std::int64_t i = 0; i < np; ++i) {
      pairs[i].graph_dist = circle_distance(graph(pairs[i].theta), graph(pairs[i].theta_prime));
    }
  }
  for (const auto& p : pairs) {
    if (p.pair_dist > 0.0) r.max_slope = std::max(r.max_slope, p.graph_dist / p.pair_dist);
  }
  r.pair_count = np;
  r.pairs = std::move(pairs);
  return r;
}

void attach_bound(LipschitzReport& r, int j, const LjBound& L) {
  r.j = j;
  r.L_j_bound = L.value;
  r.log_L_j_bound = L.log_value;
  r.slack = L.value - r.max_slope;
  r.within_bound = r.status == "ok" && std::isfinite(r.max_slope) &&
                   (r.max_slope == 0.0 || std::log(r.max_slope) <= L.log_value);
  r.offending.clear();
  for (const auto& p : r.pairs) {
    if (p.pair_dist > 0.0 && p.graph_dist > 0.0 && std::log(p.graph_dist / p.pair_dist) > L.log_value) {
      r.offending.push_back(p);
    }
  }
}

double fraction_outside_E(const InvariantGraphSample& g, const Arc& E) {
  if (g.phi.empty()) return 0.0;
  std::int64_t out = 0;
  for (double x : g.phi) out += E.contains(x) ? 0 : 1;
  return static_cast<double>(out) / static_cast<double>(g.phi.size());
}

double ball_measure(std::span<const double> theta, std::span<const double> phi, GraphPoint center, double eps) {
  if (!(eps > 0.0 && eps < 0.5)) throw std::invalid_argument("ball_measure needs eps in (0, 1/2)");
  double v = 0.0;
  double e[1] = {eps};
  kernels::ball_measures_serial(theta, phi, std::span<const GraphPoint>(&center, 1), e, std::span<double>(&v, 1));
  return v;
}

std::vector<double> dyadic_scales(int from_exp, int to_exp) {
  std::vector<double> s;
  for (int e = from_exp; e <= to_exp; ++e) s.push_back(std::ldexp(1.0, -e));
  return s;
}

std::vector<GraphPoint> sample_centers(std::span<const double> theta, std::span<const double> phi, int count,
                                       std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, theta.size() - 1);
  std::vector<GraphPoint> c;
  for (int i = 0; i < count; ++i) {
    std::size_t k = pick(rng);
    c.push_back({theta[k], phi[k]});
  }
  return c;
}

DimensionEstimate pointwise_dimension(std::span<const double> theta, std::span<const double> phi,
                                      std::span<const GraphPoint> centers, std::span<const double> eps,
                                      Exec exec) {
  DimensionEstimate d;
  d.kind = DimensionKind::Pointwise;
  d.scales.assign(eps.begin(), eps.end());
  if (centers.empty() || eps.size() < 2) throw std::invalid_argument("pointwise_dimension needs centers and >= 2 scales");
  double decades = std::log10(*std::max_element(eps.begin(), eps.end()) / *std::min_element(eps.begin(), eps.end()));
  const double N = static_cast<double>(theta.size());
  if (decades < 2.5 || eps.size() < 8) d.warning = "scale range below 2.5 decades or fewer than 8 scales";
  if (*std::min_element(eps.begin(), eps.end()) < 8.0 / N) {
    d.warning += d.warning.empty() ? "" : "; ";
    d.warning += "smallest eps below 8/N";
  }
  std::vector<double> mu(centers.size() * eps.size());
  if (exec == Exec::Serial) {
    kernels::ball_measures_serial(theta, phi, centers, eps, mu);
  } else {
    kernels::ball_measures_parallel(theta, phi, centers, eps, mu);
  }
  const double floor_mu = 16.0 / N;
  std::vector<char> flagged(eps.size(), 0);
  d.values.assign(eps.size(), 0.0);
  double r2_sum = 0.0;
  for (std::size_t c = 0; c < centers.size(); ++c) {
    std::vector<double> xs, ys;
    for (std::size_t e = 0; e < eps.size(); ++e) {
      double m = mu[c * eps.size() + e];
      d.values[e] += m / static_cast<double>(centers.size());
      if (m < floor_mu) {
        flagged[e] = 1;
        continue;
      }
      xs.push_back(std::log(eps[e]));
      ys.push_back(std::log(m));
    }
    if (xs.size() < 2) continue;
    LinearFit f = ols_fit(xs, ys);
    d.center_slopes.push_back(f.slope);
    r2_sum += f.r2;
  }
  for (std::size_t e = 0; e < eps.size(); ++e) {
    if (flagged[e]) d.flagged_scales.push_back(eps[e]);
  }
  if (d.center_slopes.empty()) {
    d.warning += d.warning.empty() ? "" : "; ";
    d.warning += "no center has two scales above the noise floor";
    d.slope = std::numeric_limits<double>::quiet_NaN();
    return d;
  }
  double s = 0.0;
  for (double v : d.center_slopes) s += v;
  d.slope = s / static_cast<double>(d.center_slopes.size());
  d.r2 = r2_sum / static_cast<double>(d.center_slopes.size());
  return d;
}

DimensionEstimate box_dimension(std::span<const GraphPoint> points, std::span<const double> scales) {
  DimensionEstimate d;
  d.kind = DimensionKind::Box;
  if (scales.size() < 2) throw std::invalid_argument("box_dimension needs >= 2 scales");
  d.scales.assign(scales.begin(), scales.end());
  std::vector<double> xs, ys;
  std::int64_t finest = 0;
  std::vector<std::uint64_t> ids(points.size());
  for (double s : scales) {
    std::int64_t n = std::max<std::int64_t>(1, std::llround(1.0 / s));
    finest = std::max(finest, n);
    for (std::size_t i = 0; i < points.size(); ++i) {
      auto a = std::min<std::int64_t>(n - 1, static_cast<std::int64_t>(wrap_unit(points[i].theta) * n));
      auto b = std::min<std::int64_t>(n - 1, static_cast<std::int64_t>(wrap_unit(points[i].x) * n));
      ids[i] = static_cast<std::uint64_t>(a) * static_cast<std::uint64_t>(n) + static_cast<std::uint64_t>(b);
    }
    std::sort(ids.begin(), ids.end());
    double count = static_cast<double>(std::unique(ids.begin(), ids.end()) - ids.begin());
    d.values.push_back(count);
    xs.push_back(std::log(1.0 / s));
    ys.push_back(std::log(count));
  }
  if (points.size() < 100000) d.warning = "fewer than 1e5 points";
  if (static_cast<double>(points.size()) < static_cast<double>(finest) * static_cast<double>(finest)) {
    d.warning += d.warning.empty() ? "" : "; ";
    d.warning += "undersampled: fewer points than boxes at the finest scale";
  }
  LinearFit f = ols_fit(xs, ys);
  d.slope = f.slope;
  d.r2 = f.r2;
  return d;
}

}  // namespace snalab
