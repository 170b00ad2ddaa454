#include <doctest.h>

#include <cmath>
#include <random>

#include "snalab/rectifiability.hpp"

using namespace snalab;

namespace {

const Phase kGolden = (std::sqrt(5.0L) - 1.0L) / 2.0L;

const CircleMapFamily& sna() {
  static const CircleMapFamily f = CircleMapFamily::arctan(2, 1000.0, 0.2, {ForcingKind::Cosine, 1.0}, kGolden);
  return f;
}

const ConstantsEstimate& sna_constants() {
  static const ConstantsEstimate k = estimate_constants(sna(), 1024, 4096);
  return k;
}

// Everything lies in C and the critical set is empty.
ContractionExpansionData trapping() {
  ContractionExpansionData k;
  k.C = {0.0, 1.0};
  k.E = {0.5, 0.0};
  k.alpha_bound = 10.0;
  k.S = 1.0;
  return k;
}

InvariantGraphSample graph_from(std::vector<double> phi) {
  InvariantGraphSample g;
  g.grid_size = static_cast<std::int64_t>(phi.size());
  for (std::size_t i = 0; i < phi.size(); ++i) g.theta.push_back(static_cast<double>(i) / static_cast<double>(phi.size()));
  g.phi = std::move(phi);
  g.residual.assign(g.phi.size(), 0.0);
  g.converged = true;
  return g;
}

}  // namespace

TEST_SUITE("rectifiability") {
  TEST_CASE("visit counts: trapping family, empty range, suffix identity") {
    auto f = CircleMapFamily::rigid(0.1, kGolden);
    std::vector<std::int64_t> ns{0, 500, 1000};
    auto s = visit_counts(f, trapping(), 0.0L, 0.2, 1000, ns);
    CHECK(s.P(0) == 1000);
    CHECK(s.P(1000) == 0);
    REQUIRE(s.counts.size() == 3);
    CHECK(s.counts[1].second == 500);
    std::mt19937_64 rng(1);
    std::bernoulli_distribution coin(0.7);
    std::vector<char> c(777), i0(777);
    for (std::size_t l = 0; l < c.size(); ++l) {
      c[l] = coin(rng);
      i0[l] = !coin(rng);
    }
    auto m = VisitStats::from_masks(0.0L, 0.0, c, i0);
    for (std::int64_t n = 0; n <= 777; n += 37) {
      std::int64_t direct = 0;
      for (std::int64_t l = n; l < 777; ++l) direct += c[l] && !i0[l];
      CHECK(m.P(n) == direct);
      for (std::int64_t k = 0; k <= n; k += 29) CHECK(m.P_range(k, n) + m.P(n) == m.P(k));
    }
  }

  TEST_CASE("visit counts at the SNA point match a recount from the stored orbit") {
    const auto& k = sna_constants().data;
    const std::int64_t N = 100000;
    auto s = visit_counts(sna(), k, 0.3141L, 0.5, N);
    std::vector<double> xs(N);
    std::vector<Phase> ts(N);
    Phase t = 0.3141L;
    double x = 0.5;
    for (std::int64_t l = 0; l < N; ++l) {
      ts[l] = t;
      xs[l] = x;
      x = fiber_map(sna(), t, CircleAngle(x)).value();
      t = rotate(0.3141L, l + 1, kGolden);
    }
    std::int64_t count = 0;
    for (std::int64_t l = N - 1; l >= 0; --l) {
      count += k.C.contains(xs[l]) && !k.I0.contains(static_cast<double>(ts[l]));
      if (l % 1000 == 0) CHECK(s.P(l) == count);
    }
    CHECK(s.P(0) > 0);
  }

  TEST_CASE("p and i indices") {
    HierarchyParams p;
    p.n_max = 2;
    ArcSet I0 = ArcSet::arc(0.2, 0.01);
    auto h = make_hierarchy(p, 10.0, I0);
    // i_k^n is the largest level whose return time fits in n - k
    for (std::int64_t n : {0, 100, 397, 398, 5000}) {
      for (std::int64_t k = 0; k <= n; k += std::max<std::int64_t>(1, n / 7)) {
        int expect = -1;
        for (int l = 0; l <= 2; ++l) {
          if (n - k >= 2 * h.K[l] * h.M[l] - h.M[l] - 1) expect = l;
        }
        CHECK(i_index(h, n, k) == expect);
      }
    }
    // theta whose backward orbit never meets I0 within n
    Phase theta = 0.5L;
    std::int64_t first = -1;
    for (std::int64_t l = 0; l <= 2000 && first < 0; ++l) {
      if (I0.contains(static_cast<double>(rotate(theta, -l, kGolden)))) first = l;
    }
    REQUIRE(first > 0);
    CHECK(p_index(h, kGolden, theta, first - 1, 0) == -1);
    CHECK(p_index(h, kGolden, theta, first, 0) == 0);
  }

  TEST_CASE("visit lower bound: unobstructed contraction") {
    auto f = CircleMapFamily::rigid(0.1, kGolden);
    HierarchyParams p;
    p.n_max = 1;
    auto h = make_hierarchy(p, 10.0, ArcSet{});
    auto s = visit_counts(f, trapping(), 0.0L, 0.2, 2000);
    auto rep = check_visit_lower_bound(s, h, kGolden, trapping().C);
    REQUIRE(rep.admissible);
    CHECK(rep.rows.size() > 100);
    for (const auto& r : rep.rows) {
      CHECK(r.p == -1);
      CHECK(r.stay_holds);
    }
    CHECK(rep.i_ge_p);
    CHECK(rep.stay_holds == static_cast<std::int64_t>(rep.rows.size()));
  }

  TEST_CASE("visit lower bound: injected mask at the b^2 boundary") {
    HierarchyParams p;
    p.n_max = 0;
    auto h = make_hierarchy(p, 10.0, ArcSet{});
    const double b2 = h.b.limit * h.b.limit;
    const std::int64_t N = 1000;
    const auto need = static_cast<std::int64_t>(std::floor(b2 * N));
    std::vector<char> c(N, 0), i0(N, 0);
    for (std::int64_t l = 0; l < need; ++l) c[l] = 1;
    Arc C{0.0, 1.0};
    auto below = check_visit_lower_bound(VisitStats::from_masks(0.0L, 0.3, c, i0), h, kGolden, C);
    REQUIRE(below.admissible);
    CHECK(below.rows[0].P == need);
    CHECK_FALSE(below.rows[0].b2_holds);
    c[need] = 1;
    auto above = check_visit_lower_bound(VisitStats::from_masks(0.0L, 0.3, c, i0), h, kGolden, C);
    CHECK(above.rows[0].b2_holds);
    Arc tiny{0.9, 0.01};
    CHECK_FALSE(check_visit_lower_bound(VisitStats::from_masks(0.0L, 0.3, c, i0), h, kGolden, tiny).admissible);
  }

  TEST_CASE("pair counts: trapping family, additivity, recount") {
    auto f = CircleMapFamily::rigid(0.1, kGolden);
    auto g = pullback_graph(f, GraphDirection::Attractor, 256, 3, 0.0);
    CHECK(wp_counts(f, g, trapping(), 0.1L, 0.2L, 50) == 50);
    CHECK(wp_counts(f, g, trapping(), 0.1L, 0.2L, 0) == 0);

    const auto& k = sna_constants().data;
    auto sg = pullback_graph(sna(), GraphDirection::Attractor, 1 << 10, 300, 0.5);
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int it = 0; it < 20; ++it) {
      Phase a = u(rng), b = wrap_phase(a + 1e-3L * u(rng));
      auto mask = dual_orbit_mask(sna(), sg, k, a, b, 400);
      for (std::int64_t n1 : {0, 17, 150}) {
        for (std::int64_t n2 : {0, 1, 99, 250}) {
          CHECK(wp_from_mask(mask, 0, n1 + n2) == wp_from_mask(mask, 0, n1) + wp_from_mask(mask, n1, n2));
        }
      }
      // recount: graph values at each rotated point from a fresh deep pullback
      std::int64_t recount = 0;
      for (std::int64_t m = -1; m < 399; ++m) {
        Phase t = rotate(a, m, kGolden), tp = rotate(b, m, kGolden);
        double x = kernels::pullback_value(sna(), GraphDirection::Attractor, t, 300 + static_cast<int>(m) + 1, 0.5);
        double xp = kernels::pullback_value(sna(), GraphDirection::Attractor, tp, 300 + static_cast<int>(m) + 1, 0.5);
        recount += k.C.contains(x) && k.C.contains(xp) && !k.I0.contains(static_cast<double>(t)) &&
                   !k.I0.contains(static_cast<double>(tp));
      }
      CHECK(wp_from_mask(mask, 0, 400) == recount);
    }
  }

  TEST_CASE("L_j bound") {
    // start index 2 K M - M - 1 = 1: first sum 10^(6 - c0) / (1 - 10^-c0), second sum 1
    auto L = l_j_bound(1.0, 10.0, 0.99, 1, 2);
    CHECK(L.start == 1);
    CHECK(L.c0 == doctest::Approx(0.8806).epsilon(1e-14));
    CHECK(L.value == doctest::Approx(151601.98685585589568).epsilon(1e-12));
    long double partial = 1.0L;
    for (int k = 1; k <= 1000; ++k) partial += std::pow(10.0L, 6.0L - static_cast<long double>(L.c0) * k);
    CHECK(std::fabs(L.value - static_cast<double>(partial)) <= 1e-9 * L.value);
    CHECK_THROWS(l_j_bound(1.0, 10.0, std::sqrt(5.0 / 6.0), 1, 2));
    CHECK_THROWS(l_j_bound(1.0, 1.0, 0.99, 1, 2));
    HierarchyParams p;
    p.n_max = 3;
    auto h = make_hierarchy(p, 28.0, ArcSet::arc(0.1, 0.01));
    double prev = -1.0;
    for (int j = 1; j <= 3; ++j) {
      auto Lj = l_j_bound(2.0 * M_PI, 28.0, h.b_limit(), h.K[j - 1], h.M[j - 1]);
      CHECK(Lj.log_value >= prev);
      CHECK(std::isfinite(Lj.log_value));
      prev = Lj.log_value;
    }
  }

  TEST_CASE("empirical Lipschitz on synthetic graphs") {
    auto flat = empirical_lipschitz([](Phase) { return 0.37; }, ArcSet::full(), 1.0, 0.2, 2000, 1);
    CHECK(flat.status == "ok");
    CHECK(flat.max_slope == 0.0);
    auto id = empirical_lipschitz([](Phase t) { return static_cast<double>(t); }, ArcSet::full(), 1.0, 0.2, 2000, 2);
    CHECK(id.max_slope == doctest::Approx(1.0).epsilon(1e-9));
    for (const auto& pr : id.pairs) CHECK(pr.pair_dist <= 0.05 + 1e-15);
    CHECK(empirical_lipschitz([](Phase) { return 0.0; }, ArcSet{}, 1.0, 0.2, 10, 3).status == "empty-set");
    auto excl = empirical_lipschitz([](Phase t) { return static_cast<double>(t); }, ArcSet::arc(0.2, 0.3), 1.0, 0.2,
                                    500, 4, [](Phase t) { return t < 0.35L; });
    for (const auto& pr : excl.pairs) {
      CHECK(pr.theta < 0.35);
      CHECK(pr.theta_prime < 0.35);
    }
  }

  TEST_CASE("fraction outside E") {
    Arc E{0.6, 0.1};
    CHECK(fraction_outside_E(graph_from(std::vector<double>(1024, 0.2)), E) == 1.0);
    CHECK(fraction_outside_E(graph_from(std::vector<double>(1024, 0.65)), E) == 0.0);
    std::vector<double> half(1024, 0.2);
    for (std::size_t i = 0; i < 256; ++i) half[i] = 0.65;
    CHECK(fraction_outside_E(graph_from(half), E) == 0.75);
  }

  TEST_CASE("pointwise dimension of a Lipschitz graph and of a constant graph") {
    const int N = 1 << 17;
    std::vector<double> phi(N), flat(N, 0.4);
    for (int i = 0; i < N; ++i) phi[i] = 0.3 + 0.1 * std::sin(2.0 * M_PI * i / N);
    auto g = graph_from(phi);
    auto centers = sample_centers(g.theta, g.phi, 32, 5);
    auto eps = dyadic_scales(4, 13);
    auto d = pointwise_dimension(g.theta, g.phi, centers, eps);
    CHECK(d.slope == doctest::Approx(1.0).epsilon(0.02));
    CHECK(d.warning.empty());
    auto c = graph_from(flat);
    auto dc = pointwise_dimension(c.theta, c.phi, sample_centers(c.theta, c.phi, 8, 6), eps);
    CHECK(dc.slope == doctest::Approx(1.0).epsilon(0.02));
  }

  TEST_CASE("pointwise dimension of a product surrogate is 2") {
    const int N = 1 << 20;
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> phi(N);
    for (auto& x : phi) x = u(rng);
    auto g = graph_from(phi);
    auto centers = sample_centers(g.theta, g.phi, 32, 10);
    auto eps = dyadic_scales(2, 7);
    auto d = pointwise_dimension(g.theta, g.phi, centers, eps);
    CHECK(d.slope == doctest::Approx(2.0).epsilon(0.025));
  }

  TEST_CASE("box dimension of a segment and of uniform points") {
    std::vector<GraphPoint> line, cloud;
    for (int i = 0; i < 200000; ++i) line.push_back({(i + 0.5) / 200000.0, 0.1 + 0.5 * (i + 0.5) / 200000.0});
    auto dl = box_dimension(line, dyadic_scales(3, 10));
    CHECK(dl.slope == doctest::Approx(1.0).epsilon(0.05));
    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 1000000; ++i) cloud.push_back({u(rng), u(rng)});
    auto dc = box_dimension(cloud, dyadic_scales(3, 6));
    CHECK(dc.slope == doctest::Approx(2.0).epsilon(0.05));
    auto sparse = box_dimension(std::span<const GraphPoint>(cloud).first(1000), dyadic_scales(3, 10));
    CHECK_FALSE(sparse.warning.empty());
  }
}
