#include <doctest.h>

#include <cmath>

#include "snalab/diophantine.hpp"

using namespace snalab;

namespace {

// n * d(n omega, 0) minimised over every n in [1, n_max].
long double brute_margin(Phase w, std::int64_t n_max, std::int64_t* argmin = nullptr) {
  long double best = 1e300L;
  for (std::int64_t n = 1; n <= n_max; ++n) {
    long double v = static_cast<long double>(n) * distance_to_integer(w, n);
    if (v < best) {
      best = v;
      if (argmin) *argmin = n;
    }
  }
  return best;
}

}  // namespace

TEST_SUITE("diophantine") {
  TEST_CASE("frequency tokens") {
    CHECK(static_cast<double>(parse_frequency("golden").value) == doctest::Approx(0.6180339887498949));
    CHECK(static_cast<double>(parse_frequency("silver").value) == doctest::Approx(0.41421356237309503));
    CHECK(static_cast<double>(parse_frequency("0.25").value) == 0.25);
    CHECK_THROWS(parse_frequency("1.5"));
    CHECK_THROWS(parse_frequency("gold"));
  }

  TEST_CASE("continued fractions of quadratic surds and rationals") {
    auto g = continued_fraction(parse_frequency("golden").value, 20);
    CHECK(g.quotients.size() == 20);
    for (auto a : g.quotients) CHECK(a == 1);
    CHECK_FALSE(g.rational);
    auto s = continued_fraction(parse_frequency("silver").value, 15);
    for (auto a : s.quotients) CHECK(a == 2);
    auto q = continued_fraction(0.25L, 10);
    REQUIRE(q.quotients.size() == 1);
    CHECK(q.quotients[0] == 4);
    CHECK(q.rational);
    CHECK_THROWS(continued_fraction(0.3L, 0));
  }

  TEST_CASE("convergents approximate to 1/q^2") {
    Phase w = parse_frequency("silver").value;
    auto cs = convergents(continued_fraction(w, 18));
    for (const auto& c : cs) {
      long double err = std::fabs(w - static_cast<long double>(c.p) / static_cast<long double>(c.q));
      CHECK(err < 1.0L / (static_cast<long double>(c.q) * c.q));
    }
  }

  TEST_CASE("golden margin matches a brute force scan") {
    Phase w = parse_frequency("golden").value;
    auto r = check_diophantine(w, 0.3, 1.0, 100000);
    long double oracle = brute_margin(w, 100000);
    CHECK(r.worst_margin >= 0.38);
    CHECK(r.worst_margin == doctest::Approx(static_cast<double>(oracle)).epsilon(1e-12));
    CHECK(r.holds);
    CHECK_FALSE(check_diophantine(w, 0.4, 1.0, 100000).holds);
  }

  TEST_CASE("silver margin matches a brute force scan") {
    Phase w = parse_frequency("silver").value;
    std::int64_t argmin = 0;
    long double oracle = brute_margin(w, 100000, &argmin);
    auto r = check_diophantine(w, 0.1, 1.0, 100000);
    CHECK(r.worst_margin == doctest::Approx(static_cast<double>(oracle)).epsilon(1e-12));
    CHECK(r.worst_n == argmin);
  }

  TEST_CASE("rational frequency fails at its denominator") {
    auto r = check_diophantine(1.0L / 3.0L, 1e-6, 2.0, 1000);
    CHECK_FALSE(r.holds);
    CHECK(r.worst_n == 3);
    CHECK(r.worst_margin == doctest::Approx(0.0).epsilon(1e-12));
  }

  TEST_CASE("margin is non-increasing in the horizon") {
    Phase w = parse_frequency("0.7236").value;
    double prev = 1e9;
    for (std::int64_t n : {10, 100, 1000, 10000, 100000}) {
      double m = check_diophantine(w, 0.01, 1.0, n).worst_margin;
      CHECK(m <= prev);
      prev = m;
    }
  }

  TEST_CASE("convergent denominators are the record minima") {
    Phase w = parse_frequency("0.7236067977").value;
    auto cs = convergents(continued_fraction(w, 30));
    for (std::size_t k = 0; k + 1 < cs.size() && cs[k + 1].q <= 10000; ++k) {
      long double at_q = cs[k].q * distance_to_integer(w, cs[k].q);
      for (std::int64_t n = 1; n < cs[k + 1].q; ++n) {
        bool is_conv = false;
        for (std::size_t i = 0; i <= k; ++i) is_conv = is_conv || cs[i].q == n;
        if (is_conv || n < cs[k].q) continue;
        CHECK(at_q <= n * distance_to_integer(w, n) + 1e-15L);
      }
    }
  }
}
