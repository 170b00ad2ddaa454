#include "snalab/diophantine.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace snalab {

Frequency parse_frequency(std::string_view text) {
  if (text == "golden") return {(std::sqrt(5.0L) - 1.0L) / 2.0L, "golden"};
  if (text == "silver") return {std::sqrt(2.0L) - 1.0L, "silver"};
  std::string s(text);
  char* end = nullptr;
  long double v = std::strtold(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size() || !std::isfinite(v)) {
    throw std::invalid_argument("cannot parse frequency '" + s + "'");
  }
  if (v < 0.0L || v >= 1.0L) throw std::invalid_argument("frequency must lie in [0,1): " + s);
  return {v, s};
}

ContinuedFraction continued_fraction(Phase omega, int depth) {
  if (depth < 1) throw std::invalid_argument("continued_fraction needs depth >= 1");
  ContinuedFraction cf;
  long double x = wrap_phase(omega);
  for (int k = 0; k < depth; ++k) {
    if (x < 1e-15L) {
      cf.rational = true;
      break;
    }
    long double r = 1.0L / x;
    long double a = std::floor(r);
    if (a > 1e15L) {
      cf.rational = true;
      break;
    }
    cf.quotients.push_back(static_cast<std::int64_t>(a));
    x = r - a;
  }
  if (!cf.rational && x < 1e-15L) cf.rational = true;
  return cf;
}

std::vector<Convergent> convergents(const ContinuedFraction& cf) {
  std::vector<Convergent> out;
  std::int64_t p_prev = 1, q_prev = 0, p = 0, q = 1;
  out.push_back({p, q});
  for (std::int64_t a : cf.quotients) {
    long double qn = static_cast<long double>(a) * q + q_prev;
    if (qn > static_cast<long double>(std::numeric_limits<std::int64_t>::max() / 4)) break;
    std::int64_t pn = a * p + p_prev, qi = a * q + q_prev;
    p_prev = p;
    q_prev = q;
    p = pn;
    q = qi;
    out.push_back({p, q});
  }
  return out;
}

long double distance_to_integer(Phase omega, std::int64_t n) {
  long double v = static_cast<long double>(n) * omega;
  v -= std::floor(v);
  return v > 0.5L ? 1.0L - v : v;
}

DiophantineReport check_diophantine(Phase omega, double gamma, double nu, std::int64_t n_max) {
  if (!(gamma > 0) || !(nu > 0) || n_max < 1) {
    throw std::invalid_argument("check_diophantine needs gamma, nu > 0 and n_max >= 1");
  }
  DiophantineReport rep{gamma, nu, n_max, 0, std::numeric_limits<double>::infinity(), false};
  ContinuedFraction cf = continued_fraction(omega, 64);
  std::vector<Convergent> cv = convergents(cf);
  for (std::size_t k = 0; k < cv.size(); ++k) {
    std::int64_t q = cv[k].q;
    if (q > n_max) break;
    bool exact = cf.rational && k + 1 == cv.size();
    long double d = exact ? 0.0L : distance_to_integer(omega, q);
    double margin = static_cast<double>(std::pow(static_cast<long double>(q), nu) * d);
    if (margin < rep.worst_margin) {
      rep.worst_margin = margin;
      rep.worst_n = q;
    }
  }
  rep.holds = rep.worst_margin > gamma;
  return rep;
}

}  // namespace snalab
