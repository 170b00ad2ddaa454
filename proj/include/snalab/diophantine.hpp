#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "snalab/circle.hpp"

namespace snalab {

struct Frequency {
  Phase value = 0.0L;
  std::string token;  // "golden", "silver" or the decimal text as given
};

// Accepts "golden" = (sqrt5 - 1)/2, "silver" = sqrt2 - 1, or a decimal in [0,1).
Frequency parse_frequency(std::string_view text);

struct ContinuedFraction {
  std::vector<std::int64_t> quotients;  // a_1, a_2, ... of omega = [0; a_1, a_2, ...]
  bool rational = false;
};

ContinuedFraction continued_fraction(Phase omega, int depth);

struct Convergent {
  std::int64_t p;
  std::int64_t q;
};
std::vector<Convergent> convergents(const ContinuedFraction& cf);

// d(n omega, 0) in extended precision.
long double distance_to_integer(Phase omega, std::int64_t n);

struct DiophantineReport {
  double gamma = 0.0;
  double nu = 0.0;
  std::int64_t n_max = 0;
  std::int64_t worst_n = 0;
  double worst_margin = 0.0;
  bool holds = false;  // worst_margin > gamma
};

DiophantineReport check_diophantine(Phase omega, double gamma, double nu, std::int64_t n_max = 1000000);

}  // namespace snalab
