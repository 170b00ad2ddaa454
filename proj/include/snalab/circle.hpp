#pragma once

#include <cmath>
#include <cstdint>

namespace snalab {

// Driving phase. Kept in extended precision so that theta - m*omega stays
// accurate for the orbit lengths used by pullback and the hierarchy checks.
using Phase = long double;

inline double wrap_unit(double v) {
  double r = v - std::floor(v);
  return r >= 1.0 ? 0.0 : r;
}

inline Phase wrap_phase(Phase v) {
  Phase r = v - std::floor(v);
  return r >= 1.0L ? 0.0L : r;
}

// theta + k*omega mod 1.
inline Phase rotate(Phase theta, std::int64_t k, Phase omega) {
  Phase s = static_cast<Phase>(k) * omega;
  s -= std::floor(s);
  return wrap_phase(theta + s);
}

inline double circle_distance(double a, double b) {
  double d = std::fabs(wrap_unit(a) - wrap_unit(b));
  return d > 0.5 ? 1.0 - d : d;
}

// Point of T^1 = R/Z stored in [0, 1).
class CircleAngle {
 public:
  constexpr CircleAngle() = default;
  explicit CircleAngle(double v) : value_(wrap_unit(v)) {}

  double value() const { return value_; }
  // Representative in (-1/2, 1/2].
  double lift() const { return value_ <= 0.5 ? value_ : value_ - 1.0; }

  CircleAngle operator+(double d) const { return CircleAngle(value_ + d); }
  CircleAngle operator-(double d) const { return CircleAngle(value_ - d); }
  friend double distance(CircleAngle a, CircleAngle b) {
    return circle_distance(a.value_, b.value_);
  }
  friend bool operator==(CircleAngle a, CircleAngle b) = default;

 private:
  double value_ = 0.0;
};

}  // namespace snalab
