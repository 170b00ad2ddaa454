#pragma once

#include <span>
#include <utility>
#include <vector>

#include "snalab/circle.hpp"

namespace snalab {

// Arc of the circle starting at `left` in [0,1) and running counterclockwise
// for `length`. A component of a full circle has length 1.
struct Arc {
  double left = 0.0;
  double length = 0.0;

  double right_lift() const { return left + length; }
  // Closed-arc membership.
  bool contains(double x) const {
    double d = wrap_unit(x - left);
    return d <= length;
  }
  bool operator==(const Arc&) const = default;
};

// Finite union of arcs. Stored as sorted disjoint half-open intervals in
// [0,1]; components that straddle 0 are reported as one wrapping arc.
class ArcSet {
 public:
  using Interval = std::pair<double, double>;

  ArcSet() = default;
  static ArcSet full();
  static ArcSet arc(double left, double length);
  static ArcSet from_arcs(std::span<const Arc> arcs);
  static ArcSet from_intervals(std::vector<Interval> intervals);
  static ArcSet union_of(std::span<const ArcSet> sets);

  const std::vector<Arc>& arcs() const { return arcs_; }
  const std::vector<Interval>& intervals() const { return iv_; }
  std::size_t component_count() const { return arcs_.size(); }
  bool empty() const { return iv_.empty(); }
  bool is_full() const;
  double measure() const;
  double max_component_length() const;

  // Open-set membership up to endpoints.
  bool contains(double theta) const;

  ArcSet unite(const ArcSet& other) const;
  ArcSet intersect(const ArcSet& other) const;
  ArcSet complement() const;
  ArcSet translate(Phase shift) const;
  // Closes gaps shorter than eps, including the gap across 0.
  ArcSet merge_gaps(double eps) const;
  bool subset_of(const ArcSet& other) const;
  bool intersects(const ArcSet& other) const;

  bool operator==(const ArcSet& other) const { return iv_ == other.iv_; }

 private:
  explicit ArcSet(std::vector<Interval> canonical);
  void build_arcs();

  std::vector<Interval> iv_;
  std::vector<Arc> arcs_;
};

}  // namespace snalab
