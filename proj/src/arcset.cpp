#include "snalab/arcset.hpp"

#include <algorithm>

namespace snalab {

ArcSet::ArcSet(std::vector<Interval> canonical) : iv_(std::move(canonical)) { build_arcs(); }

ArcSet ArcSet::full() { return ArcSet(std::vector<Interval>{{0.0, 1.0}}); }

ArcSet ArcSet::arc(double left, double length) {
  Arc a{wrap_unit(left), length};
  return from_arcs(std::span<const Arc>(&a, 1));
}

ArcSet ArcSet::from_arcs(std::span<const Arc> arcs) {
  std::vector<Interval> iv;
  iv.reserve(arcs.size() + 1);
  for (const Arc& a : arcs) {
    if (!(a.length > 0.0)) continue;
    if (a.length >= 1.0) return full();
    double l = wrap_unit(a.left);
    double r = l + a.length;
    if (r <= 1.0) {
      iv.emplace_back(l, r);
    } else {
      iv.emplace_back(l, 1.0);
      iv.emplace_back(0.0, r - 1.0);
    }
  }
  return from_intervals(std::move(iv));
}

ArcSet ArcSet::from_intervals(std::vector<Interval> intervals) {
  std::vector<Interval> iv;
  iv.reserve(intervals.size());
  for (auto [a, b] : intervals) {
    a = std::clamp(a, 0.0, 1.0);
    b = std::clamp(b, 0.0, 1.0);
    if (b > a) iv.emplace_back(a, b);
  }
  std::sort(iv.begin(), iv.end());
  std::vector<Interval> out;
  out.reserve(iv.size());
  for (const auto& x : iv) {
    if (!out.empty() && x.first <= out.back().second) {
      out.back().second = std::max(out.back().second, x.second);
    } else {
      out.push_back(x);
    }
  }
  return ArcSet(std::move(out));
}

ArcSet ArcSet::union_of(std::span<const ArcSet> sets) {
  std::vector<Interval> all;
  for (const ArcSet& s : sets) all.insert(all.end(), s.iv_.begin(), s.iv_.end());
  return from_intervals(std::move(all));
}

void ArcSet::build_arcs() {
  arcs_.clear();
  if (iv_.empty()) return;
  if (is_full()) {
    arcs_.push_back({0.0, 1.0});
    return;
  }
  bool wraps = iv_.size() >= 2 && iv_.front().first == 0.0 && iv_.back().second == 1.0;
  std::size_t begin = wraps ? 1 : 0;
  std::size_t end = wraps ? iv_.size() - 1 : iv_.size();
  for (std::size_t i = begin; i < end; ++i) {
    arcs_.push_back({iv_[i].first, iv_[i].second - iv_[i].first});
  }
  if (wraps) {
    double l = iv_.back().first;
    arcs_.push_back({l, (1.0 - l) + iv_.front().second});
  }
}

bool ArcSet::is_full() const {
  return iv_.size() == 1 && iv_[0].first == 0.0 && iv_[0].second == 1.0;
}

double ArcSet::measure() const {
  double m = 0.0;
  for (const auto& [a, b] : iv_) m += b - a;
  return m;
}

double ArcSet::max_component_length() const {
  double m = 0.0;
  for (const Arc& a : arcs_) m = std::max(m, a.length);
  return m;
}

bool ArcSet::contains(double theta) const {
  double t = wrap_unit(theta);
  auto it = std::upper_bound(iv_.begin(), iv_.end(), t,
                             [](double v, const Interval& iv) { return v < iv.first; });
  if (it == iv_.begin()) return false;
  --it;
  return t >= it->first && t < it->second;
}

ArcSet ArcSet::unite(const ArcSet& other) const {
  std::vector<Interval> all(iv_);
  all.insert(all.end(), other.iv_.begin(), other.iv_.end());
  return from_intervals(std::move(all));
}

ArcSet ArcSet::intersect(const ArcSet& other) const {
  std::vector<Interval> out;
  std::size_t i = 0, j = 0;
  while (i < iv_.size() && j < other.iv_.size()) {
    double lo = std::max(iv_[i].first, other.iv_[j].first);
    double hi = std::min(iv_[i].second, other.iv_[j].second);
    if (lo < hi) out.emplace_back(lo, hi);
    if (iv_[i].second < other.iv_[j].second) {
      ++i;
    } else {
      ++j;
    }
  }
  return ArcSet(std::move(out));
}

ArcSet ArcSet::complement() const {
  std::vector<Interval> out;
  double prev = 0.0;
  for (const auto& [a, b] : iv_) {
    if (a > prev) out.emplace_back(prev, a);
    prev = b;
  }
  if (prev < 1.0) out.emplace_back(prev, 1.0);
  return ArcSet(std::move(out));
}

ArcSet ArcSet::translate(Phase shift) const {
  if (iv_.empty() || is_full()) return *this;
  double s = static_cast<double>(wrap_phase(shift));
  std::vector<Interval> out;
  out.reserve(iv_.size() + 1);
  for (const auto& [a, b] : iv_) {
    double l = a + s, r = b + s;
    if (l >= 1.0) {
      out.emplace_back(l - 1.0, r - 1.0);
    } else if (r > 1.0) {
      out.emplace_back(l, 1.0);
      out.emplace_back(0.0, r - 1.0);
    } else {
      out.emplace_back(l, r);
    }
  }
  return from_intervals(std::move(out));
}

ArcSet ArcSet::merge_gaps(double eps) const {
  if (iv_.empty() || is_full()) return *this;
  std::vector<Interval> out;
  for (const auto& x : iv_) {
    if (!out.empty() && x.first - out.back().second < eps) {
      out.back().second = x.second;
    } else {
      out.push_back(x);
    }
  }
  double wrap_gap = (1.0 - out.back().second) + out.front().first;
  if (wrap_gap < eps && wrap_gap > 0.0) {
    if (out.size() == 1) return full();
    out.back().second = 1.0;
    out.front().first = 0.0;
  }
  return ArcSet(std::move(out));
}

bool ArcSet::subset_of(const ArcSet& other) const { return intersect(other.complement()).empty(); }

bool ArcSet::intersects(const ArcSet& other) const { return !intersect(other).empty(); }

}  // namespace snalab
