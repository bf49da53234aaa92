#pragma once

#include "imdyn/rational.hpp"

#include <vector>

namespace imdyn {

/// Closed interval [lo, hi] with rational endpoints. lo == hi is a point.
struct Interval {
  Rational lo;
  Rational hi;

  bool valid() const { return lo <= hi; }
  Rational length() const { return hi - lo; }
  bool contains(const Rational& x) const { return lo <= x && x <= hi; }
  bool strictly_contains(const Rational& x) const { return lo < x && x < hi; }
  bool is_point() const { return lo == hi; }

  bool operator==(const Interval& o) const = default;
};

/// Intersection of two closed intervals; invalid (lo > hi) when disjoint.
Interval intersect(const Interval& a, const Interval& b);

/// True when the open interiors of a and b overlap. Point intervals have
/// empty interior.
bool interiors_overlap(const Interval& a, const Interval& b);

/// Finite union of closed intervals, kept sorted and disjoint
/// (touching intervals are merged). Degenerate members are allowed.
class IntervalSet {
 public:
  IntervalSet() = default;
  explicit IntervalSet(Interval iv);
  explicit IntervalSet(std::vector<Interval> ivs);

  static IntervalSet empty() { return IntervalSet(); }

  const std::vector<Interval>& parts() const { return parts_; }
  bool is_empty() const { return parts_.empty(); }
  std::size_t size() const { return parts_.size(); }

  Rational total_length() const;
  bool contains(const Rational& x) const;

  void add(Interval iv);

  IntervalSet unite(const IntervalSet& other) const;
  IntervalSet intersect(const IntervalSet& other) const;
  /// Set difference; `other` is treated as a union of OPEN intervals, so
  /// boundary points of removed intervals survive (closed-set semantics).
  IntervalSet subtract_open(const IntervalSet& other) const;

  /// a \subseteq b as closed sets.
  bool subset_of(const IntervalSet& other) const;

  bool operator==(const IntervalSet& o) const = default;

 private:
  void normalize();
  std::vector<Interval> parts_;
};

}  // namespace imdyn
