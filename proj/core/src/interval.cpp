#include "imdyn/interval.hpp"

#include <algorithm>

namespace imdyn {

Interval intersect(const Interval& a, const Interval& b) {
  return Interval{std::max(a.lo, b.lo), std::min(a.hi, b.hi)};
}

bool interiors_overlap(const Interval& a, const Interval& b) {
  return std::max(a.lo, b.lo) < std::min(a.hi, b.hi);
}

IntervalSet::IntervalSet(Interval iv) {
  if (iv.valid()) parts_.push_back(std::move(iv));
}

IntervalSet::IntervalSet(std::vector<Interval> ivs) : parts_(std::move(ivs)) {
  normalize();
}

void IntervalSet::normalize() {
  std::erase_if(parts_, [](const Interval& iv) { return !iv.valid(); });
  std::sort(parts_.begin(), parts_.end(), [](const Interval& a, const Interval& b) {
    return a.lo < b.lo || (a.lo == b.lo && a.hi < b.hi);
  });
  std::vector<Interval> merged;
  for (auto& iv : parts_) {
    if (!merged.empty() && iv.lo <= merged.back().hi) {
      merged.back().hi = std::max(merged.back().hi, iv.hi);
    } else {
      merged.push_back(iv);
    }
  }
  parts_ = std::move(merged);
}

Rational IntervalSet::total_length() const {
  Rational acc(0);
  for (const auto& iv : parts_) acc += iv.length();
  return acc;
}

bool IntervalSet::contains(const Rational& x) const {
  for (const auto& iv : parts_) {
    if (iv.contains(x)) return true;
    if (iv.lo > x) break;
  }
  return false;
}

void IntervalSet::add(Interval iv) {
  if (!iv.valid()) return;
  parts_.push_back(std::move(iv));
  normalize();
}

IntervalSet IntervalSet::unite(const IntervalSet& other) const {
  std::vector<Interval> all = parts_;
  all.insert(all.end(), other.parts_.begin(), other.parts_.end());
  return IntervalSet(std::move(all));
}

IntervalSet IntervalSet::intersect(const IntervalSet& other) const {
  std::vector<Interval> out;
  for (const auto& a : parts_) {
    for (const auto& b : other.parts_) {
      if (b.lo > a.hi) break;
      Interval iv = imdyn::intersect(a, b);
      if (iv.valid()) out.push_back(std::move(iv));
    }
  }
  return IntervalSet(std::move(out));
}

IntervalSet IntervalSet::subtract_open(const IntervalSet& other) const {
  std::vector<Interval> out;
  for (const auto& a : parts_) {
    std::vector<Interval> pieces{a};
    for (const auto& b : other.parts_) {
      if (b.is_point()) continue;  // open interior is empty
      std::vector<Interval> next;
      for (const auto& p : pieces) {
        if (b.hi <= p.lo || b.lo >= p.hi) {
          next.push_back(p);
          continue;
        }
        Interval left{p.lo, std::min(p.hi, b.lo)};
        Interval right{std::max(p.lo, b.hi), p.hi};
        if (left.valid()) next.push_back(left);
        if (right.valid()) next.push_back(right);
      }
      pieces = std::move(next);
    }
    out.insert(out.end(), pieces.begin(), pieces.end());
  }
  return IntervalSet(std::move(out));
}

bool IntervalSet::subset_of(const IntervalSet& other) const {
  for (const auto& a : parts_) {
    bool covered = false;
    for (const auto& b : other.parts_) {
      if (b.lo <= a.lo && a.hi <= b.hi) {
        covered = true;
        break;
      }
    }
    if (!covered) return false;
  }
  return true;
}

}  // namespace imdyn
