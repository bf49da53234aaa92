#pragma once

#include "imdyn/map_model.hpp"

#include <optional>
#include <vector>

namespace imdyn {

/// Restrictive interval J around a turning point c: f^q(J) ⊆ J and the
/// interiors of J, f(J), ..., f^{q-1}(J) are pairwise disjoint.
struct RestrictiveInterval {
  Interval J;
  std::size_t q = 0;
  Rational c;                      // the turning point, interior to J
  std::vector<Interval> iterates;  // f^i(J), i = 0..q; iterates[q] ⊆ J
  bool boundary_touching = false;  // some iterates share a boundary point
};

struct RenormTower {
  Rational c;
  std::vector<RestrictiveInterval> levels;  // nested, periods proper multiples

  std::size_t depth() const { return levels.size(); }
};

struct RenormReport {
  Rational c;
  std::size_t depth = 0;
  bool solenoid_suspect = false;  // tower saturated the q_max horizon
  RenormTower tower;
};

/// Largest restrictive interval of return period exactly q around c, with
/// endpoints drawn from symmetric pairs (p, tau(p)) over periodic points p
/// of period dividing q. none when no candidate passes. Throws for q < 2.
std::optional<RestrictiveInterval> restrictive_interval(const PiecewiseMap& f,
                                                        const Rational& c, std::size_t q,
                                                        std::uint64_t budget = (1ull << 22));

/// Greedy nested tower: each level's period is the smallest proper
/// multiple of the previous level's period admitting a restrictive
/// interval strictly inside the previous level, up to q_max.
RenormTower renorm_tower(const PiecewiseMap& f, const Rational& c, std::size_t q_max,
                         std::uint64_t budget = (1ull << 22));

/// Tower depth per turning point; solenoid_suspect when the depth equals
/// the longest possible period-multiplying chain within q_max.
std::vector<RenormReport> is_renormalizable(const PiecewiseMap& f, std::size_t q_max,
                                            std::uint64_t budget = (1ull << 22));

}  // namespace imdyn
