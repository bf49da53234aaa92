#include "imdyn/renorm.hpp"

#include "imdyn/orbit.hpp"

#include <algorithm>

namespace imdyn {

namespace {

/// Exact verification of both restrictive-interval invariants; fills the
/// iterate list and the boundary-touching flag on success.
std::optional<RestrictiveInterval> verify_candidate(const PiecewiseMap& f,
                                                    const Rational& c, std::size_t q,
                                                    const Interval& J) {
  if (!J.valid() || J.is_point()) return std::nullopt;
  if (!J.strictly_contains(c)) return std::nullopt;

  std::vector<Interval> its;
  its.push_back(J);
  for (std::size_t i = 0; i < q; ++i) its.push_back(image_of_interval(f, its.back()));
  const Interval& ret = its.back();
  if (ret.lo < J.lo || ret.hi > J.hi) return std::nullopt;  // f^q(J) ⊆ J fails

  bool touching = ret.lo == J.lo || ret.hi == J.hi;
  for (std::size_t i = 0; i < q; ++i) {
    for (std::size_t j = i + 1; j < q; ++j) {
      if (interiors_overlap(its[i], its[j])) return std::nullopt;
      Interval common = intersect(its[i], its[j]);
      if (common.valid()) touching = true;
    }
  }

  RestrictiveInterval out;
  out.J = J;
  out.q = q;
  out.c = c;
  out.iterates = std::move(its);
  out.boundary_touching = touching;
  return out;
}

/// Search restricted to candidates inside `within` (tower nesting).
std::optional<RestrictiveInterval> search(const PiecewiseMap& f, const Rational& c,
                                          std::size_t q, const Interval& within,
                                          std::uint64_t budget) {
  if (q < 2) throw MapError("restrictive_interval: q must be at least 2");
  const Interval sym = tau_domain(f, c);
  auto points = fixed_points_of_iterate(f, q, budget);

  std::optional<RestrictiveInterval> best;
  for (const auto& p : points) {
    if (p == c || !sym.contains(p)) continue;
    Rational t = tau(f, c, p);
    Interval J{std::min(p, t), std::max(p, t)};
    if (J.lo < within.lo || J.hi > within.hi) continue;
    auto cand = verify_candidate(f, c, q, J);
    if (cand && (!best || cand->J.length() > best->J.length())) best = std::move(cand);
  }
  return best;
}

}  // namespace

std::optional<RestrictiveInterval> restrictive_interval(const PiecewiseMap& f,
                                                        const Rational& c, std::size_t q,
                                                        std::uint64_t budget) {
  return search(f, c, q, f.domain(), budget);
}

RenormTower renorm_tower(const PiecewiseMap& f, const Rational& c, std::size_t q_max,
                         std::uint64_t budget) {
  RenormTower tower;
  tower.c = c;
  for (;;) {
    std::size_t q_prev = tower.levels.empty() ? 1 : tower.levels.back().q;
    Interval within = tower.levels.empty() ? f.domain() : tower.levels.back().J;
    std::optional<RestrictiveInterval> found;
    for (std::size_t q = 2 * q_prev; q <= q_max; q += q_prev) {
      if (q % q_prev != 0 || q == q_prev) continue;
      auto cand = search(f, c, q, within, budget);
      if (!cand) continue;
      if (!tower.levels.empty()) {
        // strict nesting
        const Interval& prev = tower.levels.back().J;
        if (cand->J == prev) continue;
        if (cand->J.lo < prev.lo || cand->J.hi > prev.hi) continue;
      }
      found = std::move(cand);
      break;  // smallest admissible period wins
    }
    if (!found) break;
    tower.levels.push_back(std::move(*found));
  }
  return tower;
}

std::vector<RenormReport> is_renormalizable(const PiecewiseMap& f, std::size_t q_max,
                                            std::uint64_t budget) {
  // Longest chain 2 | 4 | 8 | ... within q_max.
  std::size_t max_depth = 0;
  for (std::size_t q = 2; q <= q_max; q *= 2) ++max_depth;

  std::vector<RenormReport> out;
  for (const auto& c : f.turning_points()) {
    RenormReport rep;
    rep.c = c;
    rep.tower = renorm_tower(f, c, q_max, budget);
    rep.depth = rep.tower.depth();
    rep.solenoid_suspect = rep.depth >= 1 && rep.depth == max_depth;
    out.push_back(std::move(rep));
  }
  return out;
}

}  // namespace imdyn
