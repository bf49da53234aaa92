#include "imdyn/orbit.hpp"

#include <algorithm>
#include <map>

namespace imdyn {

const char* to_string(Hyperbolicity h) {
  switch (h) {
    case Hyperbolicity::repelling: return "repelling";
    case Hyperbolicity::attracting: return "attracting";
    case Hyperbolicity::non_hyperbolic: return "non_hyperbolic";
  }
  return "?";
}

OrbitSegment iterate(const PiecewiseMap& f, const Rational& x, std::size_t n) {
  OrbitSegment seg;
  seg.start = x;
  seg.points.push_back(x);
  Rational y = x;
  for (std::size_t k = 0; k < n; ++k) {
    seg.one_sided_slopes.emplace_back(deriv(f, y, Side::left), deriv(f, y, Side::right));
    y = eval(f, y);
    seg.points.push_back(y);
  }
  return seg;
}

namespace {

/// Coherent one-sided chain products Df^j(x), j = 1..n, for both sides.
/// Approaching x from a given side, the side from which the orbit of a
/// nearby point approaches f^k(x) flips with the sign of the chain so far.
std::vector<DerivativePair> chain_partials(const PiecewiseMap& f, const Rational& x,
                                           std::size_t n) {
  std::vector<DerivativePair> out(n);
  for (int s = 0; s < 2; ++s) {
    const Side start_side = s == 0 ? Side::left : Side::right;
    Rational prod(1);
    Rational y = x;
    for (std::size_t k = 0; k < n; ++k) {
      Side approach;
      if (prod > 0)
        approach = start_side;
      else
        approach = start_side == Side::left ? Side::right : Side::left;
      prod *= deriv(f, y, approach);
      y = eval(f, y);
      if (s == 0)
        out[k].left = prod;
      else
        out[k].right = prod;
    }
  }
  return out;
}

}  // namespace

DerivativePair orbit_derivative(const PiecewiseMap& f, const Rational& x, std::size_t n) {
  if (n == 0) return DerivativePair{Rational(1), Rational(1)};
  return chain_partials(f, x, n).back();
}

Hyperbolicity classify_periodic(const DerivativePair& m) {
  Rational l = abs(m.left), r = abs(m.right);
  if (l > 1 && r > 1) return Hyperbolicity::repelling;
  if (l < 1 && r < 1) return Hyperbolicity::attracting;
  return Hyperbolicity::non_hyperbolic;
}

namespace {

std::vector<std::size_t> proper_divisors(std::size_t n) {
  std::vector<std::size_t> out;
  for (std::size_t d = 1; d < n; ++d)
    if (n % d == 0) out.push_back(d);
  return out;
}

}  // namespace

std::vector<PeriodicOrbit> periodic_orbits(const PiecewiseMap& f, std::size_t n,
                                           std::uint64_t budget) {
  if (n == 0) throw MapError("period must be positive");
  auto branches = monotone_branches(f, n, budget);
  const auto divisors = proper_divisors(n);

  std::map<Rational, PeriodicOrbit> by_base;
  for (const auto& mb : branches) {
    if (mb.slope == 1) continue;  // identity piece or translation: no isolated fixed point
    Rational x = mb.intercept / (Rational(1) - mb.slope);
    if (!mb.domain.contains(x)) continue;

    // Reject non-minimal periods.
    bool minimal = true;
    for (auto d : divisors) {
      Rational y = x;
      for (std::size_t k = 0; k < d; ++k) y = eval(f, y);
      if (y == x) {
        minimal = false;
        break;
      }
    }
    if (!minimal) continue;

    OrbitSegment seg = iterate(f, x, n);
    if (seg.points.back() != x) throw MapError("fixed-point solve inconsistency");

    std::vector<Rational> pts(seg.points.begin(), seg.points.end() - 1);
    std::size_t base_idx =
        static_cast<std::size_t>(std::min_element(pts.begin(), pts.end()) - pts.begin());
    std::rotate(pts.begin(), pts.begin() + static_cast<long>(base_idx), pts.end());

    PeriodicOrbit orb;
    orb.points = std::move(pts);
    orb.period = n;
    orb.multiplier = orbit_derivative(f, orb.points.front(), n);
    orb.hyperbolicity = classify_periodic(orb.multiplier);
    BranchWord w = mb.word;
    std::rotate(w.begin(), w.begin() + static_cast<long>(base_idx), w.end());
    orb.word = std::move(w);

    auto [it, inserted] = by_base.emplace(orb.points.front(), orb);
    if (!inserted && orb.word < it->second.word) it->second = orb;  // smallest word wins
  }

  std::vector<PeriodicOrbit> out;
  out.reserve(by_base.size());
  for (auto& [base, orb] : by_base) out.push_back(std::move(orb));
  std::sort(out.begin(), out.end(),
            [](const PeriodicOrbit& a, const PeriodicOrbit& b) { return a.word < b.word; });
  return out;
}

std::vector<PeriodicOrbit> periodic_orbits_up_to(const PiecewiseMap& f, std::size_t n_max,
                                                 std::uint64_t budget) {
  std::vector<PeriodicOrbit> out;
  for (std::size_t n = 1; n <= n_max; ++n) {
    auto orbits = periodic_orbits(f, n, budget);
    out.insert(out.end(), orbits.begin(), orbits.end());
  }
  return out;
}

std::vector<Rational> fixed_points_of_iterate(const PiecewiseMap& f, std::size_t n,
                                              std::uint64_t budget) {
  auto branches = monotone_branches(f, n, budget);
  std::vector<Rational> pts;
  for (const auto& mb : branches) {
    if (mb.slope == 1) continue;
    Rational x = mb.intercept / (Rational(1) - mb.slope);
    if (mb.domain.contains(x)) pts.push_back(x);
  }
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return pts;
}

std::optional<Rational> minimax_start(const PiecewiseMap& f, const PeriodicOrbit& orbit,
                                      const Rational& C) {
  const std::size_t n = orbit.period;
  if (orbit.multiplier_magnitude() > C) throw MapError("minimax_start: |Df^n| exceeds C");
  for (std::size_t r = 0; r < n; ++r) {
    const Rational& q = orbit.points[r];
    auto partials = chain_partials(f, q, n);
    bool ok = true;
    for (const auto& p : partials) {
      if (p.liminf_magnitude() > C) {
        ok = false;
        break;
      }
    }
    if (ok) return q;
  }
  return std::nullopt;  // existence is guaranteed for feasible C; none = inconsistency
}

}  // namespace imdyn
