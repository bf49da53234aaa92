#pragma once

#include "imdyn/map_model.hpp"

#include <optional>
#include <vector>

namespace imdyn {

/// Finite orbit piece x, f(x), ..., f^n(x) with per-step one-sided slopes.
struct OrbitSegment {
  Rational start;
  std::vector<Rational> points;  // n+1 entries
  std::vector<std::pair<Rational, Rational>> one_sided_slopes;  // (left, right) per step
};

/// Both coherent one-sided chain products of Df^n at x. The reported
/// magnitude follows the liminf convention: the minimum of the two
/// one-sided magnitudes.
struct DerivativePair {
  Rational left;   // lim from the left
  Rational right;  // lim from the right
  Rational liminf_magnitude() const {
    return std::min(abs(left), abs(right));
  }
};

enum class Hyperbolicity { repelling, attracting, non_hyperbolic };

const char* to_string(Hyperbolicity h);

struct PeriodicOrbit {
  std::vector<Rational> points;  // cyclic, points[0] is the base (minimum)
  std::size_t period = 0;        // minimal
  DerivativePair multiplier;     // Df^period at the base point
  Hyperbolicity hyperbolicity = Hyperbolicity::non_hyperbolic;
  BranchWord word;               // length-period word realizing the orbit

  Rational multiplier_magnitude() const { return multiplier.liminf_magnitude(); }
};

OrbitSegment iterate(const PiecewiseMap& f, const Rational& x, std::size_t n);

DerivativePair orbit_derivative(const PiecewiseMap& f, const Rational& x, std::size_t n);

/// Every periodic orbit of minimal period exactly n, via fixed points of
/// the composed monotone branches. Complete for affine maps; deduplicated
/// over cyclic rotations, sorted by word. Orbits whose composed branch is
/// the identity (a continuum of fixed points) are skipped.
std::vector<PeriodicOrbit> periodic_orbits(const PiecewiseMap& f, std::size_t n,
                                           std::uint64_t budget = (1ull << 22));

/// All minimal periods 1..n_max in one pass.
std::vector<PeriodicOrbit> periodic_orbits_up_to(const PiecewiseMap& f, std::size_t n_max,
                                                 std::uint64_t budget = (1ull << 22));

/// Distinct solutions of f^n(x) = x (all periods dividing n).
std::vector<Rational> fixed_points_of_iterate(const PiecewiseMap& f, std::size_t n,
                                              std::uint64_t budget = (1ull << 22));

Hyperbolicity classify_periodic(const DerivativePair& multiplier);

/// A cyclic starting point q on the orbit with |Df^j(q)| <= C for all
/// 1 <= j <= period (liminf convention), by brute force over rotations.
/// Precondition: the orbit multiplier magnitude is <= C.
std::optional<Rational> minimax_start(const PiecewiseMap& f, const PeriodicOrbit& orbit,
                                      const Rational& C);

}  // namespace imdyn
