#pragma once

#include "imdyn/map_model.hpp"

#include <cstdint>

namespace imdyn {

/// Random continuous piecewise affine self-map of [0,1] with 2..max_branches
/// branches, rational breakpoints and node values, and no zero slopes.
/// Deterministic per seed.
PiecewiseMap random_affine_map(std::uint64_t seed, int max_branches = 4);

/// Random full-branch map (each branch onto [0,1], alternating
/// orientation): every slope magnitude strictly exceeds 1.
PiecewiseMap random_expanding_map(std::uint64_t seed, int max_branches = 4);

/// Full skew tent: x/b up, (1-x)/(1-b) down, both branches onto [0,1].
PiecewiseMap skew_tent(const Rational& b);

/// Symmetric tent of slope s <= 2 anchored at 0: s*x and s*(1-x).
PiecewiseMap tent(const Rational& s);

}  // namespace imdyn
