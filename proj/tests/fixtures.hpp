#pragma once

#include "imdyn/map_gen.hpp"
#include "imdyn/map_model.hpp"

namespace fixtures {

using imdyn::PiecewiseMap;
using imdyn::Rational;

inline PiecewiseMap tent2() { return imdyn::tent(Rational(2)); }
inline PiecewiseMap tent13() { return imdyn::tent(Rational(13) / 10); }
inline PiecewiseMap tent11() { return imdyn::tent(Rational(11) / 10); }
inline PiecewiseMap skew13() { return imdyn::skew_tent(Rational(1) / 3); }

/// Repelling fixed point at 0, attracting fixed point at 2/3.
inline PiecewiseMap mixed() {
  return imdyn::parse_map(
      "domain 0 1\n"
      "breakpoints 1/2\n"
      "branch 0 affine slope=3/2 intercept=0\n"
      "branch 1 affine slope=-1/2 intercept=1\n");
}

}  // namespace fixtures
