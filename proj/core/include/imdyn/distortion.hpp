#pragma once

#include "imdyn/map_model.hpp"

#include <optional>
#include <vector>

namespace imdyn {

struct DistortionReport {
  Interval J;
  std::size_t n = 0;
  Rational empirical;           // sup |Df^n(x)| / |Df^n(y)| over J (exact, affine)
  std::size_t S = 0;            // intersection multiplicity of {f^i(J)}_{i<n}
  Rational mult_bound;          // e^{S(K+LM)}
  bool mult_applies = false;    // class-c hypothesis holds
  std::optional<double> sum_bound;  // e^{K_lip Σ|f^i(J)|}; absent when J crosses a breakpoint
  Rational stepwise_bound;      // Π_i (max|Df| / min|Df| over f^i(J)); informational, sharper
  bool pass = false;
};

/// Max number of intervals of the collection covering one point,
/// by exact endpoint sweep.
std::size_t intersection_multiplicity(const std::vector<Interval>& intervals);

/// e^{S(K+LM)} = (e^K (e^M)^L)^S, exact for affine maps (the class
/// report carries e^K and e^M as rationals).
Rational bound_multiplicity(const ClassReport& report, std::size_t S);

/// e^{K_lip Σ_{i<n} |f^i(J)|}. Requires every iterate of J to stay within
/// one branch; throws MapError otherwise. Exactly 1 for affine maps.
double bound_sum(const PiecewiseMap& f, const Interval& J, std::size_t n);

/// Lower bound e^{-K tau} (tau/sigma - 1) on the relative extension
/// |T \ J| / |J|. Exact when K = 0; for K > 0 the exponential is rounded
/// down so the result remains a valid lower bound.
Rational extension_bound(const Rational& sigma, const Rational& tau, double K);

DistortionReport empirical_distortion(const PiecewiseMap& f, const Interval& J,
                                      std::size_t n, std::uint64_t budget = (1ull << 22));

}  // namespace imdyn
