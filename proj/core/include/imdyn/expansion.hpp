#pragma once

#include "imdyn/interval.hpp"
#include "imdyn/orbit.hpp"

#include <optional>
#include <variant>
#include <vector>

namespace imdyn {

struct KnRow {
  std::size_t n = 0;
  std::optional<Rational> K_n;  // absent when no minimal-period-n orbit exists
  std::size_t orbit_count = 0;
  BranchWord attaining_word;
};

struct KnTable {
  std::vector<KnRow> rows;
};

struct ExpansionCertificate {
  std::size_t N = 0;
  Rational min_expansion;  // exact min of |Df^N| over realized words, > 1
  BranchWord witness_word;
};

struct ExpansionRefusal {
  std::size_t n_limit = 0;
  Rational min_at_limit;
  BranchWord worst_word;  // witness at the limit
};

using ExpansionResult = std::variant<ExpansionCertificate, ExpansionRefusal>;

struct AvoidanceSet {
  IntervalSet avoided;                   // the open set U (stored by closure parts)
  std::vector<IntervalSet> gammas;       // gammas[k] = Gamma_k(U), k = 0..n
  std::vector<std::optional<Rational>> min_deriv_per_k;  // min |Df^k| over Gamma_k; k >= 1
};

struct Basin {
  PeriodicOrbit attractor;
  std::vector<Interval> intervals;  // one maximal interval per orbit point
};

struct BasinSet {
  std::size_t period_bound = 0;  // search bound, reported alongside results
  std::vector<Basin> basins;

  IntervalSet as_set() const;
};

struct ManeGrowth {
  std::vector<std::optional<Rational>> min_per_n;  // index n = 1..n_max; nullopt = Gamma_n empty
  double fit_C = 0;
  double fit_lambda = 0;
  bool certified = false;
  std::size_t attractor_period_bound = 0;
};

struct HyperbolicCertificate {
  std::size_t N = 0;
  double lambda_prime = 0;  // lambda^{1/N}
  double C = 0;             // the tighter constant actually certified
  double conservative_C = 0;  // m^N / lambda fallback
};

struct HyperbolicSample {
  Rational point;
  std::size_t n_x = 0;
};

KnTable kn_table(const PiecewiseMap& f, std::size_t n_max,
                 std::uint64_t budget = (1ull << 22));

/// Smallest N <= n_limit with min over realized length-N words of the
/// composed |slope| strictly above 1; refusal carries the worst word.
ExpansionResult expansion_N(const PiecewiseMap& f, std::size_t n_limit,
                            std::uint64_t budget = (1ull << 22));

/// Gamma_n(U): points whose first n+1 iterates avoid the open set U.
/// Exact backward refinement on closed interval unions.
AvoidanceSet gamma_n(const PiecewiseMap& f, const IntervalSet& U, std::size_t n,
                     std::uint64_t budget = (1ull << 22));

/// Exact min of |Df^k| over a closed interval union (liminf convention:
/// every realized word meeting the set contributes).
std::optional<Rational> min_abs_deriv_over(const PiecewiseMap& f, const IntervalSet& S,
                                           std::size_t k, std::uint64_t budget = (1ull << 22));

/// Immediate basins of all attracting periodic orbits up to period_bound.
BasinSet immediate_basins(const PiecewiseMap& f, std::size_t period_bound,
                          std::uint64_t budget = (1ull << 22));

/// Min |Df^n| over Gamma_n(U ∪ B_0) for n <= n_max, with a least-squares
/// fit of ln(min) vs n over the upper half of the horizon. Throws when a
/// non-hyperbolic periodic orbit lives in I \ U (up to period_bound).
ManeGrowth mane_growth(const PiecewiseMap& f, const IntervalSet& U, std::size_t n_max,
                       std::size_t period_bound = 6, std::uint64_t budget = (1ull << 22));

/// Uniform-hyperbolicity constants from pointwise expansion samples:
/// every sample must satisfy |Df^{n_x}(x)| >= lambda > 1 (verified
/// exactly); m is the min of |Df| over the domain.
HyperbolicCertificate hyperbolic_certificate(const PiecewiseMap& f,
                                             const std::vector<HyperbolicSample>& samples,
                                             const Rational& lambda, const Rational& m);

}  // namespace imdyn
