#pragma once

#include "imdyn/interval.hpp"
#include "imdyn/rational.hpp"

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace imdyn {

struct MapError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Sealed extension interface for non-affine branches: point evaluator,
/// derivative evaluator, and verified regularity data. The exact
/// (certificate) paths are affine-only; smooth branches participate in
/// float-mode evaluation and in the distortion bounds that consume the
/// supplied constants.
struct SmoothBranch {
  std::function<double(double)> value;
  std::function<double(double)> deriv;
  double abs_deriv_lo = 0.0;       // 0 < lo <= |Df| on the branch
  double abs_deriv_hi = 0.0;       // |Df| <= hi on the branch
  double log_deriv_lipschitz = 0;  // Lipschitz constant of ln|Df| on the branch
};

struct Branch {
  // affine: x -> slope*x + intercept; smooth != nullptr overrides.
  Rational slope;
  Rational intercept;
  std::shared_ptr<const SmoothBranch> smooth;

  bool is_affine() const { return smooth == nullptr; }
  Rational value_at(const Rational& x) const;   // affine only
  Rational invert(const Rational& y) const;     // affine only
  double value_at_d(double x) const;
  double deriv_at_d(double x) const;
};

enum class Side { left, right };

/// Continuous piecewise monotone self-map of a compact interval.
/// Immutable after construction; construction validates every invariant
/// (continuity at breakpoints, image inside domain, nonzero derivative).
class PiecewiseMap {
 public:
  /// nodes = b_0 < b_1 < ... < b_L (domain endpoints included).
  /// branches[i] lives on [b_i, b_{i+1}].
  PiecewiseMap(std::vector<Rational> nodes, std::vector<Branch> branches);

  Interval domain() const { return {nodes_.front(), nodes_.back()}; }
  const std::vector<Rational>& nodes() const { return nodes_; }
  std::size_t branch_count() const { return branches_.size(); }
  const Branch& branch(std::size_t i) const { return branches_.at(i); }
  Interval branch_interval(std::size_t i) const {
    return {nodes_.at(i), nodes_.at(i + 1)};
  }
  /// Interior breakpoints where adjacent branch orientations flip.
  const std::vector<Rational>& turning_points() const { return turning_points_; }
  bool all_affine() const { return all_affine_; }

  /// Index of the branch whose closed interval contains x, preferring the
  /// branch on the requested side at breakpoints.
  std::size_t branch_index(const Rational& x, Side side = Side::right) const;

 private:
  std::vector<Rational> nodes_;
  std::vector<Branch> branches_;
  std::vector<Rational> turning_points_;
  bool all_affine_ = true;
};

struct ClassReport {
  bool in_E = false;
  bool in_D = false;
  bool in_C = false;
  Rational deriv_bound_C;    // C with 1/C <= |Df| <= C (affine: exact)
  double var_log_deriv = 0;  // K = Var(ln|Df|)
  Rational var_exp;          // e^K, exact for affine maps
  int jump_count_L = 0;      // points where |Df| jumps
  double max_jump_M = 0;     // max jump of ln|Df|
  Rational max_jump_exp;     // e^M, exact for affine maps
  std::optional<double> lipschitz_K;  // ln|Df| branch-wise Lipschitz constant
};

using BranchWord = std::vector<std::uint32_t>;

std::string word_to_string(const BranchWord& w);

/// One monotone branch of f^n addressed by its branch word.
/// For affine maps f^n(x) = slope*x + intercept on `domain`, exactly.
struct MonotoneBranch {
  BranchWord word;
  Interval domain;
  Rational slope;
  Rational intercept;
};

/// Parses the line-oriented map-definition format:
///   domain <lo> <hi>
///   breakpoints <b_1> ... <b_{L-1}>
///   branch <i> affine slope=<s> intercept=<t>
/// '#' starts a comment; numeric literals are decimals or p/q rationals.
PiecewiseMap parse_map(const std::string& text);

Rational eval(const PiecewiseMap& f, const Rational& x);
double eval_d(const PiecewiseMap& f, double x);

/// One-sided derivative at x (affine path, exact).
Rational deriv(const PiecewiseMap& f, const Rational& x, Side side);

/// The local involution at turning point c: tau(y) != y, f(tau(y)) = f(y),
/// tau(c) = c. Throws when f(y) is not attained by the opposite branch.
Rational tau(const PiecewiseMap& f, const Rational& c, const Rational& y);

/// Maximal closed symmetric neighborhood of c on which tau is defined.
Interval tau_domain(const PiecewiseMap& f, const Rational& c);

ClassReport classify(const PiecewiseMap& f);

/// Maximal domain realizing the branch word, by backward interval
/// intersection. nullopt iff no point realizes the word. Degenerate
/// (single-point) domains are realized words.
std::optional<MonotoneBranch> compose_branch(const PiecewiseMap& f, const BranchWord& w);

/// All realized monotone branches of f^n, in word lexicographic order.
/// Throws MapError when branch_count^n exceeds `budget`.
std::vector<MonotoneBranch> monotone_branches(const PiecewiseMap& f, std::size_t n,
                                              std::uint64_t budget = (1ull << 22));

/// Monotone pieces of f^n restricted to `within`: the realized words whose
/// domains meet `within`, with domains clipped to it.
std::vector<MonotoneBranch> monotone_pieces(const PiecewiseMap& f, std::size_t n,
                                            const Interval& within,
                                            std::uint64_t budget = (1ull << 22));

/// Itinerary word of x for n steps (branch containing each iterate;
/// lower index preferred at breakpoints).
BranchWord itinerary(const PiecewiseMap& f, const Rational& x, std::size_t n);

/// Exact image f(J) (an interval, f continuous).
Interval image_of_interval(const PiecewiseMap& f, const Interval& J);

/// Exact preimage f^{-1}(S) as a closed interval union.
IntervalSet preimage(const PiecewiseMap& f, const IntervalSet& S);

}  // namespace imdyn
