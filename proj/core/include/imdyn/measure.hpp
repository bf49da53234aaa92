#pragma once

#include "imdyn/expansion.hpp"
#include "imdyn/map_model.hpp"

#include <optional>
#include <string>
#include <vector>

namespace imdyn {

/// Open interval U_x = (x, tau(x)) around the turning point c.
struct SymmetricInterval {
  Rational x;
  Rational c;
  Interval U;  // endpoints of the open interval, ordered; degenerate when x == c
  bool degenerate() const { return U.is_point(); }
};

SymmetricInterval symmetric_interval(const PiecewiseMap& f, const Rational& c,
                                     const Rational& x);

enum class NiceStatus { nice, not_nice, unknown_at_horizon };

struct NiceResult {
  NiceStatus status = NiceStatus::unknown_at_horizon;
  std::optional<std::size_t> witness;  // first k >= 1 with f^k(x) in U_x
  std::size_t horizon = 0;
};

/// Semi-decision: `nice` only when the orbit of x closes up (eventual
/// periodicity) with every point verified outside U_x.
NiceResult nice_test(const PiecewiseMap& f, const Rational& c, const Rational& x,
                     std::size_t horizon);

struct ReturnComponent {
  Interval comp;       // closure of a constant-transfer-time component
  std::size_t k = 0;   // transfer time, 1 <= k <= horizon
};

struct ReturnStructure {
  SymmetricInterval base;
  std::vector<ReturnComponent> components;  // sorted by (comp.lo, k)
  IntervalSet unresolved;  // no entry into U within the horizon
  std::size_t horizon = 0;
};

/// Exact backward refinement of the transfer-time partition. Points of
/// U itself are included with their genuine first-return time.
ReturnStructure first_return(const PiecewiseMap& f, const SymmetricInterval& base,
                             std::size_t horizon);

/// x = psi(z): the symmetric interval around c with f(U_x) = S_z, where
/// S_z is the first-return component of U_z containing f(c).
SymmetricInterval psi(const PiecewiseMap& f, const Rational& c, const Rational& z,
                      std::size_t horizon);

/// Closest-return times n(0) < n(1) < ...: each later return lands inside
/// the symmetric interval of the previous closest point. Throws when the
/// orbit misses the tau-neighborhood of c within the horizon.
std::vector<std::size_t> closest_returns(const PiecewiseMap& f, const Rational& c,
                                         const Rational& x, std::size_t count,
                                         std::size_t horizon);

enum class VkEndpointTag { maps_to_self, maps_to_tau, region_boundary, other };

struct VkComponent {
  std::size_t k = 0;
  Interval T;  // closure of the component
  VkEndpointTag lo_tag = VkEndpointTag::other;
  VkEndpointTag hi_tag = VkEndpointTag::other;
};

/// Components of V_k = {y in W : f^i(y) not in (y, tau(y)) for 0 < i < k,
/// f^k(y) in (y, tau(y))}, by exact cell subdivision. W must be inside
/// the tau-domain of c.
std::vector<VkComponent> vk_components(const PiecewiseMap& f, const Rational& c,
                                       const Interval& W, std::size_t k);

struct OmegaApprox {
  Rational seed;
  std::size_t burn = 0;
  std::size_t steps = 0;
  struct Row {
    double eps = 0;
    double cover_length = 0;
    std::size_t components = 0;
  };
  std::vector<Row> rows;  // one per eps, in schedule order
};

/// Float-mode tail of the seed orbit covered by merged eps-balls; the
/// cover length is an upper-bound proxy for |omega(seed)|, never a claim.
OmegaApprox omega_approx(const PiecewiseMap& f, const Rational& seed, std::size_t burn,
                         std::size_t steps, const std::vector<double>& eps_schedule);

struct GapCheck {
  bool pass = false;
  std::string reason;  // empty on pass
};

/// The three checkable density-gap hypotheses at a finite horizon:
/// (a) the boundary of Q is nice, (b) the orbit tail of c meets Q only
/// inside P, (c) |Q|/|P| >= lambda exactly.
GapCheck density_gap_check(const PiecewiseMap& f, const Rational& c,
                           const SymmetricInterval& P, const SymmetricInterval& Q,
                           const Rational& lambda, std::size_t horizon);

struct UlamDensity {
  std::size_t requested_bins = 0;
  std::vector<Rational> edges;   // actual bin edges (>= requested + 1)
  std::vector<double> mass;      // stationary masses, sum 1
  std::vector<double> density;   // mass / width
  double invariance_residual = 0;  // L1 of vP - v at the final iterate
  double step_residual = 0;        // L1 of the last power-iteration step
  std::size_t iterations = 0;
  bool converged = false;
};

/// Ulam discretization of the transfer operator with an exact rational
/// matrix (rows sum to 1 exactly); stationary vector by power iteration.
/// The expansion certificate is a precondition: no certificate, no call.
UlamDensity ulam_acip(const PiecewiseMap& f, std::size_t m,
                      const ExpansionCertificate& certificate);

}  // namespace imdyn
