#include "imdyn/expansion.hpp"

#include <algorithm>
#include <cmath>

namespace imdyn {

IntervalSet BasinSet::as_set() const {
  IntervalSet s;
  for (const auto& b : basins)
    for (const auto& iv : b.intervals) s.add(iv);
  return s;
}

KnTable kn_table(const PiecewiseMap& f, std::size_t n_max, std::uint64_t budget) {
  KnTable table;
  for (std::size_t n = 1; n <= n_max; ++n) {
    auto orbits = periodic_orbits(f, n, budget);
    KnRow row;
    row.n = n;
    row.orbit_count = orbits.size();
    for (const auto& orb : orbits) {
      Rational mag = orb.multiplier_magnitude();
      if (!row.K_n || mag < *row.K_n) {
        row.K_n = mag;
        row.attaining_word = orb.word;
      }
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

ExpansionResult expansion_N(const PiecewiseMap& f, std::size_t n_limit,
                            std::uint64_t budget) {
  if (n_limit == 0) throw MapError("expansion_N: n_limit must be positive");
  Rational last_min;
  BranchWord last_word;
  for (std::size_t N = 1; N <= n_limit; ++N) {
    auto branches = monotone_branches(f, N, budget);
    if (branches.empty()) throw MapError("expansion_N: no realized words");
    bool first = true;
    Rational mn;
    BranchWord wn;
    for (const auto& mb : branches) {
      Rational s = abs(mb.slope);
      if (first || s < mn) {
        mn = s;
        wn = mb.word;
        first = false;
      }
    }
    if (mn > 1) return ExpansionCertificate{N, mn, wn};
    last_min = mn;
    last_word = wn;
  }
  return ExpansionRefusal{n_limit, last_min, last_word};
}

std::optional<Rational> min_abs_deriv_over(const PiecewiseMap& f, const IntervalSet& S,
                                           std::size_t k, std::uint64_t budget) {
  std::optional<Rational> best;
  for (const auto& part : S.parts()) {
    auto pieces = monotone_pieces(f, k, part, budget);
    for (const auto& mb : pieces) {
      Rational s = abs(mb.slope);
      if (!best || s < *best) best = s;
    }
  }
  return best;
}

AvoidanceSet gamma_n(const PiecewiseMap& f, const IntervalSet& U, std::size_t n,
                     std::uint64_t budget) {
  AvoidanceSet out;
  out.avoided = U;
  IntervalSet allowed = IntervalSet(f.domain()).subtract_open(U);
  out.gammas.push_back(allowed);
  out.min_deriv_per_k.emplace_back();  // k = 0: no derivative product yet
  IntervalSet cur = allowed;
  for (std::size_t k = 1; k <= n; ++k) {
    cur = allowed.intersect(preimage(f, cur));
    out.gammas.push_back(cur);
    out.min_deriv_per_k.push_back(min_abs_deriv_over(f, cur, k, budget));
  }
  return out;
}

namespace {

/// g = f^q expressed as its monotone pieces; exact min/max of g over a
/// closed subinterval J of the domain.
std::pair<Rational, Rational> range_over(const std::vector<MonotoneBranch>& pieces,
                                         const Interval& J) {
  bool first = true;
  Rational lo, hi;
  auto consider = [&](const Rational& v) {
    if (first) {
      lo = hi = v;
      first = false;
    } else {
      if (v < lo) lo = v;
      if (v > hi) hi = v;
    }
  };
  for (const auto& mb : pieces) {
    Interval c = intersect(mb.domain, J);
    if (!c.valid()) continue;
    consider(mb.slope * c.lo + mb.intercept);
    consider(mb.slope * c.hi + mb.intercept);
  }
  return {lo, hi};
}

/// Maximal interval [l, r] around p on which every orbit of g = f^q
/// converges to p: g-invariant, and the interior contains no fixed point
/// of g other than p and no point of a genuine 2-cycle of g.
std::optional<Interval> basin_interval(const PiecewiseMap& f, const Rational& p,
                                       const std::vector<MonotoneBranch>& pieces,
                                       const std::vector<Rational>& fixed_q,
                                       const std::vector<Rational>& fixed_2q) {
  const Interval dom = f.domain();
  std::optional<Interval> best;

  auto passes = [&](const Rational& l, const Rational& r) -> bool {
    if (!(l <= p && p <= r) || l >= r) return false;
    if (l < dom.lo || r > dom.hi) return false;
    auto [glo, ghi] = range_over(pieces, {l, r});
    if (glo < l || ghi > r) return false;
    for (const auto& x : fixed_q)
      if (x != p && l < x && x < r) return false;
    for (const auto& x : fixed_2q) {
      if (!(l < x && x < r)) continue;
      // only genuine 2-cycles obstruct convergence
      bool is_fixed_q =
          std::binary_search(fixed_q.begin(), fixed_q.end(), x);
      if (!is_fixed_q) return false;
    }
    return true;
  };

  auto consider = [&](const Rational& l, const Rational& r) {
    if (passes(l, r) && (!best || r - l > best->length())) best = Interval{l, r};
  };

  // Endpoint conditions at maximality: each endpoint is either a domain
  // endpoint, a fixed point of g, or maps to the opposite endpoint.
  for (const auto& pl : pieces) {
    for (const auto& pr : pieces) {
      const Rational &a1 = pl.slope, &t1 = pl.intercept;
      const Rational &a2 = pr.slope, &t2 = pr.intercept;
      for (int cl = 0; cl < 2; ++cl) {
        for (int cr = 0; cr < 3; ++cr) {
          // cl: 0 -> g(l)=l, 1 -> g(l)=r   (l = dom.lo handled below)
          // cr: 0 -> g(r)=r, 1 -> g(r)=l, 2 -> r=dom.hi
          std::optional<Rational> l, r;
          if (cr == 2) {
            r = dom.hi;
            if (cl == 0) {
              if (a1 == 1) continue;
              l = t1 / (Rational(1) - a1);
            } else {
              if (a1 == 0) continue;
              l = (*r - t1) / a1;
            }
          } else {
            // Solve the 2x2 linear system for (l, r).
            //   cl==0: a1 l - l = -t1         cl==1: a1 l - r = -t1
            //   cr==0: a2 r - r = -t2         cr==1: a2 r - l = -t2
            Rational m11 = cl == 0 ? a1 - 1 : a1;
            Rational m12 = cl == 0 ? Rational(0) : Rational(-1);
            Rational m21 = cr == 0 ? Rational(0) : Rational(-1);
            Rational m22 = cr == 0 ? a2 - 1 : a2;
            Rational det = m11 * m22 - m12 * m21;
            if (det == 0) continue;
            Rational b1 = -t1, b2 = -t2;
            l = (b1 * m22 - m12 * b2) / det;
            r = (m11 * b2 - b1 * m21) / det;
          }
          if (!l || !r) continue;
          if (!pl.domain.contains(*l) || !pr.domain.contains(*r)) continue;
          consider(*l, *r);
        }
      }
    }
  }
  // l = dom.lo against every right piece and right condition.
  for (const auto& pr : pieces) {
    const Rational &a2 = pr.slope, &t2 = pr.intercept;
    Rational l = dom.lo;
    for (int cr = 0; cr < 3; ++cr) {
      std::optional<Rational> r;
      if (cr == 0) {
        if (a2 == 1) continue;
        r = t2 / (Rational(1) - a2);
      } else if (cr == 1) {
        if (a2 == 0) continue;
        r = (l - t2) / a2;
      } else {
        r = dom.hi;
      }
      if (!pr.domain.contains(*r)) continue;
      consider(l, *r);
    }
  }
  return best;
}

}  // namespace

BasinSet immediate_basins(const PiecewiseMap& f, std::size_t period_bound,
                          std::uint64_t budget) {
  BasinSet out;
  out.period_bound = period_bound;
  for (std::size_t q = 1; q <= period_bound; ++q) {
    auto orbits = periodic_orbits(f, q, budget);
    std::vector<MonotoneBranch> pieces;
    std::vector<Rational> fixed_q, fixed_2q;
    bool prepared = false;
    for (const auto& orb : orbits) {
      if (orb.hyperbolicity != Hyperbolicity::attracting) continue;
      if (!prepared) {
        pieces = monotone_branches(f, q, budget);
        fixed_q = fixed_points_of_iterate(f, q, budget);
        fixed_2q = fixed_points_of_iterate(f, 2 * q, budget);
        prepared = true;
      }
      Basin basin;
      basin.attractor = orb;
      bool complete = true;
      for (const auto& p : orb.points) {
        auto iv = basin_interval(f, p, pieces, fixed_q, fixed_2q);
        if (!iv) {
          complete = false;
          break;
        }
        basin.intervals.push_back(*iv);
      }
      if (complete) out.basins.push_back(std::move(basin));
    }
  }
  return out;
}

ManeGrowth mane_growth(const PiecewiseMap& f, const IntervalSet& U, std::size_t n_max,
                       std::size_t period_bound, std::uint64_t budget) {
  // Periodic orbits disjoint from U must be hyperbolic; attracting ones are
  // swallowed below by removing their immediate basins.
  for (std::size_t q = 1; q <= period_bound; ++q) {
    for (const auto& orb : periodic_orbits(f, q, budget)) {
      bool avoids_U = true;
      for (const auto& pt : orb.points) {
        for (const auto& part : U.parts())
          if (part.strictly_contains(pt)) avoids_U = false;
      }
      if (avoids_U && orb.hyperbolicity == Hyperbolicity::non_hyperbolic)
        throw MapError("mane_growth: non-hyperbolic periodic orbit outside the avoided set");
    }
  }

  BasinSet basins = immediate_basins(f, period_bound, budget);
  IntervalSet U_full = U.unite(basins.as_set());

  ManeGrowth out;
  out.attractor_period_bound = period_bound;
  IntervalSet allowed = IntervalSet(f.domain()).subtract_open(U_full);
  IntervalSet cur = allowed;
  for (std::size_t n = 1; n <= n_max; ++n) {
    cur = allowed.intersect(preimage(f, cur));
    out.min_per_n.push_back(min_abs_deriv_over(f, cur, n, budget));
  }

  // Least-squares fit of ln(min) over the upper half of the horizon.
  std::size_t lo = n_max / 2 + 1;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::size_t cnt = 0;
  for (std::size_t n = lo; n <= n_max; ++n) {
    const auto& v = out.min_per_n[n - 1];
    if (!v) continue;
    double x = static_cast<double>(n), y = std::log(to_double(*v));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++cnt;
  }
  if (cnt >= 2) {
    double denom = static_cast<double>(cnt) * sxx - sx * sx;
    double slope = (static_cast<double>(cnt) * sxy - sx * sy) / denom;
    double icept = (sy - slope * sx) / static_cast<double>(cnt);
    out.fit_lambda = std::exp(slope);
    out.fit_C = std::exp(icept);
  }

  bool some_above_one = false, increasing = true;
  std::optional<Rational> prev;
  for (std::size_t n = lo; n <= n_max; ++n) {
    const auto& v = out.min_per_n[n - 1];
    if (!v) continue;
    if (*v > 1) some_above_one = true;
    if (prev && !(*v > *prev)) increasing = false;
    prev = *v;
  }
  out.certified = some_above_one && increasing && prev.has_value();
  return out;
}

HyperbolicCertificate hyperbolic_certificate(const PiecewiseMap& f,
                                             const std::vector<HyperbolicSample>& samples,
                                             const Rational& lambda, const Rational& m) {
  if (!(lambda > 1)) throw MapError("hyperbolic_certificate: lambda must exceed 1");
  if (samples.empty()) throw MapError("hyperbolic_certificate: no samples");
  std::size_t N = 0;
  for (const auto& s : samples) {
    if (s.n_x == 0) throw MapError("hyperbolic_certificate: n_x must be positive");
    Rational mag = orbit_derivative(f, s.point, s.n_x).liminf_magnitude();
    if (mag < lambda)
      throw MapError("hyperbolic_certificate: sample fails |Df^{n_x}| >= lambda");
    N = std::max(N, s.n_x);
  }
  double lam = to_double(lambda), md = to_double(m);
  HyperbolicCertificate cert;
  cert.N = N;
  cert.lambda_prime = std::pow(lam, 1.0 / static_cast<double>(N));
  cert.C = md < 1 ? std::pow(md, static_cast<double>(N)) : 1.0 / lam;
  cert.conservative_C = std::pow(md, static_cast<double>(N)) / lam;
  return cert;
}

}  // namespace imdyn
