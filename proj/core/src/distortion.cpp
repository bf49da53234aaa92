#include "imdyn/distortion.hpp"

#include <algorithm>
#include <cmath>

namespace imdyn {

std::size_t intersection_multiplicity(const std::vector<Interval>& intervals) {
  if (intervals.empty()) throw MapError("intersection_multiplicity: empty collection");
  // Endpoint sweep over closed intervals: at each coordinate apply all
  // openings before any closing, so touching intervals both count.
  std::vector<std::pair<Rational, int>> events;
  events.reserve(2 * intervals.size());
  for (const auto& iv : intervals) {
    if (!iv.valid()) throw MapError("intersection_multiplicity: invalid interval");
    events.emplace_back(iv.lo, +1);
    events.emplace_back(iv.hi, -1);
  }
  std::sort(events.begin(), events.end(),
            [](const auto& a, const auto& b) {
              if (a.first != b.first) return a.first < b.first;
              return a.second > b.second;  // openings first
            });
  std::size_t cur = 0, best = 0;
  for (const auto& [x, d] : events) {
    if (d > 0)
      ++cur;
    else
      --cur;
    best = std::max(best, cur);
  }
  return best;
}

Rational bound_multiplicity(const ClassReport& report, std::size_t S) {
  if (!report.in_C) throw MapError("bound_multiplicity: map not in class c");
  Rational per_step = report.var_exp * pow_rational(report.max_jump_exp,
                                                    static_cast<long>(report.jump_count_L));
  return pow_rational(per_step, static_cast<long>(S));
}

double bound_sum(const PiecewiseMap& f, const Interval& J, std::size_t n) {
  auto rep = classify(f);
  if (!rep.in_D || !rep.lipschitz_K)
    throw MapError("bound_sum: map not in class D");
  const double K = *rep.lipschitz_K;

  // Walk the iterates in double; each must stay inside one branch.
  double lo = to_double(J.lo), hi = to_double(J.hi);
  std::vector<double> nodes;
  for (const auto& b : f.nodes()) nodes.push_back(to_double(b));
  double sum = 0;
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t bi = nodes.size();
    for (std::size_t b = 0; b + 1 < nodes.size(); ++b) {
      if (lo >= nodes[b] && hi <= nodes[b + 1]) {
        bi = b;
        break;
      }
    }
    if (bi == nodes.size())
      throw MapError("bound_sum: iterate " + std::to_string(i) + " crosses a breakpoint");
    sum += hi - lo;
    double a = f.branch(bi).value_at_d(lo), b = f.branch(bi).value_at_d(hi);
    lo = std::min(a, b);
    hi = std::max(a, b);
  }
  return std::exp(K * sum);
}

Rational extension_bound(const Rational& sigma, const Rational& tau, double K) {
  if (!(sigma > 0) || !(sigma < tau)) throw MapError("extension_bound: need 0 < sigma < tau");
  if (K < 0) throw MapError("extension_bound: K must be nonnegative");
  Rational ratio = tau / sigma - 1;
  if (K == 0) return ratio;
  double e = std::exp(-K * to_double(tau));
  // round the exponential down a few ulps: keep a valid lower bound
  e = std::nextafter(std::nextafter(e, 0.0), 0.0);
  return Rational(e) * ratio;
}

DistortionReport empirical_distortion(const PiecewiseMap& f, const Interval& J,
                                      std::size_t n, std::uint64_t budget) {
  DistortionReport rep;
  rep.J = J;
  rep.n = n;
  rep.empirical = 1;
  rep.stepwise_bound = 1;

  auto cls = classify(f);

  // Iterate collection and its multiplicity (exact for affine maps).
  std::vector<Interval> iterates;
  if (f.all_affine()) {
    Interval cur = J;
    for (std::size_t i = 0; i < n; ++i) {
      iterates.push_back(cur);
      cur = image_of_interval(f, cur);
    }
  }
  rep.S = iterates.empty() ? 0 : intersection_multiplicity(iterates);

  rep.mult_applies = f.all_affine() && cls.in_C;
  rep.mult_bound = rep.mult_applies ? bound_multiplicity(cls, rep.S) : Rational(1);

  try {
    rep.sum_bound = bound_sum(f, J, n);
  } catch (const MapError&) {
    rep.sum_bound = std::nullopt;
  }

  if (n > 0 && !J.is_point()) {
    if (f.all_affine()) {
      // |Df^n| is constant per monotone piece: exact sup ratio.
      auto pieces = monotone_pieces(f, n, J, budget);
      bool first = true;
      Rational mn, mx;
      for (const auto& mb : pieces) {
        if (mb.domain.is_point()) continue;
        Rational s = abs(mb.slope);
        if (first) {
          mn = mx = s;
          first = false;
        } else {
          mn = std::min(mn, s);
          mx = std::max(mx, s);
        }
      }
      if (!first) rep.empirical = mx / mn;

      // Informational per-step bound: product of max/min |Df| per iterate.
      for (const auto& iv : iterates) {
        bool f2 = true;
        Rational smin, smax;
        for (std::size_t b = 0; b < f.branch_count(); ++b) {
          Interval c = intersect(f.branch_interval(b), iv);
          if (!c.valid() || c.is_point()) continue;
          Rational s = abs(f.branch(b).slope);
          if (f2) {
            smin = smax = s;
            f2 = false;
          } else {
            smin = std::min(smin, s);
            smax = std::max(smax, s);
          }
        }
        if (!f2) rep.stepwise_bound *= smax / smin;
      }
    } else {
      // Smooth branches: sampled sup ratio of |Df^n| in double.
      const int grid = 2048;
      double lo = to_double(J.lo), hi = to_double(J.hi);
      double mn = 0, mx = 0;
      bool first = true;
      for (int i = 0; i <= grid; ++i) {
        double x = lo + (hi - lo) * i / grid;
        double prod = 1;
        for (std::size_t k = 0; k < n; ++k) {
          std::size_t b = f.branch_index(Rational(x));
          prod *= f.branch(b).deriv_at_d(x);
          x = f.branch(b).value_at_d(x);
        }
        double a = std::fabs(prod);
        if (first) {
          mn = mx = a;
          first = false;
        } else {
          mn = std::min(mn, a);
          mx = std::max(mx, a);
        }
      }
      if (mn > 0) rep.empirical = Rational(mx / mn);
    }
  }

  rep.pass = true;
  if (rep.mult_applies && rep.empirical > rep.mult_bound) rep.pass = false;
  if (rep.sum_bound && to_double(rep.empirical) > *rep.sum_bound * (1 + 1e-9))
    rep.pass = false;
  return rep;
}

}  // namespace imdyn
