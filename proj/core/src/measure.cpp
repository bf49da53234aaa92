#include "imdyn/measure.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

namespace imdyn {

SymmetricInterval symmetric_interval(const PiecewiseMap& f, const Rational& c,
                                     const Rational& x) {
  Rational t = tau(f, c, x);
  SymmetricInterval s;
  s.x = x;
  s.c = c;
  s.U = {std::min(x, t), std::max(x, t)};
  if (!s.U.contains(c)) throw MapError("symmetric_interval: c outside (x, tau(x))");
  return s;
}

NiceResult nice_test(const PiecewiseMap& f, const Rational& c, const Rational& x,
                     std::size_t horizon) {
  auto s = symmetric_interval(f, c, x);
  NiceResult res;
  res.horizon = horizon;
  std::set<Rational> seen{x};
  Rational y = x;
  for (std::size_t k = 1; k <= horizon; ++k) {
    y = eval(f, y);
    if (s.U.strictly_contains(y)) {
      res.status = NiceStatus::not_nice;
      res.witness = k;
      return res;
    }
    if (!seen.insert(y).second) {
      res.status = NiceStatus::nice;  // orbit closed up, fully verified
      return res;
    }
  }
  res.status = NiceStatus::unknown_at_horizon;
  return res;
}

ReturnStructure first_return(const PiecewiseMap& f, const SymmetricInterval& base,
                             std::size_t horizon) {
  ReturnStructure rs;
  rs.base = base;
  rs.horizon = horizon;
  if (base.degenerate()) {
    rs.unresolved = IntervalSet(f.domain());
    return rs;
  }

  const IntervalSet U(base.U);
  IntervalSet resolved;
  // level[k] = closure of {y : f^i(y) outside open U for 1 <= i < k,
  //                        f^k(y) in closed U}
  IntervalSet level = preimage(f, U);
  for (std::size_t k = 1; k <= horizon; ++k) {
    for (const auto& part : level.parts())
      if (!part.is_point()) rs.components.push_back({part, k});
    resolved = resolved.unite(level);
    if (k < horizon) level = preimage(f, level.subtract_open(U));
  }
  std::sort(rs.components.begin(), rs.components.end(),
            [](const ReturnComponent& a, const ReturnComponent& b) {
              if (a.comp.lo != b.comp.lo) return a.comp.lo < b.comp.lo;
              if (a.comp.hi != b.comp.hi) return a.comp.hi < b.comp.hi;
              return a.k < b.k;
            });
  rs.unresolved = IntervalSet(f.domain()).subtract_open(resolved);
  return rs;
}

SymmetricInterval psi(const PiecewiseMap& f, const Rational& c, const Rational& z,
                      std::size_t horizon) {
  auto base = symmetric_interval(f, c, z);
  auto rs = first_return(f, base, horizon);
  const Rational fc = eval(f, c);

  const ReturnComponent* S = nullptr;
  for (const auto& comp : rs.components) {
    if (!comp.comp.contains(fc)) continue;
    if (!S || comp.comp.strictly_contains(fc)) S = &comp;
    if (comp.comp.strictly_contains(fc)) break;
  }
  if (!S) throw MapError("psi: S_z unresolved at horizon");

  // Pull S_z back through the fold at c: the far endpoint of S_z from
  // f(c)'s extremal side determines x.
  std::size_t bl = f.branch_index(c, Side::left);
  bool c_is_max = f.branch(bl).slope > 0;
  Rational target = c_is_max ? S->comp.lo : S->comp.hi;
  Rational x = f.branch(bl).invert(target);
  if (!f.branch_interval(bl).contains(x))
    throw MapError("psi: pullback leaves the folding branch");
  return symmetric_interval(f, c, x);
}

std::vector<std::size_t> closest_returns(const PiecewiseMap& f, const Rational& c,
                                         const Rational& x, std::size_t count,
                                         std::size_t horizon) {
  const Interval neigh = tau_domain(f, c);
  std::vector<std::size_t> times;
  std::optional<Interval> current;  // open symmetric interval of the last return
  Rational y = x;
  for (std::size_t k = 0; k <= horizon && times.size() < count; ++k) {
    if (k > 0) y = eval(f, y);
    bool enters = !current ? neigh.contains(y) : current->strictly_contains(y);
    if (enters) {
      times.push_back(k);
      if (y == c) break;  // U_c is empty: sequence terminates
      current = symmetric_interval(f, c, y).U;
    }
  }
  if (times.empty())
    throw MapError("closest_returns: orbit misses the tau-neighborhood within horizon");
  return times;
}

namespace {

struct AffineFn {
  Rational a, b;
  Rational operator()(const Rational& y) const { return a * y + b; }
};

struct Cell {
  Interval dom;
  AffineFn g;  // current iterate f^i on the cell
};

/// Closure of {y in dom : h1(y) > 0 and h2(y) > 0} for linear h = p y + q;
/// nullopt when the open set is empty.
std::optional<Interval> strict_region(const Interval& dom, const AffineFn& h1,
                                      const AffineFn& h2) {
  Rational lo = dom.lo, hi = dom.hi;
  for (const AffineFn* h : {&h1, &h2}) {
    const Rational p = h->a, q = h->b;
    if (p == 0) {
      if (q <= 0) return std::nullopt;
    } else if (p > 0) {
      lo = std::max(lo, Rational(-q / p));
    } else {
      hi = std::min(hi, Rational(-q / p));
    }
  }
  if (!(lo < hi)) return std::nullopt;
  Rational mid = (lo + hi) / 2;
  if (!(h1.a * mid + h1.b > 0) || !(h2.a * mid + h2.b > 0)) return std::nullopt;
  return Interval{lo, hi};
}

}  // namespace

std::vector<VkComponent> vk_components(const PiecewiseMap& f, const Rational& c,
                                       const Interval& W, std::size_t k) {
  if (k == 0) throw MapError("vk_components: k must be positive");
  const Interval neigh = tau_domain(f, c);
  if (W.lo < neigh.lo || W.hi > neigh.hi)
    throw MapError("vk_components: W leaves the tau-domain of c");

  const std::size_t bl = f.branch_index(c, Side::left);
  const std::size_t br = f.branch_index(c, Side::right);
  const Branch& L = f.branch(bl);
  const Branch& R = f.branch(br);
  // tau as an affine function per side of c.
  const AffineFn tau_left{L.slope / R.slope, (L.intercept - R.intercept) / R.slope};
  const AffineFn tau_right{R.slope / L.slope, (R.intercept - L.intercept) / L.slope};

  std::vector<std::pair<Cell, bool>> cells;  // (cell, is_left_of_c)
  const AffineFn ident{Rational(1), Rational(0)};
  if (W.lo < c) cells.push_back({{{W.lo, std::min(c, W.hi)}, ident}, true});
  if (W.hi > c) cells.push_back({{{std::max(c, W.lo), W.hi}, ident}, false});

  for (std::size_t i = 1; i <= k; ++i) {
    // Advance g one step: split cells where g crosses a node of f.
    std::vector<std::pair<Cell, bool>> stepped;
    for (auto& [cell, left] : cells) {
      std::vector<Rational> cuts{cell.dom.lo, cell.dom.hi};
      for (std::size_t ni = 1; ni + 1 < f.nodes().size(); ++ni) {
        if (cell.g.a == 0) continue;
        Rational y = (f.nodes()[ni] - cell.g.b) / cell.g.a;
        if (cell.dom.strictly_contains(y)) cuts.push_back(y);
      }
      std::sort(cuts.begin(), cuts.end());
      for (std::size_t ci = 0; ci + 1 < cuts.size(); ++ci) {
        Interval sub{cuts[ci], cuts[ci + 1]};
        if (sub.is_point()) continue;
        Rational mid = (sub.lo + sub.hi) / 2;
        const Branch& b = f.branch(f.branch_index(cell.g(mid)));
        AffineFn g2{b.slope * cell.g.a, b.slope * cell.g.b + b.intercept};
        stepped.push_back({{sub, g2}, left});
      }
    }

    // Apply the step-i condition: g(y) in (y, tau(y)) is two strict
    // linear inequalities once the side of c is fixed.
    std::vector<std::pair<Cell, bool>> next;
    for (auto& [cell, left] : stepped) {
      const AffineFn& tf = left ? tau_left : tau_right;
      // left of c:  y < g(y) < tau(y);  right of c:  tau(y) < g(y) < y.
      AffineFn h1 = left ? AffineFn{cell.g.a - 1, cell.g.b}
                         : AffineFn{Rational(1) - cell.g.a, -cell.g.b};
      AffineFn h2 = left ? AffineFn{tf.a - cell.g.a, tf.b - cell.g.b}
                         : AffineFn{cell.g.a - tf.a, cell.g.b - tf.b};
      auto region = strict_region(cell.dom, h1, h2);
      if (i == k) {
        if (region) next.push_back({{*region, cell.g}, left});
      } else if (!region) {
        next.push_back({cell, left});
      } else {
        Interval a{cell.dom.lo, region->lo}, b{region->hi, cell.dom.hi};
        if (a.valid() && !a.is_point()) next.push_back({{a, cell.g}, left});
        if (b.valid() && !b.is_point()) next.push_back({{b, cell.g}, left});
      }
    }
    cells = std::move(next);
  }

  IntervalSet merged;
  for (auto& [cell, left] : cells) merged.add(cell.dom);

  std::vector<VkComponent> out;
  for (const auto& T : merged.parts()) {
    if (T.is_point()) continue;
    VkComponent comp;
    comp.k = k;
    comp.T = T;
    auto tag = [&](const Rational& a) {
      if (a == W.lo || a == W.hi) return VkEndpointTag::region_boundary;
      Rational fk = a;
      for (std::size_t i = 0; i < k; ++i) fk = eval(f, fk);
      if (fk == a) return VkEndpointTag::maps_to_self;
      try {
        if (fk == tau(f, c, a)) return VkEndpointTag::maps_to_tau;
      } catch (const MapError&) {
      }
      return VkEndpointTag::other;
    };
    comp.lo_tag = tag(T.lo);
    comp.hi_tag = tag(T.hi);
    out.push_back(std::move(comp));
  }
  return out;
}

OmegaApprox omega_approx(const PiecewiseMap& f, const Rational& seed, std::size_t burn,
                         std::size_t steps, const std::vector<double>& eps_schedule) {
  OmegaApprox res;
  res.seed = seed;
  res.burn = burn;
  res.steps = steps;

  double y = to_double(seed);
  for (std::size_t i = 0; i < burn; ++i) y = eval_d(f, y);
  std::vector<double> tail(steps);
  for (std::size_t i = 0; i < steps; ++i) {
    y = eval_d(f, y);
    tail[i] = y;
  }
  std::sort(tail.begin(), tail.end());

  for (double eps : eps_schedule) {
    OmegaApprox::Row row;
    row.eps = eps;
    double cur_lo = 0, cur_hi = 0;
    bool open = false;
    for (double p : tail) {
      if (!open) {
        cur_lo = p - eps;
        cur_hi = p + eps;
        open = true;
      } else if (p - eps <= cur_hi) {
        cur_hi = p + eps;
      } else {
        row.cover_length += cur_hi - cur_lo;
        row.components += 1;
        cur_lo = p - eps;
        cur_hi = p + eps;
      }
    }
    if (open) {
      row.cover_length += cur_hi - cur_lo;
      row.components += 1;
    }
    res.rows.push_back(row);
  }
  return res;
}

GapCheck density_gap_check(const PiecewiseMap& f, const Rational& c,
                           const SymmetricInterval& P, const SymmetricInterval& Q,
                           const Rational& lambda, std::size_t horizon) {
  if (P.U.lo < Q.U.lo || P.U.hi > Q.U.hi || P.U.is_point())
    throw MapError("density_gap_check: P must be inside Q and nondegenerate");

  GapCheck res;
  auto nice = nice_test(f, c, Q.x, horizon);
  if (nice.status == NiceStatus::not_nice) {
    res.reason = "boundary of Q not nice (witness step " + std::to_string(*nice.witness) + ")";
    return res;
  }
  if (nice.status == NiceStatus::unknown_at_horizon) {
    res.reason = "niceness of boundary of Q unknown at horizon";
    return res;
  }

  // Orbit-tail proxy for omega(c) ∩ Q ⊂ P over the second half of the run.
  Rational y = c;
  for (std::size_t s = 1; s <= horizon; ++s) {
    y = eval(f, y);
    if (s <= horizon / 2) continue;
    if (Q.U.strictly_contains(y) && !P.U.contains(y)) {
      res.reason = "orbit tail of c meets Q outside P at step " + std::to_string(s);
      return res;
    }
  }

  if (Q.U.length() < lambda * P.U.length()) {
    res.reason = "|Q|/|P| below lambda";
    return res;
  }
  res.pass = true;
  return res;
}

UlamDensity ulam_acip(const PiecewiseMap& f, std::size_t m,
                      const ExpansionCertificate& certificate) {
  if (m == 0) throw MapError("ulam_acip: need at least one bin");
  if (certificate.N == 0 || !(certificate.min_expansion > 1))
    throw MapError("ulam_acip: invalid expansion certificate");
  if (!f.all_affine()) throw MapError("ulam_acip: affine maps only");

  const Interval dom = f.domain();
  std::vector<Rational> edges;
  for (std::size_t i = 0; i <= m; ++i)
    edges.push_back(dom.lo + (dom.hi - dom.lo) * Rational(i) / Rational(m));
  for (std::size_t ni = 1; ni + 1 < f.nodes().size(); ++ni) {
    const Rational& v = f.nodes()[ni];
    edges.push_back(v);
    // order-1 preimages of breakpoints, per branch
    for (std::size_t b = 0; b < f.branch_count(); ++b) {
      Interval bi = f.branch_interval(b);
      Rational y = f.branch(b).invert(v);
      if (bi.contains(y)) edges.push_back(y);
    }
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

  const std::size_t n = edges.size() - 1;
  std::vector<Rational> width(n);
  for (std::size_t i = 0; i < n; ++i) width[i] = edges[i + 1] - edges[i];

  // Exact transfer matrix, sparse by row; breakpoints are edges, so every
  // bin sits inside one branch and its image is one interval.
  std::vector<std::vector<std::pair<std::size_t, double>>> rows(n);
  for (std::size_t i = 0; i < n; ++i) {
    Rational mid = (edges[i] + edges[i + 1]) / 2;
    const Branch& b = f.branch(f.branch_index(mid));
    Rational v1 = b.value_at(edges[i]), v2 = b.value_at(edges[i + 1]);
    Interval img{std::min(v1, v2), std::max(v1, v2)};
    Rational row_sum = 0;
    std::size_t j0 = static_cast<std::size_t>(
        std::upper_bound(edges.begin(), edges.end(), img.lo) - edges.begin());
    for (std::size_t j = j0 > 0 ? j0 - 1 : 0; j < n && edges[j] < img.hi; ++j) {
      Interval overlap = intersect(img, {edges[j], edges[j + 1]});
      if (!overlap.valid() || overlap.is_point()) continue;
      Rational p = overlap.length() / (abs(b.slope) * width[i]);
      row_sum += p;
      rows[i].emplace_back(j, to_double(p));
    }
    if (row_sum != 1) throw MapError("ulam_acip: transfer row does not sum to 1");
  }

  UlamDensity out;
  out.requested_bins = m;
  out.edges = edges;

  const double total = to_double(dom.length());
  std::vector<double> v(n), w(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = to_double(width[i]) / total;

  auto apply = [&](const std::vector<double>& src, std::vector<double>& dst) {
    std::fill(dst.begin(), dst.end(), 0.0);
    for (std::size_t i = 0; i < n; ++i)
      for (const auto& [j, p] : rows[i]) dst[j] += src[i] * p;
  };

  const std::size_t cap = 100000;
  double step = 0;
  std::size_t it = 0;
  for (; it < cap; ++it) {
    apply(v, w);
    double s = 0;
    for (double x : w) s += x;
    for (double& x : w) x /= s;
    step = 0;
    for (std::size_t i = 0; i < n; ++i) step += std::fabs(w[i] - v[i]);
    v.swap(w);
    if (step < 1e-13) {
      ++it;
      break;
    }
  }
  out.iterations = it;
  out.step_residual = step;
  out.converged = step < 1e-13;

  apply(v, w);
  double inv = 0;
  for (std::size_t i = 0; i < n; ++i) inv += std::fabs(w[i] - v[i]);
  out.invariance_residual = inv;

  out.mass = v;
  out.density.resize(n);
  for (std::size_t i = 0; i < n; ++i) out.density[i] = v[i] / to_double(width[i]);
  return out;
}

}  // namespace imdyn
