#include "imdyn/map_model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace imdyn {

Rational Branch::value_at(const Rational& x) const {
  if (!is_affine()) throw MapError("exact evaluation requires an affine branch");
  return slope * x + intercept;
}

Rational Branch::invert(const Rational& y) const {
  if (!is_affine()) throw MapError("exact inversion requires an affine branch");
  return (y - intercept) / slope;
}

double Branch::value_at_d(double x) const {
  if (smooth) return smooth->value(x);
  return to_double(slope) * x + to_double(intercept);
}

double Branch::deriv_at_d(double x) const {
  if (smooth) return smooth->deriv(x);
  return to_double(slope);
}

PiecewiseMap::PiecewiseMap(std::vector<Rational> nodes, std::vector<Branch> branches)
    : nodes_(std::move(nodes)), branches_(std::move(branches)) {
  if (nodes_.size() < 2 || branches_.size() + 1 != nodes_.size())
    throw MapError("node/branch count mismatch");
  for (std::size_t i = 0; i + 1 < nodes_.size(); ++i)
    if (!(nodes_[i] < nodes_[i + 1])) throw MapError("breakpoints must increase strictly");

  for (const auto& b : branches_)
    if (b.smooth) all_affine_ = false;

  const Interval dom{nodes_.front(), nodes_.back()};
  for (std::size_t i = 0; i < branches_.size(); ++i) {
    const Branch& b = branches_[i];
    if (b.is_affine()) {
      if (b.slope == 0) throw MapError("zero slope");
      // Affine branch extremes sit at the nodes.
      if (!dom.contains(b.value_at(nodes_[i])) || !dom.contains(b.value_at(nodes_[i + 1])))
        throw MapError("image escapes domain");
    } else {
      if (!(b.smooth->abs_deriv_lo > 0) || !(b.smooth->abs_deriv_hi >= b.smooth->abs_deriv_lo))
        throw MapError("smooth branch needs 0 < lower <= upper derivative bounds");
      const double lo = to_double(nodes_[i]), hi = to_double(nodes_[i + 1]);
      const double dlo = to_double(dom.lo), dhi = to_double(dom.hi);
      const double eps = 1e-12 * (dhi - dlo);
      for (int k = 0; k <= 32; ++k) {
        double x = lo + (hi - lo) * k / 32.0;
        double v = b.smooth->value(x);
        if (v < dlo - eps || v > dhi + eps) throw MapError("image escapes domain (sampled)");
        double d = std::fabs(b.smooth->deriv(x));
        if (d < 0.5 * b.smooth->abs_deriv_lo || d > 2.0 * b.smooth->abs_deriv_hi)
          throw MapError("smooth derivative bound violated (sampled)");
      }
    }
  }

  // Continuity at interior breakpoints.
  for (std::size_t i = 1; i + 1 < nodes_.size(); ++i) {
    const Branch& l = branches_[i - 1];
    const Branch& r = branches_[i];
    if (l.is_affine() && r.is_affine()) {
      if (l.value_at(nodes_[i]) != r.value_at(nodes_[i]))
        throw MapError("branch endpoint mismatch at breakpoint " + to_string(nodes_[i]));
    } else {
      double x = to_double(nodes_[i]);
      if (std::fabs(l.value_at_d(x) - r.value_at_d(x)) > 1e-9)
        throw MapError("branch endpoint mismatch (sampled)");
    }
  }

  // Orientation flips mark turning points; matching orientations are
  // derivative-jump points only.
  for (std::size_t i = 1; i + 1 < nodes_.size(); ++i) {
    const Branch& l = branches_[i - 1];
    const Branch& r = branches_[i];
    int ol = l.is_affine() ? (l.slope > 0 ? 1 : -1)
                           : (l.smooth->deriv(to_double(nodes_[i])) > 0 ? 1 : -1);
    int orr = r.is_affine() ? (r.slope > 0 ? 1 : -1)
                            : (r.smooth->deriv(to_double(nodes_[i])) > 0 ? 1 : -1);
    if (ol != orr) turning_points_.push_back(nodes_[i]);
  }
}

std::size_t PiecewiseMap::branch_index(const Rational& x, Side side) const {
  if (!domain().contains(x)) throw MapError("point outside domain");
  // nodes_ is sorted; find the branch with x in its closed interval.
  auto it = std::upper_bound(nodes_.begin(), nodes_.end(), x);
  std::size_t idx = static_cast<std::size_t>(it - nodes_.begin());
  // idx = first node > x; branch candidates are idx-1 (right of node idx-1).
  std::size_t right_branch = std::min(idx == 0 ? 0 : idx - 1, branches_.size() - 1);
  if (side == Side::left && right_branch > 0 && nodes_[right_branch] == x)
    return right_branch - 1;
  return right_branch;
}

std::string word_to_string(const BranchWord& w) {
  bool wide = std::any_of(w.begin(), w.end(), [](std::uint32_t i) { return i > 9; });
  std::string s;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i && wide) s += '.';
    s += std::to_string(w[i]);
  }
  return s;
}

PiecewiseMap parse_map(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::optional<Rational> dom_lo, dom_hi;
  std::vector<Rational> interior;
  bool have_breakpoints = false;
  std::vector<Branch> branches;

  auto parse_num = [](const std::string& tok) {
    auto v = parse_rational(tok);
    if (!v) throw MapError("malformed numeric literal: " + tok);
    return *v;
  };

  while (std::getline(in, line)) {
    if (auto pos = line.find('#'); pos != std::string::npos) line.erase(pos);
    std::istringstream ls(line);
    std::string kw;
    if (!(ls >> kw)) continue;
    if (kw == "domain") {
      std::string a, b;
      if (!(ls >> a >> b)) throw MapError("domain line needs two numbers");
      dom_lo = parse_num(a);
      dom_hi = parse_num(b);
      std::string extra;
      if (ls >> extra) throw MapError("trailing tokens on domain line");
    } else if (kw == "breakpoints") {
      have_breakpoints = true;
      std::string tok;
      while (ls >> tok) interior.push_back(parse_num(tok));
    } else if (kw == "branch") {
      std::size_t idx;
      std::string kind, s_kv, t_kv;
      if (!(ls >> idx >> kind >> s_kv >> t_kv)) throw MapError("malformed branch line");
      if (kind != "affine") throw MapError("unsupported branch kind: " + kind);
      if (idx != branches.size()) throw MapError("branch lines must appear in order");
      if (s_kv.rfind("slope=", 0) != 0 || t_kv.rfind("intercept=", 0) != 0)
        throw MapError("branch line needs slope=<s> intercept=<t>");
      Branch b;
      b.slope = parse_num(s_kv.substr(6));
      b.intercept = parse_num(t_kv.substr(10));
      branches.push_back(std::move(b));
    } else {
      throw MapError("unknown directive: " + kw);
    }
  }

  if (!dom_lo || !dom_hi) throw MapError("missing domain line");
  if (!have_breakpoints) throw MapError("missing breakpoints line");
  if (branches.empty()) throw MapError("no branches");
  if (branches.size() != interior.size() + 1)
    throw MapError("branch count must be breakpoint count + 1");

  std::vector<Rational> nodes;
  nodes.push_back(*dom_lo);
  nodes.insert(nodes.end(), interior.begin(), interior.end());
  nodes.push_back(*dom_hi);
  return PiecewiseMap(std::move(nodes), std::move(branches));
}

Rational eval(const PiecewiseMap& f, const Rational& x) {
  return f.branch(f.branch_index(x)).value_at(x);
}

double eval_d(const PiecewiseMap& f, double x) {
  const auto& nodes = f.nodes();
  double lo = to_double(nodes.front()), hi = to_double(nodes.back());
  if (x < lo) x = lo;
  if (x > hi) x = hi;
  std::size_t i = 0;
  while (i + 1 < f.branch_count() && x > to_double(nodes[i + 1])) ++i;
  double v = f.branch(i).value_at_d(x);
  if (v < lo) v = lo;
  if (v > hi) v = hi;
  return v;
}

Rational deriv(const PiecewiseMap& f, const Rational& x, Side side) {
  const Interval dom = f.domain();
  if (!dom.contains(x)) throw MapError("point outside domain");
  // At domain endpoints only the interior side exists.
  Side s = side;
  if (x == dom.lo) s = Side::right;
  if (x == dom.hi) s = Side::left;
  return f.branch(f.branch_index(x, s)).slope;
}

Interval tau_domain(const PiecewiseMap& f, const Rational& c) {
  const auto& tps = f.turning_points();
  if (std::find(tps.begin(), tps.end(), c) == tps.end())
    throw MapError("tau requires a turning point");
  std::size_t ri = f.branch_index(c, Side::right);
  std::size_t li = ri - 1;
  const Branch& L = f.branch(li);
  const Branch& R = f.branch(ri);
  Interval lint = f.branch_interval(li);
  Interval rint = f.branch_interval(ri);
  // Values attained by each adjacent branch.
  Rational la = L.value_at(lint.lo), lb = L.value_at(lint.hi);
  Rational ra = R.value_at(rint.lo), rb = R.value_at(rint.hi);
  Interval lv{std::min(la, lb), std::max(la, lb)};
  Interval rv{std::min(ra, rb), std::max(ra, rb)};
  Interval common = intersect(lv, rv);  // both contain f(c)
  // Pull the common value range back through each branch.
  Rational xlo = L.invert(common.lo), xhi = L.invert(common.hi);
  Interval left_part{std::min(xlo, xhi), std::max(xlo, xhi)};
  Rational ylo = R.invert(common.lo), yhi = R.invert(common.hi);
  Interval right_part{std::min(ylo, yhi), std::max(ylo, yhi)};
  return {left_part.lo, right_part.hi};
}

Rational tau(const PiecewiseMap& f, const Rational& c, const Rational& y) {
  if (y == c) return c;
  Interval dom = tau_domain(f, c);
  if (!dom.contains(y)) throw MapError("point outside involution domain");
  std::size_t ri = f.branch_index(c, Side::right);
  std::size_t li = ri - 1;
  const Branch& own = y < c ? f.branch(li) : f.branch(ri);
  const Branch& other = y < c ? f.branch(ri) : f.branch(li);
  return other.invert(own.value_at(y));
}

ClassReport classify(const PiecewiseMap& f) {
  ClassReport rep;
  rep.in_C = true;
  rep.var_exp = 1;
  rep.max_jump_exp = 1;
  if (!f.all_affine()) {
    // Smooth branches: constants from the supplied bounds.
    rep.in_D = true;
    double C = 1, K = 0, lip = 0;
    for (std::size_t i = 0; i < f.branch_count(); ++i) {
      const Branch& b = f.branch(i);
      double lo = b.smooth ? b.smooth->abs_deriv_lo : std::fabs(to_double(b.slope));
      double hi = b.smooth ? b.smooth->abs_deriv_hi : std::fabs(to_double(b.slope));
      C = std::max({C, hi, 1.0 / lo});
      double len = to_double(f.branch_interval(i).length());
      double l = b.smooth ? b.smooth->log_deriv_lipschitz : 0.0;
      lip = std::max(lip, l);
      K += l * len;  // within-branch variation bound
    }
    rep.deriv_bound_C = Rational(C);
    rep.var_log_deriv = K;  // jumps added below in double
    rep.lipschitz_K = lip;
    rep.in_E = false;  // not certified for mixed/smooth maps
    return rep;
  }

  rep.in_D = true;
  rep.lipschitz_K = 0.0;  // ln|Df| constant on each affine branch

  Rational max_abs = abs(f.branch(0).slope);
  Rational min_abs = max_abs;
  for (std::size_t i = 1; i < f.branch_count(); ++i) {
    Rational a = abs(f.branch(i).slope);
    max_abs = std::max(max_abs, a);
    min_abs = std::min(min_abs, a);
  }
  rep.deriv_bound_C = std::max(max_abs, Rational(1) / min_abs);
  if (rep.deriv_bound_C < 1) rep.deriv_bound_C = 1;

  bool log_deriv_continuous = true;
  double K = 0, M = 0;
  for (std::size_t i = 1; i < f.branch_count(); ++i) {
    Rational r = abs(f.branch(i).slope) / abs(f.branch(i - 1).slope);
    if (r == 1) continue;
    log_deriv_continuous = false;
    Rational jump_exp = r > 1 ? r : Rational(1) / r;  // e^{|jump of ln|Df||}
    rep.var_exp *= jump_exp;
    rep.jump_count_L += 1;
    if (jump_exp > rep.max_jump_exp) rep.max_jump_exp = jump_exp;
    double j = std::log(to_double(jump_exp));
    K += j;
    M = std::max(M, j);
  }
  rep.var_log_deriv = K;
  rep.max_jump_M = M;
  rep.in_E = log_deriv_continuous;
  return rep;
}

std::optional<MonotoneBranch> compose_branch(const PiecewiseMap& f, const BranchWord& w) {
  if (w.empty()) return std::nullopt;
  if (!f.all_affine()) throw MapError("compose_branch requires an affine map");
  for (auto idx : w)
    if (idx >= f.branch_count()) throw MapError("branch index out of range");

  // Backward intersection: D = {x : f^k(x) in branch_interval(w_k) for all k}.
  Interval D = f.branch_interval(w.back());
  for (std::size_t k = w.size() - 1; k-- > 0;) {
    const Branch& b = f.branch(w[k]);
    Rational p = b.invert(D.lo), q = b.invert(D.hi);
    Interval pre{std::min(p, q), std::max(p, q)};
    D = intersect(f.branch_interval(w[k]), pre);
    if (!D.valid()) return std::nullopt;
  }

  Rational a(1), t(0);
  for (auto idx : w) {
    const Branch& b = f.branch(idx);
    a = b.slope * a;
    t = b.slope * t + b.intercept;
  }
  return MonotoneBranch{w, D, a, t};
}

namespace {

void enumerate_rec(const PiecewiseMap& f, std::size_t n, BranchWord& w, const Interval& D,
                   const Rational& a, const Rational& t, std::uint64_t budget,
                   std::vector<MonotoneBranch>& out) {
  if (w.size() == n) {
    if (out.size() >= budget) throw MapError("enumeration budget exceeded");
    out.push_back(MonotoneBranch{w, D, a, t});
    return;
  }
  // Forward pruning: the image of the current domain is a*D + t; the next
  // branch must intersect it.
  Rational ilo = a * D.lo + t, ihi = a * D.hi + t;
  Interval img{std::min(ilo, ihi), std::max(ilo, ihi)};
  for (std::uint32_t i = 0; i < f.branch_count(); ++i) {
    const Branch& b = f.branch(i);
    Interval hit = intersect(img, f.branch_interval(i));
    if (!hit.valid()) continue;
    // Pull back onto the current word's domain.
    Rational p = (hit.lo - t) / a, q = (hit.hi - t) / a;
    Interval sub = intersect(D, Interval{std::min(p, q), std::max(p, q)});
    if (!sub.valid()) continue;
    w.push_back(i);
    enumerate_rec(f, n, w, sub, b.slope * a, b.slope * t + b.intercept, budget, out);
    w.pop_back();
  }
}

}  // namespace

std::vector<MonotoneBranch> monotone_pieces(const PiecewiseMap& f, std::size_t n,
                                            const Interval& within, std::uint64_t budget) {
  if (!f.all_affine()) throw MapError("monotone enumeration requires an affine map");
  if (n == 0) throw MapError("word length must be positive");
  std::vector<MonotoneBranch> out;
  BranchWord w;
  for (std::uint32_t i = 0; i < f.branch_count(); ++i) {
    Interval start = intersect(f.branch_interval(i), within);
    if (!start.valid()) continue;
    w.push_back(i);
    const Branch& b = f.branch(i);
    enumerate_rec(f, n, w, start, b.slope, b.intercept, budget, out);
    w.pop_back();
  }
  return out;
}

std::vector<MonotoneBranch> monotone_branches(const PiecewiseMap& f, std::size_t n,
                                              std::uint64_t budget) {
  double total = std::pow(static_cast<double>(f.branch_count()), static_cast<double>(n));
  if (total > static_cast<double>(budget)) throw MapError("enumeration budget exceeded");
  return monotone_pieces(f, n, f.domain(), budget);
}

BranchWord itinerary(const PiecewiseMap& f, const Rational& x, std::size_t n) {
  BranchWord w;
  Rational y = x;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t i = f.branch_index(y, Side::left);
    w.push_back(static_cast<std::uint32_t>(i));
    y = f.branch(i).value_at(y);
  }
  return w;
}

Interval image_of_interval(const PiecewiseMap& f, const Interval& J) {
  if (!f.all_affine()) throw MapError("exact images require an affine map");
  if (!f.domain().contains(J.lo) || !f.domain().contains(J.hi) || !J.valid())
    throw MapError("interval outside domain");
  Rational lo = eval(f, J.lo), hi = lo;
  auto consider = [&](const Rational& v) {
    if (v < lo) lo = v;
    if (v > hi) hi = v;
  };
  consider(eval(f, J.hi));
  for (const auto& node : f.nodes())
    if (J.strictly_contains(node)) consider(eval(f, node));
  return {lo, hi};
}

IntervalSet preimage(const PiecewiseMap& f, const IntervalSet& S) {
  if (!f.all_affine()) throw MapError("exact preimages require an affine map");
  std::vector<Interval> out;
  for (std::size_t i = 0; i < f.branch_count(); ++i) {
    const Branch& b = f.branch(i);
    Interval bi = f.branch_interval(i);
    for (const auto& part : S.parts()) {
      Rational p = b.invert(part.lo), q = b.invert(part.hi);
      Interval pre = intersect(bi, Interval{std::min(p, q), std::max(p, q)});
      if (pre.valid()) out.push_back(pre);
    }
  }
  return IntervalSet(std::move(out));
}

}  // namespace imdyn
