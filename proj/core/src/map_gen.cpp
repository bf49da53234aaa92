#include "imdyn/map_gen.hpp"

#include <random>
#include <set>

namespace imdyn {

namespace {

constexpr int kDenom = 60;  // all generated coordinates are multiples of 1/60

std::vector<Rational> random_nodes(std::mt19937_64& rng, int branch_count) {
  std::uniform_int_distribution<int> pick(1, kDenom - 1);
  std::set<int> cuts;
  while (static_cast<int>(cuts.size()) < branch_count - 1) cuts.insert(pick(rng));
  std::vector<Rational> nodes{Rational(0)};
  for (int c : cuts) nodes.emplace_back(Rational(c) / kDenom);
  nodes.emplace_back(1);
  return nodes;
}

PiecewiseMap from_node_values(const std::vector<Rational>& nodes,
                              const std::vector<Rational>& values) {
  std::vector<Branch> branches;
  for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
    Rational slope = (values[i + 1] - values[i]) / (nodes[i + 1] - nodes[i]);
    Rational intercept = values[i] - slope * nodes[i];
    branches.push_back({slope, intercept, nullptr});
  }
  return PiecewiseMap(nodes, std::move(branches));
}

}  // namespace

PiecewiseMap random_affine_map(std::uint64_t seed, int max_branches) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> nb(2, max_branches);
  const int branch_count = nb(rng);
  auto nodes = random_nodes(rng, branch_count);

  std::uniform_int_distribution<int> val(0, kDenom);
  std::vector<Rational> values;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    Rational v;
    do {
      v = Rational(val(rng)) / kDenom;
    } while (!values.empty() && v == values.back());  // nonzero slope
    values.push_back(v);
  }
  return from_node_values(nodes, values);
}

PiecewiseMap random_expanding_map(std::uint64_t seed, int max_branches) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> nb(2, max_branches);
  std::uniform_int_distribution<int> flip(0, 1);
  const int branch_count = nb(rng);
  auto nodes = random_nodes(rng, branch_count);

  // Full branches with alternating orientation: |slope| = 1/|branch| > 1.
  std::vector<Rational> values;
  int v = flip(rng);
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    values.emplace_back(v);
    v = 1 - v;
  }
  return from_node_values(nodes, values);
}

PiecewiseMap skew_tent(const Rational& b) {
  if (!(b > 0) || !(b < 1)) throw MapError("skew_tent: b must lie in (0,1)");
  return from_node_values({Rational(0), b, Rational(1)},
                          {Rational(0), Rational(1), Rational(0)});
}

PiecewiseMap tent(const Rational& s) {
  if (!(s > 1) || s > 2) throw MapError("tent: slope must lie in (1,2]");
  return PiecewiseMap({Rational(0), Rational(1) / 2, Rational(1)},
                      {{s, Rational(0), nullptr}, {-s, s, nullptr}});
}

}  // namespace imdyn
