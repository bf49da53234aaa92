#include "imdyn/map_gen.hpp"

#include <doctest.h>

#include "imdyn/orbit.hpp"

using namespace imdyn;

namespace {
Rational r(int p, int q = 1) { return Rational(p) / q; }

bool same_map(const PiecewiseMap& a, const PiecewiseMap& b) {
  if (a.nodes() != b.nodes()) return false;
  for (std::size_t i = 0; i < a.branch_count(); ++i) {
    if (a.branch(i).slope != b.branch(i).slope) return false;
    if (a.branch(i).intercept != b.branch(i).intercept) return false;
  }
  return true;
}
}  // namespace

TEST_CASE("generators are deterministic per seed") {
  for (std::uint64_t seed : {0ull, 1ull, 42ull, 123456789ull}) {
    CHECK(same_map(random_affine_map(seed), random_affine_map(seed)));
    CHECK(same_map(random_expanding_map(seed), random_expanding_map(seed)));
  }
  CHECK(!same_map(random_affine_map(1), random_affine_map(2)));
}

TEST_CASE("random affine maps validate and stay inside the domain") {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    auto f = random_affine_map(seed);  // the constructor itself validates
    CHECK(f.branch_count() >= 1);
    for (std::size_t i = 0; i < f.branch_count(); ++i) CHECK(f.branch(i).slope != 0);
    // spot-check the image on node points
    for (const auto& node : f.nodes()) CHECK(f.domain().contains(eval(f, node)));
  }
}

TEST_CASE("random expanding maps have full branches with |slope| > 1") {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    auto f = random_expanding_map(seed);
    for (std::size_t i = 0; i < f.branch_count(); ++i) CHECK(abs(f.branch(i).slope) > 1);
    for (std::size_t i = 0; i + 1 < f.nodes().size(); ++i) {
      Interval img = image_of_interval(f, {f.nodes()[i], f.nodes()[i + 1]});
      CHECK(img == Interval{r(0), r(1)});
    }
  }
}

TEST_CASE("named families") {
  auto t = tent(r(13, 10));
  CHECK(eval(t, r(1, 2)) == r(13, 20));
  CHECK(t.turning_points() == std::vector<Rational>{r(1, 2)});

  auto s = skew_tent(r(1, 3));
  CHECK(eval(s, r(1, 3)) == 1);
  CHECK(s.branch(0).slope == 3);
  CHECK(s.branch(1).slope == r(-3, 2));
  CHECK_THROWS_AS((void)tent(r(5, 2)), MapError);
  CHECK_THROWS_AS((void)skew_tent(r(0)), MapError);
}
