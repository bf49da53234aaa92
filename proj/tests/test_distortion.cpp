#include "imdyn/distortion.hpp"

#include <doctest.h>

#include <cmath>
#include <memory>
#include <random>

#include "fixtures.hpp"

using namespace imdyn;

namespace {

Rational r(int p, int q = 1) { return Rational(p) / q; }

/// Monotone smooth fixture on [0,1]: f(x) = x(3 - x)/2, Df = (3 - 2x)/2 in
/// [1/2, 3/2], and |d/dx ln Df| = 2/(3 - 2x) <= 2.
PiecewiseMap smooth_fixture() {
  auto s = std::make_shared<SmoothBranch>();
  s->value = [](double x) { return x * (3 - x) / 2; };
  s->deriv = [](double x) { return (3 - 2 * x) / 2; };
  s->abs_deriv_lo = 0.5;
  s->abs_deriv_hi = 1.5;
  s->log_deriv_lipschitz = 2.0;
  Branch b{Rational(0), Rational(0), s};
  return PiecewiseMap({Rational(0), Rational(1)}, {b});
}

}  // namespace

TEST_CASE("intersection multiplicity") {
  CHECK(intersection_multiplicity({{r(0), r(1, 2)}, {r(1, 4), r(3, 4)}, {r(3, 5), r(9, 10)}}) ==
        2);
  CHECK(intersection_multiplicity({{r(0), r(1)}}) == 1);
  CHECK(intersection_multiplicity({{r(1, 3), r(2, 3)},
                                   {r(1, 3), r(2, 3)},
                                   {r(1, 3), r(2, 3)}}) == 3);
  // touching intervals both cover the shared endpoint
  CHECK(intersection_multiplicity({{r(0), r(1, 2)}, {r(1, 2), r(1)}}) == 2);
  CHECK_THROWS_AS(intersection_multiplicity({}), MapError);
}

TEST_CASE("intersection multiplicity agrees with a sweep-free oracle") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> coord(0, 60);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<Interval> ivs;
    int count = 2 + trial % 6;
    for (int i = 0; i < count; ++i) {
      int a = coord(rng), b = coord(rng);
      if (a > b) std::swap(a, b);
      ivs.push_back({r(a, 60), r(b, 60)});
    }
    // oracle: test cover counts at every endpoint and every gap midpoint
    std::vector<Rational> probes;
    for (const auto& iv : ivs) {
      probes.push_back(iv.lo);
      probes.push_back(iv.hi);
    }
    std::sort(probes.begin(), probes.end());
    std::size_t n0 = probes.size();
    for (std::size_t i = 0; i + 1 < n0; ++i) probes.push_back((probes[i] + probes[i + 1]) / 2);
    std::size_t best = 0;
    for (const auto& p : probes) {
      std::size_t c = 0;
      for (const auto& iv : ivs)
        if (iv.contains(p)) ++c;
      best = std::max(best, c);
    }
    CHECK(intersection_multiplicity(ivs) == best);
  }
}

TEST_CASE("multiplicity bound e^{S(K+LM)}") {
  auto tent_rep = classify(fixtures::tent2());
  CHECK(bound_multiplicity(tent_rep, 0) == 1);
  CHECK(bound_multiplicity(tent_rep, 5) == 1);  // K = L = 0

  auto skew_rep = classify(fixtures::skew13());
  CHECK(bound_multiplicity(skew_rep, 2) == 16);  // e^{2 (ln2 + ln2)}
  CHECK(bound_multiplicity(skew_rep, 0) == 1);
  CHECK(bound_multiplicity(skew_rep, 1) == 4);
}

TEST_CASE("extension bound") {
  CHECK(extension_bound(r(1, 10), r(1, 5), 0) == 1);
  double v = to_double(extension_bound(r(1, 10), r(1, 5), 5));
  CHECK(v == doctest::Approx(std::exp(-1.0)).epsilon(1e-9));
  CHECK(v <= std::exp(-1.0));  // rounded down, stays a lower bound
  // tau -> sigma+ collapses the bound
  CHECK(extension_bound(r(1, 10), r(101, 1000), 0) == r(1, 100));
  CHECK_THROWS_AS((void)extension_bound(r(1, 5), r(1, 10), 0), MapError);
  CHECK_THROWS_AS((void)extension_bound(r(1, 5), r(1, 5), 0), MapError);
}

TEST_CASE("empirical distortion on named fixtures") {
  auto tent = fixtures::tent2();
  auto d = empirical_distortion(tent, {r(1, 10), r(9, 10)}, 5);
  CHECK(d.empirical == 1);
  CHECK(d.pass);

  auto skew = fixtures::skew13();
  auto d2 = empirical_distortion(skew, {r(1, 4), r(1, 2)}, 1);
  CHECK(d2.empirical == 2);  // ratio of |slopes| 3 and 3/2
  CHECK(d2.S == 1);
  CHECK(d2.pass);

  // degenerate interval
  auto d3 = empirical_distortion(skew, {r(1, 4), r(1, 4)}, 4);
  CHECK(d3.empirical == 1);
  CHECK(d3.pass);
}

TEST_CASE("multiplicity distortion bound holds on random affine maps") {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> coord(0, 60);
  for (std::uint64_t trial = 0; trial < 200; ++trial) {
    auto f = random_affine_map(900 + trial);
    Interval dom = f.domain();
    int a = coord(rng), b = coord(rng);
    if (a == b) b = (b + 1) % 61;
    Rational lo = dom.lo + dom.length() * r(std::min(a, b), 60);
    Rational hi = dom.lo + dom.length() * r(std::max(a, b), 60);
    std::size_t n = 1 + trial % 8;
    auto rep = empirical_distortion(f, {lo, hi}, n);
    CHECK(rep.mult_applies);
    CHECK(rep.empirical <= rep.mult_bound);
    CHECK(rep.empirical <= rep.stepwise_bound);
    CHECK(rep.stepwise_bound <= rep.mult_bound);
  }
}

TEST_CASE("summed-length distortion bound on a smooth fixture") {
  auto f = smooth_fixture();
  auto rep = classify(f);
  CHECK(rep.in_D);
  REQUIRE(rep.lipschitz_K.has_value());
  CHECK(*rep.lipschitz_K == doctest::Approx(2.0));

  for (auto J : {Interval{r(1, 10), r(1, 5)}, Interval{r(1, 2), r(4, 5)}}) {
    for (std::size_t n : {1u, 2u, 3u, 4u}) {
      double bound = bound_sum(f, J, n);
      auto d = empirical_distortion(f, J, n);
      REQUIRE(d.sum_bound.has_value());
      CHECK(*d.sum_bound == doctest::Approx(bound));
      CHECK(to_double(d.empirical) <= bound * (1 + 1e-9));
    }
  }
  CHECK(bound_sum(f, {r(1, 10), r(1, 5)}, 0) == 1.0);
  CHECK(bound_sum(fixtures::tent2(), {r(1, 10), r(1, 5)}, 2) == 1.0);
  // crossing a breakpoint is an error
  CHECK_THROWS_AS((void)bound_sum(fixtures::tent2(), {r(2, 5), r(3, 5)}, 1), MapError);
}

TEST_CASE("extension bound is an equality for nested affine intervals") {
  for (std::uint64_t seed = 300; seed < 320; ++seed) {
    auto f = random_expanding_map(seed);
    for (std::size_t n = 1; n <= 4; ++n) {
      auto branches = monotone_branches(f, n);
      for (std::size_t bi = 0; bi < branches.size(); bi += 3) {
        const Interval T = branches[bi].domain;
        if (T.is_point()) continue;
        Interval J{T.lo, T.lo + T.length() * r(1, 3)};
        Rational sigma = 0, tau_sum = 0;
        Interval jc = J, tc = T;
        for (std::size_t i = 0; i < n; ++i) {
          sigma += jc.length();
          tau_sum += tc.length();
          jc = image_of_interval(f, jc);
          tc = image_of_interval(f, tc);
        }
        Rational ratio = (T.length() - J.length()) / J.length();
        CHECK(ratio == extension_bound(sigma, tau_sum, 0));
      }
    }
  }
}
