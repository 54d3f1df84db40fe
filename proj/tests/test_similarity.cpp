#include <doctest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "dyadkit/errors.hpp"
#include "dyadkit/similarity.hpp"

using namespace dyadkit;

namespace {

SimilarityConfig config(std::size_t J0, double r, double eps = 0.5) {
  SimilarityConfig c;
  c.J0 = J0;
  c.ratio = r;
  c.eps = eps;
  return c;
}

}  // namespace

TEST_CASE("smallest construction") {
  const auto fam = build_construction(config(1, 0.5));
  CHECK(fam.ladder() == std::vector<double>{1.0, 0.5, 0.25});
  CHECK(fam.S0() == std::vector<double>{1.75});
  CHECK(fam.v()[0] == doctest::Approx(0.1).epsilon(1e-15));
  CHECK(fam.v()[1] == doctest::Approx(0.2).epsilon(1e-15));
  CHECK(fam.v()[2] == doctest::Approx(0.4).epsilon(1e-15));
  const auto p = fam.orbit_points(1.0);
  REQUIRE(p.size() == 3);
  CHECK(p[0] == doctest::Approx(0.175).epsilon(1e-12));
  CHECK(p[1] == doctest::Approx(0.35).epsilon(1e-12));
  CHECK(p[2] == doctest::Approx(0.7).epsilon(1e-12));
  for (double x : fam.orbit_points(0.0)) CHECK(x == 0.0);
  CHECK(fam.max_speed() == doctest::Approx(0.7));
}

TEST_CASE("ladder and sumset invariants") {
  for (std::size_t J0 = 1; J0 <= 4; ++J0)
    for (double r : {0.5, 1.0 / 3.0, 0.25, 0.1}) {
      const auto fam = build_construction(config(J0, r));
      REQUIRE(fam.J() == 3 * J0);
      REQUIRE(fam.v().size() == 3 * J0);
      REQUIRE(fam.points() == J0 * J0 * J0);
      const auto& s = fam.ladder();
      for (std::size_t k = 1; k < s.size(); ++k) {
        REQUIRE(s[k] < s[k - 1]);
        REQUIRE(s[k] / s[k - 1] == doctest::Approx(r).epsilon(1e-14));
      }
      auto sorted = fam.S0();
      std::sort(sorted.begin(), sorted.end());
      REQUIRE(std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end());
      for (std::size_t p = 0; p < fam.points(); ++p) {
        const auto& t = fam.summands(p);
        // One summand from each of the three blocks.
        REQUIRE(t[0] / J0 == 0);
        REQUIRE(t[1] / J0 == 1);
        REQUIRE(t[2] / J0 == 2);
        REQUIRE(fam.S0()[p] == s[t[0]] + s[t[1]] + s[t[2]]);
      }
    }
  CHECK(build_construction(config(2, 1.0 / 3.0)).points() == 8);
}

TEST_CASE("orbit points are reconstructed from the ratio table") {
  for (std::size_t J0 : {1u, 2u, 3u}) {
    const auto fam = build_construction(config(J0, 0.25));
    const std::size_t J = fam.J();
    for (double t : {1.0, 1.25, 1.5 + 1e-3, 2.0}) {
      const auto pts = fam.orbit_points(t);
      for (std::size_t p = 0; p < fam.points(); ++p) {
        const auto& tri = fam.summands(p);
        for (std::size_t c = 0; c < J; ++c) {
          long double y = 0.0L;
          for (auto k : tri) y += std::pow(0.25L, static_cast<long double>(k));
          const long double vc = 1.0L / (10.0L * std::pow(0.25L, static_cast<long double>(c)));
          long double want = t * y * vc;
          want -= std::floor(want);
          REQUIRE(pts[p * J + c] >= 0.0);
          REQUIRE(pts[p * J + c] < 1.0);
          REQUIRE(torus_dist(pts[p * J + c], static_cast<double>(want)) <= 1e-9);
        }
      }
    }
  }
}

TEST_CASE("ladder base cancels") {
  auto a = config(2, 0.25);
  auto b = a;
  b.base = 3.0;
  const auto fa = build_construction(a), fb = build_construction(b);
  for (std::size_t c = 0; c < fa.J(); ++c) CHECK(fb.v()[c] == doctest::Approx(fa.v()[c] / 3.0));
  for (double t : {1.0, 1.7}) CHECK(fa.orbit_points(t) == fb.orbit_points(t));
  const auto probes = equispaced_probes(11);
  CHECK(separation(fa, probes).min == separation(fb, probes).min);
}

TEST_CASE("separation") {
  const auto probes = equispaced_probes(101);
  CHECK(probes.front() == 1.0);
  CHECK(probes.back() == 2.0);
  CHECK(std::isinf(separation(build_construction(config(1, 0.25)), probes).min));
  const auto s = separation(build_construction(config(2, 0.25)), probes);
  CHECK(s.min >= 0.02);
  CHECK(s.min <= 0.5);
  CHECK(s.a != s.b);
  const double bad[] = {0.5};
  CHECK_THROWS_AS(separation(build_construction(config(2, 0.25)), bad), ArgumentError);
}

TEST_CASE("Hausdorff distance") {
  const std::vector<double> a{0.1, 0.9}, b{0.95, 0.2};
  // 1-dimensional point sets {0.1, 0.9} and {0.95, 0.2}.
  CHECK(hausdorff_linf(a, b, 1) == doctest::Approx(0.1));
  CHECK(hausdorff_linf(a, a, 1) == 0.0);
}

TEST_CASE("orbit entropy") {
  const auto fam1 = build_construction(config(1, 0.5));
  CHECK(orbit_entropy(fam1, 0.5, 2).net_size == 1);
  CHECK(orbit_entropy(fam1, 0.7, 2).net_size == 1);
  for (double delta : {0.2, 0.1, 0.05}) {
    const auto e = orbit_entropy(fam1, delta, required_t_samples(fam1, delta));
    CHECK(e.net_size >= 1);
    CHECK(static_cast<double>(e.net_size) <= 1.0 + fam1.max_speed() / delta);
  }
  CHECK_THROWS_AS(orbit_entropy(fam1, 0.05, 3), ArgumentError);
  // A finer delta needs at least as many net points.
  const auto fam2 = build_construction(config(2, 0.5));
  const auto coarse = orbit_entropy(fam2, 0.2, required_t_samples(fam2, 0.2));
  const auto fine = orbit_entropy(fam2, 0.1, required_t_samples(fam2, 0.1));
  CHECK(fine.net_size >= coarse.net_size);
  CHECK(fine.exponent > 0.0);
}

TEST_CASE("cube sets") {
  auto cfg = config(1, 0.5, 1.0);
  CHECK(cfg.cubes_per_axis() == 300);
  const std::uint64_t M = cfg.cubes_per_axis();
  RandomStream r(11);
  const auto full = cube_set(cfg);
  cfg.eps = 0.0;
  const auto none = cube_set(cfg);
  for (int k = 0; k < 1000; ++k) {
    const auto x = sample_point(3, r);
    REQUIRE(cube_member(full, M, x));
    REQUIRE_FALSE(cube_member(none, M, x));
  }
  cfg.eps = 0.05;
  const auto E = cube_set(cfg);
  std::size_t hits = 0;
  const std::size_t n = 100000;
  for (std::size_t k = 0; k < n; ++k) hits += cube_member(E, M, sample_point(3, r));
  const double sigma = std::sqrt(0.05 * 0.95 / static_cast<double>(n));
  CHECK(std::fabs(static_cast<double>(hits) / static_cast<double>(n) - 0.05) <= 3.0 * sigma);

  cfg.cube_side = 0.3;
  CHECK_THROWS_AS(cfg.validate(), ArgumentError);
  cfg.cube_side = 0.25;
  CHECK(cfg.cubes_per_axis() == 4);
}

TEST_CASE("coverage follows the Bernoulli law") {
  const RandomStream rng(12);
  for (std::size_t J0 : {1u, 2u}) {
    for (double eps : {0.05, 0.5}) {
      const auto cfg = config(J0, 0.25, eps);
      const auto fam = build_construction(cfg);
      const auto c = coverage_probability(cfg, fam, 4000, 1.5, rng);
      CHECK(c.expected == doctest::Approx(1.0 - std::pow(1.0 - eps, static_cast<double>(J0 * J0 * J0))));
      CHECK(std::fabs(c.frequency - c.expected) <= 3.0 * c.std_error);
    }
  }
  const auto cfg = config(1, 0.25, 1.0);
  const auto c = coverage_probability(cfg, build_construction(cfg), 100, 1.5, rng);
  CHECK(c.frequency == 1.0);
  // Cubes as large as the torus cannot separate the points.
  auto big = config(2, 0.25);
  big.cube_side = 1.0;
  CHECK_THROWS_AS(coverage_probability(big, build_construction(big), 10, 1.5, rng), ArgumentError);
}

TEST_CASE("inf-sup experiment degenerate cases") {
  auto cfg = config(1, 0.5, 1.0);
  cfg.x_samples = 200;
  const auto fam = build_construction(cfg);
  const auto one = inf_sup_experiment(cfg, fam);
  REQUIRE(one.ratio.has_value());
  CHECK(*one.ratio == 1.0);
  CHECK(one.f.mean == 1.0);
  CHECK(one.F.mean == 1.0);
  CHECK(one.certified);
  CHECK(one.net_points == certified_net_points(cfg, fam));
  CHECK(one.net_spacing * fam.max_speed() <= cfg.margin() * (1.0 + 1e-12));

  cfg.eps = 0.0;
  const auto zero = inf_sup_experiment(cfg, fam);
  CHECK_FALSE(zero.ratio.has_value());
  CHECK(zero.F.mean == 0.0);

  cfg.eps = 0.5;
  InfSupOptions tiny;
  tiny.budget = 10;
  CHECK_THROWS_AS(inf_sup_experiment(cfg, fam, tiny), BudgetError);
}

TEST_CASE("inf-sup experiment is monotone in the net and in eps") {
  auto cfg = config(1, 0.5, 0.5);
  cfg.x_samples = 300;
  cfg.cube_side = 1.0 / 30.0;
  const auto fam = build_construction(cfg);
  const auto full = inf_sup_experiment(cfg, fam);
  InfSupOptions coarse;
  coarse.net_stride = 4;
  const auto sub = inf_sup_experiment(cfg, fam, coarse);
  CHECK_FALSE(sub.certified);
  CHECK(sub.net_points < full.net_points);
  for (std::size_t k = 0; k < cfg.x_samples; ++k) REQUIRE(sub.F_values[k] >= full.F_values[k]);

  std::vector<std::uint8_t> prev(cfg.x_samples, 0);
  for (double eps : {0.2, 0.5, 0.8}) {
    cfg.eps = eps;
    const auto res = inf_sup_experiment(cfg, fam);
    for (std::size_t k = 0; k < cfg.x_samples; ++k) REQUIRE(res.F_values[k] >= prev[k]);
    prev = res.F_values;
  }
}

TEST_CASE("B1 set algebra") {
  const GridTorus circle(1, 100);
  std::vector<Element> members;
  for (Element e = 0; e < 30; ++e) members.push_back(e);
  const auto B = IndicatorSet::from_members(circle.group(), members);
  const double ys[] = {0.5}, ts[] = {1.0}, v[] = {1.0};
  const auto B1 = build_B1(B, circle, ys, ts, v);
  CHECK(B1.measure() == doctest::Approx(0.3));
  for (Element e = 0; e < 100; ++e) CHECK(B1.contains(e) == (e >= 50 && e < 80));

  const GridTorus plane(2, 16);
  const double ys2[] = {1.0, 1.75}, ts2[] = {1.0, 1.5, 2.0}, v2[] = {0.1, 0.2};
  CHECK(build_B1(IndicatorSet::full(plane.group()), plane, ys2, ts2, v2).measure() == 1.0);
  CHECK(build_B1(IndicatorSet::empty(plane.group()), plane, ys2, ts2, v2).measure() == 0.0);

  RandomStream r(13);
  for (int trial = 0; trial < 10; ++trial) {
    const auto A = IndicatorSet::random_subset(plane.group(), 40 + r.next_below(150), r.split(trial));
    const auto A1 = build_B1(A, plane, ys2, ts2, v2);
    const double first[] = {ts2[0]};
    const auto layer = build_B1(A, plane, ys2, first, v2);
    for (auto e : A1.members()) REQUIRE(layer.contains(e));
  }
  const GridTorus large(3, 65);
  const double v3[] = {1.0, 1.0, 1.0};
  CHECK_THROWS_AS(build_B1(IndicatorSet::empty(large.group()), large, ys, ts, v3), BudgetError);
}
