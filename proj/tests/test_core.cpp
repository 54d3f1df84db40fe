#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "dyadkit/core.hpp"
#include "dyadkit/errors.hpp"

using namespace dyadkit;

TEST_CASE("cyclic and product groups") {
  const auto z10 = FiniteGroup::cyclic(10);
  CHECK(z10.order() == 10);
  CHECK(z10.op(7, 5) == 2);
  CHECK(z10.inverse(3) == 7);
  CHECK(z10.op(4, z10.inverse(4)) == z10.identity());

  const auto g = FiniteGroup::product({3, 4});
  CHECK(g.order() == 12);
  // Axis 0 varies fastest.
  CHECK(g.coords(5) == std::vector<std::int64_t>{2, 1});
  const std::int64_t c[] = {-1, 5};
  CHECK(g.index(c) == 2 + 3 * 1);
  for (Element a = 0; a < 12; ++a)
    for (Element b = 0; b < 12; ++b) {
      CHECK(g.op(a, b) == g.op(b, a));
      CHECK(g.contains(g.op(a, b)));
    }
}

TEST_CASE("huge products are carriers but not enumerable") {
  const auto g = FiniteGroup::product(std::vector<std::uint64_t>(9, 600));
  CHECK_FALSE(g.enumerable());
  CHECK_THROWS_AS(g.order(), BudgetError);
  CHECK_THROWS_AS(FiniteGroup::cyclic(0), ArgumentError);
}

TEST_CASE("full and empty sets") {
  const auto g = FiniteGroup::cyclic(10);
  CHECK(measure(IndicatorSet::full(g)) == 1.0);
  CHECK(measure(IndicatorSet::empty(g)) == 0.0);
}

TEST_CASE("translation preserves measure and shifts members") {
  const auto g = FiniteGroup::cyclic(10);
  const Element m[] = {0, 1, 2};
  const auto E = IndicatorSet::from_members(g, m);
  CHECK(E.measure() == doctest::Approx(0.3));
  const auto F = translate_set(E, 5);
  CHECK(F.members() == std::vector<Element>{5, 6, 7});
  CHECK(F.measure() == E.measure());
  CHECK(translate_set(E, 0) == E);
}

TEST_CASE("translation preserves measure on random sets, exactly") {
  const auto g = FiniteGroup::product({5, 6, 7});
  RandomStream r(9);
  for (int trial = 0; trial < 50; ++trial) {
    const auto E = IndicatorSet::random_subset(g, r.next_below(g.order() + 1), r.split(trial));
    const Element h = r.next_below(g.order());
    CHECK(translate_set(E, h).count() == E.count());
    CHECK(translate_set(translate_set(E, h), g.inverse(h)) == E);
  }
}

TEST_CASE("set algebra and complement") {
  const auto g = FiniteGroup::cyclic(8);
  const Element a[] = {0, 1, 2, 3};
  const Element b[] = {2, 3, 4};
  const auto A = IndicatorSet::from_members(g, a);
  const auto B = IndicatorSet::from_members(g, b);
  CHECK(set_union(A, B).count() == 5);
  CHECK(set_intersection(A, B).count() == 2);
  CHECK(A.complement().count() == 4);
  CHECK(set_union(A, A.complement()) == IndicatorSet::full(g));
}

TEST_CASE("from_members rejects elements outside the group") {
  const auto g = FiniteGroup::cyclic(4);
  const Element bad[] = {4};
  CHECK_THROWS_AS(IndicatorSet::from_members(g, bad), ArgumentError);
}

TEST_CASE("grid torus snapping to the nearest cell") {
  const GridTorus t(2, 10);
  CHECK(t.cell_volume() == doctest::Approx(0.01));
  CHECK(t.snap_error() == doctest::Approx(0.05));
  const double x[] = {0.26, 0.94};
  CHECK(t.cell_of(x) == std::vector<std::int64_t>{2, 9});
  const double s[] = {0.26, -0.04};
  CHECK(t.snap_shift(s) == std::vector<std::int64_t>{3, 0});

  const auto E = IndicatorSet::from_members(t.group(), std::vector<Element>{0});
  const double shift[] = {0.5, 0.1};
  const auto moved = translate_set(E, t, shift);
  CHECK(moved.cells == std::vector<std::int64_t>{5, 1});
  CHECK(moved.set.members() == std::vector<Element>{5 + 10 * 1});
  CHECK(moved.snap_error == doctest::Approx(0.05));
}

TEST_CASE("procedural sets: extremes, density and translation") {
  const GridTorus t(6, 600);
  const auto full = IndicatorSet::procedural(t.group(), 1, 1.0);
  const auto none = IndicatorSet::procedural(t.group(), 1, 0.0);
  RandomStream r(77);
  for (int i = 0; i < 1000; ++i) {
    const auto c = sample_uniform(t, r);
    CHECK(full.contains_cell(c));
    CHECK_FALSE(none.contains_cell(c));
  }

  const auto E = IndicatorSet::procedural(t.group(), 5, 0.05);
  std::size_t hits = 0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) hits += E.contains_cell(sample_uniform(t, r));
  const double sigma = std::sqrt(0.05 * 0.95 / n);
  CHECK(std::fabs(static_cast<double>(hits) / n - 0.05) < 3 * sigma);

  // Procedural translation agrees with shifting the query.
  const std::vector<std::int64_t> shift{3, -2, 0, 1, 7, 599};
  const auto moved = E.translated_cells(shift);
  for (int i = 0; i < 2000; ++i) {
    const auto c = sample_uniform(t, r);
    std::vector<std::int64_t> back(c.size());
    for (std::size_t k = 0; k < c.size(); ++k) back[k] = c[k] - shift[k];
    REQUIRE(moved.contains_cell(c) == E.contains_cell(back));
  }
}

TEST_CASE("procedural sets nest in p for a fixed seed") {
  const GridTorus t(3, 50);
  const auto small = IndicatorSet::procedural(t.group(), 8, 0.2);
  const auto large = IndicatorSet::procedural(t.group(), 8, 0.6);
  for (Element e = 0; e < t.group().order(); ++e)
    if (small.contains(e)) REQUIRE(large.contains(e));
}

TEST_CASE("random_subset draws exactly k distinct members") {
  const auto g = FiniteGroup::cyclic(100);
  const auto E = IndicatorSet::random_subset(g, 37, RandomStream(4));
  CHECK(E.count() == 37);
  CHECK(E == IndicatorSet::random_subset(g, 37, RandomStream(4)));
}
