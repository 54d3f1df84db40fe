#include <doctest.h>

#include <cmath>
#include <vector>

#include "dyadkit/errors.hpp"
#include "dyadkit/random.hpp"
#include "dyadkit/translations.hpp"

using namespace dyadkit;

namespace {

IndicatorSet members(std::uint64_t n, std::vector<Element> m) {
  return IndicatorSet::from_members(FiniteGroup::cyclic(n), m);
}

}  // namespace

TEST_CASE("union measure examples") {
  const auto E = members(10, {0, 1});
  const Element spread[] = {0, 2, 4, 6, 8};
  CHECK(union_measure(E, spread) == 1.0);
  const Element twice[] = {0, 0};
  CHECK(union_measure(E, twice) == doctest::Approx(0.2));
  const Element any[] = {3, 7};
  CHECK(union_measure(IndicatorSet::full(FiniteGroup::cyclic(10)), any) == 1.0);
  const Element outside[] = {10};
  CHECK_THROWS_AS(union_measure(E, outside), ArgumentError);
}

TEST_CASE("expected union formula") {
  CHECK(expected_union_exact(0.0, 7) == 0.0);
  CHECK(expected_union_exact(1.0, 3) == 1.0);
  CHECK(expected_union_exact(0.2, 5) == doctest::Approx(1.0 - std::pow(0.8, 5)).epsilon(1e-15));
  CHECK(expected_union_exact(0.2, 5) == doctest::Approx(0.67232));
}

TEST_CASE("union measure bounds") {
  RandomStream r(3);
  const auto g = FiniteGroup::product({4, 9});
  for (int trial = 0; trial < 200; ++trial) {
    const auto E = IndicatorSet::random_subset(g, 1 + r.next_below(20), r.split(trial));
    std::vector<Element> shifts(1 + r.next_below(6));
    for (auto& s : shifts) s = r.next_below(g.order());
    const double u = union_measure(E, shifts);
    REQUIRE(u >= E.measure());
    REQUIRE(u <= std::min(1.0, shifts.size() * E.measure()) + 1e-15);
  }
}

TEST_CASE("random cover search") {
  const auto E = members(10, {0, 1});
  const auto res = random_cover_search(E, 5, 1000, RandomStream(7));
  CHECK(res.trial_measures.size() == 1000);
  CHECK(res.union_measure >= 0.67232);
  CHECK(res.achieved);
  CHECK(res.union_measure == union_measure(E, res.shifts));

  const auto full = IndicatorSet::full(FiniteGroup::cyclic(5));
  CHECK(random_cover_search(full, 1, 1, RandomStream(1)).achieved);

  // Same seed and trial count: same best tuple.
  const auto again = random_cover_search(E, 5, 1000, RandomStream(7));
  CHECK(again.shifts == res.shifts);
  CHECK(again.empirical_mean == res.empirical_mean);
}

TEST_CASE("monte carlo mean converges to the exact expectation") {
  const auto g = FiniteGroup::cyclic(100);
  const auto E = IndicatorSet::random_subset(g, 5, RandomStream(2));
  const auto res = random_cover_search(E, 20, 10000, RandomStream(11));
  CHECK(std::fabs(res.empirical_mean - expected_union_exact(0.05, 20)) <= 0.01);
}

TEST_CASE("greedy cover examples") {
  const auto E = members(10, {0, 1});
  const auto g = greedy_cover(E, 5);
  CHECK(g.union_measure == 1.0);
  CHECK(g.shifts == std::vector<Element>{0, 2, 4, 6, 8});

  const auto point = members(7, {0});
  const auto p = greedy_cover(point, 3);
  CHECK(p.union_measure == doctest::Approx(3.0 / 7.0));
  CHECK(p.bound == doctest::Approx(1.0 - std::pow(6.0 / 7.0, 3)));
  CHECK(p.bound <= p.union_measure);

  const auto full = greedy_cover(IndicatorSet::full(FiniteGroup::cyclic(6)), 4);
  CHECK(full.shifts.size() == 1);
  CHECK(full.union_measure == 1.0);
}

TEST_CASE("greedy beats the random bound and is monotone in N") {
  RandomStream r(19);
  const std::vector<FiniteGroup> groups = {FiniteGroup::cyclic(30), FiniteGroup::product({5, 6}),
                                           FiniteGroup::product({2, 3, 5})};
  for (const auto& g : groups)
    for (int trial = 0; trial < 30; ++trial) {
      const auto E = IndicatorSet::random_subset(g, 1 + r.next_below(8), r.split(trial));
      double prev = 0.0;
      for (std::uint64_t N = 1; N <= 8; ++N) {
        const auto c = greedy_cover(E, N);
        REQUIRE(c.union_measure >= expected_union_exact(E.measure(), N));
        REQUIRE(c.union_measure >= prev);
        prev = c.union_measure;
      }
    }
}

TEST_CASE("exhaustive average equals the expectation identity") {
  // Every subset of Z_2 x Z_3 and Z_7, N = 1..3.
  for (const auto& g : {FiniteGroup::product({2, 3}), FiniteGroup::cyclic(7)}) {
    const auto n = g.order();
    for (std::uint64_t mask = 0; mask < (1ull << n); ++mask) {
      std::vector<std::uint8_t> bits(n);
      for (std::uint64_t e = 0; e < n; ++e) bits[e] = (mask >> e) & 1;
      const auto E = IndicatorSet::from_bits(g, bits);
      for (std::uint64_t N = 1; N <= 3; ++N) {
        const auto avg = exhaustive_union_average(E, N);
        REQUIRE(avg.integer_identity);
        REQUIRE(std::fabs(avg.mean_union - avg.expected) <= 1e-12);
      }
    }
  }
}

TEST_CASE("quotient spaces lift cosets") {
  const auto g = FiniteGroup::cyclic(12);
  const QuotientSpace q(g, 4);  // H = {0, 4, 8}
  CHECK(q.subgroup_order() == 3);
  CHECK(q.size() == 4);
  CHECK(q.coset_of(1) == q.coset_of(9));
  std::vector<std::uint8_t> pick(4, 0);
  pick[q.coset_of(2)] = 1;
  const auto lifted = q.lift(pick);
  CHECK(lifted.members() == std::vector<Element>{2, 6, 10});
  CHECK(lifted.measure() == doctest::Approx(0.25));
}
