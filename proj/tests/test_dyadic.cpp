#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <vector>

#include "dyadkit/dyadic.hpp"
#include "dyadkit/errors.hpp"
#include "dyadkit/random.hpp"

using namespace dyadkit;

namespace {

// ||n a/q|| <= rho decided in integers, independent of floating point.
std::vector<std::int64_t> rational_bohr(std::int64_t N, const std::vector<std::pair<int, int>>& S,
                                        int rho_num, int rho_den) {
  std::vector<std::int64_t> out;
  for (std::int64_t n = -N; n <= N; ++n) {
    bool in = true;
    for (auto [a, q] : S) {
      const std::int64_t r = ((n * a) % q + q) % q;
      const std::int64_t d = std::min(r, q - r);  // ||n a/q|| = d/q
      if (d * rho_den > static_cast<std::int64_t>(rho_num) * q) in = false;
    }
    if (in) out.push_back(n);
  }
  return out;
}

}  // namespace

TEST_CASE("scale ladders") {
  const auto l = ScaleLadder::lacunary(4);
  CHECK(l.size() == 4);
  CHECK(l[3] == 0.125);
  CHECK(l.is_lacunary());
  CHECK_THROWS_AS(ScaleLadder({1.0, 0.6}), ArgumentError);
  CHECK_NOTHROW(ScaleLadder({1.0, 0.6}, false));
  CHECK_THROWS_AS(ScaleLadder({1.0, 1.0}, false), ArgumentError);
}

TEST_CASE("condensation of 1/n^2 and 1/n") {
  const int K = 10;
  std::vector<double> inv2(1 << K), inv1(1 << K), zero(1 << K, 0.0);
  for (int n = 1; n <= (1 << K); ++n) {
    inv2[n - 1] = 1.0 / (double(n) * n);
    inv1[n - 1] = 1.0 / n;
  }
  const auto a = condensation_test(inv2, K);
  CHECK(a.condensed_partial_sum == doctest::Approx(2.0 - std::ldexp(1.0, -9)).epsilon(1e-15));
  CHECK(a.sandwich_ok);
  const auto b = condensation_test(inv1, K);
  CHECK(b.condensed_partial_sum == doctest::Approx(10.0).epsilon(1e-15));
  CHECK(b.sandwich_ok);
  const auto z = condensation_test(zero, K);
  CHECK(z.partial_sum == 0.0);
  CHECK(z.condensed_partial_sum == 0.0);
  CHECK(z.sandwich_ok);

  std::vector<double> bumpy{1.0, 0.5, 0.7, 0.1};
  CHECK_THROWS_AS(condensation_test(bumpy, 2), ArgumentError);
}

TEST_CASE("condensation sandwich holds for random monotone sequences") {
  RandomStream r(21);
  for (int trial = 0; trial < 200; ++trial) {
    const int K = 1 + static_cast<int>(r.next_below(12));
    std::vector<double> f(std::size_t{1} << K);
    double v = 1.0 + 10.0 * r.next_double();
    for (auto& x : f) {
      x = v;
      v *= r.next_double() < 0.3 ? r.next_double() : 1.0;
    }
    REQUIRE(condensation_test(f, K).sandwich_ok);
  }
}

TEST_CASE("pigeonhole scale examples") {
  const double a[] = {3, 1, 2};
  const auto s = pigeonhole_scale(a);
  CHECK(s.index == 1);
  CHECK(s.weight == 1.0);
  CHECK(s.threshold == 2.0);
  const double c[] = {4, 4, 4, 4};
  CHECK(pigeonhole_scale(c).index == 0);
  CHECK(pigeonhole_scale(c).weight == pigeonhole_scale(c).threshold);
  const double z[] = {0, 5};
  CHECK(pigeonhole_scale(z).index == 0);
  CHECK(pigeonhole_scale(z).weight == 0.0);
  CHECK_THROWS_AS(pigeonhole_scale(std::vector<double>{}), ArgumentError);
}

TEST_CASE("pigeonhole certificate on random weights, exactly") {
  RandomStream r(4);
  for (int trial = 0; trial < 10000; ++trial) {
    std::vector<double> w(1 + r.next_below(40));
    for (auto& x : w) x = r.next_double() * 100.0;
    const auto s = pigeonhole_scale(w);
    REQUIRE(s.weight <= s.threshold);
    REQUIRE(*std::min_element(w.begin(), w.end()) == s.weight);
  }
}

TEST_CASE("weighted pigeonhole") {
  const auto pi = inverse_square_penalties(5);
  double total = 0.0;
  for (double p : pi) total += 1.0 / p;
  CHECK(total <= 1.0);
  CHECK(pi[0] == doctest::Approx(std::numbers::pi * std::numbers::pi / 6.0));

  const double one[] = {3.0};
  const double p1[] = {1.0};
  CHECK(pigeonhole_weighted_scale(one, p1).index == 0);

  const double last[] = {0, 0, 0, 0, 1};
  CHECK(pigeonhole_weighted_scale(last, pi).index == 4);

  // Equal weights: the first scale whose share W/(pi_j B) drops to the common weight.
  const std::vector<double> flat(5, 1.0);
  const auto choice = pigeonhole_weighted_scale(flat, pi);
  double B = 0.0;
  for (double p : pi) B += 1.0 / p;
  std::size_t expect = 0;
  while (1.0 < 5.0 / (pi[expect] * B)) ++expect;
  CHECK(choice.index == expect);

  RandomStream r(8);
  for (int trial = 0; trial < 2000; ++trial) {
    const std::size_t J = 1 + r.next_below(30);
    const auto pen = inverse_square_penalties(J);
    std::vector<double> w(J);
    for (auto& x : w) x = r.next_double() < 0.5 ? 0.0 : r.next_double();
    w[r.next_below(J)] += 1e-3;
    const auto c = pigeonhole_weighted_scale(w, pen);
    REQUIRE(c.weight >= c.threshold);
  }
  const double bad[] = {0.5, 0.5};
  CHECK_THROWS_AS(pigeonhole_weighted_scale(one, std::vector<double>{0.5}), ArgumentError);
  CHECK_THROWS_AS(pigeonhole_weighted_scale(std::vector<double>{1, 1}, bad), ArgumentError);
}

TEST_CASE("bohr_build examples") {
  const double third[] = {1.0 / 3.0};
  const auto b = bohr_build(10, third, 0.1);
  CHECK(b.members == std::vector<std::int64_t>{-9, -6, -3, 0, 3, 6, 9});
  CHECK(bohr_build(10, third, 0.4).size() == 21);
  CHECK(bohr_build(10, std::vector<double>{}, 0.01).size() == 21);
}

TEST_CASE("bohr sets agree with the integer oracle on rational frequencies") {
  RandomStream r(13);
  for (int trial = 0; trial < 100; ++trial) {
    const std::int64_t N = 1 + static_cast<std::int64_t>(r.next_below(300));
    std::vector<std::pair<int, int>> S;
    std::vector<double> freqs;
    const auto k = r.next_below(4);
    for (std::uint64_t i = 0; i < k; ++i) {
      const int q = 2 + static_cast<int>(r.next_below(40));
      const int a = static_cast<int>(r.next_below(q));
      S.emplace_back(a, q);
      freqs.push_back(static_cast<double>(a) / q);
    }
    // Radii strictly between the attainable values d/q avoid boundary ties.
    const int rho_den = 997;
    const int rho_num = 1 + static_cast<int>(r.next_below(498));
    const auto got = bohr_build(N, freqs, static_cast<double>(rho_num) / rho_den);
    REQUIRE(got.members == rational_bohr(N, S, rho_num, rho_den));
  }
}

TEST_CASE("bohr set invariants") {
  RandomStream r(99);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> freqs(1 + r.next_below(3));
    for (auto& f : freqs) f = r.next_double();
    const BohrProfile prof(2000, freqs);
    std::size_t prev = 0;
    for (double rho = 0.01; rho <= 0.5; rho += 0.01) {
      const auto b = prof.build(rho);
      REQUIRE(std::binary_search(b.members.begin(), b.members.end(), 0));
      for (auto n : b.members) REQUIRE(std::binary_search(b.members.begin(), b.members.end(), -n));
      REQUIRE(b.size() >= prev);
      REQUIRE(b.size() == prof.size_at(rho));
      prev = b.size();
    }
    // Adding a frequency can only shrink the set.
    auto more = freqs;
    more.push_back(r.next_double());
    const BohrProfile bigger(2000, more);
    for (double rho = 0.02; rho <= 0.5; rho += 0.04) REQUIRE(bigger.size_at(rho) <= prof.size_at(rho));
  }
}

TEST_CASE("doubling check") {
  const double third[] = {1.0 / 3.0};
  const auto d = bohr_doubling_check(10, third, 0.1);
  CHECK(d.ratio == 1.0);
  CHECK_FALSE(d.violation);
  CHECK(bohr_doubling_check(10, std::vector<double>{}, 0.2).ratio == 1.0);

  RandomStream r(31);
  std::vector<double> freqs(3);
  for (auto& f : freqs) f = r.next_double();
  const BohrProfile prof(10000, freqs);
  for (int i = 0; i < 100; ++i) {
    const double rho = 0.001 + r.next_double() * 0.249;
    REQUIRE_FALSE(bohr_doubling_check(prof, rho).violation);
  }
}

TEST_CASE("regular radius") {
  const auto empty = regular_radius(100, std::vector<double>{}, 0.1, 1.0);
  REQUIRE(empty.rho);
  CHECK(*empty.rho == 0.1);

  const double golden[] = {(std::sqrt(5.0) - 1.0) / 2.0};
  const auto g = regular_radius(10000, golden, 0.05, 100.0);
  REQUIRE(g.rho);
  CHECK(*g.rho >= 0.05);
  CHECK(*g.rho <= 0.1);
  REQUIRE_FALSE(g.transcript.empty());
  for (const auto& p : g.transcript) {
    CHECK(p.within);
    CHECK(p.ratio >= p.lower);
    CHECK(p.ratio <= p.upper);
  }

  const double half[] = {0.5};
  const auto h = regular_radius(100, half, 0.2, 100.0);
  REQUIRE(h.rho);
  CHECK(*h.rho >= 0.2);
  CHECK(*h.rho <= 0.4);
  CHECK_THROWS_AS(regular_radius(100, half, 0.3, 100.0), ArgumentError);
}
