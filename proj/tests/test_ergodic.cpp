#include <doctest.h>

#include <cmath>
#include <vector>

#include "dyadkit/errors.hpp"
#include "dyadkit/harmonic.hpp"
#include "dyadkit/random.hpp"

using namespace dyadkit;

namespace {

CyclicSystem indicator_of_zero(std::uint64_t m) {
  std::vector<double> f(m, 0.0);
  f[0] = 1.0;
  return CyclicSystem(m, 1, f);
}

}  // namespace

TEST_CASE("constant functions average to themselves") {
  const CyclicSystem sys(7, 3, std::vector<double>(7, 2.5));
  for (std::uint64_t N : {1u, 2u, 10u, 1000u}) CHECK(ergodic_average(sys, 4, N) == 2.5);
  CHECK(maximal_function(sys, 0, 50) == 2.5);
  const auto br = lacunary_integers(2.0, 1024);
  CHECK(variational_sum(sys, 1, 2.0, br).pointwise == 0.0);
  CHECK(variational_sum(sys, 1, 2.0, br).l2 == 0.0);
}

TEST_CASE("mod 4 squares") {
  const auto sys = indicator_of_zero(4);
  const auto A = ergodic_averages(sys, 0, 4);
  CHECK(A[0] == 0.0);
  CHECK(A[1] == 0.5);
  CHECK(A[2] == doctest::Approx(1.0 / 3.0));
  CHECK(A[3] == 0.5);
  CHECK(ergodic_average(sys, 0, 4) == 0.5);
  CHECK(maximal_function(sys, 0, 4) == 0.5);
}

TEST_CASE("mod 5 squares hit zero exactly when 5 | n") {
  const auto sys = indicator_of_zero(5);
  CHECK(ergodic_average(sys, 0, 100000) == 0.2);
  const auto A = ergodic_averages(sys, 0, 100000);
  for (std::size_t N = 1; N <= A.size(); ++N) {
    const double exact = static_cast<double>(N / 5) / static_cast<double>(N);
    REQUIRE(std::fabs(A[N - 1] - exact) < 1e-12);
    REQUIRE(std::fabs(A[N - 1] - 0.2) <= 10.0 / static_cast<double>(N));
  }
}

TEST_CASE("Cesaro bound and the orbit-shift relation") {
  RandomStream r(7);
  for (int trial = 0; trial < 30; ++trial) {
    const std::uint64_t m = 2 + r.next_below(50);
    std::vector<double> f(m);
    double fmax = 0.0;
    for (auto& v : f) {
      v = 2.0 * r.next_double() - 1.0;
      fmax = std::max(fmax, std::fabs(v));
    }
    const CyclicSystem sys(m, r.next_below(m), f);
    const auto g = sys.composed_with_map();
    const std::uint64_t x = r.next_below(m);
    const auto A = ergodic_averages(sys, x, 500);
    for (double a : A) REQUIRE(std::fabs(a) <= fmax * (1.0 + 1e-12));
    // A_N (f o T)(x) = A_N f(T x).
    const auto B = ergodic_averages(g, x, 500);
    const auto C = ergodic_averages(sys, sys.iterate(x, 1), 500);
    for (std::size_t k = 0; k < B.size(); ++k) REQUIRE(std::fabs(B[k] - C[k]) <= 1e-12);
    REQUIRE(maximal_function(sys, x, 500) >= std::fabs(A[0]));
  }
}

TEST_CASE("lacunary integers") {
  CHECK(lacunary_integers(2.0, 20) == std::vector<std::uint64_t>{2, 4, 8, 16});
  CHECK(lacunary_integers(1.5, 10) == std::vector<std::uint64_t>{1, 2, 3, 5, 7});
  CHECK_THROWS_AS(lacunary_integers(1.0, 10), ArgumentError);
}

TEST_CASE("variational sums") {
  const auto sys = indicator_of_zero(5);
  // One block is the largest deviation inside it.
  const std::uint64_t one_block[] = {4, 32};
  const auto v = variational_sum(sys, 0, 2.0, one_block);
  const auto A = ergodic_averages(sys, 0, 32);
  double want = 0.0;
  for (std::uint64_t N : {4u, 8u, 16u, 32u}) want = std::max(want, std::fabs(A[N - 1] - A[3]));
  CHECK(v.block_sup.size() == 1);
  CHECK(v.pointwise == want);

  std::vector<std::uint64_t> breaks;
  for (int k = 1; k <= 14; ++k) breaks.push_back(std::uint64_t{1} << k);
  const auto full = variational_sum(sys, 0, 2.0, breaks);
  CHECK(full.block_sup.size() == 13);
  CHECK(full.block_l2.size() == 13);
  // Late blocks move less than early ones.
  CHECK(full.block_sup.back() <= full.block_sup.front());

  const std::uint64_t descending[] = {8, 4};
  CHECK_THROWS_AS(variational_sum(sys, 0, 2.0, descending), ArgumentError);
  const std::uint64_t off_ladder[] = {4, 6};
  CHECK_THROWS_AS(variational_sum(sys, 0, 2.0, off_ladder), ArgumentError);
}
