#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "dyadkit/errors.hpp"
#include "dyadkit/harmonic.hpp"

using namespace dyadkit;
using cplx = std::complex<double>;

TEST_CASE("single characters and the empty set") {
  for (std::size_t i : {1u, 5u, 16u}) {
    const std::size_t S[] = {i};
    const auto e = lambda_p_estimate(16, 4.0, S, 4, RandomStream(1));
    CHECK(e.K == doctest::Approx(1.0).epsilon(1e-9));
  }
  const auto none = lambda_p_estimate(16, 4.0, std::vector<std::size_t>{}, 4, RandomStream(1));
  CHECK(none.K == 0.0);
  const std::size_t bad[] = {17};
  CHECK_THROWS_AS(lambda_p_estimate(16, 4.0, bad, 1, RandomStream(1)), ArgumentError);
  const std::size_t ok[] = {1};
  CHECK_THROWS_AS(lambda_p_estimate(16, 2.0, ok, 1, RandomStream(1)), ArgumentError);
}

TEST_CASE("two characters: the L4 norm of (phi_i + phi_j)/sqrt 2") {
  // mean |1 + z|^4 = 6 when z and z^2 are nontrivial roots of unity.
  const std::size_t S[] = {3, 7};
  const std::vector<cplx> a{1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0)};
  CHECK(character_lp_norm(32, 4.0, S, a) == doctest::Approx(std::pow(6.0 / 4.0, 0.25)).epsilon(1e-12));
}

TEST_CASE("full set: the flat vector attains n^{1/2 - 1/p}") {
  std::vector<std::size_t> S(8);
  for (std::size_t i = 0; i < 8; ++i) S[i] = i + 1;
  const std::vector<cplx> flat(8, 1.0 / std::sqrt(8.0));
  // Sum of all characters is n at x = 0 and 0 elsewhere.
  CHECK(character_lp_norm(8, 4.0, S, flat) == doctest::Approx(std::pow(8.0, 0.25)).epsilon(1e-12));
  CHECK(full_set_lambda_p(8, 4.0) == doctest::Approx(std::pow(8.0, 0.25)));
  const auto e = lambda_p_estimate(8, 4.0, S, 6, RandomStream(2));
  CHECK(e.K == doctest::Approx(std::pow(8.0, 0.25)).epsilon(1e-9));
  CHECK(full_set_lambda_p(256, 4.0) == doctest::Approx(4.0));
}

TEST_CASE("estimates are certified: they are attained and bounded by sqrt|S|") {
  RandomStream r(3);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 16 + r.next_below(48);
    auto S = random_index_set(n, 0.2, r.split(trial));
    if (S.empty()) S.push_back(1);
    const auto e = lambda_p_estimate(n, 4.0, S, 4, r.split(1000 + trial));
    REQUIRE(e.K >= 1.0);
    REQUIRE(e.K <= std::sqrt(static_cast<double>(S.size())) + 1e-9);
    double norm = 0.0;
    for (auto c : e.coefficients) norm += std::norm(c);
    REQUIRE(norm == doctest::Approx(1.0).epsilon(1e-9));
    REQUIRE(character_lp_norm(n, 4.0, S, e.coefficients) == doctest::Approx(e.K).epsilon(1e-9));
  }
}

TEST_CASE("estimate is monotone under inclusion of index sets") {
  RandomStream r(4);
  for (int trial = 0; trial < 15; ++trial) {
    const std::size_t n = 64;
    auto big = random_index_set(n, 0.25, r.split(trial));
    if (big.size() < 2) continue;
    std::vector<std::size_t> small(big.begin(), big.begin() + static_cast<long>(big.size() / 2));
    const auto es = lambda_p_estimate(n, 4.0, small, 4, r.split(100 + trial));
    // Warm-start the larger problem from the smaller optimum, padded with zeros.
    LambdaPOptions opt;
    std::vector<cplx> warm(big.size(), 0.0);
    std::copy(es.coefficients.begin(), es.coefficients.end(), warm.begin());
    opt.warm_starts.push_back(warm);
    const auto eb = lambda_p_estimate(n, 4.0, big, 4, r.split(200 + trial), opt);
    REQUIRE(es.K <= eb.K + 1e-6);
  }
}

TEST_CASE("index set builders") {
  CHECK(square_index_set(8, 10) == std::vector<std::size_t>{1, 4, 8});
  const auto sq = square_index_set(64, 8);
  CHECK(sq.size() == 8);
  for (auto i : sq) CHECK((i >= 1 && i <= 64));
  const auto a = random_index_set(100, 0.3, RandomStream(5));
  CHECK(a == random_index_set(100, 0.3, RandomStream(5)));
  CHECK(random_index_set(100, 0.0, RandomStream(5)).empty());
  CHECK(random_index_set(100, 1.0, RandomStream(5)).size() == 100);
}

TEST_CASE("random trial at n = 64") {
  const auto t = lambda_p_random_trial(64, 4.0, 50, 4, RandomStream(6));
  CHECK(t.random.values.size() == 50);
  CHECK(t.random.median >= 1.0);
  CHECK(t.random.median <= t.full_set);
  CHECK(t.structured.values.front() >= 1.0);
}
