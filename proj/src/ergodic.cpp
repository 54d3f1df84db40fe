#include <algorithm>
#include <cmath>
#include <string>

#include "dyadkit/errors.hpp"
#include "dyadkit/harmonic.hpp"

namespace dyadkit {

namespace {

constexpr std::uint64_t kMaxWork = 2'000'000'000ull;

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

}  // namespace

CyclicSystem::CyclicSystem(std::uint64_t m, std::uint64_t shift, std::vector<double> f)
    : m_(m), a_(m ? shift % m : 0), f_(std::move(f)) {
  require(m_ >= 1, "modulus must be positive");
  require(f_.size() == m_, "function must have one value per residue");
  for (double v : f_) require(std::isfinite(v), "function values must be finite");
}

std::uint64_t CyclicSystem::iterate(std::uint64_t x, std::uint64_t k) const noexcept {
  return (x % m_ + mulmod(a_, k % m_, m_)) % m_;
}

CyclicSystem CyclicSystem::composed_with_map() const {
  std::vector<double> g(m_);
  for (std::uint64_t x = 0; x < m_; ++x) g[x] = f_[iterate(x, 1)];
  return CyclicSystem(m_, a_, std::move(g));
}

std::vector<double> ergodic_averages(const CyclicSystem& sys, std::uint64_t x,
                                     std::uint64_t N_max) {
  require(N_max >= 1, "N must be at least 1");
  if (N_max > kMaxWork) throw BudgetError("N exceeds the work budget");
  const std::uint64_t m = sys.modulus();
  std::vector<double> out(N_max);
  CompensatedSum sum;
  for (std::uint64_t n = 1; n <= N_max; ++n) {
    const std::uint64_t r = n % m;
    sum.add(sys.function()[sys.iterate(x, mulmod(r, r, m))]);
    out[n - 1] = sum.value() / static_cast<double>(n);
  }
  return out;
}

double ergodic_average(const CyclicSystem& sys, std::uint64_t x, std::uint64_t N) {
  return ergodic_averages(sys, x, N).back();
}

double maximal_function(const CyclicSystem& sys, std::uint64_t x, std::uint64_t N_max) {
  double best = 0.0;
  for (double a : ergodic_averages(sys, x, N_max)) best = std::max(best, std::fabs(a));
  return best;
}

std::vector<std::uint64_t> lacunary_integers(double lambda, std::uint64_t max) {
  require(lambda > 1.0, "lambda must exceed 1");
  std::vector<std::uint64_t> out;
  const long double l = lambda;
  for (int n = 1;; ++n) {
    const long double v = std::floor(std::pow(l, static_cast<long double>(n)));
    if (v > static_cast<long double>(max)) break;
    const auto z = static_cast<std::uint64_t>(v);
    if (z >= 1 && (out.empty() || out.back() != z)) out.push_back(z);
  }
  return out;
}

VariationalResult variational_sum(const CyclicSystem& sys, std::uint64_t x, double lambda,
                                  std::span<const std::uint64_t> breaks) {
  for (std::size_t j = 1; j < breaks.size(); ++j)
    require(breaks[j] > breaks[j - 1], "breaks must be strictly increasing");
  VariationalResult out;
  if (breaks.empty()) return out;
  const std::uint64_t top = breaks.back();
  const auto Z = lacunary_integers(lambda, top);
  for (auto b : breaks)
    require(std::binary_search(Z.begin(), Z.end(), b),
            "break " + std::to_string(b) + " is not of the form floor(lambda^n)");
  const std::uint64_t m = sys.modulus();
  if (top > kMaxWork / std::max<std::uint64_t>(1, m))
    throw BudgetError("variational sum exceeds the work budget");

  const std::size_t blocks = breaks.size() - 1;
  auto block_sups = [&](std::uint64_t point) {
    const auto A = ergodic_averages(sys, point, top);
    std::vector<double> sups(blocks, 0.0);
    for (std::size_t j = 0; j < blocks; ++j) {
      const double base = A[breaks[j] - 1];
      auto lo = std::lower_bound(Z.begin(), Z.end(), breaks[j]);
      auto hi = std::upper_bound(Z.begin(), Z.end(), breaks[j + 1]);
      for (auto it = lo; it != hi; ++it)
        sups[j] = std::max(sups[j], std::fabs(A[*it - 1] - base));
    }
    return sups;
  };

  out.block_sup = block_sups(x % m);
  out.pointwise = compensated_sum(out.block_sup);
  std::vector<CompensatedSum> sq(blocks);
  for (std::uint64_t y = 0; y < m; ++y) {
    const auto s = block_sups(y);
    for (std::size_t j = 0; j < blocks; ++j) sq[j].add(s[j] * s[j]);
  }
  for (std::size_t j = 0; j < blocks; ++j)
    out.block_l2.push_back(std::sqrt(sq[j].value() / static_cast<double>(m)));
  out.l2 = compensated_sum(out.block_l2);
  return out;
}

}  // namespace dyadkit
