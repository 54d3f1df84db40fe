#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace dyadkit {

// Decreasing scales t_1 > ... > t_J > 0, optionally lacunary (t_{j+1} <= t_j/2).
class ScaleLadder {
 public:
  explicit ScaleLadder(std::vector<double> scales, bool require_lacunary = true);
  // t_j = top * 2^{-(j-1)}, j = 1..J.
  static ScaleLadder lacunary(std::size_t J, double top = 1.0);

  std::span<const double> scales() const noexcept { return scales_; }
  std::size_t size() const noexcept { return scales_.size(); }
  double operator[](std::size_t j) const { return scales_.at(j); }
  bool is_lacunary() const noexcept;

 private:
  std::vector<double> scales_;
};

struct CondensationReport {
  double partial_sum = 0.0;            // sum_{n <= 2^K} f(n)
  double condensed_partial_sum = 0.0;  // sum_{k < K} 2^k f(2^k)
  bool sandwich_ok = true;  // 2^k f(2^{k+1}) <= block_k <= 2^k f(2^k) for all k < K
  std::vector<double> block_sums;      // sum over 2^k <= n < 2^{k+1}
};

// f_values[i] holds f(i+1); at least 2^K values are required.
CondensationReport condensation_test(std::span<const double> f_values, int K);

struct ScaleChoice {
  std::size_t index = 0;  // zero-based
  double weight = 0.0;
  double threshold = 0.0;  // the fair-share bound the choice is certified against
};

// Smallest-index minimiser of w; certified w[index] <= mean(w).
ScaleChoice pigeonhole_scale(std::span<const double> weights);

// Large-coordinate selection under a summed lower bound.  Penalties pi_j > 0
// with sum 1/pi_j <= 1.  Returns the smallest j with
//   w_j >= (1/pi_j) * (sum_k w_k) / (sum_k 1/pi_k),
// which always exists because the shares (1/pi_j)/(sum 1/pi_k) sum to one.
ScaleChoice pigeonhole_weighted_scale(std::span<const double> weights,
                                      std::span<const double> penalties);

// 1/pi_j = (6/pi^2) / j^2, j = 1..J.
std::vector<double> inverse_square_penalties(std::size_t J);

// Membership slack for ||n theta|| <= rho comparisons.
inline constexpr double kBohrTolerance = 1e-12;

struct BohrSet {
  std::int64_t N = 0;
  std::vector<double> freqs;
  double rho = 0.0;
  std::vector<std::int64_t> members;  // ascending
  std::size_t size() const noexcept { return members.size(); }
};

// Precomputed r(n) = max_theta ||n theta|| over |n| <= N; |B(S, rho)| is then
// a sorted-array lookup, which makes radius scans cheap.
class BohrProfile {
 public:
  BohrProfile(std::int64_t N, std::vector<double> freqs);

  std::int64_t N() const noexcept { return N_; }
  std::span<const double> freqs() const noexcept { return freqs_; }
  std::size_t size_at(double rho) const;
  BohrSet build(double rho) const;

 private:
  std::int64_t N_;
  std::vector<double> freqs_;
  std::vector<double> radius_;  // r(n) indexed by n + N
  std::vector<double> sorted_;
};

BohrSet bohr_build(std::int64_t N, std::span<const double> freqs, double rho);

struct DoublingCheck {
  std::size_t size_rho = 0;
  std::size_t size_2rho = 0;
  double ratio = 1.0;
  double limit = 1.0;  // C0^{|S|}
  bool violation = false;
};

inline constexpr double kDefaultDoublingConstant = 5.0;

DoublingCheck bohr_doubling_check(const BohrProfile& profile, double rho,
                                  double C0 = kDefaultDoublingConstant);
DoublingCheck bohr_doubling_check(std::int64_t N, std::span<const double> freqs,
                                  double rho, double C0 = kDefaultDoublingConstant);

struct RegularityProbe {
  double rho_prime = 0.0;
  std::size_t size = 0;
  double ratio = 1.0;
  double lower = 1.0;
  double upper = 1.0;
  bool within = true;
};

struct RadiusCandidate {
  double rho = 0.0;
  std::size_t size = 0;
  bool verified = false;
};

struct RegularRadiusOptions {
  std::size_t candidates = 64;   // geometric grid over [rho0, 2 rho0]
  std::size_t test_points = 10;  // per side of the window
};

struct RegularRadiusReport {
  std::optional<double> rho;  // empty: no candidate verified (kappa too small)
  std::vector<RadiusCandidate> candidates;
  std::vector<RegularityProbe> transcript;  // probes of the returned radius
};

// A candidate rho is regular when every probe rho' with |rho'-rho| within
// rho/(100(|S|+1)) has |B(rho')|/|B(rho)| inside exp(+-kappa |S| |rho'-rho|/rho).
RegularRadiusReport regular_radius(const BohrProfile& profile, double rho0, double kappa,
                                   const RegularRadiusOptions& options = {});
RegularRadiusReport regular_radius(std::int64_t N, std::span<const double> freqs,
                                   double rho0, double kappa,
                                   const RegularRadiusOptions& options = {});

}  // namespace dyadkit
