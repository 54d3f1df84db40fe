#include "dyadkit/dyadic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "dyadkit/errors.hpp"
#include "dyadkit/numeric.hpp"

namespace dyadkit {

ScaleLadder::ScaleLadder(std::vector<double> scales, bool require_lacunary)
    : scales_(std::move(scales)) {
  require(!scales_.empty(), "scale ladder is empty");
  for (std::size_t j = 0; j < scales_.size(); ++j) {
    require(scales_[j] > 0.0, "scales must be positive");
    if (j > 0) require(scales_[j] < scales_[j - 1], "scales must be strictly decreasing");
  }
  if (require_lacunary) require(is_lacunary(), "ladder violates t_{j+1} <= t_j/2");
}

ScaleLadder ScaleLadder::lacunary(std::size_t J, double top) {
  require(J >= 1, "ladder needs at least one scale");
  std::vector<double> t(J);
  for (std::size_t j = 0; j < J; ++j) t[j] = std::ldexp(top, -static_cast<int>(j));
  return ScaleLadder(std::move(t));
}

bool ScaleLadder::is_lacunary() const noexcept {
  for (std::size_t j = 1; j < scales_.size(); ++j)
    if (scales_[j] > scales_[j - 1] / 2.0) return false;
  return true;
}

CondensationReport condensation_test(std::span<const double> f, int K) {
  require(K >= 0 && K < 62, "K out of range");
  const std::size_t top = std::size_t{1} << K;
  require(f.size() >= top, "need f(1..2^K)");
  for (std::size_t i = 0; i < top; ++i) {
    require(f[i] >= 0.0, "f must be non-negative");
    if (i > 0) require(f[i] <= f[i - 1], "f must be non-increasing");
  }
  CondensationReport r;
  CompensatedSum total;
  CompensatedSum condensed;
  for (int k = 0; k < K; ++k) {
    const std::size_t lo = std::size_t{1} << k;
    CompensatedSum block;
    for (std::size_t n = lo; n < 2 * lo; ++n) block.add(f[n - 1]);
    const double b = block.value();
    const double scale = static_cast<double>(lo);
    const double upper = scale * f[lo - 1];
    const double lower = scale * f[2 * lo - 1];
    // Summation may round by a few ulps past the exact bounds.
    const double slack = 8.0 * std::numeric_limits<double>::epsilon() * upper;
    if (b > upper + slack || b < lower - slack) r.sandwich_ok = false;
    r.block_sums.push_back(b);
    total.add(b);
    condensed.add(upper);
  }
  total.add(f[top - 1]);
  r.partial_sum = total.value();
  r.condensed_partial_sum = condensed.value();
  return r;
}

ScaleChoice pigeonhole_scale(std::span<const double> w) {
  require(!w.empty(), "pigeonhole needs at least one weight");
  CompensatedSum total;
  std::size_t best = 0;
  for (std::size_t j = 0; j < w.size(); ++j) {
    require(w[j] >= 0.0, "weights must be non-negative");
    total.add(w[j]);
    if (w[j] < w[best]) best = j;
  }
  return {best, w[best], total.value() / static_cast<double>(w.size())};
}

std::vector<double> inverse_square_penalties(std::size_t J) {
  std::vector<double> pi(J);
  const double norm = std::numbers::pi * std::numbers::pi / 6.0;
  for (std::size_t j = 0; j < J; ++j) {
    const double jj = static_cast<double>(j + 1);
    pi[j] = jj * jj * norm;
  }
  return pi;
}

ScaleChoice pigeonhole_weighted_scale(std::span<const double> w,
                                      std::span<const double> penalties) {
  require(!w.empty(), "pigeonhole needs at least one weight");
  require(w.size() == penalties.size(), "weights and penalties differ in length");
  CompensatedSum total;
  CompensatedSum budget;
  for (std::size_t j = 0; j < w.size(); ++j) {
    require(w[j] >= 0.0, "weights must be non-negative");
    require(penalties[j] > 0.0, "penalties must be positive");
    total.add(w[j]);
    budget.add(1.0 / penalties[j]);
  }
  require(budget.value() <= 1.0 + 1e-12, "penalty reciprocals must sum to <= 1");
  const double W = total.value();
  const double B = budget.value();
  for (std::size_t j = 0; j < w.size(); ++j) {
    const double share = W / (penalties[j] * B);
    if (w[j] >= share) return {j, w[j], share};
  }
  // Unreachable in exact arithmetic; fall back to the largest slack ratio.
  std::size_t best = 0;
  for (std::size_t j = 1; j < w.size(); ++j)
    if (w[j] * penalties[j] > w[best] * penalties[best]) best = j;
  return {best, w[best], W / (penalties[best] * B)};
}

BohrProfile::BohrProfile(std::int64_t N, std::vector<double> freqs)
    : N_(N), freqs_(std::move(freqs)) {
  require(N >= 1, "Bohr range N must be >= 1");
  radius_.resize(static_cast<std::size_t>(2 * N + 1), 0.0);
  for (std::int64_t n = -N; n <= N; ++n) {
    double r = 0.0;
    for (double theta : freqs_) {
      const long double x = static_cast<long double>(n) * theta;
      const long double f = x - std::floor(x);
      r = std::max(r, static_cast<double>(f < 0.5L ? f : 1.0L - f));
    }
    radius_[static_cast<std::size_t>(n + N)] = r;
  }
  sorted_ = radius_;
  std::sort(sorted_.begin(), sorted_.end());
}

std::size_t BohrProfile::size_at(double rho) const {
  return static_cast<std::size_t>(
      std::upper_bound(sorted_.begin(), sorted_.end(), rho + kBohrTolerance) -
      sorted_.begin());
}

BohrSet BohrProfile::build(double rho) const {
  require(rho > 0.0 && rho <= 0.5, "Bohr radius must lie in (0, 1/2]");
  BohrSet b{N_, freqs_, rho, {}};
  for (std::int64_t n = -N_; n <= N_; ++n)
    if (radius_[static_cast<std::size_t>(n + N_)] <= rho + kBohrTolerance)
      b.members.push_back(n);
  return b;
}

BohrSet bohr_build(std::int64_t N, std::span<const double> freqs, double rho) {
  return BohrProfile(N, {freqs.begin(), freqs.end()}).build(rho);
}

DoublingCheck bohr_doubling_check(const BohrProfile& profile, double rho, double C0) {
  require(rho > 0.0 && 2.0 * rho <= 0.5, "doubling check needs 0 < 2 rho <= 1/2");
  DoublingCheck d;
  d.size_rho = profile.size_at(rho);
  d.size_2rho = profile.size_at(2.0 * rho);
  d.ratio = static_cast<double>(d.size_2rho) / static_cast<double>(d.size_rho);
  d.limit = std::pow(C0, static_cast<double>(profile.freqs().size()));
  d.violation = d.ratio > d.limit;
  return d;
}

DoublingCheck bohr_doubling_check(std::int64_t N, std::span<const double> freqs,
                                  double rho, double C0) {
  return bohr_doubling_check(BohrProfile(N, {freqs.begin(), freqs.end()}), rho, C0);
}

namespace {

std::vector<RegularityProbe> probe_radius(const BohrProfile& profile, double rho,
                                          double kappa, std::size_t test_points,
                                          bool& ok) {
  const double dim = static_cast<double>(profile.freqs().size());
  const double half_width = rho / (100.0 * (dim + 1.0));
  const std::size_t base = profile.size_at(rho);
  std::vector<RegularityProbe> probes;
  ok = true;
  for (std::size_t k = 1; k <= test_points; ++k) {
    for (int sign : {-1, 1}) {
      RegularityProbe p;
      const double offset = half_width * static_cast<double>(k) /
                            static_cast<double>(test_points);
      p.rho_prime = rho + sign * offset;
      p.size = profile.size_at(p.rho_prime);
      p.ratio = static_cast<double>(p.size) / static_cast<double>(base);
      const double exponent = kappa * dim * offset / rho;
      p.lower = std::exp(-exponent);
      p.upper = std::exp(exponent);
      p.within = p.ratio >= p.lower && p.ratio <= p.upper;
      ok = ok && p.within;
      probes.push_back(p);
    }
  }
  return probes;
}

}  // namespace

RegularRadiusReport regular_radius(const BohrProfile& profile, double rho0, double kappa,
                                   const RegularRadiusOptions& options) {
  const double window = 1.0 / (100.0 * (static_cast<double>(profile.freqs().size()) + 1.0));
  require(rho0 > 0.0 && 2.0 * rho0 * (1.0 + window) <= 0.5,
          "regular_radius needs the probe window around [rho0, 2 rho0] inside (0, 1/2]");
  require(kappa > 0.0, "kappa must be positive");
  require(options.candidates >= 1 && options.test_points >= 1, "empty search grid");
  RegularRadiusReport report;
  for (std::size_t c = 0; c < options.candidates; ++c) {
    const double u = options.candidates == 1
                         ? 0.0
                         : static_cast<double>(c) / static_cast<double>(options.candidates - 1);
    const double rho = rho0 * std::exp2(u);
    bool ok = false;
    auto probes = probe_radius(profile, rho, kappa, options.test_points, ok);
    report.candidates.push_back({rho, profile.size_at(rho), ok});
    if (ok && !report.rho) {
      report.rho = rho;
      report.transcript = std::move(probes);
    }
  }
  return report;
}

RegularRadiusReport regular_radius(std::int64_t N, std::span<const double> freqs,
                                   double rho0, double kappa,
                                   const RegularRadiusOptions& options) {
  return regular_radius(BohrProfile(N, {freqs.begin(), freqs.end()}), rho0, kappa, options);
}

}  // namespace dyadkit
