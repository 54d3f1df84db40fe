#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <numbers>
#include <string>

#include "dyadkit/errors.hpp"
#include "dyadkit/harmonic.hpp"

namespace dyadkit {

namespace {

constexpr double kMaxScale = 2.0;

std::int64_t wrap(std::int64_t x, std::uint64_t n) {
  const auto m = static_cast<std::int64_t>(n);
  const std::int64_t r = x % m;
  return r < 0 ? r + m : r;
}

void check_scale(double t) {
  if (!(t >= 0.0) || t > kMaxScale)
    throw ArgumentError("scale t=" + std::to_string(t) + " outside the guard [0, 2]");
}

void check_grid(const IndicatorSet& B, const PlaneGrid& grid) {
  require(B.carrier() == grid.torus().group(), "set does not live on this plane grid");
  require(B.is_explicit(), "plane sets must be explicit");
}

// Snapped shifts of the atoms at scale t, with multiplicity.
std::map<std::pair<std::int64_t, std::int64_t>, std::size_t> circle_shifts(
    const PlaneGrid& grid, double t, const CircleMeasure& sigma) {
  std::map<std::pair<std::int64_t, std::int64_t>, std::size_t> shifts;
  for (std::size_t k = 0; k < sigma.size(); ++k) {
    const auto w = sigma.atom(k);
    const auto s = grid.snap(t * w[0], t * w[1]);
    ++shifts[{s[0], s[1]}];
  }
  return shifts;
}

struct Plan {
  fftw_plan p;
  explicit Plan(fftw_plan plan) : p(plan) {
    if (!p) throw InvariantError("fft-plan", "FFTW returned no plan");
  }
  ~Plan() { fftw_destroy_plan(p); }
  Plan(const Plan&) = delete;
  Plan& operator=(const Plan&) = delete;
  void run() const { fftw_execute(p); }
};

// Forward real-to-complex transform of an M x M array; row index is axis 1.
std::vector<std::complex<double>> forward(std::vector<double>& in, std::uint64_t M) {
  const int n = static_cast<int>(M);
  std::vector<std::complex<double>> out(M * (M / 2 + 1));
  Plan plan(fftw_plan_dft_r2c_2d(n, n, in.data(),
                                 reinterpret_cast<fftw_complex*>(out.data()),
                                 FFTW_ESTIMATE));
  plan.run();
  return out;
}

std::vector<double> inverse(std::vector<std::complex<double>>& in, std::uint64_t M) {
  const int n = static_cast<int>(M);
  std::vector<double> out(M * M);
  Plan plan(fftw_plan_dft_c2r_2d(n, n, reinterpret_cast<fftw_complex*>(in.data()),
                                 out.data(), FFTW_ESTIMATE));
  plan.run();
  return out;
}

}  // namespace

PlaneGrid::PlaneGrid(std::uint64_t cells_per_axis)
    : M_(cells_per_axis), torus_(2, cells_per_axis) {
  require(M_ >= 4 && M_ % 4 == 0, "plane grid needs a positive multiple of 4 cells per axis");
  require(M_ <= 8192, "plane grid larger than 8192 cells per axis");
}

std::array<double, 2> PlaneGrid::center(std::int64_t i, std::int64_t j) const {
  const double h = cell_length();
  return {-2.0 + (static_cast<double>(wrap(i, M_)) + 0.5) * h,
          -2.0 + (static_cast<double>(wrap(j, M_)) + 0.5) * h};
}

std::array<std::int64_t, 2> PlaneGrid::snap(double dx, double dy) const {
  const double inv = 1.0 / cell_length();
  return {std::llround(dx * inv), std::llround(dy * inv)};
}

IndicatorSet PlaneGrid::from_predicate(const std::function<bool(double, double)>& inside) const {
  std::vector<std::uint8_t> bits(M_ * M_, 0);
  for (std::uint64_t j = 0; j < M_; ++j)
    for (std::uint64_t i = 0; i < M_; ++i) {
      const auto c = center(static_cast<std::int64_t>(i), static_cast<std::int64_t>(j));
      if (std::fabs(c[0]) <= 1.0 && std::fabs(c[1]) <= 1.0 && inside(c[0], c[1]))
        bits[i + M_ * j] = 1;
    }
  return IndicatorSet::from_bits(torus_.group(), std::move(bits));
}

IndicatorSet PlaneGrid::square(double side) const {
  require(side >= 0.0 && side <= 2.0, "square side must lie in [0, 2]");
  const double h = side / 2.0;
  return from_predicate([h](double x, double y) { return std::fabs(x) < h && std::fabs(y) < h; });
}

IndicatorSet PlaneGrid::disk(double radius) const {
  require(radius >= 0.0 && radius <= 1.0, "disk radius must lie in [0, 1]");
  const double r2 = radius * radius;
  return from_predicate([r2](double x, double y) { return x * x + y * y < r2; });
}

IndicatorSet PlaneGrid::random_rectangles(std::size_t min_count, double target,
                                          RandomStream rng, std::size_t max_count) const {
  require(target > 0.0 && target <= 0.25, "rectangle target measure must lie in (0, 1/4]");
  require(min_count >= 1 && min_count <= max_count, "bad rectangle count");
  std::vector<std::uint8_t> bits(M_ * M_, 0);
  std::uint64_t filled = 0;
  const double area = target * 16.0 / static_cast<double>(min_count);
  const double h = cell_length();
  for (std::size_t r = 0; r < max_count; ++r) {
    if (r >= min_count && static_cast<double>(filled) >= target * static_cast<double>(M_ * M_))
      break;
    const double aspect = std::exp(std::log(0.5) + rng.next_double() * std::log(4.0));
    const double w = std::min(2.0, std::sqrt(area * aspect));
    const double ht = std::min(2.0, area / w);
    const double x0 = -1.0 + rng.next_double() * (2.0 - w);
    const double y0 = -1.0 + rng.next_double() * (2.0 - ht);
    const auto i0 = static_cast<std::int64_t>(std::ceil((x0 + 2.0) / h - 0.5));
    const auto i1 = static_cast<std::int64_t>(std::floor((x0 + w + 2.0) / h - 0.5));
    const auto j0 = static_cast<std::int64_t>(std::ceil((y0 + 2.0) / h - 0.5));
    const auto j1 = static_cast<std::int64_t>(std::floor((y0 + ht + 2.0) / h - 0.5));
    for (std::int64_t j = j0; j <= j1; ++j)
      for (std::int64_t i = i0; i <= i1; ++i) {
        auto& b = bits[static_cast<std::uint64_t>(i) + M_ * static_cast<std::uint64_t>(j)];
        if (!b) {
          b = 1;
          ++filled;
        }
      }
  }
  return IndicatorSet::from_bits(torus_.group(), std::move(bits));
}

CircleMeasure::CircleMeasure(std::size_t K) : K_(K) {
  require(K >= 1, "circle measure needs at least one atom");
}

std::array<double, 2> CircleMeasure::atom(std::size_t k) const {
  const double theta = 2.0 * std::numbers::pi * static_cast<double>(k % K_) /
                       static_cast<double>(K_);
  return {std::cos(theta), std::sin(theta)};
}

FkwCorrelator::FkwCorrelator(const IndicatorSet& B, const PlaneGrid& grid)
    : grid_(&grid), M_(grid.cells()), measure_(0.0) {
  check_grid(B, grid);
  measure_ = B.measure();
  std::vector<double> in(M_ * M_);
  const auto& bits = B.bits();
  for (std::size_t e = 0; e < in.size(); ++e) in[e] = bits[e];
  auto spectrum = forward(in, M_);
  power_.resize(spectrum.size());
  for (std::size_t k = 0; k < spectrum.size(); ++k) {
    power_[k] = std::norm(spectrum[k]);
    spectrum[k] = power_[k];
  }
  autocorr_ = inverse(spectrum, M_);
  const double scale = 1.0 / (static_cast<double>(M_ * M_) * static_cast<double>(M_ * M_));
  for (double& r : autocorr_) r *= scale;
}

double FkwCorrelator::autocorrelation(std::int64_t s0, std::int64_t s1) const {
  return autocorr_[static_cast<std::uint64_t>(wrap(s0, M_)) +
                   M_ * static_cast<std::uint64_t>(wrap(s1, M_))];
}

double FkwCorrelator::correlation(double t, const CircleMeasure& sigma) const {
  check_scale(t);
  CompensatedSum sum;
  for (const auto& [s, mult] : circle_shifts(*grid_, t, sigma))
    sum.add(static_cast<double>(mult) * autocorrelation(s.first, s.second));
  return sum.value() / static_cast<double>(sigma.size());
}

double FkwCorrelator::mean_over_all_shifts() const {
  return compensated_sum(autocorr_) / static_cast<double>(M_ * M_);
}

FrequencySplit FkwCorrelator::split(double t, double delta, const CircleMeasure& sigma) const {
  check_scale(t);
  require(delta > 0.0 && delta <= 0.5, "delta must lie in (0, 1/2]");
  std::vector<double> atoms(M_ * M_, 0.0);
  for (const auto& [s, mult] : circle_shifts(*grid_, t, sigma))
    atoms[static_cast<std::uint64_t>(wrap(s.first, M_)) +
          M_ * static_cast<std::uint64_t>(wrap(s.second, M_))] +=
        static_cast<double>(mult) / static_cast<double>(sigma.size());
  const auto transform = forward(atoms, M_);

  const double low_cut = t > 0.0 ? delta / t : INFINITY;
  const double high_cut = t > 0.0 ? 1.0 / (delta * t) : INFINITY;
  const double norm = 1.0 / (static_cast<double>(M_ * M_) * static_cast<double>(M_ * M_));
  const std::uint64_t half = M_ / 2 + 1;
  CompensatedSum low, medium, high;
  FrequencySplit out;
  for (std::uint64_t r = 0; r < M_; ++r) {
    const double k1 = r <= M_ / 2 ? static_cast<double>(r) : static_cast<double>(r) - static_cast<double>(M_);
    for (std::uint64_t c = 0; c < half; ++c) {
      const std::uint64_t idx = r * half + c;
      const double mult = (c == 0 || c == M_ / 2) ? 1.0 : 2.0;
      const double xi = std::hypot(static_cast<double>(c), k1) / 4.0;
      const double re = transform[idx].real();
      const double w = mult * power_[idx] * re * norm;
      if (xi <= low_cut) {
        low.add(w);
        out.min_low_transform = std::min(out.min_low_transform, re);
      } else if (xi <= high_cut) {
        medium.add(w);
      } else {
        high.add(w);
      }
    }
  }
  out.low = low.value();
  out.medium = medium.value();
  out.high = high.value();
  out.total = out.low + out.medium + out.high;
  out.low_transform_ok = out.min_low_transform >= 0.5;
  return out;
}

double fkw_correlation(const IndicatorSet& B, const PlaneGrid& grid, double t,
                       const CircleMeasure& sigma) {
  return FkwCorrelator(B, grid).correlation(t, sigma);
}

double fkw_correlation_direct(const IndicatorSet& B, const PlaneGrid& grid, double t,
                              const CircleMeasure& sigma) {
  check_grid(B, grid);
  check_scale(t);
  const std::uint64_t M = grid.cells();
  const auto members = B.members();
  const auto& bits = B.bits();
  CompensatedSum sum;
  for (const auto& [s, mult] : circle_shifts(grid, t, sigma)) {
    std::uint64_t hits = 0;
    const auto d0 = static_cast<std::uint64_t>(wrap(s.first, M));
    const auto d1 = static_cast<std::uint64_t>(wrap(s.second, M));
    for (Element e : members) {
      const std::uint64_t i = (e % M + d0) % M;
      const std::uint64_t j = (e / M + d1) % M;
      hits += bits[i + M * j];
    }
    sum.add(static_cast<double>(mult) * static_cast<double>(hits));
  }
  return sum.value() / (static_cast<double>(sigma.size()) * static_cast<double>(M * M));
}

FkwScan fkw_scan(const FkwCorrelator& B, const ScaleLadder& ladder,
                 const CircleMeasure& sigma, double c_fkw) {
  require(ladder.size() >= 1 && ladder[0] <= 1.0, "ladder must lie in (0, 1]");
  FkwScan scan;
  scan.threshold = c_fkw * B.measure() * B.measure();
  for (std::size_t j = 0; j < ladder.size(); ++j) {
    const double value = B.correlation(ladder[j], sigma);
    scan.scales.push_back(ladder[j]);
    scan.correlations.push_back(value);
    if (j == 0 || value > scan.max) {
      scan.max = value;
      scan.argmax = j;
    }
  }
  scan.pass = scan.max >= scan.threshold;
  return scan;
}

FkwScan fkw_scan(const IndicatorSet& B, const PlaneGrid& grid, const ScaleLadder& ladder,
                 const CircleMeasure& sigma, double c_fkw) {
  return fkw_scan(FkwCorrelator(B, grid), ladder, sigma, c_fkw);
}

FrequencySplit fkw_frequency_split(const IndicatorSet& B, const PlaneGrid& grid, double t,
                                   double delta, const CircleMeasure& sigma) {
  return FkwCorrelator(B, grid).split(t, delta, sigma);
}

std::size_t annulus_multiplicity(const ScaleLadder& ladder, double delta, double xi) {
  require(delta > 0.0 && delta <= 0.5, "delta must lie in (0, 1/2]");
  std::size_t count = 0;
  for (double t : ladder.scales())
    if (xi > delta / t && xi <= 1.0 / (delta * t)) ++count;
  return count;
}

std::size_t annulus_multiplicity_limit(double delta) {
  require(delta > 0.0 && delta <= 0.5, "delta must lie in (0, 1/2]");
  return static_cast<std::size_t>(std::ceil(std::log2(1.0 / (delta * delta)))) + 1;
}

}  // namespace dyadkit
