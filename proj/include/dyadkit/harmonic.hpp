#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "dyadkit/core.hpp"
#include "dyadkit/dyadic.hpp"
#include "dyadkit/numeric.hpp"
#include "dyadkit/random.hpp"

namespace dyadkit {

// ---------------------------------------------------------------------------
// Circle averages on the plane.  The plane window [-2,2)^2 is a torus of M x M
// cells (side 4/M); sets of interest live in [-1,1]^2, so shifts of length at
// most 2 never wrap one part of such a set onto another.  Measures are
// fractions of the whole torus.

class PlaneGrid {
 public:
  explicit PlaneGrid(std::uint64_t cells_per_axis);
  static PlaneGrid per_unit_length(std::uint64_t m) { return PlaneGrid(4 * m); }

  std::uint64_t cells() const noexcept { return M_; }
  double cell_length() const noexcept { return 4.0 / static_cast<double>(M_); }
  const GridTorus& torus() const noexcept { return torus_; }
  std::array<double, 2> center(std::int64_t i, std::int64_t j) const;
  // Nearest cell offset to a real displacement.
  std::array<std::int64_t, 2> snap(double dx, double dy) const;

  IndicatorSet from_predicate(const std::function<bool(double, double)>& inside) const;
  IndicatorSet square(double side) const;  // centred at the origin
  IndicatorSet disk(double radius) const;
  // Union of random axis-parallel rectangles inside [-1,1]^2, added until the
  // measure reaches `target` (or `max_count` rectangles were placed).
  IndicatorSet random_rectangles(std::size_t min_count, double target,
                                 RandomStream rng, std::size_t max_count = 1000) const;

 private:
  std::uint64_t M_;
  GridTorus torus_;
};

// K equispaced atoms of mass 1/K on the unit circle.
class CircleMeasure {
 public:
  explicit CircleMeasure(std::size_t K = 720);
  std::size_t size() const noexcept { return K_; }
  std::array<double, 2> atom(std::size_t k) const;

 private:
  std::size_t K_;
};

struct FrequencySplit {
  double low = 0.0;     // |xi| <= delta / t
  double medium = 0.0;  // delta / t < |xi| <= 1 / (delta t)
  double high = 0.0;    // |xi| > 1 / (delta t)
  double total = 0.0;
  // Smallest discrete circle transform on the low ball; when >= 1/2 the low
  // part is a sum of non-negative terms.
  double min_low_transform = 1.0;
  bool low_transform_ok = true;
};

// Fourier-side evaluator: one FFT of 1_B, then every circle average is a
// lookup into the autocorrelation.
class FkwCorrelator {
 public:
  FkwCorrelator(const IndicatorSet& B, const PlaneGrid& grid);

  double measure() const noexcept { return measure_; }
  // R(s) = (cell volume) sum_x 1_B(x) 1_B(x + s).
  double autocorrelation(std::int64_t s0, std::int64_t s1) const;
  double correlation(double t, const CircleMeasure& sigma) const;
  // Average of R over every shift of the torus; equals measure(B)^2.
  double mean_over_all_shifts() const;
  FrequencySplit split(double t, double delta, const CircleMeasure& sigma) const;

 private:
  const PlaneGrid* grid_;
  std::uint64_t M_;
  double measure_;
  std::vector<double> power_;  // |hat 1_B(k)|^2 on the r2c half spectrum
  std::vector<double> autocorr_;
};

double fkw_correlation(const IndicatorSet& B, const PlaneGrid& grid, double t,
                       const CircleMeasure& sigma);
// Independent direct-sum evaluation over the members of B.
double fkw_correlation_direct(const IndicatorSet& B, const PlaneGrid& grid, double t,
                              const CircleMeasure& sigma);

inline constexpr double kFkwConstant = 0.01;

struct FkwScan {
  std::vector<double> scales;
  std::vector<double> correlations;
  std::size_t argmax = 0;
  double max = 0.0;
  double threshold = 0.0;  // c_fkw * measure(B)^2
  bool pass = false;
};

FkwScan fkw_scan(const FkwCorrelator& B, const ScaleLadder& ladder,
                 const CircleMeasure& sigma, double c_fkw = kFkwConstant);
FkwScan fkw_scan(const IndicatorSet& B, const PlaneGrid& grid, const ScaleLadder& ladder,
                 const CircleMeasure& sigma, double c_fkw = kFkwConstant);

FrequencySplit fkw_frequency_split(const IndicatorSet& B, const PlaneGrid& grid, double t,
                                   double delta, const CircleMeasure& sigma);

// Number of ladder annuli delta/t_j < |xi| <= 1/(delta t_j) containing xi.
std::size_t annulus_multiplicity(const ScaleLadder& ladder, double delta, double xi);
// ceil(log2(1/delta^2)) + 1.
std::size_t annulus_multiplicity_limit(double delta);

// ---------------------------------------------------------------------------
// Lambda(p) constants of character subsets of Z_n.

// ||sum_{i in S} a_i phi_i||_{L^p(Z_n)} with phi_i(x) = exp(2 pi i i x / n).
double character_lp_norm(std::size_t n, double p, std::span<const std::size_t> S,
                         std::span<const std::complex<double>> a);

struct LambdaPOptions {
  std::size_t iterations = 200;
  // Extra starting vectors, each given on the index set S.
  std::vector<std::vector<std::complex<double>>> warm_starts;
};

struct LambdaPEstimate {
  double K = 0.0;  // certified lower bound on sup_{|a| <= 1} ||sum a_i phi_i||_p
  std::vector<std::complex<double>> coefficients;
  std::size_t starts = 0;
};

// Multi-start projected ascent from coordinate vectors, the flat vector and
// `probes` random unit vectors.  Empty S gives K = 0.
LambdaPEstimate lambda_p_estimate(std::size_t n, double p, std::span<const std::size_t> S,
                                  std::size_t probes, const RandomStream& rng,
                                  const LambdaPOptions& options = {});

// Exact value n^{1/2 - 1/p} for S = {1..n}, attained by the flat vector.
double full_set_lambda_p(std::size_t n, double p);

std::vector<std::size_t> random_index_set(std::size_t n, double probability,
                                          RandomStream rng);
// The first `count` distinct residues i^2 mod n, i = 1, 2, ..., with residue 0
// written as n.  Fewer are returned when the squares run out.
std::vector<std::size_t> square_index_set(std::size_t n, std::size_t count);

struct EnsembleSummary {
  std::vector<double> values;
  std::vector<std::size_t> sizes;
  double median = 0.0;
  double max = 0.0;
};

struct LambdaPTrial {
  EnsembleSummary random;
  EnsembleSummary structured;
  double full_set = 0.0;
};

// Random sets with inclusion probability n^{2/p - 1} versus the squares set of
// the same expected size.  Trial k draws from rng.split(k).
LambdaPTrial lambda_p_random_trial(std::size_t n, double p, std::size_t trials,
                                   std::size_t probes, const RandomStream& rng,
                                   std::size_t iterations = 200);

// ---------------------------------------------------------------------------
// Averages along squares on rotations of Z_m.

class CyclicSystem {
 public:
  CyclicSystem(std::uint64_t m, std::uint64_t shift, std::vector<double> f);

  std::uint64_t modulus() const noexcept { return m_; }
  std::uint64_t shift() const noexcept { return a_; }
  const std::vector<double>& function() const noexcept { return f_; }
  // T^k x = x + a k mod m.
  std::uint64_t iterate(std::uint64_t x, std::uint64_t k) const noexcept;
  // f o T as a new system.
  CyclicSystem composed_with_map() const;

 private:
  std::uint64_t m_;
  std::uint64_t a_;
  std::vector<double> f_;
};

// A_N f(x) = (1/N) sum_{n=1}^N f(T^{n^2} x).
double ergodic_average(const CyclicSystem& sys, std::uint64_t x, std::uint64_t N);
// A_1 f(x), ..., A_{N_max} f(x) in one pass.
std::vector<double> ergodic_averages(const CyclicSystem& sys, std::uint64_t x,
                                     std::uint64_t N_max);
double maximal_function(const CyclicSystem& sys, std::uint64_t x, std::uint64_t N_max);

// Z_lambda = { floor(lambda^n) : n >= 1 } intersected with [1, max].
std::vector<std::uint64_t> lacunary_integers(double lambda, std::uint64_t max);

struct VariationalResult {
  std::vector<double> block_sup;  // at x, one per consecutive pair of breaks
  double pointwise = 0.0;         // sum of block_sup
  std::vector<double> block_l2;   // || sup_j ||_{L^2(Z_m)} per block
  double l2 = 0.0;                // sum of block_l2
};

// sum_j sup_{N_j <= N <= N_{j+1}, N in Z_lambda} |A_N f(x) - A_{N_j} f(x)|.
VariationalResult variational_sum(const CyclicSystem& sys, std::uint64_t x, double lambda,
                                  std::span<const std::uint64_t> breaks);

}  // namespace dyadkit
