#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "dyadkit/numeric.hpp"
#include "dyadkit/random.hpp"

namespace dyadkit {

// Mean-zero Gaussian process on indices 0..n-1, given by its covariance.
class GaussianProcessSpec {
 public:
  GaussianProcessSpec(std::size_t n, std::vector<double> covariance);
  static GaussianProcessSpec iid(std::size_t n, double variance = 1.0);
  // X_t = <g, x_t> for standard Gaussian g; the covariance is the Gram matrix.
  static GaussianProcessSpec from_points(const std::vector<std::vector<double>>& points);

  std::size_t size() const noexcept { return n_; }
  double covariance(std::size_t i, std::size_t j) const { return cov_[i * n_ + j]; }
  const std::vector<double>& covariance() const noexcept { return cov_; }

  // Row-major L with L L^T = C + 1e-12 I, via symmetric eigendecomposition.
  // Computed at construction, which throws ArgumentError if C has an
  // eigenvalue below -1e-9 * max(1, max diag).
  const std::vector<double>& factor() const noexcept { return factor_; }

 private:
  std::vector<double> compute_factor() const;

  std::size_t n_;
  std::vector<double> cov_;
  std::vector<double> factor_;
};

// Finite pseudo-metric space with a dense distance table.
class FiniteMetricSpace {
 public:
  FiniteMetricSpace(std::size_t n, std::vector<double> distances);
  static FiniteMetricSpace from_points(const std::vector<std::vector<double>>& points);
  // Canonical metric d(t,t') = sqrt(Var(X_t - X_t')).
  static FiniteMetricSpace canonical(const GaussianProcessSpec& spec);

  std::size_t size() const noexcept { return n_; }
  double operator()(std::size_t i, std::size_t j) const { return d_[i * n_ + j]; }
  double diameter() const noexcept;
  // 0 when every pair is at distance 0 (or n == 1).
  double min_positive_distance() const noexcept;
  // Number of distance-zero equivalence classes.
  std::size_t distinct_points() const;
  // Sampled triples violating the triangle inequality beyond tol; pseudo-metrics
  // estimated from data may legitimately report some.
  std::size_t triangle_violations(double tol = 1e-12) const;

  FiniteMetricSpace scaled(double c) const;
  FiniteMetricSpace subspace(std::span<const std::size_t> indices) const;

 private:
  std::size_t n_;
  std::vector<double> d_;
};

struct CoveringResult {
  std::size_t size = 0;
  std::vector<std::size_t> net;  // centres, drawn from the space itself
  bool exact = false;            // false: greedy upper bound
};

inline constexpr std::size_t kExactCoveringLimit = 20;

// N(T, d; eps) with closed balls.  Exact branch-and-bound up to
// kExactCoveringLimit points, greedy set cover beyond.
CoveringResult covering_number(const FiniteMetricSpace& T, double eps,
                               std::size_t exact_limit = kExactCoveringLimit);
// Covering number of the points `subset` of T with centres anywhere in T.
// Unlike covering_number of a subspace, this is monotone under inclusion.
CoveringResult relative_covering_number(const FiniteMetricSpace& T,
                                        std::span<const std::size_t> subset, double eps,
                                        std::size_t exact_limit = kExactCoveringLimit);

double chebyshev_bound(double lambda);
// min(1, 2 exp(-2 lambda^2)): P(|X - EX| >= lambda sqrt(sum (b_i - a_i)^2)).
double hoeffding_bound(double lambda, std::span<const double> ranges);
// min(1, 2 exp(-c lambda^2)) for the Gaussian tail with an explicit constant c.
double gaussian_tail_bound(double lambda, double c = 0.5);

struct TailPoint {
  double lambda = 0.0;
  double threshold = 0.0;  // lambda * scale
  std::size_t exceedances = 0;
  double frequency = 0.0;
  double std_error = 0.0;
};

struct TailReport {
  double mean = 0.0;
  double stddev = 0.0;
  double scale = 0.0;
  std::size_t samples = 0;
  std::vector<TailPoint> points;
};

using Sampler = std::function<double(RandomStream&)>;

// Frequencies of |X - mean| >= lambda * scale, where mean and stddev come from
// the same run and scale defaults to the estimated stddev.
TailReport empirical_tail(const Sampler& sampler, std::span<const double> lambdas,
                          std::size_t samples, const RandomStream& rng,
                          std::optional<double> fixed_scale = std::nullopt);

Sampler gaussian_sampler();
// Sum of `coins` independent fair +-1 signs.
Sampler coin_sum_sampler(std::size_t coins);

struct ChainLevel {
  int n = 0;           // scale 2^{-n}
  double radius = 0.0;
  std::vector<std::size_t> net;
  std::vector<std::size_t> parent;  // parent[k]: a point of the previous level's net
};

// Nested nets from the coarsest informative dyadic level down to the level
// containing every point.  Net points are linked to a parent one level up with
// d(t_{n+1}, parent) <= 2^{-n}.
struct ChainDecomposition {
  std::vector<ChainLevel> levels;
  // Chain of a point, from the point itself up to the top-level net.
  std::vector<std::size_t> chain(std::size_t point) const;
};

ChainDecomposition build_chain(const FiniteMetricSpace& T);

// sup_{T_top} |X| + sum over consecutive levels of
// sup { |X_t - X_t'| : t in level n, t' in level n+1, d(t,t') <= 2^{-n+1} }.
double chained_bound(const ChainDecomposition& chain, const FiniteMetricSpace& T,
                     std::span<const double> X);

struct DudleyTerm {
  int n = 0;
  double radius = 0.0;
  std::size_t covering = 1;
  bool exact = true;
  double term = 0.0;
};

struct DudleyReport {
  double value = 0.0;
  std::vector<DudleyTerm> terms;
  int tail_level = 0;  // first level below the minimal positive distance
  double tail = 0.0;   // 2 * 2^{-tail_level} * sqrt(ln #distinct points)
  bool exact = true;   // every covering number computed exactly
};

// sum_n 2^{-n} sqrt(ln N(T, d; 2^{-n})) with natural log, from the largest n
// with 2^{-n} >= diameter down to the minimal positive distance, plus the
// closed-form geometric tail.
DudleyReport dudley_bound(const FiniteMetricSpace& T);

// int_0^inf sqrt(ln N(T, d; eps)) d eps, exact (N is a step function with jumps
// at pairwise distances).  Homogeneous of degree one under any metric scaling.
double dudley_integral(const FiniteMetricSpace& T);

// Monte-Carlo E sup_t X_t.
MeanEstimate empirical_sup(const GaussianProcessSpec& spec, std::size_t samples,
                           const RandomStream& rng);

}  // namespace dyadkit
