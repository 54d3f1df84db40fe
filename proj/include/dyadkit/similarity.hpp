#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "dyadkit/core.hpp"
#include "dyadkit/numeric.hpp"
#include "dyadkit/random.hpp"

namespace dyadkit {

// Orbit families t S0 v mod Z^J built from a three-block geometric ladder
// s_{i,j} = base r^{(i-1) J0 + (j-1)}, J = 3 J0, v_c = 1 / (10 s_c).

struct SimilarityConfig {
  std::size_t J0 = 2;
  double ratio = 0.25;
  double base = 1.0;
  double eps = 0.5;
  std::optional<double> cube_side;  // default 1 / (100 J)
  std::uint64_t seed = 0;
  std::size_t x_samples = 1000;

  std::size_t J() const noexcept { return 3 * J0; }
  // Cubes per axis; cube_side must be 1/M for an integer M.
  std::uint64_t cubes_per_axis() const;
  double side() const;
  double margin() const { return side() / 4.0; }
  void validate() const;
};

class OrbitFamily {
 public:
  std::size_t J0() const noexcept { return J0_; }
  std::size_t J() const noexcept { return s_.size(); }
  std::size_t points() const noexcept { return sums_.size(); }
  double ratio() const noexcept { return r_; }

  // Flattened ladder s_k, k = (i-1) J0 + (j-1).
  const std::vector<double>& ladder() const noexcept { return s_; }
  const std::vector<double>& v() const noexcept { return v_; }
  // S0 in lexicographic (j1, j2, j3) order.
  const std::vector<double>& S0() const noexcept { return sums_; }
  // Flattened ladder indices of the three summands of S0[p].
  const std::array<std::size_t, 3>& summands(std::size_t p) const { return triples_.at(p); }
  // The J x J table s_k / (10 s_c), row k, column c.
  double ratio_term(std::size_t k, std::size_t c) const { return table_[k * J() + c]; }

  // max_{y, c} |y v_c|: per-coordinate speed of the orbit in t.
  double max_speed() const noexcept { return speed_; }

  // Row-major points() x J coordinates in [0, 1), each a sum of three ratio
  // terms scaled by t.  t must lie in [0, 2].
  std::vector<double> orbit_points(double t) const;

 private:
  friend OrbitFamily build_construction(const SimilarityConfig&);
  std::size_t J0_ = 0;
  double r_ = 0.0;
  std::vector<double> s_, v_, sums_, table_;
  std::vector<std::array<std::size_t, 3>> triples_;
  double speed_ = 0.0;
};

OrbitFamily build_construction(const SimilarityConfig& cfg);

struct SeparationResult {
  double min = 0.0;  // +infinity for a single point
  double t = 0.0;
  std::size_t a = 0, b = 0;
};

// Minimum pairwise torus l-infinity distance among orbit points over the probes.
SeparationResult separation(const OrbitFamily& fam, std::span<const double> t_probes);
std::vector<double> equispaced_probes(std::size_t count, double lo = 1.0, double hi = 2.0);

// Hausdorff distance between two orbit sets under the torus l-infinity metric.
double hausdorff_linf(std::span<const double> a, std::span<const double> b, std::size_t J);

struct EntropyResult {
  std::size_t net_size = 0;
  double exponent = 0.0;  // log(net_size) / log(1/delta)
  std::size_t t_samples = 0;
  double max_speed = 0.0;
};

// Samples so that consecutive orbit sets on [1, 2] are within delta/2.
std::size_t required_t_samples(const OrbitFamily& fam, double delta);
// Greedy delta-net of {orbit(t) : t in [1,2]} from equispaced samples.
EntropyResult orbit_entropy(const OrbitFamily& fam, double delta, std::size_t t_samples);

// Random union of cubes of side 1/M, each kept with probability eps.
IndicatorSet cube_set(const SimilarityConfig& cfg);
IndicatorSet cube_set(const SimilarityConfig& cfg, std::uint64_t seed);
bool cube_member(const IndicatorSet& E, std::uint64_t M, std::span<const double> point);

struct CoverageResult {
  std::size_t trials = 0;
  std::size_t successes = 0;
  double frequency = 0.0;
  double std_error = 0.0;
  double expected = 0.0;  // 1 - (1 - eps)^{J0^3}
  double separation = 0.0;
};

// P over (x, E) that some point of x + t S0 v lies in E.  Rejects t where two
// orbit points could share a cube.
CoverageResult coverage_probability(const SimilarityConfig& cfg, const OrbitFamily& fam,
                                    std::size_t trials, double t, const RandomStream& rng);

struct InfSupOptions {
  // Keep every stride-th net point; stride 1 is the certified net.
  std::size_t net_stride = 1;
  std::uint64_t budget = 4'000'000'000ull;  // net points x x_samples
};

struct InfSupResult {
  MeanEstimate f;  // integral of 1_E
  MeanEstimate F;  // integral of the certified inf-sup
  std::optional<double> ratio;
  double ratio_std_error = 0.0;
  std::size_t net_points = 0;
  double net_spacing = 0.0;
  double margin = 0.0;
  bool certified = true;
  std::vector<std::uint8_t> F_values;  // per x sample
};

// Number of certified net points on [1, 2] for the configured margin.
std::size_t certified_net_points(const SimilarityConfig& cfg, const OrbitFamily& fam);

InfSupResult inf_sup_experiment(const SimilarityConfig& cfg, const OrbitFamily& fam,
                                const InfSupOptions& options = {});

// B1 = intersection over t of the union over y of (B - t y v), with shifts
// snapped to the grid.  Explicit B on a torus of at most 64^3 cells.
IndicatorSet build_B1(const IndicatorSet& B, const GridTorus& torus,
                      std::span<const double> ys, std::span<const double> t_grid,
                      std::span<const double> v);

}  // namespace dyadkit
