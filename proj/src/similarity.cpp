#include "dyadkit/similarity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "dyadkit/errors.hpp"

namespace dyadkit {

namespace {

constexpr std::uint64_t kMaxB1Cells = 64ull * 64ull * 64ull;
constexpr std::size_t kMaxTSamples = 2'000'000;
constexpr std::uint64_t kMaxHausdorffChecks = 20'000'000'000ull;

double linf_torus(const double* a, const double* b, std::size_t J) {
  double d = 0.0;
  for (std::size_t c = 0; c < J; ++c) d = std::max(d, torus_dist(a[c], b[c]));
  return d;
}

// Hausdorff distance at most delta, trying the index matching first.
bool within_hausdorff(std::span<const double> a, std::span<const double> b, std::size_t J,
                      double delta) {
  const std::size_t P = a.size() / J;
  bool matched = true;
  for (std::size_t p = 0; p < P && matched; ++p)
    matched = linf_torus(&a[p * J], &b[p * J], J) <= delta;
  return matched || hausdorff_linf(a, b, J) <= delta;
}

// Does the closed l-infinity ball of the given radius around p lie in E?
bool ball_in_set(const IndicatorSet& E, std::uint64_t M, const std::vector<double>& p,
                 double radius, std::vector<std::int64_t>& lo, std::vector<std::int64_t>& hi,
                 std::vector<std::int64_t>& cell) {
  const std::size_t J = p.size();
  const double m = static_cast<double>(M);
  for (std::size_t c = 0; c < J; ++c) {
    const double x = p[c] * m;
    lo[c] = static_cast<std::int64_t>(std::floor(x - radius * m));
    hi[c] = static_cast<std::int64_t>(std::floor(x + radius * m));
    cell[c] = static_cast<std::int64_t>(std::floor(x));
  }
  if (!E.contains_cell(cell)) return false;
  // Odometer over the (at most 2^J) cubes meeting the ball.
  cell = lo;
  while (true) {
    if (!E.contains_cell(cell)) return false;
    std::size_t c = 0;
    while (c < J && cell[c] == hi[c]) {
      cell[c] = lo[c];
      ++c;
    }
    if (c == J) return true;
    ++cell[c];
  }
}

}  // namespace

std::uint64_t SimilarityConfig::cubes_per_axis() const {
  if (!cube_side) return 100 * J();
  const double inv = 1.0 / *cube_side;
  const auto M = static_cast<std::uint64_t>(std::llround(inv));
  require(M >= 1 && std::fabs(inv - static_cast<double>(M)) <= 1e-9 * inv,
          "cube side must be 1/M for an integer M");
  return M;
}

double SimilarityConfig::side() const { return 1.0 / static_cast<double>(cubes_per_axis()); }

void SimilarityConfig::validate() const {
  require(J0 >= 1 && J0 <= 16, "J0 must lie in 1..16");
  require(ratio > 0.0 && ratio <= 0.5, "ladder ratio must lie in (0, 1/2]");
  require(base > 0.0 && std::isfinite(base), "ladder base must be positive");
  require(eps >= 0.0 && eps <= 1.0, "eps must lie in [0, 1]");
  require(!cube_side || (*cube_side > 0.0 && *cube_side <= 1.0), "cube side must lie in (0, 1]");
  cubes_per_axis();
}

OrbitFamily build_construction(const SimilarityConfig& cfg) {
  cfg.validate();
  OrbitFamily fam;
  fam.J0_ = cfg.J0;
  fam.r_ = cfg.ratio;
  const std::size_t J = cfg.J();
  fam.s_.resize(J);
  fam.v_.resize(J);
  for (std::size_t k = 0; k < J; ++k) {
    fam.s_[k] = cfg.base * static_cast<double>(
                               std::pow(static_cast<long double>(cfg.ratio), static_cast<long double>(k)));
    if (!(fam.s_[k] > 0.0)) throw ArgumentError("ladder underflows to zero");
    fam.v_[k] = 1.0 / (10.0 * fam.s_[k]);
  }
  fam.table_.resize(J * J);
  for (std::size_t k = 0; k < J; ++k)
    for (std::size_t c = 0; c < J; ++c)
      fam.table_[k * J + c] =
          static_cast<double>(std::pow(static_cast<long double>(cfg.ratio),
                                       static_cast<long double>(k) - static_cast<long double>(c)) /
                              10.0L);

  const std::size_t n = cfg.J0;
  for (std::size_t j1 = 0; j1 < n; ++j1)
    for (std::size_t j2 = 0; j2 < n; ++j2)
      for (std::size_t j3 = 0; j3 < n; ++j3) {
        const std::array<std::size_t, 3> t{j1, n + j2, 2 * n + j3};
        fam.triples_.push_back(t);
        fam.sums_.push_back(fam.s_[t[0]] + fam.s_[t[1]] + fam.s_[t[2]]);
      }
  auto sorted = fam.sums_;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t p = 1; p < sorted.size(); ++p)
    if (sorted[p] - sorted[p - 1] <= 1e-12 * sorted.back())
      throw ArgumentError("sumset S0 has coincident sums; ratio r is resonant");

  for (double y : fam.sums_)
    for (double vc : fam.v_) fam.speed_ = std::max(fam.speed_, std::fabs(y * vc));
  return fam;
}

std::vector<double> OrbitFamily::orbit_points(double t) const {
  require(t >= 0.0 && t <= 2.0, "orbit parameter t must lie in [0, 2]");
  const std::size_t Jd = J();
  std::vector<double> out(points() * Jd);
  for (std::size_t p = 0; p < points(); ++p) {
    const auto& k = triples_[p];
    for (std::size_t c = 0; c < Jd; ++c) {
      const double a = t * table_[k[0] * Jd + c];
      const double b = t * table_[k[1] * Jd + c];
      const double d = t * table_[k[2] * Jd + c];
      out[p * Jd + c] = frac(frac(a) + frac(b) + frac(d));
    }
  }
  return out;
}

std::vector<double> equispaced_probes(std::size_t count, double lo, double hi) {
  require(count >= 1, "need at least one probe");
  if (count == 1) return {0.5 * (lo + hi)};
  std::vector<double> t(count);
  for (std::size_t i = 0; i < count; ++i)
    t[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1);
  return t;
}

SeparationResult separation(const OrbitFamily& fam, std::span<const double> t_probes) {
  SeparationResult best;
  best.min = std::numeric_limits<double>::infinity();
  if (fam.points() < 2) return best;
  for (double t : t_probes) require(t >= 1.0 && t <= 2.0, "probes must lie in [1, 2]");
  const std::size_t J = fam.J();
  for (double t : t_probes) {
    const auto pts = fam.orbit_points(t);
    for (std::size_t a = 0; a < fam.points(); ++a)
      for (std::size_t b = a + 1; b < fam.points(); ++b) {
        const double d = linf_torus(&pts[a * J], &pts[b * J], J);
        if (d < best.min) best = {d, t, a, b};
      }
  }
  return best;
}

double hausdorff_linf(std::span<const double> a, std::span<const double> b, std::size_t J) {
  require(J >= 1 && a.size() % J == 0 && b.size() % J == 0, "point sets must be J-dimensional");
  require(!a.empty() && !b.empty(), "point sets must be nonempty");
  auto directed = [J](std::span<const double> x, std::span<const double> y) {
    double worst = 0.0;
    for (std::size_t p = 0; p < x.size() / J; ++p) {
      double nearest = std::numeric_limits<double>::infinity();
      for (std::size_t q = 0; q < y.size() / J && nearest > worst; ++q)
        nearest = std::min(nearest, linf_torus(&x[p * J], &y[q * J], J));
      worst = std::max(worst, nearest);
    }
    return worst;
  };
  return std::max(directed(a, b), directed(b, a));
}

std::size_t required_t_samples(const OrbitFamily& fam, double delta) {
  require(delta > 0.0, "delta must be positive");
  const double need = std::ceil(2.0 * fam.max_speed() / delta);
  if (need + 1.0 > static_cast<double>(kMaxTSamples))
    throw BudgetError("entropy sampling needs " + std::to_string(need + 1.0) +
                      " t samples (limit " + std::to_string(kMaxTSamples) + ")");
  return std::max<std::size_t>(2, static_cast<std::size_t>(need) + 1);
}

EntropyResult orbit_entropy(const OrbitFamily& fam, double delta, std::size_t t_samples) {
  require(delta > 0.0, "delta must be positive");
  EntropyResult out;
  out.max_speed = fam.max_speed();
  if (delta >= 0.5) {
    // Every pair of orbit sets is within 1/2 in the torus l-infinity metric.
    out.net_size = 1;
    out.t_samples = t_samples;
    return out;
  }
  const std::size_t need = required_t_samples(fam, delta);
  if (t_samples < need)
    throw ArgumentError("t samples too sparse for delta=" + std::to_string(delta) +
                        "; need at least " + std::to_string(need));
  out.t_samples = t_samples;
  const std::size_t J = fam.J();
  std::vector<std::vector<double>> net;
  std::uint64_t checks = 0;
  for (double t : equispaced_probes(t_samples)) {
    auto pts = fam.orbit_points(t);
    bool covered = false;
    for (auto it = net.rbegin(); it != net.rend() && !covered; ++it) {
      covered = within_hausdorff(pts, *it, J, delta);
      if (++checks > kMaxHausdorffChecks)
        throw BudgetError("orbit entropy exceeds the comparison budget");
    }
    if (!covered) net.push_back(std::move(pts));
  }
  out.net_size = net.size();
  out.exponent = std::log(static_cast<double>(out.net_size)) / std::log(1.0 / delta);
  return out;
}

IndicatorSet cube_set(const SimilarityConfig& cfg, std::uint64_t seed) {
  cfg.validate();
  const GridTorus torus(cfg.J(), cfg.cubes_per_axis());
  return IndicatorSet::procedural(torus.group(), seed, cfg.eps);
}

IndicatorSet cube_set(const SimilarityConfig& cfg) { return cube_set(cfg, cfg.seed); }

bool cube_member(const IndicatorSet& E, std::uint64_t M, std::span<const double> point) {
  std::vector<std::int64_t> cell(point.size());
  for (std::size_t c = 0; c < point.size(); ++c)
    cell[c] = static_cast<std::int64_t>(std::floor(frac(point[c]) * static_cast<double>(M)));
  return E.contains_cell(cell);
}

CoverageResult coverage_probability(const SimilarityConfig& cfg, const OrbitFamily& fam,
                                    std::size_t trials, double t, const RandomStream& rng) {
  cfg.validate();
  require(trials >= 1, "need at least one trial");
  require(fam.J() == cfg.J(), "family and configuration disagree on J");
  const double probe[] = {t};
  CoverageResult out;
  out.separation = separation(fam, probe).min;
  if (fam.points() >= 2 && !(out.separation > cfg.side()))
    throw ArgumentError("orbit points at t=" + std::to_string(t) +
                        " are not separated by more than one cube side (separation " +
                        std::to_string(out.separation) + ")");
  const std::uint64_t M = cfg.cubes_per_axis();
  const std::size_t J = fam.J();
  const auto pts = fam.orbit_points(t);
  std::vector<double> q(J);
  for (std::size_t k = 0; k < trials; ++k) {
    RandomStream g = rng.split(k);
    const auto x = sample_point(J, g);
    const IndicatorSet E = cube_set(cfg, g.next_u64());
    bool hit = false;
    for (std::size_t p = 0; p < fam.points() && !hit; ++p) {
      for (std::size_t c = 0; c < J; ++c) q[c] = x[c] + pts[p * J + c];
      hit = cube_member(E, M, q);
    }
    out.successes += hit;
  }
  out.trials = trials;
  out.frequency = static_cast<double>(out.successes) / static_cast<double>(trials);
  out.expected = -std::expm1(static_cast<double>(fam.points()) * std::log1p(-cfg.eps));
  out.std_error = std::sqrt(out.expected * (1.0 - out.expected) / static_cast<double>(trials));
  return out;
}

std::size_t certified_net_points(const SimilarityConfig& cfg, const OrbitFamily& fam) {
  // Spacing 1/K <= margin / speed; each net point stands for a t-interval of
  // half-width 1/(2K), across which no orbit coordinate moves by the margin.
  const double K = std::ceil(fam.max_speed() / cfg.margin());
  return static_cast<std::size_t>(std::max(1.0, K)) + 1;
}

InfSupResult inf_sup_experiment(const SimilarityConfig& cfg, const OrbitFamily& fam,
                                const InfSupOptions& options) {
  cfg.validate();
  require(fam.J() == cfg.J(), "family and configuration disagree on J");
  require(cfg.x_samples >= 1, "need at least one x sample");
  require(options.net_stride >= 1, "net stride must be positive");
  InfSupResult out;
  out.margin = cfg.margin();
  const std::size_t full = certified_net_points(cfg, fam);
  const double cost = static_cast<double>(full) * static_cast<double>(cfg.x_samples);
  if (cost > static_cast<double>(options.budget))
    throw BudgetError("certified net needs " + std::to_string(full) + " points x " +
                      std::to_string(cfg.x_samples) + " samples, over the budget of " +
                      std::to_string(options.budget));
  const auto net = equispaced_probes(full);
  std::vector<double> ts;
  for (std::size_t i = 0; i < net.size(); i += options.net_stride) ts.push_back(net[i]);
  out.net_points = ts.size();
  out.net_spacing = 1.0 / static_cast<double>(full - 1);
  out.certified = options.net_stride == 1;

  const std::uint64_t M = cfg.cubes_per_axis();
  const std::size_t J = fam.J();
  const IndicatorSet E = cube_set(cfg, mix64(cfg.seed ^ 0xC0BE5E7ull));
  const RandomStream xs(cfg.seed, 0x1F5A);
  std::vector<double> q(J);
  std::vector<std::int64_t> lo(J), hi(J), cell(J);
  RunningMoments fm, Fm;
  std::vector<double> fv, Fv;
  for (std::size_t k = 0; k < cfg.x_samples; ++k) {
    RandomStream g = xs.split(k);
    const auto x = sample_point(J, g);
    const bool fx = cube_member(E, M, x);
    bool all = true;
    for (std::size_t i = 0; i < ts.size() && all; ++i) {
      const double t = ts[i];
      bool any = false;
      for (std::size_t p = 0; p < fam.points() && !any; ++p) {
        const auto& tri = fam.summands(p);
        for (std::size_t c = 0; c < J; ++c)
          q[c] = frac(x[c] + frac(t * fam.ratio_term(tri[0], c)) +
                      frac(t * fam.ratio_term(tri[1], c)) + frac(t * fam.ratio_term(tri[2], c)));
        any = ball_in_set(E, M, q, out.margin, lo, hi, cell);
      }
      all = any;
    }
    fm.add(fx);
    Fm.add(all);
    fv.push_back(fx);
    Fv.push_back(all);
    out.F_values.push_back(all);
  }
  out.f = fm.estimate();
  out.F = Fm.estimate();
  if (out.f.mean > 0.0) {
    const double R = out.F.mean / out.f.mean;
    out.ratio = R;
    RunningMoments d;
    for (std::size_t k = 0; k < fv.size(); ++k) d.add(Fv[k] - R * fv[k]);
    out.ratio_std_error =
        d.stddev() / (std::sqrt(static_cast<double>(fv.size())) * out.f.mean);
  }
  return out;
}

IndicatorSet build_B1(const IndicatorSet& B, const GridTorus& torus,
                      std::span<const double> ys, std::span<const double> t_grid,
                      std::span<const double> v) {
  require(B.carrier() == torus.group(), "set does not live on this torus");
  require(B.is_explicit(), "B must be explicit");
  require(v.size() == torus.dims(), "v must have one entry per torus axis");
  require(!ys.empty() && !t_grid.empty(), "need at least one y and one t");
  if (torus.group().order() > kMaxB1Cells)
    throw BudgetError("B1 torus has more than 64^3 cells");
  IndicatorSet result = IndicatorSet::full(torus.group());
  std::vector<double> shift(v.size());
  for (double t : t_grid) {
    IndicatorSet layer = IndicatorSet::empty(torus.group());
    for (double y : ys) {
      for (std::size_t c = 0; c < v.size(); ++c) shift[c] = -t * y * v[c];
      layer = set_union(layer, translate_set(B, torus, shift).set);
    }
    result = set_intersection(result, layer);
  }
  return result;
}

}  // namespace dyadkit
