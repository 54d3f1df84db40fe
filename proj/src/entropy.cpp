#include "dyadkit/entropy.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>

#include "dyadkit/errors.hpp"

namespace dyadkit {

GaussianProcessSpec::GaussianProcessSpec(std::size_t n, std::vector<double> covariance)
    : n_(n), cov_(std::move(covariance)) {
  require(n >= 1, "process needs at least one index");
  require(cov_.size() == n * n, "covariance must be n x n");
  for (std::size_t i = 0; i < n; ++i) {
    require(cov_[i * n + i] >= 0.0, "covariance diagonal must be non-negative");
    for (std::size_t j = 0; j < i; ++j) {
      const double a = cov_[i * n + j];
      const double b = cov_[j * n + i];
      require(std::fabs(a - b) <= 1e-12 * std::max({1.0, std::fabs(a), std::fabs(b)}),
              "covariance must be symmetric");
    }
  }
  factor_ = compute_factor();
}

GaussianProcessSpec GaussianProcessSpec::iid(std::size_t n, double variance) {
  std::vector<double> c(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) c[i * n + i] = variance;
  return GaussianProcessSpec(n, std::move(c));
}

GaussianProcessSpec GaussianProcessSpec::from_points(
    const std::vector<std::vector<double>>& points) {
  const std::size_t n = points.size();
  require(n >= 1, "point set is empty");
  std::vector<double> c(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    require(points[i].size() == points[0].size(), "points differ in dimension");
    for (std::size_t j = 0; j < n; ++j) {
      CompensatedSum s;
      for (std::size_t k = 0; k < points[i].size(); ++k) s.add(points[i][k] * points[j][k]);
      c[i * n + j] = s.value();
    }
  }
  return GaussianProcessSpec(n, std::move(c));
}

std::vector<double> GaussianProcessSpec::compute_factor() const {
  using Mat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  Mat C = Eigen::Map<const Mat>(cov_.data(), static_cast<Eigen::Index>(n_),
                                static_cast<Eigen::Index>(n_));
  double max_diag = 1.0;
  for (std::size_t i = 0; i < n_; ++i) max_diag = std::max(max_diag, cov_[i * n_ + i]);
  C.diagonal().array() += 1e-12;
  Eigen::SelfAdjointEigenSolver<Mat> eig(C);
  if (eig.info() != Eigen::Success) throw ArgumentError("covariance factorisation failed");
  const auto& lambda = eig.eigenvalues();
  if (lambda.minCoeff() < -1e-9 * max_diag)
    throw ArgumentError("covariance is not positive semidefinite");
  Mat L = eig.eigenvectors() * lambda.cwiseMax(0.0).cwiseSqrt().asDiagonal();
  return {L.data(), L.data() + L.size()};
}

FiniteMetricSpace::FiniteMetricSpace(std::size_t n, std::vector<double> distances)
    : n_(n), d_(std::move(distances)) {
  require(n >= 1, "metric space needs at least one point");
  require(d_.size() == n * n, "distance table must be n x n");
  for (std::size_t i = 0; i < n; ++i) {
    require(d_[i * n + i] == 0.0, "d(i,i) must be 0");
    for (std::size_t j = 0; j < n; ++j) {
      require(d_[i * n + j] >= 0.0 && std::isfinite(d_[i * n + j]),
              "distances must be finite and non-negative");
      require(d_[i * n + j] == d_[j * n + i], "distance table must be symmetric");
    }
  }
}

FiniteMetricSpace FiniteMetricSpace::from_points(
    const std::vector<std::vector<double>>& points) {
  const std::size_t n = points.size();
  require(n >= 1, "point set is empty");
  std::vector<double> d(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      require(points[i].size() == points[j].size(), "points differ in dimension");
      CompensatedSum s;
      for (std::size_t k = 0; k < points[i].size(); ++k) {
        const double diff = points[i][k] - points[j][k];
        s.add(diff * diff);
      }
      d[i * n + j] = d[j * n + i] = std::sqrt(s.value());
    }
  return FiniteMetricSpace(n, std::move(d));
}

FiniteMetricSpace FiniteMetricSpace::canonical(const GaussianProcessSpec& spec) {
  const std::size_t n = spec.size();
  std::vector<double> d(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const double var = spec.covariance(i, i) + spec.covariance(j, j) -
                         2.0 * spec.covariance(i, j);
      d[i * n + j] = d[j * n + i] = std::sqrt(std::max(0.0, var));
    }
  return FiniteMetricSpace(n, std::move(d));
}

double FiniteMetricSpace::diameter() const noexcept {
  return *std::max_element(d_.begin(), d_.end());
}

double FiniteMetricSpace::min_positive_distance() const noexcept {
  double m = 0.0;
  for (double x : d_)
    if (x > 0.0 && (m == 0.0 || x < m)) m = x;
  return m;
}

std::size_t FiniteMetricSpace::distinct_points() const {
  std::size_t classes = 0;
  for (std::size_t i = 0; i < n_; ++i) {
    bool seen = false;
    for (std::size_t j = 0; j < i && !seen; ++j) seen = (*this)(i, j) == 0.0;
    classes += seen ? 0 : 1;
  }
  return classes;
}

std::size_t FiniteMetricSpace::triangle_violations(double tol) const {
  std::size_t bad = 0;
  auto check = [&](std::size_t i, std::size_t j, std::size_t k) {
    if ((*this)(i, k) > (*this)(i, j) + (*this)(j, k) + tol) ++bad;
  };
  if (n_ <= 200) {
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < n_; ++j)
        for (std::size_t k = 0; k < n_; ++k) check(i, j, k);
  } else {
    RandomStream r(0x7472692D636865ull);
    for (int s = 0; s < 1000000; ++s) check(r.next_below(n_), r.next_below(n_), r.next_below(n_));
  }
  return bad;
}

FiniteMetricSpace FiniteMetricSpace::scaled(double c) const {
  require(c > 0.0, "scale factor must be positive");
  std::vector<double> d(d_);
  for (auto& x : d) x *= c;
  return FiniteMetricSpace(n_, std::move(d));
}

FiniteMetricSpace FiniteMetricSpace::subspace(std::span<const std::size_t> idx) const {
  const std::size_t m = idx.size();
  std::vector<double> d(m * m);
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = 0; b < m; ++b) d[a * m + b] = (*this)(idx[a], idx[b]);
  return FiniteMetricSpace(m, std::move(d));
}

namespace {

struct ExactCover {
  std::vector<std::uint32_t> balls;
  std::uint32_t full = 0;
  std::size_t best = 0;
  std::vector<std::size_t> best_net;
  std::vector<std::size_t> current;
  int max_ball = 1;

  void search(std::uint32_t covered) {
    if (covered == full) {
      if (current.size() < best) {
        best = current.size();
        best_net = current;
      }
      return;
    }
    const int remaining = std::popcount(full & ~covered);
    const std::size_t lower = current.size() +
        static_cast<std::size_t>((remaining + max_ball - 1) / max_ball);
    if (lower >= best) return;
    // Some centre must cover the lowest uncovered point.
    const int u = std::countr_zero(full & ~covered);
    std::vector<std::size_t> options;
    for (std::size_t c = 0; c < balls.size(); ++c)
      if (balls[c] >> u & 1u) options.push_back(c);
    std::sort(options.begin(), options.end(), [&](std::size_t a, std::size_t b) {
      return std::popcount(balls[a] & ~covered) > std::popcount(balls[b] & ~covered);
    });
    for (std::size_t c : options) {
      current.push_back(c);
      search(covered | balls[c]);
      current.pop_back();
    }
  }
};

// Covers the points `targets` of T with balls centred anywhere in T.
CoveringResult greedy_covering(const FiniteMetricSpace& T, std::span<const std::size_t> targets,
                               double eps) {
  const std::size_t n = T.size();
  const std::size_t m = targets.size();
  std::vector<std::uint8_t> covered(m, 0);
  std::size_t left = m;
  CoveringResult r;
  while (left > 0) {
    std::size_t best = 0;
    std::size_t gain = 0;
    for (std::size_t c = 0; c < n; ++c) {
      std::size_t g = 0;
      for (std::size_t j = 0; j < m; ++j) g += (!covered[j] && T(c, targets[j]) <= eps) ? 1 : 0;
      if (g > gain) {
        gain = g;
        best = c;
      }
    }
    for (std::size_t j = 0; j < m; ++j)
      if (!covered[j] && T(best, targets[j]) <= eps) {
        covered[j] = 1;
        --left;
      }
    r.net.push_back(best);
  }
  r.size = r.net.size();
  return r;
}

CoveringResult cover_targets(const FiniteMetricSpace& T, std::span<const std::size_t> targets,
                             double eps, std::size_t exact_limit) {
  require(eps > 0.0, "covering radius must be positive");
  for (auto t : targets) require(t < T.size(), "target index out of range");
  auto greedy = greedy_covering(T, targets, eps);
  const std::size_t m = targets.size();
  if (m > exact_limit || m > 32) return greedy;

  ExactCover ec;
  ec.full = m == 32 ? ~std::uint32_t{0} : (std::uint32_t{1} << m) - 1;
  ec.balls.assign(T.size(), 0);
  for (std::size_t c = 0; c < T.size(); ++c) {
    for (std::size_t j = 0; j < m; ++j)
      if (T(c, targets[j]) <= eps) ec.balls[c] |= std::uint32_t{1} << j;
    ec.max_ball = std::max(ec.max_ball, std::popcount(ec.balls[c]));
  }
  ec.best = greedy.size;
  ec.best_net = greedy.net;
  ec.search(0);
  return {ec.best, ec.best_net, true};
}

}  // namespace

CoveringResult covering_number(const FiniteMetricSpace& T, double eps,
                               std::size_t exact_limit) {
  std::vector<std::size_t> all(T.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  return cover_targets(T, all, eps, exact_limit);
}

CoveringResult relative_covering_number(const FiniteMetricSpace& T,
                                        std::span<const std::size_t> subset, double eps,
                                        std::size_t exact_limit) {
  return cover_targets(T, subset, eps, exact_limit);
}

double chebyshev_bound(double lambda) {
  require(lambda > 0.0, "lambda must be positive");
  return std::min(1.0, 1.0 / (lambda * lambda));
}

double hoeffding_bound(double lambda, std::span<const double> ranges) {
  require(lambda >= 0.0, "lambda must be non-negative");
  for (double r : ranges) require(r >= 0.0, "ranges must be non-negative");
  return std::min(1.0, 2.0 * std::exp(-2.0 * lambda * lambda));
}

double gaussian_tail_bound(double lambda, double c) {
  require(lambda >= 0.0 && c > 0.0, "need lambda >= 0 and c > 0");
  return std::min(1.0, 2.0 * std::exp(-c * lambda * lambda));
}

TailReport empirical_tail(const Sampler& sampler, std::span<const double> lambdas,
                          std::size_t samples, const RandomStream& rng,
                          std::optional<double> fixed_scale) {
  require(samples >= 1000, "empirical_tail needs at least 1000 samples");
  std::vector<double> xs(samples);
  RandomStream r = rng;
  RunningMoments moments;
  for (auto& x : xs) {
    x = sampler(r);
    moments.add(x);
  }
  TailReport rep;
  rep.samples = samples;
  rep.mean = moments.mean();
  rep.stddev = moments.stddev();
  rep.scale = fixed_scale.value_or(rep.stddev);
  std::vector<double> dev(samples);
  for (std::size_t i = 0; i < samples; ++i) dev[i] = std::fabs(xs[i] - rep.mean);
  const double n = static_cast<double>(samples);
  for (double lambda : lambdas) {
    TailPoint p;
    p.lambda = lambda;
    p.threshold = lambda * rep.scale;
    if (rep.scale > 0.0 || lambda <= 0.0)
      for (double d : dev) p.exceedances += d >= p.threshold ? 1 : 0;
    p.frequency = static_cast<double>(p.exceedances) / n;
    p.std_error = std::sqrt(p.frequency * (1.0 - p.frequency) / n);
    rep.points.push_back(p);
  }
  return rep;
}

Sampler gaussian_sampler() {
  return [](RandomStream& r) { return r.next_gaussian(); };
}

Sampler coin_sum_sampler(std::size_t coins) {
  require(coins >= 1, "need at least one coin");
  return [coins](RandomStream& r) {
    std::size_t heads = 0;
    std::size_t left = coins;
    while (left > 0) {
      const std::size_t take = std::min<std::size_t>(64, left);
      std::uint64_t w = r.next_u64();
      if (take < 64) w &= (std::uint64_t{1} << take) - 1;
      heads += static_cast<std::size_t>(std::popcount(w));
      left -= take;
    }
    return 2.0 * static_cast<double>(heads) - static_cast<double>(coins);
  };
}

std::vector<std::size_t> ChainDecomposition::chain(std::size_t point) const {
  require(!levels.empty(), "empty chain decomposition");
  std::vector<std::size_t> out{point};
  std::size_t current = point;
  for (std::size_t l = levels.size(); l-- > 1;) {
    const auto& lv = levels[l];
    const auto it = std::find(lv.net.begin(), lv.net.end(), current);
    if (it == lv.net.end()) throw InvariantError("chain", "point missing from its level");
    const std::size_t next = lv.parent[static_cast<std::size_t>(it - lv.net.begin())];
    if (next != current) out.push_back(next);
    current = next;
  }
  return out;
}

ChainDecomposition build_chain(const FiniteMetricSpace& T) {
  const std::size_t n = T.size();
  const double dmin = T.min_positive_distance();
  ChainDecomposition cd;

  // 1-centre: the point minimising its farthest distance.
  std::size_t centre = 0;
  double r1 = T.diameter();
  for (std::size_t c = 0; c < n; ++c) {
    double far = 0.0;
    for (std::size_t j = 0; j < n; ++j) far = std::max(far, T(c, j));
    if (far < r1) {
      r1 = far;
      centre = c;
    }
  }
  if (dmin == 0.0) {
    ChainLevel top{0, 1.0, {}, {}};
    for (std::size_t i = 0; i < n; ++i) {
      top.net.push_back(i);
      top.parent.push_back(i);
    }
    cd.levels.push_back(std::move(top));
    return cd;
  }
  // Rounding in a normalised canonical metric may overshoot 2 by an ulp or two.
  require(T.diameter() <= 2.0 * (1.0 + 1e-12), "build_chain needs diameter <= 2; rescale first");

  // Coarse levels holding one point are identical; start at the finest of them.
  int n_start = 0;
  while (std::ldexp(1.0, -(n_start + 1)) >= r1) ++n_start;

  std::vector<std::size_t> net;
  std::vector<std::uint8_t> in_net(n, 0);
  for (int lvl = n_start;; ++lvl) {
    const double eps = std::ldexp(1.0, -lvl);
    const bool last = eps < dmin;
    ChainLevel cur{lvl, eps, {}, {}};
    const std::vector<std::size_t> previous = net;
    if (net.empty()) {
      net.push_back(centre);
      in_net[centre] = 1;
    }
    for (std::size_t j = 0; j < n; ++j) {
      if (in_net[j]) continue;
      bool covered = false;
      for (std::size_t c : net)
        if (T(c, j) <= eps) {
          covered = true;
          break;
        }
      if (last || !covered) {
        net.push_back(j);
        in_net[j] = 1;
      }
    }
    for (std::size_t p : net) {
      cur.net.push_back(p);
      std::size_t parent = p;
      if (!previous.empty() && std::find(previous.begin(), previous.end(), p) == previous.end()) {
        double best = -1.0;
        for (std::size_t q : previous)
          if (best < 0.0 || T(p, q) < best) {
            best = T(p, q);
            parent = q;
          }
      }
      cur.parent.push_back(parent);
    }
    cd.levels.push_back(std::move(cur));
    if (last || net.size() == n) break;
  }
  return cd;
}

double chained_bound(const ChainDecomposition& cd, const FiniteMetricSpace& T,
                     std::span<const double> X) {
  require(X.size() == T.size(), "sample length must match the index set");
  require(!cd.levels.empty(), "empty chain decomposition");
  double top = 0.0;
  for (std::size_t t : cd.levels.front().net) top = std::max(top, std::fabs(X[t]));
  CompensatedSum total;
  total.add(top);
  for (std::size_t l = 0; l + 1 < cd.levels.size(); ++l) {
    const auto& a = cd.levels[l];
    const auto& b = cd.levels[l + 1];
    const double reach = std::ldexp(1.0, -a.n + 1);
    double sup = 0.0;
    for (std::size_t t : a.net)
      for (std::size_t u : b.net)
        if (T(t, u) <= reach) sup = std::max(sup, std::fabs(X[t] - X[u]));
    total.add(sup);
  }
  return total.value();
}

DudleyReport dudley_bound(const FiniteMetricSpace& T) {
  DudleyReport rep;
  const double diam = T.diameter();
  const double dmin = T.min_positive_distance();
  if (diam == 0.0) return rep;

  int n = 0;
  while (std::ldexp(1.0, -n) < diam) --n;
  while (std::ldexp(1.0, -(n + 1)) >= diam) ++n;

  CompensatedSum total;
  for (; std::ldexp(1.0, -n) >= dmin; ++n) {
    const double eps = std::ldexp(1.0, -n);
    const auto cov = covering_number(T, eps);
    DudleyTerm term{n, eps, cov.size, cov.exact,
                    eps * std::sqrt(std::log(static_cast<double>(cov.size)))};
    rep.exact = rep.exact && cov.exact;
    total.add(term.term);
    rep.terms.push_back(term);
  }
  rep.tail_level = n;
  rep.tail = 2.0 * std::ldexp(1.0, -n) *
             std::sqrt(std::log(static_cast<double>(T.distinct_points())));
  total.add(rep.tail);
  rep.value = total.value();
  return rep;
}

double dudley_integral(const FiniteMetricSpace& T) {
  const std::size_t n = T.size();
  std::vector<double> radii;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (T(i, j) > 0.0) radii.push_back(T(i, j));
  std::sort(radii.begin(), radii.end());
  radii.erase(std::unique(radii.begin(), radii.end()), radii.end());
  if (radii.empty()) return 0.0;
  CompensatedSum total;
  // On [0, first jump) N equals the number of distinct points.
  total.add(radii.front() * std::sqrt(std::log(static_cast<double>(T.distinct_points()))));
  for (std::size_t k = 0; k + 1 < radii.size(); ++k) {
    const auto cov = covering_number(T, radii[k]);
    total.add((radii[k + 1] - radii[k]) * std::sqrt(std::log(static_cast<double>(cov.size))));
  }
  return total.value();
}

MeanEstimate empirical_sup(const GaussianProcessSpec& spec, std::size_t samples,
                           const RandomStream& rng) {
  require(samples >= 2, "need at least two samples");
  const std::size_t n = spec.size();
  const auto& L = spec.factor();
  std::vector<double> z(n);
  RandomStream r = rng;
  RunningMoments m;
  for (std::size_t s = 0; s < samples; ++s) {
    for (auto& v : z) v = r.next_gaussian();
    double sup = -INFINITY;
    for (std::size_t i = 0; i < n; ++i) {
      double x = 0.0;
      for (std::size_t k = 0; k < n; ++k) x += L[i * n + k] * z[k];
      sup = std::max(sup, x);
    }
    m.add(sup);
  }
  return m.estimate();
}

}  // namespace dyadkit
