#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <set>

#include "dyadkit/errors.hpp"
#include "dyadkit/harmonic.hpp"

namespace dyadkit {

namespace {

using cplx = std::complex<double>;

class CharacterSum {
 public:
  CharacterSum(std::size_t n, double p, std::span<const std::size_t> S)
      : n_(n), p_(p), S_(S.begin(), S.end()), roots_(n), values_(n) {
    for (std::size_t r = 0; r < n; ++r)
      roots_[r] = std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(r) /
                                      static_cast<double>(n));
  }

  // mean_x |f(x)|^p for f = sum a_k phi_{S_k}; keeps f for the gradient.
  double objective(std::span<const cplx> a) {
    for (std::size_t x = 0; x < n_; ++x) {
      cplx f = 0.0;
      for (std::size_t k = 0; k < S_.size(); ++k) f += a[k] * roots_[(S_[k] * x) % n_];
      values_[x] = f;
    }
    CompensatedSum sum;
    for (const cplx& f : values_) sum.add(std::pow(std::norm(f), p_ / 2.0));
    return sum.value() / static_cast<double>(n_);
  }

  // Gradient with respect to conj(a) at the last evaluated point.
  std::vector<cplx> gradient() const {
    std::vector<cplx> g(S_.size(), 0.0);
    for (std::size_t x = 0; x < n_; ++x) {
      const double w = std::pow(std::norm(values_[x]), p_ / 2.0 - 1.0);
      const cplx fw = w * values_[x];
      for (std::size_t k = 0; k < S_.size(); ++k)
        g[k] += fw * std::conj(roots_[(S_[k] * x) % n_]);
    }
    for (auto& v : g) v *= p_ / (2.0 * static_cast<double>(n_));
    return g;
  }

 private:
  std::size_t n_;
  double p_;
  std::vector<std::size_t> S_;
  std::vector<cplx> roots_;
  std::vector<cplx> values_;
};

double l2(std::span<const cplx> a) {
  double s = 0.0;
  for (const auto& v : a) s += std::norm(v);
  return std::sqrt(s);
}

void normalize(std::vector<cplx>& a) {
  const double r = l2(a);
  for (auto& v : a) v /= r;
}

// Projected ascent on the unit sphere with step halving.
double ascend(CharacterSum& cs, std::vector<cplx>& a, std::size_t iterations) {
  double value = cs.objective(a);
  double step = 0.5;
  for (std::size_t it = 0; it < iterations && step > 1e-12; ++it) {
    auto g = cs.gradient();
    cplx radial = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) radial += std::conj(a[k]) * g[k];
    for (std::size_t k = 0; k < a.size(); ++k) g[k] -= radial.real() * a[k];
    const double gn = l2(g);
    if (gn < 1e-15) break;
    std::vector<cplx> trial(a.size());
    for (std::size_t k = 0; k < a.size(); ++k) trial[k] = a[k] + (step / gn) * g[k];
    normalize(trial);
    const double tv = cs.objective(trial);
    if (tv > value) {
      a.swap(trial);
      value = tv;
      step = std::min(1.0, step * 1.5);
    } else {
      step *= 0.5;
      cs.objective(a);  // restore the cached values for the next gradient
    }
  }
  return value;
}

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

void check_index_set(std::size_t n, double p, std::span<const std::size_t> S) {
  require(n >= 1, "modulus must be positive");
  require(p > 2.0, "p must exceed 2");
  std::set<std::size_t> seen;
  for (auto i : S) {
    require(i >= 1 && i <= n, "character index outside 1..n");
    require(seen.insert(i).second, "character index repeated");
  }
}

}  // namespace

double character_lp_norm(std::size_t n, double p, std::span<const std::size_t> S,
                         std::span<const std::complex<double>> a) {
  check_index_set(n, p, S);
  require(a.size() == S.size(), "coefficient count must match the index set");
  CharacterSum cs(n, p, S);
  return std::pow(cs.objective(a), 1.0 / p);
}

LambdaPEstimate lambda_p_estimate(std::size_t n, double p, std::span<const std::size_t> S,
                                  std::size_t probes, const RandomStream& rng,
                                  const LambdaPOptions& options) {
  check_index_set(n, p, S);
  LambdaPEstimate best;
  if (S.empty()) return best;
  const std::size_t s = S.size();
  CharacterSum cs(n, p, S);

  // Every coordinate vector is a single unimodular character: ratio exactly 1.
  best.K = 1.0;
  best.coefficients.assign(s, 0.0);
  best.coefficients[0] = 1.0;
  best.starts = s;

  auto consider = [&](std::vector<cplx> a) {
    normalize(a);
    const double v = ascend(cs, a, options.iterations);
    const double K = std::pow(v, 1.0 / p);
    ++best.starts;
    if (K > best.K) {
      best.K = K;
      best.coefficients = std::move(a);
    }
  };

  consider(std::vector<cplx>(s, 1.0));
  for (const auto& w : options.warm_starts) {
    require(w.size() == s, "warm start has the wrong length");
    if (l2(w) > 0.0) consider(w);
  }
  for (std::size_t r = 0; r < probes; ++r) {
    RandomStream g = rng.split(r);
    std::vector<cplx> a(s);
    for (auto& v : a) {
      const double re = g.next_gaussian();
      v = cplx(re, g.next_gaussian());
    }
    consider(std::move(a));
  }
  return best;
}

double full_set_lambda_p(std::size_t n, double p) {
  require(n >= 1 && p > 2.0, "need n >= 1 and p > 2");
  return std::pow(static_cast<double>(n), 0.5 - 1.0 / p);
}

std::vector<std::size_t> random_index_set(std::size_t n, double probability,
                                          RandomStream rng) {
  require(probability >= 0.0 && probability <= 1.0, "probability must lie in [0, 1]");
  std::vector<std::size_t> S;
  for (std::size_t i = 1; i <= n; ++i)
    if (rng.next_bernoulli(probability)) S.push_back(i);
  return S;
}

std::vector<std::size_t> square_index_set(std::size_t n, std::size_t count) {
  require(n >= 1, "modulus must be positive");
  std::vector<std::size_t> S;
  std::set<std::size_t> seen;
  for (std::size_t i = 1; i <= n && S.size() < count; ++i) {
    std::size_t r = static_cast<std::size_t>((static_cast<unsigned __int128>(i) * i) % n);
    if (r == 0) r = n;
    if (seen.insert(r).second) S.push_back(r);
  }
  return S;
}

LambdaPTrial lambda_p_random_trial(std::size_t n, double p, std::size_t trials,
                                   std::size_t probes, const RandomStream& rng,
                                   std::size_t iterations) {
  require(trials >= 1, "need at least one trial");
  require(p > 2.0, "p must exceed 2");
  const double prob = std::pow(static_cast<double>(n), 2.0 / p - 1.0);
  const auto target = static_cast<std::size_t>(std::llround(prob * static_cast<double>(n)));

  LambdaPTrial out;
  out.full_set = full_set_lambda_p(n, p);
  const auto squares = square_index_set(n, std::max<std::size_t>(1, target));
  LambdaPOptions opt;
  opt.iterations = iterations;
  const auto structured = lambda_p_estimate(n, p, squares, probes, rng.substream(1), opt);
  for (std::size_t k = 0; k < trials; ++k) {
    const RandomStream item = rng.split(k);
    const auto S = random_index_set(n, prob, item.split(0));
    const auto est = lambda_p_estimate(n, p, S, probes, item.split(1), opt);
    out.random.values.push_back(est.K);
    out.random.sizes.push_back(S.size());
  }
  out.structured.values.push_back(structured.K);
  out.structured.sizes.push_back(squares.size());
  for (auto* e : {&out.random, &out.structured}) {
    e->median = median(e->values);
    e->max = *std::max_element(e->values.begin(), e->values.end());
  }
  return out;
}

}  // namespace dyadkit
