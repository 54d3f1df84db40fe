#include "dyadkit/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <limits>
#include <numbers>
#include <set>
#include <sstream>

#include <json.hpp>

#include "dyadkit/core.hpp"
#include "dyadkit/dyadic.hpp"
#include "dyadkit/entropy.hpp"
#include "dyadkit/errors.hpp"
#include "dyadkit/harmonic.hpp"
#include "dyadkit/similarity.hpp"
#include "dyadkit/translations.hpp"

#ifndef DYADKIT_VERSION
#define DYADKIT_VERSION "0.0.0"
#endif

namespace dyadkit {

namespace {

using K = ParamKind;

const std::map<std::string, std::vector<ParamSpec>>& schemas() {
  static const std::map<std::string, std::vector<ParamSpec>> table = {
      {"bohr",
       {{"N", K::Integer, "10000", "integer window [-N, N]"},
        {"freqs", K::List, "0.6180339887498949", "frequencies, decimals or p/q"},
        {"rho0", K::Real, "0.05", "lower end of the radius interval"},
        {"kappa", K::Real, "100", "regularity constant"},
        {"candidates", K::Integer, "64", "radius candidates in [rho0, 2 rho0]"},
        {"test-points", K::Integer, "10", "probes per side of each candidate"}}},
      {"cover",
       {{"group", K::Text, "cyclic:100", "cyclic:n or product:n1,n2,..."},
        {"density", K::Real, "0.05", "measure of the random set E"},
        {"N", K::Integer, "20", "number of translates"},
        {"trials", K::Integer, "1000", "random N-tuples"},
        {"greedy", K::Flag, "1", "also run the greedy cover"}}},
      {"dudley",
       {{"n", K::Integer, "16", "index set size"},
        {"dim", K::Integer, "0", "0: iid unit Gaussians; d: random points in R^d"},
        {"points-file", K::Text, "", "CSV of point coordinates or of a covariance matrix"},
        {"points-kind", K::Text, "coordinates", "coordinates or covariance"},
        {"samples", K::Integer, "20000", "Monte-Carlo draws of the supremum"}}},
      {"tails",
       {{"dist", K::Text, "coins:100", "gauss or coins:n (sum of n fair +-1 coins)"},
        {"samples", K::Integer, "1000000", "Monte-Carlo draws"},
        {"lambdas", K::List, "1,2,3", "thresholds in units of the scale"}}},
      {"fkw",
       {{"grid", K::Integer, "512", "cells per axis of the [-2,2)^2 torus"},
        {"K", K::Integer, "720", "circle atoms"},
        {"ladder", K::List, "", "explicit scales t1 > t2 > ..."},
        {"auto-lacunary", K::Integer, "30", "J for t_j = 2^{-(j-1)} when no ladder is given"},
        {"set", K::Text, "rects:50:0.1", "full, empty, square:side, disk:r, rects:count:measure"},
        {"delta", K::Real, "0.1", "frequency split parameter"},
        {"c-fkw", K::Real, "0.01", "pass threshold constant"}}},
      {"lambdap",
       {{"n", K::Integer, "64", "modulus"},
        {"p", K::Real, "4", "exponent p > 2"},
        {"trials", K::Integer, "50", "random index sets"},
        {"probes", K::Integer, "8", "random ascent starts"},
        {"iterations", K::Integer, "200", "ascent steps per start"}}},
      {"ergodic",
       {{"m", K::Integer, "5", "modulus"},
        {"shift", K::Integer, "1", "rotation a in x -> x + a"},
        {"f", K::Text, "indicator:0", "indicator:r1,r2,..., constant:c, cos:k, values:v0,v1,..."},
        {"x", K::Integer, "0", "base point"},
        {"N", K::Integer, "100000", "largest averaging length"},
        {"lambda", K::Real, "2", "lacunary base"},
        {"breaks", K::List, "", "variational breaks (default: all of Z_lambda up to N)"}}},
      {"similarity",
       {{"mode", K::Text, "separation", "separation, entropy, coverage, ratio, b1"},
        {"J0", K::Integer, "2", "block length"},
        {"ratio", K::Real, "0.25", "ladder ratio r"},
        {"eps", K::Real, "0.5", "cube inclusion probability"},
        {"cube-side", K::Real, "0", "cube side 1/M (0: 1/(100 J))"},
        {"t-samples", K::Integer, "0", "t samples (0: automatic)"},
        {"auto-net", K::Flag, "1", "derive the t sampling from the speed bound"},
        {"x-samples", K::Integer, "1000", "Monte-Carlo base points"},
        {"probes", K::Integer, "101", "separation probes on [1, 2]"},
        {"delta", K::Real, "0.1", "entropy scale"},
        {"trials", K::Integer, "10000", "coverage trials"},
        {"t", K::Real, "1.5", "coverage scale"},
        {"resolution", K::Integer, "32", "b1 grid cells per axis"}}},
  };
  return table;
}

std::string trim(std::string s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, sep)) out.push_back(trim(item));
  return out;
}

std::int64_t parse_int(const std::string& key, const std::string& s) {
  std::int64_t v = 0;
  const auto t = trim(s);
  const auto [end, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc{} || end != t.data() + t.size() || t.empty())
    throw ArgumentError("--" + key + " expects an integer, got '" + s + "'");
  return v;
}

double parse_real(const std::string& key, const std::string& s) {
  const auto t = trim(s);
  const auto slash = t.find('/');
  if (slash != std::string::npos) {
    const long double num = parse_real(key, t.substr(0, slash));
    const long double den = parse_real(key, t.substr(slash + 1));
    if (den == 0.0L) throw ArgumentError("--" + key + ": zero denominator in '" + s + "'");
    return static_cast<double>(num / den);
  }
  char* end = nullptr;
  const double v = std::strtod(t.c_str(), &end);
  if (t.empty() || end != t.c_str() + t.size() || !std::isfinite(v))
    throw ArgumentError("--" + key + " expects a number, got '" + s + "'");
  return v;
}

std::vector<double> parse_list(const std::string& key, const std::string& s) {
  std::vector<double> out;
  if (trim(s).empty()) return out;
  for (const auto& item : split(s, ',')) out.push_back(parse_real(key, item));
  return out;
}

bool parse_flag(const std::string& key, const std::string& s) {
  const auto t = trim(s);
  if (t == "1" || t == "true" || t == "yes" || t == "on") return true;
  if (t == "0" || t == "false" || t == "no" || t == "off") return false;
  throw ArgumentError("--" + key + " expects a boolean, got '" + s + "'");
}

std::uint64_t parse_seed(const std::string& s) {
  std::uint64_t v = 0;
  const auto t = trim(s);
  const auto [end, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc{} || end != t.data() + t.size() || t.empty())
    throw ArgumentError("--seed expects an unsigned 64-bit integer, got '" + s + "'");
  return v;
}

void check_value(const ParamSpec& spec, const std::string& value) {
  switch (spec.kind) {
    case K::Integer: parse_int(spec.key, value); break;
    case K::Real: parse_real(spec.key, value); break;
    case K::List: parse_list(spec.key, value); break;
    case K::Flag: parse_flag(spec.key, value); break;
    case K::Text: break;
  }
}

class Params {
 public:
  explicit Params(const ExperimentConfig& c) : c_(c) {}
  const std::string& text(const std::string& k) const { return c_.params.at(k); }
  std::int64_t integer(const std::string& k) const { return parse_int(k, text(k)); }
  std::size_t count(const std::string& k, std::int64_t lo = 0) const {
    const auto v = integer(k);
    require(v >= lo, "--" + k + " must be at least " + std::to_string(lo));
    return static_cast<std::size_t>(v);
  }
  double real(const std::string& k) const { return parse_real(k, text(k)); }
  std::vector<double> list(const std::string& k) const { return parse_list(k, text(k)); }
  bool flag(const std::string& k) const { return parse_flag(k, text(k)); }

 private:
  const ExperimentConfig& c_;
};

FiniteGroup parse_group(const std::string& spec) {
  const auto colon = spec.find(':');
  require(colon != std::string::npos, "--group must be cyclic:n or product:n1,n2,...");
  const std::string kind = trim(spec.substr(0, colon));
  std::vector<std::uint64_t> factors;
  for (const auto& f : split(spec.substr(colon + 1), ',')) {
    const auto v = parse_int("group", f);
    require(v >= 1, "--group factors must be positive");
    factors.push_back(static_cast<std::uint64_t>(v));
  }
  if (kind == "cyclic") {
    require(factors.size() == 1, "cyclic:n takes exactly one modulus");
    return FiniteGroup::cyclic(factors[0]);
  }
  require(kind == "product" && !factors.empty(), "--group must be cyclic:n or product:n1,n2,...");
  return FiniteGroup::product(factors);
}

ResultTable run_bohr(const Params& p) {
  const auto N = p.integer("N");
  require(N >= 1, "--N must be at least 1");
  const auto profile = BohrProfile(N, p.list("freqs"));
  RegularRadiusOptions opt;
  opt.candidates = p.count("candidates", 1);
  opt.test_points = p.count("test-points", 1);
  const auto report = regular_radius(profile, p.real("rho0"), p.real("kappa"), opt);
  ResultTable t({"rho_candidate", "size", "verified", "selected"});
  for (const auto& c : report.candidates)
    t.add_row({c.rho, static_cast<std::int64_t>(c.size), std::int64_t{c.verified},
               std::int64_t{report.rho && *report.rho == c.rho}});
  return t;
}

ResultTable run_cover(const Params& p, std::uint64_t seed) {
  const auto G = parse_group(p.text("group"));
  const double density = p.real("density");
  require(density >= 0.0 && density <= 1.0, "--density must lie in [0, 1]");
  const auto N = p.count("N", 1);
  const auto trials = p.count("trials", 1);
  const auto k = static_cast<std::uint64_t>(std::llround(density * static_cast<double>(G.order())));
  const auto E = IndicatorSet::random_subset(G, k, RandomStream(seed, 1));
  const auto res = random_cover_search(E, N, trials, RandomStream(seed, 2));
  ResultTable t({"kind", "trial", "union_measure"});
  for (std::size_t i = 0; i < res.trial_measures.size(); ++i)
    t.add_row({std::string("trial"), static_cast<std::int64_t>(i), res.trial_measures[i]});
  t.add_row({std::string("empirical_mean"), std::int64_t{-1}, res.empirical_mean});
  t.add_row({std::string("best"), std::int64_t{-1}, res.union_measure});
  t.add_row({std::string("bound"), std::int64_t{-1}, res.bound});
  if (p.flag("greedy"))
    t.add_row({std::string("greedy"), std::int64_t{-1}, greedy_cover(E, N).union_measure});
  return t;
}

std::vector<std::vector<double>> read_csv_matrix(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read " + path);
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    const auto t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    rows.push_back(parse_list("points-file", t));
    require(rows.back().size() == rows.front().size(), "ragged rows in " + path);
  }
  require(!rows.empty(), path + " holds no rows");
  return rows;
}

ResultTable run_dudley(const Params& p, std::uint64_t seed) {
  const auto n = p.count("n", 1);
  const auto dim = p.count("dim");
  const auto samples = p.count("samples", 1);
  auto spec = GaussianProcessSpec::iid(n);
  const auto& file = p.text("points-file");
  if (!file.empty()) {
    const auto rows = read_csv_matrix(file);
    const auto& kind = p.text("points-kind");
    if (kind == "covariance") {
      std::vector<double> cov;
      for (const auto& r : rows) {
        require(r.size() == rows.size(), "covariance file must be square");
        cov.insert(cov.end(), r.begin(), r.end());
      }
      spec = GaussianProcessSpec(rows.size(), std::move(cov));
    } else {
      require(kind == "coordinates", "--points-kind must be coordinates or covariance");
      spec = GaussianProcessSpec::from_points(rows);
    }
  } else if (dim > 0) {
    RandomStream r(seed, 1);
    const double side = 1.0 / std::sqrt(static_cast<double>(dim));
    std::vector<std::vector<double>> pts(n, std::vector<double>(dim));
    for (auto& x : pts)
      for (auto& c : x) c = side * r.next_double();
    spec = GaussianProcessSpec::from_points(pts);
  }
  const auto T = FiniteMetricSpace::canonical(spec);
  const auto report = dudley_bound(T);
  const auto sup = empirical_sup(spec, samples, RandomStream(seed, 2));
  const double nan = std::numeric_limits<double>::quiet_NaN();
  ResultTable t({"kind", "level", "radius", "covering", "value"});
  for (const auto& term : report.terms)
    t.add_row({std::string("term"), std::int64_t{term.n}, term.radius,
               static_cast<std::int64_t>(term.covering), term.term});
  t.add_row({std::string("tail"), std::int64_t{report.tail_level},
             std::ldexp(1.0, -report.tail_level), static_cast<std::int64_t>(T.distinct_points()),
             report.tail});
  t.add_row({std::string("dudley_bound"), std::int64_t{-1}, nan, std::int64_t{-1}, report.value});
  t.add_row({std::string("empirical_sup"), std::int64_t{-1}, nan, std::int64_t{-1}, sup.mean});
  t.add_row({std::string("std_error"), std::int64_t{-1}, nan, std::int64_t{-1}, sup.std_error});
  t.add_row({std::string("ratio"), std::int64_t{-1}, nan, std::int64_t{-1},
             report.value > 0.0 ? sup.mean / report.value : nan});
  return t;
}

ResultTable run_tails(const Params& p, std::uint64_t seed) {
  const auto dist = p.text("dist");
  const auto samples = p.count("samples", 1000);
  const auto lambdas = p.list("lambdas");
  for (double l : lambdas) require(l >= 0.0, "--lambdas must be non-negative");
  ResultTable t({"lambda", "threshold", "exceedances", "frequency", "std_error", "bound",
                 "chebyshev"});
  TailReport rep;
  std::vector<double> bounds;
  if (dist.rfind("coins:", 0) == 0) {
    const auto coins_i = parse_int("dist", dist.substr(6));
    require(coins_i >= 1, "--dist coins:n needs n >= 1");
    const auto coins = static_cast<std::size_t>(coins_i);
    const std::vector<double> ranges(coins, 2.0);
    // Deviation measured in units of sqrt(sum of squared ranges), the Hoeffding scale.
    rep = empirical_tail(coin_sum_sampler(coins), lambdas, samples, RandomStream(seed, 1),
                         2.0 * std::sqrt(static_cast<double>(coins)));
    for (double l : lambdas) bounds.push_back(hoeffding_bound(l, ranges));
  } else if (dist == "gauss") {
    rep = empirical_tail(gaussian_sampler(), lambdas, samples, RandomStream(seed, 1));
    for (double l : lambdas) bounds.push_back(gaussian_tail_bound(l));
  } else {
    throw ArgumentError("--dist must be gauss or coins:n");
  }
  for (std::size_t i = 0; i < rep.points.size(); ++i) {
    const auto& q = rep.points[i];
    t.add_row({q.lambda, q.threshold, static_cast<std::int64_t>(q.exceedances), q.frequency,
               q.std_error, bounds[i], chebyshev_bound(q.lambda)});
  }
  return t;
}

IndicatorSet parse_plane_set(const std::string& spec, const PlaneGrid& grid,
                             std::uint64_t seed) {
  const auto parts = split(spec, ':');
  const std::string kind = parts.empty() ? "" : parts[0];
  if (kind == "full" && parts.size() == 1) return IndicatorSet::full(grid.torus().group());
  if (kind == "empty" && parts.size() == 1) return IndicatorSet::empty(grid.torus().group());
  if (kind == "square" && parts.size() == 2) return grid.square(parse_real("set", parts[1]));
  if (kind == "disk" && parts.size() == 2) return grid.disk(parse_real("set", parts[1]));
  if (kind == "rects" && parts.size() == 3) {
    const auto count = parse_int("set", parts[1]);
    require(count >= 1, "--set rects needs a positive count");
    return grid.random_rectangles(static_cast<std::size_t>(count), parse_real("set", parts[2]),
                                  RandomStream(seed, 1));
  }
  throw ArgumentError("--set must be full, empty, square:side, disk:r or rects:count:measure");
}

ResultTable run_fkw(const Params& p, std::uint64_t seed) {
  const PlaneGrid grid(p.count("grid", 4));
  const CircleMeasure sigma(p.count("K", 1));
  auto scales = p.list("ladder");
  const auto ladder = scales.empty() ? ScaleLadder::lacunary(p.count("auto-lacunary", 1))
                                     : ScaleLadder(std::move(scales));
  const auto B = parse_plane_set(p.text("set"), grid, seed);
  const double delta = p.real("delta");
  const FkwCorrelator corr(B, grid);
  const auto scan = fkw_scan(corr, ladder, sigma, p.real("c-fkw"));
  ResultTable t({"kind", "j", "t", "correlation", "low", "medium", "high"});
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t j = 0; j < scan.scales.size(); ++j) {
    const auto s = corr.split(scan.scales[j], delta, sigma);
    t.add_row({std::string("scale"), static_cast<std::int64_t>(j + 1), scan.scales[j],
               scan.correlations[j], s.low, s.medium, s.high});
  }
  auto summary = [&](const char* kind, double v) {
    t.add_row({std::string(kind), static_cast<std::int64_t>(scan.argmax + 1),
               scan.scales[scan.argmax], v, nan, nan, nan});
  };
  summary("measure", corr.measure());
  summary("mean_all_shifts", corr.mean_over_all_shifts());
  summary("max", scan.max);
  summary("threshold", scan.threshold);
  summary("pass", scan.pass ? 1.0 : 0.0);
  return t;
}

ResultTable run_lambdap(const Params& p, std::uint64_t seed) {
  const auto n = p.count("n", 1);
  const double pe = p.real("p");
  const auto trials = p.count("trials", 1);
  const auto probes = p.count("probes");
  const auto res =
      lambda_p_random_trial(n, pe, trials, probes, RandomStream(seed, 1), p.count("iterations", 1));
  ResultTable t({"kind", "trial", "size", "K"});
  for (std::size_t i = 0; i < res.random.values.size(); ++i)
    t.add_row({std::string("random"), static_cast<std::int64_t>(i),
               static_cast<std::int64_t>(res.random.sizes[i]), res.random.values[i]});
  t.add_row({std::string("structured"), std::int64_t{0},
             static_cast<std::int64_t>(res.structured.sizes[0]), res.structured.values[0]});
  t.add_row({std::string("full_set"), std::int64_t{-1}, static_cast<std::int64_t>(n), res.full_set});
  t.add_row({std::string("random_median"), std::int64_t{-1}, std::int64_t{-1}, res.random.median});
  t.add_row({std::string("random_max"), std::int64_t{-1}, std::int64_t{-1}, res.random.max});
  return t;
}

std::vector<double> parse_function(const std::string& spec, std::uint64_t m) {
  const auto colon = spec.find(':');
  require(colon != std::string::npos, "--f must be kind:arguments");
  const std::string kind = trim(spec.substr(0, colon));
  const std::string args = spec.substr(colon + 1);
  std::vector<double> f(m, 0.0);
  if (kind == "indicator") {
    for (const auto& r : split(args, ',')) {
      const auto v = parse_int("f", r);
      require(v >= 0 && static_cast<std::uint64_t>(v) < m, "--f indicator residue out of range");
      f[static_cast<std::uint64_t>(v)] = 1.0;
    }
  } else if (kind == "constant") {
    std::fill(f.begin(), f.end(), parse_real("f", args));
  } else if (kind == "cos") {
    const double k = parse_real("f", args);
    for (std::uint64_t x = 0; x < m; ++x)
      f[x] = std::cos(2.0 * std::numbers::pi * k * static_cast<double>(x) / static_cast<double>(m));
  } else if (kind == "values") {
    const auto v = parse_list("f", args);
    require(v.size() == m, "--f values needs exactly m entries");
    f = v;
  } else {
    throw ArgumentError("--f must be indicator:, constant:, cos: or values:");
  }
  return f;
}

ResultTable run_ergodic(const Params& p) {
  const auto m = p.count("m", 1);
  require(m <= 10'000'000, "--m larger than 10^7");
  const CyclicSystem sys(m, static_cast<std::uint64_t>(p.count("shift")),
                         parse_function(p.text("f"), m));
  const auto x = static_cast<std::uint64_t>(p.count("x"));
  const auto N = p.count("N", 1);
  const double lambda = p.real("lambda");
  const auto Z = lacunary_integers(lambda, N);
  std::vector<std::uint64_t> breaks;
  const auto given = p.list("breaks");
  if (given.empty()) {
    breaks = Z;
  } else {
    for (double b : given) {
      require(b >= 1.0 && b == std::floor(b), "--breaks must be positive integers");
      breaks.push_back(static_cast<std::uint64_t>(b));
    }
  }
  const auto A = ergodic_averages(sys, x, N);
  ResultTable t({"kind", "index", "value", "l2"});
  const double nan = std::numeric_limits<double>::quiet_NaN();
  std::set<std::uint64_t> shown(Z.begin(), Z.end());
  shown.insert(N);
  for (auto n : shown)
    if (n <= N) t.add_row({std::string("average"), static_cast<std::int64_t>(n), A[n - 1], nan});
  double maximal = 0.0;
  for (double a : A) maximal = std::max(maximal, std::fabs(a));
  t.add_row({std::string("maximal"), static_cast<std::int64_t>(N), maximal, nan});
  const auto var = variational_sum(sys, x, lambda, breaks);
  for (std::size_t j = 0; j < var.block_sup.size(); ++j)
    t.add_row({std::string("block"), static_cast<std::int64_t>(j + 1), var.block_sup[j],
               var.block_l2[j]});
  t.add_row({std::string("variational"), static_cast<std::int64_t>(var.block_sup.size()),
             var.pointwise, var.l2});
  return t;
}

SimilarityConfig similarity_config(const Params& p, std::uint64_t seed) {
  SimilarityConfig cfg;
  cfg.J0 = p.count("J0", 1);
  cfg.ratio = p.real("ratio");
  cfg.eps = p.real("eps");
  const double side = p.real("cube-side");
  require(side >= 0.0, "--cube-side must be non-negative");
  if (side > 0.0) cfg.cube_side = side;
  cfg.seed = seed;
  cfg.x_samples = p.count("x-samples", 1);
  cfg.validate();
  return cfg;
}

ResultTable run_similarity(const Params& p, std::uint64_t seed) {
  const auto cfg = similarity_config(p, seed);
  const auto fam = build_construction(cfg);
  const std::string mode = p.text("mode");
  const auto t_samples = p.count("t-samples");
  const bool auto_net = p.flag("auto-net");
  if (mode == "separation") {
    ResultTable t({"t", "separation", "a", "b"});
    const auto probes = equispaced_probes(p.count("probes", 1));
    for (double tp : probes) {
      const double one[] = {tp};
      const auto s = separation(fam, one);
      t.add_row({tp, s.min, static_cast<std::int64_t>(s.a), static_cast<std::int64_t>(s.b)});
    }
    const auto s = separation(fam, probes);
    t.add_row({s.t, s.min, static_cast<std::int64_t>(s.a), static_cast<std::int64_t>(s.b)});
    return t;
  }
  if (mode == "entropy") {
    const double delta = p.real("delta");
    std::size_t n = t_samples;
    if (n == 0) {
      require(auto_net, "--t-samples is required when --auto-net is off");
      n = delta >= 0.5 ? 2 : required_t_samples(fam, delta);
    }
    const auto e = orbit_entropy(fam, delta, n);
    ResultTable t({"delta", "t_samples", "net_size", "exponent", "max_speed"});
    t.add_row({delta, static_cast<std::int64_t>(e.t_samples), static_cast<std::int64_t>(e.net_size),
               e.exponent, e.max_speed});
    return t;
  }
  if (mode == "coverage") {
    const auto c = coverage_probability(cfg, fam, p.count("trials", 1), p.real("t"),
                                        RandomStream(seed, 1));
    ResultTable t({"trials", "successes", "frequency", "std_error", "expected", "separation"});
    t.add_row({static_cast<std::int64_t>(c.trials), static_cast<std::int64_t>(c.successes),
               c.frequency, c.std_error, c.expected, c.separation});
    return t;
  }
  if (mode == "ratio") {
    InfSupOptions opt;
    const std::size_t need = certified_net_points(cfg, fam);
    if (t_samples > 0) {
      require(t_samples >= need, "--t-samples below the certified net size " + std::to_string(need));
    } else {
      require(auto_net, "--t-samples is required when --auto-net is off");
    }
    const auto r = inf_sup_experiment(cfg, fam, opt);
    const double nan = std::numeric_limits<double>::quiet_NaN();
    ResultTable t({"f_mean", "f_std_error", "F_mean", "F_std_error", "ratio", "ratio_std_error",
                   "net_points", "net_spacing"});
    t.add_row({r.f.mean, r.f.std_error, r.F.mean, r.F.std_error, r.ratio.value_or(nan),
               r.ratio ? r.ratio_std_error : nan, static_cast<std::int64_t>(r.net_points),
               r.net_spacing});
    return t;
  }
  if (mode == "b1") {
    require(cfg.J() <= 3, "b1 mode needs J0 = 1 (a 3-torus)");
    const auto res = p.count("resolution", 1);
    if (res > 64) throw BudgetError("--resolution above 64 exceeds the B1 size guard");
    const GridTorus torus(cfg.J(), res);
    const auto G = torus.group();
    const auto k = static_cast<std::uint64_t>(std::llround(cfg.eps * static_cast<double>(G.order())));
    const auto B = IndicatorSet::random_subset(G, k, RandomStream(seed, 1));
    const auto ts = equispaced_probes(t_samples ? t_samples : 5);
    const auto B1 = build_B1(B, torus, fam.S0(), ts, fam.v());
    ResultTable t({"set", "measure", "t_points"});
    t.add_row({std::string("B"), B.measure(), static_cast<std::int64_t>(ts.size())});
    t.add_row({std::string("B1"), B1.measure(), static_cast<std::int64_t>(ts.size())});
    return t;
  }
  throw ArgumentError("--mode must be separation, entropy, coverage, ratio or b1");
}

std::string json_scalar(const nlohmann::json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_boolean()) return v.get<bool>() ? "1" : "0";
  if (v.is_number()) return v.dump();
  throw ArgumentError("config values must be scalars or lists of scalars");
}

}  // namespace

const std::vector<std::string>& subcommands() {
  static const std::vector<std::string> names = {"bohr", "cover", "dudley", "tails",
                                                 "fkw", "lambdap", "ergodic", "similarity"};
  return names;
}

const std::vector<ParamSpec>& schema(const std::string& subcommand) {
  const auto it = schemas().find(subcommand);
  if (it == schemas().end()) throw ArgumentError("unknown subcommand '" + subcommand + "'");
  return it->second;
}

std::string ExperimentConfig::to_text() const {
  std::string out = "subcommand=" + subcommand + "\nseed=" + std::to_string(seed) + "\n";
  for (const auto& [k, v] : params) out += k + "=" + v + "\n";
  return out;
}

ExperimentConfig ExperimentConfig::from_text(const std::string& text) {
  ExperimentConfig c;
  std::map<std::string, std::string> raw;
  const auto body = trim(text);
  if (!body.empty() && body.front() == '{') {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(body);
    } catch (const nlohmann::json::exception& e) {
      throw ArgumentError(std::string("config is not valid JSON: ") + e.what());
    }
    require(j.is_object(), "JSON config must be an object");
    for (const auto& [k, v] : j.items()) {
      if (v.is_array()) {
        std::string joined;
        for (const auto& e : v) joined += (joined.empty() ? "" : ",") + json_scalar(e);
        raw[k] = joined;
      } else {
        raw[k] = json_scalar(v);
      }
    }
  } else {
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      const auto t = trim(line);
      if (t.empty() || t.front() == '#') continue;
      const auto eq = t.find('=');
      if (eq == std::string::npos)
        throw ArgumentError("config line " + std::to_string(lineno) + " is not key=value");
      raw[trim(t.substr(0, eq))] = trim(t.substr(eq + 1));
    }
  }
  for (auto& [k, v] : raw) {
    if (k == "subcommand") c.subcommand = v;
    else if (k == "seed") c.seed = parse_seed(v);
    else if (k == "out") c.out = v;
    else c.params[k] = v;
  }
  return c;
}

ExperimentConfig ExperimentConfig::from_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read config file " + path);
  const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return from_text(text);
}

ExperimentConfig resolve(const ExperimentConfig& config) {
  require(!config.subcommand.empty(), "no subcommand given");
  const auto& specs = schema(config.subcommand);
  ExperimentConfig out = config;
  for (const auto& [k, v] : config.params) {
    const auto it = std::find_if(specs.begin(), specs.end(),
                                 [&](const ParamSpec& s) { return s.key == k; });
    if (it == specs.end())
      throw ArgumentError("unknown parameter '" + k + "' for " + config.subcommand);
    check_value(*it, v);
  }
  for (const auto& s : specs)
    if (!out.params.count(s.key)) out.params[s.key] = s.default_value;
  return out;
}

std::string config_hash(const ExperimentConfig& config) {
  const std::string text = resolve(config).to_text();
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string tool_version() { return DYADKIT_VERSION; }

ResultTable run(const ExperimentConfig& config) {
  const auto cfg = resolve(config);
  const auto start = std::chrono::steady_clock::now();
  const Params p(cfg);
  const std::string& s = cfg.subcommand;
  ResultTable table;
  if (s == "bohr") table = run_bohr(p);
  else if (s == "cover") table = run_cover(p, cfg.seed);
  else if (s == "dudley") table = run_dudley(p, cfg.seed);
  else if (s == "tails") table = run_tails(p, cfg.seed);
  else if (s == "fkw") table = run_fkw(p, cfg.seed);
  else if (s == "lambdap") table = run_lambdap(p, cfg.seed);
  else if (s == "ergodic") table = run_ergodic(p);
  else table = run_similarity(p, cfg.seed);
  auto& meta = table.metadata();
  meta.tool_version = tool_version();
  meta.seed = cfg.seed;
  meta.config_hash = config_hash(cfg);
  meta.extra.emplace_back("subcommand", s);
  meta.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return table;
}

}  // namespace dyadkit
