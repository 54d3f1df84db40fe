#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <algorithm>
#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "dyadkit/dyadic.hpp"
#include "dyadkit/entropy.hpp"
#include "dyadkit/errors.hpp"
#include "dyadkit/experiment.hpp"
#include "dyadkit/harmonic.hpp"
#include "dyadkit/similarity.hpp"
#include "dyadkit/translations.hpp"

namespace py = pybind11;
using namespace dyadkit;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

std::vector<double> square_matrix(const Array& a, std::size_t& n) {
  if (a.ndim() != 2 || a.shape(0) != a.shape(1))
    throw ArgumentError("expected a square matrix");
  n = static_cast<std::size_t>(a.shape(0));
  return {a.data(), a.data() + a.size()};
}

SimilarityConfig similarity_config(std::size_t J0, double ratio, double eps,
                                   std::optional<double> cube_side, std::uint64_t seed,
                                   std::size_t x_samples) {
  SimilarityConfig c;
  c.J0 = J0;
  c.ratio = ratio;
  c.eps = eps;
  c.cube_side = cube_side;
  c.seed = seed;
  c.x_samples = x_samples;
  return c;
}

py::array_t<double> to_numpy(const std::vector<double>& v, std::vector<py::ssize_t> shape) {
  py::array_t<double> out(shape);
  std::copy(v.begin(), v.end(), out.mutable_data());
  return out;
}

py::object cell_to_py(const Cell& c) {
  if (const auto* i = std::get_if<std::int64_t>(&c)) return py::int_(*i);
  if (const auto* d = std::get_if<double>(&c)) return py::float_(*d);
  return py::str(std::get<std::string>(c));
}

}  // namespace

PYBIND11_MODULE(_dyadkit, m) {
  m.doc() = "Finite, seeded experiments on dyadic pigeonholing, random translations, "
            "chaining bounds and orbit families.";
  m.attr("__version__") = tool_version();

  auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<ArgumentError>(m, "ArgumentError", base.ptr());
  py::register_exception<BudgetError>(m, "BudgetError", base.ptr());
  py::register_exception<InvariantError>(m, "InvariantError", base.ptr());
  py::register_exception<IoError>(m, "IoError", base.ptr());

  // translations
  m.def("expected_union_exact", &expected_union_exact, py::arg("mu"), py::arg("N"));
  m.def(
      "exhaustive_union_average",
      [](std::uint64_t n, const std::vector<Element>& members, std::uint64_t N) {
        const auto G = FiniteGroup::cyclic(n);
        const auto r = exhaustive_union_average(IndicatorSet::from_members(G, members), N);
        return py::make_tuple(r.mean_union, r.expected);
      },
      py::arg("n"), py::arg("members"), py::arg("N"),
      "Mean union measure over every N-tuple of shifts of a subset of Z_n, and "
      "1 - (1 - mu)^N.");
  m.def(
      "random_cover",
      [](std::uint64_t n, std::uint64_t size, std::uint64_t N, std::uint64_t trials,
         std::uint64_t seed) {
        const auto G = FiniteGroup::cyclic(n);
        const auto E = IndicatorSet::random_subset(G, size, RandomStream(seed, 1));
        const auto r = random_cover_search(E, N, trials, RandomStream(seed, 2));
        py::dict d;
        d["empirical_mean"] = r.empirical_mean;
        d["best"] = r.union_measure;
        d["bound"] = r.bound;
        d["shifts"] = r.shifts;
        return d;
      },
      py::arg("n"), py::arg("size"), py::arg("N"), py::arg("trials"), py::arg("seed") = 0);

  // dyadic
  m.def(
      "bohr_set",
      [](std::int64_t N, const std::vector<double>& freqs, double rho) {
        return bohr_build(N, freqs, rho).members;
      },
      py::arg("N"), py::arg("freqs"), py::arg("rho"));
  m.def(
      "regular_radius",
      [](std::int64_t N, const std::vector<double>& freqs, double rho0, double kappa) {
        return regular_radius(N, freqs, rho0, kappa).rho;
      },
      py::arg("N"), py::arg("freqs"), py::arg("rho0"), py::arg("kappa") = 100.0,
      "A verified regular radius in [rho0, 2 rho0], or None.");
  m.def(
      "pigeonhole_scale",
      [](const std::vector<double>& w) {
        const auto c = pigeonhole_scale(w);
        return py::make_tuple(c.index, c.weight, c.threshold);
      },
      py::arg("weights"));

  // entropy and chaining
  m.def(
      "covering_number",
      [](const Array& dist, double eps) {
        std::size_t n = 0;
        auto d = square_matrix(dist, n);
        const auto r = covering_number(FiniteMetricSpace(n, std::move(d)), eps);
        return py::make_tuple(r.size, r.net, r.exact);
      },
      py::arg("distances"), py::arg("eps"), "(size, net, exact) with closed balls.");
  m.def(
      "dudley_bound",
      [](const Array& cov) {
        std::size_t n = 0;
        auto c = square_matrix(cov, n);
        return dudley_bound(FiniteMetricSpace::canonical(GaussianProcessSpec(n, std::move(c)))).value;
      },
      py::arg("covariance"));
  m.def(
      "empirical_sup",
      [](const Array& cov, std::size_t samples, std::uint64_t seed) {
        std::size_t n = 0;
        auto c = square_matrix(cov, n);
        const auto e = empirical_sup(GaussianProcessSpec(n, std::move(c)), samples, RandomStream(seed));
        return py::make_tuple(e.mean, e.std_error);
      },
      py::arg("covariance"), py::arg("samples"), py::arg("seed") = 0);
  m.def("chebyshev_bound", &chebyshev_bound, py::arg("lam"));
  m.def(
      "hoeffding_bound",
      [](double lam, const std::vector<double>& ranges) { return hoeffding_bound(lam, ranges); },
      py::arg("lam"), py::arg("ranges"));

  // harmonic experiments
  m.def(
      "fkw_correlation",
      [](py::array_t<std::uint8_t, py::array::c_style | py::array::forcecast> bits, double t,
         std::size_t K) {
        if (bits.ndim() != 2 || bits.shape(0) != bits.shape(1))
          throw ArgumentError("expected a square M x M mask");
        const PlaneGrid grid(static_cast<std::uint64_t>(bits.shape(0)));
        std::vector<std::uint8_t> v(bits.data(), bits.data() + bits.size());
        const auto B = IndicatorSet::from_bits(grid.torus().group(), std::move(v));
        return fkw_correlation(B, grid, t, CircleMeasure(K));
      },
      py::arg("mask"), py::arg("t"), py::arg("K") = 720,
      "Circle average of the autocorrelation of a mask on the [-2,2)^2 torus; "
      "mask[j, i] is the cell with x index i and y index j.");
  m.def(
      "lambda_p",
      [](std::size_t n, double p, const std::vector<std::size_t>& S, std::size_t probes,
         std::uint64_t seed) {
        return lambda_p_estimate(n, p, S, probes, RandomStream(seed)).K;
      },
      py::arg("n"), py::arg("p"), py::arg("S"), py::arg("probes") = 8, py::arg("seed") = 0);
  m.def("full_set_lambda_p", &full_set_lambda_p, py::arg("n"), py::arg("p"));
  m.def(
      "ergodic_averages",
      [](std::uint64_t m, std::uint64_t shift, std::vector<double> f, std::uint64_t x,
         std::uint64_t N) {
        const auto a = ergodic_averages(CyclicSystem(m, shift, std::move(f)), x, N);
        return to_numpy(a, {static_cast<py::ssize_t>(a.size())});
      },
      py::arg("m"), py::arg("shift"), py::arg("f"), py::arg("x"), py::arg("N"),
      "A_1 .. A_N of f along n -> x + shift n^2 mod m.");

  // similarity
  m.def(
      "orbit_points",
      [](std::size_t J0, double ratio, double t) {
        const auto fam = build_construction(similarity_config(J0, ratio, 0.5, std::nullopt, 0, 1));
        const auto p = fam.orbit_points(t);
        return to_numpy(p, {static_cast<py::ssize_t>(fam.points()),
                            static_cast<py::ssize_t>(fam.J())});
      },
      py::arg("J0"), py::arg("ratio"), py::arg("t"));
  m.def(
      "separation",
      [](std::size_t J0, double ratio, std::size_t probes) {
        const auto fam = build_construction(similarity_config(J0, ratio, 0.5, std::nullopt, 0, 1));
        return separation(fam, equispaced_probes(probes)).min;
      },
      py::arg("J0"), py::arg("ratio"), py::arg("probes") = 101);
  m.def(
      "coverage_probability",
      [](std::size_t J0, double ratio, double eps, std::size_t trials, double t,
         std::uint64_t seed) {
        const auto cfg = similarity_config(J0, ratio, eps, std::nullopt, seed, 1);
        const auto c = coverage_probability(cfg, build_construction(cfg), trials, t, RandomStream(seed));
        return py::make_tuple(c.frequency, c.std_error, c.expected);
      },
      py::arg("J0"), py::arg("ratio"), py::arg("eps"), py::arg("trials"), py::arg("t") = 1.5,
      py::arg("seed") = 0);
  m.def(
      "inf_sup_experiment",
      [](std::size_t J0, double ratio, double eps, std::size_t x_samples,
         std::optional<double> cube_side, std::uint64_t seed) {
        const auto cfg = similarity_config(J0, ratio, eps, cube_side, seed, x_samples);
        const auto r = inf_sup_experiment(cfg, build_construction(cfg));
        py::dict d;
        d["f"] = r.f.mean;
        d["F"] = r.F.mean;
        d["ratio"] = r.ratio;
        d["ratio_std_error"] = r.ratio_std_error;
        d["net_points"] = r.net_points;
        return d;
      },
      py::arg("J0"), py::arg("ratio"), py::arg("eps"), py::arg("x_samples") = 1000,
      py::arg("cube_side") = py::none(), py::arg("seed") = 0);

  // harness
  m.def("subcommands", &subcommands);
  m.def(
      "run",
      [](const std::string& subcommand, const std::map<std::string, std::string>& params,
         std::uint64_t seed) {
        ExperimentConfig c;
        c.subcommand = subcommand;
        c.params = params;
        c.seed = seed;
        const auto t = run(c);
        py::list rows;
        for (const auto& row : t.rows()) {
          py::list r;
          for (const auto& cell : row) r.append(cell_to_py(cell));
          rows.append(py::tuple(r));
        }
        py::dict meta;
        meta["seed"] = t.metadata().seed;
        meta["config_hash"] = t.metadata().config_hash;
        meta["tool_version"] = t.metadata().tool_version;
        return py::make_tuple(t.columns(), rows, meta);
      },
      py::arg("subcommand"), py::arg("params") = std::map<std::string, std::string>{},
      py::arg("seed") = 0, "Run a subcommand; returns (columns, rows, metadata).");
  m.def(
      "run_csv",
      [](const std::string& subcommand, const std::map<std::string, std::string>& params,
         std::uint64_t seed) {
        ExperimentConfig c;
        c.subcommand = subcommand;
        c.params = params;
        c.seed = seed;
        return run(c).to_csv();
      },
      py::arg("subcommand"), py::arg("params") = std::map<std::string, std::string>{},
      py::arg("seed") = 0);
}
