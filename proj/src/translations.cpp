#include "dyadkit/translations.hpp"

#include <cmath>

#include "dyadkit/errors.hpp"
#include "dyadkit/numeric.hpp"

namespace dyadkit {

namespace {

// Marks g + E into `covered`; returns how many elements were new.
std::uint64_t cover_with(const FiniteGroup& G, std::span<const Element> members,
                         Element g, std::vector<std::uint8_t>& covered) {
  std::uint64_t fresh = 0;
  for (Element e : members) {
    const Element x = G.op(g, e);
    fresh += covered[x] ? 0 : 1;
    covered[x] = 1;
  }
  return fresh;
}

std::uint64_t union_count(const FiniteGroup& G, std::span<const Element> members,
                          std::span<const Element> shifts,
                          std::vector<std::uint8_t>& scratch) {
  std::fill(scratch.begin(), scratch.end(), 0);
  std::uint64_t total = 0;
  for (Element g : shifts) total += cover_with(G, members, g, scratch);
  return total;
}

}  // namespace

double union_measure(const IndicatorSet& E, std::span<const Element> shifts) {
  const auto& G = E.carrier();
  for (Element g : shifts)
    if (!G.contains(g)) throw ArgumentError("shift outside group");
  const auto members = E.members();
  std::vector<std::uint8_t> covered(G.order(), 0);
  return static_cast<double>(union_count(G, members, shifts, covered)) /
         static_cast<double>(G.order());
}

double expected_union_exact(double mu_E, std::uint64_t N) {
  require(mu_E >= 0.0 && mu_E <= 1.0, "mu(E) must lie in [0,1]");
  require(N >= 1, "N must be >= 1");
  // 1 - (1-mu)^N without cancellation for small mu.
  return -std::expm1(static_cast<double>(N) * std::log1p(-mu_E));
}

CoverResult random_cover_search(const IndicatorSet& E, std::uint64_t N,
                                std::uint64_t trials, const RandomStream& rng) {
  require(trials >= 1, "trials must be >= 1");
  require(N >= 1, "N must be >= 1");
  const auto& G = E.carrier();
  const auto members = E.members();
  const double order = static_cast<double>(G.order());
  std::vector<std::uint8_t> scratch(G.order(), 0);
  std::vector<Element> shifts(N);

  CoverResult best;
  best.bound = expected_union_exact(static_cast<double>(members.size()) / order, N);
  best.union_measure = -1.0;
  best.trial_measures.reserve(trials);
  CompensatedSum total;
  for (std::uint64_t k = 0; k < trials; ++k) {
    RandomStream r = rng.split(k);
    for (auto& g : shifts) g = sample_uniform(G, r);
    const double m = static_cast<double>(union_count(G, members, shifts, scratch)) / order;
    best.trial_measures.push_back(m);
    total.add(m);
    if (m > best.union_measure) {
      best.union_measure = m;
      best.shifts = shifts;
    }
  }
  best.empirical_mean = total.value() / static_cast<double>(trials);
  best.achieved = best.union_measure >= best.bound;
  return best;
}

CoverResult greedy_cover(const IndicatorSet& E, std::uint64_t N) {
  require(N >= 1, "N must be >= 1");
  const auto& G = E.carrier();
  const auto order = G.order();
  const auto members = E.members();
  std::vector<std::uint8_t> covered(order, 0);
  CoverResult r;
  r.bound = expected_union_exact(static_cast<double>(members.size()) /
                                     static_cast<double>(order), N);
  std::uint64_t count = 0;
  for (std::uint64_t step = 0; step < N && count < order; ++step) {
    Element best_g = 0;
    std::uint64_t best_gain = 0;
    for (Element g = 0; g < order; ++g) {
      std::uint64_t gain = 0;
      for (Element e : members) gain += covered[G.op(g, e)] ? 0 : 1;
      if (gain > best_gain) {
        best_gain = gain;
        best_g = g;
      }
    }
    if (best_gain == 0) break;
    count += cover_with(G, members, best_g, covered);
    r.shifts.push_back(best_g);
  }
  r.union_measure = static_cast<double>(count) / static_cast<double>(order);
  r.achieved = r.union_measure >= r.bound;
  r.empirical_mean = r.union_measure;
  return r;
}

ExhaustiveAverage exhaustive_union_average(const IndicatorSet& E, std::uint64_t N) {
  require(N >= 1, "N must be >= 1");
  const auto& G = E.carrier();
  const auto order = G.order();
  double tuples_d = std::pow(static_cast<double>(order), static_cast<double>(N));
  if (tuples_d > 1e8) throw BudgetError("too many shift tuples to enumerate");
  const auto members = E.members();
  std::vector<std::uint8_t> scratch(order, 0);
  std::vector<Element> shifts(N, 0);

  ExhaustiveAverage out;
  unsigned __int128 uncovered_total = 0;
  CompensatedSum total;
  for (;;) {
    const auto c = union_count(G, members, shifts, scratch);
    uncovered_total += order - c;
    total.add(static_cast<double>(c) / static_cast<double>(order));
    ++out.tuples;
    std::size_t k = 0;
    while (k < N && ++shifts[k] == order) shifts[k++] = 0;
    if (k == N) break;
  }
  unsigned __int128 expected_uncovered = order;
  for (std::uint64_t i = 0; i < N; ++i) expected_uncovered *= (order - members.size());
  out.integer_identity = uncovered_total == expected_uncovered;
  out.mean_union = total.value() / static_cast<double>(out.tuples);
  out.expected = expected_union_exact(static_cast<double>(members.size()) /
                                          static_cast<double>(order), N);
  return out;
}

QuotientSpace::QuotientSpace(FiniteGroup g, Element generator) : group_(std::move(g)) {
  require(group_.contains(generator), "generator outside group");
  Element h = group_.identity();
  do {
    subgroup_.push_back(h);
    h = group_.op(h, generator);
  } while (h != group_.identity());
  const auto order = group_.order();
  constexpr auto unset = ~std::uint64_t{0};
  coset_.assign(order, unset);
  for (Element x = 0; x < order; ++x) {
    if (coset_[x] != unset) continue;
    const auto id = static_cast<std::uint64_t>(representatives_.size());
    representatives_.push_back(x);
    for (Element s : subgroup_) coset_[group_.op(x, s)] = id;
  }
}

IndicatorSet QuotientSpace::lift(std::span<const std::uint8_t> coset_bits) const {
  require(coset_bits.size() == size(), "coset bit vector has wrong length");
  std::vector<std::uint8_t> bits(group_.order(), 0);
  for (Element x = 0; x < bits.size(); ++x) bits[x] = coset_bits[coset_[x]] ? 1 : 0;
  return IndicatorSet::from_bits(group_, std::move(bits));
}

std::uint64_t QuotientSpace::act(Element g, std::uint64_t coset) const {
  return coset_.at(group_.op(g, representatives_.at(coset)));
}

}  // namespace dyadkit
