#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "dyadkit/core.hpp"
#include "dyadkit/random.hpp"

namespace dyadkit {

struct CoverResult {
  std::vector<Element> shifts;
  double union_measure = 0.0;
  double bound = 0.0;  // 1 - (1 - mu(E))^N
  bool achieved = false;
  // Random search only: mean union measure over all trials and the per-trial values.
  double empirical_mean = 0.0;
  std::vector<double> trial_measures;
};

// Exact measure of g_1 E u ... u g_N E by enumeration.
double union_measure(const IndicatorSet& E, std::span<const Element> shifts);

double expected_union_exact(double mu_E, std::uint64_t N);

// `trials` independent N-tuples of uniform shifts; trial k draws from rng.split(k).
CoverResult random_cover_search(const IndicatorSet& E, std::uint64_t N,
                                std::uint64_t trials, const RandomStream& rng);

// Each step takes the smallest shift that covers the most new elements; stops
// early once the group is covered or no shift adds anything.
CoverResult greedy_cover(const IndicatorSet& E, std::uint64_t N);

struct ExhaustiveAverage {
  std::uint64_t tuples = 0;
  double mean_union = 0.0;
  double expected = 0.0;
  // Integer form of the expectation identity:
  //   sum over tuples of |G \ union| == |G| (|G| - |E|)^N.
  bool integer_identity = false;
};

// Averages union_measure over all |G|^N shift tuples.
ExhaustiveAverage exhaustive_union_average(const IndicatorSet& E, std::uint64_t N);

// Cosets of the cyclic subgroup H = <h> in an abelian product group; subsets of
// G/H are handled by lifting them to unions of cosets in G.
class QuotientSpace {
 public:
  QuotientSpace(FiniteGroup g, Element generator);

  const FiniteGroup& group() const noexcept { return group_; }
  std::uint64_t size() const noexcept { return representatives_.size(); }
  std::uint64_t subgroup_order() const noexcept { return subgroup_.size(); }
  std::uint64_t coset_of(Element g) const { return coset_.at(g); }

  // bits[c] marks coset c; returns its preimage in G.
  IndicatorSet lift(std::span<const std::uint8_t> coset_bits) const;
  // Left action of G on cosets.
  std::uint64_t act(Element g, std::uint64_t coset) const;

 private:
  FiniteGroup group_;
  std::vector<Element> subgroup_;
  std::vector<Element> representatives_;
  std::vector<std::uint64_t> coset_;
};

}  // namespace dyadkit
