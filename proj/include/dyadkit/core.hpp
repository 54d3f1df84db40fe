#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "dyadkit/random.hpp"

namespace dyadkit {

using Element = std::uint64_t;

// Z_{n_1} x ... x Z_{n_k} with uniform (Haar) probability measure.  Elements
// are mixed-radix linear indices, axis 0 varying fastest.  A product too large
// to enumerate is still a valid carrier for procedural sets; only order() and
// element enumeration refuse it.
class FiniteGroup {
 public:
  static FiniteGroup cyclic(std::uint64_t n);
  static FiniteGroup product(std::vector<std::uint64_t> factors);

  const std::vector<std::uint64_t>& factors() const noexcept { return factors_; }
  std::size_t rank() const noexcept { return factors_.size(); }
  bool enumerable() const noexcept { return order_.has_value(); }
  std::uint64_t order() const;  // BudgetError when not enumerable

  Element identity() const noexcept { return 0; }
  Element op(Element a, Element b) const;
  Element inverse(Element a) const;
  bool contains(Element e) const noexcept { return enumerable() && e < *order_; }

  std::vector<std::int64_t> coords(Element e) const;
  // Coordinates are reduced modulo each factor, so any integer vector works.
  Element index(std::span<const std::int64_t> coords) const;

  bool operator==(const FiniteGroup&) const = default;

 private:
  explicit FiniteGroup(std::vector<std::uint64_t> factors);
  std::vector<std::uint64_t> factors_;
  std::optional<std::uint64_t> order_;
};

// Uniform grid on (R/Z)^d with m cells per axis; the whole torus has measure 1.
class GridTorus {
 public:
  GridTorus(std::size_t dims, std::uint64_t resolution);

  std::size_t dims() const noexcept { return dims_; }
  std::uint64_t resolution() const noexcept { return resolution_; }
  double cell_volume() const noexcept;
  // Nearest-cell snapping error per axis, in torus units.
  double snap_error() const noexcept { return 0.5 / static_cast<double>(resolution_); }
  const FiniteGroup& group() const noexcept { return group_; }

  std::vector<std::int64_t> cell_of(std::span<const double> point) const;
  std::vector<double> cell_center(std::span<const std::int64_t> cell) const;
  std::vector<std::int64_t> snap_shift(std::span<const double> shift) const;

 private:
  std::size_t dims_;
  std::uint64_t resolution_;
  FiniteGroup group_;
};

// Indicator of a subset of a FiniteGroup (a GridTorus is the group Z_m^d).
// Either explicit, one byte per element, or procedural: a cell belongs to the
// set iff a seed-keyed hash of its (shifted) coordinates falls below p.
class IndicatorSet {
 public:
  static IndicatorSet empty(const FiniteGroup& g);
  static IndicatorSet full(const FiniteGroup& g);
  static IndicatorSet from_members(const FiniteGroup& g,
                                   std::span<const Element> members);
  static IndicatorSet from_bits(const FiniteGroup& g, std::vector<std::uint8_t> bits);
  static IndicatorSet procedural(const FiniteGroup& g, std::uint64_t seed, double p);
  // k distinct elements chosen uniformly (seeded partial shuffle).
  static IndicatorSet random_subset(const FiniteGroup& g, std::uint64_t k,
                                    RandomStream rng);

  const FiniteGroup& carrier() const noexcept { return group_; }
  bool is_explicit() const noexcept { return !procedural_.has_value(); }
  double density() const noexcept;  // p for procedural sets, measure otherwise

  bool contains(Element e) const;
  bool contains_cell(std::span<const std::int64_t> cell) const;

  std::uint64_t count() const;
  double measure() const;
  std::vector<Element> members() const;
  const std::vector<std::uint8_t>& bits() const;  // explicit sets only

  // g + E.  Measure is preserved exactly.
  IndicatorSet translated(Element g) const;
  IndicatorSet translated_cells(std::span<const std::int64_t> shift) const;

  IndicatorSet complement() const;
  IndicatorSet explicit_copy() const;

  friend IndicatorSet set_union(const IndicatorSet& a, const IndicatorSet& b);
  friend IndicatorSet set_intersection(const IndicatorSet& a, const IndicatorSet& b);
  bool operator==(const IndicatorSet& other) const;

 private:
  struct Procedural {
    std::uint64_t seed;
    double p;
    std::vector<std::int64_t> shift;
    bool complemented = false;
  };
  IndicatorSet(FiniteGroup g, std::vector<std::uint8_t> bits);
  IndicatorSet(FiniteGroup g, Procedural proc);
  static bool hash_member(const Procedural& proc, std::span<const std::int64_t> cell);

  FiniteGroup group_;
  std::vector<std::uint8_t> bits_;
  std::optional<Procedural> procedural_;
};

double measure(const IndicatorSet& s);
IndicatorSet translate_set(const IndicatorSet& s, Element g);

struct SnappedTranslate {
  IndicatorSet set;
  std::vector<std::int64_t> cells;
  double snap_error;  // per axis, torus units
};
// Real shift vector on a GridTorus, snapped to the nearest cell offset.
SnappedTranslate translate_set(const IndicatorSet& s, const GridTorus& torus,
                               std::span<const double> shift);

Element sample_uniform(const FiniteGroup& g, RandomStream& rng);
std::vector<std::int64_t> sample_uniform(const GridTorus& torus, RandomStream& rng);
// Uniform real point of [0,1)^d.
std::vector<double> sample_point(std::size_t dims, RandomStream& rng);

}  // namespace dyadkit
