#include "dyadkit/core.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "dyadkit/errors.hpp"

namespace dyadkit {

namespace {

constexpr std::uint64_t kMaxOrder = std::uint64_t{1} << 62;
constexpr std::uint64_t kMaxExplicit = std::uint64_t{1} << 31;
constexpr std::uint64_t kMaxProceduralScan = std::uint64_t{1} << 26;

std::int64_t wrap(std::int64_t x, std::uint64_t n) {
  const auto m = static_cast<std::int64_t>(n);
  const std::int64_t r = x % m;
  return r < 0 ? r + m : r;
}

}  // namespace

FiniteGroup::FiniteGroup(std::vector<std::uint64_t> factors)
    : factors_(std::move(factors)) {
  require(!factors_.empty(), "group needs at least one cyclic factor");
  std::uint64_t order = 1;
  bool fits = true;
  for (auto n : factors_) {
    require(n >= 1, "cyclic factor must be positive");
    if (fits && order > kMaxOrder / n) fits = false;
    if (fits) order *= n;
  }
  if (fits) order_ = order;
}

FiniteGroup FiniteGroup::cyclic(std::uint64_t n) { return FiniteGroup({n}); }

FiniteGroup FiniteGroup::product(std::vector<std::uint64_t> factors) {
  return FiniteGroup(std::move(factors));
}

std::uint64_t FiniteGroup::order() const {
  if (!order_) throw BudgetError("group order exceeds 2^62; not enumerable");
  return *order_;
}

std::vector<std::int64_t> FiniteGroup::coords(Element e) const {
  std::vector<std::int64_t> c(factors_.size());
  for (std::size_t k = 0; k < factors_.size(); ++k) {
    c[k] = static_cast<std::int64_t>(e % factors_[k]);
    e /= factors_[k];
  }
  return c;
}

Element FiniteGroup::index(std::span<const std::int64_t> c) const {
  require(c.size() == factors_.size(), "coordinate dimension mismatch");
  Element e = 0;
  for (std::size_t k = factors_.size(); k-- > 0;)
    e = e * factors_[k] + static_cast<Element>(wrap(c[k], factors_[k]));
  return e;
}

Element FiniteGroup::op(Element a, Element b) const {
  require(contains(a) && contains(b), "element outside group");
  Element e = 0;
  Element stride = 1;
  for (auto n : factors_) {
    e += ((a % n + b % n) % n) * stride;
    a /= n;
    b /= n;
    stride *= n;
  }
  return e;
}

Element FiniteGroup::inverse(Element a) const {
  require(contains(a), "element outside group");
  Element e = 0;
  Element stride = 1;
  for (auto n : factors_) {
    e += ((n - a % n) % n) * stride;
    a /= n;
    stride *= n;
  }
  return e;
}

GridTorus::GridTorus(std::size_t dims, std::uint64_t resolution)
    : dims_(dims),
      resolution_(resolution),
      group_(FiniteGroup::product(std::vector<std::uint64_t>(dims, resolution))) {
  require(dims >= 1 && resolution >= 1, "torus needs positive dims and resolution");
}

double GridTorus::cell_volume() const noexcept {
  return std::pow(static_cast<double>(resolution_), -static_cast<double>(dims_));
}

std::vector<std::int64_t> GridTorus::cell_of(std::span<const double> point) const {
  require(point.size() == dims_, "point dimension mismatch");
  std::vector<std::int64_t> cell(dims_);
  const auto m = static_cast<double>(resolution_);
  for (std::size_t k = 0; k < dims_; ++k) {
    const double x = point[k] - std::floor(point[k]);
    cell[k] = wrap(static_cast<std::int64_t>(std::floor(x * m)), resolution_);
  }
  return cell;
}

std::vector<double> GridTorus::cell_center(std::span<const std::int64_t> cell) const {
  require(cell.size() == dims_, "cell dimension mismatch");
  std::vector<double> x(dims_);
  for (std::size_t k = 0; k < dims_; ++k)
    x[k] = (static_cast<double>(wrap(cell[k], resolution_)) + 0.5) /
           static_cast<double>(resolution_);
  return x;
}

std::vector<std::int64_t> GridTorus::snap_shift(std::span<const double> shift) const {
  require(shift.size() == dims_, "shift dimension mismatch");
  std::vector<std::int64_t> cells(dims_);
  for (std::size_t k = 0; k < dims_; ++k)
    cells[k] = static_cast<std::int64_t>(
        std::llround(shift[k] * static_cast<double>(resolution_)));
  return cells;
}

IndicatorSet::IndicatorSet(FiniteGroup g, std::vector<std::uint8_t> bits)
    : group_(std::move(g)), bits_(std::move(bits)) {}

IndicatorSet::IndicatorSet(FiniteGroup g, Procedural proc)
    : group_(std::move(g)), procedural_(std::move(proc)) {}

IndicatorSet IndicatorSet::empty(const FiniteGroup& g) {
  if (g.order() > kMaxExplicit) throw BudgetError("explicit set too large");
  return IndicatorSet(g, std::vector<std::uint8_t>(g.order(), 0));
}

IndicatorSet IndicatorSet::full(const FiniteGroup& g) {
  if (g.order() > kMaxExplicit) throw BudgetError("explicit set too large");
  return IndicatorSet(g, std::vector<std::uint8_t>(g.order(), 1));
}

IndicatorSet IndicatorSet::from_members(const FiniteGroup& g,
                                        std::span<const Element> members) {
  auto s = empty(g);
  for (auto e : members) {
    if (!g.contains(e)) throw ArgumentError("member outside group");
    s.bits_[e] = 1;
  }
  return s;
}

IndicatorSet IndicatorSet::from_bits(const FiniteGroup& g, std::vector<std::uint8_t> bits) {
  require(bits.size() == g.order(), "bit vector size must equal group order");
  for (auto& b : bits) b = b ? 1 : 0;
  return IndicatorSet(g, std::move(bits));
}

IndicatorSet IndicatorSet::procedural(const FiniteGroup& g, std::uint64_t seed, double p) {
  require(p >= 0.0 && p <= 1.0, "inclusion probability must lie in [0,1]");
  return IndicatorSet(g, Procedural{seed, p, std::vector<std::int64_t>(g.rank(), 0)});
}

IndicatorSet IndicatorSet::random_subset(const FiniteGroup& g, std::uint64_t k,
                                         RandomStream rng) {
  const auto n = g.order();
  require(k <= n, "subset larger than group");
  std::vector<Element> perm(n);
  std::iota(perm.begin(), perm.end(), Element{0});
  for (std::uint64_t i = 0; i < k; ++i)
    std::swap(perm[i], perm[i + rng.next_below(n - i)]);
  return from_members(g, std::span(perm).first(k));
}

bool IndicatorSet::hash_member(const Procedural& proc, std::span<const std::int64_t> cell) {
  // p == 1 must give the full set; the hashed uniform lies in [0,1).
  std::uint64_t h = mix64(proc.seed);
  for (std::size_t k = 0; k < cell.size(); ++k)
    h = mix64(h ^ (static_cast<std::uint64_t>(cell[k]) + 0x632BE59BD9B4E019ull * (k + 1)));
  const double u = static_cast<double>(h >> 11) * 0x1.0p-53;
  return (u < proc.p) != proc.complemented;
}

double IndicatorSet::density() const noexcept {
  if (procedural_) return procedural_->complemented ? 1.0 - procedural_->p : procedural_->p;
  return measure();
}

bool IndicatorSet::contains_cell(std::span<const std::int64_t> cell) const {
  require(cell.size() == group_.rank(), "cell dimension mismatch");
  if (procedural_) {
    // Membership of x in g + E is membership of the canonical cell x - g in E.
    std::vector<std::int64_t> base(cell.size());
    for (std::size_t k = 0; k < cell.size(); ++k)
      base[k] = wrap(cell[k] - procedural_->shift[k], group_.factors()[k]);
    return hash_member(*procedural_, base);
  }
  return bits_[group_.index(cell)] != 0;
}

bool IndicatorSet::contains(Element e) const {
  if (!group_.contains(e)) throw ArgumentError("element outside carrier");
  if (procedural_) return contains_cell(group_.coords(e));
  return bits_[e] != 0;
}

std::uint64_t IndicatorSet::count() const {
  if (procedural_) {
    const auto n = group_.order();
    if (n > kMaxProceduralScan)
      throw BudgetError("procedural set too large to count exactly; sample instead");
    std::uint64_t c = 0;
    for (Element e = 0; e < n; ++e) c += contains(e) ? 1 : 0;
    return c;
  }
  return static_cast<std::uint64_t>(std::count(bits_.begin(), bits_.end(), std::uint8_t{1}));
}

double IndicatorSet::measure() const {
  return static_cast<double>(count()) / static_cast<double>(group_.order());
}

std::vector<Element> IndicatorSet::members() const {
  std::vector<Element> out;
  const auto n = group_.order();
  for (Element e = 0; e < n; ++e)
    if (contains(e)) out.push_back(e);
  return out;
}

const std::vector<std::uint8_t>& IndicatorSet::bits() const {
  if (procedural_) throw ArgumentError("procedural set has no explicit bits");
  return bits_;
}

IndicatorSet IndicatorSet::translated(Element g) const {
  if (!group_.contains(g)) throw ArgumentError("shift outside group");
  return translated_cells(group_.coords(g));
}

IndicatorSet IndicatorSet::translated_cells(std::span<const std::int64_t> shift) const {
  require(shift.size() == group_.rank(), "shift dimension mismatch");
  if (procedural_) {
    Procedural p = *procedural_;
    for (std::size_t k = 0; k < shift.size(); ++k) p.shift[k] += shift[k];
    return IndicatorSet(group_, std::move(p));
  }
  std::vector<std::uint8_t> out(bits_.size(), 0);
  const auto& f = group_.factors();
  std::vector<std::int64_t> c(f.size(), 0);
  // Walk cells in index order, updating the mixed-radix coordinates in place.
  for (Element e = 0; e < bits_.size(); ++e) {
    if (bits_[e]) {
      std::vector<std::int64_t> t(c);
      for (std::size_t k = 0; k < f.size(); ++k) t[k] += shift[k];
      out[group_.index(t)] = 1;
    }
    for (std::size_t k = 0; k < f.size(); ++k) {
      if (++c[k] < static_cast<std::int64_t>(f[k])) break;
      c[k] = 0;
    }
  }
  return IndicatorSet(group_, std::move(out));
}

IndicatorSet IndicatorSet::complement() const {
  if (procedural_) {
    Procedural p = *procedural_;
    p.complemented = !p.complemented;
    return IndicatorSet(group_, std::move(p));
  }
  std::vector<std::uint8_t> out(bits_.size());
  for (std::size_t i = 0; i < bits_.size(); ++i) out[i] = bits_[i] ? 0 : 1;
  return IndicatorSet(group_, std::move(out));
}

IndicatorSet IndicatorSet::explicit_copy() const {
  if (!procedural_) return *this;
  auto s = empty(group_);
  for (Element e = 0; e < s.bits_.size(); ++e) s.bits_[e] = contains(e) ? 1 : 0;
  return s;
}

IndicatorSet set_union(const IndicatorSet& a, const IndicatorSet& b) {
  require(a.group_ == b.group_, "set carriers differ");
  auto x = a.explicit_copy();
  auto y = b.explicit_copy();
  for (std::size_t i = 0; i < x.bits_.size(); ++i) x.bits_[i] |= y.bits_[i];
  return x;
}

IndicatorSet set_intersection(const IndicatorSet& a, const IndicatorSet& b) {
  require(a.group_ == b.group_, "set carriers differ");
  auto x = a.explicit_copy();
  auto y = b.explicit_copy();
  for (std::size_t i = 0; i < x.bits_.size(); ++i) x.bits_[i] &= y.bits_[i];
  return x;
}

bool IndicatorSet::operator==(const IndicatorSet& other) const {
  if (!(group_ == other.group_)) return false;
  return explicit_copy().bits_ == other.explicit_copy().bits_;
}

double measure(const IndicatorSet& s) { return s.measure(); }

IndicatorSet translate_set(const IndicatorSet& s, Element g) { return s.translated(g); }

SnappedTranslate translate_set(const IndicatorSet& s, const GridTorus& torus,
                               std::span<const double> shift) {
  require(s.carrier() == torus.group(), "set does not live on this torus");
  auto cells = torus.snap_shift(shift);
  return {s.translated_cells(cells), cells, torus.snap_error()};
}

Element sample_uniform(const FiniteGroup& g, RandomStream& rng) {
  return rng.next_below(g.order());
}

std::vector<std::int64_t> sample_uniform(const GridTorus& torus, RandomStream& rng) {
  std::vector<std::int64_t> cell(torus.dims());
  for (auto& c : cell) c = static_cast<std::int64_t>(rng.next_below(torus.resolution()));
  return cell;
}

std::vector<double> sample_point(std::size_t dims, RandomStream& rng) {
  std::vector<double> x(dims);
  for (auto& v : x) v = rng.next_double();
  return x;
}

}  // namespace dyadkit
