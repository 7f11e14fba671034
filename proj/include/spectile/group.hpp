#pragma once

// Finite abelian groups presented as Z_{n_1} x ... x Z_{n_d}, kept in the
// coordinates the caller chose (no reduction to invariant factors).

#include <spectile/error.hpp>

#include <algorithm>
#include <charconv>
#include <compare>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace spectile {

inline constexpr std::uint64_t kDefaultEnumerationBudget = std::uint64_t{1} << 24;
inline constexpr std::size_t kMaxDimension = 4096;

struct GroupElement {
  std::vector<std::uint64_t> coords;

  std::size_t dimension() const noexcept { return coords.size(); }

  friend bool operator==(const GroupElement&, const GroupElement&) = default;
  friend auto operator<=>(const GroupElement&, const GroupElement&) = default;
};

class GroupSpec {
 public:
  explicit GroupSpec(std::vector<std::uint64_t> orders) : orders_(std::move(orders)) {
    if (orders_.empty()) throw PreconditionError("group needs at least one cyclic factor");
    if (orders_.size() > kMaxDimension) throw SizeLimitError("too many cyclic factors");
    order_ = 1;
    exponent_ = 1;
    for (const auto n : orders_) {
      if (n == 0) throw PreconditionError("cyclic factor orders must be positive");
      order_ = detail::checked_mul(order_, n, "group order");
      exponent_ = detail::lcm(exponent_, n, "group exponent");
    }
  }

  const std::vector<std::uint64_t>& orders() const noexcept { return orders_; }
  std::size_t dimension() const noexcept { return orders_.size(); }
  std::uint64_t order() const noexcept { return order_; }
  // lcm of the factor orders; characters take values in the exponent()-th roots of unity.
  std::uint64_t exponent() const noexcept { return exponent_; }

  friend bool operator==(const GroupSpec& a, const GroupSpec& b) { return a.orders_ == b.orders_; }

  bool contains(const GroupElement& g) const noexcept {
    if (g.coords.size() != orders_.size()) return false;
    for (std::size_t i = 0; i < orders_.size(); ++i) {
      if (g.coords[i] >= orders_[i]) return false;
    }
    return true;
  }

  void require(const GroupElement& g) const {
    if (!contains(g)) {
      throw AmbientMismatch("element " + format(g) + " does not belong to Z_" + to_string());
    }
  }

  // Reduces each coordinate into [0, n_i).
  GroupElement element(std::span<const std::int64_t> raw) const {
    if (raw.size() != orders_.size()) {
      throw AmbientMismatch("expected " + std::to_string(orders_.size()) + " coordinates, got " +
                            std::to_string(raw.size()));
    }
    GroupElement g;
    g.coords.resize(raw.size());
    for (std::size_t i = 0; i < raw.size(); ++i) {
      const auto n = static_cast<__int128>(orders_[i]);
      __int128 r = static_cast<__int128>(raw[i]) % n;
      if (r < 0) r += n;
      g.coords[i] = static_cast<std::uint64_t>(r);
    }
    return g;
  }

  GroupElement element(std::initializer_list<std::int64_t> raw) const {
    return element(std::span<const std::int64_t>(raw.begin(), raw.size()));
  }

  GroupElement zero() const { return GroupElement{std::vector<std::uint64_t>(orders_.size(), 0)}; }

  GroupElement add(const GroupElement& a, const GroupElement& b) const {
    require(a);
    require(b);
    GroupElement r{std::vector<std::uint64_t>(orders_.size())};
    for (std::size_t i = 0; i < orders_.size(); ++i) {
      const auto s = a.coords[i] + b.coords[i];  // s < a flags wraparound for n_i > 2^63
      r.coords[i] = (s < a.coords[i] || s >= orders_[i]) ? s - orders_[i] : s;
    }
    return r;
  }

  GroupElement neg(const GroupElement& a) const {
    require(a);
    GroupElement r{std::vector<std::uint64_t>(orders_.size())};
    for (std::size_t i = 0; i < orders_.size(); ++i) {
      r.coords[i] = a.coords[i] == 0 ? 0 : orders_[i] - a.coords[i];
    }
    return r;
  }

  GroupElement sub(const GroupElement& a, const GroupElement& b) const {
    require(a);
    require(b);
    GroupElement r{std::vector<std::uint64_t>(orders_.size())};
    for (std::size_t i = 0; i < orders_.size(); ++i) {
      r.coords[i] = a.coords[i] >= b.coords[i] ? a.coords[i] - b.coords[i]
                                               : orders_[i] - (b.coords[i] - a.coords[i]);
    }
    return r;
  }

  // Position of g in the lexicographic enumeration (last coordinate fastest).
  std::uint64_t rank(const GroupElement& g) const {
    require(g);
    std::uint64_t r = 0;
    for (std::size_t i = 0; i < orders_.size(); ++i) r = r * orders_[i] + g.coords[i];
    return r;
  }

  GroupElement unrank(std::uint64_t r) const {
    if (r >= order_) throw PreconditionError("rank out of range");
    GroupElement g{std::vector<std::uint64_t>(orders_.size())};
    for (std::size_t i = orders_.size(); i-- > 0;) {
      g.coords[i] = r % orders_[i];
      r /= orders_[i];
    }
    return g;
  }

  // Canonical textual form, e.g. "2x3". Parses back to an equal spec.
  std::string to_string() const {
    std::string s;
    for (std::size_t i = 0; i < orders_.size(); ++i) {
      if (i) s += 'x';
      s += std::to_string(orders_[i]);
    }
    return s;
  }

  static std::string format(const GroupElement& g) {
    std::string s = "(";
    for (std::size_t i = 0; i < g.coords.size(); ++i) {
      if (i) s += ',';
      s += std::to_string(g.coords[i]);
    }
    return s + ")";
  }

 private:
  std::vector<std::uint64_t> orders_;
  std::uint64_t order_ = 1;
  std::uint64_t exponent_ = 1;
};

namespace detail {

inline std::uint64_t parse_positive(std::string_view text, std::string_view whole) {
  if (text.empty() || text.front() < '0' || text.front() > '9') {
    throw ParseError("malformed group spec '" + std::string(whole) + "'");
  }
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec == std::errc::result_out_of_range) {
    throw SizeLimitError("integer too large in group spec '" + std::string(whole) + "'");
  }
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw ParseError("malformed group spec '" + std::string(whole) + "'");
  }
  if (v == 0) throw ParseError("zero factor in group spec '" + std::string(whole) + "'");
  return v;
}

}  // namespace detail

// spec := factor (("," | "x") factor)* ; factor := INT ("^" INT)?
inline GroupSpec parse_group_spec(std::string_view text) {
  std::vector<std::uint64_t> orders;
  std::size_t pos = 0;
  while (true) {
    const auto end = text.find_first_of(",x", pos);
    const auto factor = text.substr(pos, end == std::string_view::npos ? text.npos : end - pos);
    const auto caret = factor.find('^');
    const auto base = detail::parse_positive(factor.substr(0, caret), text);
    std::uint64_t reps = 1;
    if (caret != std::string_view::npos) reps = detail::parse_positive(factor.substr(caret + 1), text);
    if (reps > kMaxDimension || orders.size() + reps > kMaxDimension) {
      throw SizeLimitError("group spec '" + std::string(text) + "' has too many factors");
    }
    orders.insert(orders.end(), reps, base);
    if (end == std::string_view::npos) break;
    pos = end + 1;
  }
  return GroupSpec(std::move(orders));
}

// Visits every element in lexicographic order. Throws BudgetExceeded when the
// group is larger than `budget`.
template <typename Fn>
void for_each_element(const GroupSpec& spec, Fn&& fn,
                      std::uint64_t budget = kDefaultEnumerationBudget) {
  if (spec.order() > budget) {
    throw BudgetExceeded("group of order " + std::to_string(spec.order()) +
                         " exceeds enumeration budget " + std::to_string(budget));
  }
  GroupElement g = spec.zero();
  const auto& n = spec.orders();
  for (std::uint64_t r = 0; r < spec.order(); ++r) {
    fn(std::as_const(g));
    for (std::size_t i = n.size(); i-- > 0;) {
      if (++g.coords[i] < n[i]) break;
      g.coords[i] = 0;
    }
  }
}

inline std::vector<GroupElement> enumerate(const GroupSpec& spec,
                                           std::uint64_t budget = kDefaultEnumerationBudget) {
  std::vector<GroupElement> out;
  if (spec.order() <= budget) out.reserve(spec.order());
  for_each_element(spec, [&](const GroupElement& g) { out.push_back(g); }, budget);
  return out;
}

inline GroupSpec product_group(const GroupSpec& g1, const GroupSpec& g2,
                               std::uint64_t budget = kDefaultEnumerationBudget * kDefaultEnumerationBudget) {
  std::vector<std::uint64_t> orders = g1.orders();
  orders.insert(orders.end(), g2.orders().begin(), g2.orders().end());
  GroupSpec prod(std::move(orders));
  if (prod.order() > budget) {
    throw BudgetExceeded("product group order " + std::to_string(prod.order()) + " exceeds budget");
  }
  return prod;
}

inline GroupElement pair(const GroupSpec& g1, const GroupSpec& g2, const GroupElement& x,
                         const GroupElement& y) {
  g1.require(x);
  g2.require(y);
  GroupElement z = x;
  z.coords.insert(z.coords.end(), y.coords.begin(), y.coords.end());
  return z;
}

inline std::pair<GroupElement, GroupElement> unpair(const GroupSpec& g1, const GroupSpec& g2,
                                                    const GroupElement& z) {
  if (z.coords.size() != g1.dimension() + g2.dimension()) {
    throw AmbientMismatch("element " + GroupSpec::format(z) + " is not in the product group");
  }
  const auto split = z.coords.begin() + static_cast<std::ptrdiff_t>(g1.dimension());
  GroupElement x{{z.coords.begin(), split}};
  GroupElement y{{split, z.coords.end()}};
  g1.require(x);
  g2.require(y);
  return {std::move(x), std::move(y)};
}

// A duplicate-free subset of a group, stored in lexicographic order.
class PointSet {
 public:
  explicit PointSet(GroupSpec ambient) : ambient_(std::move(ambient)) {}

  PointSet(GroupSpec ambient, std::vector<GroupElement> points)
      : ambient_(std::move(ambient)), points_(std::move(points)) {
    for (const auto& p : points_) ambient_.require(p);
    std::sort(points_.begin(), points_.end());
    const auto dup = std::adjacent_find(points_.begin(), points_.end());
    if (dup != points_.end()) {
      throw PreconditionError("duplicate point " + GroupSpec::format(*dup));
    }
  }

  // Builds from lexicographic ranks; duplicates rejected.
  static PointSet from_ranks(const GroupSpec& ambient, std::span<const std::uint64_t> ranks) {
    std::vector<GroupElement> pts;
    pts.reserve(ranks.size());
    for (const auto r : ranks) pts.push_back(ambient.unrank(r));
    return PointSet(ambient, std::move(pts));
  }

  const GroupSpec& ambient() const noexcept { return ambient_; }
  const std::vector<GroupElement>& points() const noexcept { return points_; }
  std::size_t size() const noexcept { return points_.size(); }
  bool empty() const noexcept { return points_.empty(); }
  auto begin() const noexcept { return points_.begin(); }
  auto end() const noexcept { return points_.end(); }

  bool contains(const GroupElement& g) const {
    return std::binary_search(points_.begin(), points_.end(), g);
  }

  std::vector<std::uint64_t> ranks() const {
    std::vector<std::uint64_t> r;
    r.reserve(points_.size());
    for (const auto& p : points_) r.push_back(ambient_.rank(p));
    return r;
  }

  PointSet translate(const GroupElement& t) const {
    std::vector<GroupElement> pts;
    pts.reserve(points_.size());
    for (const auto& p : points_) pts.push_back(ambient_.add(p, t));
    return PointSet(ambient_, std::move(pts));
  }

  friend bool operator==(const PointSet&, const PointSet&) = default;

 private:
  GroupSpec ambient_;
  std::vector<GroupElement> points_;
};

inline void require_same_ambient(const PointSet& a, const PointSet& b) {
  if (!(a.ambient() == b.ambient())) {
    throw AmbientMismatch("sets live in Z_" + a.ambient().to_string() + " and Z_" +
                          b.ambient().to_string());
  }
}

// {(x, y) : x in a, y in b} inside product_group(a.ambient(), b.ambient()).
inline PointSet cartesian_product(const PointSet& a, const PointSet& b) {
  const GroupSpec prod = product_group(a.ambient(), b.ambient());
  std::vector<GroupElement> pts;
  pts.reserve(a.size() * b.size());
  for (const auto& x : a) {
    for (const auto& y : b) pts.push_back(pair(a.ambient(), b.ambient(), x, y));
  }
  return PointSet(prod, std::move(pts));
}

}  // namespace spectile
