#pragma once

// Translational tilings of a finite abelian group: T (+) U = G with every
// element written uniquely as t + u.

#include <spectile/error.hpp>
#include <spectile/group.hpp>
#include <spectile/spectral.hpp>

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace spectile {

struct TilingCertificate {
  PointSet tile;
  PointSet complement;
  // coverage[rank(g)] = #{(t, u) : t + u = g}; all ones in a certificate.
  std::vector<std::uint64_t> coverage;
};

struct TilingCheck {
  std::optional<TilingCertificate> certificate;
  std::string failure;
  std::optional<GroupElement> failing_element;
  std::uint64_t failing_count = 0;

  bool ok() const noexcept { return certificate.has_value(); }
};

// table[rank(g)] = #{(a, b) in A x B : a + b = g}.
inline std::vector<std::uint64_t> sum_coverage(const PointSet& A, const PointSet& B,
                                               std::uint64_t budget = kDefaultEnumerationBudget) {
  require_same_ambient(A, B);
  const auto& G = A.ambient();
  if (G.order() > budget) throw BudgetExceeded("coverage table for Z_" + G.to_string() + " exceeds budget");
  std::vector<std::uint64_t> table(G.order(), 0);
  for (const auto& a : A) {
    for (const auto& b : B) ++table[G.rank(G.add(a, b))];
  }
  return table;
}

inline TilingCheck verify_tiling(const PointSet& A, const PointSet& B,
                                 std::uint64_t budget = kDefaultEnumerationBudget) {
  require_same_ambient(A, B);
  const auto& G = A.ambient();
  TilingCheck out;
  const auto product = static_cast<unsigned __int128>(A.size()) * B.size();
  if (product != G.order()) {
    out.failure = "cardinality: |A|*|B|=" + std::to_string(static_cast<std::uint64_t>(product)) +
                  " but |G|=" + std::to_string(G.order());
  }
  auto table = sum_coverage(A, B, budget);
  // The reported failure is the first uncovered element, else the first
  // element covered more than once.
  auto bad = std::find(table.begin(), table.end(), std::uint64_t{0});
  if (bad == table.end()) bad = std::find_if(table.begin(), table.end(), [](std::uint64_t c) { return c > 1; });
  if (bad != table.end()) {
    out.failing_element = G.unrank(static_cast<std::uint64_t>(bad - table.begin()));
    out.failing_count = *bad;
    out.failure = "g=" + GroupSpec::format(*out.failing_element) + " count=" + std::to_string(*bad);
    return out;
  }
  out.certificate = TilingCertificate{A, B, std::move(table)};
  return out;
}

struct ComplementSearchResult {
  SearchStatus status = SearchStatus::exhausted_none;
  std::optional<TilingCertificate> certificate;
  std::uint64_t nodes = 0;
  std::string detail;
};

namespace detail {

// Exact cover of G by translates A + u, on dancing links. Columns are group
// elements (by rank), row u holds the ranks of A + u.
class TranslateCover {
 public:
  TranslateCover(const PointSet& A, std::uint64_t budget) : budget_(budget) {
    const auto& G = A.ambient();
    n_ = static_cast<std::size_t>(G.order());
    k_ = A.size();
    const std::size_t header = n_;  // root sits after the column headers
    const std::size_t total = n_ + 1 + n_ * k_;
    left_.resize(total);
    right_.resize(total);
    up_.resize(total);
    down_.resize(total);
    column_.resize(total);
    row_.resize(total);
    size_.assign(n_, 0);
    for (std::size_t c = 0; c <= n_; ++c) {
      left_[c] = c == 0 ? header : c - 1;
      right_[c] = c == header ? 0 : c + 1;
      up_[c] = down_[c] = c;
      column_[c] = c;
    }
    right_[header] = n_ == 0 ? header : 0;
    left_[0] = header;
    root_ = header;

    row_start_.resize(n_);
    std::size_t node = n_ + 1;
    std::vector<std::uint64_t> cols(k_);
    for_each_element(G, [&](const GroupElement& u) {
      const auto r = static_cast<std::size_t>(G.rank(u));
      for (std::size_t i = 0; i < k_; ++i) cols[i] = G.rank(G.add(A.points()[i], u));
      row_start_[r] = node;
      for (std::size_t i = 0; i < k_; ++i, ++node) {
        const auto c = static_cast<std::size_t>(cols[i]);
        column_[node] = c;
        row_[node] = r;
        up_[node] = up_[c];
        down_[node] = c;
        down_[up_[c]] = node;
        up_[c] = node;
        ++size_[c];
        left_[node] = i == 0 ? node + k_ - 1 : node - 1;
        right_[node] = i + 1 == k_ ? node + 1 - k_ : node + 1;
      }
    });
  }

  // Fewest-candidates-first Algorithm X with row 0 (u = 0) forced.
  SearchStatus solve_min_column(std::vector<std::size_t>& rows) {
    select_row(0, rows);
    if (search_min_column(rows)) return SearchStatus::found;
    return budget_hit_ ? SearchStatus::budget_exceeded : SearchStatus::exhausted_none;
  }

  // Include/exclude on rows in increasing u; the first solution is the
  // lexicographically least complement.
  SearchStatus solve_canonical(std::vector<std::size_t>& rows) {
    removed_row_.assign(n_, 0);
    if (search_canonical(0, rows)) return SearchStatus::found;
    return budget_hit_ ? SearchStatus::budget_exceeded : SearchStatus::exhausted_none;
  }

  std::uint64_t nodes() const noexcept { return nodes_; }

 private:
  void cover(std::size_t c) {
    right_[left_[c]] = right_[c];
    left_[right_[c]] = left_[c];
    for (std::size_t i = down_[c]; i != c; i = down_[i]) {
      for (std::size_t j = right_[i]; j != i; j = right_[j]) {
        down_[up_[j]] = down_[j];
        up_[down_[j]] = up_[j];
        --size_[column_[j]];
      }
    }
  }

  void uncover(std::size_t c) {
    for (std::size_t i = up_[c]; i != c; i = up_[i]) {
      for (std::size_t j = left_[i]; j != i; j = left_[j]) {
        ++size_[column_[j]];
        down_[up_[j]] = j;
        up_[down_[j]] = j;
      }
    }
    right_[left_[c]] = c;
    left_[right_[c]] = c;
  }

  void select_row(std::size_t r, std::vector<std::size_t>& rows) {
    const auto start = row_start_[r];
    std::size_t j = start;
    do {
      cover(column_[j]);
      j = right_[j];
    } while (j != start);
    rows.push_back(r);
  }

  void deselect_row(std::vector<std::size_t>& rows) {
    const auto start = row_start_[rows.back()];
    std::size_t j = left_[start];
    while (true) {
      uncover(column_[j]);
      if (j == start) break;
      j = left_[j];
    }
    rows.pop_back();
  }

  bool tick() {
    if (++nodes_ > budget_) {
      budget_hit_ = true;
      return false;
    }
    return true;
  }

  bool search_min_column(std::vector<std::size_t>& rows) {
    if (right_[root_] == root_) return true;
    std::size_t best = right_[root_];
    for (std::size_t c = right_[best]; c != root_ && size_[best] > 1; c = right_[c]) {
      if (size_[c] < size_[best]) best = c;
    }
    if (size_[best] == 0) return false;
    for (std::size_t i = down_[best]; i != best; i = down_[i]) {
      if (!tick()) return false;
      select_row(row_[i], rows);
      if (search_min_column(rows)) return true;
      deselect_row(rows);
      if (budget_hit_) return false;
    }
    return false;
  }

  // A row is live while all its columns are uncovered and it has not been
  // excluded; live rows are exactly those still linked into their columns.
  bool row_live(std::size_t r) const {
    if (removed_row_[r]) return false;
    const auto start = row_start_[r];
    std::size_t j = start;
    do {
      const auto c = column_[j];
      if (right_[left_[c]] != c) return false;
      j = right_[j];
    } while (j != start);
    return true;
  }

  void unlink_row(std::size_t r) {
    const auto start = row_start_[r];
    std::size_t j = start;
    do {
      down_[up_[j]] = down_[j];
      up_[down_[j]] = up_[j];
      --size_[column_[j]];
      j = right_[j];
    } while (j != start);
  }

  void relink_row(std::size_t r) {
    const auto start = row_start_[r];
    std::size_t j = left_[start];
    while (true) {
      ++size_[column_[j]];
      down_[up_[j]] = j;
      up_[down_[j]] = j;
      if (j == start) break;
      j = left_[j];
    }
  }

  bool search_canonical(std::size_t next, std::vector<std::size_t>& rows) {
    if (right_[root_] == root_) return true;
    for (std::size_t c = right_[root_]; c != root_; c = right_[c]) {
      if (size_[c] == 0) return false;
    }
    std::size_t r = next;
    while (r < n_ && !row_live(r)) ++r;
    if (r == n_) return false;
    if (!tick()) return false;
    select_row(r, rows);
    if (search_canonical(r + 1, rows)) return true;
    deselect_row(rows);
    if (budget_hit_) return false;
    removed_row_[r] = 1;
    unlink_row(r);
    const bool ok = search_canonical(r + 1, rows);
    if (!ok) {
      relink_row(r);
      removed_row_[r] = 0;
    }
    return ok;
  }

  std::uint64_t budget_;
  std::uint64_t nodes_ = 0;
  bool budget_hit_ = false;
  std::size_t n_ = 0;
  std::size_t k_ = 0;
  std::size_t root_ = 0;
  std::vector<std::size_t> left_, right_, up_, down_, column_, row_, size_, row_start_;
  std::vector<char> removed_row_;
};

}  // namespace detail

// Searches for U with A (+) U = G, normalised so that 0 is in U.
inline ComplementSearchResult find_complement(const PointSet& A, const SearchOptions& opts = {}) {
  const auto& G = A.ambient();
  if (A.empty()) throw PreconditionError("cannot tile with the empty set");
  if (G.order() % A.size() != 0) {
    throw PreconditionError("|A|=" + std::to_string(A.size()) + " does not divide |G|=" +
                            std::to_string(G.order()));
  }
  ComplementSearchResult out;
  const auto cells = static_cast<unsigned __int128>(G.order()) * (A.size() + 1);
  if (G.order() > opts.max_order || cells > (std::uint64_t{1} << 28)) {
    out.status = SearchStatus::budget_exceeded;
    out.detail = "group order " + std::to_string(G.order()) + " exceeds search budget";
    return out;
  }
  detail::TranslateCover cover(A, opts.node_budget);
  std::vector<std::size_t> rows;
  out.status = opts.canonical ? cover.solve_canonical(rows) : cover.solve_min_column(rows);
  out.nodes = cover.nodes();
  if (out.status == SearchStatus::found) {
    std::vector<std::uint64_t> ranks(rows.begin(), rows.end());
    auto check = verify_tiling(A, PointSet::from_ranks(G, ranks));
    if (!check.ok()) throw Error("internal: exact cover produced an invalid complement: " + check.failure);
    out.certificate = std::move(check.certificate);
  } else if (out.status == SearchStatus::budget_exceeded) {
    out.detail = "node budget " + std::to_string(opts.node_budget) + " exhausted";
  } else {
    out.detail = "exact cover exhausted after " + std::to_string(out.nodes) + " nodes";
  }
  return out;
}

}  // namespace spectile
