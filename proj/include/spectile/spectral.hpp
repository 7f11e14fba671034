#pragma once

// Spectral pairs in a finite abelian group G = Z_{n_1} x ... x Z_{n_d}.
//
// The dual group is identified with G through the coordinatewise pairing
//   chi_h(g) = zeta_L^{sum_i (L / n_i) h_i g_i},  L = exponent(G).
// (S, Lambda) is a spectral pair when |Lambda| = |S| and the characters of
// Lambda are pairwise orthogonal on S, i.e. sum_{s in S} chi_{h1 - h2}(s) = 0
// for every pair h1 != h2 in Lambda.

#include <spectile/bitset.hpp>
#include <spectile/cyclotomic.hpp>
#include <spectile/error.hpp>
#include <spectile/group.hpp>

#include <algorithm>
#include <atomic>
#include <mutex>
#include <numeric>
#include <optional>
#include <string>
#include <thread>
#include <unordered_map>
#include <utility>
#include <vector>

namespace spectile {

namespace detail {

class CharacterKernel {
 public:
  explicit CharacterKernel(const GroupSpec& spec) : L_(spec.exponent()) {
    weights_.reserve(spec.dimension());
    for (const auto n : spec.orders()) weights_.push_back(L_ / n);
  }

  std::uint64_t root_order() const noexcept { return L_; }

  std::uint64_t operator()(const GroupElement& h, const GroupElement& g) const noexcept {
    unsigned __int128 acc = 0;
    for (std::size_t i = 0; i < weights_.size(); ++i) {
      // weights_[i] * h_i < L, so the product with g_i < n_i fits in 128 bits.
      acc += static_cast<unsigned __int128>(weights_[i] * h.coords[i]) * g.coords[i] % L_;
    }
    return static_cast<std::uint64_t>(acc % L_);
  }

 private:
  std::uint64_t L_;
  std::vector<std::uint64_t> weights_;
};

}  // namespace detail

// k with chi_h(g) = zeta_L^k.
inline std::uint64_t character_pairing(const GroupSpec& spec, const GroupElement& h,
                                       const GroupElement& g) {
  spec.require(h);
  spec.require(g);
  return detail::CharacterKernel(spec)(h, g);
}

inline CyclotomicSum char_sum_on_set(const PointSet& S, const GroupElement& h) {
  S.ambient().require(h);
  const detail::CharacterKernel chi(S.ambient());
  CyclotomicSum sum(chi.root_order());
  for (const auto& s : S) sum.add_root(chi(h, s));
  return sum;
}

inline bool are_orthogonal(const PointSet& S, const GroupElement& h1, const GroupElement& h2) {
  return is_zero(char_sum_on_set(S, S.ambient().sub(h1, h2)));
}

struct SpectrumCertificate {
  PointSet set;
  PointSet spectrum;
  std::uint64_t checked_pairs = 0;
};

struct SpectralPairCheck {
  std::optional<SpectrumCertificate> certificate;
  std::string failure;
  std::optional<std::pair<GroupElement, GroupElement>> violating_pair;

  bool ok() const noexcept { return certificate.has_value(); }
};

// Checks every unordered pair of Lambda. Orthogonality of (h1, h2) depends
// only on h1 - h2, so each distinct difference is summed once.
inline SpectralPairCheck verify_spectral_pair(const PointSet& S, const PointSet& spectrum) {
  require_same_ambient(S, spectrum);
  SpectralPairCheck out;
  if (S.size() != spectrum.size()) {
    out.failure = "cardinality mismatch: |S|=" + std::to_string(S.size()) +
                  " |Lambda|=" + std::to_string(spectrum.size());
    return out;
  }
  const auto& G = S.ambient();
  std::unordered_map<std::uint64_t, bool> vanishes;
  const auto& pts = spectrum.points();
  std::uint64_t checked = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      const auto diff = G.sub(pts[i], pts[j]);
      const auto key = G.rank(diff);
      auto it = vanishes.find(key);
      if (it == vanishes.end()) it = vanishes.emplace(key, is_zero(char_sum_on_set(S, diff))).first;
      if (!it->second) {
        out.failure = "characters " + GroupSpec::format(pts[i]) + " and " + GroupSpec::format(pts[j]) +
                      " are not orthogonal on S";
        out.violating_pair = std::make_pair(pts[i], pts[j]);
        return out;
      }
      ++checked;
    }
  }
  out.certificate = SpectrumCertificate{S, spectrum, checked};
  return out;
}

enum class SearchStatus { found, exhausted_none, budget_exceeded };

inline const char* to_string(SearchStatus s) noexcept {
  switch (s) {
    case SearchStatus::found: return "found";
    case SearchStatus::exhausted_none: return "exhausted-none";
    case SearchStatus::budget_exceeded: return "budget-exceeded";
  }
  return "?";
}

struct SearchOptions {
  std::uint64_t node_budget = 50'000'000;
  std::uint64_t max_order = std::uint64_t{1} << 20;
  // Candidate graphs larger than this many vertices are refused (adjacency is m^2 bits).
  std::uint64_t max_graph_vertices = std::uint64_t{1} << 15;
  unsigned threads = 1;
  // Depth-first in increasing rank order; yields the lexicographically least witness.
  bool canonical = false;
};

struct SpectrumSearchResult {
  SearchStatus status = SearchStatus::exhausted_none;
  std::optional<SpectrumCertificate> certificate;
  std::uint64_t nodes = 0;
  std::string detail;
};

namespace detail {

// Decides whether a graph given by bitset adjacency has a clique of `target`
// vertices. Vertices are explored in index order, so callers encode the
// branching order by relabelling.
class CliqueSearch {
 public:
  CliqueSearch(const std::vector<Bitset>& adjacency, std::size_t target, std::uint64_t budget,
               std::atomic<std::uint64_t>& nodes, const std::atomic<bool>& stop)
      : adj_(adjacency), target_(target), budget_(budget), nodes_(nodes), stop_(stop) {}

  bool run(std::vector<std::size_t>& clique, Bitset candidates) { return expand(clique, std::move(candidates)); }
  bool budget_hit() const noexcept { return budget_hit_; }

 private:
  // Greedy sequential colouring; the number of classes bounds the clique size.
  std::size_t colour_bound(const Bitset& p) const {
    Bitset uncoloured = p;
    std::size_t colours = 0;
    while (!uncoloured.none()) {
      ++colours;
      Bitset q = uncoloured;
      for (std::size_t v = q.next(0); v < q.bits(); v = q.next(v + 1)) {
        uncoloured.reset(v);
        q.and_not(adj_[v]);
        q.reset(v);
      }
    }
    return colours;
  }

  bool expand(std::vector<std::size_t>& clique, Bitset p) {
    if (clique.size() >= target_) return true;
    if (clique.size() + p.count() < target_) return false;
    if (clique.size() + colour_bound(p) < target_) return false;
    for (std::size_t v = p.next(0); v < p.bits(); v = p.next(v + 1)) {
      if (stop_.load(std::memory_order_relaxed)) return false;
      if (nodes_.fetch_add(1, std::memory_order_relaxed) >= budget_) {
        budget_hit_ = true;
        return false;
      }
      if (clique.size() + p.count() < target_) return false;
      p.reset(v);
      clique.push_back(v);
      if (expand(clique, p & adj_[v])) return true;
      clique.pop_back();
      if (budget_hit_) return false;
    }
    return false;
  }

  const std::vector<Bitset>& adj_;
  std::size_t target_;
  std::uint64_t budget_;
  std::atomic<std::uint64_t>& nodes_;
  const std::atomic<bool>& stop_;
  bool budget_hit_ = false;
};

}  // namespace detail

// Decides spectrality of S by searching the orthogonality graph on the dual
// for a clique of size |S| through 0. Only a completed search reports
// exhausted_none; running out of budget is reported separately.
inline SpectrumSearchResult find_spectrum(const PointSet& S, const SearchOptions& opts = {}) {
  if (S.empty()) throw PreconditionError("spectrality is undefined for the empty set");
  const auto& G = S.ambient();
  SpectrumSearchResult out;
  if (G.order() > opts.max_order) {
    out.status = SearchStatus::budget_exceeded;
    out.detail = "group order " + std::to_string(G.order()) + " exceeds search budget";
    return out;
  }

  const auto finish = [&](std::vector<GroupElement> spectrum_points) {
    auto check = verify_spectral_pair(S, PointSet(G, std::move(spectrum_points)));
    if (!check.ok()) throw Error("internal: search produced an invalid spectrum: " + check.failure);
    out.status = SearchStatus::found;
    out.certificate = std::move(check.certificate);
    return out;
  };
  if (S.size() == 1) return finish({G.zero()});

  // Dual elements d != 0 whose character sums to zero on S are exactly the
  // neighbours of 0 in the orthogonality graph.
  const detail::CharacterKernel chi(G);
  std::vector<char> vanishing(G.order(), 0);
  std::vector<GroupElement> vertices;
  for_each_element(G, [&](const GroupElement& d) {
    CyclotomicSum sum(chi.root_order());
    for (const auto& s : S) sum.add_root(chi(d, s));
    if (is_zero(sum)) {
      vanishing[G.rank(d)] = 1;
      vertices.push_back(d);
    }
  }, opts.max_order);
  const std::size_t target = S.size() - 1;
  if (vertices.size() < target) {
    out.status = SearchStatus::exhausted_none;
    out.detail = "only " + std::to_string(vertices.size()) + " characters are orthogonal to the trivial one";
    return out;
  }
  if (vertices.size() > opts.max_graph_vertices) {
    out.status = SearchStatus::budget_exceeded;
    out.detail = "orthogonality graph has " + std::to_string(vertices.size()) + " candidate vertices";
    return out;
  }

  const std::size_t m = vertices.size();
  std::vector<std::vector<std::size_t>> neighbours(m);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) {
      if (vanishing[G.rank(G.sub(vertices[i], vertices[j]))]) {
        neighbours[i].push_back(j);
        neighbours[j].push_back(i);
      }
    }
  }
  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), std::size_t{0});
  if (!opts.canonical) {
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return neighbours[a].size() > neighbours[b].size();
    });
  }
  std::vector<std::size_t> position(m);
  for (std::size_t p = 0; p < m; ++p) position[order[p]] = p;
  std::vector<detail::Bitset> adj(m, detail::Bitset(m));
  for (std::size_t i = 0; i < m; ++i) {
    for (const auto j : neighbours[i]) adj[position[i]].set(position[j]);
  }

  std::atomic<std::uint64_t> nodes{0};
  std::atomic<bool> stop{false};
  std::optional<std::vector<std::size_t>> found;
  bool budget_hit = false;

  if (opts.threads <= 1 || opts.canonical) {
    detail::Bitset all(m);
    for (std::size_t v = 0; v < m; ++v) all.set(v);
    detail::CliqueSearch search(adj, target, opts.node_budget, nodes, stop);
    std::vector<std::size_t> clique;
    if (search.run(clique, all)) found = clique;
    budget_hit = search.budget_hit();
  } else {
    // Each top-level vertex v roots the subtree of cliques whose earliest
    // vertex is v; subtrees are independent.
    std::atomic<std::size_t> next{0};
    std::mutex result_mutex;
    std::atomic<bool> any_budget_hit{false};
    const auto worker = [&] {
      for (std::size_t v = next.fetch_add(1); v < m && !stop.load(); v = next.fetch_add(1)) {
        detail::Bitset later(m);
        for (std::size_t u = v + 1; u < m; ++u) later.set(u);
        later &= adj[v];
        detail::CliqueSearch search(adj, target, opts.node_budget, nodes, stop);
        std::vector<std::size_t> clique{v};
        if (search.run(clique, later)) {
          std::lock_guard lock(result_mutex);
          if (!found) found = clique;
          stop.store(true);
        }
        if (search.budget_hit()) {
          any_budget_hit.store(true);
          stop.store(true);
        }
      }
    };
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < opts.threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    budget_hit = any_budget_hit.load();
  }
  out.nodes = nodes.load();

  if (found) {
    std::vector<GroupElement> spectrum{G.zero()};
    for (const auto p : *found) spectrum.push_back(vertices[order[p]]);
    return finish(std::move(spectrum));
  }
  if (budget_hit) {
    out.status = SearchStatus::budget_exceeded;
    out.detail = "node budget " + std::to_string(opts.node_budget) + " exhausted";
  } else {
    out.status = SearchStatus::exhausted_none;
    out.detail = "clique search exhausted after " + std::to_string(out.nodes) + " nodes";
  }
  return out;
}

}  // namespace spectile
