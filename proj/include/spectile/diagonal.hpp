#pragma once

// The diagonal D = {(g, g)} of G x G as a universal spectrum candidate.
//
// For P in G x G with |P| = |G|, (P, D) is a spectral pair exactly when the
// sums {a + b : (a, b) in P} run through G once each; equivalently P meets
// every coset of the antidiagonal {(g, -g)} once. Applied to P = A x B this
// says A tiles G with B iff (A x B, D) is spectral. The checks below keep the
// direct character-sum verification and the sum criterion on separate code
// paths so that each can police the other.

#include <spectile/cyclotomic.hpp>
#include <spectile/error.hpp>
#include <spectile/group.hpp>
#include <spectile/spectral.hpp>
#include <spectile/tiling.hpp>

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <functional>
#include <mutex>
#include <numeric>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

namespace spectile {

struct DiagonalPair {
  GroupSpec base;
  GroupSpec ambient;
  PointSet diagonal;
  PointSet antidiagonal;
};

// Subgroup test by brute force: contains 0, closed under subtraction.
inline bool is_subgroup(const PointSet& H) {
  const auto& G = H.ambient();
  if (!H.contains(G.zero())) return false;
  for (const auto& x : H) {
    for (const auto& y : H) {
      if (!H.contains(G.sub(x, y))) return false;
    }
  }
  return true;
}

namespace detail {

// H contains 0 and H + t is inside H for every t in `generators`; with
// |H| = |<generators>| this forces H to be that subgroup.
inline bool closed_under(const PointSet& H, const std::vector<GroupElement>& generators) {
  const auto& G = H.ambient();
  if (!H.contains(G.zero())) return false;
  for (const auto& t : generators) {
    for (const auto& h : H) {
      if (!H.contains(G.add(h, t))) return false;
    }
  }
  return true;
}

inline void require_square_ambient(const GroupSpec& base, const PointSet& P) {
  const auto expected = product_group(base, base);
  if (!(P.ambient() == expected)) {
    throw AmbientMismatch("set lives in Z_" + P.ambient().to_string() + ", expected Z_" +
                          expected.to_string());
  }
}

inline void require_full_size(const GroupSpec& base, const PointSet& P) {
  if (P.size() != base.order()) {
    throw PreconditionError("|P|=" + std::to_string(P.size()) + " but |G|=" + std::to_string(base.order()));
  }
}

}  // namespace detail

inline DiagonalPair diagonal_subgroup(const GroupSpec& G, std::uint64_t budget = kDefaultEnumerationBudget) {
  const GroupSpec GG = product_group(G, G);
  std::vector<GroupElement> diag;
  std::vector<GroupElement> anti;
  for_each_element(G, [&](const GroupElement& g) {
    diag.push_back(pair(G, G, g, g));
    anti.push_back(pair(G, G, g, G.neg(g)));
  }, budget);
  DiagonalPair out{G, GG, PointSet(GG, std::move(diag)), PointSet(GG, std::move(anti))};

  std::vector<GroupElement> diag_gens;
  std::vector<GroupElement> anti_gens;
  for (std::size_t i = 0; i < G.dimension(); ++i) {
    GroupElement e = G.zero();
    e.coords[i] = 1 % G.orders()[i];
    diag_gens.push_back(pair(G, G, e, e));
    anti_gens.push_back(pair(G, G, e, G.neg(e)));
  }
  if (!detail::closed_under(out.diagonal, diag_gens) || !detail::closed_under(out.antidiagonal, anti_gens)) {
    throw Error("internal: diagonal construction is not a subgroup");
  }
  return out;
}

struct SumMultisetReport {
  bool holds = false;
  // multiplicity[rank(g)] = #{(a, b) in P : a + b = g}
  std::vector<std::uint64_t> multiplicity;
};

inline SumMultisetReport sum_multiset_check(const GroupSpec& G, const PointSet& P) {
  detail::require_square_ambient(G, P);
  detail::require_full_size(G, P);
  SumMultisetReport out;
  out.multiplicity.assign(G.order(), 0);
  for (const auto& p : P) {
    const auto [a, b] = unpair(G, G, p);
    ++out.multiplicity[G.rank(G.add(a, b))];
  }
  out.holds = std::all_of(out.multiplicity.begin(), out.multiplicity.end(),
                          [](std::uint64_t m) { return m == 1; });
  return out;
}

inline constexpr std::uint64_t kDefaultDirectPairBudget = std::uint64_t{1} << 24;

struct DiagonalCriterionVerdict {
  // Direct pairwise verification of (P, D); empty when over budget.
  std::optional<bool> pairwise;
  std::string pairwise_failure;
  bool multiset = false;
  bool agree = false;
  bool theorem_shortcut = false;
};

inline DiagonalCriterionVerdict check_thm_item1(const GroupSpec& G, const PointSet& P,
                                                std::uint64_t pair_budget = kDefaultDirectPairBudget) {
  detail::require_square_ambient(G, P);
  detail::require_full_size(G, P);
  DiagonalCriterionVerdict out;
  out.multiset = sum_multiset_check(G, P).holds;
  const auto pairs = detail::binomial_saturating(G.order(), 2);
  if (pairs > pair_budget) {
    out.theorem_shortcut = true;
    out.agree = true;
    return out;
  }
  const auto D = diagonal_subgroup(G);
  const auto check = verify_spectral_pair(P, D.diagonal);
  out.pairwise = check.ok();
  out.pairwise_failure = check.failure;
  out.agree = *out.pairwise == out.multiset;
  return out;
}

struct ProductDiagonalVerdict {
  bool tiling = false;
  bool product_spectral = false;
  bool agree = false;
  std::string tiling_failure;
  SumMultisetReport multiset;
};

// (A x B, D) spectrality through the sum criterion, cross-checked against
// verify_tiling(A, B).
inline ProductDiagonalVerdict product_with_diagonal(const PointSet& A, const PointSet& B) {
  require_same_ambient(A, B);
  const auto& G = A.ambient();
  if (static_cast<unsigned __int128>(A.size()) * B.size() != G.order()) {
    throw PreconditionError("|A|*|B| must equal |G|=" + std::to_string(G.order()));
  }
  ProductDiagonalVerdict out;
  out.multiset = sum_multiset_check(G, cartesian_product(A, B));
  out.product_spectral = out.multiset.holds;
  const auto tiling = verify_tiling(A, B);
  out.tiling = tiling.ok();
  out.tiling_failure = tiling.failure;
  out.agree = out.tiling == out.product_spectral;
  return out;
}

// P meets each coset of the antidiagonal exactly once. Within budget the
// cosets are enumerated and keyed by their least element; above it the coset
// invariant a + b is used directly.
inline bool antidiagonal_transversal_check(const GroupSpec& G, const PointSet& P,
                                           std::uint64_t budget = kDefaultDirectPairBudget) {
  detail::require_square_ambient(G, P);
  detail::require_full_size(G, P);
  std::vector<std::uint64_t> keys;
  keys.reserve(P.size());
  const auto work = static_cast<unsigned __int128>(G.order()) * G.order();
  if (work <= budget) {
    const auto& GG = P.ambient();
    const auto D = diagonal_subgroup(G);
    for (const auto& p : P) {
      std::uint64_t least = GG.order();
      for (const auto& t : D.antidiagonal) least = std::min(least, GG.rank(GG.add(p, t)));
      keys.push_back(least);
    }
  } else {
    for (const auto& p : P) {
      const auto [a, b] = unpair(G, G, p);
      keys.push_back(G.rank(G.add(a, b)));
    }
  }
  std::sort(keys.begin(), keys.end());
  return std::adjacent_find(keys.begin(), keys.end()) == keys.end();
}

// Character of (g, g) summed over P inside G x G.
inline CyclotomicSum diagonal_character_sum(const GroupSpec& G, const PointSet& P, const GroupElement& g) {
  detail::require_square_ambient(G, P);
  return char_sum_on_set(P, pair(G, G, g, g));
}

// sum_i chi_g(a_i + b_i), evaluated in G.
inline CyclotomicSum folded_character_sum(const GroupSpec& G, const PointSet& P, const GroupElement& g) {
  detail::require_square_ambient(G, P);
  G.require(g);
  CyclotomicSum sum(G.exponent());
  for (const auto& p : P) {
    const auto [a, b] = unpair(G, G, p);
    sum.add_root(character_pairing(G, g, G.add(a, b)));
  }
  return sum;
}

// Every presentation Z_{n_1} x ... x Z_{n_d} of order n with all n_i >= 2
// (ordered factorisations), plus Z_1 for n = 1.
inline std::vector<GroupSpec> presentations_of_order(std::uint64_t n) {
  if (n == 0) throw PreconditionError("order must be positive");
  if (n == 1) return {GroupSpec({1})};
  std::vector<GroupSpec> out;
  std::vector<std::uint64_t> current;
  std::function<void(std::uint64_t)> rec = [&](std::uint64_t rest) {
    if (rest == 1) {
      out.emplace_back(current);
      return;
    }
    for (std::uint64_t f = 2; f <= rest; ++f) {
      if (rest % f != 0) continue;
      current.push_back(f);
      rec(rest / f);
      current.pop_back();
    }
  };
  rec(n);
  return out;
}

namespace detail {

inline std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t n) {
  // Rejection sampling keeps results identical across standard libraries.
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % n;
  while (true) {
    const auto x = rng();
    if (x < limit) return x % n;
  }
}

// Uniform k-subset of [0, n) (Floyd), sorted.
inline std::vector<std::uint64_t> random_subset(std::mt19937_64& rng, std::uint64_t n, std::uint64_t k) {
  std::vector<std::uint64_t> chosen;
  chosen.reserve(k);
  for (std::uint64_t j = n - k; j < n; ++j) {
    const auto t = uniform_below(rng, j + 1);
    if (std::find(chosen.begin(), chosen.end(), t) == chosen.end()) {
      chosen.push_back(t);
    } else {
      chosen.push_back(j);
    }
  }
  std::sort(chosen.begin(), chosen.end());
  return chosen;
}

// Advances a sorted k-combination of [0, n); false after the last one.
inline bool next_combination(std::vector<std::uint64_t>& c, std::uint64_t n) {
  const auto k = c.size();
  for (std::size_t i = k; i-- > 0;) {
    if (c[i] < n - k + i) {
      ++c[i];
      for (std::size_t j = i + 1; j < k; ++j) c[j] = c[j - 1] + 1;
      return true;
    }
  }
  return false;
}

inline std::vector<std::uint64_t> first_combination(std::uint64_t k) {
  std::vector<std::uint64_t> c(k);
  std::iota(c.begin(), c.end(), std::uint64_t{0});
  return c;
}

// Runs fn(i) for i in [0, count) on `threads` workers.
template <typename Fn>
void parallel_for(std::size_t count, unsigned threads, Fn&& fn) {
  if (threads <= 1 || count < 2) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

inline std::string format_ranks(const GroupSpec& spec, const std::vector<std::uint64_t>& ranks) {
  std::string s = "{";
  for (std::size_t i = 0; i < ranks.size(); ++i) {
    if (i) s += ' ';
    s += GroupSpec::format(spec.unrank(ranks[i]));
  }
  return s + "}";
}

}  // namespace detail

struct HarnessOptions {
  // Exhaustive when the candidate count fits, otherwise this many uniform samples.
  std::uint64_t budget = 100'000;
  std::uint64_t seed = 0;
  unsigned threads = 1;
  std::uint64_t pair_budget = kDefaultDirectPairBudget;
  bool run_splits = true;
};

struct HarnessReport {
  std::uint64_t checked = 0;
  std::uint64_t disagreements = 0;
  bool exhaustive = false;
  std::uint64_t split_checked = 0;
  std::uint64_t split_disagreements = 0;
  bool splits_exhaustive = false;
  // One line per disagreement, offending instance included.
  std::vector<std::string> lines;

  bool clean() const noexcept { return disagreements == 0 && split_disagreements == 0; }

  std::string render() const {
    std::ostringstream os;
    for (const auto& l : lines) os << l << '\n';
    os << "splits mode=" << (splits_exhaustive ? "exhaustive" : "sampled") << " checked=" << split_checked
       << " disagreements=" << split_disagreements << '\n';
    os << "mode=" << (exhaustive ? "exhaustive" : "sampled") << '\n';
    os << "checked=" << checked << " disagreements=" << disagreements << '\n';
    return os.str();
  }
};

namespace detail {

struct Disagreement {
  std::uint64_t index;
  std::string line;
};

template <typename Producer, typename Checker>
void run_batched(std::uint64_t total, unsigned threads, Producer&& produce, Checker&& check,
                 std::vector<Disagreement>& found) {
  constexpr std::uint64_t kBatch = 1 << 14;
  std::mutex mu;
  for (std::uint64_t start = 0; start < total; start += kBatch) {
    const auto n = std::min(kBatch, total - start);
    auto batch = produce(n);
    parallel_for(static_cast<std::size_t>(n), threads, [&](std::size_t i) {
      if (auto line = check(batch[i])) {
        std::lock_guard lock(mu);
        found.push_back({start + i, std::move(*line)});
      }
    });
  }
  std::sort(found.begin(), found.end(), [](const auto& a, const auto& b) { return a.index < b.index; });
}

}  // namespace detail

// Cross-checks both diagonal criteria on G: every (or a uniform sample of)
// P subset of G x G with |P| = |G|, and every (or sampled) split (A, B) with
// |A||B| = |G|.
inline HarnessReport exhaustive_theorem_harness(const GroupSpec& G, const HarnessOptions& opts = {}) {
  const GroupSpec GG = product_group(G, G, kDefaultEnumerationBudget);
  const auto n = G.order();
  const auto N = GG.order();
  HarnessReport report;
  std::mt19937_64 rng(opts.seed);

  // P subsets of G x G against the diagonal.
  const auto p_total = detail::binomial_saturating(N, n);
  report.exhaustive = p_total <= opts.budget;
  const auto p_count = report.exhaustive ? p_total : opts.budget;
  auto comb = detail::first_combination(n);
  const auto produce_p = [&](std::uint64_t count) {
    std::vector<std::vector<std::uint64_t>> out;
    out.reserve(count);
    for (std::uint64_t i = 0; i < count; ++i) {
      if (report.exhaustive) {
        out.push_back(comb);
        detail::next_combination(comb, N);
      } else {
        out.push_back(detail::random_subset(rng, N, n));
      }
    }
    return out;
  };
  const auto check_p = [&](const std::vector<std::uint64_t>& ranks) -> std::optional<std::string> {
    const auto P = PointSet::from_ranks(GG, ranks);
    const auto v = check_thm_item1(G, P, opts.pair_budget);
    const bool transversal = antidiagonal_transversal_check(G, P, opts.pair_budget);
    if (v.agree && transversal == v.multiset) return std::nullopt;
    std::string line = "disagreement kind=diagonal P=" + detail::format_ranks(GG, ranks);
    line += " pairwise=" + std::string(v.pairwise ? (*v.pairwise ? "yes" : "no") : "skipped");
    line += " multiset=" + std::string(v.multiset ? "yes" : "no");
    line += " transversal=" + std::string(transversal ? "yes" : "no");
    return line;
  };
  std::vector<detail::Disagreement> found;
  detail::run_batched(p_count, opts.threads, produce_p, check_p, found);
  report.checked = p_count;
  report.disagreements = found.size();

  // Splits (A, B) with |A||B| = |G|.
  std::vector<detail::Disagreement> split_found;
  if (opts.run_splits) {
    std::vector<std::pair<std::uint64_t, std::uint64_t>> shapes;  // (|A|, |B|)
    std::vector<std::uint64_t> weights;
    std::uint64_t split_total = 0;
    bool saturated = false;
    for (std::uint64_t a = 1; a <= n; ++a) {
      if (n % a != 0) continue;
      const auto w1 = detail::binomial_saturating(n, a);
      const auto w2 = detail::binomial_saturating(n, n / a);
      const auto w = static_cast<unsigned __int128>(w1) * w2;
      shapes.emplace_back(a, n / a);
      weights.push_back(w > std::numeric_limits<std::uint64_t>::max() ? std::numeric_limits<std::uint64_t>::max()
                                                                      : static_cast<std::uint64_t>(w));
      if (__builtin_add_overflow(split_total, weights.back(), &split_total)) saturated = true;
    }
    report.splits_exhaustive = !saturated && split_total <= opts.budget;
    const auto split_count = report.splits_exhaustive ? split_total : opts.budget;

    std::size_t shape = 0;
    auto ca = detail::first_combination(shapes[0].first);
    auto cb = detail::first_combination(shapes[0].second);
    const auto produce_split = [&](std::uint64_t count) {
      std::vector<std::pair<std::vector<std::uint64_t>, std::vector<std::uint64_t>>> out;
      out.reserve(count);
      for (std::uint64_t i = 0; i < count; ++i) {
        if (report.splits_exhaustive) {
          out.emplace_back(ca, cb);
          if (!detail::next_combination(cb, n)) {
            cb = detail::first_combination(shapes[shape].second);
            if (!detail::next_combination(ca, n) && ++shape < shapes.size()) {
              ca = detail::first_combination(shapes[shape].first);
              cb = detail::first_combination(shapes[shape].second);
            }
          }
        } else {
          // Shape drawn with probability proportional to its split count,
          // then a uniform pair of subsets: uniform over all splits.
          auto r = detail::uniform_below(rng, split_total);
          std::size_t s = 0;
          while (r >= weights[s]) r -= weights[s++];
          auto a = detail::random_subset(rng, n, shapes[s].first);
          auto b = detail::random_subset(rng, n, shapes[s].second);
          out.emplace_back(std::move(a), std::move(b));
        }
      }
      return out;
    };
    const auto check_split = [&](const std::pair<std::vector<std::uint64_t>, std::vector<std::uint64_t>>& ab)
        -> std::optional<std::string> {
      const auto A = PointSet::from_ranks(G, ab.first);
      const auto B = PointSet::from_ranks(G, ab.second);
      const auto v = product_with_diagonal(A, B);
      if (v.agree) return std::nullopt;
      return "disagreement kind=product A=" + detail::format_ranks(G, ab.first) +
             " B=" + detail::format_ranks(G, ab.second) + " tiling=" + (v.tiling ? "yes" : "no") +
             " product-spectral=" + (v.product_spectral ? "yes" : "no");
    };
    if (saturated) split_total = std::numeric_limits<std::uint64_t>::max();
    detail::run_batched(split_count, opts.threads, produce_split, check_split, split_found);
    report.split_checked = split_count;
    report.split_disagreements = split_found.size();
  }

  for (auto& d : found) report.lines.push_back(std::move(d.line));
  for (auto& d : split_found) report.lines.push_back(std::move(d.line));
  return report;
}

}  // namespace spectile
