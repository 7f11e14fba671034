#pragma once

// Box-normalised subsets of Z^d and the expansion
//   A(k) = A + prod_i {0, n_i, 2 n_i, ..., (k - 1) n_i}
// for A inside the box prod_i [0, n_i). Spectrality in Z^d is only probed
// through finite quotients prod_i Z_{m_i}: a spectrum there is a rational
// spectrum {lambda / m} of the set in Z^d. The converse (no spectrum in one
// quotient) says nothing about Z^d and is never reported as such.

#include <spectile/diagonal.hpp>
#include <spectile/error.hpp>
#include <spectile/group.hpp>
#include <spectile/spectral.hpp>
#include <spectile/tiling.hpp>

#include <algorithm>
#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

namespace spectile {

using IntPoint = std::vector<std::int64_t>;

class BoxedSet {
 public:
  // Points must lie in prod_i [0, lift_factor * dims_i); duplicates are rejected.
  BoxedSet(std::vector<std::uint64_t> dims, std::vector<IntPoint> points, std::uint64_t lift_factor = 1)
      : dims_(std::move(dims)), lift_factor_(lift_factor), points_(std::move(points)) {
    if (dims_.empty()) throw PreconditionError("box needs at least one dimension");
    if (lift_factor_ == 0) throw PreconditionError("lift factor must be positive");
    for (const auto n : dims_) {
      if (n == 0) throw PreconditionError("box sides must be positive");
      detail::checked_mul(n, lift_factor_, "lifted box side");
    }
    for (const auto& p : points_) {
      if (p.size() != dims_.size()) {
        throw PreconditionError("point has " + std::to_string(p.size()) + " coordinates, box has " +
                                std::to_string(dims_.size()));
      }
      for (std::size_t i = 0; i < p.size(); ++i) {
        if (p[i] < 0 || static_cast<std::uint64_t>(p[i]) >= dims_[i] * lift_factor_) {
          throw PreconditionError("point " + format(p) + " is outside its box");
        }
      }
    }
    std::sort(points_.begin(), points_.end());
    const auto dup = std::adjacent_find(points_.begin(), points_.end());
    if (dup != points_.end()) throw PreconditionError("duplicate point " + format(*dup));
  }

  const std::vector<std::uint64_t>& dims() const noexcept { return dims_; }
  std::size_t dimension() const noexcept { return dims_.size(); }
  std::uint64_t lift_factor() const noexcept { return lift_factor_; }
  bool is_base() const noexcept { return lift_factor_ == 1; }
  const std::vector<IntPoint>& points() const noexcept { return points_; }
  std::size_t size() const noexcept { return points_.size(); }

  // Side lengths of the box the points currently occupy.
  std::vector<std::uint64_t> extent() const {
    std::vector<std::uint64_t> e = dims_;
    for (auto& v : e) v *= lift_factor_;
    return e;
  }

  friend bool operator==(const BoxedSet&, const BoxedSet&) = default;

  static std::string format(const IntPoint& p) {
    std::string s = "(";
    for (std::size_t i = 0; i < p.size(); ++i) {
      if (i) s += ',';
      s += std::to_string(p[i]);
    }
    return s + ")";
  }

 private:
  std::vector<std::uint64_t> dims_;
  std::uint64_t lift_factor_ = 1;
  std::vector<IntPoint> points_;
};

inline constexpr std::uint64_t kDefaultLiftPointBudget = std::uint64_t{1} << 24;

inline BoxedSet lift(const BoxedSet& A, std::uint64_t k, std::uint64_t point_budget = kDefaultLiftPointBudget) {
  if (!A.is_base()) throw PreconditionError("lift expects a base-boxed set");
  if (k == 0) throw PreconditionError("lift factor must be positive");
  const auto d = A.dimension();
  std::uint64_t blocks = 1;
  for (std::size_t i = 0; i < d; ++i) blocks = detail::checked_mul(blocks, k, "lifted set size");
  const auto total = detail::checked_mul(blocks, A.size(), "lifted set size");
  if (total > point_budget) throw BudgetExceeded("lifted set of " + std::to_string(total) + " points exceeds budget");

  std::vector<IntPoint> pts;
  pts.reserve(total);
  std::vector<std::uint64_t> block(d, 0);
  for (std::uint64_t b = 0; b < blocks; ++b) {
    for (const auto& a : A.points()) {
      IntPoint p = a;
      for (std::size_t i = 0; i < d; ++i) p[i] += static_cast<std::int64_t>(block[i] * A.dims()[i]);
      pts.push_back(std::move(p));
    }
    for (std::size_t i = d; i-- > 0;) {
      if (++block[i] < k) break;
      block[i] = 0;
    }
  }
  BoxedSet out(A.dims(), std::move(pts), k);
  if (out.size() != total) throw Error("internal: lifted translates collided");
  return out;
}

// A x B in Z^{d_A + d_B}, with the box dims concatenated.
inline BoxedSet box_product(const BoxedSet& A, const BoxedSet& B) {
  if (A.lift_factor() != B.lift_factor()) throw PreconditionError("lift factors differ");
  std::vector<std::uint64_t> dims = A.dims();
  dims.insert(dims.end(), B.dims().begin(), B.dims().end());
  std::vector<IntPoint> pts;
  pts.reserve(A.size() * B.size());
  for (const auto& a : A.points()) {
    for (const auto& b : B.points()) {
      IntPoint p = a;
      p.insert(p.end(), b.begin(), b.end());
      pts.push_back(std::move(p));
    }
  }
  return BoxedSet(std::move(dims), std::move(pts), A.lift_factor());
}

// A(k) x B(k) == (A x B)(k), as point sets.
inline bool product_lift_identity(const BoxedSet& A, const BoxedSet& B, std::uint64_t k) {
  if (!A.is_base() || !B.is_base()) throw PreconditionError("product_lift_identity expects base-boxed sets");
  const auto lhs = box_product(lift(A, k), lift(B, k));
  const auto rhs = lift(box_product(A, B), k);
  return lhs.points() == rhs.points();
}

// Reads the points as elements of prod_i Z_{m_i}. Refuses any coordinate
// >= m_i instead of wrapping, so the map is injective.
inline PointSet to_quotient(const BoxedSet& A, const std::vector<std::uint64_t>& moduli) {
  if (moduli.size() != A.dimension()) {
    throw PreconditionError("expected " + std::to_string(A.dimension()) + " moduli, got " +
                            std::to_string(moduli.size()));
  }
  GroupSpec G(moduli);
  std::vector<GroupElement> pts;
  pts.reserve(A.size());
  for (const auto& p : A.points()) {
    GroupElement g{std::vector<std::uint64_t>(p.size())};
    for (std::size_t i = 0; i < p.size(); ++i) {
      if (static_cast<std::uint64_t>(p[i]) >= moduli[i]) {
        throw PreconditionError("coordinate " + std::to_string(p[i]) + " of " + BoxedSet::format(p) +
                                " does not fit modulus " + std::to_string(moduli[i]));
      }
      g.coords[i] = static_cast<std::uint64_t>(p[i]);
    }
    pts.push_back(std::move(g));
  }
  return PointSet(std::move(G), std::move(pts));
}

inline SpectrumSearchResult spectral_in_quotient(const BoxedSet& C, const std::vector<std::uint64_t>& moduli,
                                                 const SearchOptions& opts = {}) {
  return find_spectrum(to_quotient(C, moduli), opts);
}

// Spectrum of A(k) in prod Z_{k n_i} built from a spectrum Lambda of A in
// prod Z_{n_i}: {k * lambda + j : lambda in Lambda, j in [0, k)^d}. In
// frequency terms this is Lambda / n + {0, 1/(kn), ..., (k-1)/(kn)}^d.
inline PointSet scale_spectrum_for_lift(const PointSet& spectrum, std::uint64_t k) {
  const auto& base = spectrum.ambient();
  std::vector<std::uint64_t> moduli = base.orders();
  for (auto& m : moduli) m = detail::checked_mul(m, k, "lifted modulus");
  GroupSpec lifted(moduli);
  const auto d = base.dimension();
  std::uint64_t blocks = 1;
  for (std::size_t i = 0; i < d; ++i) blocks = detail::checked_mul(blocks, k, "lifted spectrum size");
  std::vector<GroupElement> pts;
  pts.reserve(spectrum.size() * blocks);
  std::vector<std::uint64_t> offset(d, 0);
  for (std::uint64_t b = 0; b < blocks; ++b) {
    for (const auto& lambda : spectrum) {
      GroupElement g{std::vector<std::uint64_t>(d)};
      for (std::size_t i = 0; i < d; ++i) g.coords[i] = lambda.coords[i] * k + offset[i];
      pts.push_back(std::move(g));
    }
    for (std::size_t i = d; i-- > 0;) {
      if (++offset[i] < k) break;
      offset[i] = 0;
    }
  }
  return PointSet(std::move(lifted), std::move(pts));
}

enum class StepStatus { pass, fail, skipped };

inline const char* to_string(StepStatus s) noexcept {
  switch (s) {
    case StepStatus::pass: return "pass";
    case StepStatus::fail: return "fail";
    case StepStatus::skipped: return "skipped";
  }
  return "?";
}

struct PipelineStep {
  std::string name;
  StepStatus status = StepStatus::skipped;
  std::string detail;
};

struct PipelineReport {
  std::string header;
  std::vector<PipelineStep> steps;
  // Steps (i)-(iii) passed but the lifted diagonal spectrum failed.
  bool anomaly = false;

  bool passed() const {
    return std::all_of(steps.begin(), steps.end(), [](const auto& s) { return s.status == StepStatus::pass; });
  }

  std::string render() const {
    std::ostringstream os;
    os << header << '\n';
    for (const auto& s : steps) {
      os << "step=" << s.name << " status=" << to_string(s.status) << " detail=" << s.detail << '\n';
    }
    if (anomaly) os << "ANOMALY: lifted diagonal spectrum failed although steps 1-3 passed\n";
    return os.str();
  }
};

struct PipelineOptions {
  std::uint64_t max_k = 4;
  std::uint64_t max_base_order = 10'000;
  // Cap on |(A x B)(k)|^2 for the direct pairwise check of the lifted spectrum.
  std::uint64_t verify_pair_budget = std::uint64_t{1} << 24;
};

// The finite shadow of transporting a tiling pair to Z^{2d}:
//   tiling       A (+) B = prod Z_{n_i}
//   product-diagonal  (A x B, D) spectral through the sum criterion
//   lift-identity     A(k) x B(k) == (A x B)(k)
//   lifted-spectrum   (A x B)(k) has the spectrum scaled from D in prod Z_{k n_i}^2
// A failing step stops the pipeline; later steps are reported as skipped.
inline PipelineReport tiling_product_pipeline(const BoxedSet& A, const BoxedSet& B, std::uint64_t k,
                                              const PipelineOptions& opts = {}) {
  if (!A.is_base() || !B.is_base()) throw PreconditionError("step=tiling: inputs must be base-boxed");
  if (A.dims() != B.dims()) throw PreconditionError("step=tiling: A and B must share a box");
  if (k == 0 || k > opts.max_k) {
    throw PreconditionError("step=lift-identity: k=" + std::to_string(k) + " outside [1, " +
                            std::to_string(opts.max_k) + "]");
  }
  const GroupSpec G(A.dims());
  if (G.order() > opts.max_base_order) {
    throw BudgetExceeded("step=tiling: box order " + std::to_string(G.order()) + " exceeds pipeline budget");
  }
  if (static_cast<unsigned __int128>(A.size()) * B.size() != G.order()) {
    throw PreconditionError("step=product-diagonal: |A|*|B| must equal " + std::to_string(G.order()));
  }

  PipelineReport report;
  std::vector<std::uint64_t> lifted_moduli;
  for (const auto n : A.dims()) lifted_moduli.push_back(n * k);
  for (const auto n : B.dims()) lifted_moduli.push_back(n * k);
  {
    std::ostringstream h;
    h << "# pipeline box=" << G.to_string() << " k=" << k << " quotient=" << GroupSpec(lifted_moduli).to_string()
      << " moduli=k*n spectrum=k*D+[0,k)^" << lifted_moduli.size();
    report.header = h.str();
  }
  for (const char* name : {"tiling", "product-diagonal", "lift-identity", "lifted-spectrum"}) {
    report.steps.push_back({name, StepStatus::skipped, "-"});
  }

  const auto Aq = to_quotient(A, A.dims());
  const auto Bq = to_quotient(B, B.dims());
  const auto tiling = verify_tiling(Aq, Bq);
  if (!tiling.ok()) {
    report.steps[0] = {"tiling", StepStatus::fail, tiling.failure};
    return report;
  }
  report.steps[0] = {"tiling", StepStatus::pass, "|A|=" + std::to_string(A.size()) + " |B|=" + std::to_string(B.size())};

  const auto pd = product_with_diagonal(Aq, Bq);
  if (!pd.product_spectral || !pd.agree) {
    report.steps[1] = {"product-diagonal", StepStatus::fail,
                       std::string("sum-criterion=") + (pd.product_spectral ? "yes" : "no") +
                           " agree=" + (pd.agree ? "yes" : "no")};
    return report;
  }
  report.steps[1] = {"product-diagonal", StepStatus::pass, "sum-criterion=yes agree=yes"};

  if (!product_lift_identity(A, B, k)) {
    report.steps[2] = {"lift-identity", StepStatus::fail, "A(k)xB(k) != (AxB)(k)"};
    return report;
  }
  const auto lifted = lift(box_product(A, B), k);
  report.steps[2] = {"lift-identity", StepStatus::pass, "points=" + std::to_string(lifted.size())};

  const auto N = static_cast<unsigned __int128>(lifted.size());
  if (N * N > opts.verify_pair_budget) {
    report.steps[3] = {"lifted-spectrum", StepStatus::skipped,
                       "budget: " + std::to_string(lifted.size()) + " points exceed pair budget"};
    return report;
  }
  const auto D = diagonal_subgroup(G);
  const auto spectrum = scale_spectrum_for_lift(D.diagonal, k);
  const auto check = verify_spectral_pair(to_quotient(lifted, lifted_moduli), spectrum);
  if (check.ok()) {
    report.steps[3] = {"lifted-spectrum", StepStatus::pass,
                       "pairs=" + std::to_string(check.certificate->checked_pairs)};
  } else {
    report.steps[3] = {"lifted-spectrum", StepStatus::fail, check.failure};
    report.anomaly = true;
  }
  return report;
}

}  // namespace spectile
