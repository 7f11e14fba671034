#pragma once

// Exact arithmetic on integer combinations of L-th roots of unity.
//
// A CyclotomicSum with root order L and counts c_0..c_{L-1} stands for
//   sum_k c_k * zeta_L^k,  zeta_L = exp(2 pi i / L).
// It vanishes iff Phi_L divides sum_k c_k x^k, which is decided by an exact
// integer remainder against the monic cyclotomic polynomial Phi_L.

#include <spectile/error.hpp>

#include <cmath>
#include <complex>
#include <cstdint>
#include <memory>
#include <mutex>
#include <numbers>
#include <shared_mutex>
#include <string>
#include <unordered_map>
#include <vector>

namespace spectile {

inline constexpr std::uint64_t kDefaultCyclotomicBudget = 1'000'000;

class IntPolynomial {
 public:
  IntPolynomial() = default;
  explicit IntPolynomial(std::vector<std::int64_t> coeffs) : coeffs_(std::move(coeffs)) { trim(); }

  // x^n - 1
  static IntPolynomial x_pow_minus_one(std::size_t n) {
    std::vector<std::int64_t> c(n + 1, 0);
    c[0] = -1;
    c[n] = 1;
    return IntPolynomial(std::move(c));
  }

  const std::vector<std::int64_t>& coeffs() const noexcept { return coeffs_; }
  bool is_zero() const noexcept { return coeffs_.empty(); }
  // Degree of the zero polynomial is reported as -1.
  std::ptrdiff_t degree() const noexcept { return static_cast<std::ptrdiff_t>(coeffs_.size()) - 1; }
  std::int64_t leading() const noexcept { return coeffs_.empty() ? 0 : coeffs_.back(); }

  friend bool operator==(const IntPolynomial&, const IntPolynomial&) = default;

  friend IntPolynomial operator*(const IntPolynomial& a, const IntPolynomial& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<std::int64_t> c(a.coeffs_.size() + b.coeffs_.size() - 1, 0);
    for (std::size_t i = 0; i < a.coeffs_.size(); ++i) {
      if (a.coeffs_[i] == 0) continue;
      for (std::size_t j = 0; j < b.coeffs_.size(); ++j) {
        c[i + j] = detail::checked_add(c[i + j], detail::checked_mul_signed(a.coeffs_[i], b.coeffs_[j]));
      }
    }
    return IntPolynomial(std::move(c));
  }

  // Quotient and remainder by a monic divisor; stays in the integers.
  struct DivMod;
  DivMod divmod_monic(const IntPolynomial& divisor) const;

  std::string to_string() const {
    if (is_zero()) return "0";
    std::string s;
    for (std::size_t i = coeffs_.size(); i-- > 0;) {
      const auto c = coeffs_[i];
      if (c == 0) continue;
      const auto mag = c < 0 ? -static_cast<__int128>(c) : static_cast<__int128>(c);
      if (s.empty()) {
        if (c < 0) s += "-";
      } else {
        s += c < 0 ? " - " : " + ";
      }
      if (mag != 1 || i == 0) s += std::to_string(static_cast<unsigned long long>(mag));
      if (i >= 1) s += "x";
      if (i >= 2) s += "^" + std::to_string(i);
    }
    return s;
  }

 private:
  void trim() {
    while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
  }

  std::vector<std::int64_t> coeffs_;
};

struct IntPolynomial::DivMod {
  IntPolynomial quotient;
  IntPolynomial remainder;
};

inline IntPolynomial::DivMod IntPolynomial::divmod_monic(const IntPolynomial& divisor) const {
  if (divisor.is_zero() || divisor.leading() != 1) {
    throw PreconditionError("divisor must be monic");
  }
  const auto dd = static_cast<std::size_t>(divisor.degree());
  std::vector<std::int64_t> rem = coeffs_;
  if (rem.size() <= dd) return {IntPolynomial{}, IntPolynomial(std::move(rem))};
  std::vector<std::int64_t> quot(rem.size() - dd, 0);
  const auto& dc = divisor.coeffs_;
  for (std::size_t i = rem.size(); i-- > dd;) {
    const auto q = rem[i];
    if (q == 0) continue;
    quot[i - dd] = q;
    const auto shift = i - dd;
    for (std::size_t j = 0; j < dd; ++j) {
      if (dc[j] != 0) rem[shift + j] = detail::checked_sub(rem[shift + j], detail::checked_mul_signed(q, dc[j]));
    }
    rem[i] = 0;
  }
  rem.resize(dd);
  return {IntPolynomial(std::move(quot)), IntPolynomial(std::move(rem))};
}

namespace detail {

class CyclotomicCache {
 public:
  static CyclotomicCache& instance() {
    static CyclotomicCache cache;
    return cache;
  }

  std::shared_ptr<const IntPolynomial> find(std::uint64_t n) const {
    std::shared_lock lock(mutex_);
    const auto it = table_.find(n);
    return it == table_.end() ? nullptr : it->second;
  }

  std::shared_ptr<const IntPolynomial> insert(std::uint64_t n, IntPolynomial p) {
    std::unique_lock lock(mutex_);
    auto [it, _] = table_.try_emplace(n, std::make_shared<const IntPolynomial>(std::move(p)));
    return it->second;
  }

 private:
  mutable std::shared_mutex mutex_;
  std::unordered_map<std::uint64_t, std::shared_ptr<const IntPolynomial>> table_;
};

}  // namespace detail

// Phi_n = (x^n - 1) / prod_{d | n, d < n} Phi_d, memoized process-wide.
inline std::shared_ptr<const IntPolynomial> cyclotomic_poly_shared(
    std::uint64_t n, std::uint64_t budget = kDefaultCyclotomicBudget) {
  if (n == 0) throw PreconditionError("cyclotomic index must be positive");
  if (n > budget) {
    throw BudgetExceeded("cyclotomic polynomial index " + std::to_string(n) + " exceeds budget " +
                         std::to_string(budget));
  }
  auto& cache = detail::CyclotomicCache::instance();
  if (auto hit = cache.find(n)) return hit;
  IntPolynomial p = IntPolynomial::x_pow_minus_one(n);
  for (std::uint64_t d = 1; d < n; ++d) {
    if (n % d != 0) continue;
    auto divided = p.divmod_monic(*cyclotomic_poly_shared(d, budget));
    if (!divided.remainder.is_zero()) throw Error("cyclotomic division left a remainder");
    p = std::move(divided.quotient);
  }
  return cache.insert(n, std::move(p));
}

inline IntPolynomial cyclotomic_poly(std::uint64_t n, std::uint64_t budget = kDefaultCyclotomicBudget) {
  return *cyclotomic_poly_shared(n, budget);
}

class CyclotomicSum {
 public:
  explicit CyclotomicSum(std::uint64_t root_order) : counts_(checked_length(root_order), 0) {}
  CyclotomicSum(std::uint64_t root_order, std::vector<std::int64_t> counts)
      : counts_(std::move(counts)) {
    if (counts_.size() != checked_length(root_order)) {
      throw PreconditionError("count vector length must equal the root order");
    }
  }

  // Sum of zeta^e over the given exponents (reduced mod L).
  static CyclotomicSum from_exponents(std::uint64_t root_order, const std::vector<std::uint64_t>& exps) {
    CyclotomicSum s(root_order);
    for (const auto e : exps) s.add_root(e);
    return s;
  }

  std::uint64_t root_order() const noexcept { return counts_.size(); }
  const std::vector<std::int64_t>& counts() const noexcept { return counts_; }

  void add_root(std::uint64_t exponent, std::int64_t multiplicity = 1) {
    auto& c = counts_[exponent % counts_.size()];
    c = detail::checked_add(c, multiplicity);
  }

  // Multiplication by the unit zeta^r.
  CyclotomicSum rotated(std::uint64_t r) const {
    CyclotomicSum out(root_order());
    const auto L = counts_.size();
    for (std::size_t k = 0; k < L; ++k) out.counts_[(k + r) % L] = counts_[k];
    return out;
  }

  friend CyclotomicSum operator-(const CyclotomicSum& a, const CyclotomicSum& b) {
    if (a.root_order() != b.root_order()) throw PreconditionError("root orders differ");
    CyclotomicSum out(a.root_order());
    for (std::size_t k = 0; k < a.counts_.size(); ++k) {
      out.counts_[k] = detail::checked_sub(a.counts_[k], b.counts_[k]);
    }
    return out;
  }

  // Same representation; equal sums of roots that differ only by a vanishing
  // relation compare unequal here, use is_zero(a - b) for value equality.
  friend bool operator==(const CyclotomicSum&, const CyclotomicSum&) = default;

 private:
  static std::size_t checked_length(std::uint64_t L) {
    if (L == 0) throw PreconditionError("root order must be positive");
    if (L > kDefaultCyclotomicBudget) {
      throw BudgetExceeded("root order " + std::to_string(L) + " exceeds budget");
    }
    return static_cast<std::size_t>(L);
  }

  std::vector<std::int64_t> counts_;
};

inline bool is_zero(const CyclotomicSum& s) {
  const auto& c = s.counts();
  bool any = false;
  for (const auto v : c) any = any || v != 0;
  if (!any) return true;
  const auto phi = cyclotomic_poly_shared(s.root_order());
  return IntPolynomial(c).divmod_monic(*phi).remainder.is_zero();
}

inline std::complex<double> approx_complex(const CyclotomicSum& s) {
  const auto L = static_cast<double>(s.root_order());
  std::complex<double> acc{0.0, 0.0};
  const auto& c = s.counts();
  for (std::size_t k = 0; k < c.size(); ++k) {
    if (c[k] == 0) continue;
    const double theta = 2.0 * std::numbers::pi * static_cast<double>(k) / L;
    acc += static_cast<double>(c[k]) * std::complex<double>(std::cos(theta), std::sin(theta));
  }
  return acc;
}

}  // namespace spectile
