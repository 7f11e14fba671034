#include <spectile/cyclotomic.hpp>

#include <gtest/gtest.h>

#include <random>
#include <thread>

using namespace spectile;

namespace {

std::uint64_t totient(std::uint64_t n) {
  std::uint64_t c = 0;
  for (std::uint64_t k = 1; k <= n; ++k) c += detail::gcd(k, n) == 1;
  return c;
}

CyclotomicSum counts(std::uint64_t L, std::initializer_list<std::uint64_t> exps) {
  return CyclotomicSum::from_exponents(L, std::vector<std::uint64_t>(exps));
}

// Random sum that is vanishing by construction: integer combination of
// rotated full p-cycles zeta^r (1 + zeta^{L/p} + ... ) for prime p | L.
CyclotomicSum random_vanishing(std::uint64_t L, std::mt19937_64& rng) {
  std::vector<std::uint64_t> primes;
  for (std::uint64_t p = 2; p <= L; ++p) {
    bool prime = true;
    for (std::uint64_t q = 2; q * q <= p; ++q) prime = prime && p % q != 0;
    if (prime && L % p == 0) primes.push_back(p);
  }
  CyclotomicSum s(L);
  std::uniform_int_distribution<int> coef(-3, 3);
  const int terms = 1 + static_cast<int>(rng() % 4);
  for (int t = 0; t < terms && !primes.empty(); ++t) {
    const auto p = primes[rng() % primes.size()];
    const auto r = rng() % L;
    const auto c = coef(rng);
    for (std::uint64_t j = 0; j < p; ++j) s.add_root(r + j * (L / p), c);
  }
  return s;
}

}  // namespace

TEST(CyclotomicPoly, Examples) {
  EXPECT_EQ(cyclotomic_poly(1), IntPolynomial({-1, 1}));
  EXPECT_EQ(cyclotomic_poly(4), IntPolynomial({1, 0, 1}));
  EXPECT_EQ(cyclotomic_poly(6), IntPolynomial({1, -1, 1}));
  EXPECT_EQ(cyclotomic_poly(12), IntPolynomial({1, 0, -1, 0, 1}));
  EXPECT_EQ(cyclotomic_poly(6).to_string(), "x^2 - x + 1");
}

TEST(CyclotomicPoly, Phi105HasCoefficientMinusTwo) {
  const auto p = cyclotomic_poly(105);
  ASSERT_EQ(p.degree(), 48);
  EXPECT_EQ(p.coeffs()[7], -2);
  EXPECT_EQ(p.coeffs()[41], -2);
}

TEST(CyclotomicPoly, ProductOverDivisorsIsXnMinusOne) {
  for (std::uint64_t n = 1; n <= 360; ++n) {
    IntPolynomial prod({1});
    for (std::uint64_t d = 1; d <= n; ++d) {
      if (n % d == 0) prod = prod * cyclotomic_poly(d);
    }
    ASSERT_EQ(prod, IntPolynomial::x_pow_minus_one(n)) << "n=" << n;
    const auto phi = cyclotomic_poly(n);
    EXPECT_EQ(static_cast<std::uint64_t>(phi.degree()), totient(n));
    EXPECT_EQ(phi.leading(), 1);
  }
}

TEST(CyclotomicPoly, BudgetAndDomain) {
  EXPECT_THROW(cyclotomic_poly(0), PreconditionError);
  EXPECT_THROW(cyclotomic_poly(2000, 1000), BudgetExceeded);
}

TEST(CyclotomicPoly, ConcurrentReadersAgree) {
  std::vector<std::thread> pool;
  std::vector<IntPolynomial> got(8);
  for (int t = 0; t < 8; ++t) {
    pool.emplace_back([&got, t] { got[t] = cyclotomic_poly(720); });
  }
  for (auto& t : pool) t.join();
  for (const auto& g : got) EXPECT_EQ(g, got[0]);
}

TEST(IntPolynomial, DivModMonic) {
  const IntPolynomial a({-1, 0, 0, 0, 1});  // x^4 - 1
  const auto r = a.divmod_monic(IntPolynomial({1, 0, 1}));
  EXPECT_EQ(r.quotient, IntPolynomial({-1, 0, 1}));
  EXPECT_TRUE(r.remainder.is_zero());
  EXPECT_THROW(a.divmod_monic(IntPolynomial({1, 2})), PreconditionError);
  EXPECT_EQ(IntPolynomial({0, 0, 0}).degree(), -1);
}

TEST(IntPolynomial, OverflowIsReported) {
  const IntPolynomial big({std::numeric_limits<std::int64_t>::max(), 1});
  EXPECT_THROW(big * big, SizeLimitError);
}

TEST(IsZero, Examples) {
  EXPECT_TRUE(is_zero(counts(2, {0, 1})));
  for (std::uint64_t n = 1; n <= 40; ++n) {
    CyclotomicSum full(n);
    for (std::uint64_t k = 0; k < n; ++k) full.add_root(k);
    EXPECT_EQ(is_zero(full), n > 1) << n;  // for n = 1 the "full sum" is 1
  }
  EXPECT_FALSE(is_zero(counts(4, {0, 1, 3})));
  EXPECT_TRUE(is_zero(CyclotomicSum(7)));
  // 1 + zeta_6^2 + zeta_6^4 = 0, but 1 + zeta_6 + zeta_6^2 != 0
  EXPECT_TRUE(is_zero(counts(6, {0, 2, 4})));
  EXPECT_FALSE(is_zero(counts(6, {0, 1, 2})));
}

TEST(IsZero, SignedCountsAndDifferences) {
  const auto a = counts(4, {0, 1});
  const auto b = counts(4, {1, 0});
  EXPECT_TRUE(is_zero(a - b));
  // zeta_4^0 - zeta_4^2 = 2, not zero.
  EXPECT_FALSE(is_zero(counts(4, {0}) - counts(4, {2})));
  EXPECT_TRUE(is_zero(counts(4, {0, 2})));
  EXPECT_THROW(counts(4, {0}) - counts(6, {0}), PreconditionError);
}

TEST(ApproxComplex, Examples) {
  EXPECT_LT(std::abs(approx_complex(counts(2, {0, 1}))), 1e-12);
  EXPECT_NEAR(approx_complex(counts(1, {0})).real(), 1.0, 1e-12);
  const auto v = approx_complex(counts(4, {0, 1}));
  EXPECT_NEAR(v.real(), 1.0, 1e-12);
  EXPECT_NEAR(v.imag(), 1.0, 1e-12);
}

TEST(IsZero, AgreesWithFloatMagnitude) {
  std::mt19937_64 rng(7);
  int zeros = 0;
  for (int trial = 0; trial < 3000; ++trial) {
    const std::uint64_t L = 1 + rng() % 360;
    CyclotomicSum s = trial % 2 == 0 ? random_vanishing(L, rng) : CyclotomicSum(L);
    if (trial % 2 == 1) {
      const int terms = 1 + static_cast<int>(rng() % 6);
      for (int t = 0; t < terms; ++t) s.add_root(rng() % L, static_cast<std::int64_t>(rng() % 201) - 100);
    }
    const bool exact = is_zero(s);
    const bool numeric = std::abs(approx_complex(s)) < 1e-9;
    ASSERT_EQ(exact, numeric) << "L=" << L;
    zeros += exact;
  }
  EXPECT_GT(zeros, 1000);
}

TEST(IsZero, RotationInvariant) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 500; ++trial) {
    const std::uint64_t L = 1 + rng() % 120;
    CyclotomicSum s = random_vanishing(L, rng);
    if (trial % 3 == 0) s.add_root(rng() % L);
    const bool z = is_zero(s);
    for (std::uint64_t r = 0; r < L; r += 1 + L / 7) EXPECT_EQ(is_zero(s.rotated(r)), z);
  }
}

TEST(CyclotomicSum, RejectsBadShapes) {
  EXPECT_THROW(CyclotomicSum(0), PreconditionError);
  EXPECT_THROW(CyclotomicSum(3, {1, 2}), PreconditionError);
}
