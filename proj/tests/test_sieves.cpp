#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "mulinfo/sieves.hpp"
#include "oracles.hpp"

using namespace mulinfo;

namespace {

const FactorSieve& small_sieve() {
  static FactorSieve sieve(10000);
  return sieve;
}

const FactorSieve& mega_sieve() {
  static FactorSieve sieve(1000000);
  return sieve;
}

const ArithmeticTables& mega_tables() {
  static ArithmeticTables tables(mega_sieve());
  return tables;
}

}  // namespace

TEST_CASE("construction validates the limit") {
  CHECK_THROWS_AS(FactorSieve(0), std::length_error);
  CHECK_THROWS_AS(FactorSieve(FactorSieve::memory_cap() + 1),
                  std::length_error);
  CHECK(FactorSieve::memory_cap() >= 10000000);          // 1e7 workloads fit
  CHECK(FactorSieve::memory_cap() <= 0xffffffffull);     // entries stay 32-bit
}

TEST_CASE("factorization queries match trial division up to 10^4") {
  const FactorSieve& sieve = small_sieve();
  for (std::uint64_t n = 2; n <= 10000; ++n) {
    CHECK(sieve.smallest_prime_factor(n) == oracle::smallest_prime_factor(n));
    CHECK(sieve.is_prime(n) == oracle::is_prime(n));
    CHECK(sieve.omega(n) == oracle::omega(n));
    CHECK(sieve.divisor_count(n) == oracle::divisor_count(n));
  }
  CHECK(sieve.omega(1) == 0);
  CHECK(sieve.divisor_count(1) == 1);
  CHECK_FALSE(sieve.is_prime(1));
}

TEST_CASE("out-of-range and malformed queries throw") {
  const FactorSieve& sieve = small_sieve();
  CHECK_THROWS_AS(sieve.omega(0), std::out_of_range);
  CHECK_THROWS_AS(sieve.omega(sieve.limit() + 1), std::out_of_range);
  CHECK_THROWS_AS(sieve.smallest_prime_factor(1), std::out_of_range);
  CHECK_THROWS_AS(sieve.divisor_count(0), std::out_of_range);
  CHECK_THROWS_AS(sieve.primes_up_to(sieve.limit() + 1), std::out_of_range);
  CHECK_THROWS_AS(sieve.pi_progression(20, 2, 4), std::invalid_argument);
  CHECK_THROWS_AS(sieve.pi_progression(sieve.limit() + 1, 1, 4),
                  std::out_of_range);
  CHECK_THROWS_AS(sieve.mertens_log_sum(1), std::out_of_range);
  CHECK_THROWS_AS(sieve.shapiro_sum(10, 0, 4), std::invalid_argument);
  CHECK_THROWS_AS(sieve.shapiro_sum(1, 1, 4), std::out_of_range);
  CHECK_THROWS_AS(sieve.chebyshev_theta(sieve.limit() + 1), std::out_of_range);
  CHECK_THROWS_AS(sieve.euler_phi(0), std::out_of_range);
}

TEST_CASE("prime lists and counts") {
  const FactorSieve& sieve = small_sieve();
  CHECK(sieve.primes_up_to(10) == std::vector<std::uint64_t>{2, 3, 5, 7});
  CHECK(sieve.primes_up_to(1).empty());
  CHECK(sieve.primes_up_to(2) == std::vector<std::uint64_t>{2});
  CHECK(sieve.primes_up_to(100).size() == 25);
  CHECK(sieve.primes_up_to(10000).size() == 1229);
}

TEST_CASE("prime counts in residue classes") {
  const FactorSieve& sieve = small_sieve();
  CHECK(sieve.pi_progression(20, 1, 4) == 3);   // 5, 13, 17
  CHECK(sieve.pi_progression(20, 3, 4) == 4);   // 3, 7, 11, 19
  CHECK(sieve.pi_progression(4, 1, 4) == 0);
  CHECK(sieve.pi_progression(2, 1, 2) == 0);    // 2 is 0 mod 2
  // Every odd prime is 1 or 3 mod 4; 2 is the only exception.
  CHECK(sieve.pi_progression(10000, 1, 4) + sieve.pi_progression(10000, 3, 4) +
            1 ==
        1229);
}

TEST_CASE("euler phi agrees with the gcd count") {
  const FactorSieve& sieve = small_sieve();
  CHECK(sieve.euler_phi(1) == 1);
  CHECK(sieve.euler_phi(4) == 2);
  CHECK(sieve.euler_phi(10) == 4);
  CHECK(sieve.euler_phi(12) == 4);
  for (std::uint64_t b = 2; b <= 300; ++b) {
    std::uint64_t count = 0;
    for (std::uint64_t a = 1; a < b; ++a) {
      if (std::gcd(a, b) == 1) ++count;
    }
    CHECK(sieve.euler_phi(b) == count);
  }
}

TEST_CASE("prime log sums at small arguments") {
  const FactorSieve& sieve = small_sieve();
  const double l2 = std::log(2.0), l3 = std::log(3.0), l5 = std::log(5.0),
               l7 = std::log(7.0);
  CHECK(sieve.mertens_log_sum(2) == doctest::Approx(l2 / 2).epsilon(1e-12));
  CHECK(sieve.mertens_log_sum(10) ==
        doctest::Approx(l2 / 2 + l3 / 3 + l5 / 5 + l7 / 7).epsilon(1e-12));
  CHECK(sieve.shapiro_sum(10, 3, 4) ==
        doctest::Approx(l3 / 3 + l7 / 7).epsilon(1e-12));
  CHECK(sieve.shapiro_sum(20, 1, 4) ==
        doctest::Approx(l5 / 5 + std::log(13.0) / 13 + std::log(17.0) / 17)
            .epsilon(1e-12));
  CHECK(sieve.chebyshev_theta(1) == 0.0);
  CHECK(sieve.chebyshev_theta(2) == doctest::Approx(l2).epsilon(1e-12));
  CHECK(sieve.chebyshev_theta(10) ==
        doctest::Approx(std::log(210.0)).epsilon(1e-12));
}

TEST_CASE("residue-class log sums partition the full sum") {
  const FactorSieve& sieve = mega_sieve();
  const std::uint64_t x = 1000000;
  double classes = sieve.shapiro_sum(x, 1, 4) + sieve.shapiro_sum(x, 3, 4) +
                   std::log(2.0) / 2;
  CHECK(classes == doctest::Approx(sieve.mertens_log_sum(x)).epsilon(1e-9));
}

// The two running prime sums are step functions, so their deviation from the
// smooth comparison term is extremal just after a prime (sum steps up) or
// just before the next one (smooth term catches up). Checking both endpoints
// of every stretch covers every integer in the range exactly.
TEST_CASE("prime sum bands hold on every integer in [100, 10^7]") {
  FactorSieve sieve(10000000);
  const std::uint64_t lo = 100, hi = 10000000;

  long double mertens = 0.0L;  // running sum of ln p / p
  long double theta = 0.0L;    // running sum of ln p
  double worst_mertens = 0.0;
  double theta_min = 2.0, theta_max = 0.0;
  const auto& primes = sieve.primes();

  auto probe = [&](std::uint64_t x) {
    double dev = std::abs(static_cast<double>(mertens) -
                          std::log(static_cast<double>(x)));
    worst_mertens = std::max(worst_mertens, dev);
    double ratio = static_cast<double>(theta) / static_cast<double>(x);
    theta_min = std::min(theta_min, ratio);
    theta_max = std::max(theta_max, ratio);
  };

  for (std::size_t i = 0; i < primes.size(); ++i) {
    std::uint64_t p = primes[i];
    long double lp = std::log(static_cast<long double>(p));
    mertens += lp / p;
    theta += lp;
    // Both sums are constant on [p, next prime - 1]; clip that stretch to
    // the checked range and probe its ends.
    std::uint64_t stretch_end =
        (i + 1 < primes.size()) ? primes[i + 1] - 1 : hi;
    std::uint64_t a = std::max<std::uint64_t>(p, lo);
    std::uint64_t b = std::min<std::uint64_t>(stretch_end, hi);
    if (a > b) continue;
    probe(a);
    if (b != a) probe(b);
  }

  CHECK(worst_mertens <= 2.1);
  CHECK(theta_min >= 0.7);
  CHECK(theta_max <= 1.2);

  // Spot-check that the member functions agree with the running oracle.
  for (std::uint64_t x : {100ull, 9973ull, 1000003ull, 10000000ull}) {
    double expect = 0.0;
    long double acc = 0.0L;
    for (std::uint64_t p : primes) {
      if (p > x) break;
      acc += std::log(static_cast<long double>(p)) / p;
    }
    expect = static_cast<double>(acc);
    CHECK(sieve.mertens_log_sum(x) == doctest::Approx(expect).epsilon(1e-12));
  }
}

TEST_CASE("primorial index walks the prime products") {
  const FactorSieve& sieve = small_sieve();
  auto check = [&](std::uint64_t n, unsigned k, std::uint64_t v) {
    PrimorialIndex idx = sieve.primorial_index(n);
    CHECK(idx.k == k);
    CHECK(idx.v == v);
  };
  check(1, 0, 1);
  check(2, 1, 2);
  check(5, 1, 2);
  check(6, 2, 6);
  check(29, 2, 6);
  check(30, 3, 30);
  check(209, 3, 30);
  check(210, 4, 210);
  check(9699690, 8, 9699690);
  CHECK_THROWS_AS(sieve.primorial_index(0), std::out_of_range);

  // Sandwich invariant: v <= n and the next prime would overshoot.
  const auto& primes = sieve.primes();
  for (std::uint64_t n = 1; n <= 3000; ++n) {
    PrimorialIndex idx = sieve.primorial_index(n);
    CHECK(idx.v <= n);
    CHECK(idx.v * primes[idx.k] > n);
  }

  // The overflow guard stops the product before it wraps; primes up to 53
  // already multiply past 2^64, so any argument is served by a small sieve.
  PrimorialIndex top = sieve.primorial_index(~0ull);
  CHECK(top.k == 15);
  CHECK(top.v == 614889782588491410ull);
}

TEST_CASE("tabulated omega and divisor counts") {
  const ArithmeticTables& tables = mega_tables();
  CHECK(tables.limit() == 1000000);
  for (std::uint64_t n = 1; n <= 3000; ++n) {
    CHECK(tables.omega(n) == oracle::omega(n));
    CHECK(tables.divisor_count(n) == oracle::divisor_count(n));
  }
  CHECK_THROWS_AS(tables.omega(0), std::out_of_range);
  CHECK_THROWS_AS(tables.divisor_count(tables.limit() + 1), std::out_of_range);
}

TEST_CASE("tau_k counts integers with exactly k prime factors") {
  const ArithmeticTables& tables = mega_tables();
  CHECK(tables.tau_k(10, 1) == 7);  // 2,3,4,5,7,8,9
  CHECK(tables.tau_k(10, 2) == 2);  // 6, 10
  CHECK(tables.tau_k(10, 3) == 0);
  CHECK(tables.tau_k(1, 1) == 0);
  CHECK_THROWS_AS(tables.tau_k(10, 0), std::invalid_argument);

  for (std::uint64_t x : {1ull, 2ull, 10ull, 100ull, 9999ull, 1000000ull}) {
    std::vector<std::uint64_t> hist = tables.omega_histogram(x);
    std::uint64_t total = 1;  // n = 1 is the only integer with omega = 0
    for (unsigned k = 1; k < hist.size(); ++k) {
      CHECK(hist[k] == tables.tau_k(x, k));
      total += hist[k];
    }
    CHECK(total == x);
    CHECK(hist[0] == 1);
  }
}

TEST_CASE("divisor counts are submultiplicative") {
  const ArithmeticTables& tables = mega_tables();
  for (std::uint64_t x = 1; x <= 1000; ++x) {
    std::uint64_t dx = tables.divisor_count(x);
    for (std::uint64_t y = x; y <= 1000; ++y) {
      CHECK(tables.divisor_count(x * y) <= dx * tables.divisor_count(y));
    }
  }
}

TEST_CASE("running maximum of the divisor count") {
  const ArithmeticTables& tables = mega_tables();
  CHECK(tables.max_divisor_count(1) == 1);
  CHECK(tables.max_divisor_count(10) == 4);
  CHECK(tables.max_divisor_count(100) == 12);
  std::uint64_t running = 0;
  for (std::uint64_t n = 1; n <= 2000; ++n) {
    running = std::max(running, tables.divisor_count(n));
    CHECK(tables.max_divisor_count(n) == running);
  }
}

TEST_CASE("factor-count tail constants are fitted, not guessed") {
  const ArithmeticTables& tables = mega_tables();
  HRConstants fit = fit_hardy_ramanujan_constants(tables, 1000000, 1.0);
  CHECK(fit.D == 1.0);
  CHECK(fit.L > 0.0);
  CHECK(fit.M ==
        doctest::Approx(fit.L * std::exp(2.0 * std::log2(std::exp(1.0))))
            .epsilon(1e-12));
  // The fitted slack is attained at x = 32, k = 1 where the ratio is
  // tau_1(32) * ln 32 / 32 with tau_1(32) = 18.
  CHECK(fit.L ==
        doctest::Approx(18.0 * std::log(32.0) / 32.0).epsilon(1e-12));
  CHECK(fit.L == doctest::Approx(1.949476445324846).epsilon(1e-12));

  // A smaller fit window can only lower the maximum.
  HRConstants small = fit_hardy_ramanujan_constants(tables, 1000, 1.0);
  CHECK(small.L <= fit.L + 1e-12);
  CHECK_THROWS_AS(fit_hardy_ramanujan_constants(tables, 1, 1.0),
                  std::out_of_range);
}
