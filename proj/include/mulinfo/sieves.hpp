#pragma once

#include <cstdint>
#include <utility>
#include <vector>

namespace mulinfo {

struct PrimorialIndex {
  unsigned k;        // number of primes in the product
  std::uint64_t v;   // p_1 * ... * p_k  (1 when k = 0)
};

/// Smallest-prime-factor table for 2..limit plus the ordered prime list.
/// Immutable after construction; all queries are pure and thread-safe.
///
/// The inclusive limit is bounded by memory_cap() (default 2^28 entries,
/// overridable via the MULINFO_SIEVE_CAP environment variable, hard ceiling
/// 2^32 - 1 so entries fit in 32 bits). Four bytes per index.
class FactorSieve {
 public:
  explicit FactorSieve(std::uint64_t limit);

  std::uint64_t limit() const { return limit_; }
  static std::uint64_t memory_cap();

  /// Smallest prime factor of n, 2 <= n <= limit.
  std::uint32_t smallest_prime_factor(std::uint64_t n) const;
  bool is_prime(std::uint64_t n) const;

  /// All primes <= limit in increasing order.
  const std::vector<std::uint32_t>& primes() const { return primes_; }

  /// Number of distinct prime factors; omega(1) = 0.
  unsigned omega(std::uint64_t n) const;

  /// Number of positive divisors; d(1) = 1.
  std::uint64_t divisor_count(std::uint64_t n) const;

  /// Primes <= x in increasing order (length pi(x)).
  std::vector<std::uint64_t> primes_up_to(std::uint64_t x) const;

  /// Count of primes p <= x with p = a (mod b). Requires gcd(a, b) = 1.
  std::uint64_t pi_progression(std::uint64_t x, std::uint64_t a,
                               std::uint64_t b) const;

  /// Euler's totient. phi(1) = 1 by convention (the number of a with
  /// 0 < a < b and gcd(a, b) = 1 defines it only for b >= 2).
  std::uint64_t euler_phi(std::uint64_t b) const;

  /// Sum of ln p / p over primes p <= x. Requires x >= 2.
  /// Accumulated in double precision; summation-order error is below 1e-6
  /// relative even at 1e7 terms and is ignored.
  double mertens_log_sum(std::uint64_t x) const;

  /// Sum of ln p / p over primes p <= x with p = a (mod b).
  /// Requires x >= 2 and gcd(a, b) = 1.
  double shapiro_sum(std::uint64_t x, std::uint64_t a, std::uint64_t b) const;

  /// theta(x) = sum of ln p over primes p <= x; 0 when x < 2.
  double chebyshev_theta(std::uint64_t x) const;

  /// Largest k with p_1 * ... * p_k <= n, together with that product.
  /// Returns (0, 1) for n = 1. The running product is guarded against
  /// overflow by testing product <= n / p before multiplying, so any
  /// uint64 n is accepted.
  PrimorialIndex primorial_index(std::uint64_t n) const;

 private:
  std::uint64_t limit_;
  std::vector<std::uint32_t> spf_;     // index 0 and 1 unused sentinels
  std::vector<std::uint32_t> primes_;

  void check_range(std::uint64_t n) const;
};

/// omega and d tabulated for 1..limit, derived from a FactorSieve in one
/// pass. One byte per omega entry, two per divisor-count entry.
class ArithmeticTables {
 public:
  explicit ArithmeticTables(const FactorSieve& sieve);

  std::uint64_t limit() const { return limit_; }

  unsigned omega(std::uint64_t n) const;
  std::uint64_t divisor_count(std::uint64_t n) const;

  /// Count of n in [1, x] with omega(n) = k. Requires k >= 1.
  std::uint64_t tau_k(std::uint64_t x, unsigned k) const;

  /// max of d(n) over 1 <= n <= N.
  std::uint64_t max_divisor_count(std::uint64_t N) const;

  /// Counts of omega values over [1, x]: result[w] = #{n <= x : omega(n) = w}.
  std::vector<std::uint64_t> omega_histogram(std::uint64_t x) const;

 private:
  std::uint64_t limit_;
  std::vector<std::uint8_t> omega_;
  std::vector<std::uint16_t> divisors_;

  void check_range(std::uint64_t n) const;
};

/// Constants of the Hardy-Ramanujan inequality
///   tau_k(x) <= L * x/ln x * (ln ln x + D)^(k-1) / (k-1)!
/// fitted empirically, plus M = L * exp(2 * D * log2 e) for the companion
/// form with (ln ln x)^(k-1) valid for 1 <= k <= 2 log2 ln x.
struct HRConstants {
  double L;
  double D;
  double M;
};

/// Fits HRConstants over 2 <= x <= x_max: D is fixed (default 1.0) and L is
/// the maximum of tau_k(x) * ln x * (k-1)! / (x * (ln ln x + D)^(k-1)) over
/// all x and 1 <= k <= 2 log2 ln x.
HRConstants fit_hardy_ramanujan_constants(const ArithmeticTables& tables,
                                          std::uint64_t x_max = 1000000,
                                          double D = 1.0);

}  // namespace mulinfo
