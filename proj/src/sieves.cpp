#include "mulinfo/sieves.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numeric>
#include <stdexcept>
#include <string>

namespace mulinfo {

namespace {

constexpr std::uint64_t kDefaultCap = std::uint64_t{1} << 28;
constexpr std::uint64_t kHardCeiling = 0xffffffffull;

std::uint64_t gcd_u64(std::uint64_t a, std::uint64_t b) {
  while (b != 0) {
    a %= b;
    std::swap(a, b);
  }
  return a;
}

}  // namespace

std::uint64_t FactorSieve::memory_cap() {
  if (const char* env = std::getenv("MULINFO_SIEVE_CAP")) {
    char* end = nullptr;
    std::uint64_t v = std::strtoull(env, &end, 10);
    if (end != env && v >= 1) return std::min(v, kHardCeiling);
  }
  return kDefaultCap;
}

FactorSieve::FactorSieve(std::uint64_t limit) : limit_(limit) {
  if (limit < 1)
    throw std::length_error("FactorSieve: limit must be >= 1");
  if (limit > memory_cap())
    throw std::length_error("FactorSieve: limit " + std::to_string(limit) +
                            " exceeds memory cap " +
                            std::to_string(memory_cap()));
  spf_.assign(limit + 1, 0);
  // Linear sieve: each composite is struck exactly once by its smallest
  // prime factor.
  for (std::uint64_t i = 2; i <= limit; ++i) {
    if (spf_[i] == 0) {
      spf_[i] = static_cast<std::uint32_t>(i);
      primes_.push_back(static_cast<std::uint32_t>(i));
    }
    for (std::uint32_t p : primes_) {
      if (p > spf_[i] || i * p > limit) break;
      spf_[i * p] = p;
    }
  }
}

void FactorSieve::check_range(std::uint64_t n) const {
  if (n < 1 || n > limit_)
    throw std::out_of_range("FactorSieve: argument " + std::to_string(n) +
                            " outside [1, " + std::to_string(limit_) + "]");
}

std::uint32_t FactorSieve::smallest_prime_factor(std::uint64_t n) const {
  check_range(n);
  if (n < 2)
    throw std::out_of_range("FactorSieve: smallest prime factor needs n >= 2");
  return spf_[n];
}

bool FactorSieve::is_prime(std::uint64_t n) const {
  check_range(n);
  return n >= 2 && spf_[n] == n;
}

unsigned FactorSieve::omega(std::uint64_t n) const {
  check_range(n);
  unsigned count = 0;
  while (n > 1) {
    std::uint32_t p = spf_[n];
    ++count;
    do n /= p; while (n % p == 0);
  }
  return count;
}

std::uint64_t FactorSieve::divisor_count(std::uint64_t n) const {
  check_range(n);
  std::uint64_t d = 1;
  while (n > 1) {
    std::uint32_t p = spf_[n];
    unsigned e = 0;
    do { n /= p; ++e; } while (n % p == 0);
    d *= e + 1;
  }
  return d;
}

std::vector<std::uint64_t> FactorSieve::primes_up_to(std::uint64_t x) const {
  if (x > limit_)
    throw std::out_of_range("FactorSieve: primes_up_to beyond sieve limit");
  auto end = std::upper_bound(primes_.begin(), primes_.end(), x);
  return std::vector<std::uint64_t>(primes_.begin(), end);
}

std::uint64_t FactorSieve::pi_progression(std::uint64_t x, std::uint64_t a,
                                          std::uint64_t b) const {
  if (b < 1 || gcd_u64(a, b) != 1)
    throw std::invalid_argument("pi_progression: gcd(a, b) must be 1");
  if (x > limit_)
    throw std::out_of_range("pi_progression: x beyond sieve limit");
  std::uint64_t residue = a % b;
  std::uint64_t count = 0;
  for (std::uint32_t p : primes_) {
    if (p > x) break;
    if (p % b == residue) ++count;
  }
  return count;
}

std::uint64_t FactorSieve::euler_phi(std::uint64_t b) const {
  check_range(b);
  if (b == 1) return 1;
  std::uint64_t phi = b;
  std::uint64_t n = b;
  while (n > 1) {
    std::uint32_t p = spf_[n];
    phi = phi / p * (p - 1);
    do n /= p; while (n % p == 0);
  }
  return phi;
}

double FactorSieve::mertens_log_sum(std::uint64_t x) const {
  if (x < 2) throw std::out_of_range("mertens_log_sum: x must be >= 2");
  if (x > limit_)
    throw std::out_of_range("mertens_log_sum: x beyond sieve limit");
  double sum = 0.0;
  for (std::uint32_t p : primes_) {
    if (p > x) break;
    sum += std::log(static_cast<double>(p)) / static_cast<double>(p);
  }
  return sum;
}

double FactorSieve::shapiro_sum(std::uint64_t x, std::uint64_t a,
                                std::uint64_t b) const {
  if (b < 1 || gcd_u64(a, b) != 1)
    throw std::invalid_argument("shapiro_sum: gcd(a, b) must be 1");
  if (x < 2) throw std::out_of_range("shapiro_sum: x must be >= 2");
  if (x > limit_)
    throw std::out_of_range("shapiro_sum: x beyond sieve limit");
  std::uint64_t residue = a % b;
  double sum = 0.0;
  for (std::uint32_t p : primes_) {
    if (p > x) break;
    if (p % b == residue)
      sum += std::log(static_cast<double>(p)) / static_cast<double>(p);
  }
  return sum;
}

double FactorSieve::chebyshev_theta(std::uint64_t x) const {
  if (x > limit_)
    throw std::out_of_range("chebyshev_theta: x beyond sieve limit");
  double sum = 0.0;
  for (std::uint32_t p : primes_) {
    if (p > x) break;
    sum += std::log(static_cast<double>(p));
  }
  return sum;
}

PrimorialIndex FactorSieve::primorial_index(std::uint64_t n) const {
  if (n < 1) throw std::out_of_range("primorial_index: n must be >= 1");
  PrimorialIndex result{0, 1};
  for (std::uint32_t p : primes_) {
    // product * p <= n without forming the (possibly overflowing) product
    if (result.v > n / p) break;
    result.v *= p;
    ++result.k;
  }
  // The product of the first 16 primes exceeds 2^64, so any uint64 n is
  // resolved by primes below 60; a sieve that cannot see the next prime
  // while the product could still grow is too small to answer.
  if (result.k == primes_.size() && !primes_.empty() &&
      result.v <= n / primes_.back())
    throw std::out_of_range("primorial_index: sieve too small for n");
  if (primes_.empty() && n >= 2)
    throw std::out_of_range("primorial_index: sieve too small for n");
  return result;
}

ArithmeticTables::ArithmeticTables(const FactorSieve& sieve)
    : limit_(sieve.limit()) {
  omega_.assign(limit_ + 1, 0);
  divisors_.assign(limit_ + 1, 0);
  if (limit_ >= 1) {
    omega_[1] = 0;
    divisors_[1] = 1;
  }
  for (std::uint64_t n = 2; n <= limit_; ++n) {
    std::uint32_t p = sieve.smallest_prime_factor(n);
    std::uint64_t m = n;
    unsigned e = 0;
    do { m /= p; ++e; } while (m % p == 0);
    omega_[n] = static_cast<std::uint8_t>(omega_[m] + 1);
    divisors_[n] = static_cast<std::uint16_t>(divisors_[m] * (e + 1));
  }
}

void ArithmeticTables::check_range(std::uint64_t n) const {
  if (n < 1 || n > limit_)
    throw std::out_of_range("ArithmeticTables: argument " + std::to_string(n) +
                            " outside [1, " + std::to_string(limit_) + "]");
}

unsigned ArithmeticTables::omega(std::uint64_t n) const {
  check_range(n);
  return omega_[n];
}

std::uint64_t ArithmeticTables::divisor_count(std::uint64_t n) const {
  check_range(n);
  return divisors_[n];
}

std::uint64_t ArithmeticTables::tau_k(std::uint64_t x, unsigned k) const {
  if (k < 1) throw std::invalid_argument("tau_k: k must be >= 1");
  check_range(x);
  std::uint64_t count = 0;
  for (std::uint64_t n = 1; n <= x; ++n)
    if (omega_[n] == k) ++count;
  return count;
}

std::uint64_t ArithmeticTables::max_divisor_count(std::uint64_t N) const {
  check_range(N);
  std::uint16_t best = 0;
  for (std::uint64_t n = 1; n <= N; ++n) best = std::max(best, divisors_[n]);
  return best;
}

std::vector<std::uint64_t> ArithmeticTables::omega_histogram(
    std::uint64_t x) const {
  check_range(x);
  std::vector<std::uint64_t> hist(65, 0);
  for (std::uint64_t n = 1; n <= x; ++n) {
    if (omega_[n] >= hist.size()) hist.resize(omega_[n] + 1, 0);
    ++hist[omega_[n]];
  }
  return hist;
}

HRConstants fit_hardy_ramanujan_constants(const ArithmeticTables& tables,
                                          std::uint64_t x_max, double D) {
  if (x_max < 2 || x_max > tables.limit())
    throw std::out_of_range("fit_hardy_ramanujan_constants: bad x_max");
  // Incremental scan: after including x the histogram holds tau_k(x) for
  // every k, so the max ratio is taken over all integer x in one pass.
  std::vector<std::uint64_t> hist(64, 0);
  unsigned max_k_seen = 0;
  double L = 0.0;
  for (std::uint64_t x = 2; x <= x_max; ++x) {
    unsigned w = tables.omega(x);
    ++hist[w];
    max_k_seen = std::max(max_k_seen, w);
    double ln_x = std::log(static_cast<double>(x));
    if (ln_x <= 1.0) continue;  // 2 log2 ln x < 1: empty k range
    double lnln_x = std::log(ln_x);
    double k_cap = 2.0 * std::log2(ln_x);
    double factorial = 1.0;  // (k-1)!
    for (unsigned k = 1; k <= max_k_seen && static_cast<double>(k) <= k_cap;
         ++k) {
      if (k > 1) factorial *= static_cast<double>(k - 1);
      if (hist[k] == 0) continue;
      double ratio = static_cast<double>(hist[k]) * ln_x * factorial /
                     (static_cast<double>(x) *
                      std::pow(lnln_x + D, static_cast<double>(k - 1)));
      L = std::max(L, ratio);
    }
  }
  HRConstants c{};
  c.L = L;
  c.D = D;
  c.M = L * std::exp(2.0 * D * std::log2(std::exp(1.0)));
  return c;
}

}  // namespace mulinfo
