#include "mulinfo/constructions.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "mulinfo/util.hpp"

namespace mulinfo {

namespace {

// Primes dividing x as a bitmask over the list, validating that x is exactly
// the product of the marked primes.
std::uint64_t prime_subset_mask(std::uint64_t x,
                                std::span<const std::uint64_t> primes,
                                const char* arg_name) {
  std::uint64_t mask = 0;
  std::uint64_t rebuilt = 1;
  for (std::size_t i = 0; i < primes.size(); ++i) {
    if (x % primes[i] == 0) {
      mask |= std::uint64_t{1} << i;
      rebuilt *= primes[i];
    }
  }
  if (rebuilt != x) {
    throw std::invalid_argument(std::string("u_count: ") + arg_name + " = " +
                                std::to_string(x) +
                                " is not a product of distinct listed primes");
  }
  return mask;
}

// Listed primes dividing z exactly once. For z = x*y with x, y squarefree
// divisor products, this is u(x, y) and depends only on z.
unsigned u_from_product(std::uint64_t z,
                        std::span<const std::uint64_t> primes) {
  unsigned u = 0;
  for (std::uint64_t p : primes) {
    if (z % p == 0 && (z / p) % p != 0) ++u;
  }
  return u;
}

void cross_check_fibers(const PrimorialConstruction& c) {
  const double four_k = std::pow(4.0, static_cast<double>(c.k));
  for (const ProductGroup& g : group_by_product(c.joint)) {
    const unsigned u = u_from_product(g.product, c.prime_set);
    const auto expected_atoms = std::uint64_t{1} << u;
    if (g.atoms != expected_atoms) {
      throw std::logic_error("product fiber " + std::to_string(g.product) +
                             " has " + std::to_string(g.atoms) +
                             " pairs, expected " +
                             std::to_string(expected_atoms));
    }
    if (std::abs(g.conditional_entropy_bits - static_cast<double>(u)) > 1e-9) {
      throw std::logic_error("conditional entropy of fiber " +
                             std::to_string(g.product) + " is " +
                             std::to_string(g.conditional_entropy_bits) +
                             ", expected " + std::to_string(u));
    }
    if (std::abs(g.probability * four_k -
                 static_cast<double>(expected_atoms)) > 1e-6) {
      throw std::logic_error("fiber " + std::to_string(g.product) +
                             " has unexpected probability mass");
    }
  }
}

}  // namespace

DisjointPrimeConstruction build_disjoint_prime(std::uint64_t n,
                                               const FactorSieve& sieve,
                                               std::uint64_t residue_x,
                                               std::uint64_t residue_y,
                                               std::uint64_t modulus) {
  if (modulus < 2) {
    throw std::invalid_argument("build_disjoint_prime: modulus must be >= 2");
  }
  residue_x %= modulus;
  residue_y %= modulus;
  if (residue_x == residue_y) {
    throw std::invalid_argument(
        "build_disjoint_prime: residue classes must be distinct");
  }
  if (std::gcd(residue_x, modulus) != 1 || std::gcd(residue_y, modulus) != 1) {
    throw std::invalid_argument(
        "build_disjoint_prime: residues must be coprime to the modulus");
  }
  if (n > sieve.limit()) {
    throw std::out_of_range("build_disjoint_prime: n exceeds sieve limit");
  }
  std::vector<std::uint64_t> set_x;
  std::vector<std::uint64_t> set_y;
  for (std::uint32_t p : sieve.primes()) {
    if (p > n) break;
    const std::uint64_t r = p % modulus;
    if (r == residue_x) set_x.push_back(p);
    if (r == residue_y) set_y.push_back(p);
  }
  if (set_x.empty() || set_y.empty()) {
    throw std::domain_error(
        "build_disjoint_prime: no prime <= " + std::to_string(n) +
        " in residue class " +
        std::to_string(set_x.empty() ? residue_x : residue_y) + " mod " +
        std::to_string(modulus));
  }
  JointPairDistribution joint =
      joint_from_independent(FiniteDistribution::uniform(set_x),
                             FiniteDistribution::uniform(set_y));
  return {n, modulus, residue_x, residue_y,
          std::move(set_x), std::move(set_y), std::move(joint)};
}

EquivocationReport verify_zero_loss(const DisjointPrimeConstruction& c) {
  const auto start = std::chrono::steady_clock::now();
  const std::uint64_t support =
      static_cast<std::uint64_t>(c.set_x.size()) * c.set_y.size();
  if (support > atom_cap()) {
    throw std::length_error("verify_zero_loss: support exceeds atom cap");
  }
  std::vector<std::uint64_t> products;
  products.reserve(static_cast<std::size_t>(support));
  for (std::uint64_t p : c.set_x) {
    for (std::uint64_t q : c.set_y) {
      products.push_back(p * q);
    }
  }
  std::sort(products.begin(), products.end());
  for (std::size_t i = 1; i < products.size(); ++i) {
    if (products[i] == products[i - 1]) {
      throw std::logic_error("verify_zero_loss: repeated product " +
                             std::to_string(products[i]));
    }
  }
  // All runs have length 1, so this sums to log2(support); computed from the
  // measured runs anyway so a hypothetical collision would surface as a
  // nonzero equivocation rather than a silent pass.
  const double total = static_cast<double>(support);
  CompensatedSum h_product;
  for (std::size_t i = 0; i < products.size();) {
    std::size_t j = i;
    while (j < products.size() && products[j] == products[i]) ++j;
    const double pz = static_cast<double>(j - i) / total;
    h_product.add(-pz * std::log2(pz));
    i = j;
  }
  EquivocationReport report;
  report.descriptor = "disjoint-prime-classes n=" + std::to_string(c.n);
  report.method = EquivMethod::difference;
  report.joint_entropy_bits = std::log2(static_cast<double>(c.set_x.size())) +
                              std::log2(static_cast<double>(c.set_y.size()));
  report.product_entropy_bits = h_product.value();
  report.equivocation_bits =
      report.joint_entropy_bits - report.product_entropy_bits;
  report.elapsed = std::chrono::steady_clock::now() - start;
  return report;
}

EntropyDeficit entropy_deficit(const DisjointPrimeConstruction& c) {
  return {
      std::log2(static_cast<double>(c.n) / static_cast<double>(c.set_x.size())),
      std::log2(static_cast<double>(c.n) / static_cast<double>(c.set_y.size()))};
}

PrimorialConstruction build_primorial(std::uint64_t n,
                                      const FactorSieve& sieve) {
  const PrimorialIndex index = sieve.primorial_index(n);
  const std::vector<std::uint32_t>& primes = sieve.primes();
  std::vector<std::uint64_t> prime_set(primes.begin(),
                                       primes.begin() + index.k);
  std::vector<std::uint64_t> divisor_set;
  divisor_set.reserve(std::size_t{1} << index.k);
  divisor_set.push_back(1);
  for (std::uint64_t p : prime_set) {
    const std::size_t existing = divisor_set.size();
    for (std::size_t i = 0; i < existing; ++i) {
      divisor_set.push_back(divisor_set[i] * p);
    }
  }
  std::sort(divisor_set.begin(), divisor_set.end());
  FiniteDistribution marginal = FiniteDistribution::uniform(divisor_set);
  return {n, index.k, index.v, std::move(prime_set), std::move(divisor_set),
          joint_from_independent(marginal, marginal)};
}

unsigned u_count(std::uint64_t x, std::uint64_t y,
                 std::span<const std::uint64_t> primes) {
  if (primes.size() > 63) {
    throw std::invalid_argument("u_count: more than 63 primes");
  }
  const std::uint64_t mx = prime_subset_mask(x, primes, "x");
  const std::uint64_t my = prime_subset_mask(y, primes, "y");
  return static_cast<unsigned>(std::popcount(mx ^ my));
}

double primorial_equivocation(const PrimorialConstruction& c,
                              PrimorialMode mode, unsigned parallelism) {
  if (mode == PrimorialMode::closed_form) {
    return static_cast<double>(c.k) / 2.0;
  }
  if (c.k > 13) {
    throw std::length_error(
        "primorial_equivocation: brute force capped at k = 13, got k = " +
        std::to_string(c.k));
  }
  // Divisors correspond to subsets of the prime set, and u(x, y) is the
  // symmetric-difference size of the two subsets, so the sum runs over mask
  // pairs without touching the divisor values.
  const std::uint64_t side = std::uint64_t{1} << c.k;
  constexpr std::uint64_t kMaskBlock = 1 << 12;
  const std::size_t num_blocks =
      static_cast<std::size_t>((side + kMaskBlock - 1) / kMaskBlock);
  std::vector<std::uint64_t> partial(num_blocks, 0);
  for_each_block(num_blocks, parallelism, [&](std::size_t b) {
    const std::uint64_t lo = static_cast<std::uint64_t>(b) * kMaskBlock;
    const std::uint64_t hi = std::min(side, lo + kMaskBlock);
    std::uint64_t sum = 0;
    for (std::uint64_t x = lo; x < hi; ++x) {
      for (std::uint64_t y = 0; y < side; ++y) {
        sum += static_cast<unsigned>(std::popcount(x ^ y));
      }
    }
    partial[b] = sum;
  });
  std::uint64_t total = 0;
  for (std::uint64_t s : partial) total += s;

  if (c.k <= 8) cross_check_fibers(c);

  return static_cast<double>(total) /
         (static_cast<double>(side) * static_cast<double>(side));
}

}  // namespace mulinfo
