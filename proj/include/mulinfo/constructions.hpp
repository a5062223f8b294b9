#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "mulinfo/entropy.hpp"
#include "mulinfo/sieves.hpp"

namespace mulinfo {

/// X uniform on primes <= n in one residue class, Y uniform on primes in a
/// second, disjoint class. Products p*q factor uniquely, so the product map
/// is injective on the support and multiplication loses no information.
struct DisjointPrimeConstruction {
  std::uint64_t n = 0;
  std::uint64_t modulus = 4;
  std::uint64_t residue_x = 1;
  std::uint64_t residue_y = 3;
  std::vector<std::uint64_t> set_x;
  std::vector<std::uint64_t> set_y;
  JointPairDistribution joint;
};

/// Builds the construction for primes <= n. The default classes are 1 mod 4
/// and 3 mod 4; any pair of distinct residues coprime to the modulus is
/// accepted, with product distinctness verified rather than assumed.
/// Throws a domain error when either class has no prime <= n.
DisjointPrimeConstruction build_disjoint_prime(std::uint64_t n,
                                               const FactorSieve& sieve,
                                               std::uint64_t residue_x = 1,
                                               std::uint64_t residue_y = 3,
                                               std::uint64_t modulus = 4);

/// Checks injectivity of the product map by sorting all pairwise products,
/// then measures the equivocation directly. A repeated product throws a
/// logic error; for valid constructions the result is 0 within 1e-9.
EquivocationReport verify_zero_loss(const DisjointPrimeConstruction& c);

/// How far each marginal falls short of the full log2(n) bits:
/// (log2(n / |set_x|), log2(n / |set_y|)). Both are O(log log n).
struct EntropyDeficit {
  double x_bits;
  double y_bits;
};
EntropyDeficit entropy_deficit(const DisjointPrimeConstruction& c);

/// X, Y independent uniform on the 2^k squarefree divisors of the largest
/// primorial <= n. Multiplication on this support loses k/2 bits, the
/// extremal loss rate for supports of this size.
struct PrimorialConstruction {
  std::uint64_t n = 0;
  unsigned k = 0;
  std::uint64_t primorial = 1;
  std::vector<std::uint64_t> prime_set;
  std::vector<std::uint64_t> divisor_set;
  JointPairDistribution joint;
};

PrimorialConstruction build_primorial(std::uint64_t n,
                                      const FactorSieve& sieve);

/// Number of listed primes dividing exactly one of x and y. Both arguments
/// must be products of distinct listed primes (argument error otherwise).
/// For the primorial construction this equals H(X,Y | X*Y = x*y) in bits.
unsigned u_count(std::uint64_t x, std::uint64_t y,
                 std::span<const std::uint64_t> primes);

enum class PrimorialMode { closed_form, brute_force };

/// Equivocation of the primorial construction.
///   closed_form:  k/2
///   brute_force:  (1/4^k) * sum over all divisor pairs of u(x, y),
///                 capped at k <= 13; for k <= 8 every product fiber is
///                 additionally cross-checked against the entropy module
///                 (conditional entropy u, fiber size 2^u, uniform fiber).
double primorial_equivocation(const PrimorialConstruction& c,
                              PrimorialMode mode, unsigned parallelism = 1);

}  // namespace mulinfo
