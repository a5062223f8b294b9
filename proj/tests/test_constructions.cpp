#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <vector>

#include "mulinfo/constructions.hpp"
#include "mulinfo/entropy.hpp"
#include "mulinfo/sieves.hpp"

using namespace mulinfo;

namespace {

const FactorSieve& sieve() {
  static FactorSieve s(10000);
  return s;
}

}  // namespace

TEST_CASE("disjoint prime classes at small sizes") {
  DisjointPrimeConstruction c = build_disjoint_prime(20, sieve());
  CHECK(c.set_x == std::vector<std::uint64_t>{5, 13, 17});
  CHECK(c.set_y == std::vector<std::uint64_t>{3, 7, 11, 19});
  CHECK(c.joint.atom_count() == 12);
  c.joint.for_each_atom([](const PairAtom& a) {
    CHECK(a.probability == doctest::Approx(1.0 / 12).epsilon(1e-15));
  });

  DisjointPrimeConstruction tiny = build_disjoint_prime(7, sieve());
  CHECK(tiny.set_x == std::vector<std::uint64_t>{5});
  CHECK(tiny.set_y == std::vector<std::uint64_t>{3, 7});

  // 5 is the smallest prime that is 1 mod 4, so n = 6 barely works and
  // n = 4 leaves the first class empty.
  DisjointPrimeConstruction degenerate = build_disjoint_prime(6, sieve());
  CHECK(degenerate.set_x == std::vector<std::uint64_t>{5});
  CHECK(degenerate.set_y == std::vector<std::uint64_t>{3});
  CHECK_THROWS_AS(build_disjoint_prime(4, sieve()), std::domain_error);
  CHECK_THROWS_AS(build_disjoint_prime(2, sieve()), std::domain_error);
}

TEST_CASE("class parameters are validated") {
  CHECK_THROWS_AS(build_disjoint_prime(100, sieve(), 1, 1, 4),
                  std::invalid_argument);  // identical classes
  CHECK_THROWS_AS(build_disjoint_prime(100, sieve(), 1, 3, 1),
                  std::invalid_argument);  // modulus too small
  CHECK_THROWS_AS(build_disjoint_prime(100, sieve(), 2, 3, 4),
                  std::invalid_argument);  // gcd(2, 4) != 1
  CHECK_THROWS_AS(build_disjoint_prime(100, sieve(), 1, 5, 4),
                  std::invalid_argument);  // 5 = 1 mod 4, same class twice
  CHECK_THROWS_AS(build_disjoint_prime(sieve().limit() + 1, sieve()),
                  std::out_of_range);
}

TEST_CASE("multiplication is lossless on disjoint prime supports") {
  for (std::uint64_t n : {6ull, 7ull, 50ull, 1000ull, 10000ull}) {
    DisjointPrimeConstruction c = build_disjoint_prime(n, sieve());
    EquivocationReport report = verify_zero_loss(c);
    CHECK(std::abs(report.equivocation_bits) <= 1e-9);
    CHECK(report.joint_entropy_bits ==
          doctest::Approx(std::log2(static_cast<double>(c.set_x.size())) +
                          std::log2(static_cast<double>(c.set_y.size())))
              .epsilon(1e-9));
  }
}

TEST_CASE("other residue classes are accepted and still lossless") {
  DisjointPrimeConstruction c = build_disjoint_prime(10000, sieve(), 2, 3, 5);
  CHECK(std::abs(verify_zero_loss(c).equivocation_bits) <= 1e-9);
  for (std::uint64_t p : c.set_x) CHECK(p % 5 == 2);
  for (std::uint64_t p : c.set_y) CHECK(p % 5 == 3);
}

TEST_CASE("the generic entropy path confirms zero loss") {
  DisjointPrimeConstruction c = build_disjoint_prime(100, sieve());
  EquivocationReport report = equivocation(c.joint, EquivMethod::difference);
  CHECK(std::abs(report.equivocation_bits) <= 1e-9);
}

TEST_CASE("a repeated product is an invariant violation, not a result") {
  DisjointPrimeConstruction fake{
      6, 4, 1, 3, {2, 3}, {4, 6},  // 2*6 = 3*4 collides
      joint_from_independent(FiniteDistribution::uniform({2, 3}),
                             FiniteDistribution::uniform({4, 6}))};
  CHECK_THROWS_AS(verify_zero_loss(fake), std::logic_error);
}

TEST_CASE("entropy deficits are small and correctly normalized") {
  DisjointPrimeConstruction c = build_disjoint_prime(20, sieve());
  EntropyDeficit deficit = entropy_deficit(c);
  CHECK(deficit.x_bits == doctest::Approx(std::log2(20.0 / 3.0)).epsilon(1e-12));
  CHECK(deficit.y_bits == doctest::Approx(std::log2(20.0 / 4.0)).epsilon(1e-12));

  for (std::uint64_t n : {100ull, 1000ull, 10000ull}) {
    EntropyDeficit d = entropy_deficit(build_disjoint_prime(n, sieve()));
    double budget = 2.0 * std::log2(std::log(static_cast<double>(n)));
    CHECK(d.x_bits <= budget);
    CHECK(d.y_bits <= budget);
    CHECK(d.x_bits > 0.0);
    CHECK(d.y_bits > 0.0);
  }
}

TEST_CASE("primorial supports enumerate squarefree divisors") {
  PrimorialConstruction unit = build_primorial(1, sieve());
  CHECK(unit.k == 0);
  CHECK(unit.primorial == 1);
  CHECK(unit.prime_set.empty());
  CHECK(unit.divisor_set == std::vector<std::uint64_t>{1});

  PrimorialConstruction six = build_primorial(6, sieve());
  CHECK(six.k == 2);
  CHECK(six.primorial == 6);
  CHECK(six.divisor_set == std::vector<std::uint64_t>{1, 2, 3, 6});

  PrimorialConstruction blocked = build_primorial(29, sieve());
  CHECK(blocked.k == 2);  // 30 just misses
  CHECK(blocked.primorial == 6);

  PrimorialConstruction thirty = build_primorial(30, sieve());
  CHECK(thirty.k == 3);
  CHECK(thirty.divisor_set ==
        std::vector<std::uint64_t>{1, 2, 3, 5, 6, 10, 15, 30});

  for (std::uint64_t n : {210ull, 2310ull, 9999ull}) {
    PrimorialConstruction c = build_primorial(n, sieve());
    CHECK(c.primorial <= n);
    CHECK(c.divisor_set.size() == std::uint64_t{1} << c.k);
    CHECK(c.joint.atom_count() ==
          (std::uint64_t{1} << c.k) * (std::uint64_t{1} << c.k));
    for (std::size_t i = 1; i < c.divisor_set.size(); ++i) {
      CHECK(c.divisor_set[i - 1] < c.divisor_set[i]);
      CHECK(c.primorial % c.divisor_set[i] == 0);
    }
  }
}

TEST_CASE("u counts primes dividing exactly one argument") {
  std::vector<std::uint64_t> primes{2, 3};
  CHECK(u_count(1, 1, primes) == 0);
  CHECK(u_count(2, 3, primes) == 2);
  CHECK(u_count(6, 2, primes) == 1);
  CHECK(u_count(6, 6, primes) == 0);
  CHECK(u_count(1, 6, primes) == 2);
  CHECK_THROWS_AS(u_count(4, 1, primes), std::invalid_argument);  // 2^2
  CHECK_THROWS_AS(u_count(5, 1, primes), std::invalid_argument);  // unlisted
  CHECK_THROWS_AS(u_count(0, 1, primes), std::invalid_argument);

  std::vector<std::uint64_t> many(64, 2);
  CHECK_THROWS_AS(u_count(1, 1, many), std::invalid_argument);
}

TEST_CASE("u depends only on the product") {
  PrimorialConstruction c = build_primorial(210, sieve());  // k = 4
  std::map<std::uint64_t, unsigned> by_product;
  for (std::uint64_t x : c.divisor_set) {
    for (std::uint64_t y : c.divisor_set) {
      unsigned u = u_count(x, y, c.prime_set);
      auto [it, inserted] = by_product.emplace(x * y, u);
      if (!inserted) CHECK(it->second == u);
    }
  }
}

TEST_CASE("primorial equivocation is exactly half the prime count") {
  for (std::uint64_t n : {1ull, 2ull, 6ull, 30ull, 210ull, 2310ull}) {
    PrimorialConstruction c = build_primorial(n, sieve());
    double closed = primorial_equivocation(c, PrimorialMode::closed_form);
    CHECK(closed == static_cast<double>(c.k) / 2.0);
    double brute = primorial_equivocation(c, PrimorialMode::brute_force);
    CHECK(brute == closed);  // integer-exact sum, no tolerance needed
  }
}

TEST_CASE("brute force is deterministic across parallelism") {
  PrimorialConstruction c = build_primorial(9999, sieve());  // k = 5
  double serial = primorial_equivocation(c, PrimorialMode::brute_force, 1);
  double parallel = primorial_equivocation(c, PrimorialMode::brute_force, 8);
  CHECK(serial == parallel);
  CHECK(serial == 2.5);
}

TEST_CASE("fibers look uniform to the generic entropy module") {
  PrimorialConstruction c = build_primorial(30, sieve());  // k = 3
  for (std::uint64_t x : c.divisor_set) {
    for (std::uint64_t y : c.divisor_set) {
      double h = conditional_entropy_given_product(c.joint, x * y);
      CHECK(h == doctest::Approx(static_cast<double>(
                     u_count(x, y, c.prime_set)))
                     .epsilon(1e-9));
    }
  }
  EquivocationReport report = equivocation(c.joint, EquivMethod::grouping);
  CHECK(report.equivocation_bits == doctest::Approx(1.5).epsilon(1e-9));

  EquivocationReport k2 = equivocation(build_primorial(6, sieve()).joint,
                                       EquivMethod::difference);
  CHECK(k2.equivocation_bits == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("brute force refuses supports past the quadratic cliff") {
  FactorSieve small(60);
  PrimorialConstruction big = build_primorial(13082761331670030ull, small);
  CHECK(big.k == 14);
  CHECK_THROWS_AS(primorial_equivocation(big, PrimorialMode::brute_force),
                  std::length_error);
  CHECK(primorial_equivocation(big, PrimorialMode::closed_form) == 7.0);
}
