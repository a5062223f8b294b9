#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "mulinfo/entropy.hpp"
#include "mulinfo/sieves.hpp"

namespace mulinfo {

/// Largest table side accepted by the exhaustive product scans below
/// (default 2^14). Raising it is legitimate but quadratic in time and,
/// for materialized tables, in memory.
std::uint64_t table_side_cap();
void set_table_side_cap(std::uint64_t cap);

struct MultiplicityEntry {
  std::uint64_t product;
  std::uint64_t multiplicity;
};

/// Sparse multiplication table of {1..n}^2: every attained product z with
/// its pair count r(z) = #{(x, y) : x*y = z}, ascending in z.
struct MultiplicityTable {
  std::uint64_t n = 0;
  std::vector<MultiplicityEntry> entries;
};

MultiplicityTable multiplicity_table(std::uint64_t n);

/// Streams (z, r(z)) for attained products in ascending z without
/// materializing the table.
void for_each_multiplicity(
    std::uint64_t n,
    const std::function<void(std::uint64_t z, std::uint64_t r)>& fn);

/// Aggregates of the uniform distribution on {1..n}^2 pushed through
/// multiplication. avg_log2_divisor_count is E[log2 d(X*Y)], available only
/// when divisor tables covering n^2 were supplied.
struct UniformProductStats {
  std::uint64_t n = 0;
  std::uint64_t distinct_products = 0;
  std::uint64_t max_multiplicity = 0;
  double product_entropy_bits = 0.0;
  double equivocation_bits = 0.0;
  double avg_log2_divisor_count = 0.0;
  bool has_divisor_average = false;
};

UniformProductStats uniform_product_stats(std::uint64_t n,
                                          unsigned parallelism = 1,
                                          const ArithmeticTables* tables = nullptr);

/// Number of distinct entries in the n-by-n multiplication table.
std::uint64_t distinct_products(std::uint64_t n);

/// H(X*Y) for X, Y independent uniform on {1..n}.
double product_entropy_uniform(std::uint64_t n);

/// H(X,Y | X*Y) for X, Y independent uniform on {1..n}, computed as
/// (1/n^2) * sum over products of r(z) * log2 r(z). Deterministic for any
/// parallelism degree.
EquivocationReport equivocation_uniform(std::uint64_t n,
                                        unsigned parallelism = 1);

/// distinct_products(n) * (ln n)^alpha / n^2; slowly decaying by the
/// multiplication-table phenomenon.
double erdos_ratio(std::uint64_t n);

}  // namespace mulinfo
