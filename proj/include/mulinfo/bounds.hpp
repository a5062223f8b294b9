#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "mulinfo/sieves.hpp"

namespace mulinfo {

/// 1 - log2(e * ln 2) = 0.08607..., the exponent governing how thin the set
/// of distinct multiplication-table entries is.
double alpha_constant();

/// One checked inequality lhs <= rhs. pass = (slack >= -1e-9) with
/// slack = rhs - lhs; skipped records mark grid points where the bound is
/// ill-formed (they carry lhs = rhs = slack = 0 and pass = true).
struct BoundCheckRecord {
  std::string label;
  std::uint64_t input_size = 0;
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;
  bool pass = true;
  bool skipped = false;
};

BoundCheckRecord make_bound_record(std::string label, std::uint64_t input_size,
                                   double lhs, double rhs);
BoundCheckRecord make_skipped_record(std::string label,
                                     std::uint64_t input_size);

/// True when every non-skipped record passes.
bool all_pass(std::span<const BoundCheckRecord> records);

/// Three overlapping counts that together cover the distinct products of the
/// n-by-n table. The covering m(n) <= m1 + m2 + m3 is checked by tests, not
/// here.
struct SplitCounts {
  std::uint64_t n = 0;
  double delta = 0.0;
  /// Pairs (x, y) <= n whose factor counts satisfy
  /// omega(x) + omega(y) <= (1 + 2*delta) * log2(ln n).
  std::uint64_t m1 = 0;
  /// Products z <= n^2 with omega(z) >= (1 + delta) * log2(ln n).
  std::uint64_t m2 = 0;
  /// Products z <= n^2 divisible by w^2 for some w with
  /// omega(w) >= delta * log2(ln n).
  std::uint64_t m3 = 0;
};

/// Exact counts by brute force; n is capped (default 2^10) because m2 and m3
/// scan all of [1, n^2]. Requires 0 < delta < 1/6 and tables covering n^2.
SplitCounts product_split_counts(std::uint64_t n, double delta,
                                 const ArithmeticTables& tables,
                                 std::uint64_t cap = 1024);

/// tau_k(x) <= M * x/ln x * (ln ln x)^(k-1)/(k-1)! for k up to
/// 2*log2(ln x). Grid points with no admissible k (x = 2, where ln ln x < 0
/// degenerates the bound) yield a skipped record.
std::vector<BoundCheckRecord> hardy_ramanujan_check(
    std::span<const std::uint64_t> x_grid, const HRConstants& constants,
    const ArithmeticTables& tables);

/// tau_k(x) <= L * x/ln x * (ln ln x + D)^(k-1)/(k-1)! for every k with
/// tau_k(x) > 0. Well-formed for all x >= 2, no skips.
std::vector<BoundCheckRecord> hardy_ramanujan_check_fitted(
    std::span<const std::uint64_t> x_grid, const HRConstants& constants,
    const ArithmeticTables& tables);

/// Mean divisor count next to its leading term:
/// average = (1/n) * sum of d(m) for m <= n, residual = average - ln n.
struct DirichletAverage {
  std::uint64_t n = 0;
  double average = 0.0;
  double residual = 0.0;
};
DirichletAverage dirichlet_average(std::uint64_t n,
                                   const ArithmeticTables& tables);

/// The chain bounding the uniform-table equivocation from above:
///   H(X,Y|X*Y) <= E[log2 d(X*Y)] <= 2*log2(mean d) <= 2*log2(max d),
/// plus the direct links. The exact E[log2 d(X*Y)] term needs a full n^2
/// scan, so it is only evaluated for n <= 1024 when the tables cover n^2;
/// otherwise those links are emitted as skipped.
std::vector<BoundCheckRecord> upper_bound_chain(std::uint64_t n,
                                                const ArithmeticTables& tables,
                                                unsigned parallelism = 1);

/// log2(max divisor count up to n) * ln ln n / ln n; tends to 1 very slowly.
double wigert_ratio(std::uint64_t n, const ArithmeticTables& tables);

/// Least-squares fit of equivocation_uniform(n) against log2(log2(n)).
struct GrowthFit {
  double slope = 0.0;
  double intercept = 0.0;
  std::vector<std::uint64_t> grid;
  std::vector<double> predictor;
  std::vector<double> observed;
  std::vector<double> residuals;
};

/// Requires >= 4 grid points (size error), all >= 2 with a non-degenerate
/// predictor spread (argument error).
GrowthFit growth_fit(std::span<const std::uint64_t> n_grid,
                     unsigned parallelism = 1);

}  // namespace mulinfo
