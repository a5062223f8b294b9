#include "mulinfo/multtable.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "mulinfo/bounds.hpp"
#include "mulinfo/util.hpp"

namespace mulinfo {

namespace {

std::uint64_t g_side_cap = std::uint64_t{1} << 14;

// Hard ceiling on the side: products then fit in 2^40 and every pair count
// r(z) <= d(z) < 2^16, so 16-bit counting buffers are safe.
constexpr std::uint64_t kSideCeiling = std::uint64_t{1} << 20;

// Products counted per window; 2^22 keeps one uint16 buffer at 8 MiB.
constexpr std::uint64_t kZBlock = std::uint64_t{1} << 22;

const std::vector<double>& log2_small() {
  static const std::vector<double> table = [] {
    std::vector<double> t(1 << 16, 0.0);
    for (std::size_t i = 1; i < t.size(); ++i) {
      t[i] = std::log2(static_cast<double>(i));
    }
    return t;
  }();
  return table;
}

void check_side(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("table side must be positive");
  if (n > g_side_cap) {
    throw std::length_error("table side " + std::to_string(n) +
                            " exceeds cap " + std::to_string(g_side_cap));
  }
}

struct BlockPlan {
  std::uint64_t largest_product;
  std::uint64_t block;
  std::size_t count;
};

BlockPlan plan_blocks(std::uint64_t n) {
  const std::uint64_t total = n * n;
  const std::uint64_t block = std::min(kZBlock, total);
  return {total, block, static_cast<std::size_t>((total + block - 1) / block)};
}

// Counts pair multiplicities for products inside one window. counts[z - lo]
// accumulates 2 per unordered pair x < y and 1 per diagonal pair.
void count_window(std::uint64_t n, std::uint64_t lo, std::uint64_t hi,
                  std::vector<std::uint16_t>& counts) {
  counts.assign(static_cast<std::size_t>(hi - lo + 1), 0);
  for (std::uint64_t x = 1; x <= n && x * x <= hi; ++x) {
    const std::uint64_t y_lo = std::max(x, (lo + x - 1) / x);
    const std::uint64_t y_hi = std::min(n, hi / x);
    for (std::uint64_t y = y_lo; y <= y_hi; ++y) {
      counts[static_cast<std::size_t>(x * y - lo)] +=
          static_cast<std::uint16_t>(x == y ? 1 : 2);
    }
  }
}

struct BlockStats {
  std::uint64_t distinct = 0;
  std::uint64_t pairs = 0;
  std::uint64_t max_r = 0;
  double sum_r_log2_r = 0.0;
  double sum_r_log2_d = 0.0;
};

BlockStats window_stats(std::uint64_t lo, const std::vector<std::uint16_t>& counts,
                        const ArithmeticTables* tables) {
  const std::vector<double>& lg = log2_small();
  BlockStats s;
  CompensatedSum r_log_r;
  CompensatedSum r_log_d;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    const std::uint16_t r = counts[i];
    if (r == 0) continue;
    ++s.distinct;
    s.pairs += r;
    if (r > s.max_r) s.max_r = r;
    if (r > 1) r_log_r.add(static_cast<double>(r) * lg[r]);
    if (tables != nullptr) {
      r_log_d.add(static_cast<double>(r) *
                  lg[tables->divisor_count(lo + i)]);
    }
  }
  s.sum_r_log2_r = r_log_r.value();
  s.sum_r_log2_d = r_log_d.value();
  return s;
}

}  // namespace

std::uint64_t table_side_cap() { return g_side_cap; }

void set_table_side_cap(std::uint64_t cap) {
  if (cap == 0 || cap > kSideCeiling) {
    throw std::invalid_argument("table side cap must be in [1, 2^20]");
  }
  g_side_cap = cap;
}

UniformProductStats uniform_product_stats(std::uint64_t n, unsigned parallelism,
                                          const ArithmeticTables* tables) {
  check_side(n);
  if (tables != nullptr && tables->limit() < n * n) {
    throw std::out_of_range("divisor tables cover " +
                            std::to_string(tables->limit()) +
                            ", need " + std::to_string(n * n));
  }
  const BlockPlan plan = plan_blocks(n);
  std::vector<BlockStats> per_block(plan.count);
  for_each_block(plan.count, parallelism, [&](std::size_t b) {
    const std::uint64_t lo = 1 + static_cast<std::uint64_t>(b) * plan.block;
    const std::uint64_t hi = std::min(plan.largest_product, lo + plan.block - 1);
    std::vector<std::uint16_t> counts;
    count_window(n, lo, hi, counts);
    per_block[b] = window_stats(lo, counts, tables);
  });

  UniformProductStats out;
  out.n = n;
  CompensatedSum r_log_r;
  CompensatedSum r_log_d;
  std::uint64_t pairs = 0;
  for (const BlockStats& s : per_block) {
    out.distinct_products += s.distinct;
    pairs += s.pairs;
    out.max_multiplicity = std::max(out.max_multiplicity, s.max_r);
    r_log_r.add(s.sum_r_log2_r);
    r_log_d.add(s.sum_r_log2_d);
  }
  if (pairs != n * n) {
    throw std::logic_error("table scan lost pairs: " + std::to_string(pairs) +
                           " of " + std::to_string(n * n));
  }
  const double total = static_cast<double>(n) * static_cast<double>(n);
  out.equivocation_bits = r_log_r.value() / total;
  out.product_entropy_bits =
      2.0 * std::log2(static_cast<double>(n)) - out.equivocation_bits;
  if (tables != nullptr) {
    out.avg_log2_divisor_count = r_log_d.value() / total;
    out.has_divisor_average = true;
  }
  return out;
}

MultiplicityTable multiplicity_table(std::uint64_t n) {
  MultiplicityTable table;
  table.n = n;
  for_each_multiplicity(n, [&](std::uint64_t z, std::uint64_t r) {
    table.entries.push_back({z, r});
  });
  return table;
}

void for_each_multiplicity(
    std::uint64_t n,
    const std::function<void(std::uint64_t, std::uint64_t)>& fn) {
  check_side(n);
  const BlockPlan plan = plan_blocks(n);
  std::vector<std::uint16_t> counts;
  // Single-threaded so windows are visited in ascending product order.
  for (std::size_t b = 0; b < plan.count; ++b) {
    const std::uint64_t lo = 1 + static_cast<std::uint64_t>(b) * plan.block;
    const std::uint64_t hi = std::min(plan.largest_product, lo + plan.block - 1);
    count_window(n, lo, hi, counts);
    for (std::size_t i = 0; i < counts.size(); ++i) {
      if (counts[i] != 0) fn(lo + i, counts[i]);
    }
  }
}

std::uint64_t distinct_products(std::uint64_t n) {
  return uniform_product_stats(n).distinct_products;
}

double product_entropy_uniform(std::uint64_t n) {
  return uniform_product_stats(n).product_entropy_bits;
}

EquivocationReport equivocation_uniform(std::uint64_t n, unsigned parallelism) {
  const auto start = std::chrono::steady_clock::now();
  const UniformProductStats stats = uniform_product_stats(n, parallelism);
  EquivocationReport report;
  report.descriptor = "uniform-table n=" + std::to_string(n);
  report.method = EquivMethod::difference;
  report.joint_entropy_bits = 2.0 * std::log2(static_cast<double>(n));
  report.product_entropy_bits = stats.product_entropy_bits;
  report.equivocation_bits = stats.equivocation_bits;
  report.elapsed = std::chrono::steady_clock::now() - start;
  return report;
}

double erdos_ratio(std::uint64_t n) {
  if (n < 3) throw std::invalid_argument("erdos_ratio requires n >= 3");
  const double m = static_cast<double>(distinct_products(n));
  return m * std::pow(std::log(static_cast<double>(n)), alpha_constant()) /
         (static_cast<double>(n) * static_cast<double>(n));
}

}  // namespace mulinfo
