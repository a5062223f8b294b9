#include "mulinfo/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "mulinfo/multtable.hpp"
#include "mulinfo/util.hpp"

namespace mulinfo {

namespace {

constexpr double kSlackTol = 1e-9;

void check_tables_cover(const ArithmeticTables& tables, std::uint64_t needed,
                        const char* who) {
  if (tables.limit() < needed) {
    throw std::out_of_range(std::string(who) + ": tables cover " +
                            std::to_string(tables.limit()) + ", need " +
                            std::to_string(needed));
  }
}

}  // namespace

double alpha_constant() {
  return 1.0 - std::log2(std::exp(1.0) * std::log(2.0));
}

BoundCheckRecord make_bound_record(std::string label, std::uint64_t input_size,
                                   double lhs, double rhs) {
  BoundCheckRecord r;
  r.label = std::move(label);
  r.input_size = input_size;
  r.lhs = lhs;
  r.rhs = rhs;
  r.slack = rhs - lhs;
  r.pass = r.slack >= -kSlackTol;
  return r;
}

BoundCheckRecord make_skipped_record(std::string label,
                                     std::uint64_t input_size) {
  BoundCheckRecord r;
  r.label = std::move(label);
  r.input_size = input_size;
  r.skipped = true;
  return r;
}

bool all_pass(std::span<const BoundCheckRecord> records) {
  return std::all_of(records.begin(), records.end(),
                     [](const BoundCheckRecord& r) { return r.pass; });
}

SplitCounts product_split_counts(std::uint64_t n, double delta,
                                 const ArithmeticTables& tables,
                                 std::uint64_t cap) {
  if (!(delta > 0.0) || !(delta < 1.0 / 6.0)) {
    throw std::invalid_argument(
        "product_split_counts: delta must lie in (0, 1/6)");
  }
  if (n < 2) {
    throw std::invalid_argument("product_split_counts: n must be >= 2");
  }
  if (n > cap) {
    throw std::length_error("product_split_counts: n = " + std::to_string(n) +
                            " exceeds cap " + std::to_string(cap));
  }
  const std::uint64_t n_sq = n * n;
  check_tables_cover(tables, n_sq, "product_split_counts");

  const double base = std::log2(std::log(static_cast<double>(n)));
  const double t1 = (1.0 + 2.0 * delta) * base;
  const double t2 = (1.0 + delta) * base;
  const double t3 = delta * base;

  SplitCounts out;
  out.n = n;
  out.delta = delta;

  const std::vector<std::uint64_t> hist = tables.omega_histogram(n);
  for (std::size_t w1 = 0; w1 < hist.size(); ++w1) {
    if (hist[w1] == 0) continue;
    for (std::size_t w2 = 0; w2 < hist.size(); ++w2) {
      if (hist[w2] == 0) continue;
      if (static_cast<double>(w1 + w2) <= t1) out.m1 += hist[w1] * hist[w2];
    }
  }

  for (std::uint64_t z = 1; z <= n_sq; ++z) {
    if (static_cast<double>(tables.omega(z)) >= t2) ++out.m2;
  }

  std::vector<bool> marked(static_cast<std::size_t>(n_sq) + 1, false);
  for (std::uint64_t w = 1; w <= n; ++w) {
    if (static_cast<double>(tables.omega(w)) < t3) continue;
    for (std::uint64_t z = w * w; z <= n_sq; z += w * w) {
      marked[static_cast<std::size_t>(z)] = true;
    }
  }
  for (std::uint64_t z = 1; z <= n_sq; ++z) {
    if (marked[static_cast<std::size_t>(z)]) ++out.m3;
  }
  return out;
}

std::vector<BoundCheckRecord> hardy_ramanujan_check(
    std::span<const std::uint64_t> x_grid, const HRConstants& constants,
    const ArithmeticTables& tables) {
  std::vector<BoundCheckRecord> records;
  for (std::uint64_t x : x_grid) {
    if (x < 2) throw std::invalid_argument("hardy_ramanujan_check: x >= 2");
    check_tables_cover(tables, x, "hardy_ramanujan_check");
    const double ln_x = std::log(static_cast<double>(x));
    const double lnln_x = std::log(ln_x);
    const double k_cap = 2.0 * std::log2(ln_x);
    if (lnln_x <= 0.0 || k_cap < 1.0) {
      records.push_back(make_skipped_record(
          "factor-count-tail x=" + std::to_string(x) + " (no admissible k)",
          x));
      continue;
    }
    const double lead = constants.M * static_cast<double>(x) / ln_x;
    double power = 1.0;      // (lnln x)^(k-1)
    double factorial = 1.0;  // (k-1)!
    for (unsigned k = 1; static_cast<double>(k) <= k_cap; ++k) {
      if (k > 1) {
        power *= lnln_x;
        factorial *= static_cast<double>(k - 1);
      }
      records.push_back(make_bound_record(
          "factor-count-tail x=" + std::to_string(x) + " k=" +
              std::to_string(k),
          x, static_cast<double>(tables.tau_k(x, k)),
          lead * power / factorial));
    }
  }
  return records;
}

std::vector<BoundCheckRecord> hardy_ramanujan_check_fitted(
    std::span<const std::uint64_t> x_grid, const HRConstants& constants,
    const ArithmeticTables& tables) {
  std::vector<BoundCheckRecord> records;
  for (std::uint64_t x : x_grid) {
    if (x < 2) {
      throw std::invalid_argument("hardy_ramanujan_check_fitted: x >= 2");
    }
    check_tables_cover(tables, x, "hardy_ramanujan_check_fitted");
    const double ln_x = std::log(static_cast<double>(x));
    const double shifted = std::log(ln_x) + constants.D;
    const double lead = constants.L * static_cast<double>(x) / ln_x;
    const std::vector<std::uint64_t> hist = tables.omega_histogram(x);
    double power = 1.0;
    double factorial = 1.0;
    for (unsigned k = 1; k < hist.size(); ++k) {
      if (k > 1) {
        power *= shifted;
        factorial *= static_cast<double>(k - 1);
      }
      if (hist[k] == 0) continue;
      records.push_back(make_bound_record(
          "factor-count-tail-fitted x=" + std::to_string(x) + " k=" +
              std::to_string(k),
          x, static_cast<double>(hist[k]), lead * power / factorial));
    }
  }
  return records;
}

DirichletAverage dirichlet_average(std::uint64_t n,
                                   const ArithmeticTables& tables) {
  if (n == 0) throw std::invalid_argument("dirichlet_average: n >= 1");
  check_tables_cover(tables, n, "dirichlet_average");
  std::uint64_t total = 0;
  for (std::uint64_t m = 1; m <= n; ++m) total += tables.divisor_count(m);
  DirichletAverage out;
  out.n = n;
  out.average = static_cast<double>(total) / static_cast<double>(n);
  out.residual = out.average - std::log(static_cast<double>(n));
  return out;
}

std::vector<BoundCheckRecord> upper_bound_chain(std::uint64_t n,
                                                const ArithmeticTables& tables,
                                                unsigned parallelism) {
  check_tables_cover(tables, n, "upper_bound_chain");
  const bool exact_available = n <= 1024 && tables.limit() >= n * n;

  UniformProductStats stats =
      uniform_product_stats(n, parallelism,
                            exact_available ? &tables : nullptr);

  double mean_d = 0.0;
  double max_d = 0.0;
  {
    std::uint64_t total = 0;
    for (std::uint64_t m = 1; m <= n; ++m) total += tables.divisor_count(m);
    mean_d = static_cast<double>(total) / static_cast<double>(n);
    max_d = static_cast<double>(tables.max_divisor_count(n));
  }
  const double two_log_mean = 2.0 * std::log2(mean_d);
  const double two_log_max = 2.0 * std::log2(max_d);
  const std::string suffix = " n=" + std::to_string(n);

  std::vector<BoundCheckRecord> records;
  if (exact_available) {
    records.push_back(make_bound_record(
        "equivocation<=mean_log2_divisors" + suffix, n,
        stats.equivocation_bits, stats.avg_log2_divisor_count));
    records.push_back(make_bound_record(
        "mean_log2_divisors<=2log2_mean_divisors" + suffix, n,
        stats.avg_log2_divisor_count, two_log_mean));
  } else {
    records.push_back(make_skipped_record(
        "equivocation<=mean_log2_divisors" + suffix + " (n beyond exact scan)",
        n));
    records.push_back(make_skipped_record(
        "mean_log2_divisors<=2log2_mean_divisors" + suffix +
            " (n beyond exact scan)",
        n));
  }
  records.push_back(make_bound_record(
      "equivocation<=2log2_mean_divisors" + suffix, n, stats.equivocation_bits,
      two_log_mean));
  records.push_back(make_bound_record(
      "2log2_mean_divisors<=2log2_max_divisors" + suffix, n, two_log_mean,
      two_log_max));
  records.push_back(make_bound_record(
      "equivocation<=2log2_max_divisors" + suffix, n, stats.equivocation_bits,
      two_log_max));
  return records;
}

double wigert_ratio(std::uint64_t n, const ArithmeticTables& tables) {
  if (n < 16) throw std::invalid_argument("wigert_ratio: n must be >= 16");
  check_tables_cover(tables, n, "wigert_ratio");
  const double ln_n = std::log(static_cast<double>(n));
  return std::log2(static_cast<double>(tables.max_divisor_count(n))) *
         std::log(ln_n) / ln_n;
}

GrowthFit growth_fit(std::span<const std::uint64_t> n_grid,
                     unsigned parallelism) {
  if (n_grid.size() < 4) {
    throw std::length_error("growth_fit: need at least 4 grid points");
  }
  GrowthFit fit;
  for (std::uint64_t n : n_grid) {
    if (n < 2) {
      throw std::invalid_argument("growth_fit: grid entries must be >= 2");
    }
    fit.grid.push_back(n);
    fit.predictor.push_back(std::log2(std::log2(static_cast<double>(n))));
  }
  const double t_min = *std::min_element(fit.predictor.begin(),
                                         fit.predictor.end());
  const double t_max = *std::max_element(fit.predictor.begin(),
                                         fit.predictor.end());
  if (t_max - t_min < 1e-12) {
    throw std::invalid_argument("growth_fit: degenerate predictor spread");
  }
  for (std::uint64_t n : n_grid) {
    fit.observed.push_back(
        equivocation_uniform(n, parallelism).equivocation_bits);
  }
  const double count = static_cast<double>(n_grid.size());
  CompensatedSum sum_t;
  CompensatedSum sum_e;
  for (std::size_t i = 0; i < n_grid.size(); ++i) {
    sum_t.add(fit.predictor[i]);
    sum_e.add(fit.observed[i]);
  }
  const double mean_t = sum_t.value() / count;
  const double mean_e = sum_e.value() / count;
  CompensatedSum cov;
  CompensatedSum var;
  for (std::size_t i = 0; i < n_grid.size(); ++i) {
    const double dt = fit.predictor[i] - mean_t;
    cov.add(dt * (fit.observed[i] - mean_e));
    var.add(dt * dt);
  }
  fit.slope = cov.value() / var.value();
  fit.intercept = mean_e - fit.slope * mean_t;
  for (std::size_t i = 0; i < n_grid.size(); ++i) {
    fit.residuals.push_back(fit.observed[i] -
                            (fit.intercept + fit.slope * fit.predictor[i]));
  }
  return fit;
}

}  // namespace mulinfo
