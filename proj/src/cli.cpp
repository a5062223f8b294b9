#include "mulinfo/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <iostream>
#include <span>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "mulinfo/bounds.hpp"
#include "mulinfo/constructions.hpp"
#include "mulinfo/entropy.hpp"
#include "mulinfo/io.hpp"
#include "mulinfo/multtable.hpp"
#include "mulinfo/sieves.hpp"

namespace mulinfo {

namespace {

using OJson = nlohmann::ordered_json;

constexpr std::uint64_t kJsonEntryGuard = 5'000'000;

// Wall-clock section timer, active only under --with-timings (measured times
// are inherently non-reproducible, so they are opt-in).
class Timings {
 public:
  explicit Timings(bool enabled) : enabled_(enabled) {}

  template <class Fn>
  auto section(const char* name, Fn&& fn) {
    if (!enabled_) return fn();
    const auto start = std::chrono::steady_clock::now();
    auto finish = [&] {
      const std::chrono::duration<double, std::milli> ms =
          std::chrono::steady_clock::now() - start;
      entries_.push_back({name, ms.count()});
    };
    if constexpr (std::is_void_v<decltype(fn())>) {
      fn();
      finish();
    } else {
      auto result = fn();
      finish();
      return result;
    }
  }

  OJson to_json() const {
    OJson j = OJson::object();
    for (const auto& [name, ms] : entries_) j[name] = ms;
    return j;
  }

 private:
  bool enabled_;
  std::vector<std::pair<std::string, double>> entries_;
};

std::vector<std::uint64_t> pow2_grid(unsigned lo_exp, unsigned hi_exp) {
  std::vector<std::uint64_t> grid;
  for (unsigned e = lo_exp; e <= hi_exp; ++e) {
    grid.push_back(std::uint64_t{1} << e);
  }
  return grid;
}

std::vector<std::uint64_t> log_grid(std::uint64_t lo, std::uint64_t hi,
                                    unsigned points) {
  std::vector<std::uint64_t> grid;
  const double ln_lo = std::log(static_cast<double>(lo));
  const double ln_hi = std::log(static_cast<double>(hi));
  for (unsigned i = 0; i < points; ++i) {
    const double t = ln_lo + (ln_hi - ln_lo) * static_cast<double>(i) /
                                 static_cast<double>(points - 1);
    grid.push_back(static_cast<std::uint64_t>(std::llround(std::exp(t))));
  }
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  return grid;
}

std::vector<std::uint64_t> grid_or(const RunConfig& config,
                                   std::vector<std::uint64_t> fallback) {
  return config.grid.empty() ? std::move(fallback) : config.grid;
}

void emit(const RunConfig& config, const std::string& text) {
  if (config.output_path.empty()) {
    std::cout << text;
  } else {
    write_file_atomic(config.output_path, text);
  }
}

std::string dump(const OJson& j) { return j.dump(2) + "\n"; }

int suite_status(std::span<const BoundCheckRecord> records) {
  return all_pass(records) ? 0 : 1;
}

std::uint64_t single_n(const RunConfig& config, const char* command) {
  if (config.grid.size() != 1) {
    throw std::invalid_argument(std::string(command) +
                                " expects exactly one --n value");
  }
  return config.grid.front();
}

double erdos_ratio_from(std::uint64_t distinct, std::uint64_t n) {
  return static_cast<double>(distinct) *
         std::pow(std::log(static_cast<double>(n)), alpha_constant()) /
         (static_cast<double>(n) * static_cast<double>(n));
}

// Largest |sum of ln p / p over class primes <= x  -  ln x / phi(b)| over
// integer x in [2, x_max]. The running sum is constant between class primes
// and the drift term is monotone, so checking stretch endpoints is exact.
double progression_sup_deviation(const FactorSieve& sieve, std::uint64_t a,
                                 std::uint64_t b, std::uint64_t x_max) {
  const double inv_phi = 1.0 / static_cast<double>(sieve.euler_phi(b));
  double running = 0.0;
  double sup = 0.0;
  auto eval = [&](std::uint64_t x) {
    if (x < 2 || x > x_max) return;
    sup = std::max(sup, std::abs(running - std::log(static_cast<double>(x)) *
                                               inv_phi));
  };
  eval(2);
  for (std::uint32_t p : sieve.primes()) {
    if (p > x_max) break;
    if (p % b != a % b) continue;
    eval(p - 1);
    running += std::log(static_cast<double>(p)) / static_cast<double>(p);
    eval(p);
  }
  eval(x_max);
  return sup;
}

int cmd_scan(const RunConfig& config) {
  const std::vector<std::uint64_t> grid =
      grid_or(config, {16, 64, 256, 1024, 4096});
  std::vector<UniformProductStats> rows;
  rows.reserve(grid.size());
  for (std::uint64_t n : grid) {
    rows.push_back(uniform_product_stats(n, config.parallelism));
  }
  emit(config, config.format == OutputFormat::csv ? scan_csv(rows)
                                                  : dump(scan_json(rows)));
  return 0;
}

int cmd_table(const RunConfig& config) {
  const std::uint64_t n = single_n(config, "table");
  MultiplicityTable table = multiplicity_table(n);
  if (config.format == OutputFormat::json &&
      table.entries.size() > kJsonEntryGuard) {
    throw std::invalid_argument(
        "table: JSON output capped at 5e6 entries, use --format csv");
  }
  emit(config, config.format == OutputFormat::csv
                   ? multiplicity_csv(table)
                   : dump(multiplicity_json(table)));
  return 0;
}

OJson disjoint_prime_json(const DisjointPrimeConstruction& c,
                          bool with_atoms, bool with_timings) {
  const EquivocationReport report = verify_zero_loss(c);
  const EntropyDeficit deficit = entropy_deficit(c);
  OJson j{{"kind", "disjoint-primes"},
          {"n", c.n},
          {"modulus", c.modulus},
          {"residue_x", c.residue_x},
          {"residue_y", c.residue_y},
          {"size_x", c.set_x.size()},
          {"size_y", c.set_y.size()},
          {"set_x", c.set_x},
          {"set_y", c.set_y},
          {"equivocation", equivocation_report_json(report, with_timings)},
          {"entropy_deficit",
           {{"x_bits", deficit.x_bits}, {"y_bits", deficit.y_bits}}}};
  if (with_atoms) {
    if (c.joint.atom_count() > kJsonEntryGuard) {
      throw std::invalid_argument(
          "construct: --with-atoms capped at 5e6 atoms");
    }
    j["atoms"] = joint_json(c.joint)["atoms"];
  }
  return j;
}

OJson primorial_json(const PrimorialConstruction& c, unsigned parallelism,
                     bool with_atoms) {
  OJson j{{"kind", "primorial"},
          {"n", c.n},
          {"k", c.k},
          {"primorial", c.primorial},
          {"prime_set", c.prime_set},
          {"divisor_set", c.divisor_set},
          {"equivocation_bits",
           primorial_equivocation(c, PrimorialMode::closed_form)}};
  if (c.k <= 13) {
    j["brute_force_bits"] =
        primorial_equivocation(c, PrimorialMode::brute_force, parallelism);
  }
  if (with_atoms) {
    if (c.joint.atom_count() > kJsonEntryGuard) {
      throw std::invalid_argument(
          "construct: --with-atoms capped at 5e6 atoms");
    }
    j["atoms"] = joint_json(c.joint)["atoms"];
  }
  return j;
}

int cmd_construct(const RunConfig& config) {
  const std::uint64_t n = single_n(config, "construct");
  if (!config.construction.has_value()) {
    throw std::invalid_argument(
        "construct requires --disjoint-primes or --primorial");
  }
  if (*config.construction == ConstructionKind::disjoint_primes) {
    const FactorSieve sieve(std::max<std::uint64_t>(n, 2));
    const DisjointPrimeConstruction c = build_disjoint_prime(
        n, sieve, config.residue_x, config.residue_y, config.modulus);
    if (config.format == OutputFormat::csv) {
      emit(config, joint_csv(c.joint));
    } else {
      emit(config, dump(disjoint_prime_json(c, config.with_atoms,
                                            config.with_timings)));
    }
  } else {
    // Primes up to 64 multiply past 2^64, which covers primorial_index for
    // any representable n.
    const FactorSieve sieve(64);
    const PrimorialConstruction c = build_primorial(n, sieve);
    if (config.format == OutputFormat::csv) {
      if (c.joint.atom_count() > kJsonEntryGuard) {
        throw std::invalid_argument(
            "construct: divisor-pair dump capped at 5e6 atoms");
      }
      emit(config, joint_csv(c.joint));
    } else {
      emit(config,
           dump(primorial_json(c, config.parallelism, config.with_atoms)));
    }
  }
  return 0;
}

struct HRSuite {
  HRConstants constants{};
  std::uint64_t fit_x_max = 0;
  std::vector<BoundCheckRecord> records;
};

HRSuite run_hr_suite(std::span<const std::uint64_t> grid,
                     const ArithmeticTables& tables) {
  HRSuite suite;
  suite.fit_x_max = std::min<std::uint64_t>(tables.limit(), 1'000'000);
  suite.constants = fit_hardy_ramanujan_constants(tables, suite.fit_x_max);
  suite.records = hardy_ramanujan_check_fitted(grid, suite.constants, tables);
  std::vector<BoundCheckRecord> capped =
      hardy_ramanujan_check(grid, suite.constants, tables);
  suite.records.insert(suite.records.end(),
                       std::make_move_iterator(capped.begin()),
                       std::make_move_iterator(capped.end()));
  return suite;
}

int cmd_bounds_hr(const RunConfig& config) {
  const std::vector<std::uint64_t> grid =
      grid_or(config, log_grid(10, 1'000'000, 50));
  const FactorSieve sieve(std::max<std::uint64_t>(grid.back(), 2));
  const ArithmeticTables tables(sieve);
  const HRSuite suite = run_hr_suite(grid, tables);
  if (config.format == OutputFormat::csv) {
    emit(config, bound_records_csv(suite.records));
  } else {
    emit(config, dump(OJson{{"suite", "hr"},
                            {"constants",
                             {{"L", suite.constants.L},
                              {"D", suite.constants.D},
                              {"M", suite.constants.M},
                              {"fit_x_max", suite.fit_x_max}}},
                            {"records", bound_records_json(suite.records)}}));
  }
  return suite_status(suite.records);
}

int cmd_bounds_chain(const RunConfig& config) {
  const std::vector<std::uint64_t> grid =
      grid_or(config, {16, 64, 256, 1024, 4096});
  std::uint64_t sieve_limit = 2;
  for (std::uint64_t n : grid) {
    sieve_limit = std::max(sieve_limit, n <= 1024 ? n * n : n);
  }
  const FactorSieve sieve(sieve_limit);
  const ArithmeticTables tables(sieve);
  std::vector<BoundCheckRecord> records;
  for (std::uint64_t n : grid) {
    std::vector<BoundCheckRecord> part =
        upper_bound_chain(n, tables, config.parallelism);
    records.insert(records.end(), std::make_move_iterator(part.begin()),
                   std::make_move_iterator(part.end()));
  }
  if (config.format == OutputFormat::csv) {
    emit(config, bound_records_csv(records));
  } else {
    emit(config, dump(OJson{{"suite", "chain"},
                            {"records", bound_records_json(records)}}));
  }
  return suite_status(records);
}

int cmd_bounds_dirichlet(const RunConfig& config) {
  const std::vector<std::uint64_t> grid =
      grid_or(config, log_grid(1'000, 10'000'000, 40));
  const FactorSieve sieve(grid.back());
  const ArithmeticTables tables(sieve);
  std::vector<DirichletAverage> averages;
  std::vector<BoundCheckRecord> records;
  for (std::uint64_t n : grid) {
    averages.push_back(dirichlet_average(n, tables));
    records.push_back(make_bound_record(
        "divisor-average-residual n=" + std::to_string(n), n,
        std::abs(averages.back().residual), 2.0));
  }
  if (config.format == OutputFormat::csv) {
    emit(config, bound_records_csv(records));
  } else {
    OJson avg_json = OJson::array();
    for (const DirichletAverage& a : averages) {
      avg_json.push_back(dirichlet_average_json(a));
    }
    emit(config, dump(OJson{{"suite", "dirichlet"},
                            {"averages", std::move(avg_json)},
                            {"records", bound_records_json(records)}}));
  }
  return suite_status(records);
}

int cmd_bounds_split(const RunConfig& config) {
  const std::vector<std::uint64_t> grid =
      grid_or(config, {16, 64, 256, 1024});
  const std::vector<double> deltas =
      config.delta.has_value() ? std::vector<double>{*config.delta}
                               : std::vector<double>{0.05, 0.10, 0.15};
  const std::uint64_t max_n = grid.back();
  const FactorSieve sieve(max_n * max_n);
  const ArithmeticTables tables(sieve);
  std::vector<SplitCounts> counts;
  std::vector<BoundCheckRecord> records;
  for (std::uint64_t n : grid) {
    const std::uint64_t m = distinct_products(n);
    for (double delta : deltas) {
      counts.push_back(product_split_counts(n, delta, tables));
      const SplitCounts& c = counts.back();
      records.push_back(make_bound_record(
          "table-split-containment n=" + std::to_string(n) + " delta=" +
              format_double(delta),
          n, static_cast<double>(m),
          static_cast<double>(c.m1 + c.m2 + c.m3)));
    }
  }
  if (config.format == OutputFormat::csv) {
    emit(config, bound_records_csv(records));
  } else {
    OJson counts_json = OJson::array();
    for (const SplitCounts& c : counts) counts_json.push_back(split_counts_json(c));
    emit(config, dump(OJson{{"suite", "split"},
                            {"counts", std::move(counts_json)},
                            {"records", bound_records_json(records)}}));
  }
  return suite_status(records);
}

std::vector<BoundCheckRecord> growth_records(const GrowthFit& fit) {
  std::vector<BoundCheckRecord> records;
  const std::uint64_t n_max = fit.grid.back();
  records.push_back(
      make_bound_record("growth-slope>=0.1", n_max, 0.1, fit.slope));
  records.push_back(
      make_bound_record("growth-slope<=3.0", n_max, fit.slope, 3.0));
  return records;
}

int cmd_bounds_growth(const RunConfig& config) {
  const std::vector<std::uint64_t> grid = grid_or(config, pow2_grid(4, 14));
  const GrowthFit fit = growth_fit(grid, config.parallelism);
  const std::vector<BoundCheckRecord> records = growth_records(fit);
  if (config.format == OutputFormat::csv) {
    emit(config, bound_records_csv(records));
  } else {
    emit(config, dump(OJson{{"suite", "growth"},
                            {"fit", growth_fit_json(fit)},
                            {"records", bound_records_json(records)}}));
  }
  return suite_status(records);
}

int cmd_bounds(const RunConfig& config) {
  if (!config.suite.has_value()) {
    throw std::invalid_argument("bounds requires --suite");
  }
  switch (*config.suite) {
    case BoundsSuite::hr: return cmd_bounds_hr(config);
    case BoundsSuite::chain: return cmd_bounds_chain(config);
    case BoundsSuite::dirichlet: return cmd_bounds_dirichlet(config);
    case BoundsSuite::split: return cmd_bounds_split(config);
    case BoundsSuite::growth: return cmd_bounds_growth(config);
  }
  throw std::logic_error("unreachable suite");
}

int cmd_report(const RunConfig& config) {
  if (config.format == OutputFormat::csv) {
    throw std::invalid_argument("report emits a JSON bundle; drop --format csv");
  }
  Timings timings(config.with_timings);
  constexpr std::uint64_t kTableLimit = std::uint64_t{1} << 20;
  constexpr std::uint64_t kPrimeScanMax = 1'000'000;

  const FactorSieve sieve = timings.section(
      "sieve_build", [&] { return FactorSieve(kTableLimit); });
  const ArithmeticTables tables = timings.section(
      "tables_build", [&] { return ArithmeticTables(sieve); });

  // Echoes only the semantic inputs: parallelism and output path may differ
  // between runs that must still produce identical bytes.
  OJson config_json{{"command", "report"},
                    {"grid", config.grid},
                    {"delta", nullptr},
                    {"format", "json"},
                    {"seed", config.seed}};
  if (config.delta.has_value()) config_json["delta"] = *config.delta;

  OJson results = OJson::object();
  std::vector<BoundCheckRecord> all_records;
  auto absorb = [&](std::span<const BoundCheckRecord> records) {
    all_records.insert(all_records.end(), records.begin(), records.end());
  };

  results["alpha"] = alpha_constant();

  {
    const HRSuite hr = timings.section("hardy_ramanujan", [&] {
      const std::vector<std::uint64_t> grid = log_grid(10, kPrimeScanMax, 50);
      return run_hr_suite(grid, tables);
    });
    results["hardy_ramanujan_constants"] = {{"L", hr.constants.L},
                                            {"D", hr.constants.D},
                                            {"M", hr.constants.M},
                                            {"fit_x_max", hr.fit_x_max}};
    results["bound_suites"] = OJson::object();
    results["bound_suites"]["hardy_ramanujan"] =
        bound_records_json(hr.records);
    absorb(hr.records);
  }

  {
    const std::vector<std::uint64_t> grid =
        grid_or(config, {16, 64, 256, 1024, 4096});
    std::vector<UniformProductStats> rows = timings.section("scan", [&] {
      std::vector<UniformProductStats> out;
      for (std::uint64_t n : grid) {
        out.push_back(uniform_product_stats(n, config.parallelism));
      }
      return out;
    });
    OJson scan = scan_json(rows);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].n >= 3) {
        scan[i]["erdos_ratio"] =
            erdos_ratio_from(rows[i].distinct_products, rows[i].n);
      }
    }
    results["scan"] = std::move(scan);
  }

  {
    std::vector<BoundCheckRecord> records = timings.section("chain", [&] {
      std::vector<BoundCheckRecord> out;
      for (std::uint64_t n : {std::uint64_t{16}, std::uint64_t{64},
                              std::uint64_t{256}, std::uint64_t{1024}}) {
        std::vector<BoundCheckRecord> part =
            upper_bound_chain(n, tables, config.parallelism);
        out.insert(out.end(), std::make_move_iterator(part.begin()),
                   std::make_move_iterator(part.end()));
      }
      return out;
    });
    results["bound_suites"]["chain"] = bound_records_json(records);
    absorb(records);
  }

  {
    const std::vector<std::uint64_t> grid = {1'000, 10'000, 100'000,
                                             1'000'000};
    OJson averages = OJson::array();
    std::vector<BoundCheckRecord> records;
    timings.section("dirichlet", [&] {
      for (std::uint64_t n : grid) {
        const DirichletAverage avg = dirichlet_average(n, tables);
        averages.push_back(dirichlet_average_json(avg));
        records.push_back(make_bound_record(
            "divisor-average-residual n=" + std::to_string(n), n,
            std::abs(avg.residual), 2.0));
      }
    });
    results["bound_suites"]["dirichlet"] = {
        {"averages", std::move(averages)},
        {"records", bound_records_json(records)}};
    absorb(records);
  }

  {
    OJson counts_json = OJson::array();
    std::vector<BoundCheckRecord> records;
    timings.section("split", [&] {
      for (std::uint64_t n : {std::uint64_t{16}, std::uint64_t{64},
                              std::uint64_t{256}, std::uint64_t{1024}}) {
        const std::uint64_t m = distinct_products(n);
        for (double delta : {0.05, 0.10, 0.15}) {
          const SplitCounts c = product_split_counts(n, delta, tables);
          counts_json.push_back(split_counts_json(c));
          records.push_back(make_bound_record(
              "table-split-containment n=" + std::to_string(n) + " delta=" +
                  format_double(delta),
              n, static_cast<double>(m),
              static_cast<double>(c.m1 + c.m2 + c.m3)));
        }
      }
    });
    results["bound_suites"]["split"] = {
        {"counts", std::move(counts_json)},
        {"records", bound_records_json(records)}};
    absorb(records);
  }

  {
    const GrowthFit fit = timings.section(
        "growth", [&] { return growth_fit(pow2_grid(4, 14),
                                          config.parallelism); });
    const std::vector<BoundCheckRecord> records = growth_records(fit);
    results["bound_suites"]["growth"] = {
        {"fit", growth_fit_json(fit)},
        {"records", bound_records_json(records)}};
    absorb(records);
  }

  {
    OJson constructions = OJson::object();
    timings.section("constructions", [&] {
      const DisjointPrimeConstruction dp = build_disjoint_prime(1'000, sieve);
      constructions["disjoint_primes"] =
          disjoint_prime_json(dp, false, config.with_timings);
      const PrimorialConstruction pc = build_primorial(kPrimeScanMax, sieve);
      constructions["primorial"] =
          primorial_json(pc, config.parallelism, false);
    });
    results["constructions"] = std::move(constructions);
  }

  {
    OJson prime_sums = OJson::object();
    timings.section("prime_sums", [&] {
      const double mertens = sieve.mertens_log_sum(kPrimeScanMax);
      prime_sums["mertens"] = {
          {"x_max", kPrimeScanMax},
          {"sum", mertens},
          {"deviation_from_ln_x",
           mertens - std::log(static_cast<double>(kPrimeScanMax))}};
      prime_sums["progression_log_sums"] = {
          {"modulus", 4},
          {"x_max", kPrimeScanMax},
          {"class_1",
           {{"sum", sieve.shapiro_sum(kPrimeScanMax, 1, 4)},
            {"sup_abs_deviation",
             progression_sup_deviation(sieve, 1, 4, kPrimeScanMax)}}},
          {"class_3",
           {{"sum", sieve.shapiro_sum(kPrimeScanMax, 3, 4)},
            {"sup_abs_deviation",
             progression_sup_deviation(sieve, 3, 4, kPrimeScanMax)}}}};
      prime_sums["chebyshev_theta_over_x"] = {
          {"x_max", kPrimeScanMax},
          {"ratio", sieve.chebyshev_theta(kPrimeScanMax) /
                        static_cast<double>(kPrimeScanMax)}};
    });
    results["prime_sums"] = std::move(prime_sums);
  }

  OJson bundle{{"config", std::move(config_json)},
               {"sieve_limits",
                {{"factor_sieve", sieve.limit()}, {"tables", tables.limit()}}},
               {"results", std::move(results)},
               {"timings", timings.to_json()}};
  emit(config, dump(bundle));
  return suite_status(all_records);
}

void validate(const RunConfig& config) {
  if (config.parallelism < 1) {
    throw std::invalid_argument("parallelism must be >= 1");
  }
  for (std::size_t i = 0; i < config.grid.size(); ++i) {
    if (config.grid[i] == 0) {
      throw std::invalid_argument("grid entries must be positive");
    }
    if (i > 0 && config.grid[i] <= config.grid[i - 1]) {
      throw std::invalid_argument("grid entries must be strictly increasing");
    }
  }
  if (config.delta.has_value() &&
      (!(*config.delta > 0.0) || !(*config.delta < 1.0 / 6.0))) {
    throw std::invalid_argument("delta must lie in (0, 1/6)");
  }
}

}  // namespace

int run(const RunConfig& config) {
  try {
    validate(config);
    if (config.table_cap_override != 0) {
      set_table_side_cap(config.table_cap_override);
    }
    switch (config.command) {
      case Command::scan: return cmd_scan(config);
      case Command::table: return cmd_table(config);
      case Command::construct: return cmd_construct(config);
      case Command::bounds: return cmd_bounds(config);
      case Command::report: return cmd_report(config);
    }
    throw std::logic_error("unreachable command");
  } catch (const std::length_error& e) {
    std::cerr << "error (size): " << e.what() << '\n';
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error (arguments): " << e.what() << '\n';
    return 2;
  } catch (const std::out_of_range& e) {
    std::cerr << "error (arguments): " << e.what() << '\n';
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "error (arguments): " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 4;
  }
}

}  // namespace mulinfo
