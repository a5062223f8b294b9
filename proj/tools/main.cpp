#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mulinfo/cli.hpp"

namespace {

void add_output_options(CLI::App* cmd, mulinfo::RunConfig& config) {
  cmd->add_option("-o,--out", config.output_path,
                  "Output file (default: stdout)");
  std::map<std::string, mulinfo::OutputFormat> formats{
      {"csv", mulinfo::OutputFormat::csv},
      {"json", mulinfo::OutputFormat::json}};
  cmd->add_option("--format", config.format, "Output format")
      ->transform(CLI::CheckedTransformer(formats, CLI::ignore_case));
}

void add_parallelism_option(CLI::App* cmd, mulinfo::RunConfig& config) {
  cmd->add_option("-j,--parallelism", config.parallelism,
                  "Worker threads (results are byte-identical regardless)")
      ->check(CLI::Range(1u, 256u));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Exact information loss of integer multiplication: table scans, "
      "extremal constructions, and bound suites"};
  app.require_subcommand(1);
  app.footer(
      "Environment: MULINFO_SIEVE_CAP overrides the sieve memory cap "
      "(entries; default 2^28).");

  mulinfo::RunConfig config;

  CLI::App* scan = app.add_subcommand(
      "scan", "Distinct products, product entropy, and equivocation of the "
              "uniform n-by-n table over a grid of n");
  scan->add_option("--grid", config.grid,
                   "Comma-separated n values (default 16,64,256,1024,4096)")
      ->delimiter(',');
  add_output_options(scan, config);
  add_parallelism_option(scan, config);
  scan->add_option("--table-cap", config.table_cap_override,
                   "Raise the table side cap (default 2^14, max 2^20)");
  scan->callback([&] { config.command = mulinfo::Command::scan; });

  CLI::App* table = app.add_subcommand(
      "table", "Dump the sparse multiplicity table (z, r) of {1..n}^2");
  table->add_option("--n", config.grid, "Table side")->required()
      ->expected(1);
  add_output_options(table, config);
  table->add_option("--table-cap", config.table_cap_override,
                    "Raise the table side cap (default 2^14, max 2^20)");
  table->callback([&] { config.command = mulinfo::Command::table; });

  CLI::App* construct = app.add_subcommand(
      "construct", "Build an extremal support: zero loss (disjoint prime "
                   "classes) or maximal loss (primorial divisors)");
  construct->add_option("--n", config.grid, "Size bound for the support")
      ->required()
      ->expected(1);
  bool disjoint = false;
  bool primorial = false;
  construct->add_flag("--disjoint-primes", disjoint,
                      "Primes in two residue classes; equivocation 0");
  construct->add_flag("--primorial", primorial,
                      "Squarefree primorial divisors; equivocation k/2");
  construct->add_option("--modulus", config.modulus,
                        "Residue modulus for --disjoint-primes (default 4)");
  construct->add_option("--residue-x", config.residue_x,
                        "Residue class of X (default 1)");
  construct->add_option("--residue-y", config.residue_y,
                        "Residue class of Y (default 3)");
  construct->add_flag("--with-atoms", config.with_atoms,
                      "Embed the full atom list in JSON output");
  add_output_options(construct, config);
  add_parallelism_option(construct, config);
  construct->callback([&] {
    config.command = mulinfo::Command::construct;
    if (disjoint == primorial) {
      throw CLI::ValidationError(
          "pass exactly one of --disjoint-primes, --primorial");
    }
    config.construction = disjoint
                              ? mulinfo::ConstructionKind::disjoint_primes
                              : mulinfo::ConstructionKind::primorial;
  });

  CLI::App* bounds = app.add_subcommand(
      "bounds", "Check one inequality suite and report pass/fail records");
  std::map<std::string, mulinfo::BoundsSuite> suites{
      {"hr", mulinfo::BoundsSuite::hr},
      {"chain", mulinfo::BoundsSuite::chain},
      {"dirichlet", mulinfo::BoundsSuite::dirichlet},
      {"split", mulinfo::BoundsSuite::split},
      {"growth", mulinfo::BoundsSuite::growth}};
  mulinfo::BoundsSuite suite_value{};
  CLI::Option* suite_opt =
      bounds
          ->add_option("--suite", suite_value,
                       "One of: hr, chain, dirichlet, split, growth")
          ->required()
          ->transform(CLI::CheckedTransformer(suites, CLI::ignore_case));
  bounds->add_option("--grid", config.grid,
                     "Comma-separated sizes (default depends on suite)")
      ->delimiter(',');
  double delta_value = 0.0;
  CLI::Option* delta_opt = bounds->add_option(
      "--delta", delta_value, "Split parameter in (0, 1/6); default sweeps "
                              "0.05, 0.10, 0.15");
  add_output_options(bounds, config);
  add_parallelism_option(bounds, config);
  bounds->callback([&] {
    config.command = mulinfo::Command::bounds;
    if (suite_opt->count() > 0) config.suite = suite_value;
    if (delta_opt->count() > 0) config.delta = delta_value;
  });

  CLI::App* report = app.add_subcommand(
      "report", "Run every suite and emit one JSON bundle");
  report->add_option("--grid", config.grid,
                     "Scan grid inside the bundle (default 16,...,4096)")
      ->delimiter(',');
  report->add_option("-o,--out", config.output_path,
                     "Output file (default: stdout)");
  add_parallelism_option(report, config);
  report->add_option("--seed", config.seed,
                     "Echoed into the bundle for sweep reproduction");
  report->add_flag("--with-timings", config.with_timings,
                   "Include measured section timings (breaks byte-identical "
                   "reproducibility)");
  report->callback([&] {
    config.command = mulinfo::Command::report;
    config.format = mulinfo::OutputFormat::json;
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  return mulinfo::run(config);
}
