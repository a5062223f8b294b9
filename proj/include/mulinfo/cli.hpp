#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace mulinfo {

enum class Command { scan, table, construct, bounds, report };
enum class OutputFormat { csv, json };
enum class BoundsSuite { hr, chain, dirichlet, split, growth };
enum class ConstructionKind { disjoint_primes, primorial };

/// Fully describes one invocation. Identical configs (and build) yield
/// byte-identical output files for any parallelism degree.
struct RunConfig {
  Command command = Command::scan;
  std::vector<std::uint64_t> grid;  // empty: per-command default
  std::optional<double> delta;
  std::string output_path;          // empty: stdout
  OutputFormat format = OutputFormat::csv;
  unsigned parallelism = 1;
  std::uint64_t seed = 0;           // echoed into reports for sweep reruns
  std::optional<BoundsSuite> suite;
  std::optional<ConstructionKind> construction;
  std::uint64_t modulus = 4;        // construct --disjoint-primes classes
  std::uint64_t residue_x = 1;
  std::uint64_t residue_y = 3;
  bool with_atoms = false;
  bool with_timings = false;        // measured timings break byte-determinism
  std::uint64_t table_cap_override = 0;  // 0: keep default
};

/// Dispatches the command and writes output atomically.
/// Exit status: 0 success; 1 a non-skipped bound record failed; 2 invalid
/// configuration or arguments; 3 a size cap was exceeded; 4 internal error.
int run(const RunConfig& config);

}  // namespace mulinfo
