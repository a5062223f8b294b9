#pragma once

#include <span>
#include <string>
#include <string_view>

#include <json.hpp>

#include "mulinfo/bounds.hpp"
#include "mulinfo/constructions.hpp"
#include "mulinfo/entropy.hpp"
#include "mulinfo/multtable.hpp"

namespace mulinfo {

/// 17 significant digits, round-trip exact, locale-independent.
std::string format_double(double v);

/// Writes via a temp file in the same directory plus rename, so readers
/// never observe a partial file. Creates missing parent directories.
void write_file_atomic(const std::string& path, std::string_view content);

std::string distribution_csv(const FiniteDistribution& dist);
std::string joint_csv(const JointPairDistribution& joint);
std::string multiplicity_csv(const MultiplicityTable& table);
std::string scan_csv(std::span<const UniformProductStats> rows);
std::string bound_records_csv(std::span<const BoundCheckRecord> records);

nlohmann::ordered_json distribution_json(const FiniteDistribution& dist);
nlohmann::ordered_json joint_json(const JointPairDistribution& joint);
nlohmann::ordered_json equivocation_report_json(const EquivocationReport& report,
                                                bool include_elapsed = false);
nlohmann::ordered_json bound_records_json(
    std::span<const BoundCheckRecord> records);
nlohmann::ordered_json scan_json(std::span<const UniformProductStats> rows);
nlohmann::ordered_json multiplicity_json(const MultiplicityTable& table);
nlohmann::ordered_json split_counts_json(const SplitCounts& counts);
nlohmann::ordered_json growth_fit_json(const GrowthFit& fit);
nlohmann::ordered_json dirichlet_average_json(const DirichletAverage& avg);

}  // namespace mulinfo
