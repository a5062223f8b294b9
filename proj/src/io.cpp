#include "mulinfo/io.hpp"

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <system_error>

namespace mulinfo {

namespace {

const char* method_name(EquivMethod method) {
  return method == EquivMethod::difference ? "difference" : "grouping";
}

void append_record_csv(std::string& out, const BoundCheckRecord& r) {
  out += r.label;
  out += ',';
  out += std::to_string(r.input_size);
  out += ',';
  out += format_double(r.lhs);
  out += ',';
  out += format_double(r.rhs);
  out += ',';
  out += format_double(r.slack);
  out += ',';
  out += r.pass ? "true" : "false";
  out += '\n';
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v,
                           std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

void write_file_atomic(const std::string& path, std::string_view content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  if (target.has_parent_path()) {
    fs::create_directories(target.parent_path());
  }
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) {
      throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    }
    out.write(content.data(),
              static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) {
      throw std::runtime_error("failed writing " + tmp.string());
    }
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp);
    throw std::runtime_error("failed to move " + tmp.string() + " into place: " +
                             ec.message());
  }
}

std::string distribution_csv(const FiniteDistribution& dist) {
  std::string out = "value,probability\n";
  for (const Atom& a : dist.atoms()) {
    out += std::to_string(a.value);
    out += ',';
    out += format_double(a.probability);
    out += '\n';
  }
  return out;
}

std::string joint_csv(const JointPairDistribution& joint) {
  if (joint.atom_count() > atom_cap()) {
    throw std::length_error("joint_csv: support exceeds atom cap");
  }
  std::string out = "x,y,probability\n";
  joint.for_each_atom([&](const PairAtom& a) {
    out += std::to_string(a.x);
    out += ',';
    out += std::to_string(a.y);
    out += ',';
    out += format_double(a.probability);
    out += '\n';
  });
  return out;
}

std::string multiplicity_csv(const MultiplicityTable& table) {
  std::string out = "z,r\n";
  for (const MultiplicityEntry& e : table.entries) {
    out += std::to_string(e.product);
    out += ',';
    out += std::to_string(e.multiplicity);
    out += '\n';
  }
  return out;
}

std::string scan_csv(std::span<const UniformProductStats> rows) {
  std::string out = "N,m,H_product,equivocation\n";
  for (const UniformProductStats& row : rows) {
    out += std::to_string(row.n);
    out += ',';
    out += std::to_string(row.distinct_products);
    out += ',';
    out += format_double(row.product_entropy_bits);
    out += ',';
    out += format_double(row.equivocation_bits);
    out += '\n';
  }
  return out;
}

std::string bound_records_csv(std::span<const BoundCheckRecord> records) {
  std::string out = "label,input_size,lhs,rhs,slack,pass\n";
  for (const BoundCheckRecord& r : records) append_record_csv(out, r);
  return out;
}

nlohmann::ordered_json distribution_json(const FiniteDistribution& dist) {
  nlohmann::ordered_json atoms = nlohmann::ordered_json::array();
  for (const Atom& a : dist.atoms()) {
    atoms.push_back({{"value", a.value}, {"probability", a.probability}});
  }
  return {{"atoms", std::move(atoms)}};
}

nlohmann::ordered_json joint_json(const JointPairDistribution& joint) {
  if (joint.atom_count() > atom_cap()) {
    throw std::length_error("joint_json: support exceeds atom cap");
  }
  nlohmann::ordered_json atoms = nlohmann::ordered_json::array();
  joint.for_each_atom([&](const PairAtom& a) {
    atoms.push_back({{"x", a.x}, {"y", a.y}, {"probability", a.probability}});
  });
  return {{"atoms", std::move(atoms)}};
}

nlohmann::ordered_json equivocation_report_json(const EquivocationReport& report,
                                                bool include_elapsed) {
  nlohmann::ordered_json j{{"descriptor", report.descriptor},
                           {"h_joint_bits", report.joint_entropy_bits},
                           {"h_product_bits", report.product_entropy_bits},
                           {"equivocation_bits", report.equivocation_bits},
                           {"method", method_name(report.method)}};
  if (include_elapsed) {
    j["elapsed_ms"] = report.elapsed.count();
  }
  return j;
}

nlohmann::ordered_json bound_records_json(
    std::span<const BoundCheckRecord> records) {
  nlohmann::ordered_json out = nlohmann::ordered_json::array();
  for (const BoundCheckRecord& r : records) {
    out.push_back({{"label", r.label},
                   {"input_size", r.input_size},
                   {"lhs", r.lhs},
                   {"rhs", r.rhs},
                   {"slack", r.slack},
                   {"pass", r.pass},
                   {"skipped", r.skipped}});
  }
  return out;
}

nlohmann::ordered_json scan_json(std::span<const UniformProductStats> rows) {
  nlohmann::ordered_json out = nlohmann::ordered_json::array();
  for (const UniformProductStats& row : rows) {
    nlohmann::ordered_json j{{"n", row.n},
                             {"distinct_products", row.distinct_products},
                             {"h_product_bits", row.product_entropy_bits},
                             {"equivocation_bits", row.equivocation_bits}};
    if (row.has_divisor_average) {
      j["mean_log2_divisor_count"] = row.avg_log2_divisor_count;
    }
    out.push_back(std::move(j));
  }
  return out;
}

nlohmann::ordered_json multiplicity_json(const MultiplicityTable& table) {
  nlohmann::ordered_json entries = nlohmann::ordered_json::array();
  for (const MultiplicityEntry& e : table.entries) {
    entries.push_back({{"z", e.product}, {"r", e.multiplicity}});
  }
  return {{"n", table.n}, {"entries", std::move(entries)}};
}

nlohmann::ordered_json split_counts_json(const SplitCounts& counts) {
  return {{"n", counts.n},
          {"delta", counts.delta},
          {"m1", counts.m1},
          {"m2", counts.m2},
          {"m3", counts.m3}};
}

nlohmann::ordered_json growth_fit_json(const GrowthFit& fit) {
  nlohmann::ordered_json points = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < fit.grid.size(); ++i) {
    points.push_back({{"n", fit.grid[i]},
                      {"log2_log2_n", fit.predictor[i]},
                      {"equivocation_bits", fit.observed[i]},
                      {"residual", fit.residuals[i]}});
  }
  return {{"slope", fit.slope},
          {"intercept", fit.intercept},
          {"points", std::move(points)}};
}

nlohmann::ordered_json dirichlet_average_json(const DirichletAverage& avg) {
  return {{"n", avg.n},
          {"average", avg.average},
          {"residual", avg.residual}};
}

}  // namespace mulinfo
