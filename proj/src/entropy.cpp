#include "mulinfo/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>

#include "mulinfo/util.hpp"

namespace mulinfo {

namespace {

std::uint64_t g_atom_cap = std::uint64_t{1} << 30;

constexpr double kNormalizationTol = 1e-12;

void check_cap(std::uint64_t count, const char* what) {
  if (count > g_atom_cap) {
    throw std::length_error(std::string(what) + ": support size " +
                            std::to_string(count) + " exceeds atom cap " +
                            std::to_string(g_atom_cap));
  }
}

double checked_sum_to_one(const auto& atoms, const char* what) {
  CompensatedSum total;
  for (const auto& a : atoms) {
    if (!(a.probability > 0.0)) {
      throw std::invalid_argument(std::string(what) +
                                  ": probabilities must be strictly positive");
    }
    total.add(a.probability);
  }
  double sum = total.value();
  if (std::abs(sum - 1.0) > kNormalizationTol) {
    throw std::invalid_argument(std::string(what) +
                                ": probabilities sum to " +
                                std::to_string(sum) + ", not 1");
  }
  return sum;
}

// Multiplies with an overflow check; pair probabilities live on values that
// stay inside uint64.
std::uint64_t checked_product(std::uint64_t x, std::uint64_t y) {
  if (x != 0 && y > std::numeric_limits<std::uint64_t>::max() / x) {
    throw std::overflow_error("pair product overflows 64 bits");
  }
  return x * y;
}

template <class Fn>
void visit_atoms(const JointPairDistribution& joint, Fn&& fn) {
  if (joint.has_product_form()) {
    for (const Atom& ax : joint.marginal_x().atoms()) {
      for (const Atom& ay : joint.marginal_y().atoms()) {
        fn(PairAtom{ax.value, ay.value, ax.probability * ay.probability});
      }
    }
  } else {
    std::vector<PairAtom> copy = joint.materialize_atoms();
    for (const PairAtom& a : copy) fn(a);
  }
}

struct ProductRecord {
  std::uint64_t product;
  double probability;
};

// All (x*y, p) records sorted by product; ties keep (x, y) lexicographic
// order, so downstream floating-point sums are reproducible.
std::vector<ProductRecord> product_records(const JointPairDistribution& joint) {
  check_cap(joint.atom_count(), "pushforward_product");
  std::vector<ProductRecord> records;
  records.reserve(static_cast<std::size_t>(joint.atom_count()));
  visit_atoms(joint, [&](const PairAtom& a) {
    records.push_back({checked_product(a.x, a.y), a.probability});
  });
  std::stable_sort(records.begin(), records.end(),
                   [](const ProductRecord& a, const ProductRecord& b) {
                     return a.product < b.product;
                   });
  return records;
}

}  // namespace

std::uint64_t atom_cap() { return g_atom_cap; }

void set_atom_cap(std::uint64_t cap) {
  if (cap == 0) throw std::invalid_argument("atom cap must be positive");
  g_atom_cap = cap;
}

FiniteDistribution FiniteDistribution::from_atoms(std::vector<Atom> atoms) {
  if (atoms.empty()) {
    throw std::invalid_argument("FiniteDistribution: empty support");
  }
  check_cap(atoms.size(), "FiniteDistribution");
  std::sort(atoms.begin(), atoms.end(),
            [](const Atom& a, const Atom& b) { return a.value < b.value; });
  std::vector<Atom> merged;
  merged.reserve(atoms.size());
  for (const Atom& a : atoms) {
    if (!merged.empty() && merged.back().value == a.value) {
      merged.back().probability += a.probability;
    } else {
      merged.push_back(a);
    }
  }
  checked_sum_to_one(merged, "FiniteDistribution");
  return FiniteDistribution(std::move(merged));
}

FiniteDistribution FiniteDistribution::uniform(
    std::vector<std::uint64_t> values) {
  if (values.empty()) {
    throw std::invalid_argument("FiniteDistribution::uniform: empty support");
  }
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  check_cap(values.size(), "FiniteDistribution::uniform");
  const double p = 1.0 / static_cast<double>(values.size());
  std::vector<Atom> atoms;
  atoms.reserve(values.size());
  for (std::uint64_t v : values) atoms.push_back({v, p});
  return FiniteDistribution(std::move(atoms));
}

FiniteDistribution FiniteDistribution::point_mass(std::uint64_t value) {
  return FiniteDistribution({{value, 1.0}});
}

double entropy_bits(const FiniteDistribution& dist) {
  CompensatedSum h;
  for (const Atom& a : dist.atoms()) {
    h.add(-a.probability * std::log2(a.probability));
  }
  return h.value();
}

JointPairDistribution JointPairDistribution::from_atoms(
    std::vector<PairAtom> atoms) {
  if (atoms.empty()) {
    throw std::invalid_argument("JointPairDistribution: empty support");
  }
  check_cap(atoms.size(), "JointPairDistribution");
  std::sort(atoms.begin(), atoms.end(),
            [](const PairAtom& a, const PairAtom& b) {
              return std::pair(a.x, a.y) < std::pair(b.x, b.y);
            });
  std::vector<PairAtom> merged;
  merged.reserve(atoms.size());
  for (const PairAtom& a : atoms) {
    if (!merged.empty() && merged.back().x == a.x && merged.back().y == a.y) {
      merged.back().probability += a.probability;
    } else {
      merged.push_back(a);
    }
  }
  checked_sum_to_one(merged, "JointPairDistribution");
  JointPairDistribution joint;
  joint.atoms_ = std::move(merged);
  return joint;
}

JointPairDistribution joint_from_independent(FiniteDistribution dx,
                                             FiniteDistribution dy) {
  check_cap(static_cast<std::uint64_t>(dx.size()) * dy.size(),
            "joint_from_independent");
  JointPairDistribution joint;
  joint.product_.emplace(std::move(dx), std::move(dy));
  return joint;
}

const FiniteDistribution& JointPairDistribution::marginal_x() const {
  if (!product_) {
    throw std::logic_error("marginal_x: joint is not in product form");
  }
  return product_->first;
}

const FiniteDistribution& JointPairDistribution::marginal_y() const {
  if (!product_) {
    throw std::logic_error("marginal_y: joint is not in product form");
  }
  return product_->second;
}

std::uint64_t JointPairDistribution::atom_count() const {
  if (product_) {
    return static_cast<std::uint64_t>(product_->first.size()) *
           product_->second.size();
  }
  return atoms_.size();
}

void JointPairDistribution::for_each_atom(
    const std::function<void(const PairAtom&)>& fn) const {
  if (product_) {
    for (const Atom& ax : product_->first.atoms()) {
      for (const Atom& ay : product_->second.atoms()) {
        fn(PairAtom{ax.value, ay.value, ax.probability * ay.probability});
      }
    }
  } else {
    for (const PairAtom& a : atoms_) fn(a);
  }
}

std::vector<PairAtom> JointPairDistribution::materialize_atoms() const {
  if (!product_) return atoms_;
  check_cap(atom_count(), "materialize_atoms");
  std::vector<PairAtom> out;
  out.reserve(static_cast<std::size_t>(atom_count()));
  for (const Atom& ax : product_->first.atoms()) {
    for (const Atom& ay : product_->second.atoms()) {
      out.push_back({ax.value, ay.value, ax.probability * ay.probability});
    }
  }
  return out;
}

double entropy_bits(const JointPairDistribution& joint) {
  if (joint.has_product_form()) {
    return entropy_bits(joint.marginal_x()) + entropy_bits(joint.marginal_y());
  }
  CompensatedSum h;
  joint.for_each_atom(
      [&](const PairAtom& a) { h.add(-a.probability * std::log2(a.probability)); });
  return h.value();
}

FiniteDistribution pushforward_product(const JointPairDistribution& joint) {
  std::vector<ProductRecord> records = product_records(joint);
  std::vector<Atom> atoms;
  for (std::size_t i = 0; i < records.size();) {
    const std::uint64_t z = records[i].product;
    double p = 0.0;
    for (; i < records.size() && records[i].product == z; ++i) {
      p += records[i].probability;
    }
    atoms.push_back({z, p});
  }
  return FiniteDistribution::from_atoms(std::move(atoms));
}

EquivocationReport equivocation(const JointPairDistribution& joint,
                                EquivMethod method,
                                std::string_view descriptor) {
  const auto start = std::chrono::steady_clock::now();
  EquivocationReport report;
  report.descriptor = std::string(descriptor);
  report.method = method;
  report.joint_entropy_bits = entropy_bits(joint);

  std::vector<ProductRecord> records = product_records(joint);
  CompensatedSum h_product;
  CompensatedSum grouped;
  for (std::size_t i = 0; i < records.size();) {
    const std::uint64_t z = records[i].product;
    const std::size_t begin = i;
    CompensatedSum fiber;
    for (; i < records.size() && records[i].product == z; ++i) {
      fiber.add(records[i].probability);
    }
    const double pz = fiber.value();
    h_product.add(-pz * std::log2(pz));
    if (method == EquivMethod::grouping) {
      const double log_pz = std::log2(pz);
      for (std::size_t j = begin; j < i; ++j) {
        const double p = records[j].probability;
        grouped.add(p * (log_pz - std::log2(p)));
      }
    }
  }
  report.product_entropy_bits = h_product.value();
  if (method == EquivMethod::difference) {
    report.equivocation_bits =
        report.joint_entropy_bits - report.product_entropy_bits;
  } else {
    report.equivocation_bits = grouped.value();
  }
  report.elapsed = std::chrono::steady_clock::now() - start;
  return report;
}

double conditional_entropy_given_product(const JointPairDistribution& joint,
                                         std::uint64_t z) {
  std::vector<double> probs;
  visit_atoms(joint, [&](const PairAtom& a) {
    const bool overflows =
        a.x != 0 && a.y > std::numeric_limits<std::uint64_t>::max() / a.x;
    if (!overflows && a.x * a.y == z) probs.push_back(a.probability);
  });
  if (probs.empty()) {
    throw std::domain_error("conditional_entropy_given_product: product " +
                            std::to_string(z) + " is not attained");
  }
  CompensatedSum total;
  for (double p : probs) total.add(p);
  const double pz = total.value();
  CompensatedSum h;
  for (double p : probs) h.add((p / pz) * std::log2(pz / p));
  return h.value();
}

std::vector<ProductGroup> group_by_product(const JointPairDistribution& joint) {
  std::vector<ProductRecord> records = product_records(joint);
  std::vector<ProductGroup> groups;
  for (std::size_t i = 0; i < records.size();) {
    const std::uint64_t z = records[i].product;
    const std::size_t begin = i;
    CompensatedSum fiber;
    for (; i < records.size() && records[i].product == z; ++i) {
      fiber.add(records[i].probability);
    }
    const double pz = fiber.value();
    CompensatedSum h;
    for (std::size_t j = begin; j < i; ++j) {
      const double p = records[j].probability;
      h.add((p / pz) * std::log2(pz / p));
    }
    groups.push_back({z, pz, h.value(), i - begin});
  }
  return groups;
}

}  // namespace mulinfo
