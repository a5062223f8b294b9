#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace mulinfo {

/// Cap on the number of pair records an operation may process (default 2^30).
std::uint64_t atom_cap();
void set_atom_cap(std::uint64_t cap);

struct Atom {
  std::uint64_t value;
  double probability;
};

/// Finite support of unsigned integers with strictly positive probabilities
/// summing to 1 within 1e-12 (checked with compensated summation). Atoms are
/// kept sorted by value with duplicates merged, so equal distributions have
/// identical representations.
class FiniteDistribution {
 public:
  static FiniteDistribution from_atoms(std::vector<Atom> atoms);
  static FiniteDistribution uniform(std::vector<std::uint64_t> values);
  static FiniteDistribution point_mass(std::uint64_t value);

  const std::vector<Atom>& atoms() const { return atoms_; }
  std::size_t size() const { return atoms_.size(); }

 private:
  explicit FiniteDistribution(std::vector<Atom> atoms)
      : atoms_(std::move(atoms)) {}
  std::vector<Atom> atoms_;
};

/// Shannon entropy in bits.
double entropy_bits(const FiniteDistribution& dist);

struct PairAtom {
  std::uint64_t x;
  std::uint64_t y;
  double probability;
};

/// Finite distribution over integer pairs. Stored either as an explicit
/// sorted atom list or in product form (two marginals, atoms implied by the
/// cross product); product form is never materialized unless asked for, so
/// supports with ~10^7 pairs stay cheap to carry around.
class JointPairDistribution {
 public:
  static JointPairDistribution from_atoms(std::vector<PairAtom> atoms);

  bool has_product_form() const { return product_.has_value(); }
  const FiniteDistribution& marginal_x() const;
  const FiniteDistribution& marginal_y() const;

  std::uint64_t atom_count() const;

  /// Visits atoms in (x, y) lexicographic order.
  void for_each_atom(const std::function<void(const PairAtom&)>& fn) const;

  /// Explicit atom list; throws a size error above the atom cap.
  std::vector<PairAtom> materialize_atoms() const;

  friend JointPairDistribution joint_from_independent(FiniteDistribution dx,
                                                      FiniteDistribution dy);

 private:
  JointPairDistribution() = default;
  std::vector<PairAtom> atoms_;
  std::optional<std::pair<FiniteDistribution, FiniteDistribution>> product_;
};

/// Product-form joint with p(x, y) = p(x) * p(y). H(joint) = H(dx) + H(dy).
JointPairDistribution joint_from_independent(FiniteDistribution dx,
                                             FiniteDistribution dy);

/// H(X, Y) in bits.
double entropy_bits(const JointPairDistribution& joint);

/// Distribution of x * y; probabilities of pairs with equal product merge.
FiniteDistribution pushforward_product(const JointPairDistribution& joint);

enum class EquivMethod { difference, grouping };

struct EquivocationReport {
  std::string descriptor;
  double joint_entropy_bits = 0.0;
  double product_entropy_bits = 0.0;
  double equivocation_bits = 0.0;
  EquivMethod method = EquivMethod::difference;
  std::chrono::duration<double, std::milli> elapsed{0.0};
};

/// Equivocation H(X,Y | X*Y) of the multiplication channel.
///   difference:  H(X,Y) - H(X*Y)
///   grouping:    sum over products z of Pr[X*Y = z] * H(X,Y | X*Y = z)
/// The two agree within 1e-9 on any valid joint.
EquivocationReport equivocation(const JointPairDistribution& joint,
                                EquivMethod method,
                                std::string_view descriptor = {});

/// Entropy of (X, Y) conditioned on X*Y = z. Throws a domain error if z is
/// not attained. Always <= log2(#atoms with product z).
double conditional_entropy_given_product(const JointPairDistribution& joint,
                                         std::uint64_t z);

/// One product fiber of the joint: its total probability, the conditional
/// entropy of (X, Y) on it, and its atom count.
struct ProductGroup {
  std::uint64_t product;
  double probability;
  double conditional_entropy_bits;
  std::uint64_t atoms;
};

/// All product fibers in increasing product order.
std::vector<ProductGroup> group_by_product(const JointPairDistribution& joint);

}  // namespace mulinfo
