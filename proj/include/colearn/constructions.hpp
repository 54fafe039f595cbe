#pragma once

// Budgeted instantiations of the constructed classes: the halting-indexed
// classes, the prime-power DR classes with their decider, the block
// partition and diagonal class, and the self-halting threshold class.

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "colearn/classes.hpp"
#include "colearn/littlestone.hpp"
#include "colearn/machine.hpp"

namespace colearn {

/// Bidirectional map between sorted true instances and the dense domain.
class InstanceMap {
 public:
  InstanceMap() = default;
  explicit InstanceMap(std::set<BigNat> values);
  static InstanceMap identity(std::size_t n);

  std::size_t size() const { return values_.size(); }
  const BigNat& value(Instance i) const { return values_.at(i); }
  std::optional<Instance> compact(const BigNat& v) const;
  const std::vector<BigNat>& values() const { return values_; }

 private:
  std::vector<BigNat> values_;
};

/// A built class together with its true supports.
struct ConstructedClass {
  FiniteClass cls;
  InstanceMap map;
  std::vector<std::set<BigNat>> supports;
  std::vector<std::string> labels;

  Row row_of(const std::set<BigNat>& support) const;
  /// Sample over true instances -> compact sample; throws std::out_of_range
  /// for instances outside the map.
  Sample compact(const std::vector<std::pair<BigNat, Label>>& items) const;
  std::optional<Instance> compact(const BigNat& v) const { return map.compact(v); }
  /// JSON of the map: compact index -> decimal natural.
  std::string map_json() const;
};

/// Builds the class; without a map the domain is the union of the supports.
ConstructedClass assemble(std::vector<std::set<BigNat>> supports, std::vector<std::string> labels,
                          std::optional<InstanceMap> map = std::nullopt);

BigNat pow_big(unsigned base, std::uint64_t exp);
/// 2^e * p^k.
BigNat prime_power_instance(std::uint64_t e, unsigned p, std::uint64_t k);

// ---- halting-indexed classes on dense instances ---------------------------

std::vector<std::set<BigNat>> rer_halt_block(const HaltingOracle& oracle, std::uint64_t e, std::uint64_t s_max);
ConstructedClass build_h_rer_halt(const HaltingOracle& oracle, std::uint64_t e_max, std::uint64_t s_max);
ConstructedClass build_h_halting(const HaltingOracle& oracle, std::uint64_t e_max, std::uint64_t s_max);

// ---- prime-power DR classes ----------------------------------------------

/// What the oracle says about program e: c_0(e), phi_e(e) and c_e(e).
struct DrFacts {
  std::optional<std::uint64_t> c0;
  Evaluation self;
  std::optional<std::uint64_t> ce;
};
DrFacts dr_facts(const HaltingOracle& oracle, std::uint64_t e);

std::vector<std::set<BigNat>> dr_ext_block(const HaltingOracle& oracle, std::uint64_t e);
std::vector<std::set<BigNat>> dr_halt_block(const HaltingOracle& oracle, std::uint64_t e);
ConstructedClass build_h_dr_ext(const HaltingOracle& oracle, std::uint64_t e_max);
ConstructedClass build_h_dr_halt(const HaltingOracle& oracle, std::uint64_t e_max);

/// Shape of a support {2^e, 2^e p^i, [2^e q^j]} with i, j > 0.
struct PrimePowerShape {
  std::uint64_t e = 0;
  /// (prime, exponent) pairs of the non-base elements, in increasing prime order.
  std::vector<std::pair<unsigned, std::uint64_t>> parts;
};
std::optional<PrimePowerShape> prime_power_shape(const std::set<BigNat>& support);

/// The decision procedure for membership of a support in the extension class.
int dr_ext_member(const HaltingOracle& oracle, const std::set<BigNat>& support);
int dr_halt_member(const HaltingOracle& oracle, const std::set<BigNat>& support);
/// Same, starting from a canonical index y (decoded to D_y first).
int dr_decider_h_dr_ext(const HaltingOracle& oracle, const BigNat& y);
int dr_decider_h_dr_halt(const HaltingOracle& oracle, const BigNat& y);
/// Up to `want` supports near the members that are not members.
std::vector<std::set<BigNat>> perturbed_supports(const std::vector<std::set<BigNat>>& members, std::size_t want);

// ---- block partition and the diagonal class -------------------------------

std::uint64_t s1(std::uint64_t n);
std::uint64_t s2(std::uint64_t n);

struct Block {
  std::uint64_t i = 0;  // I1(n)
  std::uint64_t j = 0;  // I2(n)
  std::uint64_t learner = 0;  // I(n) = i - j
  std::uint64_t start = 0;  // m(n)
  friend bool operator==(const Block&, const Block&) = default;
};
Block block_of(std::uint64_t n);
/// Instances of N_{i,j}, ascending.
std::vector<std::uint64_t> block_instances(std::uint64_t i, std::uint64_t j);

/// The diagonal labels L(n) with toy programs as learners, each run on
/// (encode_sample(S^n), n) for at most step_budget steps.
class SplitClass {
 public:
  explicit SplitClass(std::uint64_t step_budget);

  Label label(std::uint64_t n);
  Label h(std::uint64_t i, std::uint64_t n);
  /// Instances whose learner ran out of steps (label set to 0).
  const std::set<std::uint64_t>& exhausted() const { return exhausted_; }

  /// h_0..h_{i_max} on the domain [0, s2(i_max + 1)).
  FiniteClass truncation(std::uint64_t i_max);
  /// Slot i holds h_i (support computed on N_i) for i <= i_max.
  EnumerableClass enumerable(std::uint64_t i_max, std::size_t enumeration_budget);

  /// ((n, h_{M+e}(n))) over N_{M+e, M}.
  Sample forcing_sample(std::uint64_t e, std::uint64_t m);
  std::uint64_t step_budget() const { return step_budget_; }

 private:
  std::uint64_t step_budget_;
  std::map<std::uint64_t, Label> memo_;
  std::set<std::uint64_t> exhausted_;
};

// ---- self-halting thresholds ---------------------------------------------

/// h_s(x) = 1 iff program x halts on input x within s steps.
struct InitClass {
  FiniteClass cls;
  /// Halting time of each x <= x_max on itself, if within s_max.
  std::vector<std::optional<std::uint64_t>> self_halting;
  std::uint64_t s_max = 0;
  Row row(std::uint64_t s) const;
};
InitClass build_h_init(std::uint64_t s_max, std::uint64_t x_max);

struct ThresholdWitness {
  std::vector<Instance> points;
  std::vector<Row> hypotheses;
};
/// Points x_1..x_k and rows h_1..h_k with h_i(x_j) = 1 iff i >= j.
std::optional<ThresholdWitness> find_thresholds(const FiniteClass& h, std::size_t k);
/// Depth floor(log2 k) tree shattered by the witness rows.
ShatteredTree threshold_tree(const ThresholdWitness& w);

}  // namespace colearn
