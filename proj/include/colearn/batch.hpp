#pragma once

// Absolute loss, truncated regret, the averaging online-to-batch conversion,
// PAC evaluation over finite distributions, and unrealizable labelings.

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "colearn/classes.hpp"
#include "colearn/learner.hpp"

namespace colearn {

using Rational = boost::multiprecision::cpp_rational;

/// Probability of predicting 1, per queried instance.
struct ProbabilisticHypothesis {
  std::map<Instance, Rational> values;

  /// Throws std::out_of_range for instances never queried.
  const Rational& operator()(Instance x) const;
  static ProbabilisticHypothesis from_row(Row r, const std::vector<Instance>& xs);
};

struct WeightedExample {
  Instance x = 0;
  Label y = 0;
  Rational weight;
};

class FiniteDistribution {
 public:
  /// Throws std::invalid_argument unless weights are positive and sum to 1.
  explicit FiniteDistribution(std::vector<WeightedExample> support);
  static FiniteDistribution uniform(const std::vector<LabeledInstance>& items);
  /// {"support": [{"x": 0, "y": 1, "weight": "1/4"}, ...]}; weights may be
  /// numbers or "p/q" strings.
  static FiniteDistribution from_json(const std::string& text);
  static FiniteDistribution from_file(const std::string& path);
  std::string to_json() const;

  const std::vector<WeightedExample>& support() const { return support_; }
  std::vector<Instance> instances() const;
  /// Draws m examples i.i.d.
  Sample draw(std::size_t m, std::mt19937_64& rng) const;

 private:
  std::vector<WeightedExample> support_;
};

Rational point_loss(const Rational& hx, Label y);
Rational point_loss(const ProbabilisticHypothesis& h, const LabeledInstance& z);

/// A learner whose outputs are probabilities of predicting 1.
using RationalPredictor = std::function<Rational(const Sample&, Instance)>;
/// 0/1 predictions as rationals; FuelExhausted propagates.
RationalPredictor as_rational(LearnerPtr a);

/// sup over all length-T sequences with instances below domain_cap of the
/// learner's loss minus the best row's loss. Requires (2 cap)^T <= 10^6.
Rational expected_regret(const RationalPredictor& a, const FiniteClass& h, std::size_t t, std::size_t domain_cap);

/// (1/T) sum_t A(S_{t-1}, x) at each query; throws std::invalid_argument on
/// an empty sample.
ProbabilisticHypothesis online_to_batch(const Learner& a, const Sample& s, const std::vector<Instance>& queries);

Rational distribution_error(const ProbabilisticHypothesis& h, const FiniteDistribution& d);
Rational distribution_error(Row r, const FiniteDistribution& d);
/// min over rows of distribution_error.
Rational class_error(const FiniteClass& h, const FiniteDistribution& d);

struct PacReport {
  std::size_t trials = 0;
  std::size_t failures = 0;
  Rational class_error;
  Rational epsilon;
  Rational delta;
  Rational worst_error;
  Rational mean_error;
  bool passed = false;
};

/// Converted learner trained on `trials` seeded draws of size m; a trial
/// fails when L_D(A_S) > L_D(H) + epsilon. Passes when failures/trials <= delta.
PacReport pac_evaluate(const Learner& a, const FiniteClass& h, const FiniteDistribution& d, const Rational& epsilon,
                       const Rational& delta, std::size_t m, std::size_t trials, std::uint64_t seed);

struct LabelingSearch {
  /// First unrealized labeling of X in lexicographic order (first instance
  /// most significant), or nullopt when every labeling is realized.
  std::optional<std::vector<Label>> unrealized;
  std::size_t realized_patterns = 0;
};
/// Throws std::invalid_argument when |X| > 20.
LabelingSearch find_unrealizable_labeling(const FiniteClass& h, const std::vector<Instance>& xs);

Rational parse_rational(const std::string& text);
std::string to_string(const Rational& q);

}  // namespace colearn
