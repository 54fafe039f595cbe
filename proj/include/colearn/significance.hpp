#pragma once

// Closed-form significance verdicts and the exhaustive all-learners oracle
// they are checked against.

#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "colearn/classes.hpp"
#include "colearn/core.hpp"

namespace colearn {

enum class SignificanceKind { anytime_optimal, optimal };
std::string to_string(SignificanceKind k);

/// Ldims seen at one step t of the replay: before the step and for both
/// labels of x_t. `critical` means the larger restriction keeps the Ldim of
/// the version space; `gentle` means the true label costs at most one.
struct StepEvidence {
  std::size_t t = 0;
  Instance x = 0;
  std::optional<Label> y;
  int ldim_before = -1;
  int ldim0 = -1;
  int ldim1 = -1;
  bool critical = false;
  bool gentle = true;
};

struct SignificanceVerdict {
  SignificanceKind kind = SignificanceKind::optimal;
  bool significant = false;
  std::optional<Label> forced;
  std::vector<StepEvidence> steps;
  /// Oracle verdicts: labels some optimal learner may predict.
  std::set<Label> feasible;
  std::string note;
};

struct InstanceTooLarge : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Caps of the exhaustive oracle.
struct OracleCaps {
  std::size_t max_domain = 5;
  std::size_t max_rows = 8;
  std::size_t max_horizon = 4;
};

/// Significant iff the larger of Ldim(H_S^{(x,r)}) equals Ldim(H_S) (which
/// forces the two to differ); `steps` also records the plain imbalance.
SignificanceVerdict is_aopt_significant(const FiniteClass& h, const Sample& s, Instance x);
/// True iff the two restricted Ldims differ, with no further condition.
bool ldim_imbalance(const FiniteClass& h, const Sample& s, Instance x);

/// Both per-step conditions over the replay of S followed by x.
SignificanceVerdict is_opt_significant(const FiniteClass& h, const Sample& s, Instance x);

/// Labels r for which some learner with optimal mistake bound (games of
/// length |S| + horizon) predicts r at (S, x).
SignificanceVerdict brute_force_opt_significant(const FiniteClass& h, const Sample& s, Instance x,
                                                std::size_t horizon, OracleCaps caps = {});
/// Same over learners optimal after every history.
SignificanceVerdict brute_force_aopt_significant(const FiniteClass& h, const Sample& s, Instance x,
                                                 std::size_t horizon, OracleCaps caps = {});

/// Values of M_A(S) over all learners with optimal mistake bound.
std::set<std::size_t> optimal_mistakes_on_sample(const FiniteClass& h, const Sample& s, std::size_t horizon,
                                                 OracleCaps caps = {});

/// Literal enumeration of every prediction table over realizable histories
/// shorter than `length`; for each (history, x) the labels predicted by the
/// tables with optimal length-capped mistake bound. Domain <= 3, length <= 2.
std::map<std::pair<Sample, Instance>, std::set<Label>> optimal_table_predictions(const FiniteClass& h,
                                                                                std::size_t length);

struct SignificantMistakes {
  std::size_t m = 0;
  int ldim_h = -1;
  int ldim_hs = -1;
  bool holds = false;
  /// M_A(S) over the oracle's optimal learners, when checked.
  std::set<std::size_t> oracle_m;
};
/// Throws PreconditionViolated when (S, x) is not optimally significant.
SignificantMistakes check_significant_mistakes(const FiniteClass& h, const Sample& s, Instance x,
                                std::optional<std::size_t> oracle_horizon = std::nullopt);

struct MistakeConditions {
  bool condition_a = false;
  bool condition_b = false;
  bool agree() const { return condition_a == condition_b; }
};
MistakeConditions check_mistake_conditions(const FiniteClass& h, const Sample& s, std::size_t horizon, OracleCaps caps = {});

struct Ldim1Report {
  bool precondition_ok = false;
  std::vector<std::string> violations;
  int ldim = -1;
  std::size_t truncation_size = 0;
  std::size_t budget_size = 0;
  std::size_t inputs_checked = 0;
  bool all_significant = false;
  std::optional<std::pair<Sample, Instance>> counterexample;
};
/// Sweeps realizable (S, x) with |S| <= max_length over the first `instances`
/// instances; version spaces are taken over every hypothesis in the
/// enumeration budget, seen on a window of `window` instances.
Ldim1Report verify_ldim1_all_significant(const EnumerableClass& h, std::size_t truncation, std::size_t instances,
                                         std::size_t max_length = 3, std::size_t window = 0);

}  // namespace colearn
