#pragma once

// Exhaustive adversary search against fixed learners, the minimax value of
// the mistake game, and optimality verdicts.

#include <map>
#include <optional>
#include <unordered_map>

#include "colearn/classes.hpp"
#include "colearn/learner.hpp"
#include "colearn/littlestone.hpp"

namespace colearn {

struct Horizon {
  std::size_t max_length = 1;
  /// Adversary draws instances below this cap (default: whole domain).
  std::optional<std::size_t> instance_cap;
  /// Adversary never repeats an instance.
  bool distinct_instances = false;
};

struct GameValue {
  std::size_t value = 0;
  /// Realizable continuation on which the learner makes `value` mistakes.
  Sample witness;
  std::size_t horizon = 0;
};

/// Depth-first adversary against one learner on one class. The memo is keyed
/// on (version space, learner state key, remaining length) and may be reused
/// for several queries on the same learner and class.
class Adversary {
 public:
  Adversary(const Learner& learner, const FiniteClass& h, Horizon horizon);

  /// max over realizable continuations of length <= horizon of the
  /// mistakes made after `history`.
  GameValue after(const Sample& history);

  std::size_t states() const { return memo_.size(); }

 private:
  struct Entry {
    std::size_t value;
    Sample continuation;
  };
  const Entry& search(const std::vector<Row>& rows, std::size_t remaining);

  const Learner& learner_;
  FiniteClass h_;
  Horizon horizon_;
  std::size_t cap_;
  bool skip_labeled_;
  Sample history_;
  std::map<std::tuple<std::vector<Row>, std::string, std::size_t>, Entry> memo_;
};

GameValue mistake_bound(const Learner& a, const FiniteClass& h, Horizon horizon);

/// Value at horizon equals value at horizon + 2.
bool bound_stabilizes(const Learner& a, const FiniteClass& h, Horizon horizon);

/// Minimax value of the mistake game, memoized on row sets.
class Minimax {
 public:
  explicit Minimax(std::size_t domain_size) : domain_size_(domain_size) {}

  /// Unbounded game value V(R).
  int value(const std::vector<Row>& rows);
  /// Game value when the adversary has at most k more rounds.
  int capped(const std::vector<Row>& rows, std::size_t k);
  std::size_t domain_size() const { return domain_size_; }

 private:
  std::size_t domain_size_;
  std::unordered_map<std::vector<Row>, int, RowSetHash> memo_;
  std::map<std::pair<std::vector<Row>, std::size_t>, int> capped_memo_;
};

std::size_t optimal_mistake_bound(const FiniteClass& h);

GameValue post_sample_mistake_bound(const Learner& a, const FiniteClass& h, const Sample& s, Horizon horizon);

/// Minimax value on restrict(H, S); throws NotRealizable, and std::logic_error
/// if it ever differs from ldim(restrict(H, S)).
std::size_t optimal_post_sample_bound(const FiniteClass& h, const Sample& s);

struct OptimalityVerdict {
  bool holds = false;
  std::size_t learner_bound = 0;
  std::size_t optimal_bound = 0;
  /// For a negative verdict: the history after which the learner is beaten
  /// (empty for plain optimality) and the continuation that beats it.
  std::optional<Sample> counterexample;
  Sample continuation;
  std::size_t horizon = 0;
  std::size_t histories_checked = 0;
};

OptimalityVerdict is_optimal(const Learner& a, const FiniteClass& h, Horizon horizon);
/// Checks every realizable history of length <= horizon.max_length, in order
/// of length, then instance ascending, then label 0 before 1.
OptimalityVerdict is_anytime_optimal(const Learner& a, const FiniteClass& h, Horizon horizon);

struct TranscriptRow {
  std::size_t t = 0;
  Instance x = 0;
  std::optional<Label> prediction;
  Label y = 0;
  bool mistake = false;
  std::size_t version_space = 0;
  int version_space_ldim = -1;
};

/// Step-by-step replay; the version space columns are taken after step t.
std::vector<TranscriptRow> transcript(const Learner& a, const FiniteClass& h, const Sample& s);

}  // namespace colearn
