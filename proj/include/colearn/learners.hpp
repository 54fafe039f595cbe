#pragma once

// Concrete learners: SOL, the restricted-realizability learner of the
// thresholds-plus-E example, the conservative predictor, the racing
// significance predictor, toy-program learners, and the hand-built
// mistake-bound-2 learners for the halting constructions.

#include <functional>
#include <mutex>
#include <set>

#include "colearn/classes.hpp"
#include "colearn/constructions.hpp"
#include "colearn/learner.hpp"
#include "colearn/littlestone.hpp"
#include "colearn/machine.hpp"

namespace colearn {

/// Ldim of the two restrictions H_S^{(x,0)} and H_S^{(x,1)}; instances
/// outside the domain count as labeled 0 by every row.
std::pair<int, int> split_ldims(LdimMemo& memo, const FiniteClass& h, const Sample& s, Instance x);

/// Predicts 1 iff Ldim(H_S^{(x,1)}) >= Ldim(H_S^{(x,0)}).
class SolLearner : public Learner {
 public:
  explicit SolLearner(FiniteClass h);
  std::string name() const override { return "sol"; }
  std::optional<Label> predict(const Sample& history, Instance x) const override;
  LearnerTraits traits() const override;

 private:
  FiniteClass h_;
  mutable std::mutex mu_;
  mutable LdimMemo memo_;
};

LearnerPtr sol(const FiniteClass& h);

/// SOL of `full` while the history is realizable by `sub`, 0 afterwards.
LearnerPtr restricted_sol(const FiniteClass& full, const FiniteClass& sub);

/// Predicts 1 only on instances seen with label 1.
LearnerPtr conservative_learner();

/// Replays the history, racing the depth (d - m) tree enumerators for the
/// two restrictions at every step. Fuel is shared across the whole call.
class SigLearner : public Learner {
 public:
  SigLearner(EnumerableClass h, unsigned d, std::size_t fuel);
  std::string name() const override { return "sig"; }
  std::optional<Label> predict(const Sample& history, Instance x) const override;
  LearnerTraits traits() const override;

  /// Race outcome for one step: label of the restriction that produced a
  /// tree first, or nullopt; fuel is decremented.
  std::optional<Label> race(const Sample& s, Instance x, int depth, std::size_t& fuel) const;

 private:
  EnumerableClass h_;
  unsigned d_;
  std::size_t fuel_;
};

LearnerPtr sig_predictor(const EnumerableClass& h, unsigned d, std::size_t fuel);

/// Program `index` run as a two-place function on (encode_sample(S), x);
/// outputs other than 0 and 1 and budget exhaustion give no prediction.
class ToyLearner : public Learner {
 public:
  ToyLearner(std::uint64_t index, std::uint64_t step_budget);
  std::string name() const override { return "toy:" + std::to_string(index_); }
  std::optional<Label> predict(const Sample& history, Instance x) const override;
  LearnerTraits traits() const override;

 private:
  std::uint64_t index_;
  Program program_;
  std::uint64_t step_budget_;
};

/// Learners that predict 0 until their first mistake and afterwards match a
/// support chosen from their own mistakes. Instances already labeled in the
/// history are predicted with their recorded label.
class BlockLearner : public Learner {
 public:
  using Decode = std::function<BigNat(Instance)>;
  using Mistakes = std::vector<std::pair<BigNat, Label>>;

  explicit BlockLearner(Decode decode);
  std::optional<Label> predict(const Sample& history, Instance x) const override;
  LearnerTraits traits() const override;
  std::string state_key(const Sample& history) const override;

  /// Support matched after the given mistakes (true instances).
  virtual std::set<BigNat> support(const Mistakes& mistakes) const = 0;

 protected:
  /// First member of `block` agreeing with every mistake, if any.
  static std::optional<std::set<BigNat>> first_consistent(const std::vector<std::set<BigNat>>& block,
                                                         const Mistakes& mistakes);
  /// Fallback: previous support adjusted to the mistakes.
  static std::set<BigNat> patched(std::set<BigNat> base, const Mistakes& mistakes);

 private:
  struct Replay {
    Mistakes mistakes;
    std::set<BigNat> support;
    std::map<Instance, Label> seen;
  };
  Replay replay(const Sample& history) const;

  Decode decode_;
};

/// The 3e / 3e+1 / 3e+2 case analysis.
class RerHaltLearner : public BlockLearner {
 public:
  RerHaltLearner();
  std::string name() const override { return "b-rer-halt"; }
  std::set<BigNat> support(const Mistakes& mistakes) const override;
};

/// Case analysis for the prime-power extension class. With `literal` set, a
/// first mistake on 2^e with phi_e(e) = 0 matches {2^e, 2^e 13^{c_e(e)}} as
/// written; otherwise it matches {2^e, 2^e 3^{c_0(e)}, 2^e 13^{c_e(e)}}.
class DrExtLearner : public BlockLearner {
 public:
  DrExtLearner(OraclePtr oracle, Decode decode, bool literal = false);
  std::string name() const override { return literal_ ? "b-dr-ext-literal" : "b-dr-ext"; }
  std::set<BigNat> support(const Mistakes& mistakes) const override;

 private:
  OraclePtr oracle_;
  bool literal_;
};

class DrHaltLearner : public BlockLearner {
 public:
  DrHaltLearner(OraclePtr oracle, Decode decode);
  std::string name() const override { return "b-dr-halt"; }
  std::set<BigNat> support(const Mistakes& mistakes) const override;

 private:
  OraclePtr oracle_;
};

LearnerPtr learner_b_rer_halt();
LearnerPtr learner_b_dr_ext(OraclePtr oracle, const InstanceMap& map, bool literal = false);
LearnerPtr learner_b_dr_halt(OraclePtr oracle, const InstanceMap& map);

}  // namespace colearn
