#pragma once

// The learner contract: a deterministic map (history, instance) -> label.

#include <functional>
#include <memory>
#include <optional>
#include <string>

#include "colearn/core.hpp"

namespace colearn {

struct FuelExhausted : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct LearnerTraits {
  /// Predictions depend on the history only through the version space.
  bool version_space_measurable = false;
  /// Repeating a labeled instance returns its recorded label and leaves
  /// the learner's state unchanged.
  bool history_consistent = false;
  bool fuel_limited = false;
  std::optional<std::uint64_t> program_index;
};

class Learner {
 public:
  virtual ~Learner() = default;

  virtual std::string name() const = 0;
  /// nullopt means no answer within the learner's fuel.
  virtual std::optional<Label> predict(const Sample& history, Instance x) const = 0;
  virtual LearnerTraits traits() const { return {}; }

  /// Two histories with equal keys (and equal version spaces) make the
  /// learner behave identically on every continuation.
  virtual std::string state_key(const Sample& history) const;

  Label predict_or_throw(const Sample& history, Instance x) const;
};

using LearnerPtr = std::shared_ptr<const Learner>;

/// Learner from a plain function; the default state key is the full history.
class FunctionLearner : public Learner {
 public:
  using Fn = std::function<std::optional<Label>(const Sample&, Instance)>;
  using KeyFn = std::function<std::string(const Sample&)>;

  FunctionLearner(std::string name, Fn fn, LearnerTraits traits = {}, KeyFn key = {});

  std::string name() const override { return name_; }
  std::optional<Label> predict(const Sample& history, Instance x) const override { return fn_(history, x); }
  LearnerTraits traits() const override { return traits_; }
  std::string state_key(const Sample& history) const override;

 private:
  std::string name_;
  Fn fn_;
  LearnerTraits traits_;
  KeyFn key_;
};

LearnerPtr constant_learner(Label value);

/// Number of mistakes on the run; throws FuelExhausted if a prediction is missing.
std::size_t mistakes_on_sample(const Learner& a, const Sample& s);

}  // namespace colearn
