#include "colearn/learner.hpp"

namespace colearn {

std::string Learner::state_key(const Sample& history) const {
  if (traits().version_space_measurable) return {};
  return history.to_string();
}

Label Learner::predict_or_throw(const Sample& history, Instance x) const {
  const auto p = predict(history, x);
  if (!p) throw FuelExhausted(name() + " gave no prediction on " + history.to_string() + ", x=" + std::to_string(x));
  return *p;
}

FunctionLearner::FunctionLearner(std::string name, Fn fn, LearnerTraits traits, KeyFn key)
    : name_(std::move(name)), fn_(std::move(fn)), traits_(traits), key_(std::move(key)) {}

std::string FunctionLearner::state_key(const Sample& history) const {
  if (key_) return key_(history);
  return Learner::state_key(history);
}

LearnerPtr constant_learner(Label value) {
  LearnerTraits traits;
  traits.version_space_measurable = true;
  return std::make_shared<FunctionLearner>(
      value ? "const1" : "const0",
      [value](const Sample&, Instance) -> std::optional<Label> { return value; }, traits);
}

std::size_t mistakes_on_sample(const Learner& a, const Sample& s) {
  std::size_t mistakes = 0;
  for (std::size_t t = 0; t < s.size(); ++t)
    if (a.predict_or_throw(s.prefix(t), s[t].x) != s[t].y) ++mistakes;
  return mistakes;
}

}  // namespace colearn
