#include "colearn/learners.hpp"

#include <algorithm>
#include <sstream>

namespace colearn {

namespace {

std::vector<Row> consistent_rows(const FiniteClass& h, const Sample& s) {
  for (const auto& it : s)
    if (it.x >= h.domain_size() && it.y == 1) return {};
  std::vector<Row> rows;
  for (Row r : h.rows()) {
    bool ok = true;
    for (const auto& it : s)
      if (it.x < h.domain_size() && row_value(r, it.x) != it.y) {
        ok = false;
        break;
      }
    if (ok) rows.push_back(r);
  }
  return rows;
}

}  // namespace

std::pair<int, int> split_ldims(LdimMemo& memo, const FiniteClass& h, const Sample& s, Instance x) {
  const auto rows = consistent_rows(h, s);
  if (x >= h.domain_size()) return {memo.of(rows), -1};
  std::vector<Row> zero, one;
  for (Row r : rows) (row_value(r, x) ? one : zero).push_back(r);
  return {memo.of(zero), memo.of(one)};
}

SolLearner::SolLearner(FiniteClass h) : h_(std::move(h)), memo_(h_.domain_size()) {}

std::optional<Label> SolLearner::predict(const Sample& history, Instance x) const {
  std::lock_guard lock(mu_);
  const auto [l0, l1] = split_ldims(memo_, h_, history, x);
  return l1 >= l0 ? Label{1} : Label{0};
}

LearnerTraits SolLearner::traits() const {
  LearnerTraits t;
  t.version_space_measurable = true;
  t.history_consistent = true;
  return t;
}

LearnerPtr sol(const FiniteClass& h) { return std::make_shared<SolLearner>(h); }

LearnerPtr restricted_sol(const FiniteClass& full, const FiniteClass& sub) {
  auto inner = std::make_shared<SolLearner>(full);
  const FiniteClass widened(full.domain_size(), sub.rows());
  LearnerTraits traits;
  traits.version_space_measurable = true;
  return std::make_shared<FunctionLearner>(
      "restricted-sol",
      [inner, widened](const Sample& s, Instance x) -> std::optional<Label> {
        if (!consistent_rows(widened, s).empty()) return inner->predict(s, x);
        return Label{0};
      },
      traits);
}

LearnerPtr conservative_learner() {
  LearnerTraits traits;
  traits.history_consistent = true;
  return std::make_shared<FunctionLearner>(
      "conservative",
      [](const Sample& s, Instance x) -> std::optional<Label> {
        return std::any_of(s.begin(), s.end(), [x](const LabeledInstance& it) { return it.x == x && it.y == 1; })
                   ? 1
                   : 0;
      },
      traits,
      [](const Sample& s) {
        std::set<Instance> ones;
        for (const auto& it : s)
          if (it.y == 1) ones.insert(it.x);
        std::string key;
        for (auto x : ones) key += std::to_string(x) + ',';
        return key;
      });
}

SigLearner::SigLearner(EnumerableClass h, unsigned d, std::size_t fuel) : h_(std::move(h)), d_(d), fuel_(fuel) {}

std::optional<Label> SigLearner::race(const Sample& s, Instance x, int depth, std::size_t& fuel) const {
  if (depth < 0) return std::nullopt;
  TreeEnumerator one(h_.restricted(s.appended({x, 1})), static_cast<unsigned>(depth));
  TreeEnumerator zero(h_.restricted(s.appended({x, 0})), static_cast<unsigned>(depth));
  while (fuel > 0) {
    --fuel;
    if (one.tick()) return Label{1};
    if (fuel == 0) break;
    --fuel;
    if (zero.tick()) return Label{0};
  }
  return std::nullopt;
}

std::optional<Label> SigLearner::predict(const Sample& history, Instance x) const {
  std::size_t fuel = fuel_;
  int m = 0;
  for (std::size_t t = 0; t <= history.size(); ++t) {
    const Instance xt = t < history.size() ? history[t].x : x;
    const auto p = race(history.prefix(t), xt, static_cast<int>(d_) - m, fuel);
    if (!p) return std::nullopt;
    if (t == history.size()) return p;
    if (*p != history[t].y) ++m;
  }
  return std::nullopt;
}

LearnerTraits SigLearner::traits() const {
  LearnerTraits t;
  t.fuel_limited = true;
  return t;
}

LearnerPtr sig_predictor(const EnumerableClass& h, unsigned d, std::size_t fuel) {
  return std::make_shared<SigLearner>(h, d, fuel);
}

ToyLearner::ToyLearner(std::uint64_t index, std::uint64_t step_budget)
    : index_(index), program_(program_at(index)), step_budget_(step_budget) {}

std::optional<Label> ToyLearner::predict(const Sample& history, Instance x) const {
  const auto r = run_two_place(program_, encode_sample(history), BigNat(x), step_budget_);
  if (!r.halted || r.output > 1) return std::nullopt;
  return static_cast<Label>(r.output == 1 ? 1 : 0);
}

LearnerTraits ToyLearner::traits() const {
  LearnerTraits t;
  t.fuel_limited = true;
  t.program_index = index_;
  return t;
}

BlockLearner::BlockLearner(Decode decode) : decode_(std::move(decode)) {}

BlockLearner::Replay BlockLearner::replay(const Sample& history) const {
  Replay r;
  r.support = support(r.mistakes);
  for (const auto& it : history) {
    const BigNat v = decode_(it.x);
    auto seen = r.seen.find(it.x);
    const Label p = seen != r.seen.end() ? seen->second : (r.support.count(v) ? 1 : 0);
    if (p != it.y) {
      r.mistakes.emplace_back(v, it.y);
      r.support = support(r.mistakes);
    }
    r.seen[it.x] = it.y;
  }
  return r;
}

std::optional<Label> BlockLearner::predict(const Sample& history, Instance x) const {
  const auto r = replay(history);
  if (auto it = r.seen.find(x); it != r.seen.end()) return it->second;
  return r.support.count(decode_(x)) ? Label{1} : Label{0};
}

LearnerTraits BlockLearner::traits() const {
  LearnerTraits t;
  t.history_consistent = true;
  return t;
}

std::string BlockLearner::state_key(const Sample& history) const {
  const auto r = replay(history);
  std::ostringstream os;
  for (const auto& [v, y] : r.mistakes) os << v << ':' << static_cast<int>(y) << ';';
  os << '|';
  for (const auto& [x, y] : r.seen)
    if ((r.support.count(decode_(x)) ? 1 : 0) != y) os << x << ':' << static_cast<int>(y) << ';';
  return os.str();
}

std::optional<std::set<BigNat>> BlockLearner::first_consistent(const std::vector<std::set<BigNat>>& block,
                                                               const Mistakes& mistakes) {
  for (const auto& member : block) {
    const bool ok = std::all_of(mistakes.begin(), mistakes.end(), [&](const auto& m) {
      return (member.count(m.first) ? 1 : 0) == m.second;
    });
    if (ok) return member;
  }
  return std::nullopt;
}

std::set<BigNat> BlockLearner::patched(std::set<BigNat> base, const Mistakes& mistakes) {
  for (const auto& [v, y] : mistakes) {
    if (y)
      base.insert(v);
    else
      base.erase(v);
  }
  return base;
}

RerHaltLearner::RerHaltLearner() : BlockLearner([](Instance x) { return BigNat(x); }) {}

std::set<BigNat> RerHaltLearner::support(const Mistakes& mistakes) const {
  if (mistakes.empty()) return {};
  const BigNat& x1 = mistakes[0].first;
  const BigNat e = x1 / 3;
  std::set<BigNat> s{3 * e, 3 * e + 1, x1};
  if (mistakes[0].second == 0) return patched(s, mistakes);
  if (mistakes.size() == 1) return s;
  const auto& [x2, y2] = mistakes[1];
  if (x2 == 3 * e + 2 && y2 == 1)
    s = {3 * e, 3 * e + 1, 3 * e + 2};
  else if (x2 == 3 * e + 1 && y2 == 0)
    s = {3 * e};
  else
    s = patched(s, Mistakes(mistakes.begin() + 1, mistakes.begin() + 2));
  return patched(s, Mistakes(mistakes.begin() + 2, mistakes.end()));
}

namespace {

struct Split {
  std::uint64_t e = 0;
  BigNat odd;
};

Split split_two(const BigNat& v) {
  if (v <= 0) return {0, v};
  const auto e = static_cast<std::uint64_t>(lsb(v));
  return {e, v >> e};
}

// p if odd = p^i for some i > 0 and p among `primes`.
std::optional<unsigned> odd_prime_base(BigNat odd, std::initializer_list<unsigned> primes) {
  for (unsigned p : primes) {
    if (odd % p != 0) continue;
    while (odd % p == 0) odd /= p;
    return odd == 1 ? std::optional<unsigned>(p) : std::nullopt;
  }
  return std::nullopt;
}

BlockLearner::Decode map_decoder(const InstanceMap& map) {
  auto shared = std::make_shared<const InstanceMap>(map);
  return [shared](Instance x) { return x < shared->size() ? shared->value(x) : BigNat(-1); };
}

}  // namespace

DrExtLearner::DrExtLearner(OraclePtr oracle, Decode decode, bool literal)
    : BlockLearner(std::move(decode)), oracle_(std::move(oracle)), literal_(literal) {}

std::set<BigNat> DrExtLearner::support(const Mistakes& mistakes) const {
  if (mistakes.empty()) return {};
  const auto [e, odd] = split_two(mistakes[0].first);
  const BigNat base = pow_big(2, e);
  std::set<BigNat> first;
  if (odd == 1) {
    const auto f = dr_facts(*oracle_, e);
    if (!f.c0) {
      first = {base};
    } else if (f.self.converges_to(1)) {
      first = {base, prime_power_instance(e, 5, *f.c0)};
    } else if (f.self.converges_to(0) && f.ce) {
      if (literal_)
        first = {base, prime_power_instance(e, 13, *f.ce)};
      else
        first = {base, prime_power_instance(e, 3, *f.c0), prime_power_instance(e, 13, *f.ce)};
    } else {
      first = {base, prime_power_instance(e, 3, *f.c0)};
    }
  } else if (odd_prime_base(odd, {3, 5, 7, 11, 13})) {
    first = {base, mistakes[0].first};
  } else {
    first = {mistakes[0].first};
  }
  if (mistakes[0].second == 0) return patched(first, mistakes);
  if (mistakes.size() == 1) return first;
  if (auto member = first_consistent(dr_ext_block(*oracle_, e), mistakes)) return *member;
  return patched(first, Mistakes(mistakes.begin() + 1, mistakes.end()));
}

DrHaltLearner::DrHaltLearner(OraclePtr oracle, Decode decode)
    : BlockLearner(std::move(decode)), oracle_(std::move(oracle)) {}

std::set<BigNat> DrHaltLearner::support(const Mistakes& mistakes) const {
  if (mistakes.empty()) return {};
  const BigNat& x1 = mistakes[0].first;
  const auto [e, odd] = split_two(x1);
  const BigNat base = pow_big(2, e);
  const auto f = dr_facts(*oracle_, e);
  std::set<BigNat> first;
  if (odd == 1) {
    first = f.c0 ? std::set<BigNat>{base, prime_power_instance(e, 5, *f.c0)} : std::set<BigNat>{base};
  } else if (odd_prime_base(odd, {3})) {
    first = {base, x1};
  } else if (odd_prime_base(odd, {5, 7, 11})) {
    first = {base, x1};
    if (f.c0) first.insert(prime_power_instance(e, 5, *f.c0));
  } else {
    first = {x1};
  }
  if (mistakes[0].second == 0) return patched(first, mistakes);
  if (mistakes.size() == 1) return first;
  if (auto member = first_consistent(dr_halt_block(*oracle_, e), mistakes)) return *member;
  return patched(first, Mistakes(mistakes.begin() + 1, mistakes.end()));
}

LearnerPtr learner_b_rer_halt() { return std::make_shared<RerHaltLearner>(); }

LearnerPtr learner_b_dr_ext(OraclePtr oracle, const InstanceMap& map, bool literal) {
  return std::make_shared<DrExtLearner>(std::move(oracle), map_decoder(map), literal);
}

LearnerPtr learner_b_dr_halt(OraclePtr oracle, const InstanceMap& map) {
  return std::make_shared<DrHaltLearner>(std::move(oracle), map_decoder(map));
}

}  // namespace colearn
