#include "colearn/game.hpp"

#include <algorithm>
#include <set>

namespace colearn {

namespace {

std::vector<Row> with_label(const std::vector<Row>& rows, Instance x, Label y) {
  std::vector<Row> out;
  for (Row r : rows)
    if (row_value(r, x) == y) out.push_back(r);
  return out;
}

bool labeled_in(const Sample& s, Instance x) {
  return std::any_of(s.begin(), s.end(), [x](const LabeledInstance& it) { return it.x == x; });
}

}  // namespace

Adversary::Adversary(const Learner& learner, const FiniteClass& h, Horizon horizon)
    : learner_(learner),
      h_(h),
      horizon_(horizon),
      cap_(std::min(horizon.instance_cap.value_or(h.domain_size()), h.domain_size())),
      skip_labeled_(learner.traits().history_consistent || horizon.distinct_instances) {}

GameValue Adversary::after(const Sample& history) {
  if (!is_realizable(h_, history)) throw NotRealizable("history " + history.to_string() + " is not realizable");
  history_ = history;
  const Entry& e = search(restrict(h_, history).rows(), horizon_.max_length);
  return GameValue{e.value, e.continuation, horizon_.max_length};
}

const Adversary::Entry& Adversary::search(const std::vector<Row>& rows, std::size_t remaining) {
  static const Entry terminal{0, Sample{}};
  if (remaining == 0 || rows.empty()) return terminal;
  std::string state = learner_.state_key(history_);
  if (horizon_.distinct_instances) {
    state += '#';
    for (Instance x = 0; x < cap_; ++x) state += labeled_in(history_, x) ? '1' : '0';
  }
  auto key = std::make_tuple(rows, std::move(state), remaining);
  if (auto it = memo_.find(key); it != memo_.end()) return it->second;

  Entry best{0, Sample{}};
  for (Instance x = 0; x < cap_ && best.value < remaining; ++x) {
    if (skip_labeled_ && labeled_in(history_, x)) continue;
    const Label p = learner_.predict_or_throw(history_, x);
    for (Label y : {Label{0}, Label{1}}) {
      const auto sub = with_label(rows, x, y);
      if (sub.empty()) continue;
      const std::size_t mistake = p != y ? 1 : 0;
      if (mistake + remaining - 1 <= best.value) continue;
      history_.push_back({x, y});
      const Entry& next = search(sub, remaining - 1);
      history_.pop_back();
      if (mistake + next.value > best.value) {
        best.value = mistake + next.value;
        best.continuation = Sample{{x, y}}.concat(next.continuation);
      }
    }
  }
  return memo_.emplace(std::move(key), std::move(best)).first->second;
}

GameValue mistake_bound(const Learner& a, const FiniteClass& h, Horizon horizon) {
  Adversary adv(a, h, horizon);
  return adv.after(Sample{});
}

bool bound_stabilizes(const Learner& a, const FiniteClass& h, Horizon horizon) {
  Horizon longer = horizon;
  longer.max_length += 2;
  return mistake_bound(a, h, horizon).value == mistake_bound(a, h, longer).value;
}

int Minimax::value(const std::vector<Row>& rows) {
  if (rows.empty()) return -1;
  if (rows.size() == 1) return 0;
  if (auto it = memo_.find(rows); it != memo_.end()) return it->second;
  const Row split = splitting_mask(rows);
  int best = 0;
  for (Instance x = 0; x < domain_size_; ++x) {
    if (!row_value(split, x)) continue;
    const int v0 = value(with_label(rows, x, 0));
    const int v1 = value(with_label(rows, x, 1));
    // prediction 1 pays on label 0, prediction 0 pays on label 1
    const int predict1 = std::max(1 + v0, v1);
    const int predict0 = std::max(v0, 1 + v1);
    best = std::max(best, std::min(predict0, predict1));
  }
  memo_.emplace(rows, best);
  return best;
}

int Minimax::capped(const std::vector<Row>& rows, std::size_t k) {
  if (rows.empty()) return -1;
  if (k == 0 || rows.size() == 1) return 0;
  auto key = std::make_pair(rows, k);
  if (auto it = capped_memo_.find(key); it != capped_memo_.end()) return it->second;
  const Row split = splitting_mask(rows);
  int best = 0;
  for (Instance x = 0; x < domain_size_; ++x) {
    if (!row_value(split, x)) continue;
    const int v0 = capped(with_label(rows, x, 0), k - 1);
    const int v1 = capped(with_label(rows, x, 1), k - 1);
    best = std::max(best, std::min(std::max(v0, 1 + v1), std::max(1 + v0, v1)));
  }
  capped_memo_.emplace(std::move(key), best);
  return best;
}

std::size_t optimal_mistake_bound(const FiniteClass& h) {
  if (h.empty()) return 0;
  Minimax mm(h.domain_size());
  return static_cast<std::size_t>(mm.value(h.rows()));
}

GameValue post_sample_mistake_bound(const Learner& a, const FiniteClass& h, const Sample& s, Horizon horizon) {
  Adversary adv(a, h, horizon);
  return adv.after(s);
}

std::size_t optimal_post_sample_bound(const FiniteClass& h, const Sample& s) {
  if (!is_realizable(h, s)) throw NotRealizable("sample " + s.to_string() + " is not realizable");
  const FiniteClass hs = restrict(h, s);
  Minimax mm(h.domain_size());
  const int v = mm.value(hs.rows());
  const int d = ldim(hs);
  if (v != d)
    throw std::logic_error("minimax value " + std::to_string(v) + " differs from ldim " + std::to_string(d) +
                           " after " + s.to_string());
  return static_cast<std::size_t>(v);
}

OptimalityVerdict is_optimal(const Learner& a, const FiniteClass& h, Horizon horizon) {
  const GameValue gv = mistake_bound(a, h, horizon);
  OptimalityVerdict v;
  v.learner_bound = gv.value;
  v.optimal_bound = optimal_mistake_bound(h);
  v.horizon = horizon.max_length;
  v.histories_checked = 1;
  v.holds = v.learner_bound == v.optimal_bound;
  if (!v.holds) {
    v.counterexample = Sample{};
    v.continuation = gv.witness;
  }
  return v;
}

OptimalityVerdict is_anytime_optimal(const Learner& a, const FiniteClass& h, Horizon horizon) {
  Adversary adv(a, h, horizon);
  Minimax mm(h.domain_size());
  const std::size_t cap = std::min(horizon.instance_cap.value_or(h.domain_size()), h.domain_size());
  const bool skip_labeled = a.traits().history_consistent || horizon.distinct_instances;
  auto key_of = [&](const Sample& s) {
    std::string k = a.state_key(s);
    if (horizon.distinct_instances) {
      k += '#';
      for (Instance x = 0; x < cap; ++x) k += labeled_in(s, x) ? '1' : '0';
    }
    return k;
  };

  OptimalityVerdict v;
  v.horizon = horizon.max_length;
  std::vector<Sample> frontier{Sample{}};
  std::set<std::pair<std::vector<Row>, std::string>> seen;
  seen.emplace(h.rows(), key_of(Sample{}));

  for (std::size_t len = 0; len <= horizon.max_length && !frontier.empty(); ++len) {
    std::vector<Sample> next;
    for (const Sample& s : frontier) {
      const auto rows = restrict(h, s).rows();
      const GameValue gv = adv.after(s);
      const auto opt = static_cast<std::size_t>(mm.value(rows));
      ++v.histories_checked;
      if (len == 0) {
        v.learner_bound = gv.value;
        v.optimal_bound = opt;
      }
      if (gv.value != opt) {
        v.holds = false;
        v.counterexample = s;
        v.continuation = gv.witness;
        if (len != 0) {
          v.learner_bound = gv.value;
          v.optimal_bound = opt;
        }
        return v;
      }
      if (len == horizon.max_length) continue;
      for (Instance x = 0; x < cap; ++x) {
        if (skip_labeled && labeled_in(s, x)) continue;
        for (Label y : {Label{0}, Label{1}}) {
          auto sub = with_label(rows, x, y);
          if (sub.empty()) continue;
          Sample ext = s.appended({x, y});
          if (!seen.emplace(std::move(sub), key_of(ext)).second) continue;
          next.push_back(std::move(ext));
        }
      }
    }
    frontier = std::move(next);
  }
  v.holds = true;
  return v;
}

std::vector<TranscriptRow> transcript(const Learner& a, const FiniteClass& h, const Sample& s) {
  std::vector<TranscriptRow> out;
  LdimMemo memo(h.domain_size());
  std::vector<Row> rows = h.rows();
  for (std::size_t t = 0; t < s.size(); ++t) {
    TranscriptRow row;
    row.t = t + 1;
    row.x = s[t].x;
    row.y = s[t].y;
    row.prediction = a.predict(s.prefix(t), s[t].x);
    row.mistake = !row.prediction || *row.prediction != row.y;
    rows = s[t].x < h.domain_size() ? with_label(rows, s[t].x, s[t].y) : std::vector<Row>{};
    row.version_space = rows.size();
    row.version_space_ldim = memo.of(rows);
    out.push_back(row);
  }
  return out;
}

}  // namespace colearn
