#include "colearn/significance.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

#include "colearn/game.hpp"
#include "colearn/learners.hpp"
#include "colearn/littlestone.hpp"

namespace colearn {

std::string to_string(SignificanceKind k) { return k == SignificanceKind::optimal ? "optimal" : "a-optimal"; }

namespace {

std::vector<Row> with_label(const std::vector<Row>& rows, Instance x, Label y) {
  std::vector<Row> out;
  for (Row r : rows)
    if (row_value(r, x) == y) out.push_back(r);
  return out;
}

void check_input(const FiniteClass& h, const Sample& s, Instance x) {
  if (x >= h.domain_size()) throw PreconditionViolated("instance " + std::to_string(x) + " outside the domain");
  for (const auto& it : s)
    if (it.x >= h.domain_size())
      throw PreconditionViolated("instance " + std::to_string(it.x) + " outside the domain");
  if (!is_realizable(h, s)) throw NotRealizable("sample " + s.to_string() + " is not realizable");
}

StepEvidence step(LdimMemo& memo, const std::vector<Row>& rows, std::size_t t, Instance x,
                  std::optional<Label> y) {
  StepEvidence ev;
  ev.t = t;
  ev.x = x;
  ev.y = y;
  ev.ldim_before = memo.of(rows);
  ev.ldim0 = memo.of(with_label(rows, x, 0));
  ev.ldim1 = memo.of(with_label(rows, x, 1));
  ev.critical = std::max(ev.ldim0, ev.ldim1) == ev.ldim_before;
  if (y) ev.gentle = (*y ? ev.ldim1 : ev.ldim0) >= ev.ldim_before - 1;
  return ev;
}

Label argmax(const StepEvidence& ev) { return ev.ldim1 > ev.ldim0 ? 1 : 0; }

// Replay with per-step evidence; the last entry is for x itself.
std::vector<StepEvidence> replay(const FiniteClass& h, const Sample& s, std::optional<Instance> x) {
  LdimMemo memo(h.domain_size());
  std::vector<Row> rows = h.rows();
  std::vector<StepEvidence> out;
  for (std::size_t t = 0; t < s.size(); ++t) {
    out.push_back(step(memo, rows, t + 1, s[t].x, s[t].y));
    rows = with_label(rows, s[t].x, s[t].y);
  }
  if (x) out.push_back(step(memo, rows, s.size() + 1, *x, std::nullopt));
  return out;
}

void check_caps(const FiniteClass& h, std::size_t horizon, const OracleCaps& caps) {
  if (h.domain_size() > caps.max_domain || h.size() > caps.max_rows || horizon > caps.max_horizon)
    throw InstanceTooLarge("oracle caps: domain <= " + std::to_string(caps.max_domain) + ", rows <= " +
                           std::to_string(caps.max_rows) + ", horizon <= " + std::to_string(caps.max_horizon));
  if (horizon == 0) throw InstanceTooLarge("oracle horizon must be positive");
}

// Exact best worst-case mistakes over learner tables when some predictions
// along S are pinned. The free parts are capped minimax values.
class PathGame {
 public:
  PathGame(const FiniteClass& h, const Sample& s, std::size_t horizon)
      : mm_(h.domain_size()), s_(s), length_(s.size() + horizon) {
    rows_.push_back(h.rows());
    for (const auto& it : s) rows_.push_back(with_label(rows_.back(), it.x, it.y));
  }

  int optimum() { return mm_.capped(rows_[0], length_); }
  int free(std::size_t t) { return mm_.capped(rows_[t], length_ - t); }

  // Value at node t when x is predicted p and the y_child branch has value
  // `child` (other branches free).
  int pinned(std::size_t t, Instance x, Label p, std::optional<std::pair<Label, int>> child) {
    const std::size_t k = length_ - t;
    if (k == 0) return 0;
    int worst = -1;
    for (Label y : {Label{0}, Label{1}}) {
      const auto next = with_label(rows_[t], x, y);
      if (next.empty()) continue;
      const int v = child && child->first == y ? child->second : mm_.capped(next, k - 1);
      worst = std::max(worst, (p != y ? 1 : 0) + v);
    }
    return std::max(free(t), worst);
  }

  // Climbs from node T with value v, predictions along S given by `pins`
  // (nullopt: free choice).
  int climb(int v, const std::vector<std::optional<Label>>& pins) {
    for (std::size_t t = s_.size(); t-- > 0;) {
      const auto child = std::make_pair(s_[t].y, v);
      if (pins[t]) {
        v = pinned(t, s_[t].x, *pins[t], child);
      } else {
        v = std::min(pinned(t, s_[t].x, 0, child), pinned(t, s_[t].x, 1, child));
      }
    }
    return v;
  }

  const std::vector<Row>& rows(std::size_t t) const { return rows_[t]; }
  Minimax& minimax() { return mm_; }
  std::size_t length() const { return length_; }

 private:
  Minimax mm_;
  Sample s_;
  std::size_t length_;
  std::vector<std::vector<Row>> rows_;
};

SignificanceVerdict from_feasible(SignificanceKind kind, std::set<Label> feasible, std::string note) {
  SignificanceVerdict v;
  v.kind = kind;
  v.feasible = std::move(feasible);
  v.significant = v.feasible.size() == 1;
  if (v.significant) v.forced = *v.feasible.begin();
  v.note = std::move(note);
  return v;
}

}  // namespace

bool ldim_imbalance(const FiniteClass& h, const Sample& s, Instance x) {
  check_input(h, s, x);
  const auto ev = replay(h, s, x).back();
  return ev.ldim0 != ev.ldim1;
}

SignificanceVerdict is_aopt_significant(const FiniteClass& h, const Sample& s, Instance x) {
  check_input(h, s, x);
  SignificanceVerdict v;
  v.kind = SignificanceKind::anytime_optimal;
  v.steps = {replay(h, s, x).back()};
  const auto& ev = v.steps.back();
  v.significant = ev.critical && ev.ldim0 != ev.ldim1;
  if (v.significant) v.forced = argmax(ev);
  return v;
}

SignificanceVerdict is_opt_significant(const FiniteClass& h, const Sample& s, Instance x) {
  check_input(h, s, x);
  SignificanceVerdict v;
  v.kind = SignificanceKind::optimal;
  v.steps = replay(h, s, x);
  v.significant = std::all_of(v.steps.begin(), v.steps.end(),
                              [](const StepEvidence& ev) { return ev.critical && ev.gentle; });
  if (v.significant) v.forced = argmax(v.steps.back());
  return v;
}

SignificanceVerdict brute_force_opt_significant(const FiniteClass& h, const Sample& s, Instance x,
                                                std::size_t horizon, OracleCaps caps) {
  check_caps(h, horizon, caps);
  check_input(h, s, x);
  PathGame game(h, s, horizon);
  const int best = game.optimum();
  std::set<Label> feasible;
  std::ostringstream note;
  note << "optimum=" << best;
  for (Label r : {Label{0}, Label{1}}) {
    const int at_s = game.pinned(s.size(), x, r, std::nullopt);
    const int v = game.climb(at_s, std::vector<std::optional<Label>>(s.size()));
    note << " pinned" << static_cast<int>(r) << '=' << v;
    if (v <= best) feasible.insert(r);
  }
  return from_feasible(SignificanceKind::optimal, std::move(feasible), note.str());
}

SignificanceVerdict brute_force_aopt_significant(const FiniteClass& h, const Sample& s, Instance x,
                                                 std::size_t horizon, OracleCaps caps) {
  check_caps(h, horizon, caps);
  check_input(h, s, x);
  const auto rows = restrict(h, s).rows();
  Minimax mm(h.domain_size());
  const int best = mm.capped(rows, horizon);
  std::set<Label> feasible;
  std::ostringstream note;
  note << "optimum=" << best;
  for (Label r : {Label{0}, Label{1}}) {
    int worst = -1;
    for (Label y : {Label{0}, Label{1}}) {
      const auto next = with_label(rows, x, y);
      if (!next.empty()) worst = std::max(worst, (r != y ? 1 : 0) + mm.capped(next, horizon - 1));
    }
    note << " pinned" << static_cast<int>(r) << '=' << worst;
    if (worst <= best) feasible.insert(r);
  }
  return from_feasible(SignificanceKind::anytime_optimal, std::move(feasible), note.str());
}

std::set<std::size_t> optimal_mistakes_on_sample(const FiniteClass& h, const Sample& s, std::size_t horizon,
                                                 OracleCaps caps) {
  check_caps(h, horizon, caps);
  if (!is_realizable(h, s)) throw NotRealizable("sample " + s.to_string() + " is not realizable");
  PathGame game(h, s, horizon);
  const int best = game.optimum();
  const int bottom = game.free(s.size());
  std::set<std::size_t> out;
  const std::size_t patterns = std::size_t{1} << s.size();
  for (std::size_t mask = 0; mask < patterns; ++mask) {
    std::vector<std::optional<Label>> pins(s.size());
    std::size_t mistakes = 0;
    for (std::size_t t = 0; t < s.size(); ++t) {
      pins[t] = static_cast<Label>((mask >> t) & 1);
      if (*pins[t] != s[t].y) ++mistakes;
    }
    if (game.climb(bottom, pins) <= best) out.insert(mistakes);
  }
  return out;
}

std::map<std::pair<Sample, Instance>, std::set<Label>> optimal_table_predictions(const FiniteClass& h,
                                                                                std::size_t length) {
  if (h.domain_size() > 3 || length > 2 || length == 0)
    throw InstanceTooLarge("table enumeration needs domain <= 3 and 1 <= length <= 2");
  // Table cells: (history, x) over realizable histories shorter than length.
  std::vector<Sample> histories{Sample{}};
  if (length == 2)
    for (Instance x = 0; x < h.domain_size(); ++x)
      for (Label y : {Label{0}, Label{1}})
        if (is_realizable(h, Sample{{x, y}})) histories.push_back(Sample{{x, y}});
  std::vector<std::pair<Sample, Instance>> cells;
  std::map<std::pair<Sample, Instance>, std::size_t> cell_index;
  for (const auto& hist : histories)
    for (Instance x = 0; x < h.domain_size(); ++x) {
      cell_index[{hist, x}] = cells.size();
      cells.emplace_back(hist, x);
    }
  if (cells.size() > 24) throw InstanceTooLarge("too many table cells");

  // Realizable paths of exactly `length` steps; mistakes are monotone.
  std::vector<Sample> paths;
  std::function<void(const Sample&)> grow = [&](const Sample& p) {
    if (p.size() == length) {
      paths.push_back(p);
      return;
    }
    for (Instance x = 0; x < h.domain_size(); ++x)
      for (Label y : {Label{0}, Label{1}}) {
        auto q = p.appended({x, y});
        if (is_realizable(h, q)) grow(q);
      }
  };
  grow(Sample{});
  std::vector<std::vector<std::pair<std::size_t, Label>>> path_cells;
  for (const auto& p : paths) {
    std::vector<std::pair<std::size_t, Label>> pc;
    for (std::size_t t = 0; t < p.size(); ++t) pc.emplace_back(cell_index.at({p.prefix(t), p[t].x}), p[t].y);
    path_cells.push_back(std::move(pc));
  }

  const std::uint64_t tables = std::uint64_t{1} << cells.size();
  std::vector<std::size_t> bound(tables, 0);
  std::size_t best = static_cast<std::size_t>(-1);
  for (std::uint64_t table = 0; table < tables; ++table) {
    std::size_t worst = 0;
    for (const auto& pc : path_cells) {
      std::size_t m = 0;
      for (const auto& [cell, y] : pc)
        if (((table >> cell) & 1) != y) ++m;
      worst = std::max(worst, m);
    }
    bound[table] = worst;
    best = std::min(best, worst);
  }
  std::map<std::pair<Sample, Instance>, std::set<Label>> out;
  for (std::uint64_t table = 0; table < tables; ++table) {
    if (bound[table] != best) continue;
    for (std::size_t c = 0; c < cells.size(); ++c) out[cells[c]].insert(static_cast<Label>((table >> c) & 1));
  }
  return out;
}

SignificantMistakes check_significant_mistakes(const FiniteClass& h, const Sample& s, Instance x,
                                std::optional<std::size_t> oracle_horizon) {
  const auto verdict = is_opt_significant(h, s, x);
  if (!verdict.significant)
    throw PreconditionViolated("(" + s.to_string() + ", " + std::to_string(x) + ") is not optimally significant");
  SignificantMistakes c;
  c.m = mistakes_on_sample(*sol(h), s);
  c.ldim_h = ldim(h);
  c.ldim_hs = ldim(restrict(h, s));
  c.holds = c.ldim_hs == c.ldim_h - static_cast<int>(c.m);
  if (oracle_horizon) {
    c.oracle_m = optimal_mistakes_on_sample(h, s, *oracle_horizon);
    c.holds = c.holds && c.oracle_m == std::set<std::size_t>{c.m};
  }
  return c;
}

MistakeConditions check_mistake_conditions(const FiniteClass& h, const Sample& s, std::size_t horizon, OracleCaps caps) {
  check_caps(h, horizon, caps);
  if (!is_realizable(h, s)) throw NotRealizable("sample " + s.to_string() + " is not realizable");
  MistakeConditions out;
  const auto steps = replay(h, s, std::nullopt);
  out.condition_a =
      std::all_of(steps.begin(), steps.end(), [](const StepEvidence& ev) { return ev.critical && ev.gentle; });
  const int target = ldim(h) - ldim(restrict(h, s));
  const auto ms = optimal_mistakes_on_sample(h, s, horizon, caps);
  out.condition_b = ms == std::set<std::size_t>{static_cast<std::size_t>(target)};
  return out;
}

Ldim1Report verify_ldim1_all_significant(const EnumerableClass& h, std::size_t truncation, std::size_t instances,
                                         std::size_t max_length, std::size_t window) {
  Ldim1Report rep;
  const std::size_t budget = h.enumeration_budget();
  if (window == 0) window = std::min<std::size_t>(std::max(budget, instances), kMaxDomain);
  window = std::max(window, instances);
  const FiniteClass trunc = h.window(truncation, window);
  const FiniteClass full = h.window(budget, window);
  rep.truncation_size = trunc.size();
  rep.budget_size = full.size();
  if (truncation >= budget) rep.violations.push_back("truncation not below the enumeration budget");
  if (full.size() <= trunc.size()) rep.violations.push_back("no growth past the truncation within the budget");
  for (std::size_t k = 1; k <= truncation; ++k)
    if (h.window(k, window).size() < h.window(k - 1, window).size()) {
      rep.violations.push_back("enumeration not monotone");
      break;
    }
  rep.ldim = ldim(full);
  if (rep.ldim != 1) rep.violations.push_back("ldim " + std::to_string(rep.ldim) + " != 1");
  rep.precondition_ok = rep.violations.empty();
  if (rep.ldim < 0 || rep.ldim > 1) return rep;

  rep.all_significant = true;
  std::function<bool(const Sample&)> sweep = [&](const Sample& s) {
    for (Instance x = 0; x < instances; ++x) {
      ++rep.inputs_checked;
      if (!is_opt_significant(full, s, x).significant) {
        rep.all_significant = false;
        rep.counterexample = std::make_pair(s, x);
        return false;
      }
    }
    if (s.size() == max_length) return true;
    for (Instance x = 0; x < instances; ++x)
      for (Label y : {Label{0}, Label{1}}) {
        auto next = s.appended({x, y});
        if (is_realizable(full, next) && !sweep(next)) return false;
      }
    return true;
  };
  sweep(Sample{});
  return rep;
}

}  // namespace colearn
