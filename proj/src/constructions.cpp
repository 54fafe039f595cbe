#include "colearn/constructions.hpp"

#include <algorithm>
#include <bit>

#include "json.hpp"

namespace colearn {

InstanceMap::InstanceMap(std::set<BigNat> values) : values_(values.begin(), values.end()) {}

InstanceMap InstanceMap::identity(std::size_t n) {
  std::set<BigNat> v;
  for (std::size_t i = 0; i < n; ++i) v.insert(BigNat(i));
  return InstanceMap(std::move(v));
}

std::optional<Instance> InstanceMap::compact(const BigNat& v) const {
  auto it = std::lower_bound(values_.begin(), values_.end(), v);
  if (it == values_.end() || *it != v) return std::nullopt;
  return static_cast<Instance>(it - values_.begin());
}

Row ConstructedClass::row_of(const std::set<BigNat>& support) const {
  Row r = 0;
  for (const auto& v : support) {
    const auto i = map.compact(v);
    if (!i) throw std::out_of_range("support element " + v.str() + " outside the instance map");
    r |= row_bit(*i);
  }
  return r;
}

Sample ConstructedClass::compact(const std::vector<std::pair<BigNat, Label>>& items) const {
  Sample s;
  for (const auto& [v, y] : items) {
    const auto i = map.compact(v);
    if (!i) throw std::out_of_range("instance " + v.str() + " outside the instance map");
    s.push_back({*i, y});
  }
  return s;
}

std::string ConstructedClass::map_json() const {
  nlohmann::json j = nlohmann::json::object();
  for (std::size_t i = 0; i < map.size(); ++i) j[std::to_string(i)] = map.value(i).str();
  return j.dump(2);
}

ConstructedClass assemble(std::vector<std::set<BigNat>> supports, std::vector<std::string> labels,
                          std::optional<InstanceMap> map) {
  ConstructedClass c;
  if (map) {
    c.map = std::move(*map);
  } else {
    std::set<BigNat> all;
    for (const auto& s : supports) all.insert(s.begin(), s.end());
    c.map = InstanceMap(std::move(all));
  }
  if (c.map.size() > kMaxDomain)
    throw std::invalid_argument("construction needs " + std::to_string(c.map.size()) + " instances, limit is " +
                                std::to_string(kMaxDomain));
  c.supports = std::move(supports);
  c.labels = std::move(labels);
  std::vector<Row> rows;
  for (const auto& s : c.supports) rows.push_back(c.row_of(s));
  c.cls = FiniteClass(c.map.size(), std::move(rows));
  return c;
}

BigNat pow_big(unsigned base, std::uint64_t exp) {
  return boost::multiprecision::pow(BigNat(base), static_cast<unsigned>(exp));
}

BigNat prime_power_instance(std::uint64_t e, unsigned p, std::uint64_t k) { return pow_big(2, e) * pow_big(p, k); }

namespace {

std::set<BigNat> naturals(std::initializer_list<std::uint64_t> xs) {
  std::set<BigNat> out;
  for (auto x : xs) out.insert(BigNat(x));
  return out;
}

}  // namespace

std::vector<std::set<BigNat>> rer_halt_block(const HaltingOracle& oracle, std::uint64_t e, std::uint64_t s_max) {
  std::vector<std::set<BigNat>> out{naturals({3 * e})};
  if (oracle.halts_within(e, BigNat(e), s_max)) {
    out.push_back(naturals({3 * e, 3 * e + 1}));
    out.push_back(naturals({3 * e, 3 * e + 1, 3 * e + 2}));
  }
  return out;
}

ConstructedClass build_h_rer_halt(const HaltingOracle& oracle, std::uint64_t e_max, std::uint64_t s_max) {
  std::vector<std::set<BigNat>> supports;
  std::vector<std::string> labels;
  for (std::uint64_t e = 0; e <= e_max; ++e) {
    const auto block = rer_halt_block(oracle, e, s_max);
    for (std::size_t k = 0; k < block.size(); ++k) {
      supports.push_back(block[k]);
      labels.push_back("e=" + std::to_string(e) + (k == 0 ? " base" : k == 1 ? " pair" : " triple"));
    }
  }
  return assemble(std::move(supports), std::move(labels), InstanceMap::identity(3 * (e_max + 1)));
}

ConstructedClass build_h_halting(const HaltingOracle& oracle, std::uint64_t e_max, std::uint64_t s_max) {
  std::vector<std::set<BigNat>> supports;
  std::vector<std::string> labels;
  for (std::uint64_t e = 0; e <= e_max; ++e) {
    if (oracle.halts_within(e, BigNat(e), s_max)) {
      supports.push_back(naturals({2 * e, 2 * e + 1}));
      labels.push_back("e=" + std::to_string(e) + " halts");
    } else {
      supports.push_back(naturals({2 * e}));
      labels.push_back("e=" + std::to_string(e) + " diverges");
    }
  }
  return assemble(std::move(supports), std::move(labels), InstanceMap::identity(2 * (e_max + 1)));
}

DrFacts dr_facts(const HaltingOracle& oracle, std::uint64_t e) {
  DrFacts f;
  if (oracle.evaluate(e, BigNat(0)).converges()) f.c0 = oracle.certificate_index(e, BigNat(0));
  f.self = oracle.evaluate(e, BigNat(e));
  if (f.self.converges()) f.ce = oracle.certificate_index(e, BigNat(e));
  return f;
}

std::vector<std::set<BigNat>> dr_ext_block(const HaltingOracle& oracle, std::uint64_t e) {
  const auto f = dr_facts(oracle, e);
  if (!f.c0) return {};
  const BigNat base = pow_big(2, e);
  const auto c0 = *f.c0;
  std::vector<std::set<BigNat>> out{{base, prime_power_instance(e, 3, c0)}};
  if (f.ce && f.self.converges_to(1)) {
    out.push_back({base, prime_power_instance(e, 5, c0), prime_power_instance(e, 7, *f.ce)});
    out.push_back({base, prime_power_instance(e, 5, c0), prime_power_instance(e, 11, *f.ce)});
  } else if (f.ce && f.self.converges_to(0)) {
    out.push_back({base, prime_power_instance(e, 5, c0), prime_power_instance(e, 13, *f.ce)});
    out.push_back({base, prime_power_instance(e, 3, c0), prime_power_instance(e, 13, *f.ce)});
  }
  return out;
}

std::vector<std::set<BigNat>> dr_halt_block(const HaltingOracle& oracle, std::uint64_t e) {
  const auto f = dr_facts(oracle, e);
  if (!f.c0) return {};
  const BigNat base = pow_big(2, e);
  const auto c0 = *f.c0;
  std::vector<std::set<BigNat>> out{{base, prime_power_instance(e, 3, c0)}};
  if (f.ce) {
    out.push_back({base, prime_power_instance(e, 5, c0), prime_power_instance(e, 7, *f.ce)});
    out.push_back({base, prime_power_instance(e, 5, c0), prime_power_instance(e, 11, *f.ce)});
  }
  return out;
}

namespace {

ConstructedClass build_blocks(std::uint64_t e_max,
                              const std::function<std::vector<std::set<BigNat>>(std::uint64_t)>& block) {
  std::vector<std::set<BigNat>> supports;
  std::vector<std::string> labels;
  for (std::uint64_t e = 0; e <= e_max; ++e) {
    const auto b = block(e);
    for (std::size_t k = 0; k < b.size(); ++k) {
      supports.push_back(b[k]);
      labels.push_back("e=" + std::to_string(e) + " member " + std::to_string(k));
    }
  }
  return assemble(std::move(supports), std::move(labels));
}

}  // namespace

ConstructedClass build_h_dr_ext(const HaltingOracle& oracle, std::uint64_t e_max) {
  return build_blocks(e_max, [&](std::uint64_t e) { return dr_ext_block(oracle, e); });
}

ConstructedClass build_h_dr_halt(const HaltingOracle& oracle, std::uint64_t e_max) {
  return build_blocks(e_max, [&](std::uint64_t e) { return dr_halt_block(oracle, e); });
}

std::optional<PrimePowerShape> prime_power_shape(const std::set<BigNat>& support) {
  if (support.size() < 2 || support.size() > 3) return std::nullopt;
  std::optional<std::uint64_t> e;
  bool have_base = false;
  PrimePowerShape shape;
  for (const auto& v : support) {
    if (v <= 0) return std::nullopt;
    const auto twos = static_cast<std::uint64_t>(lsb(v));
    if (e && *e != twos) return std::nullopt;
    e = twos;
    BigNat odd = v >> twos;
    if (odd == 1) {
      have_base = true;
      continue;
    }
    std::optional<std::pair<unsigned, std::uint64_t>> part;
    for (unsigned p : {3u, 5u, 7u, 11u, 13u}) {
      if (odd % p != 0) continue;
      std::uint64_t k = 0;
      while (odd % p == 0) {
        odd /= p;
        ++k;
      }
      if (odd == 1) part = std::make_pair(p, k);
      break;
    }
    if (!part) return std::nullopt;
    shape.parts.push_back(*part);
  }
  if (!have_base) return std::nullopt;
  std::sort(shape.parts.begin(), shape.parts.end());
  for (std::size_t k = 1; k < shape.parts.size(); ++k)
    if (shape.parts[k].first == shape.parts[k - 1].first) return std::nullopt;
  shape.e = *e;
  return shape;
}

namespace {

bool shape_is(const PrimePowerShape& s, std::initializer_list<unsigned> primes) {
  if (s.parts.size() != primes.size()) return false;
  std::size_t k = 0;
  for (unsigned p : primes)
    if (s.parts[k++].first != p) return false;
  return true;
}

}  // namespace

int dr_ext_member(const HaltingOracle& oracle, const std::set<BigNat>& support) {
  const auto shape = prime_power_shape(support);
  if (!shape) return 0;
  const auto e = shape->e;
  if (shape_is(*shape, {3})) return oracle.certificate_matches(e, shape->parts[0].second, BigNat(0)) ? 1 : 0;
  const bool known = shape_is(*shape, {5, 7}) || shape_is(*shape, {5, 11}) || shape_is(*shape, {5, 13}) ||
                     shape_is(*shape, {3, 13});
  if (!known) return 0;
  const auto i = shape->parts[0].second, j = shape->parts[1].second;
  if (!oracle.certificate_matches(e, i, BigNat(0)) || !oracle.certificate_matches(e, j, BigNat(e))) return 0;
  const auto r = oracle.evaluate(e, BigNat(e));
  const bool has13 = shape->parts[1].first == 13;
  return (r.converges_to(0) && has13) || (r.converges_to(1) && !has13) ? 1 : 0;
}

int dr_halt_member(const HaltingOracle& oracle, const std::set<BigNat>& support) {
  const auto shape = prime_power_shape(support);
  if (!shape) return 0;
  const auto e = shape->e;
  if (shape_is(*shape, {3})) return oracle.certificate_matches(e, shape->parts[0].second, BigNat(0)) ? 1 : 0;
  if (!shape_is(*shape, {5, 7}) && !shape_is(*shape, {5, 11})) return 0;
  const auto i = shape->parts[0].second, j = shape->parts[1].second;
  return oracle.certificate_matches(e, i, BigNat(0)) && oracle.certificate_matches(e, j, BigNat(e)) ? 1 : 0;
}

int dr_decider_h_dr_ext(const HaltingOracle& oracle, const BigNat& y) {
  return dr_ext_member(oracle, decode_canonical(y));
}

int dr_decider_h_dr_halt(const HaltingOracle& oracle, const BigNat& y) {
  return dr_halt_member(oracle, decode_canonical(y));
}

std::uint64_t s1(std::uint64_t n) { return n * (n + 1) / 2; }

std::uint64_t s2(std::uint64_t n) { return n * (n + 1) * (n + 2) / 6; }

Block block_of(std::uint64_t n) {
  Block b;
  while (s2(b.i + 1) <= n) ++b.i;
  const auto offset = n - s2(b.i);
  while (s1(b.j + 1) <= offset) ++b.j;
  b.learner = b.i - b.j;
  b.start = s2(b.i) + s1(b.j);
  return b;
}

std::vector<std::uint64_t> block_instances(std::uint64_t i, std::uint64_t j) {
  if (j > i) throw std::invalid_argument("block N_{i,j} needs j <= i");
  std::vector<std::uint64_t> out;
  for (auto n = s2(i) + s1(j); n < s2(i) + s1(j + 1); ++n) out.push_back(n);
  return out;
}

SplitClass::SplitClass(std::uint64_t step_budget) : step_budget_(step_budget) {}

Label SplitClass::label(std::uint64_t n) {
  if (auto it = memo_.find(n); it != memo_.end()) return it->second;
  const Block b = block_of(n);
  Sample prior;
  for (auto k = b.start; k < n; ++k) prior.push_back({k, label(k)});
  const auto r = run_two_place(program_at(b.learner), encode_sample(prior), BigNat(n), step_budget_);
  Label l = 0;
  if (!r.halted)
    exhausted_.insert(n);
  else if (r.output == 0)
    l = 1;
  memo_.emplace(n, l);
  return l;
}

Label SplitClass::h(std::uint64_t i, std::uint64_t n) { return block_of(n).i == i ? label(n) : 0; }

FiniteClass SplitClass::truncation(std::uint64_t i_max) {
  const auto domain = s2(i_max + 1);
  if (domain > kMaxDomain) throw std::invalid_argument("truncation domain above " + std::to_string(kMaxDomain));
  std::vector<Row> rows;
  for (std::uint64_t i = 0; i <= i_max; ++i) {
    Row r = 0;
    for (auto n = s2(i); n < s2(i + 1); ++n)
      if (label(n)) r |= row_bit(n);
    rows.push_back(r);
  }
  return FiniteClass(domain, std::move(rows));
}

EnumerableClass SplitClass::enumerable(std::uint64_t i_max, std::size_t enumeration_budget) {
  std::vector<std::set<Instance>> supports;
  for (std::uint64_t i = 0; i <= i_max; ++i) {
    std::set<Instance> s;
    for (auto n = s2(i); n < s2(i + 1); ++n)
      if (label(n)) s.insert(n);
    supports.push_back(std::move(s));
  }
  auto shared = std::make_shared<const std::vector<std::set<Instance>>>(std::move(supports));
  EnumerableClass::Generator gen = [shared](std::size_t i) {
    EnumSlot slot;
    if (i < shared->size()) {
      slot.kind = EnumSlot::Kind::present;
      slot.hypothesis = Hypothesis::indicator((*shared)[i], "h_" + std::to_string(i));
    } else {
      slot.kind = EnumSlot::Kind::unknown;
    }
    return slot;
  };
  return EnumerableClass(std::move(gen), enumeration_budget, step_budget_, false);
}

Sample SplitClass::forcing_sample(std::uint64_t e, std::uint64_t m) {
  const auto i = m + e;
  Sample s;
  for (auto n : block_instances(i, m)) s.push_back({n, h(i, n)});
  return s;
}

Row InitClass::row(std::uint64_t s) const {
  Row r = 0;
  for (std::size_t x = 0; x < self_halting.size(); ++x)
    if (self_halting[x] && *self_halting[x] <= s) r |= row_bit(x);
  return r;
}

InitClass build_h_init(std::uint64_t s_max, std::uint64_t x_max) {
  if (x_max >= kMaxDomain) throw std::invalid_argument("x_max must stay below " + std::to_string(kMaxDomain));
  InitClass c;
  c.s_max = s_max;
  for (std::uint64_t x = 0; x <= x_max; ++x) {
    const auto r = run(program_at(x), BigNat(x), s_max);
    c.self_halting.push_back(r.halted ? std::optional<std::uint64_t>(r.steps) : std::nullopt);
  }
  std::vector<Row> rows;
  for (std::uint64_t s = 0; s <= s_max; ++s) rows.push_back(c.row(s));
  c.cls = FiniteClass(x_max + 1, std::move(rows));
  return c;
}

namespace {

bool extend_thresholds(const FiniteClass& h, std::size_t k, ThresholdWitness& w) {
  if (w.points.size() == k) return true;
  for (Instance x = 0; x < h.domain_size(); ++x) {
    if (std::find(w.points.begin(), w.points.end(), x) != w.points.end()) continue;
    if (std::any_of(w.hypotheses.begin(), w.hypotheses.end(), [x](Row r) { return row_value(r, x) == 1; })) continue;
    for (Row r : h.rows()) {
      if (!row_value(r, x)) continue;
      if (!std::all_of(w.points.begin(), w.points.end(), [r](Instance p) { return row_value(r, p) == 1; })) continue;
      w.points.push_back(x);
      w.hypotheses.push_back(r);
      if (extend_thresholds(h, k, w)) return true;
      w.points.pop_back();
      w.hypotheses.pop_back();
    }
  }
  return false;
}

void fill_tree(const ThresholdWitness& w, std::size_t lo, std::size_t size, std::size_t node,
               std::vector<Instance>& nodes) {
  if (size < 2) return;
  const std::size_t mid = lo + size / 2;
  nodes[node - 1] = w.points[mid];
  fill_tree(w, lo, size / 2, 2 * node, nodes);
  fill_tree(w, mid, size / 2, 2 * node + 1, nodes);
}

}  // namespace

std::optional<ThresholdWitness> find_thresholds(const FiniteClass& h, std::size_t k) {
  ThresholdWitness w;
  if (k == 0) return w;
  if (extend_thresholds(h, k, w)) return w;
  return std::nullopt;
}

ShatteredTree threshold_tree(const ThresholdWitness& w) {
  if (w.points.empty()) return ShatteredTree{};
  const unsigned depth = static_cast<unsigned>(std::bit_width(w.points.size()) - 1);
  ShatteredTree t;
  t.depth = depth;
  t.nodes.assign((std::size_t{1} << depth) - 1, 0);
  fill_tree(w, 0, std::size_t{1} << depth, 1, t.nodes);
  return t;
}

// Supports near the members of a block that are not members.
std::vector<std::set<BigNat>> perturbed_supports(const std::vector<std::set<BigNat>>& members, std::size_t want) {
  std::set<std::set<BigNat>> known(members.begin(), members.end());
  std::vector<std::set<BigNat>> out;
  auto offer = [&](std::set<BigNat> s) {
    if (out.size() < want && !known.count(s)) {
      known.insert(s);
      out.push_back(std::move(s));
    }
  };
  for (std::size_t round = 1; out.size() < want && round < 64; ++round) {
    for (const auto& m : members) {
      for (const auto& v : m) {
        auto drop = m;
        drop.erase(v);
        offer(drop);
        auto up = m;
        up.erase(v);
        up.insert(v * (round % 2 ? 3 : 5) * round);
        offer(up);
      }
      auto extra = m;
      extra.insert(*m.begin() * pow_big(17, round));
      offer(extra);
      std::set<BigNat> shifted;
      for (const auto& v : m) shifted.insert(v * pow_big(2, round));
      offer(shifted);
    }
  }
  return out;
}

}  // namespace colearn
