#include "colearn/classes.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace colearn {

std::size_t RowHash::operator()(Row r) const noexcept {
  const auto lo = static_cast<std::uint64_t>(r);
  const auto hi = static_cast<std::uint64_t>(r >> 64);
  std::uint64_t h = lo * 0x9E3779B97F4A7C15ull;
  h ^= hi + 0x7F4A7C159E3779B9ull + (h << 6) + (h >> 2);
  return static_cast<std::size_t>(h);
}

std::size_t RowSetHash::operator()(const std::vector<Row>& rows) const noexcept {
  std::size_t h = rows.size();
  RowHash rh;
  for (Row r : rows) h ^= rh(r) + 0x9E3779B97F4A7C15ull + (h << 6) + (h >> 2);
  return h;
}

ParseError::ParseError(const std::string& what, std::size_t line_no)
    : std::runtime_error("line " + std::to_string(line_no) + ": " + what), line(line_no) {}

FiniteClass::FiniteClass(std::size_t domain_size, std::vector<Row> rows)
    : domain_size_(domain_size), rows_(std::move(rows)) {
  if (domain_size_ > kMaxDomain)
    throw std::invalid_argument("domain size " + std::to_string(domain_size_) + " exceeds " +
                                std::to_string(kMaxDomain));
  const Row mask = domain_size_ == kMaxDomain ? ~Row{0} : (row_bit(domain_size_) - 1);
  for (Row r : rows_)
    if (r & ~mask) throw std::invalid_argument("row has bits outside the domain");
  std::sort(rows_.begin(), rows_.end());
  rows_.erase(std::unique(rows_.begin(), rows_.end()), rows_.end());
}

FiniteClass FiniteClass::from_strings(std::size_t domain_size, const std::vector<std::string>& rows) {
  std::vector<Row> out;
  for (const auto& s : rows) {
    if (s.size() != domain_size) throw std::invalid_argument("row '" + s + "' has wrong length");
    Row r = 0;
    for (std::size_t x = 0; x < s.size(); ++x) {
      if (s[x] == '1')
        r |= row_bit(x);
      else if (s[x] != '0')
        throw std::invalid_argument("row '" + s + "' is not a bit string");
    }
    out.push_back(r);
  }
  return FiniteClass(domain_size, std::move(out));
}

bool FiniteClass::contains(Row r) const { return std::binary_search(rows_.begin(), rows_.end(), r); }

std::string FiniteClass::row_string(Row r) const {
  std::string s(domain_size_, '0');
  for (std::size_t x = 0; x < domain_size_; ++x)
    if (row_value(r, x)) s[x] = '1';
  return s;
}

std::vector<std::string> FiniteClass::row_strings() const {
  std::vector<std::string> out;
  for (Row r : rows_) out.push_back(row_string(r));
  return out;
}

Hypothesis Hypothesis::indicator(std::set<Instance> support, std::string provenance) {
  Hypothesis h;
  auto shared = std::make_shared<const std::set<Instance>>(support);
  h.evaluate = [shared](Instance x) -> Label { return shared->count(x) ? 1 : 0; };
  h.support = std::move(support);
  h.provenance = std::move(provenance);
  return h;
}

Hypothesis Hypothesis::from_row(Row r, std::string provenance) {
  std::set<Instance> support;
  for (Instance x = 0; x < kMaxDomain; ++x)
    if (row_value(r, x)) support.insert(x);
  return indicator(std::move(support), std::move(provenance));
}

std::string to_string(Tri t) {
  switch (t) {
    case Tri::no: return "no";
    case Tri::yes: return "yes";
    case Tri::unknown: return "unknown";
  }
  return "?";
}

EnumerableClass::EnumerableClass(Generator generator, std::size_t enumeration_budget,
                                 std::size_t evaluation_budget, bool exhaustive)
    : generator_(std::move(generator)),
      enumeration_budget_(enumeration_budget),
      evaluation_budget_(evaluation_budget),
      exhaustive_(exhaustive) {}

EnumerableClass EnumerableClass::from_finite(const FiniteClass& h, std::size_t enumeration_budget) {
  auto rows = std::make_shared<const std::vector<Row>>(h.rows());
  Generator gen = [rows](std::size_t i) {
    EnumSlot slot;
    if (i < rows->size()) {
      slot.kind = EnumSlot::Kind::present;
      slot.hypothesis = Hypothesis::from_row((*rows)[i], "row " + std::to_string(i));
    }
    return slot;
  };
  return EnumerableClass(std::move(gen), enumeration_budget, 0, enumeration_budget >= h.size());
}

EnumSlot EnumerableClass::slot(std::size_t index) const {
  if (index >= enumeration_budget_) {
    EnumSlot s;
    s.kind = EnumSlot::Kind::unknown;
    s.cost = 0;
    return s;
  }
  return generator_(index);
}

EnumerableClass EnumerableClass::restricted(const Sample& s) const {
  auto base = generator_;
  Generator gen = [base, s](std::size_t i) {
    EnumSlot slot = base(i);
    if (slot.kind == EnumSlot::Kind::present) {
      slot.cost += s.size();
      if (empirical_loss(*slot.hypothesis, s) != 0) {
        slot.kind = EnumSlot::Kind::absent;
        slot.hypothesis.reset();
      }
    }
    return slot;
  };
  return EnumerableClass(std::move(gen), enumeration_budget_, evaluation_budget_, exhaustive_);
}

FiniteClass EnumerableClass::window(std::size_t slots, std::size_t instances) const {
  if (instances > kMaxDomain) throw std::invalid_argument("window wider than the row type");
  std::vector<Row> rows;
  for (std::size_t i = 0; i < std::min(slots, enumeration_budget_); ++i) {
    const auto s = generator_(i);
    if (s.kind != EnumSlot::Kind::present) continue;
    Row r = 0;
    for (Instance x = 0; x < instances; ++x)
      if ((*s.hypothesis)(x)) r |= row_bit(x);
    rows.push_back(r);
  }
  return FiniteClass(instances, std::move(rows));
}

FiniteClass constrain(const FiniteClass& h, Instance x, Label y) {
  if (x >= h.domain_size()) throw std::out_of_range("instance outside the represented domain");
  std::vector<Row> rows;
  for (Row r : h.rows())
    if (row_value(r, x) == y) rows.push_back(r);
  return FiniteClass(h.domain_size(), std::move(rows));
}

FiniteClass restrict(const FiniteClass& h, const Sample& s) {
  std::vector<Row> rows;
  for (Row r : h.rows())
    if (empirical_loss(r, s) == 0) rows.push_back(r);
  for (const auto& item : s)
    if (item.x >= h.domain_size()) throw std::out_of_range("instance outside the represented domain");
  return FiniteClass(h.domain_size(), std::move(rows));
}

std::size_t empirical_loss(const Hypothesis& h, const Sample& s) {
  std::size_t loss = 0;
  for (const auto& item : s)
    if (h(item.x) != item.y) ++loss;
  return loss;
}

std::size_t empirical_loss(Row r, const Sample& s) {
  std::size_t loss = 0;
  for (const auto& item : s) {
    const Label v = item.x < kMaxDomain ? row_value(r, item.x) : 0;
    if (v != item.y) ++loss;
  }
  return loss;
}

bool is_realizable(const FiniteClass& h, const Sample& s) {
  for (const auto& item : s)
    if (item.x >= h.domain_size()) return false;
  return std::any_of(h.rows().begin(), h.rows().end(),
                     [&](Row r) { return empirical_loss(r, s) == 0; });
}

Tri is_realizable(const EnumerableClass& h, const Sample& s) {
  bool unresolved = false;
  for (std::size_t i = 0; i < h.enumeration_budget(); ++i) {
    const auto slot = h.slot(i);
    if (slot.kind == EnumSlot::Kind::unknown) unresolved = true;
    if (slot.kind == EnumSlot::Kind::present && empirical_loss(*slot.hypothesis, s) == 0)
      return Tri::yes;
  }
  return (h.exhaustive() && !unresolved) ? Tri::no : Tri::unknown;
}

FiniteClass thresholds(unsigned d) {
  if (d < 1) throw std::invalid_argument("thresholds need d >= 1");
  const std::size_t n = std::size_t{1} << d;
  std::vector<Row> rows;
  for (std::size_t k = 1; k <= n; ++k) rows.push_back(row_bit(k) - 1);
  return FiniteClass(n, std::move(rows));
}

FiniteClass singletons(std::size_t n) {
  std::vector<Row> rows;
  for (std::size_t x = 0; x < n; ++x) rows.push_back(row_bit(x));
  return FiniteClass(n, std::move(rows));
}

FiniteClass hd_prime(unsigned d) {
  if (d < 1) throw std::invalid_argument("hd_prime needs d >= 1");
  const std::size_t n = std::size_t{1} << d;
  const std::size_t domain = n + d - 1;
  std::vector<Row> rows = thresholds(d).rows();
  Row e = 0;
  for (std::size_t i = 1; i + 1 <= d; ++i) e |= row_bit(threshold_instance(n + i));
  rows.push_back(e);
  return FiniteClass(domain, std::move(rows));
}

namespace {

std::size_t line_of_offset(const std::string& text, std::size_t offset) {
  offset = std::min(offset, text.size());
  return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + offset, '\n'));
}

}  // namespace

FiniteClass class_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(e.what(), line_of_offset(text, e.byte == 0 ? 0 : e.byte - 1));
  }
  if (!j.is_object() || !j.contains("domain_size") || !j.contains("hypotheses"))
    throw ParseError("expected an object with domain_size and hypotheses", 1);
  if (!j["domain_size"].is_number_unsigned())
    throw ParseError("domain_size must be a natural", line_of_offset(text, text.find("domain_size")));
  const auto n = j["domain_size"].get<std::size_t>();
  if (n > kMaxDomain)
    throw ParseError("domain_size above " + std::to_string(kMaxDomain),
                     line_of_offset(text, text.find("domain_size")));
  if (!j["hypotheses"].is_array())
    throw ParseError("hypotheses must be an array", line_of_offset(text, text.find("hypotheses")));

  std::vector<std::string> rows;
  std::set<std::string> seen;
  std::size_t cursor = text.find("hypotheses");
  for (const auto& v : j["hypotheses"]) {
    if (!v.is_string()) throw ParseError("hypothesis must be a bit string", line_of_offset(text, cursor));
    const auto s = v.get<std::string>();
    const auto at = text.find('"' + s + '"', cursor);
    if (at != std::string::npos) cursor = at + s.size() + 2;
    const auto line = line_of_offset(text, at == std::string::npos ? cursor : at);
    if (s.size() != n)
      throw ParseError("hypothesis '" + s + "' has length " + std::to_string(s.size()) +
                           ", expected " + std::to_string(n),
                       line);
    if (s.find_first_not_of("01") != std::string::npos)
      throw ParseError("hypothesis '" + s + "' is not a bit string", line);
    if (!seen.insert(s).second) throw ParseError("duplicate hypothesis '" + s + "'", line);
    rows.push_back(s);
  }
  return FiniteClass::from_strings(n, rows);
}

FiniteClass class_from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open class file " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return class_from_json(buf.str());
}

std::string class_to_json(const FiniteClass& h) {
  nlohmann::json j;
  j["domain_size"] = h.domain_size();
  j["hypotheses"] = h.row_strings();
  return j.dump(2);
}

}  // namespace colearn
