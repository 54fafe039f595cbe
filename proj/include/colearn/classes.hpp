#pragma once

// Hypothesis classes: finite behaviour tables over a dense domain prefix, and
// budgeted enumerable streams of total hypotheses.

#include <cstddef>
#include <functional>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "colearn/core.hpp"

namespace colearn {

/// One hypothesis restricted to the represented domain, bit x = h(x).
using Row = unsigned __int128;

inline constexpr std::size_t kMaxDomain = 128;

inline Label row_value(Row r, Instance x) { return static_cast<Label>((r >> x) & 1u); }
inline Row row_bit(Instance x) { return Row{1} << x; }

struct RowHash {
  std::size_t operator()(Row r) const noexcept;
};

struct RowSetHash {
  std::size_t operator()(const std::vector<Row>& rows) const noexcept;
};

struct ParseError : std::runtime_error {
  ParseError(const std::string& what, std::size_t line);
  std::size_t line;
};

/// Distinct rows over the domain {0, ..., domain_size - 1}. Rows are kept
/// sorted and deduplicated, so equal behaviour sets compare equal.
class FiniteClass {
 public:
  FiniteClass() = default;
  FiniteClass(std::size_t domain_size, std::vector<Row> rows);

  static FiniteClass from_strings(std::size_t domain_size, const std::vector<std::string>& rows);

  std::size_t domain_size() const { return domain_size_; }
  const std::vector<Row>& rows() const { return rows_; }
  std::size_t size() const { return rows_.size(); }
  bool empty() const { return rows_.empty(); }
  bool contains(Row r) const;

  std::string row_string(Row r) const;
  std::vector<std::string> row_strings() const;

  friend bool operator==(const FiniteClass&, const FiniteClass&) = default;

 private:
  std::size_t domain_size_ = 0;
  std::vector<Row> rows_;
};

/// A total 0/1 function on the naturals, optionally with a known finite support.
struct Hypothesis {
  std::function<Label(Instance)> evaluate;
  std::optional<std::set<Instance>> support;
  std::string provenance;

  static Hypothesis indicator(std::set<Instance> support, std::string provenance = {});
  static Hypothesis from_row(Row r, std::string provenance = {});

  Label operator()(Instance x) const { return evaluate(x); }
};

/// Result of probing one enumeration slot.
struct EnumSlot {
  enum class Kind { present, absent, unknown };
  Kind kind = Kind::absent;
  std::optional<Hypothesis> hypothesis;
  /// Fuel consumed to resolve the slot.
  std::size_t cost = 1;
};

enum class Tri { no, yes, unknown };

std::string to_string(Tri t);

/// A class given by a deterministic generator over slot indices. Absent and
/// unresolved slots are reported, not skipped.
class EnumerableClass {
 public:
  using Generator = std::function<EnumSlot(std::size_t index)>;

  EnumerableClass(Generator generator, std::size_t enumeration_budget,
                  std::size_t evaluation_budget = 0, bool exhaustive = false);

  /// Embeds a finite class: slot i is row i, slots past the rows are absent.
  static EnumerableClass from_finite(const FiniteClass& h, std::size_t enumeration_budget);

  EnumSlot slot(std::size_t index) const;
  std::size_t enumeration_budget() const { return enumeration_budget_; }
  std::size_t evaluation_budget() const { return evaluation_budget_; }
  /// True when every member of the class sits in a slot below the budget.
  bool exhaustive() const { return exhaustive_; }

  /// Same slots with hypotheses inconsistent with s turned absent.
  EnumerableClass restricted(const Sample& s) const;

  /// Present hypotheses among the first `slots` slots, evaluated on
  /// instances below `instances`.
  FiniteClass window(std::size_t slots, std::size_t instances) const;

 private:
  Generator generator_;
  std::size_t enumeration_budget_;
  std::size_t evaluation_budget_;
  bool exhaustive_;
};

FiniteClass constrain(const FiniteClass& h, Instance x, Label y);
FiniteClass restrict(const FiniteClass& h, const Sample& s);

std::size_t empirical_loss(const Hypothesis& h, const Sample& s);
std::size_t empirical_loss(Row r, const Sample& s);

bool is_realizable(const FiniteClass& h, const Sample& s);
Tri is_realizable(const EnumerableClass& h, const Sample& s);

/// Thresholds 1_[n], n = 1..2^d; instance k is stored at k - 1.
FiniteClass thresholds(unsigned d);
FiniteClass singletons(std::size_t n);
/// thresholds(d) plus 1_E, E = {2^d + i : 1 <= i <= d - 1}, same offset.
FiniteClass hd_prime(unsigned d);
/// Stored index of an instance written in the 1-based numbering of
/// thresholds/hd_prime.
inline Instance threshold_instance(Instance one_based) { return one_based - 1; }

FiniteClass class_from_json(const std::string& text);
FiniteClass class_from_file(const std::string& path);
std::string class_to_json(const FiniteClass& h);

}  // namespace colearn
