#pragma once

// Shared vocabulary: labels, instances, samples, and the integer encodings
// used to hand histories to machine-level learners.

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace colearn {

using BigNat = boost::multiprecision::cpp_int;

/// Dense domain instance. Constructions over sparse naturals map their
/// instances onto this range through an InstanceMap.
using Instance = std::uint64_t;

/// A binary label; always 0 or 1.
using Label = std::uint8_t;

struct DecodeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NotRealizable : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct PreconditionViolated : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct LabeledInstance {
  Instance x = 0;
  Label y = 0;

  friend bool operator==(const LabeledInstance&, const LabeledInstance&) = default;
  friend auto operator<=>(const LabeledInstance&, const LabeledInstance&) = default;
};

/// Finite sequence of labeled instances.
class Sample {
 public:
  Sample() = default;
  Sample(std::initializer_list<LabeledInstance> items);
  explicit Sample(std::vector<LabeledInstance> items);

  std::size_t size() const { return items_.size(); }
  bool empty() const { return items_.empty(); }
  const LabeledInstance& operator[](std::size_t i) const { return items_[i]; }
  auto begin() const { return items_.begin(); }
  auto end() const { return items_.end(); }
  const std::vector<LabeledInstance>& items() const { return items_; }

  /// First n items; prefix(0) is the empty sample.
  Sample prefix(std::size_t n) const;
  Sample appended(LabeledInstance item) const;
  Sample concat(const Sample& tail) const;
  void push_back(LabeledInstance item);
  void pop_back() { items_.pop_back(); }

  /// Flattened (x_1, y_1, ..., x_T, y_T).
  std::vector<BigNat> flatten() const;

  std::string to_string() const;
  /// Inverse of to_string; whitespace is ignored. Throws std::invalid_argument.
  static Sample parse(const std::string& text);

  friend bool operator==(const Sample&, const Sample&) = default;
  friend auto operator<=>(const Sample& a, const Sample& b) { return a.items_ <=> b.items_; }

 private:
  std::vector<LabeledInstance> items_;
};

/// i-th prime, 1-based: nth_prime(1) == 2.
std::uint64_t nth_prime(std::size_t i);

/// Prime-power encoding: prod p_i^(z_i + 1). The empty sequence maps to 1.
BigNat encode_sequence(const std::vector<BigNat>& z);
BigNat encode_sequence(std::initializer_list<std::uint64_t> z);

/// Inverse of encode_sequence; throws DecodeError outside its range.
std::vector<BigNat> decode_sequence(const BigNat& code);

BigNat encode_sample(const Sample& s);
Sample decode_sample(const BigNat& code);

/// Canonical index of a finite set: sum of 2^x.
BigNat canonical_index(const std::set<BigNat>& f);
BigNat canonical_index(const std::set<Instance>& f);
std::set<BigNat> decode_canonical(const BigNat& y);

std::string to_decimal(const BigNat& n);

}  // namespace colearn
