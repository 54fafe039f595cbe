#include "colearn/core.hpp"

#include <cctype>
#include <limits>
#include <mutex>
#include <sstream>

namespace colearn {

Sample::Sample(std::initializer_list<LabeledInstance> items) : items_(items) {}

Sample::Sample(std::vector<LabeledInstance> items) : items_(std::move(items)) {}

Sample Sample::prefix(std::size_t n) const {
  if (n > items_.size()) throw std::out_of_range("sample prefix longer than sample");
  return Sample(std::vector<LabeledInstance>(items_.begin(), items_.begin() + n));
}

Sample Sample::appended(LabeledInstance item) const {
  Sample out = *this;
  out.items_.push_back(item);
  return out;
}

Sample Sample::concat(const Sample& tail) const {
  Sample out = *this;
  out.items_.insert(out.items_.end(), tail.items_.begin(), tail.items_.end());
  return out;
}

void Sample::push_back(LabeledInstance item) { items_.push_back(item); }

std::vector<BigNat> Sample::flatten() const {
  std::vector<BigNat> flat;
  flat.reserve(2 * items_.size());
  for (const auto& it : items_) {
    flat.emplace_back(it.x);
    flat.emplace_back(static_cast<unsigned>(it.y));
  }
  return flat;
}

std::string Sample::to_string() const {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < items_.size(); ++i) {
    if (i) os << ',';
    os << '(' << items_[i].x << ',' << static_cast<int>(items_[i].y) << ')';
  }
  os << ')';
  return os.str();
}

Sample Sample::parse(const std::string& text) {
  std::string t;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) t += c;
  if (t.empty() || t == "()") return {};
  if (t.size() < 2 || t.front() != '(' || t.back() != ')') throw std::invalid_argument("bad sample: " + text);
  Sample s;
  std::size_t i = 1;
  while (i + 1 < t.size()) {
    if (t[i] == ',') ++i;
    if (t[i] != '(') throw std::invalid_argument("bad sample: " + text);
    const auto comma = t.find(',', i);
    const auto close = t.find(')', i);
    if (comma == std::string::npos || close == std::string::npos || comma > close || close + 1 >= t.size())
      throw std::invalid_argument("bad sample: " + text);
    try {
      const auto x = std::stoull(t.substr(i + 1, comma - i - 1));
      const auto y = std::stoi(t.substr(comma + 1, close - comma - 1));
      if (y != 0 && y != 1) throw std::invalid_argument("label");
      s.push_back({x, static_cast<Label>(y)});
    } catch (const std::logic_error&) {
      throw std::invalid_argument("bad sample: " + text);
    }
    i = close + 1;
  }
  if (i + 1 != t.size()) throw std::invalid_argument("bad sample: " + text);
  return s;
}

std::uint64_t nth_prime(std::size_t i) {
  if (i == 0) throw std::invalid_argument("primes are 1-indexed");
  static std::mutex mu;
  static std::vector<std::uint64_t> primes{2, 3};
  std::lock_guard lock(mu);
  while (primes.size() < i) {
    std::uint64_t c = primes.back() + 2;
    for (;; c += 2) {
      bool prime = true;
      for (auto p : primes) {
        if (p * p > c) break;
        if (c % p == 0) {
          prime = false;
          break;
        }
      }
      if (prime) break;
    }
    primes.push_back(c);
  }
  return primes[i - 1];
}

BigNat encode_sequence(const std::vector<BigNat>& z) {
  BigNat code = 1;
  for (std::size_t i = 0; i < z.size(); ++i) {
    if (z[i] < 0) throw std::invalid_argument("sequence entries must be naturals");
    code *= boost::multiprecision::pow(BigNat(nth_prime(i + 1)), static_cast<unsigned>(z[i] + 1));
  }
  return code;
}

BigNat encode_sequence(std::initializer_list<std::uint64_t> z) {
  std::vector<BigNat> v;
  for (auto e : z) v.emplace_back(e);
  return encode_sequence(v);
}

std::vector<BigNat> decode_sequence(const BigNat& code) {
  if (code < 1) throw DecodeError("code must be at least 1");
  std::vector<BigNat> out;
  BigNat rest = code;
  BigNat q, r;
  for (std::size_t i = 1; rest > 1; ++i) {
    const BigNat p = nth_prime(i);
    std::uint64_t exponent = 0;
    for (;;) {
      divide_qr(rest, p, q, r);
      if (r != 0) break;
      rest.swap(q);
      ++exponent;
    }
    if (exponent == 0) {
      std::ostringstream os;
      os << "code " << code << " is not an encoding: prime " << p << " missing";
      throw DecodeError(os.str());
    }
    out.emplace_back(exponent - 1);
  }
  return out;
}

BigNat encode_sample(const Sample& s) { return encode_sequence(s.flatten()); }

Sample decode_sample(const BigNat& code) {
  const auto flat = decode_sequence(code);
  if (flat.size() % 2 != 0) throw DecodeError("odd-length sequence is not a sample");
  Sample s;
  for (std::size_t i = 0; i < flat.size(); i += 2) {
    if (flat[i + 1] > 1) throw DecodeError("sample label outside {0,1}");
    if (flat[i] > std::numeric_limits<Instance>::max()) throw DecodeError("instance out of range");
    s.push_back({static_cast<Instance>(flat[i]), static_cast<Label>(flat[i + 1])});
  }
  return s;
}

BigNat canonical_index(const std::set<BigNat>& f) {
  BigNat y = 0;
  for (const auto& x : f) {
    if (x < 0) throw std::invalid_argument("canonical index of a negative element");
    bit_set(y, static_cast<unsigned>(x));
  }
  return y;
}

BigNat canonical_index(const std::set<Instance>& f) {
  BigNat y = 0;
  for (auto x : f) bit_set(y, static_cast<unsigned>(x));
  return y;
}

std::set<BigNat> decode_canonical(const BigNat& y) {
  if (y < 0) throw DecodeError("canonical index must be a natural");
  std::set<BigNat> out;
  if (y == 0) return out;
  const auto top = msb(y);
  for (std::size_t b = lsb(y); b <= top; ++b)
    if (bit_test(y, static_cast<unsigned>(b))) out.insert(BigNat(b));
  return out;
}

std::string to_decimal(const BigNat& n) { return n.str(); }

}  // namespace colearn
