#pragma once

// Reference implementations used only by tests. They recompute quantities
// from definitions, without the library's memoized recursions.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <random>
#include <set>
#include <vector>

#include "colearn/classes.hpp"
#include "colearn/core.hpp"
#include "colearn/learner.hpp"

namespace oracle {

using colearn::FiniteClass;
using colearn::Instance;
using colearn::Label;
using colearn::Row;
using colearn::Sample;

inline FiniteClass random_class(std::mt19937_64& rng, std::size_t max_domain, std::size_t max_rows) {
  std::uniform_int_distribution<std::size_t> dom(1, max_domain);
  const std::size_t n = dom(rng);
  std::uniform_int_distribution<std::size_t> count(1, std::min<std::size_t>(max_rows, std::size_t{1} << n));
  const std::size_t k = count(rng);
  std::uniform_int_distribution<std::uint64_t> bits(0, (std::uint64_t{1} << n) - 1);
  std::set<std::uint64_t> rows;
  while (rows.size() < k) rows.insert(bits(rng));
  std::vector<Row> out(rows.begin(), rows.end());
  return FiniteClass(n, out);
}

inline bool consistent(Row r, const Sample& s) {
  for (const auto& z : s)
    if (((r >> z.x) & 1) != z.y) return false;
  return true;
}

inline std::size_t count_consistent(const FiniteClass& h, const Sample& s) {
  std::size_t c = 0;
  for (Row r : h.rows()) c += consistent(r, s);
  return c;
}

/// Every label path of the heap-layout tree is realized by some row.
inline bool tree_shattered(const FiniteClass& h, const std::vector<Instance>& nodes, unsigned d) {
  for (std::uint64_t path = 0; path < (std::uint64_t{1} << d); ++path) {
    std::size_t node = 1;
    Sample s;
    for (unsigned j = 0; j < d; ++j) {
      const Label y = static_cast<Label>((path >> j) & 1);
      s.push_back({nodes[node - 1], y});
      node = 2 * node + y;
    }
    if (count_consistent(h, s) == 0) return false;
  }
  return true;
}

/// Exhaustive search over all instance assignments to the 2^d - 1 nodes.
inline bool exists_tree(const FiniteClass& h, unsigned d) {
  if (h.empty()) return false;
  if (d == 0) return true;
  // Distinct leaf paths need distinct rows.
  if (d >= 64 || (std::size_t{1} << d) > h.size()) return false;
  const std::size_t k = (std::size_t{1} << d) - 1;
  const std::size_t n = h.domain_size();
  std::vector<Instance> nodes(k, 0);
  while (true) {
    if (tree_shattered(h, nodes, d)) return true;
    std::size_t i = 0;
    while (i < k && ++nodes[i] == n) nodes[i++] = 0;
    if (i == k) return false;
  }
}

/// Largest depth with a shattered tree; depth is bounded by log2 |H|.
inline int ldim(const FiniteClass& h) {
  if (h.empty()) return -1;
  int d = 0;
  while ((std::size_t{1} << (d + 1)) <= h.size() && exists_tree(h, static_cast<unsigned>(d + 1))) ++d;
  return d;
}

inline FiniteClass restrict(const FiniteClass& h, const Sample& s) {
  std::vector<Row> rows;
  for (Row r : h.rows())
    if (consistent(r, s)) rows.push_back(r);
  return FiniteClass(h.domain_size(), rows);
}

/// Plain minimax over histories, no memo: the learner picks the prediction
/// minimizing the adversary's best continuation of at most `rounds` steps.
inline int game_value(const FiniteClass& h, Sample& s, std::size_t rounds) {
  if (rounds == 0) return 0;
  int best = 0;
  for (Instance x = 0; x < h.domain_size(); ++x) {
    int worst_for_learner = 1 << 20;
    for (Label p : {Label{0}, Label{1}}) {
      int adv = -1;
      for (Label y : {Label{0}, Label{1}}) {
        s.push_back({x, y});
        if (count_consistent(h, s) > 0) adv = std::max(adv, (p != y) + game_value(h, s, rounds - 1));
        s.pop_back();
      }
      worst_for_learner = std::min(worst_for_learner, adv);
    }
    best = std::max(best, worst_for_learner);
  }
  return best;
}

/// Max mistakes of a learner over every realizable continuation of `s` with
/// at most `rounds` more steps, by explicit enumeration.
inline std::size_t replay_bound(const colearn::Learner& a, const FiniteClass& h, Sample& s, std::size_t rounds) {
  if (rounds == 0) return 0;
  std::size_t best = 0;
  for (Instance x = 0; x < h.domain_size(); ++x) {
    const Label p = a.predict_or_throw(s, x);
    for (Label y : {Label{0}, Label{1}}) {
      s.push_back({x, y});
      if (count_consistent(h, s) > 0) best = std::max(best, (p != y ? 1u : 0u) + replay_bound(a, h, s, rounds - 1));
      s.pop_back();
    }
  }
  return best;
}

/// Exponents of the prime factorization by trial division, in prime order,
/// or nullopt when some prime is skipped.
inline std::optional<std::vector<std::uint64_t>> factor_exponents(colearn::BigNat n) {
  std::vector<std::uint64_t> out;
  if (n < 1) return std::nullopt;
  for (std::uint64_t p = 2; n > 1; ++p) {
    bool prime = true;
    for (std::uint64_t q = 2; q * q <= p; ++q)
      if (p % q == 0) prime = false;
    if (!prime) continue;
    std::uint64_t k = 0;
    while (n % p == 0) {
      n /= p;
      ++k;
    }
    out.push_back(k);
  }
  while (!out.empty() && out.back() == 0) out.pop_back();
  if (std::find(out.begin(), out.end(), 0u) != out.end()) return std::nullopt;
  return out;
}

/// All realizable samples of length <= max_length, duplicates included.
inline std::vector<Sample> realizable_samples(const FiniteClass& h, std::size_t max_length) {
  std::vector<Sample> out{Sample{}};
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (out[i].size() == max_length) continue;
    for (Instance x = 0; x < h.domain_size(); ++x)
      for (Label y : {Label{0}, Label{1}}) {
        auto next = out[i].appended({x, y});
        if (count_consistent(h, next) > 0) out.push_back(next);
      }
  }
  return out;
}

}  // namespace oracle
