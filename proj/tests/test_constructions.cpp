#include "colearn/constructions.hpp"
#include "colearn/learners.hpp"
#include "colearn/littlestone.hpp"
#include "colearn/significance.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace colearn;

namespace {

std::set<std::set<BigNat>> as_set(const std::vector<std::set<BigNat>>& v) { return {v.begin(), v.end()}; }

TableOracle dr_oracle() {
  // e = 1: phi(0) and phi(1) = 1; e = 2: phi(2) = 0; e = 3: phi(3) diverges;
  // e = 4: phi(4) = 5; e = 5: phi(0) diverges.
  TableOracle t;
  t.halts(1, 0, 0).halts(1, 1, 1);
  t.halts(2, 0, 0).halts(2, 2, 0);
  t.halts(3, 0, 0).diverges(3, 3);
  t.halts(4, 0, 0).halts(4, 4, 5);
  t.diverges(5, 0).halts(5, 5, 1);
  return t;
}

}  // namespace

TEST_SUITE("constructions") {
  TEST_CASE("block arithmetic") {
    CHECK(s1(3) == 6);
    CHECK(s2(3) == 10);
    CHECK(block_of(5) == Block{2, 1, 1, 5});
    CHECK(block_of(4).i == 2);
    CHECK(block_of(4).j == 0);
    CHECK(block_of(4).start == 4);
    CHECK(block_instances(2, 1) == std::vector<std::uint64_t>{5, 6});
    CHECK_THROWS(block_instances(1, 2));
    std::uint64_t n = 0;
    for (std::uint64_t i = 0; i <= 12; ++i)
      for (std::uint64_t j = 0; j <= i; ++j) {
        const auto b = block_instances(i, j);
        CHECK(b.size() == j + 1);
        for (auto k : b) {
          CHECK(k == n++);
          const auto blk = block_of(k);
          CHECK(blk.i == i);
          CHECK(blk.j == j);
          CHECK(blk.learner == i - j);
        }
      }
  }

  TEST_CASE("halting-indexed class") {
    TableOracle t;
    t.halts(1, 1, 0);
    const auto c = build_h_rer_halt(t, 2, 50);
    CHECK(as_set(c.supports) == std::set<std::set<BigNat>>{{0}, {3}, {3, 4}, {3, 4, 5}, {6}});
    CHECK(ldim(c.cls) == 2);
    CHECK(ldim(build_h_rer_halt(TableOracle{}, 2, 50).cls) == 1);
  }

  TEST_CASE("halting class") {
    TableOracle t;
    t.halts(0, 0, 0).diverges(1, 1);
    const auto c = build_h_halting(t, 1, 50);
    CHECK(as_set(c.supports) == std::set<std::set<BigNat>>{{0, 1}, {2}});
    CHECK(ldim(c.cls) == 1);
    // After seeing 2e with label 1, sol's label for 2e + 1 is the halting bit.
    const auto a = sol(c.cls);
    CHECK(a->predict_or_throw(Sample{{0, 1}}, 1) == 1);
    CHECK(a->predict_or_throw(Sample{{2, 1}}, 3) == 0);
  }

  TEST_CASE("prime-power extension class") {
    const auto t = dr_oracle();
    const auto c = build_h_dr_ext(t, 5);
    // c_0(e) and c_e(e) default to e + 1.
    const std::set<BigNat> seven{2, prime_power_instance(1, 5, 2), prime_power_instance(1, 7, 2)};
    const std::set<BigNat> eleven{2, prime_power_instance(1, 5, 2), prime_power_instance(1, 11, 2)};
    const auto members = as_set(c.supports);
    CHECK(members.count(seven));
    CHECK(members.count(eleven));
    CHECK(members.count({4, prime_power_instance(2, 13, 3), prime_power_instance(2, 3, 3)}));
    CHECK(dr_ext_block(t, 3).size() == 1);
    CHECK(dr_ext_block(t, 4).size() == 1);
    CHECK(dr_ext_block(t, 5).empty());
    CHECK(ldim(c.cls) == 2);
    for (const auto& s : c.supports) {
      CHECK(dr_decider_h_dr_ext(t, canonical_index(s)) == 1);
      CHECK(c.cls.contains(c.row_of(s)));
    }
    CHECK(dr_decider_h_dr_ext(t, canonical_index(std::set<BigNat>{2, 18})) == 1);
    CHECK(dr_decider_h_dr_ext(t, canonical_index(std::set<BigNat>{2, 54})) == 0);
    CHECK(dr_decider_h_dr_ext(t, canonical_index(std::set<BigNat>{2})) == 0);
    CHECK(dr_decider_h_dr_ext(t, canonical_index(std::set<BigNat>{32, 32 * 729})) == 0);
    CHECK(dr_decider_h_dr_ext(t, canonical_index(std::set<BigNat>{16, 16 * 125})) == 0);
  }

  TEST_CASE("depth-2 tree on the extension class") {
    const auto t = dr_oracle();
    const auto c = build_h_dr_ext(t, 3);
    const auto root = *c.compact(BigNat(2));
    const auto left = *c.compact(BigNat(4));
    const auto right = *c.compact(prime_power_instance(1, 3, 2));
    CHECK(verify_shattered_tree(c.cls, ShatteredTree{2, {root, left, right}}, 2));
    CHECK_FALSE(find_shattered_tree(c.cls, 3).has_value());
  }

  TEST_CASE("significance table of the extension class") {
    const auto t = dr_oracle();
    const auto c = build_h_dr_ext(t, 5);
    auto verdict = [&](std::uint64_t e) {
      const auto x = c.compact(prime_power_instance(e, 3, e + 1));
      return is_opt_significant(c.cls, c.compact({{pow_big(2, e), 1}}), *x);
    };
    const auto one = verdict(1);
    CHECK(one.significant);
    CHECK(one.forced == std::optional<Label>(0));
    const auto zero = verdict(2);
    CHECK(zero.significant);
    CHECK(zero.forced == std::optional<Label>(1));
    CHECK_FALSE(verdict(3).significant);
    CHECK_FALSE(verdict(4).significant);
    // phi_5(0) diverges: 2^5 is in no support.
    CHECK_FALSE(c.compact(pow_big(2, 5)).has_value());
  }

  TEST_CASE("prime-power halting class") {
    const auto t = dr_oracle();
    const auto c = build_h_dr_halt(t, 3);
    auto forced = [&](std::uint64_t e) {
      const auto x = c.compact(prime_power_instance(e, 3, e + 1));
      return is_aopt_significant(c.cls, c.compact({{pow_big(2, e), 1}}), *x).forced;
    };
    CHECK(forced(3) == std::optional<Label>(1));
    CHECK(forced(1) == std::optional<Label>(0));
    CHECK(forced(2) == std::optional<Label>(0));
    CHECK(ldim(c.cls) == 2);
    for (const auto& s : c.supports) CHECK(dr_decider_h_dr_halt(t, canonical_index(s)) == 1);
    CHECK(dr_decider_h_dr_halt(t, canonical_index(std::set<BigNat>{8, 8 * 125, 8 * 2401})) == 0);
  }

  TEST_CASE("forcing samples against constant toy learners") {
    SplitClass split(500);
    for (std::uint64_t m = 1; m <= 3; ++m) {
      const auto zero = split.forcing_sample(0, m);
      CHECK(zero.size() == m + 1);
      CHECK(mistakes_on_sample(ToyLearner(0, 500), zero) == m + 1);
      for (const auto& z : zero) CHECK(z.y == 1);
      const auto one = split.forcing_sample(2, m);
      CHECK(mistakes_on_sample(ToyLearner(2, 500), one) == m + 1);
      for (const auto& z : one) CHECK(z.y == 0);
    }
    CHECK(ldim(split.truncation(4)) == 1);
    CHECK(ldim(split.truncation(6)) == 1);
  }

  TEST_CASE("split class rows") {
    SplitClass split(500);
    const auto trunc = split.truncation(3);
    for (std::size_t x = 0; x < trunc.domain_size(); ++x) {
      std::size_t ones = 0;
      for (Row r : trunc.rows()) ones += row_value(r, x);
      CHECK(ones <= 1);
    }
  }

  TEST_CASE("self-halting thresholds") {
    const auto c = build_h_init(200, 64);
    CHECK(c.row(0) == 0);
    CHECK(*c.self_halting[0] == 1);
    const auto w = find_thresholds(c.cls, 4);
    REQUIRE(w.has_value());
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t j = 0; j < 4; ++j) CHECK(row_value(w->hypotheses[i], w->points[j]) == (i >= j ? 1 : 0));
    const FiniteClass sub(c.cls.domain_size(), w->hypotheses);
    const auto tree = threshold_tree(*w);
    CHECK(verify_shattered_tree(sub, tree, 2));
    CHECK(ldim(c.cls) >= 2);
    CHECK_FALSE(find_thresholds(build_h_init(200, 20).cls, 4).has_value());
    // Two distinct halting times give two thresholds.
    CHECK(find_thresholds(build_h_init(200, 2).cls, 2).has_value());
  }

  TEST_CASE("instance map") {
    const InstanceMap m({BigNat(18), BigNat(2), BigNat(1000000007)});
    CHECK(m.size() == 3);
    CHECK(m.value(0) == 2);
    CHECK(m.compact(BigNat(1000000007)) == std::optional<Instance>(2));
    CHECK_FALSE(m.compact(BigNat(3)).has_value());
  }
}
