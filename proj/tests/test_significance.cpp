#include <random>

#include "colearn/constructions.hpp"
#include "colearn/learners.hpp"
#include "colearn/littlestone.hpp"
#include "colearn/significance.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace colearn;

namespace {

// Domain {a, b, x} = {0, 1, 2}: three rows with x = 1 and one with x = 0.
FiniteClass imbalance_class() { return FiniteClass(3, {0b100, 0b101, 0b111, 0b010}); }

EnumerableClass singleton_stream(std::size_t budget) {
  return EnumerableClass(
      [](std::size_t i) {
        EnumSlot s;
        s.kind = EnumSlot::Kind::present;
        s.hypothesis = Hypothesis::indicator({i});
        return s;
      },
      budget);
}

}  // namespace

TEST_SUITE("significance") {
  TEST_CASE("a-optimal verdicts on the halting-indexed class") {
    TableOracle t;
    t.halts(1, 1, 0).diverges(2, 2);
    const auto c = build_h_rer_halt(t, 2, 50);
    const auto halts = is_aopt_significant(c.cls, Sample{{3, 1}}, 4);
    CHECK(halts.significant);
    CHECK(halts.forced == std::optional<Label>(1));
    CHECK(halts.steps.back().ldim1 == 1);
    CHECK(halts.steps.back().ldim0 == 0);
    const auto diverges = is_aopt_significant(c.cls, Sample{{6, 1}}, 7);
    CHECK(diverges.significant);
    CHECK(diverges.forced == std::optional<Label>(0));
    CHECK(diverges.steps.back().ldim1 == -1);
  }

  TEST_CASE("equal restricted ldims are not significant") {
    const FiniteClass h(2, {0b01, 0b11});
    CHECK_FALSE(is_aopt_significant(h, Sample{{0, 1}}, 1).significant);
    CHECK_FALSE(ldim_imbalance(h, Sample{{0, 1}}, 1));
  }

  TEST_CASE("an ldim imbalance alone does not force the a-optimal prediction") {
    const auto h = imbalance_class();
    CHECK(oracle::ldim(h) == 2);
    CHECK(oracle::ldim(constrain(h, 2, 1)) == 1);
    CHECK(oracle::ldim(constrain(h, 2, 0)) == 0);
    CHECK(ldim_imbalance(h, Sample{}, 2));
    const auto bf = brute_force_aopt_significant(h, Sample{}, 2, 4);
    CHECK_FALSE(bf.significant);
    CHECK(bf.feasible == std::set<Label>{0, 1});
    CHECK_FALSE(is_aopt_significant(h, Sample{}, 2).significant);
  }

  TEST_CASE("optimal verdicts") {
    const auto v = is_opt_significant(hd_prime(3), Sample{}, threshold_instance(9));
    CHECK(v.significant);
    CHECK(v.forced == std::optional<Label>(0));
    CHECK(v.steps.size() == 1);
  }

  TEST_CASE("exhaustive oracle examples") {
    const auto h = hd_prime(2);
    REQUIRE(h.domain_size() == 5);
    const auto v = brute_force_opt_significant(h, Sample{}, threshold_instance(5), 4);
    CHECK(v.significant);
    CHECK(v.forced == std::optional<Label>(0));
    const FiniteClass one(3, {0b101});
    for (Instance x = 0; x < 3; ++x) {
      CHECK(brute_force_opt_significant(one, Sample{}, x, 3).significant);
      CHECK(brute_force_opt_significant(one, Sample{{0, 1}}, x, 3).significant);
    }
    CHECK_THROWS_AS(brute_force_opt_significant(thresholds(3), Sample{}, 0, 3), InstanceTooLarge);
  }

  TEST_CASE("closed forms agree with the oracle on random tiny classes") {
    std::mt19937_64 rng(53);
    for (int trial = 0; trial < 8; ++trial) {
      const auto h = oracle::random_class(rng, 4, 8);
      const auto a = sol(h);
      for (const auto& s : oracle::realizable_samples(h, 1))
        for (Instance x = 0; x < h.domain_size(); ++x) {
          const auto o = is_opt_significant(h, s, x);
          const auto bo = brute_force_opt_significant(h, s, x, 4);
          CHECK(o.significant == bo.significant);
          CHECK(o.forced == bo.forced);
          const auto p = is_aopt_significant(h, s, x);
          const auto bp = brute_force_aopt_significant(h, s, x, 4);
          CHECK(p.significant == bp.significant);
          CHECK(p.forced == bp.forced);
          if (o.significant && p.significant) CHECK(o.forced == p.forced);
          if (o.significant) CHECK(a->predict_or_throw(s, x) == *o.forced);
          if (p.significant) CHECK(a->predict_or_throw(s, x) == *p.forced);
        }
    }
  }

  TEST_CASE("path oracle agrees with literal table enumeration") {
    std::mt19937_64 rng(59);
    for (int trial = 0; trial < 6; ++trial) {
      const auto h = oracle::random_class(rng, 3, 5);
      const std::size_t length = 2;
      const auto tables = optimal_table_predictions(h, length);
      for (const auto& [key, labels] : tables) {
        const auto& [s, x] = key;
        const auto v = brute_force_opt_significant(h, s, x, length - s.size());
        CHECK(v.feasible == labels);
      }
    }
  }

  TEST_CASE("mistake count on optimally significant samples") {
    const auto h = hd_prime(3);
    const auto c = check_significant_mistakes(h, Sample{}, threshold_instance(9));
    CHECK(c.m == 0);
    CHECK(c.ldim_h == 3);
    CHECK(c.ldim_hs == 3);
    CHECK(c.holds);
    CHECK_THROWS_AS(check_significant_mistakes(h, Sample{{threshold_instance(9), 1}}, threshold_instance(10)),
                    PreconditionViolated);
    std::mt19937_64 rng(61);
    std::size_t checked = 0;
    for (int trial = 0; trial < 6; ++trial) {
      const auto r = oracle::random_class(rng, 4, 8);
      for (const auto& s : oracle::realizable_samples(r, 2))
        for (Instance x = 0; x < r.domain_size(); ++x) {
          if (!is_opt_significant(r, s, x).significant) continue;
          const auto k = check_significant_mistakes(r, s, x, 3);
          CHECK(k.holds);
          CHECK(k.oracle_m == std::set<std::size_t>{k.m});
          ++checked;
        }
    }
    CHECK(checked > 0);
  }

  TEST_CASE("both conditions of the mistake characterization") {
    const auto t = thresholds(2);
    const auto drop = check_mistake_conditions(t, Sample{{3, 1}}, 3);
    CHECK_FALSE(drop.condition_a);
    CHECK_FALSE(drop.condition_b);
    const auto empty = check_mistake_conditions(t, Sample{}, 3);
    CHECK(empty.condition_a);
    CHECK(empty.condition_b);
    std::mt19937_64 rng(67);
    for (int trial = 0; trial < 6; ++trial) {
      const auto h = oracle::random_class(rng, 4, 8);
      for (const auto& s : oracle::realizable_samples(h, 2)) CHECK(check_mistake_conditions(h, s, 3).agree());
    }
  }

  TEST_CASE("ldim-1 sweep over a growing singleton stream") {
    const auto rep = verify_ldim1_all_significant(singleton_stream(64), 6, 6, 2);
    CHECK(rep.precondition_ok);
    CHECK(rep.ldim == 1);
    CHECK(rep.all_significant);
    CHECK(rep.inputs_checked > 0);
    CHECK(is_opt_significant(singleton_stream(64).window(64, 64), Sample{}, 3).significant);
  }

  TEST_CASE("ldim-1 sweep over two singletons") {
    const auto rep = verify_ldim1_all_significant(EnumerableClass::from_finite(singletons(2), 4), 2, 2, 2);
    CHECK_FALSE(rep.precondition_ok);
    CHECK_FALSE(rep.all_significant);
    REQUIRE(rep.counterexample.has_value());
    CHECK_FALSE(is_opt_significant(singletons(2), rep.counterexample->first, rep.counterexample->second).significant);
  }

  TEST_CASE("realizability and domain checks") {
    CHECK_THROWS_AS(is_opt_significant(singletons(3), Sample{{0, 1}, {1, 1}}, 2), NotRealizable);
    CHECK_THROWS_AS(is_aopt_significant(singletons(3), Sample{}, 7), PreconditionViolated);
  }
}
