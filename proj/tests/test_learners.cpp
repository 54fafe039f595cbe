#include <random>

#include "colearn/constructions.hpp"
#include "colearn/game.hpp"
#include "colearn/learners.hpp"
#include "colearn/significance.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace colearn;

namespace {

/// Row the learner predicts after `history`, over the whole domain.
Row predicted_row(const Learner& a, const Sample& history, std::size_t domain) {
  Row r = 0;
  for (Instance x = 0; x < domain; ++x)
    if (a.predict_or_throw(history, x)) r |= row_bit(x);
  return r;
}

std::shared_ptr<TableOracle> one_program(std::uint64_t e, std::optional<unsigned> self) {
  auto t = std::make_shared<TableOracle>();
  t->halts(e, 0, 0);
  if (self)
    t->halts(e, e, *self);
  else
    t->diverges(e, e);
  return t;
}

}  // namespace

TEST_SUITE("learners") {
  TEST_CASE("sol predictions") {
    const FiniteClass h(2, {0b01, 0b11});
    CHECK(sol(h)->predict_or_throw(Sample{{0, 1}}, 1) == 1);
    CHECK(sol(hd_prime(3))->predict_or_throw(Sample{}, threshold_instance(9)) == 0);
    const auto t = thresholds(2);
    const Label p = sol(t)->predict_or_throw(Sample{}, threshold_instance(1));
    CHECK(p == 1);
    CHECK(oracle::ldim(constrain(t, threshold_instance(1), p)) == 2);
    CHECK(sol(t)->traits().version_space_measurable);
  }

  TEST_CASE("sol is the larger-ldim label, ties to 1") {
    std::mt19937_64 rng(41);
    for (int trial = 0; trial < 20; ++trial) {
      const auto h = oracle::random_class(rng, 5, 10);
      const auto a = sol(h);
      for (const auto& s : oracle::realizable_samples(h, 1))
        for (Instance x = 0; x < h.domain_size(); ++x) {
          const auto hs = oracle::restrict(h, s);
          const int d0 = oracle::ldim(constrain(hs, x, 0)), d1 = oracle::ldim(constrain(hs, x, 1));
          CHECK(a->predict_or_throw(s, x) == (d1 >= d0 ? 1 : 0));
        }
    }
  }

  TEST_CASE("sol replays deterministically") {
    const auto h = hd_prime(3);
    const auto a = sol(h);
    const Sample s{{3, 0}, {1, 1}, {2, 0}};
    std::vector<Label> first, second;
    for (std::size_t t = 0; t <= s.size(); ++t)
      for (Instance x = 0; x < h.domain_size(); ++x) first.push_back(a->predict_or_throw(s.prefix(t), x));
    for (std::size_t t = 0; t <= s.size(); ++t)
      for (Instance x = 0; x < h.domain_size(); ++x) second.push_back(sol(h)->predict_or_throw(s.prefix(t), x));
    CHECK(first == second);
  }

  TEST_CASE("conservative learner") {
    const auto c = conservative_learner();
    CHECK(c->predict_or_throw(Sample{}, 4) == 0);
    CHECK(c->predict_or_throw(Sample{{5, 1}}, 5) == 1);
    CHECK(c->predict_or_throw(Sample{{5, 0}}, 5) == 0);
    TableOracle t;
    t.halts(1, 0, 0).halts(1, 1, 1).halts(2, 0, 0).halts(2, 2, 0);
    const auto cls = build_h_dr_ext(t, 2);
    std::size_t widest = 0;
    for (const auto& s : cls.supports) widest = std::max(widest, s.size());
    CHECK(mistake_bound(*c, cls.cls, Horizon{6, std::nullopt}).value <= widest);
  }

  TEST_CASE("sig predictor") {
    const auto h = hd_prime(3);
    const auto e = EnumerableClass::from_finite(h, h.size() + 1);
    const auto sig = sig_predictor(e, 3, 2000000);
    CHECK(sig->predict(Sample{}, threshold_instance(9)) == std::optional<Label>(0));
    const auto starved = sig_predictor(e, 3, 0);
    CHECK_FALSE(starved->predict(Sample{}, threshold_instance(9)).has_value());
    CHECK_THROWS_AS(starved->predict_or_throw(Sample{}, threshold_instance(9)), FuelExhausted);
  }

  TEST_CASE("sig predictor matches sol on optimally significant inputs") {
    std::mt19937_64 rng(43);
    std::size_t checked = 0;
    for (int trial = 0; trial < 12; ++trial) {
      const auto h = oracle::random_class(rng, 4, 8);
      const int d = ldim(h);
      const auto sig = sig_predictor(EnumerableClass::from_finite(h, h.size() + 1), static_cast<unsigned>(d), 1000000);
      const auto s_ = sol(h);
      for (const auto& s : oracle::realizable_samples(h, 2))
        for (Instance x = 0; x < h.domain_size(); ++x) {
          const auto v = is_opt_significant(h, s, x);
          if (!v.significant) continue;
          ++checked;
          CHECK(sig->predict(s, x) == std::optional<Label>(s_->predict_or_throw(s, x)));
        }
    }
    CHECK(checked > 0);
  }

  TEST_CASE("toy learners") {
    const ToyLearner zero(0, 100), one(2, 100);
    CHECK(zero.predict(Sample{{3, 1}}, 7) == std::optional<Label>(0));
    CHECK(one.predict(Sample{}, 7) == std::optional<Label>(1));
    CHECK(one.traits().program_index == std::optional<std::uint64_t>(2));
    CHECK(zero.name() == "toy:0");
  }

  TEST_CASE("learner B on the halting-indexed class") {
    const auto b = learner_b_rer_halt();
    TableOracle t;
    t.halts(1, 1, 0);
    const auto c = build_h_rer_halt(t, 2, 50);
    const std::size_t n = c.cls.domain_size();
    CHECK(b->predict_or_throw(Sample{}, 7) == 0);
    // e = 1: instances 3, 4, 5.
    const Sample triple{{5, 1}};
    CHECK(predicted_row(*b, triple, n) == c.row_of({3, 4, 5}));
    CHECK(mistakes_on_sample(*b, Sample{{5, 1}, {3, 1}, {4, 1}}) == 1);
    const Sample base{{3, 1}, {4, 0}};
    CHECK(mistakes_on_sample(*b, base) == 2);
    CHECK(predicted_row(*b, base, n) == c.row_of({3}));
    CHECK(mistake_bound(*b, c.cls, Horizon{5, std::nullopt}).value == 2);
  }

  TEST_CASE("learner B on the prime-power extension class") {
    // e = 1 with phi_1(1) = 1; certificates default to e + 1 = 2.
    const auto t = one_program(1, 1);
    const auto c = build_h_dr_ext(*t, 1);
    const auto b = learner_b_dr_ext(t, c.map);
    const std::size_t n = c.cls.domain_size();
    const BigNat x3 = prime_power_instance(1, 3, 2);
    CHECK(x3 == 18);
    const Sample s3 = c.compact({{x3, 1}});
    CHECK(predicted_row(*b, s3, n) == c.row_of({2, 18}));
    const Sample s2 = c.compact({{2, 1}});
    CHECK(predicted_row(*b, s2, n) == c.row_of({2, prime_power_instance(1, 5, 2)}));
    CHECK(mistake_bound(*b, c.cls, Horizon{5, std::nullopt}).value <= 2);
  }

  TEST_CASE("learner B on the extension class, phi_e(e) = 0 branch") {
    const auto t = one_program(1, 0);
    const auto c = build_h_dr_ext(*t, 1);
    const auto fixed = mistake_bound(*learner_b_dr_ext(t, c.map), c.cls, Horizon{5, std::nullopt});
    CHECK(fixed.value <= 2);
    const auto literal = mistake_bound(*learner_b_dr_ext(t, c.map, true), c.cls, Horizon{5, std::nullopt});
    CHECK(literal.value == 3);
  }

  TEST_CASE("learner B on the prime-power halting class") {
    for (std::optional<unsigned> self : {std::optional<unsigned>{}, std::optional<unsigned>{4}}) {
      const auto t = one_program(1, self);
      const auto c = build_h_dr_halt(*t, 1);
      const auto b = learner_b_dr_halt(t, c.map);
      const Sample s2 = c.compact({{2, 1}});
      // Without phi_1(1) the instance 2 5^2 is not in the class domain.
      const std::set<BigNat> target =
          self ? std::set<BigNat>{2, prime_power_instance(1, 5, 2)} : std::set<BigNat>{2};
      CHECK(predicted_row(*b, s2, c.cls.domain_size()) == c.row_of(target));
      CHECK(mistake_bound(*b, c.cls, Horizon{5, std::nullopt}).value <= 2);
    }
  }

  TEST_CASE("restricted learner") {
    const auto h = hd_prime(3);
    const auto a = restricted_sol(h, thresholds(3));
    CHECK(a->predict_or_throw(Sample{}, 2) == sol(h)->predict_or_throw(Sample{}, 2));
    CHECK(a->predict_or_throw(Sample{{8, 1}}, 9) == 0);
    CHECK(sol(h)->predict_or_throw(Sample{{8, 1}}, 9) == 1);
  }
}
