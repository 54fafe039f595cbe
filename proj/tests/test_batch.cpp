#include <random>

#include "colearn/batch.hpp"
#include "colearn/learners.hpp"
#include "colearn/littlestone.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace colearn;

namespace {

FiniteDistribution threshold_distribution() {
  // Labels of 1_[2] on the four stored instances.
  return FiniteDistribution({{0, 1, Rational(1, 4)}, {1, 1, Rational(1, 4)}, {2, 0, Rational(1, 4)},
                             {3, 0, Rational(1, 4)}});
}

}  // namespace

TEST_SUITE("batch") {
  TEST_CASE("point loss") {
    CHECK(point_loss(Rational(1), 1) == 0);
    CHECK(point_loss(Rational(0), 1) == 1);
    CHECK(point_loss(Rational(1, 3), 0) == Rational(1, 3));
    ProbabilisticHypothesis h;
    h.values[2] = Rational(3, 4);
    CHECK(point_loss(h, {2, 0}) == Rational(3, 4));
    CHECK_THROWS_AS(h(5), std::out_of_range);
  }

  TEST_CASE("regret") {
    const FiniteClass one(2, {0b10});
    const RationalPredictor exact = [](const Sample&, Instance x) { return Rational(x == 1 ? 1 : 0); };
    CHECK(expected_regret(exact, one, 3, 2) == 0);
    const FiniteClass both(1, {0, 1});
    const RationalPredictor half = [](const Sample&, Instance) { return Rational(1, 2); };
    CHECK(expected_regret(half, both, 2, 1) == 1);
    const auto t = thresholds(2);
    const auto a = as_rational(sol(t));
    Rational prev = 0;
    for (std::size_t n = 1; n <= 3; ++n) {
      const auto r = expected_regret(a, t, n, 4);
      CHECK(r >= 0);
      CHECK(r >= prev);
      prev = r;
    }
    CHECK_THROWS_AS(expected_regret(half, both, 21, 1), std::invalid_argument);
  }

  TEST_CASE("online-to-batch conversion") {
    const auto zero = online_to_batch(*constant_learner(0), Sample{{0, 1}, {1, 0}}, {0, 1, 2});
    for (Instance x : {0, 1, 2}) CHECK(zero(x) == 0);
    const auto t = thresholds(2);
    const Sample s{{2, 0}, {1, 1}};
    const auto h = online_to_batch(*sol(t), s, {0, 1, 2, 3});
    for (Instance x = 0; x < 4; ++x) {
      const auto v = h(x);
      CHECK((v == 0 || v == Rational(1, 2) || v == 1));
      Rational mean = 0;
      for (std::size_t k = 0; k < s.size(); ++k) mean += sol(t)->predict_or_throw(s.prefix(k), x);
      CHECK(v == mean / 2);
    }
    CHECK_THROWS_AS(online_to_batch(*sol(t), Sample{}, {0}), std::invalid_argument);
  }

  TEST_CASE("expected error of the converted learner is at most ldim / T") {
    const auto t = thresholds(2);
    const auto d = threshold_distribution();
    const auto a = sol(t);
    const std::size_t len = 4;
    Rational expected = 0;
    std::vector<std::size_t> idx(len, 0);
    while (true) {
      Sample s;
      for (auto i : idx) s.push_back({d.support()[i].x, d.support()[i].y});
      expected += Rational(1, 256) * distribution_error(online_to_batch(*a, s, d.instances()), d);
      std::size_t k = 0;
      while (k < len && ++idx[k] == 4) idx[k++] = 0;
      if (k == len) break;
    }
    CHECK(expected <= Rational(ldim(t), static_cast<long>(len)));
    CHECK(expected > 0);
  }

  TEST_CASE("distribution error") {
    const auto d = threshold_distribution();
    CHECK(distribution_error(Row{0b0011}, d) == 0);
    CHECK(class_error(thresholds(2), d) == 0);
    const auto flip = FiniteDistribution::uniform({{0, 1}, {1, 0}});
    CHECK(distribution_error(Row{0b11}, flip) == Rational(1, 2));
  }

  TEST_CASE("distributions") {
    CHECK_THROWS_AS(FiniteDistribution({{0, 1, Rational(1, 2)}}), std::invalid_argument);
    CHECK_THROWS_AS(FiniteDistribution({{0, 1, Rational(0)}, {1, 1, Rational(1)}}), std::invalid_argument);
    const auto d = FiniteDistribution::from_json(
        R"({"support": [{"x": 0, "y": 1, "weight": "1/3"}, {"x": 4, "y": 0, "weight": "2/3"}]})");
    CHECK(d.support()[1].weight == Rational(2, 3));
    CHECK(FiniteDistribution::from_json(d.to_json()).to_json() == d.to_json());
    CHECK(FiniteDistribution::from_json(R"({"support": [{"x": 1, "y": 1, "weight": 0.25},
        {"x": 2, "y": 1, "weight": 0.75}]})").support()[0].weight == Rational(1, 4));
    std::mt19937_64 r1(9), r2(9);
    CHECK(d.draw(30, r1) == d.draw(30, r2));
    std::mt19937_64 rng(1);
    const auto s = d.draw(3000, rng);
    std::size_t zeros = 0;
    for (const auto& z : s) zeros += z.x == 0;
    CHECK(zeros > 850);
    CHECK(zeros < 1150);
  }

  TEST_CASE("pac evaluation") {
    const auto rep = pac_evaluate(*sol(thresholds(2)), thresholds(2), threshold_distribution(), Rational(1, 5),
                                  Rational(1, 10), 40, 200, 1);
    CHECK(rep.passed);
    CHECK(rep.trials == 200);
    const auto again = pac_evaluate(*sol(thresholds(2)), thresholds(2), threshold_distribution(), Rational(1, 5),
                                    Rational(1, 10), 40, 200, 1);
    CHECK(again.mean_error == rep.mean_error);
  }

  TEST_CASE("unrealizable labelings") {
    const auto s = find_unrealizable_labeling(singletons(4), {0, 1});
    REQUIRE(s.unrealized.has_value());
    CHECK(*s.unrealized == std::vector<Label>{1, 1});
    CHECK_FALSE(find_unrealizable_labeling(FiniteClass(2, {0, 1, 2, 3}), {0, 1}).unrealized.has_value());
    const auto t = find_unrealizable_labeling(thresholds(2), {0, 1});
    REQUIRE(t.unrealized.has_value());
    CHECK_FALSE(is_realizable(thresholds(2), Sample{{0, (*t.unrealized)[0]}, {1, (*t.unrealized)[1]}}));
    CHECK_FALSE(is_realizable(thresholds(2), Sample{{0, 0}, {1, 1}}));
    std::mt19937_64 rng(71);
    for (int trial = 0; trial < 30; ++trial) {
      const auto h = oracle::random_class(rng, 5, 16);
      std::vector<Instance> xs;
      for (Instance x = 0; x < h.domain_size(); x += 2) xs.push_back(x);
      const auto r = find_unrealizable_labeling(h, xs);
      if (r.unrealized) {
        Sample smp;
        for (std::size_t i = 0; i < xs.size(); ++i) smp.push_back({xs[i], (*r.unrealized)[i]});
        CHECK_FALSE(is_realizable(h, smp));
      } else {
        CHECK(r.realized_patterns == (std::size_t{1} << xs.size()));
      }
    }
  }

  TEST_CASE("rationals") {
    CHECK(parse_rational("3/6") == Rational(1, 2));
    CHECK(parse_rational("0.2") == Rational(1, 5));
    CHECK(parse_rational("7") == 7);
    CHECK(to_string(Rational(4, 6)) == "2/3");
    CHECK_THROWS(parse_rational("1/0"));
    CHECK_THROWS(parse_rational("abc"));
  }
}
