#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>

#include "colearn/machine.hpp"
#include "doctest.h"

using namespace colearn;

namespace {

// Full configuration trace of a run, from the initial configuration.
std::vector<Config> trace_of(std::uint64_t e, const BigNat& x, std::uint64_t budget) {
  Machine m(program_at(e), {x});
  std::vector<Config> out{m.config()};
  while (!m.halted() && m.steps() < budget) {
    m.step();
    out.push_back(m.config());
  }
  return out;
}

const Program kLoop = Program::parse("DECJZ 1 0\n");

}  // namespace

TEST_SUITE("machine") {
  TEST_CASE("runs") {
    const auto halt = run(Program{}, 7, 10);
    CHECK(halt.halted);
    CHECK(halt.output == 7);
    CHECK(halt.steps == 1);
    CHECK_FALSE(run(kLoop, 0, 1000).halted);
    const auto succ = run(Program::parse("INC 0\nHALT\n"), 5, 10);
    CHECK(succ.halted);
    CHECK(succ.output == 6);
    CHECK(succ.steps == 2);
    // Clear r0, then count down r1 into r0: output = the two-place code.
    const auto copy = run_two_place(Program::parse("DECJZ 0 2\nDECJZ 3 0\nDECJZ 1 5\nINC 0\nDECJZ 3 2\nHALT\n"), 3, 9, 100);
    CHECK(copy.halted);
    CHECK(copy.output == 3);
  }

  TEST_CASE("program text") {
    const auto p = Program::parse("INC 2\nDECJZ 2 0\nHALT\n");
    CHECK(Program::parse(p.to_text()) == p);
    CHECK(p.length() == 3);
    CHECK_THROWS_AS(Program::parse("DECJZ 0 9\n"), std::invalid_argument);
    CHECK_THROWS_AS(Program::parse("JMP 1\n"), std::invalid_argument);
    CHECK_THROWS_AS(Program::parse("INC\n"), std::invalid_argument);
  }

  TEST_CASE("numbering") {
    CHECK(program_at(0) == Program{});
    CHECK(program_at(2) == Program::parse("INC 0\n"));
    for (std::uint64_t n = 0; n <= 10000; ++n) CHECK(index_of(program_at(n)) == n);
    std::set<std::string> texts;
    for (std::uint64_t n = 0; n <= 500; ++n) texts.insert(program_at(n).to_text());
    CHECK(texts.size() == 501);
  }

  TEST_CASE("padding changes syntax, not behaviour") {
    for (std::uint64_t n : {0u, 2u, 7u, 19u, 42u, 133u, 977u}) {
      const auto p = program_at(n);
      const auto q = padded(p);
      CHECK_FALSE(q == p);
      CHECK(index_of(q) != n);
      for (unsigned x = 0; x <= 5; ++x) {
        const auto a = run(p, x, 500), b = run(q, x, 500);
        CHECK(a.halted == b.halted);
        if (a.halted) CHECK(a.output == b.output);
      }
    }
  }

  TEST_CASE("halting certificates") {
    const auto first = enumerate_halting_computations(0, 1);
    CHECK(first.program == 0);
    CHECK(first.trace.size() == 2);
    CHECK(p_cert(0, 1, 0) == 1);
    std::set<std::pair<std::uint64_t, std::size_t>> seen;
    for (std::uint64_t i = 1; i <= 50; ++i) {
      const auto c = enumerate_halting_computations(0, i);
      CHECK(p_cert(c.program, i, 0) == 1);
      CHECK(seen.emplace(c.program, c.trace.size()).second);
    }
    CHECK(p_cert(0, 0, 0) == 0);
  }

  TEST_CASE("certificate soundness against direct runs") {
    for (unsigned x = 0; x <= 3; ++x)
      for (std::uint64_t i = 1; i <= 50; ++i) {
        const auto c = enumerate_halting_computations(x, i);
        const auto direct = trace_of(c.program, x, c.trace.size());
        CHECK(direct == c.trace);
        CHECK(direct.back().halted);
        for (std::uint64_t e = 0; e <= 200; ++e) CHECK(p_cert(e, i, x) == (e == c.program ? 1 : 0));
      }
  }

  TEST_CASE("certificate index search") {
    const auto i = certificate_index(2, 4, 200);
    REQUIRE(i.has_value());
    CHECK(p_cert(2, *i, 4) == 1);
    CHECK(certificate_index(2, 4, 400) == i);
    const auto loop = index_of(kLoop);
    CHECK_FALSE(certificate_index(loop, 0, 300).has_value());
  }

  TEST_CASE("real oracle") {
    RealOracle o(1000, 500);
    CHECK(o.halts_within(2, 5, 1) == std::nullopt);
    CHECK(o.halts_within(2, 5, 2) == std::optional<BigNat>(6));
    CHECK(o.halts_within(2, 5, 20) == std::optional<BigNat>(6));
    CHECK(o.evaluate(2, 5).converges_to(6));
    CHECK(o.evaluate(index_of(kLoop), 0).kind == Evaluation::Kind::unknown);
    const auto c = o.certificate_index(2, 5);
    REQUIRE(c.has_value());
    CHECK(o.certificate_matches(2, *c, 5));
  }

  TEST_CASE("table oracle") {
    TableOracle t;
    t.halts(3, 3, 1, 17).diverges(4, 4).halts(5, 0, 9);
    CHECK(t.evaluate(3, 3).converges_to(1));
    CHECK(t.evaluate(4, 4).kind == Evaluation::Kind::diverges);
    CHECK(t.evaluate(8, 8).kind == Evaluation::Kind::diverges);
    CHECK(t.certificate_index(3, 3) == std::optional<std::uint64_t>(17));
    CHECK(t.certificate_index(5, 0) == std::optional<std::uint64_t>(6));
    CHECK(t.certificate_matches(3, 17, 3));
    CHECK_FALSE(t.certificate_matches(3, 16, 3));
    CHECK_FALSE(t.halts_within(4, 4, 1000000).has_value());
    const auto back = TableOracle::from_json(t.to_json());
    CHECK(back.to_json() == t.to_json());
    CHECK_THROWS(TableOracle::from_json(R"({"3": "diverges"})"));
    CHECK_THROWS(TableOracle::from_json(R"({"3,3": {"value": 1}})"));
  }

  TEST_CASE("oracle from the environment") {
    const std::string path = (std::filesystem::temp_directory_path() / "colearn_machine_oracle.json").string();
    {
      std::ofstream out(path);
      out << R"({"1,1": {"halts": 0}, "2,2": "diverges"})";
    }
    ::setenv("COLEARN_ORACLE", path.c_str(), 1);
    const auto o = default_oracle(100, 100);
    CHECK(o->evaluate(1, 1).converges_to(0));
    CHECK(o->evaluate(2, 2).kind == Evaluation::Kind::diverges);
    ::unsetenv("COLEARN_ORACLE");
    std::filesystem::remove(path);
    CHECK(default_oracle(100, 100)->evaluate(2, 2).converges_to(3));
  }
}
