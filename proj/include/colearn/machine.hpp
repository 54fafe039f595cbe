#pragma once

// Register machine with a bijective numbering, step-bounded runs, dovetailed
// halting certificates and the oracle abstraction used by the constructions.

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "colearn/core.hpp"

namespace colearn {

struct Instruction {
  enum class Op { inc, decjz, halt };
  Op op = Op::halt;
  std::uint64_t reg = 0;
  std::uint64_t target = 0;

  friend bool operator==(const Instruction&, const Instruction&) = default;
};

/// A body followed by one final HALT. Jump targets address the whole
/// program, final HALT included, so every target is in range.
class Program {
 public:
  Program() = default;
  /// Throws std::invalid_argument on a target outside the program.
  explicit Program(std::vector<Instruction> body);

  const std::vector<Instruction>& body() const { return body_; }
  std::size_t length() const { return body_.size() + 1; }
  Instruction at(std::size_t pc) const { return pc < body_.size() ? body_[pc] : Instruction{}; }
  std::size_t registers() const;

  /// One instruction per line; the final HALT is written out.
  std::string to_text() const;
  /// Accepts the to_text format; a trailing HALT is added when missing.
  static Program parse(const std::string& text);

  friend bool operator==(const Program&, const Program&) = default;

 private:
  std::vector<Instruction> body_;
};

Program program_at(std::uint64_t index);
/// Throws std::overflow_error when the index does not fit 64 bits.
std::uint64_t index_of(const Program& p);
/// Same behaviour, different syntax: an extra HALT before the final one.
Program padded(const Program& p);

struct Config {
  std::size_t pc = 0;
  std::vector<BigNat> registers;
  bool halted = false;

  friend bool operator==(const Config&, const Config&) = default;
};

class Machine {
 public:
  Machine(Program program, std::vector<BigNat> inputs);

  /// Executes one instruction; HALT counts as a step. No-op once halted.
  void step();
  bool halted() const { return config_.halted; }
  const Config& config() const { return config_; }
  std::uint64_t steps() const { return steps_; }
  BigNat output() const { return config_.registers[0]; }

 private:
  Program program_;
  Config config_;
  std::uint64_t steps_ = 0;
};

struct RunResult {
  bool halted = false;
  BigNat output;
  std::uint64_t steps = 0;
};

/// One-place run: input and output in register 0.
RunResult run(const Program& p, const BigNat& input, std::uint64_t step_budget);
/// Two-place run for learners: r0 = 0, r1 = code, r2 = x; output in r0.
RunResult run_two_place(const Program& p, const BigNat& code, const BigNat& x, std::uint64_t step_budget);

struct HaltingCertificate {
  std::uint64_t program = 0;
  BigNat input;
  /// Initial configuration, then the configuration after every step.
  std::vector<Config> trace;
};

/// i-th (1-based) halting pair (e, s) in diagonal order e + s ascending,
/// then e ascending, where (e, s) halts when program e halts on x in exactly
/// s steps. Results are cached per input.
HaltingCertificate enumerate_halting_computations(const BigNat& x, std::uint64_t i);

/// Decides whether certificate i is the halting trace of program e on x.
int p_cert(std::uint64_t e, std::uint64_t i, const BigNat& x);

/// The certificate number of (e, x) if it turns up on a diagonal <= budget.
std::optional<std::uint64_t> certificate_index(std::uint64_t e, const BigNat& x, std::uint64_t budget);

struct Evaluation {
  enum class Kind { halts, diverges, unknown };
  Kind kind = Kind::unknown;
  BigNat value;

  bool converges() const { return kind == Kind::halts; }
  bool converges_to(unsigned v) const { return kind == Kind::halts && value == v; }
};

class HaltingOracle {
 public:
  virtual ~HaltingOracle() = default;
  /// Value if program e halts on x within s steps; monotone in s.
  virtual std::optional<BigNat> halts_within(std::uint64_t e, const BigNat& x, std::uint64_t s) const = 0;
  virtual Evaluation evaluate(std::uint64_t e, const BigNat& x) const = 0;
  virtual std::optional<std::uint64_t> certificate_index(std::uint64_t e, const BigNat& x) const = 0;
  virtual bool certificate_matches(std::uint64_t e, std::uint64_t i, const BigNat& x) const = 0;
  virtual std::string describe() const = 0;
};

using OraclePtr = std::shared_ptr<const HaltingOracle>;

/// Runs the toy machine. Programs still running at the step budget are
/// reported unknown.
class RealOracle : public HaltingOracle {
 public:
  RealOracle(std::uint64_t step_budget, std::uint64_t dovetail_budget);

  std::optional<BigNat> halts_within(std::uint64_t e, const BigNat& x, std::uint64_t s) const override;
  Evaluation evaluate(std::uint64_t e, const BigNat& x) const override;
  std::optional<std::uint64_t> certificate_index(std::uint64_t e, const BigNat& x) const override;
  bool certificate_matches(std::uint64_t e, std::uint64_t i, const BigNat& x) const override;
  std::string describe() const override;

 private:
  std::uint64_t step_budget_;
  std::uint64_t dovetail_budget_;
};

/// Exact answers from an explicit map; pairs not listed diverge.
class TableOracle : public HaltingOracle {
 public:
  struct Entry {
    BigNat value;
    std::uint64_t certificate;
  };

  /// Certificate defaults to e + 1.
  TableOracle& halts(std::uint64_t e, std::uint64_t x, unsigned value, std::optional<std::uint64_t> cert = {});
  TableOracle& halts(std::uint64_t e, std::uint64_t x, const BigNat& value, std::optional<std::uint64_t> cert = {});
  TableOracle& diverges(std::uint64_t e, std::uint64_t x);

  /// {"e,x": {"halts": v, "cert": i} | "diverges", ...}
  static TableOracle from_json(const std::string& text);
  static TableOracle from_file(const std::string& path);
  std::string to_json() const;

  std::optional<BigNat> halts_within(std::uint64_t e, const BigNat& x, std::uint64_t s) const override;
  Evaluation evaluate(std::uint64_t e, const BigNat& x) const override;
  std::optional<std::uint64_t> certificate_index(std::uint64_t e, const BigNat& x) const override;
  bool certificate_matches(std::uint64_t e, std::uint64_t i, const BigNat& x) const override;
  std::string describe() const override;

 private:
  const Entry* find(std::uint64_t e, const BigNat& x) const;
  std::map<std::pair<std::uint64_t, std::uint64_t>, Entry> entries_;
};

/// Oracle named by the COLEARN_ORACLE environment variable (a TableOracle
/// file), or a RealOracle with the given budgets.
OraclePtr default_oracle(std::uint64_t step_budget, std::uint64_t dovetail_budget);

}  // namespace colearn
