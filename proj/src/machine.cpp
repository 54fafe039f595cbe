#include "colearn/machine.hpp"

#include <bit>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>

#include "json.hpp"

namespace colearn {

Program::Program(std::vector<Instruction> body) : body_(std::move(body)) {
  for (const auto& ins : body_)
    if (ins.op == Instruction::Op::decjz && ins.target >= length())
      throw std::invalid_argument("jump target " + std::to_string(ins.target) + " outside program");
}

std::size_t Program::registers() const {
  std::size_t n = 3;
  for (const auto& ins : body_)
    if (ins.op != Instruction::Op::halt) n = std::max<std::size_t>(n, ins.reg + 1);
  return n;
}

std::string Program::to_text() const {
  std::ostringstream os;
  for (std::size_t pc = 0; pc < length(); ++pc) {
    const auto ins = at(pc);
    switch (ins.op) {
      case Instruction::Op::inc: os << "INC " << ins.reg; break;
      case Instruction::Op::decjz: os << "DECJZ " << ins.reg << ' ' << ins.target; break;
      case Instruction::Op::halt: os << "HALT"; break;
    }
    os << '\n';
  }
  return os.str();
}

Program Program::parse(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::vector<Instruction> ins;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ls(line);
    std::string op;
    if (!(ls >> op)) continue;
    Instruction i;
    if (op == "INC") {
      i.op = Instruction::Op::inc;
      if (!(ls >> i.reg)) throw std::invalid_argument("line " + std::to_string(line_no) + ": INC needs a register");
    } else if (op == "DECJZ") {
      i.op = Instruction::Op::decjz;
      if (!(ls >> i.reg >> i.target))
        throw std::invalid_argument("line " + std::to_string(line_no) + ": DECJZ needs a register and a target");
    } else if (op == "HALT") {
      i.op = Instruction::Op::halt;
    } else {
      throw std::invalid_argument("line " + std::to_string(line_no) + ": unknown instruction " + op);
    }
    ins.push_back(i);
  }
  if (!ins.empty() && ins.back().op == Instruction::Op::halt) ins.pop_back();
  return Program(std::move(ins));
}

namespace {

// Code c of an instruction in a program of length L:
// 0 -> HALT, 2k + 1 -> INC k, 2(rL + t) + 2 -> DECJZ r t.
Instruction decode_instruction(std::uint64_t c, std::uint64_t length) {
  Instruction ins;
  if (c == 0) return ins;
  const std::uint64_t q = c - 1;
  if (q % 2 == 0) {
    ins.op = Instruction::Op::inc;
    ins.reg = q / 2;
  } else {
    const std::uint64_t m = (q - 1) / 2;
    ins.op = Instruction::Op::decjz;
    ins.reg = m / length;
    ins.target = m % length;
  }
  return ins;
}

std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
  if (b != 0 && a > std::numeric_limits<std::uint64_t>::max() / b) throw std::overflow_error("program index overflow");
  return a * b;
}

std::uint64_t checked_add(std::uint64_t a, std::uint64_t b) {
  if (a > std::numeric_limits<std::uint64_t>::max() - b) throw std::overflow_error("program index overflow");
  return a + b;
}

std::uint64_t encode_instruction(const Instruction& ins, std::uint64_t length) {
  switch (ins.op) {
    case Instruction::Op::halt: return 0;
    case Instruction::Op::inc: return checked_add(checked_mul(2, ins.reg), 1);
    case Instruction::Op::decjz: {
      const auto m = checked_add(checked_mul(ins.reg, length), ins.target);
      return checked_add(checked_mul(2, m), 2);
    }
  }
  return 0;
}

// Sequences of naturals <-> naturals: () <-> 0, (a, rest...) <-> 2^a (2 n(rest) + 1).
std::vector<std::uint64_t> unpair_sequence(std::uint64_t n) {
  std::vector<std::uint64_t> out;
  while (n != 0) {
    const auto a = static_cast<std::uint64_t>(std::countr_zero(n));
    out.push_back(a);
    n = ((n >> a) - 1) / 2;
  }
  return out;
}

std::uint64_t pair_sequence(const std::vector<std::uint64_t>& seq) {
  std::uint64_t n = 0;
  for (auto it = seq.rbegin(); it != seq.rend(); ++it) {
    if (*it >= 63) throw std::overflow_error("program index overflow");
    const auto odd = checked_add(checked_mul(2, n), 1);
    if (odd > (std::numeric_limits<std::uint64_t>::max() >> *it)) throw std::overflow_error("program index overflow");
    n = odd << *it;
  }
  return n;
}

}  // namespace

Program program_at(std::uint64_t index) {
  const auto codes = unpair_sequence(index);
  const std::uint64_t length = codes.size() + 1;
  std::vector<Instruction> body;
  for (auto c : codes) body.push_back(decode_instruction(c, length));
  return Program(std::move(body));
}

std::uint64_t index_of(const Program& p) {
  std::vector<std::uint64_t> codes;
  for (const auto& ins : p.body()) codes.push_back(encode_instruction(ins, p.length()));
  return pair_sequence(codes);
}

Program padded(const Program& p) {
  auto body = p.body();
  body.push_back(Instruction{});
  return Program(std::move(body));
}

Machine::Machine(Program program, std::vector<BigNat> inputs) : program_(std::move(program)) {
  config_.registers.assign(std::max(program_.registers(), inputs.size()), BigNat(0));
  for (std::size_t i = 0; i < inputs.size(); ++i) config_.registers[i] = inputs[i];
}

void Machine::step() {
  if (config_.halted) return;
  const auto ins = program_.at(config_.pc);
  ++steps_;
  switch (ins.op) {
    case Instruction::Op::halt: config_.halted = true; break;
    case Instruction::Op::inc:
      ++config_.registers[ins.reg];
      ++config_.pc;
      break;
    case Instruction::Op::decjz: {
      auto& r = config_.registers[ins.reg];
      if (r == 0) {
        config_.pc = ins.target;
      } else {
        --r;
        ++config_.pc;
      }
      break;
    }
  }
}

namespace {

RunResult run_machine(Machine& m, std::uint64_t budget) {
  while (!m.halted() && m.steps() < budget) m.step();
  RunResult r;
  r.halted = m.halted();
  r.steps = m.steps();
  if (r.halted) r.output = m.output();
  return r;
}

}  // namespace

RunResult run(const Program& p, const BigNat& input, std::uint64_t step_budget) {
  Machine m(p, {input});
  return run_machine(m, step_budget);
}

RunResult run_two_place(const Program& p, const BigNat& code, const BigNat& x, std::uint64_t step_budget) {
  Machine m(p, {BigNat(0), code, x});
  return run_machine(m, step_budget);
}

namespace {

class Dovetailer {
 public:
  explicit Dovetailer(BigNat x) : x_(std::move(x)) {}

  // Processes one more diagonal.
  void advance() {
    const std::uint64_t d = diagonal_++;
    for (std::uint64_t e = 0; e < d; ++e) {
      auto& m = machines_[e];
      if (!m) continue;
      m->step();
      if (m->halted()) {
        found_.push_back(e);
        where_.emplace(e, std::make_pair(found_.size(), d));
        m.reset();
      }
    }
    machines_.push_back(std::make_unique<Machine>(program_at(d), std::vector<BigNat>{x_}));
  }

  std::uint64_t program(std::uint64_t i) {
    while (found_.size() < i) advance();
    return found_[i - 1];
  }

  std::optional<std::uint64_t> index(std::uint64_t e, std::uint64_t budget) {
    while (diagonal_ <= budget && !where_.count(e)) advance();
    auto it = where_.find(e);
    if (it == where_.end() || it->second.second > budget) return std::nullopt;
    return it->second.first;
  }

 private:
  BigNat x_;
  std::uint64_t diagonal_ = 0;
  std::vector<std::unique_ptr<Machine>> machines_;
  std::vector<std::uint64_t> found_;
  std::map<std::uint64_t, std::pair<std::uint64_t, std::uint64_t>> where_;
};

std::mutex dovetail_mu;

Dovetailer& dovetailer(const BigNat& x) {
  static std::map<BigNat, Dovetailer> cache;
  auto it = cache.find(x);
  if (it == cache.end()) it = cache.emplace(x, Dovetailer(x)).first;
  return it->second;
}

std::vector<Config> halting_trace(std::uint64_t e, const BigNat& x) {
  Machine m(program_at(e), {x});
  std::vector<Config> trace{m.config()};
  while (!m.halted()) {
    m.step();
    trace.push_back(m.config());
  }
  return trace;
}

}  // namespace

HaltingCertificate enumerate_halting_computations(const BigNat& x, std::uint64_t i) {
  if (i == 0) throw std::invalid_argument("certificates are numbered from 1");
  std::uint64_t e;
  {
    std::lock_guard lock(dovetail_mu);
    e = dovetailer(x).program(i);
  }
  return HaltingCertificate{e, x, halting_trace(e, x)};
}

int p_cert(std::uint64_t e, std::uint64_t i, const BigNat& x) {
  if (i == 0) return 0;
  const auto cert = enumerate_halting_computations(x, i);
  if (cert.program != e) return 0;
  Machine m(program_at(e), {x});
  if (cert.trace.empty() || !(m.config() == cert.trace[0])) return 0;
  for (std::size_t k = 1; k < cert.trace.size(); ++k) {
    if (m.halted()) return 0;
    m.step();
    if (!(m.config() == cert.trace[k])) return 0;
  }
  return m.halted() ? 1 : 0;
}

std::optional<std::uint64_t> certificate_index(std::uint64_t e, const BigNat& x, std::uint64_t budget) {
  std::lock_guard lock(dovetail_mu);
  return dovetailer(x).index(e, budget);
}

RealOracle::RealOracle(std::uint64_t step_budget, std::uint64_t dovetail_budget)
    : step_budget_(step_budget), dovetail_budget_(dovetail_budget) {}

std::optional<BigNat> RealOracle::halts_within(std::uint64_t e, const BigNat& x, std::uint64_t s) const {
  const auto r = run(program_at(e), x, s);
  if (!r.halted) return std::nullopt;
  return r.output;
}

Evaluation RealOracle::evaluate(std::uint64_t e, const BigNat& x) const {
  const auto r = run(program_at(e), x, step_budget_);
  if (!r.halted) return {Evaluation::Kind::unknown, 0};
  return {Evaluation::Kind::halts, r.output};
}

std::optional<std::uint64_t> RealOracle::certificate_index(std::uint64_t e, const BigNat& x) const {
  return colearn::certificate_index(e, x, dovetail_budget_);
}

bool RealOracle::certificate_matches(std::uint64_t e, std::uint64_t i, const BigNat& x) const {
  return p_cert(e, i, x) == 1;
}

std::string RealOracle::describe() const {
  return "machine(steps=" + std::to_string(step_budget_) + ",dovetail=" + std::to_string(dovetail_budget_) + ")";
}

TableOracle& TableOracle::halts(std::uint64_t e, std::uint64_t x, unsigned value, std::optional<std::uint64_t> cert) {
  return halts(e, x, BigNat(value), cert);
}

TableOracle& TableOracle::halts(std::uint64_t e, std::uint64_t x, const BigNat& value,
                                std::optional<std::uint64_t> cert) {
  entries_[{e, x}] = Entry{value, cert.value_or(e + 1)};
  return *this;
}

TableOracle& TableOracle::diverges(std::uint64_t e, std::uint64_t x) {
  entries_.erase({e, x});
  return *this;
}

const TableOracle::Entry* TableOracle::find(std::uint64_t e, const BigNat& x) const {
  if (x > std::numeric_limits<std::uint64_t>::max()) return nullptr;
  auto it = entries_.find({e, static_cast<std::uint64_t>(x)});
  return it == entries_.end() ? nullptr : &it->second;
}

std::optional<BigNat> TableOracle::halts_within(std::uint64_t e, const BigNat& x, std::uint64_t) const {
  if (const auto* entry = find(e, x)) return entry->value;
  return std::nullopt;
}

Evaluation TableOracle::evaluate(std::uint64_t e, const BigNat& x) const {
  if (const auto* entry = find(e, x)) return {Evaluation::Kind::halts, entry->value};
  return {Evaluation::Kind::diverges, 0};
}

std::optional<std::uint64_t> TableOracle::certificate_index(std::uint64_t e, const BigNat& x) const {
  if (const auto* entry = find(e, x)) return entry->certificate;
  return std::nullopt;
}

bool TableOracle::certificate_matches(std::uint64_t e, std::uint64_t i, const BigNat& x) const {
  const auto* entry = find(e, x);
  return entry && i > 0 && entry->certificate == i;
}

std::string TableOracle::describe() const { return "table(" + std::to_string(entries_.size()) + " halting pairs)"; }

TableOracle TableOracle::from_json(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  if (!j.is_object()) throw std::invalid_argument("oracle table must be a JSON object");
  TableOracle t;
  for (const auto& [key, val] : j.items()) {
    const auto comma = key.find(',');
    if (comma == std::string::npos) throw std::invalid_argument("oracle key '" + key + "' is not \"e,x\"");
    const auto e = std::stoull(key.substr(0, comma));
    const auto x = std::stoull(key.substr(comma + 1));
    if (val.is_string() && val.get<std::string>() == "diverges") {
      t.diverges(e, x);
      continue;
    }
    if (!val.is_object() || !val.contains("halts"))
      throw std::invalid_argument("oracle entry '" + key + "' must be {\"halts\": v} or \"diverges\"");
    const auto& h = val["halts"];
    BigNat v = h.is_string() ? BigNat(h.get<std::string>()) : BigNat(h.get<std::uint64_t>());
    std::optional<std::uint64_t> cert;
    if (val.contains("cert")) cert = val["cert"].get<std::uint64_t>();
    t.halts(e, x, v, cert);
  }
  return t;
}

TableOracle TableOracle::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open oracle file " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return from_json(buf.str());
}

std::string TableOracle::to_json() const {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [k, v] : entries_)
    j[std::to_string(k.first) + "," + std::to_string(k.second)] = {{"halts", v.value.str()}, {"cert", v.certificate}};
  return j.dump(2);
}

OraclePtr default_oracle(std::uint64_t step_budget, std::uint64_t dovetail_budget) {
  if (const char* path = std::getenv("COLEARN_ORACLE"); path && *path)
    return std::make_shared<TableOracle>(TableOracle::from_file(path));
  return std::make_shared<RealOracle>(step_budget, dovetail_budget);
}

}  // namespace colearn
