#include "colearn/cli.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "colearn/batch.hpp"
#include "colearn/classes.hpp"
#include "colearn/constructions.hpp"
#include "colearn/game.hpp"
#include "colearn/learners.hpp"
#include "colearn/littlestone.hpp"
#include "colearn/machine.hpp"
#include "colearn/significance.hpp"

namespace colearn {

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string bit(bool b) { return b ? "1" : "0"; }

std::string label_or(const std::optional<Label>& l, const char* none = "-") {
  return l ? std::to_string(static_cast<int>(*l)) : none;
}

std::string join(const std::vector<std::string>& parts, const std::string& sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? sep : "") + parts[i];
  return out;
}

std::string support_string(const std::set<BigNat>& s) {
  std::vector<std::string> parts;
  for (const auto& v : s) parts.push_back(to_decimal(v));
  return "{" + join(parts, ",") + "}";
}

std::string evaluation_string(const Evaluation& e) {
  switch (e.kind) {
    case Evaluation::Kind::halts:
      return to_decimal(e.value);
    case Evaluation::Kind::diverges:
      return "diverges";
    default:
      return "unknown";
  }
}

// ---- options ---------------------------------------------------------------

struct Options {
  std::string format = "tsv";
  // class source
  std::string builder;
  std::string class_file;
  unsigned d = 3;
  std::size_t n = 4;
  std::uint64_t e_max = 3;
  std::uint64_t s_max = 200;
  std::uint64_t i_max = 4;
  std::uint64_t x_max = 64;
  // machines and oracles
  std::string oracle_file;
  std::uint64_t step_budget = 2000;
  std::uint64_t dovetail_budget = 4000;
  // learners and games
  std::string learner = "sol";
  std::size_t horizon = 0;
  std::string history;
  std::size_t fuel = 200000;
  // significance
  std::string kind = "both";
  std::size_t max_length = 1;
  std::size_t oracle_horizon = 0;
  // demos
  std::uint64_t e = 0;
  std::uint64_t m = 2;
  std::size_t k = 4;
  bool literal = false;
  // build
  std::string out_file;
  std::string map_file;
  // batch
  std::string sample;
  std::string queries;
  std::string dist_file;
  std::size_t sample_size = 40;
  std::string eps = "1/5";
  std::string delta = "1/10";
  std::size_t trials = 200;
  std::uint64_t seed = 1;
};

void add_format(CLI::App* sub, Options& o) {
  sub->add_option("--format", o.format, "Report format")->check(CLI::IsMember({"tsv", "json"}));
}

void add_class_options(CLI::App* sub, Options& o) {
  sub->add_option("--builder", o.builder,
                  "thresholds, singletons, hd-prime, rer-halt, halting, dr-ext, dr-halt, split, init");
  sub->add_option("--class", o.class_file, "Class file (JSON)");
  sub->add_option("--d", o.d, "Threshold depth");
  sub->add_option("--n", o.n, "Number of singletons");
  sub->add_option("--e-max", o.e_max, "Largest program index in constructed classes");
  sub->add_option("--s-max", o.s_max, "Step budget of halting checks in constructed classes");
  sub->add_option("--i-max", o.i_max, "Largest block of the split class");
  sub->add_option("--x-max", o.x_max, "Largest instance of the self-halting class");
}

void add_machine_options(CLI::App* sub, Options& o) {
  sub->add_option("--oracle", o.oracle_file, "Halting table (JSON); defaults to $COLEARN_ORACLE");
  sub->add_option("--step-budget", o.step_budget, "Steps per machine run")->check(CLI::PositiveNumber);
  sub->add_option("--dovetail-budget", o.dovetail_budget, "Diagonal budget of certificate searches")
      ->check(CLI::PositiveNumber);
}

OraclePtr make_oracle(const Options& o) {
  if (!o.oracle_file.empty()) return std::make_shared<TableOracle>(TableOracle::from_file(o.oracle_file));
  return default_oracle(o.step_budget, o.dovetail_budget);
}

// ---- class and learner registry -------------------------------------------

struct Built {
  std::string name;
  FiniteClass cls;
  std::optional<ConstructedClass> constructed;
  OraclePtr oracle;

  std::string instance_name(Instance x) const {
    if (constructed && x < constructed->map.size()) return to_decimal(constructed->map.value(x));
    return std::to_string(x);
  }
};

Built build_class(const Options& o) {
  if (!o.class_file.empty() && !o.builder.empty()) throw UsageError("give either --class or --builder, not both");
  Built b;
  if (!o.class_file.empty()) {
    b.name = o.class_file;
    b.cls = class_from_file(o.class_file);
    return b;
  }
  const std::string& name = o.builder.empty() ? std::string("thresholds") : o.builder;
  b.name = name;
  if (name == "thresholds") {
    b.cls = thresholds(o.d);
  } else if (name == "singletons") {
    b.cls = singletons(o.n);
  } else if (name == "hd-prime") {
    b.cls = hd_prime(o.d);
  } else if (name == "rer-halt" || name == "halting" || name == "dr-ext" || name == "dr-halt") {
    b.oracle = make_oracle(o);
    if (name == "rer-halt") b.constructed = build_h_rer_halt(*b.oracle, o.e_max, o.s_max);
    if (name == "halting") b.constructed = build_h_halting(*b.oracle, o.e_max, o.s_max);
    if (name == "dr-ext") b.constructed = build_h_dr_ext(*b.oracle, o.e_max);
    if (name == "dr-halt") b.constructed = build_h_dr_halt(*b.oracle, o.e_max);
    b.cls = b.constructed->cls;
  } else if (name == "split") {
    SplitClass split(o.step_budget);
    b.cls = split.truncation(o.i_max);
  } else if (name == "init") {
    b.cls = build_h_init(o.s_max, o.x_max).cls;
  } else {
    throw UsageError("unknown builder '" + name + "'");
  }
  return b;
}

const std::vector<std::string> kLearnerNames = {"sol",     "sig",       "conservative", "b-rer-halt", "b-dr-ext",
                                                "b-dr-halt", "const0", "const1",       "toy:<index>"};

void check_learner_name(const std::string& name) {
  if (name.rfind("toy:", 0) == 0) {
    const auto idx = name.substr(4);
    if (idx.empty() || idx.find_first_not_of("0123456789") != std::string::npos)
      throw UsageError("bad toy learner '" + name + "'");
    return;
  }
  for (const auto& n : kLearnerNames)
    if (n == name) return;
  throw UsageError("unknown learner '" + name + "' (known: " + join(kLearnerNames, ", ") + ")");
}

LearnerPtr make_learner(const std::string& name, const Built& b, const Options& o) {
  check_learner_name(name);
  if (name == "sol") return sol(b.cls);
  if (name == "conservative") return conservative_learner();
  if (name == "const0") return constant_learner(0);
  if (name == "const1") return constant_learner(1);
  if (name == "sig") {
    const int d = ldim(b.cls);
    if (d < 0) throw UsageError("sig needs a nonempty class");
    return sig_predictor(EnumerableClass::from_finite(b.cls, b.cls.size() + 1), static_cast<unsigned>(d), o.fuel);
  }
  if (name == "b-rer-halt") return learner_b_rer_halt();
  if (name == "b-dr-ext" || name == "b-dr-halt") {
    if (!b.constructed || !b.oracle || (b.name != "dr-ext" && b.name != "dr-halt"))
      throw UsageError(name + " needs --builder dr-ext or dr-halt");
    if (name == "b-dr-ext") return learner_b_dr_ext(b.oracle, b.constructed->map, o.literal);
    return learner_b_dr_halt(b.oracle, b.constructed->map);
  }
  return std::make_shared<ToyLearner>(std::stoull(name.substr(4)), o.step_budget);
}

Sample parse_history(const std::string& text, const Built& b) {
  Sample s = Sample::parse(text);
  for (const auto& it : s)
    if (it.x >= b.cls.domain_size())
      throw UsageError("instance " + std::to_string(it.x) + " outside the domain of size " +
                       std::to_string(b.cls.domain_size()));
  return s;
}

std::vector<Sample> realizable_histories(const FiniteClass& h, std::size_t max_length) {
  std::vector<Sample> out{Sample{}};
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (out[i].size() == max_length) continue;
    for (Instance x = 0; x < h.domain_size(); ++x)
      for (Label y : {Label{0}, Label{1}}) {
        auto next = out[i].appended({x, y});
        if (is_realizable(h, next)) out.push_back(std::move(next));
      }
  }
  return out;
}

// ---- subcommands -----------------------------------------------------------

void cmd_ldim(const Options& o, Report& r) {
  const Built b = build_class(o);
  const int d = ldim(b.cls);
  r.add_meta("class", b.name);
  r.add_meta("domain", std::to_string(b.cls.domain_size()));
  r.add_meta("hypotheses", std::to_string(b.cls.size()));
  r.columns = {"quantity", "value"};
  r.add_row({"ldim", std::to_string(d)});
  if (d >= 0) {
    const auto tree = find_shattered_tree(b.cls, static_cast<unsigned>(d));
    std::vector<std::string> nodes;
    if (tree)
      for (auto x : tree->nodes) nodes.push_back(b.instance_name(x));
    r.add_row({"witness", "[" + join(nodes, ",") + "]"});
    r.check("witness tree of depth ldim", tree && verify_shattered_tree(b.cls, *tree, static_cast<unsigned>(d)));
    r.check("no tree of depth ldim+1", !find_shattered_tree(b.cls, static_cast<unsigned>(d + 1)));
    const auto m = optimal_mistake_bound(b.cls);
    r.add_row({"optimal_mistake_bound", std::to_string(m)});
    r.check("optimal mistake bound equals ldim", static_cast<int>(m) == d);
  }
}

void cmd_duel(const Options& o, Report& r) {
  const Built b = build_class(o);
  const auto a = make_learner(o.learner, b, o);
  const Sample history = parse_history(o.history, b);
  if (!is_realizable(b.cls, history)) throw UsageError("history " + history.to_string() + " is not realizable");
  const int d = ldim(b.cls);
  const std::size_t horizon = o.horizon ? o.horizon : static_cast<std::size_t>(2 * std::max(d, 0) + 2);
  const auto gv = post_sample_mistake_bound(*a, b.cls, history, Horizon{horizon, std::nullopt});
  const auto opt = optimal_post_sample_bound(b.cls, history);
  r.add_meta("class", b.name);
  r.add_meta("learner", a->name());
  r.add_meta("history", history.to_string());
  r.add_meta("horizon", std::to_string(horizon));
  r.add_meta("learner_bound", std::to_string(gv.value));
  r.add_meta("optimal_bound", std::to_string(opt));
  r.columns = {"t", "x", "prediction", "y", "mistake", "version_space", "version_space_ldim"};
  const Sample full = history.concat(gv.witness);
  std::size_t after = 0;
  for (const auto& row : transcript(*a, b.cls, full)) {
    if (row.t > history.size() && row.mistake) ++after;
    r.add_row({std::to_string(row.t), b.instance_name(row.x), label_or(row.prediction, "none"),
               std::to_string(row.y), bit(row.mistake), std::to_string(row.version_space),
               std::to_string(row.version_space_ldim)});
  }
  r.check("witness replays to the reported bound", after == gv.value);
  r.check("learner bound at least the optimal bound", gv.value >= opt);
}

void cmd_significance(const Options& o, Report& r) {
  const Built b = build_class(o);
  if (o.kind != "opt" && o.kind != "aopt" && o.kind != "both") throw UsageError("--kind must be opt, aopt or both");
  const auto solver = sol(b.cls);
  r.add_meta("class", b.name);
  r.add_meta("max_length", std::to_string(o.max_length));
  r.add_meta("oracle_horizon", std::to_string(o.oracle_horizon));
  r.columns = {"history", "x", "kind", "significant", "forced", "sol", "ldim_vs", "ldim0", "ldim1", "oracle"};
  bool conform = true, agree = true, oracle_agree = true;
  for (const auto& s : realizable_histories(b.cls, o.max_length)) {
    for (Instance x = 0; x < b.cls.domain_size(); ++x) {
      const Label p = solver->predict_or_throw(s, x);
      std::optional<SignificanceVerdict> va, vo;
      for (const std::string kind : {"aopt", "opt"}) {
        if (o.kind != "both" && o.kind != kind) continue;
        const bool aopt = kind == "aopt";
        const auto v = aopt ? is_aopt_significant(b.cls, s, x) : is_opt_significant(b.cls, s, x);
        std::string oracle = "-";
        if (o.oracle_horizon) {
          const auto bf = aopt ? brute_force_aopt_significant(b.cls, s, x, o.oracle_horizon)
                               : brute_force_opt_significant(b.cls, s, x, o.oracle_horizon);
          oracle = bf.significant ? label_or(bf.forced) : "none";
          if (bf.significant != v.significant || bf.forced != v.forced) oracle_agree = false;
        }
        if (v.significant && *v.forced != p) conform = false;
        const auto& ev = v.steps.back();
        r.add_row({s.to_string(), b.instance_name(x), to_string(v.kind), bit(v.significant), label_or(v.forced),
                   std::to_string(p), std::to_string(ev.ldim_before), std::to_string(ev.ldim0),
                   std::to_string(ev.ldim1), oracle});
        (aopt ? va : vo) = v;
      }
      if (va && vo && va->significant && vo->significant && va->forced != vo->forced) agree = false;
    }
  }
  r.check("sol predicts the forced label on significant inputs", conform);
  r.check("a-optimal and optimal forced labels agree", agree);
  if (o.oracle_horizon) r.check("closed form agrees with the exhaustive oracle", oracle_agree);
}

void cmd_demo_hdprime(const Options& o, Report& r) {
  if (o.d < 3 || o.d > 5) throw UsageError("demo-hdprime needs 3 <= d <= 5");
  const unsigned d = o.d;
  const FiniteClass h = hd_prime(d);
  const auto a = restricted_sol(h, thresholds(d));
  const auto s = sol(h);
  Sample e_sample;
  for (unsigned i = 1; i + 1 <= d; ++i) e_sample.push_back({threshold_instance((1u << d) + i), 1});
  const std::size_t horizon = o.horizon ? o.horizon : 2 * d + 2;
  const Horizon any{horizon, std::nullopt, false};
  const Horizon distinct{horizon, std::nullopt, true};
  const Horizon aopt{o.horizon ? o.horizon : d + 1, std::nullopt, false};
  const auto opt = optimal_mistake_bound(h);
  r.add_meta("d", std::to_string(d));
  r.add_meta("e_sample", e_sample.to_string());
  r.add_meta("instance_offset", "stored = written - 1");
  r.add_meta("horizon", std::to_string(horizon));
  r.columns = {"learner", "e_sample_mistakes", "bound", "bound_distinct", "optimal_bound", "a_optimal",
               "counterexample"};
  struct Line {
    std::size_t mistakes, bound, bound_distinct;
    OptimalityVerdict verdict;
  };
  auto line = [&](const LearnerPtr& l, const char* name) {
    Line out{mistakes_on_sample(*l, e_sample), mistake_bound(*l, h, any).value,
             mistake_bound(*l, h, distinct).value, is_anytime_optimal(*l, h, aopt)};
    r.add_row({name, std::to_string(out.mistakes), std::to_string(out.bound), std::to_string(out.bound_distinct),
               std::to_string(opt), bit(out.verdict.holds),
               out.verdict.counterexample ? out.verdict.counterexample->to_string() : "-"});
    return out;
  };
  const Line la = line(a, "A");
  const Line ls = line(s, "sol");
  const Sample first_e{{threshold_instance((1u << d) + 1), 1}};
  const auto after_e = post_sample_mistake_bound(*a, h, first_e, aopt).value;
  const auto opt_after_e = optimal_post_sample_bound(h, first_e);
  r.add_row({"A after " + first_e.to_string(), "-", std::to_string(after_e), "-", std::to_string(opt_after_e), "-",
             "-"});
  // A falls back to 0 once the history leaves the thresholds, so it can be
  // driven into 1_E by threshold mistakes and then err on every E instance.
  r.add_meta("note", "A's bound exceeds the optimal bound: " + std::to_string(la.bound_distinct) +
                         " without repeated instances, growing with the horizon otherwise");
  r.check("ldim(H'_d) = d", ldim(h) == static_cast<int>(d));
  r.check("A errs d-1 times on the E sample", la.mistakes == d - 1);
  r.check("sol errs once on the E sample", ls.mistakes == 1);
  r.check("optimal bound = d", opt == d);
  r.check("sol errs at most d times", ls.bound == d);
  r.check("A is not a-optimal", !la.verdict.holds);
  r.check("sol is a-optimal", ls.verdict.holds);
  r.check("A can still err after the first E instance", after_e > opt_after_e);
}

void cmd_demo_rer_halt(const Options& o, Report& r) {
  const auto oracle = make_oracle(o);
  const auto c = build_h_rer_halt(*oracle, o.e_max, o.s_max);
  r.add_meta("oracle", oracle->describe());
  r.add_meta("e_max", std::to_string(o.e_max));
  r.columns = {"e", "halts", "significant", "forced", "ldim0", "ldim1"};
  bool reduction = true, any_halts = false;
  for (std::uint64_t e = 0; e <= o.e_max; ++e) {
    const bool halts = oracle->halts_within(e, BigNat(e), o.s_max).has_value();
    any_halts = any_halts || halts;
    const Sample s{{3 * e, 1}};
    const auto v = is_aopt_significant(c.cls, s, 3 * e + 1);
    if (!v.significant || *v.forced != (halts ? 1 : 0)) reduction = false;
    const auto& ev = v.steps.back();
    r.add_row({std::to_string(e), bit(halts), bit(v.significant), label_or(v.forced), std::to_string(ev.ldim0),
               std::to_string(ev.ldim1)});
  }
  const int d = ldim(c.cls);
  const auto b = learner_b_rer_halt();
  const std::size_t horizon = o.horizon ? o.horizon : 4;
  const auto bound = mistake_bound(*b, c.cls, Horizon{horizon, std::nullopt});
  r.add_meta("ldim", std::to_string(d));
  r.add_meta("b_mistake_bound", std::to_string(bound.value));
  r.add_meta("b_witness", bound.witness.to_string());
  r.check("forced a-optimal prediction equals the halting bit", reduction);
  r.check("ldim = 2 when some program halts", !any_halts || d == 2);
  r.check("learner B errs at most ldim times", static_cast<int>(bound.value) <= std::max(d, 0));
  r.check("learner B is optimal", static_cast<int>(bound.value) == std::max(d, 0));
}

void cmd_demo_dr_ext(const Options& o, Report& r) {
  const auto oracle = make_oracle(o);
  const auto c = build_h_dr_ext(*oracle, o.e_max);
  const int d = ldim(c.cls);
  r.add_meta("oracle", oracle->describe());
  r.add_meta("ldim", std::to_string(d));
  r.add_meta("domain", std::to_string(c.cls.domain_size()));
  r.columns = {"e", "c0", "phi_e(e)", "case", "members", "x(e)", "significant", "forced", "expected"};
  bool table_ok = true;
  for (std::uint64_t e = 0; e <= o.e_max; ++e) {
    const auto f = dr_facts(*oracle, e);
    const auto block = dr_ext_block(*oracle, e);
    std::string kase, xe = "-", sig = "0", forced = "-", expected;
    if (!f.c0) {
      kase = "0 diverges";
      expected = "not realizable";
      sig = "n/a";
    } else {
      const BigNat base = pow_big(2, e);
      const BigNat x = prime_power_instance(e, 3, *f.c0);
      xe = to_decimal(x);
      std::optional<Label> want;
      if (f.self.converges_to(1)) {
        kase = "0 halts, e halts with 1";
        want = 0;
      } else if (f.self.converges_to(0)) {
        kase = "0 halts, e halts with 0";
        want = 1;
      } else {
        kase = f.self.converges() ? "0 halts, e halts outside {0,1}" : "0 halts, e " + evaluation_string(f.self);
      }
      expected = want ? "forced " + std::to_string(static_cast<int>(*want)) : "not significant";
      const auto cx = c.compact(x);
      const auto cb = c.compact(base);
      if (cx && cb) {
        const auto v = is_opt_significant(c.cls, Sample{{*cb, 1}}, *cx);
        sig = bit(v.significant);
        forced = label_or(v.forced);
        if (v.significant != want.has_value() || (want && v.forced != want)) table_ok = false;
      } else {
        table_ok = false;
      }
    }
    r.add_row({std::to_string(e), f.c0 ? std::to_string(*f.c0) : "-", evaluation_string(f.self), kase,
               std::to_string(block.size()), xe, sig, forced, expected});
  }
  // Decider: members accepted, perturbed supports rejected.
  bool accepts = true, rejects = true;
  for (const auto& s : c.supports)
    if (dr_decider_h_dr_ext(*oracle, canonical_index(s)) != 1) accepts = false;
  const auto bad = perturbed_supports(c.supports, 100);
  for (const auto& s : bad)
    if (dr_decider_h_dr_ext(*oracle, canonical_index(s)) != 0) rejects = false;
  r.add_meta("decider_members", std::to_string(c.supports.size()));
  r.add_meta("decider_perturbed", std::to_string(bad.size()));
  const auto b = learner_b_dr_ext(oracle, c.map, o.literal);
  const std::size_t horizon = o.horizon ? o.horizon : 4;
  const auto bound = mistake_bound(*b, c.cls, Horizon{horizon, std::nullopt});
  r.add_meta("b_mistake_bound", std::to_string(bound.value));
  r.add_meta("b_witness", bound.witness.to_string());
  r.check("ldim of the truncation = 2", d == 2);
  r.check("significance table matches the four oracle cases", table_ok);
  r.check("decider accepts every member support", accepts);
  r.check("decider rejects 100 perturbed supports", rejects && bad.size() == 100);
  r.check("learner B errs at most twice", bound.value <= 2);
}

void cmd_demo_dr_halt(const Options& o, Report& r) {
  const auto oracle = make_oracle(o);
  const auto c = build_h_dr_halt(*oracle, o.e_max);
  const int d = ldim(c.cls);
  r.add_meta("oracle", oracle->describe());
  r.add_meta("ldim", std::to_string(d));
  r.columns = {"e", "c0", "phi_e(e)", "x(e)", "significant", "forced", "expected"};
  bool flips = true, any_halts = false;
  for (std::uint64_t e = 0; e <= o.e_max; ++e) {
    const auto f = dr_facts(*oracle, e);
    if (!f.c0) {
      r.add_row({std::to_string(e), "-", evaluation_string(f.self), "-", "n/a", "-", "undefined"});
      continue;
    }
    const bool halts = f.ce.has_value();
    any_halts = any_halts || halts;
    const BigNat x = prime_power_instance(e, 3, *f.c0);
    const auto cx = c.compact(x);
    const auto cb = c.compact(pow_big(2, e));
    const Label want = halts ? 0 : 1;
    std::string sig = "-", forced = "-";
    if (cx && cb) {
      const auto v = is_aopt_significant(c.cls, Sample{{*cb, 1}}, *cx);
      sig = bit(v.significant);
      forced = label_or(v.forced);
      if (!v.significant || *v.forced != want) flips = false;
    } else {
      flips = false;
    }
    r.add_row({std::to_string(e), std::to_string(*f.c0), evaluation_string(f.self), to_decimal(x), sig, forced,
               std::to_string(want)});
  }
  const auto b = learner_b_dr_halt(oracle, c.map);
  const std::size_t horizon = o.horizon ? o.horizon : 4;
  const auto bound = mistake_bound(*b, c.cls, Horizon{horizon, std::nullopt});
  r.add_meta("b_mistake_bound", std::to_string(bound.value));
  r.add_meta("b_witness", bound.witness.to_string());
  r.check("forced a-optimal prediction flips with phi_e(e)", flips);
  r.check("ldim = 2 when some program halts on itself", !any_halts || d == 2);
  r.check("learner B errs at most ldim times", static_cast<int>(bound.value) <= std::max(d, 0));
}

void cmd_demo_split(const Options& o, Report& r) {
  SplitClass split(o.step_budget);
  const std::uint64_t i = o.m + o.e;
  const std::uint64_t i_max = std::max(o.i_max, i);
  const Sample s = split.forcing_sample(o.e, o.m);
  const ToyLearner learner(o.e, o.step_budget);
  r.add_meta("learner", learner.name());
  std::string text = program_at(o.e).to_text();
  while (!text.empty() && text.back() == '\n') text.pop_back();
  std::replace(text.begin(), text.end(), '\n', ';');
  r.add_meta("program", text);
  r.add_meta("block", "N_{" + std::to_string(i) + "," + std::to_string(o.m) + "}");
  r.columns = {"t", "n", "prediction", "label", "mistake"};
  std::size_t mistakes = 0;
  bool answered = true;
  for (std::size_t t = 0; t < s.size(); ++t) {
    const auto p = learner.predict(s.prefix(t), s[t].x);
    if (!p) answered = false;
    const bool miss = !p || *p != s[t].y;
    if (miss) ++mistakes;
    r.add_row({std::to_string(t + 1), std::to_string(s[t].x), label_or(p, "none"), std::to_string(s[t].y),
               bit(miss)});
  }
  const FiniteClass trunc = split.truncation(i_max);
  std::vector<std::string> flagged;
  for (auto n : split.exhausted()) flagged.push_back(std::to_string(n));
  r.add_meta("mistakes", std::to_string(mistakes));
  r.add_meta("budget_exhausted_instances", flagged.empty() ? "-" : join(flagged, ","));
  r.add_meta("truncation_blocks", std::to_string(i_max + 1));
  r.check("learner answers within budget", answered);
  r.check("forcing sample yields M+1 mistakes", mistakes == o.m + 1);
  r.check("ldim of the truncation = 1", ldim(trunc) == 1);
}

void cmd_demo_init(const Options& o, Report& r) {
  const auto c = build_h_init(o.s_max, o.x_max);
  r.add_meta("s_max", std::to_string(o.s_max));
  r.add_meta("x_max", std::to_string(o.x_max));
  r.add_meta("k", std::to_string(o.k));
  r.columns = {"j", "x_j", "self_halting_steps", "threshold_hypothesis"};
  const auto w = find_thresholds(c.cls, o.k);
  if (!r.check("k thresholds found", w.has_value())) return;
  for (std::size_t j = 0; j < w->points.size(); ++j) {
    const auto x = w->points[j];
    std::uint64_t s_index = 0;
    for (std::uint64_t s = 0; s <= o.s_max; ++s)
      if (c.row(s) == w->hypotheses[j]) {
        s_index = s;
        break;
      }
    r.add_row({std::to_string(j + 1), std::to_string(x),
               c.self_halting[x] ? std::to_string(*c.self_halting[x]) : "-", "h_" + std::to_string(s_index)});
  }
  const FiniteClass sub(c.cls.domain_size(), w->hypotheses);
  const auto tree = threshold_tree(*w);
  const unsigned depth = static_cast<unsigned>(std::floor(std::log2(static_cast<double>(o.k))));
  std::vector<std::string> nodes;
  for (auto x : tree.nodes) nodes.push_back(std::to_string(x));
  r.add_meta("tree", "[" + join(nodes, ",") + "]");
  r.add_meta("ldim_subclass", std::to_string(ldim(sub)));
  r.check("threshold tree is shattered", verify_shattered_tree(sub, tree, depth));
  r.check("ldim >= floor(log2 k)", ldim(c.cls) >= static_cast<int>(depth));
}

void cmd_build(const Options& o, Report& r) {
  const Built b = build_class(o);
  if (o.out_file.empty()) throw UsageError("build needs --out");
  {
    std::ofstream out(o.out_file);
    if (!out) throw UsageError("cannot write " + o.out_file);
    out << class_to_json(b.cls) << '\n';
  }
  r.add_meta("class", b.name);
  r.add_meta("out", o.out_file);
  r.columns = {"row", "support"};
  if (b.constructed) {
    const std::string map_path = o.map_file.empty() ? o.out_file + ".map.json" : o.map_file;
    std::ofstream out(map_path);
    if (!out) throw UsageError("cannot write " + map_path);
    out << b.constructed->map_json() << '\n';
    r.add_meta("map", map_path);
    for (std::size_t i = 0; i < b.constructed->supports.size(); ++i)
      r.add_row({b.constructed->labels[i], support_string(b.constructed->supports[i])});
  } else {
    for (const auto& s : b.cls.row_strings()) r.add_row({"-", s});
  }
  r.check("written class reads back identically", class_from_file(o.out_file) == b.cls);
}

std::vector<Instance> parse_queries(const std::string& text, std::size_t domain) {
  std::vector<Instance> out;
  if (text.empty()) {
    for (Instance x = 0; x < domain; ++x) out.push_back(x);
    return out;
  }
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      out.push_back(std::stoull(item));
    } catch (const std::logic_error&) {
      throw UsageError("bad query instance '" + item + "'");
    }
  }
  return out;
}

void cmd_convert(const Options& o, Report& r) {
  const Built b = build_class(o);
  const auto a = make_learner(o.learner, b, o);
  const Sample s = parse_history(o.sample, b);
  if (s.empty()) throw UsageError("convert needs a nonempty --sample");
  const auto xs = parse_queries(o.queries, b.cls.domain_size());
  const auto h = online_to_batch(*a, s, xs);
  r.add_meta("learner", a->name());
  r.add_meta("sample", s.to_string());
  r.columns = {"x", "probability_of_1"};
  bool linear = true;
  for (auto x : xs) {
    Rational sum = 0;
    for (std::size_t t = 0; t < s.size(); ++t) sum += a->predict_or_throw(s.prefix(t), x);
    if (h(x) * static_cast<long>(s.size()) != sum) linear = false;
    r.add_row({b.instance_name(x), to_string(h(x))});
  }
  r.check("output is the mean of the per-prefix predictions", linear);
}

void cmd_pac_eval(const Options& o, Report& r) {
  const Built b = build_class(o);
  const auto a = make_learner(o.learner, b, o);
  if (o.dist_file.empty()) throw UsageError("pac-eval needs --dist");
  const auto dist = FiniteDistribution::from_file(o.dist_file);
  const Rational eps = parse_rational(o.eps), delta = parse_rational(o.delta);
  const auto rep = pac_evaluate(*a, b.cls, dist, eps, delta, o.sample_size, o.trials, o.seed);
  r.add_meta("learner", a->name());
  r.add_meta("seed", std::to_string(o.seed));
  r.columns = {"quantity", "value"};
  r.add_row({"m", std::to_string(o.sample_size)});
  r.add_row({"trials", std::to_string(rep.trials)});
  r.add_row({"failures", std::to_string(rep.failures)});
  r.add_row({"class_error", to_string(rep.class_error)});
  r.add_row({"mean_error", to_string(rep.mean_error)});
  r.add_row({"worst_error", to_string(rep.worst_error)});
  r.add_row({"epsilon", to_string(rep.epsilon)});
  r.add_row({"delta", to_string(rep.delta)});
  r.check("failure fraction at most delta", rep.passed);
}

}  // namespace

// ---- report ----------------------------------------------------------------

bool Report::check(std::string name, bool passed) {
  checks.emplace_back(std::move(name), passed);
  return passed;
}

bool Report::ok() const {
  return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.second; });
}

void Report::write(std::ostream& out, ReportFormat format) const {
  if (format == ReportFormat::json) {
    nlohmann::ordered_json j;
    j["schema"] = kReportSchema;
    j["command"] = command;
    j["meta"] = nlohmann::ordered_json::object();
    for (const auto& [k, v] : meta) j["meta"][k] = v;
    j["columns"] = columns;
    j["rows"] = rows;
    j["checks"] = nlohmann::ordered_json::array();
    for (const auto& [name, passed] : checks) j["checks"].push_back({{"name", name}, {"passed", passed}});
    j["ok"] = ok();
    out << j.dump(2) << '\n';
    return;
  }
  out << "# " << kReportSchema << ' ' << command << '\n';
  for (const auto& [k, v] : meta) out << "# " << k << '=' << v << '\n';
  if (!columns.empty()) out << join(columns, "\t") << '\n';
  for (const auto& row : rows) out << join(row, "\t") << '\n';
  for (const auto& [name, passed] : checks) out << "# check " << (passed ? "ok" : "FAIL") << ' ' << name << '\n';
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Online learning experiments: Littlestone dimension, mistake games, significance, and the "
               "halting-based constructions"};
  app.require_subcommand(1);
  Options o;

  using Handler = void (*)(const Options&, Report&);
  std::vector<std::pair<CLI::App*, Handler>> commands;
  auto sub = [&](const char* name, const char* help, Handler h) {
    CLI::App* s = app.add_subcommand(name, help);
    add_format(s, o);
    commands.emplace_back(s, h);
    return s;
  };

  auto* c_ldim = sub("ldim", "Littlestone dimension with a witness tree", cmd_ldim);
  add_class_options(c_ldim, o);
  add_machine_options(c_ldim, o);

  auto* c_duel = sub("duel", "Learner against the exhaustive adversary", cmd_duel);
  add_class_options(c_duel, o);
  add_machine_options(c_duel, o);
  c_duel->add_option("--learner", o.learner, "Learner name");
  c_duel->add_option("--horizon", o.horizon, "Continuation length (default 2 ldim + 2)");
  c_duel->add_option("--history", o.history, "History before the game, e.g. ((0,1),(3,0))");
  c_duel->add_option("--fuel", o.fuel, "Fuel per prediction of the sig learner");

  auto* c_sig = sub("significance", "Significance verdicts over all short histories", cmd_significance);
  add_class_options(c_sig, o);
  add_machine_options(c_sig, o);
  c_sig->add_option("--kind", o.kind, "opt, aopt or both");
  c_sig->add_option("--max-length", o.max_length, "Longest history swept");
  c_sig->add_option("--oracle-horizon", o.oracle_horizon, "Cross-check with the exhaustive oracle at this horizon");

  auto* c_hd = sub("demo-hdprime", "Thresholds plus E: optimal but not a-optimal learner", cmd_demo_hdprime);
  c_hd->add_option("--d", o.d, "Threshold depth (3..5)");
  c_hd->add_option("--horizon", o.horizon, "Game horizon");

  auto* c_rer = sub("demo-rer-halt", "Halting-indexed class: a-optimal predictions decide halting", cmd_demo_rer_halt);
  add_machine_options(c_rer, o);
  c_rer->add_option("--e-max", o.e_max, "Largest program index");
  c_rer->add_option("--s-max", o.s_max, "Step budget of halting checks");
  c_rer->add_option("--horizon", o.horizon, "Game horizon for learner B");

  auto* c_ext = sub("demo-dr-ext", "Prime-power extension class: significance table and decider", cmd_demo_dr_ext);
  add_machine_options(c_ext, o);
  c_ext->add_option("--e-max", o.e_max, "Largest program index");
  c_ext->add_option("--horizon", o.horizon, "Game horizon for learner B");
  c_ext->add_flag("--literal", o.literal, "Learner B with the first-mistake rule as originally written");

  auto* c_dh = sub("demo-dr-halt", "Prime-power halting class: a-optimal predictions flip with halting",
                   cmd_demo_dr_halt);
  add_machine_options(c_dh, o);
  c_dh->add_option("--e-max", o.e_max, "Largest program index");
  c_dh->add_option("--horizon", o.horizon, "Game horizon for learner B");

  auto* c_split = sub("demo-split", "Forcing-sample replay against a toy learner", cmd_demo_split);
  c_split->add_option("--e", o.e, "Toy learner program index");
  c_split->add_option("--M", o.m, "Block offset M");
  c_split->add_option("--i-max", o.i_max, "Largest block of the truncation");
  c_split->add_option("--step-budget", o.step_budget, "Steps per learner run")->check(CLI::PositiveNumber);

  auto* c_init = sub("demo-init", "Threshold search in the self-halting class", cmd_demo_init);
  c_init->add_option("--s-max", o.s_max, "Largest step count");
  c_init->add_option("--x-max", o.x_max, "Largest program index")->check(CLI::Range(0, 127));
  c_init->add_option("--k", o.k, "Number of thresholds")->check(CLI::PositiveNumber);

  auto* c_build = sub("build", "Write a class file, with an instance map for constructed classes", cmd_build);
  add_class_options(c_build, o);
  add_machine_options(c_build, o);
  c_build->add_option("--out", o.out_file, "Class file to write")->required();
  c_build->add_option("--map-out", o.map_file, "Instance map file (default <out>.map.json)");

  auto* c_conv = sub("convert", "Online-to-batch conversion of a learner on a sample", cmd_convert);
  add_class_options(c_conv, o);
  add_machine_options(c_conv, o);
  c_conv->add_option("--learner", o.learner, "Learner name");
  c_conv->add_option("--sample", o.sample, "Training sample, e.g. ((0,1),(2,0))")->required();
  c_conv->add_option("--queries", o.queries, "Comma-separated instances (default: whole domain)");
  c_conv->add_option("--fuel", o.fuel, "Fuel per prediction of the sig learner");

  auto* c_pac = sub("pac-eval", "PAC evaluation of the converted learner", cmd_pac_eval);
  add_class_options(c_pac, o);
  add_machine_options(c_pac, o);
  c_pac->add_option("--learner", o.learner, "Learner name");
  c_pac->add_option("--dist", o.dist_file, "Finite distribution (JSON)")->required();
  c_pac->add_option("--m", o.sample_size, "Sample size")->check(CLI::PositiveNumber);
  c_pac->add_option("--eps", o.eps, "Accuracy, a rational such as 1/5");
  c_pac->add_option("--delta", o.delta, "Confidence, a rational such as 1/10");
  c_pac->add_option("--trials", o.trials, "Number of seeded trials")->check(CLI::PositiveNumber);
  c_pac->add_option("--seed", o.seed, "Generator seed");

  std::vector<std::string> argv_store{"colearn"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& a : argv_store) argv.push_back(a.data());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n';
    return 1;
  }

  for (const auto& [s, handler] : commands) {
    if (!s->parsed()) continue;
    Report report;
    report.command = s->get_name();
    try {
      handler(o, report);
    } catch (const UsageError& e) {
      err << "usage error: " << e.what() << '\n';
      return 1;
    } catch (const std::exception& e) {
      err << "error: " << e.what() << '\n';
      return 1;
    }
    report.write(out, o.format == "json" ? ReportFormat::json : ReportFormat::tsv);
    if (!report.ok()) {
      for (const auto& [name, passed] : report.checks)
        if (!passed) err << "property violated: " << name << '\n';
      return 2;
    }
    return 0;
  }
  return 1;
}

int run_cli(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run_cli(args, std::cout, std::cerr);
}

}  // namespace colearn
