#include "qmeq/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <future>
#include <map>
#include <ostream>
#include <sstream>

#include "qmeq/checker.hpp"
#include "qmeq/errors.hpp"
#include "qmeq/input_basis.hpp"
#include "qmeq/machine_format.hpp"
#include "qmeq/oracle.hpp"
#include "qmeq/walk.hpp"

namespace qmeq {

namespace {

using Json = nlohmann::ordered_json;

constexpr const char* kSchema = "qmeq-report/1";

// Folds -0.0 into 0.0 so reports never show a signed zero.
double unsigned_zero(double v) { return v == 0.0 ? 0.0 : v; }

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v == 0.0 ? 0.0 : v);
  return buf;
}

std::string join_outcomes(const QuantumMealyMachine& m, const OutcomeSequence& outs) {
  bool compact = true;
  for (auto a : outs) compact = compact && m.outcomes()[a].size() == 1;
  std::string s;
  for (std::size_t k = 0; k < outs.size(); ++k) {
    if (k && !compact) s += ' ';
    s += m.outcomes()[outs[k]];
  }
  return s;
}

std::string display_trace(const InputBasis& basis, const QuantumMealyMachine& m,
                          const ExperimentTrace& t) {
  if (t.length() == 0) return "(empty) / (empty)";
  return basis.format_sequence(t.inputs) + " / " + join_outcomes(m, t.outputs);
}

// tau_span, unless QMEQ_TOL overrides it.
double span_tolerance() {
  const char* env = std::getenv("QMEQ_TOL");
  if (env == nullptr || *env == '\0') return tol::kSpan;
  char* end = nullptr;
  const double v = std::strtod(env, &end);
  if (end == env || *end != '\0' || !std::isfinite(v) || v <= 0.0) {
    throw CLI::ValidationError("QMEQ_TOL", std::string("not a positive number: ") + env);
  }
  return v;
}

Json witness_json(const InputBasis& basis, const QuantumMealyMachine& m,
                  const std::optional<Witness>& w) {
  Json j;
  j["inputs"] = Json::array();
  j["outputs"] = Json::array();
  if (w) {
    for (auto x : w->trace.inputs) j["inputs"].push_back(basis[x].label());
    for (auto a : w->trace.outputs) j["outputs"].push_back(m.outcomes()[a]);
    j["display"] = display_trace(basis, m, w->trace);
  }
  return j;
}

void write_json(const std::string& path, const Json& j, std::ostream& out) {
  if (path == "-") {
    out << j.dump(2) << '\n';
    return;
  }
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << j.dump(2) << '\n';
}

struct PairArgs {
  std::string m1;
  std::string m2;
  std::string state1;
  std::string state2;
  std::string json;
  bool no_timing = false;
};

void add_pair_options(CLI::App* cmd, PairArgs& a) {
  cmd->add_option("m1", a.m1, "First machine (.qmm) or circuit (.qc)")->required();
  cmd->add_option("m2", a.m2, "Second machine (.qmm) or circuit (.qc)")->required();
  cmd->add_option("--state1", a.state1, "Initial state of the first machine")->required();
  cmd->add_option("--state2", a.state2, "Initial state of the second machine")->required();
  cmd->add_option("--json", a.json, "Also write a JSON report ('-' for stdout)");
  cmd->add_flag("--no-timing", a.no_timing, "Report elapsed_s as 0 for reproducible output");
}

struct LoadedPair {
  MachineWithStates first;
  MachineWithStates second;
  ComplexMatrix rho1;
  ComplexMatrix rho2;
  InputBasis basis;
};

LoadedPair load_pair(const PairArgs& a) {
  auto first = load_model(a.m1);
  auto second = load_model(a.m2);
  ComplexMatrix rho1 = first.state(a.state1).density;
  ComplexMatrix rho2 = second.state(a.state2).density;
  InputBasis basis = pure_state_basis(first.machine.input_dim());
  return {std::move(first), std::move(second), std::move(rho1), std::move(rho2), std::move(basis)};
}

int cmd_check(const PairArgs& a, bool no_early_abort, std::ostream& out) {
  const auto p = load_pair(a);
  CheckOptions opts;
  opts.early_abort = !no_early_abort;
  opts.tolerance = span_tolerance();
  const CheckReport r =
      check_equivalence(p.first.machine, p.second.machine, p.rho1, p.rho2, p.basis, opts);
  const auto& m = p.first.machine;

  out << "verdict: " << to_string(r.verdict) << '\n';
  if (r.witness) {
    out << "witness: " << display_trace(p.basis, m, r.witness->trace) << '\n';
    out << "p1: " << num(r.witness->p1) << '\n';
    out << "p2: " << num(r.witness->p2) << '\n';
    out << "gap: " << num(std::abs(r.witness->p1 - r.witness->p2)) << '\n';
  }
  out << "basis size: " << r.basis_size << " of " << r.ambient_dimension << '\n';
  out << "sequences examined: " << r.sequences_examined << '\n';

  if (!a.json.empty()) {
    Json j;
    j["schema"] = kSchema;
    j["command"] = "check";
    j["verdict"] = to_string(r.verdict);
    j["witness"] = witness_json(p.basis, m, r.witness);
    j["p1"] = r.witness ? Json(unsigned_zero(r.witness->p1)) : Json(nullptr);
    j["p2"] = r.witness ? Json(unsigned_zero(r.witness->p2)) : Json(nullptr);
    j["basis_size"] = r.basis_size;
    j["ambient_dimension"] = r.ambient_dimension;
    j["sequences_examined"] = r.sequences_examined;
    j["early_abort"] = opts.early_abort;
    j["tolerance"] = opts.tolerance;
    j["elapsed_s"] = a.no_timing ? 0.0 : r.elapsed_s;
    write_json(a.json, j, out);
  }
  return r.verdict == Verdict::kEquivalent ? kExitOk : kExitNotEquivalent;
}

int cmd_oracle(const PairArgs& a, std::size_t max_len, std::size_t node_cap, std::ostream& out) {
  const auto p = load_pair(a);
  OracleOptions opts;
  opts.tolerance = span_tolerance();
  opts.node_cap = node_cap;
  const auto start = std::chrono::steady_clock::now();
  const OracleResult r =
      k_equivalent_bruteforce(p.first.machine, p.second.machine, p.rho1, p.rho2, p.basis, max_len, opts);
  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const auto& m = p.first.machine;
  const char* verdict = r.equivalent_up_to_k ? "equivalent" : "not-equivalent";

  out << "verdict: " << verdict << " (sequences up to length " << max_len << ")\n";
  if (r.witness) {
    out << "witness: " << display_trace(p.basis, m, r.witness->trace) << '\n';
    out << "p1: " << num(r.witness->p1) << '\n';
    out << "p2: " << num(r.witness->p2) << '\n';
    out << "gap: " << num(std::abs(r.witness->p1 - r.witness->p2)) << '\n';
  }
  out << "nodes visited: " << r.nodes_visited << '\n';

  if (!a.json.empty()) {
    Json j;
    j["schema"] = kSchema;
    j["command"] = "oracle-check";
    j["verdict"] = verdict;
    j["max_len"] = max_len;
    j["witness"] = witness_json(p.basis, m, r.witness);
    j["p1"] = r.witness ? Json(unsigned_zero(r.witness->p1)) : Json(nullptr);
    j["p2"] = r.witness ? Json(unsigned_zero(r.witness->p2)) : Json(nullptr);
    j["basis_size"] = nullptr;
    j["nodes_visited"] = r.nodes_visited;
    j["tolerance"] = opts.tolerance;
    j["elapsed_s"] = a.no_timing ? 0.0 : elapsed;
    write_json(a.json, j, out);
  }
  return r.equivalent_up_to_k ? kExitOk : kExitNotEquivalent;
}

struct SimulateArgs {
  std::string model;
  std::string state;
  std::string inputs;
  std::uint64_t seed = 1;
  std::size_t shots = 1000;
};

int cmd_simulate(const SimulateArgs& a, std::ostream& out) {
  const auto model = load_model(a.model);
  const auto& m = model.machine;
  const auto& rho = model.state(a.state).density;
  const auto basis = pure_state_basis(m.input_dim());
  const auto inputs = basis.parse_sequence(a.inputs);

  RunSampler sampler(m, basis.states(), a.seed);
  std::map<OutcomeSequence, std::size_t> counts;
  for (std::size_t s = 0; s < a.shots; ++s) ++counts[sampler.sample(rho, inputs).outputs];

  // Exact probabilities alongside, when the outcome tree is small.
  std::optional<std::map<OutcomeSequence, double>> exact;
  if (tree_node_count(m.outcome_count(), inputs.size()) <= 1u << 16) {
    std::vector<InputState> seq;
    for (auto x : inputs) seq.push_back(basis[x]);
    exact = experiment_distribution(m, rho, seq);
  }

  out << "inputs: " << basis.format_sequence(inputs) << '\n';
  out << "shots: " << a.shots << "  seed: " << a.seed << '\n';
  for (const auto& [outs, n] : counts) {
    out << join_outcomes(m, outs) << "  " << n << "  "
        << num(static_cast<double>(n) / static_cast<double>(a.shots));
    if (exact) out << "  exact " << num(exact->at(outs));
    out << '\n';
  }
  return kExitOk;
}

int cmd_gen_walk(std::size_t size, const std::string& coin, const std::string& path,
                 bool as_circuit, std::ostream& out) {
  const ComplexMatrix c = coin_by_name(coin);
  std::ostringstream text;
  if (as_circuit) {
    CircuitWithStates model{walk_circuit(size, c, coin), walk_initial_states(size)};
    text << "# detecting walk on a " << size << "-cycle, coin " << coin << '\n';
    write_circuit(text, model);
  } else {
    const auto model = build_walk_machine(size, c);
    text << "# detecting walk on a " << size << "-cycle, coin " << coin << '\n';
    write_machine(text, model);
  }
  if (path.empty() || path == "-") {
    out << text.str();
  } else {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot write " + path);
    f << text.str();
  }
  return kExitOk;
}

int cmd_compile(const std::string& in, const std::string& path, std::ostream& out) {
  auto circuit = parse_circuit_file(in);
  MachineWithStates model{sequential_to_mealy(circuit.circuit), std::move(circuit.states)};
  require_valid(model.machine);
  std::ostringstream text;
  write_machine(text, model);
  if (path.empty() || path == "-") {
    out << text.str();
  } else {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot write " + path);
    f << text.str();
  }
  return kExitOk;
}

int cmd_selftest(const std::vector<std::size_t>& wanted, std::size_t jobs, bool timing,
                 std::ostream& out) {
  std::vector<WalkCase> cases;
  for (const auto& c : walk_benchmark_cases()) {
    if (wanted.empty() || std::find(wanted.begin(), wanted.end(), c.index) != wanted.end()) {
      cases.push_back(c);
    }
  }
  for (auto w : wanted) {
    if (w == 0 || w > walk_benchmark_cases().size()) {
      throw CLI::ValidationError("--cases", "no case " + std::to_string(w));
    }
  }
  CheckOptions opts;
  opts.tolerance = span_tolerance();

  // Independent cases run in batches of `jobs`; lines are printed in case order.
  std::vector<CheckReport> reports(cases.size());
  jobs = std::max<std::size_t>(jobs, 1);
  for (std::size_t first = 0; first < cases.size(); first += jobs) {
    std::vector<std::future<CheckReport>> running;
    for (std::size_t k = first; k < std::min(cases.size(), first + jobs); ++k) {
      running.push_back(std::async(std::launch::async, [&, k] { return run_walk_case(cases[k], opts); }));
    }
    for (std::size_t k = 0; k < running.size(); ++k) reports[first + k] = running[k].get();
  }

  const auto basis = pure_state_basis(2);
  std::size_t failures = 0;
  for (std::size_t k = 0; k < cases.size(); ++k) {
    const auto& c = cases[k];
    const auto& r = reports[k];
    const bool ok = r.verdict == c.expected;
    failures += ok ? 0 : 1;
    out << "case " << c.index << ": size " << c.size << ", " << c.coin1 << "/" << c.coin2 << ", "
        << c.state1 << " vs " << c.state2 << " -> " << to_string(r.verdict);
    if (r.witness) {
      std::string outs;
      for (auto o : r.witness->trace.outputs) outs += o == 0 ? '0' : '1';
      out << " [" << basis.format_sequence(r.witness->trace.inputs) << " / " << outs << "]";
    }
    out << ", basis " << r.basis_size << "/" << r.ambient_dimension;
    if (timing) out << ", " << num(r.elapsed_s) << " s";
    out << (ok ? "  ok" : "  MISMATCH") << '\n';
  }
  out << (cases.size() - failures) << "/" << cases.size() << " cases match\n";
  return failures == 0 ? kExitOk : kExitNotEquivalent;
}

}  // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Equivalence checking of quantum Mealy machines and sequential quantum circuits",
               "qmeq"};
  app.require_subcommand(1);

  PairArgs check_args;
  bool no_early_abort = false;
  auto* check = app.add_subcommand("check", "Decide equivalence of two machines from given states");
  add_pair_options(check, check_args);
  check->add_flag("--no-early-abort", no_early_abort, "Build the full basis before deciding");

  PairArgs oracle_args;
  std::size_t max_len = 0;
  std::size_t node_cap = kDefaultOracleNodeCap;
  auto* oracle = app.add_subcommand("oracle-check", "Exhaustive check over sequences up to a length");
  add_pair_options(oracle, oracle_args);
  oracle->add_option("--max-len", max_len, "Longest input sequence examined")->required();
  oracle->add_option("--node-cap", node_cap, "Abort beyond this many tree nodes");

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "Sample runs of a machine");
  simulate->add_option("model", sim.model, "Machine (.qmm) or circuit (.qc)")->required();
  simulate->add_option("--state", sim.state, "Initial state name")->required();
  simulate->add_option("--inputs", sim.inputs, "Input sequence, e.g. +00 or 'e0,phi'")->required();
  simulate->add_option("--seed", sim.seed, "Random seed");
  simulate->add_option("--shots", sim.shots, "Number of runs")->check(CLI::PositiveNumber);

  std::size_t walk_size = 4;
  std::string walk_coin = "H";
  std::string walk_out;
  bool walk_circuit_form = false;
  auto* gen = app.add_subcommand("gen-walk", "Write the detecting quantum walk machine");
  gen->add_option("--size", walk_size, "Number of positions (power of two)")->required();
  gen->add_option("--coin", walk_coin, "Coin: H or Y")->required();
  gen->add_option("-o,--output", walk_out, "Output file (default stdout)");
  gen->add_flag("--circuit", walk_circuit_form, "Emit the gate-level circuit instead");

  std::string circuit_in;
  std::string circuit_out;
  auto* compile = app.add_subcommand("compile-circuit", "Compile a circuit file into a machine file");
  compile->add_option("circuit", circuit_in, "Circuit file")->required();
  compile->add_option("-o,--output", circuit_out, "Output file (default stdout)");

  std::vector<std::size_t> selected;
  std::size_t jobs = 1;
  bool timing = false;
  auto* selftest = app.add_subcommand("selftest", "Run the quantum walk benchmark cases");
  selftest->add_option("--cases", selected, "Case numbers to run (default all)")->delimiter(',');
  selftest->add_option("--jobs", jobs, "Cases run concurrently");
  selftest->add_flag("--timing", timing, "Print per-case run time");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
    if (*check) return cmd_check(check_args, no_early_abort, out);
    if (*oracle) return cmd_oracle(oracle_args, max_len, node_cap, out);
    if (*simulate) return cmd_simulate(sim, out);
    if (*gen) return cmd_gen_walk(walk_size, walk_coin, walk_out, walk_circuit_form, out);
    if (*compile) return cmd_compile(circuit_in, circuit_out, out);
    if (*selftest) return cmd_selftest(selected, jobs, timing, out);
    return kExitUsage;
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  } catch (const ResourceError& e) {
    err << "error: " << e.what() << '\n';
    return kExitResource;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
}

}  // namespace qmeq
