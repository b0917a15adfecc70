// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "qmeq/checker.hpp"
#include "qmeq/circuit.hpp"
#include "qmeq/input_basis.hpp"
#include "qmeq/machine_format.hpp"
#include "qmeq/machine_sum.hpp"
#include "qmeq/oracle.hpp"
#include "qmeq/walk.hpp"
#include "random_models.hpp"

using namespace qmeq;

namespace {

const std::string kData = QMEQ_DATA_DIR;

struct Outcome {
  bool pass = true;
  std::string detail;
};

// Every CheckReport produced in this run, for the |basis| bound.
std::vector<CheckReport> g_reports;

CheckReport recorded(CheckReport r) {
  g_reports.push_back(r);
  return r;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

Outcome table_cases(std::size_t size, double limit_s) {
  Outcome o;
  std::ostringstream d;
  for (const auto& c : walk_benchmark_cases()) {
    if (c.size != size) continue;
    const auto t0 = std::chrono::steady_clock::now();
    const auto r = recorded(run_walk_case(c));
    const double s = seconds_since(t0);
    const bool ok = r.verdict == c.expected && s < limit_s;
    o.pass = o.pass && ok;
    d << "case " << c.index << " " << (r.verdict == Verdict::kEquivalent ? "Yes" : "No") << " "
      << fmt("%.3fs", s) << (ok ? "" : " (!)") << "; ";
  }
  o.detail = d.str();
  if (o.detail.size() >= 2) o.detail.resize(o.detail.size() - 2);
  return o;
}

Outcome case1_witness() {
  const auto r = recorded(run_walk_case(walk_benchmark_cases()[0]));
  Outcome o;
  if (!r.witness) return {false, "no witness"};
  const auto basis = pure_state_basis(2);
  std::string outs;
  for (auto a : r.witness->trace.outputs) outs += a == 0 ? '0' : '1';
  const std::string shown = basis.format_sequence(r.witness->trace.inputs) + " / " + outs;
  o.pass = shown == "+00 / 000" && std::abs(r.witness->p1 - 0.5) <= 1e-8 && std::abs(r.witness->p2) <= 1e-8;
  o.detail = "witness " + shown + ", p1 = " + fmt("%.12g", r.witness->p1) + ", p2 = " +
             fmt("%.3g", r.witness->p2 + 0.0);
  return o;
}

Outcome checker_vs_oracle() {
  testing::Rng rng(20240601);
  const auto basis = pure_state_basis(2);
  std::size_t pairs = 0, disagreements = 0, equivalent = 0, witnessed = 0, deep = 0;
  for (int t = 0; t < 240; ++t) {
    const std::size_t d1 = 2 + t % 3;
    const auto meas = testing::random_projective_measurement(2, rng);
    const auto m1 = testing::random_machine(2, d1, meas, rng);
    const auto r1 = ComplexMatrix::outer(testing::random_ket(d1, rng));
    QuantumMealyMachine m2 = m1;
    ComplexMatrix r2;
    switch (t % 4) {
      case 0:
      case 1: {  // unrelated machine and state
        const std::size_t d2 = 2 + (t / 4) % 3;
        m2 = testing::random_machine(2, d2, meas, rng);
        r2 = ComplexMatrix::outer(testing::random_ket(d2, rng));
        break;
      }
      case 2: {  // same machine in a rotated state basis
        const auto v = testing::random_unitary(d1, rng);
        m2 = testing::conjugate_machine(m1, v);
        r2 = t % 8 == 2 ? v * r1 * v.adjoint() : ComplexMatrix::outer(testing::random_ket(d1, rng));
        break;
      }
      default: {  // extra unreachable states, sometimes a perturbed start
        const std::size_t extra = d1 == 4 ? 0 : 1 + (t / 4) % (4 - d1);
        m2 = extra ? testing::padded_machine(m1, extra, rng) : m1;
        r2 = testing::pad_state(r1, extra);
        if (t % 8 == 7) r2 = ComplexMatrix::outer(testing::random_ket(d1 + extra, rng));
        break;
      }
    }
    const std::size_t k = std::min<std::size_t>(4, d1 * d1 + m2.state_dim() * m2.state_dim() - 1);
    const auto check = recorded(check_equivalence(m1, m2, r1, r2, basis));
    const auto oracle = k_equivalent_bruteforce(m1, m2, r1, r2, basis, k);
    ++pairs;
    const bool checker_eq = check.verdict == Verdict::kEquivalent;
    if (checker_eq) {
      ++equivalent;
      if (!oracle.equivalent_up_to_k) ++disagreements;
    } else {
      ++witnessed;
      const bool short_witness = check.witness->trace.length() <= k;
      if (short_witness && oracle.equivalent_up_to_k) ++disagreements;
      if (!short_witness) ++deep;
    }
    if (oracle.witness && checker_eq) ++disagreements;
  }

  // Starts that no single step separates: the witness, if any, is longer.
  std::size_t multi_step = 0;
  for (int t = 0; t < 40; ++t) {
    const auto meas = testing::random_projective_measurement(2, rng);
    const auto m = testing::random_machine(2, 4, meas, rng);
    const auto r1 = ComplexMatrix::identity(4) * 0.25;
    const auto r2 = testing::one_step_blind_state(m, basis.states(), 0.1, rng);
    const auto check = recorded(check_equivalence(m, m, r1, r2, basis));
    const auto oracle = k_equivalent_bruteforce(m, m, r1, r2, basis, 4);
    ++pairs;
    if (check.verdict == Verdict::kEquivalent) {
      ++equivalent;
      if (!oracle.equivalent_up_to_k) ++disagreements;
      continue;
    }
    ++witnessed;
    const std::size_t len = check.witness->trace.length();
    if (len >= 2) ++multi_step;
    if (len <= 4 && (oracle.equivalent_up_to_k || oracle.witness->trace.length() != len)) ++disagreements;
    if (len > 4) ++deep;
  }
  return {pairs >= 200 && disagreements == 0 && multi_step > 0,
          std::to_string(pairs) + " pairs (" + std::to_string(equivalent) + " equivalent, " +
              std::to_string(witnessed) + " separated, " + std::to_string(deep) +
              " beyond K, " + std::to_string(multi_step) +
              " needing two or more steps), disagreements " + std::to_string(disagreements)};
}

Outcome invariants() {
  testing::Rng rng(99);
  std::ostringstream d;
  bool pass = true;

  // Probability conservation.
  double worst = 0.0;
  for (int t = 0; t < 1000; ++t) {
    const std::size_t din = 2 + t % 2;
    const std::size_t ds = 1 + t % 4;
    const auto m = testing::random_machine(din, ds, rng);
    const auto rho = testing::random_density(ds, 1 + t % ds, rng);
    std::vector<InputState> seq;
    for (int k = 0; k < 1 + t % 4; ++k) {
      seq.push_back(k % 2 ? InputState::pure(testing::random_ket(din, rng), "r")
                          : InputState::mixed(testing::random_density(din, 2, rng), "m"));
    }
    double total = 0.0;
    for (const auto& [outs, p] : experiment_distribution(m, rho, seq)) total += p;
    worst = std::max(worst, std::abs(total - 1.0));
  }
  pass = pass && worst <= 1e-8;
  d << "conservation max dev " << fmt("%.2g", worst);

  // Linearity and positivity of E_{a,sigma}.
  double lin = 0.0;
  double min_eig = 0.0;
  for (int t = 0; t < 200; ++t) {
    const auto m = testing::random_machine(2, 3, rng);
    const auto sigma = InputState::pure(testing::random_ket(2, rng), "s");
    const auto a = testing::random_hermitian(3, rng);
    const auto b = testing::random_hermitian(3, rng);
    const double x = std::normal_distribution<double>()(rng);
    const std::size_t out = t % 2;
    const auto lhs = apply_superoperator(m, out, sigma, a * x + b);
    const auto rhs = apply_superoperator(m, out, sigma, a) * x + apply_superoperator(m, out, sigma, b);
    lin = std::max(lin, max_abs_diff(lhs, rhs));
    const auto img = apply_superoperator(m, out, sigma, testing::random_density(3, 2, rng));
    min_eig = std::min(min_eig, hermitian_eigensystem(img).values.front());
  }
  pass = pass && lin <= 1e-12 && min_eig >= -1e-12;
  d << "; linearity " << fmt("%.2g", lin) << "; min eigenvalue " << fmt("%.2g", min_eig);

  // Block-diagonal preservation in sum machines.
  double leak = 0.0;
  const auto basis = pure_state_basis(2);
  for (int t = 0; t < 100; ++t) {
    const auto meas = testing::random_projective_measurement(2, rng);
    const std::size_t d1 = 1 + t % 3;
    const std::size_t d2 = 1 + (t / 3) % 3;
    const MachineSum sum(testing::random_machine(2, d1, meas, rng), testing::random_machine(2, d2, meas, rng));
    const BlockHermitian h{testing::random_hermitian(d1, rng), testing::random_hermitian(d2, rng)};
    const auto img = apply_superoperator(sum.combined(), t % 2, basis[t % 4], h.embed());
    for (std::size_t r = 0; r < d1; ++r)
      for (std::size_t c = d1; c < d1 + d2; ++c) leak = std::max({leak, std::abs(img(r, c)), std::abs(img(c, r))});
  }
  pass = pass && leak <= 1e-12;
  d << "; block leak " << fmt("%.2g", leak);

  // Span-dimension freeze.
  std::size_t profiles = 0;
  bool frozen_ok = true;
  for (int t = 0; t < 30; ++t) {
    const auto meas = testing::random_projective_measurement(2, rng);
    const std::size_t d1 = 1 + t % 2;
    const auto m1 = testing::random_machine(2, d1, meas, rng);
    const auto m2 = t % 3 ? testing::random_machine(2, 1, meas, rng) : testing::padded_machine(m1, 1, rng);
    const auto r1 = testing::random_density(d1, 1, rng);
    const auto r2 = t % 3 ? testing::random_density(1, 1, rng) : testing::pad_state(r1, 1);
    const MachineSum sum(m1, m2);
    const auto profile = span_dimension_profile(sum, r1, r2, basis, 5);
    ++profiles;
    for (std::size_t m = 1; m < profile.size(); ++m) {
      if (profile[m] < profile[m - 1] || profile[m] > sum.ambient_dimension()) frozen_ok = false;
      if (profile[m] == profile[m - 1])
        for (std::size_t later = m; later < profile.size(); ++later) frozen_ok = frozen_ok && profile[later] == profile[m];
    }
  }
  pass = pass && frozen_ok;
  d << "; freeze held on " << profiles << " profiles: " << (frozen_ok ? "yes" : "no");

  // |basis| <= d1^2 + d2^2 on every check run so far in this process.
  std::size_t violations = 0;
  for (const auto& r : g_reports) violations += r.basis_size > r.ambient_dimension ? 1 : 0;
  pass = pass && violations == 0;
  d << "; basis bound over " << g_reports.size() << " checks, violations " << violations;
  return {pass, d.str()};
}

// p(a) for one step of a sequential circuit from amplitudes of the compiled
// circuit unitary (circuit index x + 2^m y), and the normalized next memory state.
double circuit_step(const ComplexMatrix& u, std::size_t m, std::size_t l, const ComplexVector& alpha,
                    ComplexVector& beta, std::size_t a) {
  const std::size_t din = std::size_t{1} << m;
  const std::size_t ds = std::size_t{1} << l;
  ComplexVector next(ds);
  double p = 0.0;
  for (std::size_t b = 0; b < ds; ++b) {
    Complex amp = 0.0;
    for (std::size_t x = 0; x < din; ++x)
      for (std::size_t y = 0; y < ds; ++y) amp += alpha[x] * beta[y] * u(a + din * b, x + din * y);
    next[b] = amp;
    p += std::norm(amp);
  }
  if (p > 0) for (auto& z : next) z /= std::sqrt(p);
  beta = next;
  return p;
}

Outcome circuit_semantics() {
  std::ostringstream d;
  const std::vector<GateApplication> three = {make_gate("CNOT", {1, 2}), make_gate("CNOT", {2, 1}),
                                              make_gate("CNOT", {1, 2})};
  const double swap_err = max_abs_diff(compile_circuit(2, three), builtin_gate_matrix("SWAP", 2));

  const auto gates = parse_circuit_file(kData + "/walk4_H_gates.qc");
  const double gates_err = max_abs_diff(sequential_to_mealy(gates.circuit).unitary(),
                                       build_walk_machine(4, hadamard_coin()).machine.unitary());

  testing::Rng rng(1234);
  double eq1_err = 0.0;
  for (int t = 0; t < 20; ++t) {
    SequentialCircuit c;
    c.inputs = 1 + t % 2;
    c.memory = 1 + (t / 2) % 3;
    c.body = testing::random_gates(c.width(), 8, rng);
    const auto u = compile_circuit(c.width(), c.body);
    const auto machine = sequential_to_mealy(c);
    ComplexVector beta = testing::random_ket(machine.state_dim(), rng);
    ComplexMatrix rho = ComplexMatrix::outer(beta);
    for (int step_i = 0; step_i < 3; ++step_i) {
      const auto alpha = testing::random_ket(machine.input_dim(), rng);
      const auto branches = step(machine, InputState::pure(alpha, "in"), rho);
      // Follow the most likely outcome so the next step is well conditioned.
      std::size_t a = 0;
      for (std::size_t k = 1; k < branches.size(); ++k)
        if (branches[k].probability > branches[a].probability) a = k;
      for (std::size_t k = 0; k < branches.size(); ++k) {
        ComplexVector scratch = beta;
        eq1_err = std::max(eq1_err, std::abs(circuit_step(u, c.inputs, c.memory, alpha, scratch, k) -
                                             branches[k].probability));
      }
      circuit_step(u, c.inputs, c.memory, alpha, beta, a);
      rho = *branches[a].post_state;
      eq1_err = std::max(eq1_err, max_abs_diff(rho, ComplexMatrix::outer(beta)));
    }
  }
  d << "SWAP vs 3 CNOT " << fmt("%.2g", swap_err) << "; circuit vs walk machine " << fmt("%.2g", gates_err)
    << "; amplitude formula vs step " << fmt("%.2g", eq1_err) << " over 20 circuits";
  return {swap_err <= 1e-12 && gates_err <= 1e-12 && eq1_err <= 1e-10, d.str()};
}

Outcome sampling() {
  const auto w = build_walk_machine(4, hadamard_coin());
  const auto basis = pure_state_basis(2);
  const std::vector<std::size_t> inputs = {2, 0, 0};
  const std::size_t shots = 100000;
  auto frequency = [&] {
    RunSampler sampler(w.machine, basis.states(), 20260101);
    std::size_t hits = 0;
    for (std::size_t s = 0; s < shots; ++s)
      hits += sampler.sample(w.state("0c0p").density, inputs).outputs == OutcomeSequence{0, 0, 0};
    return static_cast<double>(hits) / shots;
  };
  const double f = frequency();
  const bool reproducible = f == frequency();
  return {std::abs(f - 0.5) <= 0.01 && reproducible,
          "frequency " + fmt("%.5f", f) + " over 1e5 shots, rerun identical: " + (reproducible ? "yes" : "no")};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "walk benchmark, size 4 (cases 1-6, < 5 s each)", [] { return table_cases(4, 5.0); }},
      {2, "walk benchmark, size 8 (cases 7-8, < 30 min each)", [] { return table_cases(8, 1800.0); }},
      {3, "case 1 witness +00 / 000, p = 0.5 vs 0", case1_witness},
      {4, "checker agrees with exhaustive search", checker_vs_oracle},
      {5, "invariant suite", invariants},
      {6, "circuit semantics", circuit_semantics},
      {7, "sampling sanity", sampling},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += o.pass ? 0 : 1;
    std::printf("%s  [%d] %s: %s\n", o.pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%zu/%zu criteria passed\n", criteria.size() - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
