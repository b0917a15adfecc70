#include "qmeq/mealy.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <set>
#include <sstream>

#include "qmeq/errors.hpp"
#include "qmeq/tolerances.hpp"

namespace qmeq {

namespace {

void check_input(const QuantumMealyMachine& m, const InputState& input) {
  if (input.dim() != m.input_dim()) {
    throw DimensionError("input state of dimension " + std::to_string(input.dim()) +
                         " for machine with input dimension " + std::to_string(m.input_dim()));
  }
}

void check_state_operator(const QuantumMealyMachine& m, const ComplexMatrix& rho) {
  if (!rho.is_square() || rho.rows() != m.state_dim()) {
    throw DimensionError("state operator is " + std::to_string(rho.rows()) + "x" +
                         std::to_string(rho.cols()) + ", machine state dimension is " +
                         std::to_string(m.state_dim()));
  }
}

// out += a * rho * a^dagger, all square of the same size.
void add_sandwich(ComplexMatrix& out, const ComplexMatrix& a, const ComplexMatrix& rho) {
  const std::size_t n = a.rows();
  const ComplexMatrix t = a * rho;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      Complex s = 0.0;
      for (std::size_t k = 0; k < n; ++k) s += t(i, k) * std::conj(a(j, k));
      out(i, j) += s;
    }
}

}  // namespace

InputState InputState::pure(ComplexVector ket, std::string label, std::string symbol) {
  double n2 = 0.0;
  for (const auto& z : ket) n2 += std::norm(z);
  if (ket.empty() || std::abs(n2 - 1.0) > tol::kTrace) {
    throw ValidationError("input state '" + label + "': ket norm^2 is " + std::to_string(n2));
  }
  InputState s;
  s.matrix_ = ComplexMatrix::outer(ket);
  s.ket_ = std::move(ket);
  s.symbol_ = symbol.empty() ? label : std::move(symbol);
  s.label_ = std::move(label);
  return s;
}

InputState InputState::mixed(ComplexMatrix density, std::string label, std::string symbol) {
  if (!is_density(density)) {
    throw ValidationError("input state '" + label + "' is not a density operator");
  }
  InputState s;
  s.matrix_ = std::move(density);
  s.symbol_ = symbol.empty() ? label : std::move(symbol);
  s.label_ = std::move(label);
  return s;
}

QuantumMealyMachine::QuantumMealyMachine(std::size_t input_dim, std::size_t state_dim,
                                         ComplexMatrix unitary, std::vector<std::string> outcomes,
                                         std::vector<ComplexMatrix> measurement)
    : input_dim_(input_dim),
      state_dim_(state_dim),
      unitary_(std::move(unitary)),
      outcomes_(std::move(outcomes)),
      measurement_(std::move(measurement)) {
  if (input_dim_ == 0 || state_dim_ == 0) throw DimensionError("machine dimensions must be >= 1");
  const std::size_t n = input_dim_ * state_dim_;
  if (unitary_.rows() != n || unitary_.cols() != n) {
    throw DimensionError("unitary is " + std::to_string(unitary_.rows()) + "x" +
                         std::to_string(unitary_.cols()) + ", expected " + std::to_string(n) +
                         "x" + std::to_string(n));
  }
  if (outcomes_.empty()) throw DimensionError("machine needs at least one outcome");
  if (outcomes_.size() != measurement_.size()) {
    throw DimensionError("outcome count " + std::to_string(outcomes_.size()) +
                         " != measurement operator count " + std::to_string(measurement_.size()));
  }
  const auto identity = ComplexMatrix::identity(state_dim_);
  for (std::size_t a = 0; a < measurement_.size(); ++a) {
    const auto& op = measurement_[a];
    if (op.rows() != input_dim_ || op.cols() != input_dim_) {
      throw DimensionError("measurement operator '" + outcomes_[a] + "' must be " +
                           std::to_string(input_dim_) + "x" + std::to_string(input_dim_));
    }
    measured_unitary_.push_back(kron(op, identity) * unitary_);
  }
}

std::size_t QuantumMealyMachine::outcome_index(const std::string& label) const {
  for (std::size_t a = 0; a < outcomes_.size(); ++a)
    if (outcomes_[a] == label) return a;
  throw std::invalid_argument("unknown outcome label '" + label + "'");
}

std::string ValidationReport::describe() const {
  if (ok()) return "ok";
  std::ostringstream os;
  for (std::size_t i = 0; i < violations.size(); ++i) {
    if (i) os << "; ";
    os << violations[i].constraint << " (defect " << violations[i].defect << ")";
  }
  return os.str();
}

ValidationReport validate_machine(const QuantumMealyMachine& m) {
  ValidationReport report;
  bool finite = m.unitary().all_finite();
  for (const auto& op : m.measurements()) finite = finite && op.all_finite();
  if (!finite) {
    report.violations.push_back({"entries must be finite", std::numeric_limits<double>::infinity()});
    return report;
  }

  const double u_defect = unitarity_defect(m.unitary());
  if (u_defect > tol::kUnitary) {
    report.violations.push_back({"unitarity ||U^dagger U - I||_F", u_defect});
  }

  ComplexMatrix completeness(m.input_dim(), m.input_dim());
  for (const auto& op : m.measurements()) completeness += op.adjoint() * op;
  const double c_defect = frobenius_distance(completeness, ComplexMatrix::identity(m.input_dim()));
  if (c_defect > tol::kUnitary) {
    report.violations.push_back({"completeness ||sum_a M_a^dagger M_a - I||_F", c_defect});
  }

  std::set<std::string> seen;
  for (const auto& label : m.outcomes()) {
    if (!seen.insert(label).second) {
      report.violations.push_back({"duplicate outcome label '" + label + "'", 0.0});
    }
  }
  return report;
}

void require_valid(const QuantumMealyMachine& m) {
  const auto report = validate_machine(m);
  if (!report.ok()) throw ValidationError("invalid machine: " + report.describe());
}

ComplexMatrix apply_superoperator(const QuantumMealyMachine& m, std::size_t outcome,
                                  const InputState& input, const ComplexMatrix& rho) {
  check_input(m, input);
  check_state_operator(m, rho);
  if (outcome >= m.outcome_count()) throw std::invalid_argument("outcome index out of range");
  const ComplexMatrix& k = m.measured_unitary(outcome);
  const ComplexMatrix joint = k * kron(input.matrix(), rho) * k.adjoint();
  return partial_trace_left(joint, m.input_dim(), m.state_dim());
}

ComplexMatrix apply_superoperator(const QuantumMealyMachine& m, const std::string& outcome,
                                  const InputState& input, const ComplexMatrix& rho) {
  return apply_superoperator(m, m.outcome_index(outcome), input, rho);
}

StepChannel::StepChannel(const QuantumMealyMachine& m, std::size_t outcome,
                         const InputState& input)
    : state_dim_(m.state_dim()), effect_(m.state_dim(), m.state_dim()) {
  check_input(m, input);
  const std::size_t d = m.input_dim();
  const std::size_t ds = m.state_dim();
  const ComplexMatrix& k = m.measured_unitary(outcome);

  // sigma = sum_w weight_w |v_w><v_w|
  std::vector<std::pair<double, ComplexVector>> components;
  if (input.ket()) {
    components.emplace_back(1.0, *input.ket());
  } else {
    const auto eig = hermitian_eigensystem(input.matrix());
    for (std::size_t w = 0; w < d; ++w) {
      if (eig.values[w] <= 0.0) continue;
      ComplexVector v(d);
      for (std::size_t x = 0; x < d; ++x) v[x] = eig.vectors(x, w);
      components.emplace_back(eig.values[w], std::move(v));
    }
  }

  // A_{j,w}[r, c] = sqrt(weight_w) * sum_x v_w[x] * K[j*ds + r, x*ds + c]
  for (const auto& [weight, v] : components) {
    const double scale = std::sqrt(weight);
    for (std::size_t j = 0; j < d; ++j) {
      ComplexMatrix a(ds, ds);
      for (std::size_t x = 0; x < d; ++x) {
        const Complex coeff = scale * v[x];
        if (coeff == Complex{}) continue;
        for (std::size_t r = 0; r < ds; ++r)
          for (std::size_t c = 0; c < ds; ++c) a(r, c) += coeff * k(j * ds + r, x * ds + c);
      }
      if (a.frobenius_norm() == 0.0) continue;
      effect_ += a.adjoint() * a;
      kraus_.push_back(std::move(a));
    }
  }
}

ComplexMatrix StepChannel::apply(const ComplexMatrix& rho) const {
  if (!rho.is_square() || rho.rows() != state_dim_) {
    throw DimensionError("StepChannel::apply: state operator has wrong dimension");
  }
  ComplexMatrix out(state_dim_, state_dim_);
  for (const auto& a : kraus_) add_sandwich(out, a, rho);
  return out;
}

double StepChannel::probability(const ComplexMatrix& rho) const {
  if (!rho.is_square() || rho.rows() != state_dim_) {
    throw DimensionError("StepChannel::probability: state operator has wrong dimension");
  }
  // tr(effect * rho)
  Complex s = 0.0;
  for (std::size_t i = 0; i < state_dim_; ++i)
    for (std::size_t k = 0; k < state_dim_; ++k) s += effect_(i, k) * rho(k, i);
  return s.real();
}

std::vector<StepBranch> step(const QuantumMealyMachine& m, const InputState& input,
                             const ComplexMatrix& rho) {
  check_input(m, input);
  check_state_operator(m, rho);
  if (!is_density(rho)) throw ValidationError("step: state is not a density operator");
  std::vector<StepBranch> branches(m.outcome_count());
  for (std::size_t a = 0; a < m.outcome_count(); ++a) {
    ComplexMatrix image = apply_superoperator(m, a, input, rho);
    const double p = image.trace().real();
    branches[a].probability = p;
    if (p > tol::kProbability) branches[a].post_state = image * Complex{1.0 / p};
  }
  return branches;
}

double sequence_probability(const QuantumMealyMachine& m, const ComplexMatrix& rho0,
                            std::span<const InputState> inputs,
                            std::span<const std::size_t> outputs) {
  if (inputs.size() != outputs.size()) {
    throw DimensionError("input and output sequences differ in length");
  }
  check_state_operator(m, rho0);
  ComplexMatrix rho = rho0;
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    rho = StepChannel(m, outputs[i], inputs[i]).apply(rho);
  }
  return rho.trace().real();
}

std::map<OutcomeSequence, double> experiment_distribution(const QuantumMealyMachine& m,
                                                          const ComplexMatrix& rho0,
                                                          std::span<const InputState> inputs) {
  check_state_operator(m, rho0);
  if (!is_density(rho0)) {
    throw ValidationError("experiment_distribution: initial state is not a density operator");
  }
  const std::size_t outcomes = m.outcome_count();
  std::vector<std::vector<StepChannel>> channels(inputs.size());
  for (std::size_t i = 0; i < inputs.size(); ++i)
    for (std::size_t a = 0; a < outcomes; ++a) channels[i].emplace_back(m, a, inputs[i]);

  std::map<OutcomeSequence, double> dist;
  OutcomeSequence prefix;
  std::function<void(const ComplexMatrix&)> descend = [&](const ComplexMatrix& rho) {
    const std::size_t depth = prefix.size();
    if (depth == inputs.size()) {
      dist.emplace(prefix, rho.trace().real());
      return;
    }
    for (std::size_t a = 0; a < outcomes; ++a) {
      prefix.push_back(a);
      descend(channels[depth][a].apply(rho));
      prefix.pop_back();
    }
  };
  descend(rho0);
  return dist;
}

RunSampler::RunSampler(const QuantumMealyMachine& m, std::span<const InputState> alphabet,
                       std::uint64_t seed)
    : machine_(&m), alphabet_size_(alphabet.size()), rng_(seed) {
  channels_.reserve(alphabet.size() * m.outcome_count());
  for (const auto& input : alphabet)
    for (std::size_t a = 0; a < m.outcome_count(); ++a) channels_.emplace_back(m, a, input);
}

double RunSampler::uniform() { return static_cast<double>(rng_() >> 11) * 0x1.0p-53; }

ExperimentTrace RunSampler::sample(const ComplexMatrix& rho0,
                                   std::span<const std::size_t> inputs) {
  const std::size_t outcomes = machine_->outcome_count();
  check_state_operator(*machine_, rho0);
  ExperimentTrace trace;
  trace.inputs.assign(inputs.begin(), inputs.end());
  ComplexMatrix rho = rho0;
  std::vector<double> probs(outcomes);
  for (std::size_t input : inputs) {
    if (input >= alphabet_size_) throw std::out_of_range("input index outside alphabet");
    const StepChannel* row = &channels_[input * outcomes];
    double total = 0.0;
    for (std::size_t a = 0; a < outcomes; ++a) {
      probs[a] = std::max(0.0, row[a].probability(rho));
      total += probs[a];
    }
    const double u = uniform() * total;
    std::size_t chosen = outcomes;
    double acc = 0.0;
    for (std::size_t a = 0; a < outcomes; ++a) {
      if (probs[a] <= tol::kProbability) continue;
      chosen = a;
      acc += probs[a];
      if (u < acc) break;
    }
    if (chosen == outcomes) throw std::logic_error("sample: no outcome has positive probability");
    rho = row[chosen].apply(rho) * Complex{1.0 / probs[chosen]};
    trace.outputs.push_back(chosen);
  }
  return trace;
}

NamedState named_pure_state(std::string name, ComplexVector ket) {
  NamedState s;
  s.name = std::move(name);
  s.density = ComplexMatrix::outer(ket);
  s.ket = std::move(ket);
  return s;
}

const NamedState& MachineWithStates::state(const std::string& name) const {
  for (const auto& s : states)
    if (s.name == name) return s;
  throw std::invalid_argument("no initial state named '" + name + "'");
}

ExperimentTrace sample_run(const QuantumMealyMachine& m, const ComplexMatrix& rho0,
                           std::span<const InputState> alphabet,
                           std::span<const std::size_t> inputs, std::uint64_t seed) {
  return RunSampler(m, alphabet, seed).sample(rho0, inputs);
}

}  // namespace qmeq
