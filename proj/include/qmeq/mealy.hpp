#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "qmeq/matrix.hpp"

namespace qmeq {

/// Density operator fed to the input register for one step.
class InputState {
 public:
  /// Throws ValidationError unless the ket has unit norm.
  static InputState pure(ComplexVector ket, std::string label, std::string symbol = {});
  /// Throws ValidationError unless the matrix is a density operator.
  static InputState mixed(ComplexMatrix density, std::string label, std::string symbol = {});

  const ComplexMatrix& matrix() const noexcept { return matrix_; }
  const std::optional<ComplexVector>& ket() const noexcept { return ket_; }
  std::size_t dim() const noexcept { return matrix_.rows(); }
  const std::string& label() const noexcept { return label_; }
  /// Short display form used when printing sequences; defaults to the label.
  const std::string& symbol() const noexcept { return symbol_; }

 private:
  InputState() = default;

  ComplexMatrix matrix_;
  std::optional<ComplexVector> ket_;
  std::string label_;
  std::string symbol_;
};

using OutcomeSequence = std::vector<std::size_t>;

/// An input sequence (indices into an input alphabet) with the outcome
/// sequence observed for it.
struct ExperimentTrace {
  std::vector<std::size_t> inputs;
  OutcomeSequence outputs;

  std::size_t length() const noexcept { return inputs.size(); }
  friend bool operator==(const ExperimentTrace&, const ExperimentTrace&) = default;
};

/// (H_in, H_s, U, {M_a : a in O}) with U acting on H_in (x) H_s, the input
/// register being the left Kronecker factor. Outcome order is significant.
class QuantumMealyMachine {
 public:
  /// Checks shapes only (DimensionError); use validate_machine for the
  /// unitarity and completeness constraints.
  QuantumMealyMachine(std::size_t input_dim, std::size_t state_dim, ComplexMatrix unitary,
                      std::vector<std::string> outcomes, std::vector<ComplexMatrix> measurement);

  std::size_t input_dim() const noexcept { return input_dim_; }
  std::size_t state_dim() const noexcept { return state_dim_; }
  const ComplexMatrix& unitary() const noexcept { return unitary_; }
  const std::vector<std::string>& outcomes() const noexcept { return outcomes_; }
  std::size_t outcome_count() const noexcept { return outcomes_.size(); }
  const ComplexMatrix& measurement(std::size_t outcome) const { return measurement_.at(outcome); }
  const std::vector<ComplexMatrix>& measurements() const noexcept { return measurement_; }

  /// (M_a (x) I_s) U
  const ComplexMatrix& measured_unitary(std::size_t outcome) const {
    return measured_unitary_.at(outcome);
  }

  /// Throws std::invalid_argument for an unknown label.
  std::size_t outcome_index(const std::string& label) const;

 private:
  std::size_t input_dim_;
  std::size_t state_dim_;
  ComplexMatrix unitary_;
  std::vector<std::string> outcomes_;
  std::vector<ComplexMatrix> measurement_;
  std::vector<ComplexMatrix> measured_unitary_;
};

struct Violation {
  std::string constraint;
  double defect = 0.0;
};

struct ValidationReport {
  std::vector<Violation> violations;

  bool ok() const noexcept { return violations.empty(); }
  std::string describe() const;
};

ValidationReport validate_machine(const QuantumMealyMachine& m);
/// Throws ValidationError carrying the report text.
void require_valid(const QuantumMealyMachine& m);

/// Unnormalized E_{a,sigma}(rho) = tr_in[(M_a (x) I) U (sigma (x) rho) U^dagger (M_a^dagger (x) I)],
/// computed literally from the definition.
ComplexMatrix apply_superoperator(const QuantumMealyMachine& m, std::size_t outcome,
                                  const InputState& input, const ComplexMatrix& rho);
ComplexMatrix apply_superoperator(const QuantumMealyMachine& m, const std::string& outcome,
                                  const InputState& input, const ComplexMatrix& rho);

/// E_{a,sigma} precompiled into Kraus form, sum_k A_k rho A_k^dagger.
class StepChannel {
 public:
  StepChannel(const QuantumMealyMachine& m, std::size_t outcome, const InputState& input);

  ComplexMatrix apply(const ComplexMatrix& rho) const;
  /// tr(E(rho)) without forming E(rho).
  double probability(const ComplexMatrix& rho) const;

  const std::vector<ComplexMatrix>& kraus() const noexcept { return kraus_; }
  /// sum_k A_k^dagger A_k
  const ComplexMatrix& effect() const noexcept { return effect_; }

 private:
  std::size_t state_dim_;
  std::vector<ComplexMatrix> kraus_;
  ComplexMatrix effect_;
};

struct StepBranch {
  double probability = 0.0;
  /// Absent when probability <= tol::kProbability (branch impossible).
  std::optional<ComplexMatrix> post_state;
};

/// One normalized step; result is indexed by outcome.
std::vector<StepBranch> step(const QuantumMealyMachine& m, const InputState& input,
                             const ComplexMatrix& rho);

/// tr(E_{a|pi}(rho0)).
double sequence_probability(const QuantumMealyMachine& m, const ComplexMatrix& rho0,
                            std::span<const InputState> inputs, std::span<const std::size_t> outputs);

/// p(. | pi, rho0) over all |O|^|pi| outcome sequences, keyed lexicographically.
std::map<OutcomeSequence, double> experiment_distribution(const QuantumMealyMachine& m,
                                                          const ComplexMatrix& rho0,
                                                          std::span<const InputState> inputs);

/// Monte-Carlo runs driven by `step`. Reproducible for a fixed seed.
class RunSampler {
 public:
  RunSampler(const QuantumMealyMachine& m, std::span<const InputState> alphabet,
             std::uint64_t seed);

  ExperimentTrace sample(const ComplexMatrix& rho0, std::span<const std::size_t> inputs);

 private:
  double uniform();

  const QuantumMealyMachine* machine_;
  std::size_t alphabet_size_;
  std::vector<StepChannel> channels_;  // [input * |O| + outcome]
  std::mt19937_64 rng_;
};

/// A state operator with a display name, as shipped alongside a machine.
struct NamedState {
  std::string name;
  ComplexMatrix density;
  std::optional<ComplexVector> ket;  // kept when the state was given as a ket
};

NamedState named_pure_state(std::string name, ComplexVector ket);

/// A machine plus the initial states it is distributed with.
struct MachineWithStates {
  QuantumMealyMachine machine;
  std::vector<NamedState> states;

  /// Throws std::invalid_argument for an unknown name.
  const NamedState& state(const std::string& name) const;
};

ExperimentTrace sample_run(const QuantumMealyMachine& m, const ComplexMatrix& rho0,
                           std::span<const InputState> alphabet,
                           std::span<const std::size_t> inputs, std::uint64_t seed);

}  // namespace qmeq
