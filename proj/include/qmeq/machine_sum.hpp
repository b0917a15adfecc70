#pragma once

#include <cstddef>

#include "qmeq/matrix.hpp"
#include "qmeq/mealy.hpp"

namespace qmeq {

/// Hermitian operator on H_s1 (+) H_s2 that is block diagonal, kept as its
/// two blocks. The checker's rho1 (+) (-rho2) lives here.
struct BlockHermitian {
  ComplexMatrix first;
  ComplexMatrix second;

  /// tr(first) + tr(second), real part.
  double trace() const;
  /// Concatenated hermitian_vectorize coordinates, length d1^2 + d2^2.
  RealVector vectorize() const;
  /// diag(first, second) as one (d1+d2)-square matrix.
  ComplexMatrix embed() const;
};

/// M1 (+) M2 together with its two summands.
///
/// The combined machine orders its joint space input-major: basis |x>|(block, y)>,
/// so apply_superoperator works on it unchanged. Both summands must share
/// the input dimension, the outcome labels (same order) and the measurement
/// operators themselves.
class MachineSum {
 public:
  MachineSum(QuantumMealyMachine first, QuantumMealyMachine second);

  const QuantumMealyMachine& first() const noexcept { return first_; }
  const QuantumMealyMachine& second() const noexcept { return second_; }
  const QuantumMealyMachine& combined() const noexcept { return combined_; }

  std::size_t input_dim() const noexcept { return first_.input_dim(); }
  std::size_t outcome_count() const noexcept { return first_.outcome_count(); }
  /// d1^2 + d2^2
  std::size_t ambient_dimension() const noexcept {
    return first_.state_dim() * first_.state_dim() + second_.state_dim() * second_.state_dim();
  }

 private:
  QuantumMealyMachine first_;
  QuantumMealyMachine second_;
  QuantumMealyMachine combined_;
};

/// Throws DimensionError on input-space mismatch and ValidationError when the
/// outcome sets or measurement operators differ, or either machine is invalid.
MachineSum sum_machines(const QuantumMealyMachine& m1, const QuantumMealyMachine& m2);

/// U1 (+) U2 permuted into the H_in (x) (H_s1 (+) H_s2) layout.
ComplexMatrix sum_unitary(const QuantumMealyMachine& m1, const QuantumMealyMachine& m2);

/// rho1 (+) (-rho2). Throws ValidationError unless both are density operators.
BlockHermitian build_difference_operator(const ComplexMatrix& rho1, const ComplexMatrix& rho2);

/// E^(1) on the first block, E^(2) on the second.
BlockHermitian apply_superoperator_block(const MachineSum& msum, std::size_t outcome,
                                         const InputState& input, const BlockHermitian& h);

/// Precompiled pair of step channels for one (input, outcome).
class BlockChannel {
 public:
  BlockChannel(const MachineSum& msum, std::size_t outcome, const InputState& input);
  BlockHermitian apply(const BlockHermitian& h) const;

 private:
  StepChannel first_;
  StepChannel second_;
};

}  // namespace qmeq
