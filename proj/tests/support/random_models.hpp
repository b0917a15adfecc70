#pragma once

#include <cstddef>
#include <random>
#include <span>
#include <vector>

#include "qmeq/circuit.hpp"
#include "qmeq/matrix.hpp"
#include "qmeq/mealy.hpp"

namespace qmeq::testing {

using Rng = std::mt19937_64;

/// Entries with independent standard normal real and imaginary parts.
ComplexMatrix gaussian_matrix(std::size_t rows, std::size_t cols, Rng& rng);

/// Gram-Schmidt on the columns of a Gaussian matrix (Haar up to phases).
ComplexMatrix random_unitary(std::size_t n, Rng& rng);

ComplexVector random_ket(std::size_t n, Rng& rng);
ComplexMatrix random_hermitian(std::size_t n, Rng& rng);
/// Mixture of `rank` random pure states with random weights.
ComplexMatrix random_density(std::size_t n, std::size_t rank, Rng& rng);

/// Two-outcome projective measurement {P, I - P}, P of rank in [1, d-1]
/// (rank 1 when d = 2, and {I, 0} when d = 1).
std::vector<ComplexMatrix> random_projective_measurement(std::size_t d, Rng& rng);

QuantumMealyMachine random_machine(std::size_t d_in, std::size_t d_state,
                                   const std::vector<ComplexMatrix>& measurement, Rng& rng);
QuantumMealyMachine random_machine(std::size_t d_in, std::size_t d_state, Rng& rng);

/// U' = (I (x) V) U (I (x) V^dagger): the same machine in another state basis.
QuantumMealyMachine conjugate_machine(const QuantumMealyMachine& m, const ComplexMatrix& v);

/// State space enlarged by `extra` dimensions that the original dynamics
/// never reaches: U' = U on H_in (x) H_s, random on H_in (x) C^extra.
QuantumMealyMachine padded_machine(const QuantumMealyMachine& m, std::size_t extra, Rng& rng);
/// rho (+) 0
ComplexMatrix pad_state(const ComplexMatrix& rho, std::size_t extra);

/// I/d + eps * D, where D is a unit-norm traceless Hermitian orthogonal to
/// every one-step effect of `m` over `inputs`. Started from this state or
/// from I/d the machine looks the same for one step; longer sequences
/// usually tell the two apart.
ComplexMatrix one_step_blind_state(const QuantumMealyMachine& m, std::span<const InputState> inputs,
                                   double eps, Rng& rng);

/// `gates` random builtin or inline one/two-qubit gates on `width` qubits.
std::vector<GateApplication> random_gates(std::size_t width, std::size_t gates, Rng& rng);

}  // namespace qmeq::testing
