#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "qmeq/matrix.hpp"
#include "qmeq/mealy.hpp"

namespace qmeq {

// Qubit and bit-order convention used throughout the circuit frontend:
// qubits are numbered from 1, and basis index x = sum_i x_i * 2^(i-1), so
// the first qubit is the least significant bit. A gate acting on qubits
// (q_1, ..., q_k) sees the local index sum_j bit(q_j) * 2^(j-1); for CNOT the
// first qubit is the control, for TOFFOLI/MCX the last qubit is the target.

/// A unitary placed on an ordered list of distinct qubits.
struct GateApplication {
  std::string name;
  ComplexMatrix unitary;            // 2^k x 2^k for k = qubits.size()
  std::vector<std::size_t> qubits;  // 1-based
};

/// Builtin gates: I, X, Y (the (1/sqrt2)[[1, i], [i, 1]] coin), Z, H, S, T,
/// CNOT/CX, SWAP, TOFFOLI/CCX, MCX (any arity >= 2). Names are case-insensitive.
/// Throws std::invalid_argument for unknown names or a wrong arity.
ComplexMatrix builtin_gate_matrix(const std::string& name, std::size_t arity);
bool is_builtin_gate(const std::string& name);

GateApplication make_gate(const std::string& name, std::vector<std::size_t> qubits);
/// Throws ValidationError if the matrix is not unitary.
GateApplication make_inline_gate(ComplexMatrix unitary, std::vector<std::size_t> qubits,
                                 std::string name = "U");

/// U = U_d ... U_1 over `width` qubits, each gate extended by identity on the
/// other qubits; the first gate in the list is applied first.
ComplexMatrix compile_circuit(std::size_t width, std::span<const GateApplication> gates);

/// Synchronous sequential circuit: qubits 1..inputs are the input register,
/// qubits inputs+1..inputs+memory hold the state.
struct SequentialCircuit {
  std::size_t inputs = 1;
  std::size_t memory = 0;
  std::vector<GateApplication> body;

  std::size_t width() const noexcept { return inputs + memory; }
};

/// Machine with H_in = input register, H_s = memory register, O = {0,1}^m
/// and computational-basis projectors on the input register. Outcome labels
/// list the bits of q_1..q_m left to right.
QuantumMealyMachine sequential_to_mealy(const SequentialCircuit& circuit);

/// Relabels a circuit-ordered unitary (index x + 2^m * y) into the machine
/// layout (index x * 2^l + y).
ComplexMatrix circuit_to_machine_layout(const ComplexMatrix& u, std::size_t inputs,
                                        std::size_t memory);

}  // namespace qmeq
