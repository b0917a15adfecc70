#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "qmeq/checker.hpp"
#include "qmeq/circuit.hpp"
#include "qmeq/matrix.hpp"
#include "qmeq/mealy.hpp"

namespace qmeq {

// Detecting quantum walk on a cycle of n positions. Input register: one
// target qubit. State: coin (x) position, index c*n + p. One clock step
// applies the coin to the coin qubit, shifts the position by +1 (coin 0) or
// -1 (coin 1) mod n, and flips the target when the position is n-1. The
// target is measured in the computational basis, outcomes "0" and "1".

ComplexMatrix hadamard_coin();
/// (1/sqrt2) [[1, i], [i, 1]]
ComplexMatrix y_coin();
/// "H" or "Y" (case-insensitive); throws std::invalid_argument otherwise.
ComplexMatrix coin_by_name(const std::string& name);

/// Named initial states "<c>c<p>p" for coin c in {0, 1, +, -, phi} and every
/// position p, e.g. "0c2p" or "phic0p".
std::vector<NamedState> walk_initial_states(std::size_t size);

/// Builds the machine directly for any size >= 2.
MachineWithStates build_cycle_walk_machine(std::size_t size, const ComplexMatrix& coin);

/// Same machine, restricted to power-of-two sizes so that the position fits
/// a qubit register. Throws std::invalid_argument otherwise.
MachineWithStates build_walk_machine(std::size_t size, const ComplexMatrix& coin);

/// Gate-level sequential circuit of the walk: q1 = target, q2..q(k+1) = the
/// position bits (least significant first), q(k+2) = coin, so the memory
/// register index is coin * n + position. The shift is expressed with
/// multi-controlled X gates. Size must be a power of two >= 2.
SequentialCircuit walk_circuit(std::size_t size, const ComplexMatrix& coin,
                               const std::string& coin_name = "C");

/// One row of the benchmark table: two walks of the same size, possibly
/// with different coins, started from the named initial states.
struct WalkCase {
  std::size_t index = 0;
  std::size_t size = 0;
  std::string coin1;
  std::string coin2;
  std::string state1;
  std::string state2;
  Verdict expected = Verdict::kEquivalent;
};

/// The eight reference cases (sizes 4 and 8).
const std::vector<WalkCase>& walk_benchmark_cases();

/// Builds both walks and runs the checker on them.
CheckReport run_walk_case(const WalkCase& c, const CheckOptions& options = {});

}  // namespace qmeq
