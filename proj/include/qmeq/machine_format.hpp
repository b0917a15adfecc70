#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "qmeq/circuit.hpp"
#include "qmeq/matrix.hpp"
#include "qmeq/mealy.hpp"

namespace qmeq {

// Machine files (.qmm), line oriented, '#' starts a comment:
//
//   dims <d_in> <d_state>
//   outcomes <label> ...
//   unitary
//   <d_in*d_state rows of d_in*d_state complex entries>
//   measure <label>            (once per outcome)
//   <d_in rows of d_in entries>
//   state <name>               (any number)
//   ket <d_state amplitudes>   | <d_state rows of d_state entries>
//
// Circuit files (.qc):
//
//   inputs <m>
//   memory <l>
//   <GATE> q<i> q<j> ...       builtin gate, 1-based qubits, q1 least significant
//   gate <name> q<i> ...       inline unitary, followed by 2^k rows
//   state ...                  as in machine files, over the memory register
//
// Complex entries: a, bi, a+bi, a-bi with a, b decimal floats (an exponent
// is accepted); a bare "i" is not.

/// Largest d_in * d_state accepted from a file.
inline constexpr std::size_t kMaxFileDimension = 4096;

/// Throws std::invalid_argument on malformed text.
Complex parse_complex(std::string_view text);
/// Shortest text that parses back to the identical value.
std::string format_complex(Complex z);

/// Throws ParseError (syntax, with line and column) or ValidationError.
MachineWithStates parse_machine(std::istream& in);
MachineWithStates parse_machine_file(const std::filesystem::path& path);
void write_machine(std::ostream& out, const MachineWithStates& model);

struct CircuitWithStates {
  SequentialCircuit circuit;
  std::vector<NamedState> states;
};

CircuitWithStates parse_circuit(std::istream& in);
CircuitWithStates parse_circuit_file(const std::filesystem::path& path);
void write_circuit(std::ostream& out, const CircuitWithStates& model);

/// Loads either format, choosing by extension (.qc is a circuit, anything
/// else a machine); circuits are compiled with sequential_to_mealy.
MachineWithStates load_model(const std::filesystem::path& path);

}  // namespace qmeq
