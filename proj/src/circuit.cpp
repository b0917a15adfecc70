#include "qmeq/circuit.hpp"

#include <algorithm>
#include <cctype>
#include <numbers>
#include <set>
#include <stdexcept>

#include "qmeq/errors.hpp"

namespace qmeq {

namespace {

std::string upper(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  return s;
}

// Permutation matrix that swaps local indices a and b.
ComplexMatrix swap_permutation(std::size_t dim, std::size_t a, std::size_t b) {
  ComplexMatrix m = ComplexMatrix::identity(dim);
  m(a, a) = 0.0;
  m(b, b) = 0.0;
  m(a, b) = 1.0;
  m(b, a) = 1.0;
  return m;
}

// X on the last qubit when all preceding ones are 1.
ComplexMatrix multi_controlled_x(std::size_t arity) {
  const std::size_t controls = arity - 1;
  const std::size_t all_on = (std::size_t{1} << controls) - 1;
  return swap_permutation(std::size_t{1} << arity, all_on, all_on | (std::size_t{1} << controls));
}

void require_arity(const std::string& name, std::size_t arity, std::size_t expected) {
  if (arity != expected) {
    throw std::invalid_argument("gate " + name + " takes " + std::to_string(expected) +
                                " qubit(s), got " + std::to_string(arity));
  }
}

}  // namespace

bool is_builtin_gate(const std::string& name) {
  static const std::set<std::string> known = {"I",    "X",   "Y",       "Z",   "H",  "S", "T",
                                              "CNOT", "CX",  "SWAP",    "TOFFOLI", "CCX", "MCX"};
  return known.count(upper(name)) != 0;
}

ComplexMatrix builtin_gate_matrix(const std::string& raw_name, std::size_t arity) {
  const std::string name = upper(raw_name);
  const double h = 1.0 / std::numbers::sqrt2;
  const Complex i{0.0, 1.0};
  if (name == "I") {
    require_arity(name, arity, 1);
    return ComplexMatrix::identity(2);
  }
  if (name == "X") {
    require_arity(name, arity, 1);
    return {{0, 1}, {1, 0}};
  }
  if (name == "Y") {
    require_arity(name, arity, 1);
    return {{h, h * i}, {h * i, h}};
  }
  if (name == "Z") {
    require_arity(name, arity, 1);
    return {{1, 0}, {0, -1}};
  }
  if (name == "H") {
    require_arity(name, arity, 1);
    return {{h, h}, {h, -h}};
  }
  if (name == "S") {
    require_arity(name, arity, 1);
    return {{1, 0}, {0, i}};
  }
  if (name == "T") {
    require_arity(name, arity, 1);
    return {{1, 0}, {0, std::polar(1.0, std::numbers::pi / 4)}};
  }
  if (name == "CNOT" || name == "CX") {
    require_arity(name, arity, 2);
    return multi_controlled_x(2);
  }
  if (name == "SWAP") {
    require_arity(name, arity, 2);
    return swap_permutation(4, 1, 2);
  }
  if (name == "TOFFOLI" || name == "CCX") {
    require_arity(name, arity, 3);
    return multi_controlled_x(3);
  }
  if (name == "MCX") {
    if (arity < 2) throw std::invalid_argument("gate MCX needs at least 2 qubits");
    return multi_controlled_x(arity);
  }
  throw std::invalid_argument("unknown gate '" + raw_name + "'");
}

GateApplication make_gate(const std::string& name, std::vector<std::size_t> qubits) {
  return {upper(name), builtin_gate_matrix(name, qubits.size()), std::move(qubits)};
}

GateApplication make_inline_gate(ComplexMatrix unitary, std::vector<std::size_t> qubits,
                                 std::string name) {
  if (unitary.rows() != (std::size_t{1} << qubits.size()) || !unitary.is_square()) {
    throw DimensionError("inline gate on " + std::to_string(qubits.size()) +
                         " qubit(s) must be " + std::to_string(std::size_t{1} << qubits.size()) +
                         " square");
  }
  if (!is_unitary(unitary)) {
    throw ValidationError("inline gate '" + name + "' is not unitary (||U^dagger U - I||_F = " +
                          std::to_string(unitarity_defect(unitary)) + ")");
  }
  return {std::move(name), std::move(unitary), std::move(qubits)};
}

ComplexMatrix compile_circuit(std::size_t width, std::span<const GateApplication> gates) {
  if (width == 0 || width >= 20) throw DimensionError("circuit width must be in 1..19");
  const std::size_t dim = std::size_t{1} << width;
  ComplexMatrix u = ComplexMatrix::identity(dim);
  for (const auto& gate : gates) {
    const std::size_t k = gate.qubits.size();
    if (k == 0) throw DimensionError("gate " + gate.name + " has no qubits");
    if (gate.unitary.rows() != (std::size_t{1} << k) || !gate.unitary.is_square()) {
      throw DimensionError("gate " + gate.name + " matrix does not match its arity");
    }
    std::set<std::size_t> distinct;
    std::size_t mask = 0;
    for (auto q : gate.qubits) {
      if (q == 0 || q > width) {
        throw DimensionError("gate " + gate.name + ": qubit q" + std::to_string(q) +
                             " outside 1.." + std::to_string(width));
      }
      if (!distinct.insert(q).second) {
        throw DimensionError("gate " + gate.name + ": qubit q" + std::to_string(q) + " repeated");
      }
      mask |= std::size_t{1} << (q - 1);
    }

    auto local_of = [&](std::size_t index) {
      std::size_t local = 0;
      for (std::size_t j = 0; j < k; ++j)
        if (index >> (gate.qubits[j] - 1) & 1) local |= std::size_t{1} << j;
      return local;
    };
    auto deposit = [&](std::size_t local) {
      std::size_t index = 0;
      for (std::size_t j = 0; j < k; ++j)
        if (local >> j & 1) index |= std::size_t{1} << (gate.qubits[j] - 1);
      return index;
    };

    // u <- ext(gate) * u, row by row.
    ComplexMatrix next(dim, dim);
    const std::size_t local_dim = std::size_t{1} << k;
    for (std::size_t row = 0; row < dim; ++row) {
      const std::size_t lr = local_of(row);
      const std::size_t base = row & ~mask;
      for (std::size_t lc = 0; lc < local_dim; ++lc) {
        const Complex g = gate.unitary(lr, lc);
        if (g == Complex{}) continue;
        const std::size_t src = base | deposit(lc);
        for (std::size_t col = 0; col < dim; ++col) next(row, col) += g * u(src, col);
      }
    }
    u = std::move(next);
  }
  return u;
}

ComplexMatrix circuit_to_machine_layout(const ComplexMatrix& u, std::size_t inputs,
                                        std::size_t memory) {
  const std::size_t din = std::size_t{1} << inputs;
  const std::size_t ds = std::size_t{1} << memory;
  if (u.rows() != din * ds || !u.is_square()) throw DimensionError("layout: unitary size mismatch");
  ComplexMatrix out(din * ds, din * ds);
  for (std::size_t xo = 0; xo < din; ++xo)
    for (std::size_t yo = 0; yo < ds; ++yo)
      for (std::size_t xi = 0; xi < din; ++xi)
        for (std::size_t yi = 0; yi < ds; ++yi)
          out(xo * ds + yo, xi * ds + yi) = u(xo + din * yo, xi + din * yi);
  return out;
}

QuantumMealyMachine sequential_to_mealy(const SequentialCircuit& circuit) {
  if (circuit.inputs == 0) throw DimensionError("sequential circuit needs at least one input qubit");
  const ComplexMatrix u = compile_circuit(circuit.width(), circuit.body);
  const std::size_t din = std::size_t{1} << circuit.inputs;
  const std::size_t ds = std::size_t{1} << circuit.memory;

  std::vector<std::string> outcomes;
  std::vector<ComplexMatrix> projectors;
  for (std::size_t x = 0; x < din; ++x) {
    std::string label;
    for (std::size_t i = 0; i < circuit.inputs; ++i) label += (x >> i & 1) ? '1' : '0';
    outcomes.push_back(std::move(label));
    ComplexMatrix p(din, din);
    p(x, x) = 1.0;
    projectors.push_back(std::move(p));
  }
  return QuantumMealyMachine(din, ds, circuit_to_machine_layout(u, circuit.inputs, circuit.memory),
                             std::move(outcomes), std::move(projectors));
}

}  // namespace qmeq
