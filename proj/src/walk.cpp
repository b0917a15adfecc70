#include "qmeq/walk.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cctype>
#include <numbers>
#include <stdexcept>

#include "qmeq/errors.hpp"

namespace qmeq {

ComplexMatrix hadamard_coin() { return builtin_gate_matrix("H", 1); }

ComplexMatrix y_coin() { return builtin_gate_matrix("Y", 1); }

ComplexMatrix coin_by_name(const std::string& name) {
  std::string n = name;
  std::transform(n.begin(), n.end(), n.begin(),
                 [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  if (n == "H") return hadamard_coin();
  if (n == "Y") return y_coin();
  throw std::invalid_argument("unknown coin '" + name + "' (expected H or Y)");
}

std::vector<NamedState> walk_initial_states(std::size_t size) {
  const double h = 1.0 / std::numbers::sqrt2;
  const std::vector<std::pair<std::string, std::array<Complex, 2>>> coins = {
      {"0", {1.0, 0.0}},
      {"1", {0.0, 1.0}},
      {"+", {h, h}},
      {"-", {h, -h}},
      {"phi", {h, Complex{0.0, h}}},
  };
  std::vector<NamedState> states;
  for (const auto& [coin_name, amp] : coins)
    for (std::size_t p = 0; p < size; ++p) {
      ComplexVector ket(2 * size);
      ket[p] = amp[0];
      ket[size + p] = amp[1];
      states.push_back(named_pure_state(coin_name + "c" + std::to_string(p) + "p", std::move(ket)));
    }
  return states;
}

MachineWithStates build_cycle_walk_machine(std::size_t size, const ComplexMatrix& coin) {
  if (size < 2) throw std::invalid_argument("walk size must be >= 2");
  if (coin.rows() != 2 || coin.cols() != 2) throw DimensionError("coin must be 2x2");
  if (!is_unitary(coin)) throw ValidationError("coin is not unitary");
  const std::size_t n = size;

  ComplexMatrix forward(n, n);
  ComplexMatrix backward(n, n);
  for (std::size_t p = 0; p < n; ++p) {
    forward((p + 1) % n, p) = 1.0;
    backward((p + n - 1) % n, p) = 1.0;
  }
  const ComplexMatrix c0 = {{1, 0}, {0, 0}};
  const ComplexMatrix c1 = {{0, 0}, {0, 1}};
  const ComplexMatrix shift = kron(c0, forward) + kron(c1, backward);

  const ComplexMatrix id2 = ComplexMatrix::identity(2);
  const ComplexMatrix coin_step = kron(id2, kron(coin, ComplexMatrix::identity(n)));
  const ComplexMatrix shift_step = kron(id2, shift);

  // Flip the target when the position is n-1, whatever the coin.
  ComplexMatrix at_end(n, n);
  at_end(n - 1, n - 1) = 1.0;
  const ComplexMatrix on_end = kron(id2, at_end);
  const ComplexMatrix off_end = ComplexMatrix::identity(2 * n) - on_end;
  const ComplexMatrix x = builtin_gate_matrix("X", 1);
  const ComplexMatrix detect = kron(id2, off_end) + kron(x, on_end);

  ComplexMatrix u = detect * shift_step * coin_step;
  QuantumMealyMachine machine(2, 2 * n, std::move(u), {"0", "1"}, {c0, c1});
  return {std::move(machine), walk_initial_states(n)};
}

MachineWithStates build_walk_machine(std::size_t size, const ComplexMatrix& coin) {
  if (size < 2 || !std::has_single_bit(size)) {
    throw std::invalid_argument("walk size " + std::to_string(size) +
                                " is not a power of two >= 2");
  }
  return build_cycle_walk_machine(size, coin);
}

SequentialCircuit walk_circuit(std::size_t size, const ComplexMatrix& coin,
                               const std::string& coin_name) {
  if (size < 2 || !std::has_single_bit(size)) {
    throw std::invalid_argument("walk circuit size " + std::to_string(size) +
                                " is not a power of two >= 2");
  }
  const std::size_t bits = static_cast<std::size_t>(std::countr_zero(size));
  const std::size_t target = 1;
  const std::size_t coin_q = bits + 2;
  auto pos = [](std::size_t j) { return j + 2; };  // j-th position bit, 0-based

  SequentialCircuit c;
  c.inputs = 1;
  c.memory = bits + 1;
  c.body.push_back(make_inline_gate(coin, {coin_q}, coin_name));

  // +1 when coin = 0: flip bit j if all lower bits are 1, highest bit first.
  c.body.push_back(make_gate("X", {coin_q}));
  for (std::size_t j = bits; j-- > 0;) {
    std::vector<std::size_t> qs{coin_q};
    for (std::size_t l = 0; l < j; ++l) qs.push_back(pos(l));
    qs.push_back(pos(j));
    c.body.push_back(make_gate("MCX", std::move(qs)));
  }
  c.body.push_back(make_gate("X", {coin_q}));

  // -1 when coin = 1: the inverse sequence, lowest bit first.
  for (std::size_t j = 0; j < bits; ++j) {
    std::vector<std::size_t> qs{coin_q};
    for (std::size_t l = 0; l < j; ++l) qs.push_back(pos(l));
    qs.push_back(pos(j));
    c.body.push_back(make_gate("MCX", std::move(qs)));
  }

  // Detection at position n-1 (all position bits set).
  std::vector<std::size_t> qs;
  for (std::size_t l = 0; l < bits; ++l) qs.push_back(pos(l));
  qs.push_back(target);
  c.body.push_back(bits == 1 ? make_gate("CNOT", std::move(qs)) : make_gate("MCX", std::move(qs)));
  return c;
}

const std::vector<WalkCase>& walk_benchmark_cases() {
  using enum Verdict;
  static const std::vector<WalkCase> cases = {
      {1, 4, "H", "H", "0c0p", "0c2p", kNotEquivalent},
      {2, 4, "H", "H", "phic0p", "phic2p", kEquivalent},
      {3, 4, "H", "H", "0c0p", "1c2p", kEquivalent},
      {4, 4, "H", "H", "0c1p", "1c1p", kEquivalent},
      {5, 4, "H", "H", "0c2p", "1c0p", kEquivalent},
      {6, 4, "H", "Y", "0c0p", "0c0p", kEquivalent},
      {7, 8, "H", "H", "0c0p", "1c6p", kEquivalent},
      {8, 8, "H", "Y", "0c0p", "0c0p", kEquivalent},
  };
  return cases;
}

CheckReport run_walk_case(const WalkCase& c, const CheckOptions& options) {
  const auto w1 = build_walk_machine(c.size, coin_by_name(c.coin1));
  const auto w2 = build_walk_machine(c.size, coin_by_name(c.coin2));
  const auto basis = pure_state_basis(w1.machine.input_dim());
  return check_equivalence(w1.machine, w2.machine, w1.state(c.state1).density,
                           w2.state(c.state2).density, basis, options);
}

}  // namespace qmeq
