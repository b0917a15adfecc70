#include "qmeq/machine_sum.hpp"

#include <string>

#include "qmeq/errors.hpp"
#include "qmeq/tolerances.hpp"

namespace qmeq {

namespace {

void check_compatible(const QuantumMealyMachine& m1, const QuantumMealyMachine& m2) {
  if (m1.input_dim() != m2.input_dim()) {
    throw DimensionError("machines have different input dimensions (" +
                         std::to_string(m1.input_dim()) + " vs " + std::to_string(m2.input_dim()) +
                         ")");
  }
  if (m1.outcomes() != m2.outcomes()) {
    throw ValidationError("machines have different outcome labels or outcome order");
  }
  for (std::size_t a = 0; a < m1.outcome_count(); ++a) {
    const double diff = max_abs_diff(m1.measurement(a), m2.measurement(a));
    if (diff > tol::kUnitary) {
      throw ValidationError("measurement operators for outcome '" + m1.outcomes()[a] +
                            "' differ between the machines (max entry difference " +
                            std::to_string(diff) + ")");
    }
  }
}

QuantumMealyMachine build_combined(const QuantumMealyMachine& m1, const QuantumMealyMachine& m2) {
  check_compatible(m1, m2);
  require_valid(m1);
  require_valid(m2);
  return QuantumMealyMachine(m1.input_dim(), m1.state_dim() + m2.state_dim(),
                             sum_unitary(m1, m2), m1.outcomes(), m1.measurements());
}

void check_blocks(const MachineSum& msum, const BlockHermitian& h) {
  const auto d1 = msum.first().state_dim();
  const auto d2 = msum.second().state_dim();
  if (h.first.rows() != d1 || h.first.cols() != d1 || h.second.rows() != d2 ||
      h.second.cols() != d2) {
    throw DimensionError("block operator does not match summand state dimensions");
  }
}

}  // namespace

double BlockHermitian::trace() const { return first.trace().real() + second.trace().real(); }

RealVector BlockHermitian::vectorize() const {
  const std::size_t n1 = first.rows() * first.rows();
  RealVector out(n1 + second.rows() * second.rows());
  hermitian_vectorize_into(first, std::span<double>(out.data(), n1));
  hermitian_vectorize_into(second, std::span<double>(out.data() + n1, out.size() - n1));
  return out;
}

ComplexMatrix BlockHermitian::embed() const { return direct_sum_mat(first, second); }

ComplexMatrix sum_unitary(const QuantumMealyMachine& m1, const QuantumMealyMachine& m2) {
  if (m1.input_dim() != m2.input_dim()) throw DimensionError("sum_unitary: input dims differ");
  const std::size_t d = m1.input_dim();
  const std::size_t d1 = m1.state_dim();
  const std::size_t d2 = m2.state_dim();
  const std::size_t total = d1 + d2;
  ComplexMatrix u(d * total, d * total);
  const auto& u1 = m1.unitary();
  const auto& u2 = m2.unitary();
  for (std::size_t xo = 0; xo < d; ++xo)
    for (std::size_t xi = 0; xi < d; ++xi) {
      for (std::size_t yo = 0; yo < d1; ++yo)
        for (std::size_t yi = 0; yi < d1; ++yi)
          u(xo * total + yo, xi * total + yi) = u1(xo * d1 + yo, xi * d1 + yi);
      for (std::size_t yo = 0; yo < d2; ++yo)
        for (std::size_t yi = 0; yi < d2; ++yi)
          u(xo * total + d1 + yo, xi * total + d1 + yi) = u2(xo * d2 + yo, xi * d2 + yi);
    }
  return u;
}

MachineSum::MachineSum(QuantumMealyMachine first, QuantumMealyMachine second)
    : first_(std::move(first)), second_(std::move(second)), combined_(build_combined(first_, second_)) {}

MachineSum sum_machines(const QuantumMealyMachine& m1, const QuantumMealyMachine& m2) {
  return MachineSum(m1, m2);
}

BlockHermitian build_difference_operator(const ComplexMatrix& rho1, const ComplexMatrix& rho2) {
  if (!is_density(rho1)) throw ValidationError("first initial state is not a density operator");
  if (!is_density(rho2)) throw ValidationError("second initial state is not a density operator");
  return {rho1, -rho2};
}

BlockHermitian apply_superoperator_block(const MachineSum& msum, std::size_t outcome,
                                         const InputState& input, const BlockHermitian& h) {
  check_blocks(msum, h);
  return {apply_superoperator(msum.first(), outcome, input, h.first),
          apply_superoperator(msum.second(), outcome, input, h.second)};
}

BlockChannel::BlockChannel(const MachineSum& msum, std::size_t outcome, const InputState& input)
    : first_(msum.first(), outcome, input), second_(msum.second(), outcome, input) {}

BlockHermitian BlockChannel::apply(const BlockHermitian& h) const {
  return {first_.apply(h.first), second_.apply(h.second)};
}

}  // namespace qmeq
