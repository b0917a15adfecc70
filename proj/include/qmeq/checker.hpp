#pragma once

#include <compare>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "qmeq/input_basis.hpp"
#include "qmeq/machine_sum.hpp"
#include "qmeq/mealy.hpp"
#include "qmeq/tolerances.hpp"

namespace qmeq {

enum class Verdict { kEquivalent, kNotEquivalent };

const char* to_string(Verdict v) noexcept;

/// Length first, then lexicographic over (input index, outcome index) pairs.
std::strong_ordering trace_order(const ExperimentTrace& x, const ExperimentTrace& y);

struct Witness {
  ExperimentTrace trace;
  double p1 = 0.0;  // p(a | pi, rho1) in the first machine
  double p2 = 0.0;  // p(a | pi, rho2) in the second machine
};

struct CheckOptions {
  /// Stop as soon as a popped sequence has nonzero trace.
  bool early_abort = true;
  /// Span-membership residual and zero-trace threshold.
  double tolerance = tol::kSpan;
};

struct CheckReport {
  Verdict verdict = Verdict::kEquivalent;
  std::optional<Witness> witness;
  std::size_t basis_size = 0;          // |frak B| at termination
  std::size_t ambient_dimension = 0;   // d1^2 + d2^2
  std::size_t sequences_examined = 0;  // queue pops
  double elapsed_s = 0.0;
  std::vector<std::string> input_labels;
  std::vector<std::string> outcome_labels;
};

/// Decides (M1, rho1) ~ (M2, rho2) by breadth-first search over
/// (input, outcome) sequences, keeping a linearly independent set of images
/// of rho1 (+) (-rho2). Sequences whose image already lies in the span are
/// not extended. Equivalent iff every kept image has zero trace.
CheckReport check_equivalence(const QuantumMealyMachine& m1, const QuantumMealyMachine& m2,
                              const ComplexMatrix& rho1, const ComplexMatrix& rho2,
                              const InputBasis& basis, const CheckOptions& options = {});

CheckReport check_equivalence(const MachineSum& msum, const ComplexMatrix& rho1,
                              const ComplexMatrix& rho2, const InputBasis& basis,
                              const CheckOptions& options = {});

}  // namespace qmeq
