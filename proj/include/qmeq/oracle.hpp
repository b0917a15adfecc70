#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "qmeq/checker.hpp"
#include "qmeq/input_basis.hpp"
#include "qmeq/machine_sum.hpp"
#include "qmeq/tolerances.hpp"

namespace qmeq {

inline constexpr std::size_t kDefaultOracleNodeCap = 10'000'000;

struct OracleOptions {
  double tolerance = tol::kSpan;
  /// Upper bound on the number of tree nodes (images) ever computed.
  std::size_t node_cap = kDefaultOracleNodeCap;
};

struct OracleResult {
  bool equivalent_up_to_k = true;
  /// The trace_order-least sequence with |tr E_{a|pi}(rho1 (+) -rho2)| > tolerance.
  std::optional<Witness> witness;
  std::size_t nodes_visited = 0;
};

/// sum_{k=0..depth} branching^k, saturating at SIZE_MAX.
std::size_t tree_node_count(std::size_t branching, std::size_t depth);

/// Exhaustive (B, K)-equivalence by walking the full |B||O|-ary tree of
/// unnormalized images to depth K. Images are computed with the literal
/// superoperator definition, not the checker's Kraus form.
/// Throws ResourceError when the tree exceeds options.node_cap.
OracleResult k_equivalent_bruteforce(const MachineSum& msum, const ComplexMatrix& rho1,
                                     const ComplexMatrix& rho2, const InputBasis& basis,
                                     std::size_t max_length, const OracleOptions& options = {});

OracleResult k_equivalent_bruteforce(const QuantumMealyMachine& m1, const QuantumMealyMachine& m2,
                                     const ComplexMatrix& rho1, const ComplexMatrix& rho2,
                                     const InputBasis& basis, std::size_t max_length,
                                     const OracleOptions& options = {});

/// dim span D(rho, m) for m = 0..max_length, where D(rho, m) holds every image
/// E_{a|pi}(rho1 (+) -rho2) with |pi| <= m.
std::vector<std::size_t> span_dimension_profile(const MachineSum& msum, const ComplexMatrix& rho1,
                                                const ComplexMatrix& rho2, const InputBasis& basis,
                                                std::size_t max_length,
                                                const OracleOptions& options = {});

}  // namespace qmeq
