#include "qmeq/oracle.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <string>

#include "qmeq/errors.hpp"
#include "qmeq/span_basis.hpp"

namespace qmeq {

namespace {

void check_inputs(const MachineSum& msum, const ComplexMatrix& rho1, const ComplexMatrix& rho2,
                  const InputBasis& basis) {
  if (basis.dim() != msum.input_dim()) throw DimensionError("input basis dimension mismatch");
  if (rho1.rows() != msum.first().state_dim() || rho2.rows() != msum.second().state_dim()) {
    throw DimensionError("initial states do not match the machines' state dimensions");
  }
}

void check_cap(std::size_t branching, std::size_t depth, std::size_t cap) {
  const std::size_t nodes = tree_node_count(branching, depth);
  if (nodes > cap) {
    throw ResourceError("enumeration to length " + std::to_string(depth) + " needs " +
                        (nodes == std::numeric_limits<std::size_t>::max()
                             ? std::string("more than 2^64")
                             : std::to_string(nodes)) +
                        " images, above the cap of " + std::to_string(cap));
  }
}

}  // namespace

std::size_t tree_node_count(std::size_t branching, std::size_t depth) {
  constexpr auto kMax = std::numeric_limits<std::size_t>::max();
  std::size_t total = 1;
  std::size_t level = 1;
  for (std::size_t k = 1; k <= depth; ++k) {
    if (branching != 0 && level > kMax / branching) return kMax;
    level *= branching;
    if (total > kMax - level) return kMax;
    total += level;
  }
  return total;
}

OracleResult k_equivalent_bruteforce(const MachineSum& msum, const ComplexMatrix& rho1,
                                     const ComplexMatrix& rho2, const InputBasis& basis,
                                     std::size_t max_length, const OracleOptions& options) {
  check_inputs(msum, rho1, rho2, basis);
  const std::size_t n_inputs = basis.size();
  const std::size_t n_outcomes = msum.outcome_count();
  check_cap(n_inputs * n_outcomes, max_length, options.node_cap);

  OracleResult result;
  ExperimentTrace path;

  // Depth-first in lexicographic order, so among sequences of one length the
  // first violation found is the least; shorter violations found later win.
  std::function<void(const BlockHermitian&)> visit = [&](const BlockHermitian& image) {
    ++result.nodes_visited;
    const std::size_t depth = path.length();
    if (result.witness && depth >= result.witness->trace.length()) return;
    if (std::abs(image.trace()) > options.tolerance) {
      result.witness = Witness{path, image.first.trace().real(), -image.second.trace().real()};
      return;
    }
    if (depth == max_length) return;
    for (std::size_t s = 0; s < n_inputs; ++s)
      for (std::size_t x = 0; x < n_outcomes; ++x) {
        path.inputs.push_back(s);
        path.outputs.push_back(x);
        visit(apply_superoperator_block(msum, x, basis[s], image));
        path.inputs.pop_back();
        path.outputs.pop_back();
      }
  };
  visit(build_difference_operator(rho1, rho2));
  result.equivalent_up_to_k = !result.witness.has_value();
  return result;
}

OracleResult k_equivalent_bruteforce(const QuantumMealyMachine& m1, const QuantumMealyMachine& m2,
                                     const ComplexMatrix& rho1, const ComplexMatrix& rho2,
                                     const InputBasis& basis, std::size_t max_length,
                                     const OracleOptions& options) {
  return k_equivalent_bruteforce(sum_machines(m1, m2), rho1, rho2, basis, max_length, options);
}

std::vector<std::size_t> span_dimension_profile(const MachineSum& msum, const ComplexMatrix& rho1,
                                                const ComplexMatrix& rho2, const InputBasis& basis,
                                                std::size_t max_length,
                                                const OracleOptions& options) {
  check_inputs(msum, rho1, rho2, basis);
  const std::size_t n_inputs = basis.size();
  const std::size_t n_outcomes = msum.outcome_count();
  check_cap(n_inputs * n_outcomes, max_length, options.node_cap);

  OrthonormalSet span(msum.ambient_dimension(), options.tolerance);
  std::vector<std::size_t> profile;
  std::vector<BlockHermitian> level{build_difference_operator(rho1, rho2)};
  for (std::size_t m = 0;; ++m) {
    for (const auto& image : level) {
      const RealVector v = image.vectorize();
      if (!span.contains(v).contained) span.add(v);
    }
    profile.push_back(span.size());
    if (m == max_length) break;
    std::vector<BlockHermitian> next;
    next.reserve(level.size() * n_inputs * n_outcomes);
    for (const auto& image : level)
      for (std::size_t s = 0; s < n_inputs; ++s)
        for (std::size_t x = 0; x < n_outcomes; ++x)
          next.push_back(apply_superoperator_block(msum, x, basis[s], image));
    level = std::move(next);
  }
  return profile;
}

}  // namespace qmeq
