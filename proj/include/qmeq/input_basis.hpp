#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "qmeq/mealy.hpp"

namespace qmeq {

/// d^2 pure density operators spanning all Hermitian operators on C^d over
/// the reals. Order: |j><j| for j < d, then for each pair j < k the states
/// (|j> + |k>)/sqrt2 and (|j> + i|k>)/sqrt2.
class InputBasis {
 public:
  std::size_t dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return states_.size(); }
  const std::vector<InputState>& states() const noexcept { return states_; }
  const InputState& operator[](std::size_t i) const { return states_.at(i); }

  std::vector<std::string> labels() const;
  std::optional<std::size_t> find(const std::string& label_or_symbol) const;

  /// Parses an input sequence: comma/space separated labels or symbols, or a
  /// run of concatenated symbols ("+00"). Throws std::invalid_argument.
  std::vector<std::size_t> parse_sequence(const std::string& text) const;
  /// Concatenated symbols when all are one character, space separated otherwise.
  std::string format_sequence(const std::vector<std::size_t>& inputs) const;

 private:
  friend InputBasis pure_state_basis(std::size_t d);

  std::size_t dim_ = 0;
  std::vector<InputState> states_;
};

/// Throws std::invalid_argument for d == 0 and std::logic_error if the
/// constructed family fails the linear-independence check.
InputBasis pure_state_basis(std::size_t d);

/// Numerical rank of the real Gram matrix of the vectorized basis states.
std::size_t basis_rank(const InputBasis& basis);

}  // namespace qmeq
