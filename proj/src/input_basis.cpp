#include "qmeq/input_basis.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "qmeq/tolerances.hpp"

namespace qmeq {

std::vector<std::string> InputBasis::labels() const {
  std::vector<std::string> out;
  out.reserve(states_.size());
  for (const auto& s : states_) out.push_back(s.label());
  return out;
}

std::optional<std::size_t> InputBasis::find(const std::string& label_or_symbol) const {
  for (std::size_t i = 0; i < states_.size(); ++i)
    if (states_[i].label() == label_or_symbol) return i;
  for (std::size_t i = 0; i < states_.size(); ++i)
    if (states_[i].symbol() == label_or_symbol) return i;
  return std::nullopt;
}

std::vector<std::size_t> InputBasis::parse_sequence(const std::string& text) const {
  std::vector<std::size_t> out;
  if (text.find_first_of(", \t") != std::string::npos) {
    std::string token;
    std::istringstream in(text);
    std::string chunk;
    while (std::getline(in, chunk, ',')) {
      std::istringstream words(chunk);
      while (words >> token) {
        auto idx = find(token);
        if (!idx) throw std::invalid_argument("unknown input state '" + token + "'");
        out.push_back(*idx);
      }
    }
    return out;
  }
  // Greedy longest match over labels and symbols.
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t best_len = 0;
    std::size_t best = 0;
    for (std::size_t i = 0; i < states_.size(); ++i) {
      for (const std::string* name : {&states_[i].symbol(), &states_[i].label()}) {
        if (name->size() > best_len && text.compare(pos, name->size(), *name) == 0) {
          best_len = name->size();
          best = i;
        }
      }
    }
    if (best_len == 0) {
      throw std::invalid_argument("cannot parse input sequence '" + text + "' at offset " +
                                  std::to_string(pos));
    }
    out.push_back(best);
    pos += best_len;
  }
  return out;
}

std::string InputBasis::format_sequence(const std::vector<std::size_t>& inputs) const {
  bool compact = true;
  for (auto i : inputs) compact = compact && states_.at(i).symbol().size() == 1;
  std::string out;
  for (std::size_t k = 0; k < inputs.size(); ++k) {
    if (!compact && k) out += ' ';
    out += states_.at(inputs[k]).symbol();
  }
  return out;
}

InputBasis pure_state_basis(std::size_t d) {
  if (d == 0) throw std::invalid_argument("pure_state_basis: dimension must be >= 1");
  InputBasis basis;
  basis.dim_ = d;
  const double h = 1.0 / std::numbers::sqrt2;
  const bool short_digits = d <= 10;

  for (std::size_t j = 0; j < d; ++j) {
    ComplexVector ket(d);
    ket[j] = 1.0;
    const std::string label = "e" + std::to_string(j);
    basis.states_.push_back(
        InputState::pure(std::move(ket), label, short_digits ? std::to_string(j) : label));
  }
  for (std::size_t j = 0; j < d; ++j)
    for (std::size_t k = j + 1; k < d; ++k) {
      const std::string suffix = d == 2 ? "" : std::to_string(j) + "_" + std::to_string(k);
      ComplexVector plus(d);
      plus[j] = h;
      plus[k] = h;
      basis.states_.push_back(InputState::pure(std::move(plus), "+" + suffix));
      ComplexVector phi(d);
      phi[j] = h;
      phi[k] = Complex{0.0, h};
      basis.states_.push_back(InputState::pure(std::move(phi), "phi" + suffix));
    }

  if (basis_rank(basis) != d * d) {
    throw std::logic_error("pure_state_basis: constructed family is not linearly independent");
  }
  return basis;
}

std::size_t basis_rank(const InputBasis& basis) {
  const std::size_t n = basis.size();
  std::vector<RealVector> vecs;
  vecs.reserve(n);
  for (const auto& s : basis.states()) vecs.push_back(hermitian_vectorize(s.matrix()));
  ComplexMatrix gram(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      double g = 0.0;
      for (std::size_t t = 0; t < vecs[i].size(); ++t) g += vecs[i][t] * vecs[j][t];
      gram(i, j) = g;
    }
  const auto eig = hermitian_eigensystem(gram);
  const double largest = eig.values.empty() ? 0.0 : eig.values.back();
  std::size_t rank = 0;
  for (double v : eig.values)
    if (v > tol::kSpan * std::max(1.0, largest)) ++rank;
  return rank;
}

}  // namespace qmeq
