#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "qmeq/matrix.hpp"
#include "qmeq/tolerances.hpp"

namespace qmeq {

struct Membership {
  bool contained = false;
  double residual = 0.0;  // norm of the component orthogonal to the span
};

/// Incrementally orthonormalized set of real vectors.
///
/// Projection uses modified Gram-Schmidt followed by one reorthogonalization
/// pass, so results depend only on the insertion order. A vector v is inside
/// the span when its residual is at most tolerance * max(1, |v|).
class OrthonormalSet {
 public:
  explicit OrthonormalSet(std::size_t ambient_dimension, double tolerance = tol::kSpan);

  std::size_t ambient_dimension() const noexcept { return ambient_; }
  std::size_t size() const noexcept { return count_; }
  double tolerance() const noexcept { return tolerance_; }

  Membership contains(std::span<const double> v) const;

  /// Appends the normalized residual of v. Throws std::invalid_argument if v
  /// already lies in the span.
  void add(std::span<const double> v);

  std::span<const double> vector(std::size_t k) const {
    return {vectors_.data() + k * ambient_, ambient_};
  }

 private:
  RealVector residual_of(std::span<const double> v) const;
  bool within(double residual, double norm) const;

  std::size_t ambient_;
  double tolerance_;
  std::size_t count_ = 0;
  RealVector vectors_;  // count_ rows of length ambient_
};

/// Span of a family of vectors that also remembers which object each one
/// came from, in insertion order.
template <typename Origin>
class SpanBasis {
 public:
  explicit SpanBasis(std::size_t ambient_dimension, double tolerance = tol::kSpan)
      : set_(ambient_dimension, tolerance) {}

  std::size_t ambient_dimension() const noexcept { return set_.ambient_dimension(); }
  std::size_t size() const noexcept { return originals_.size(); }
  double tolerance() const noexcept { return set_.tolerance(); }

  Membership contains(std::span<const double> v) const { return set_.contains(v); }

  void add(std::span<const double> v, Origin origin) {
    set_.add(v);
    originals_.push_back(std::move(origin));
  }

  const std::vector<Origin>& originals() const noexcept { return originals_; }
  const OrthonormalSet& orthonormal() const noexcept { return set_; }

 private:
  OrthonormalSet set_;
  std::vector<Origin> originals_;
};

}  // namespace qmeq
