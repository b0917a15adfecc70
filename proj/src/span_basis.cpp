#include "qmeq/span_basis.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qmeq/errors.hpp"

namespace qmeq {

namespace {

double dot(const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

double norm2(std::span<const double> v) { return std::sqrt(dot(v.data(), v.data(), v.size())); }

}  // namespace

OrthonormalSet::OrthonormalSet(std::size_t ambient_dimension, double tolerance)
    : ambient_(ambient_dimension), tolerance_(tolerance) {
  if (!(tolerance > 0.0)) throw std::invalid_argument("OrthonormalSet: tolerance must be > 0");
}

RealVector OrthonormalSet::residual_of(std::span<const double> v) const {
  if (v.size() != ambient_) {
    throw DimensionError("span test: vector of length " + std::to_string(v.size()) +
                         " in ambient dimension " + std::to_string(ambient_));
  }
  RealVector r(v.begin(), v.end());
  for (int pass = 0; pass < 2; ++pass) {
    for (std::size_t k = 0; k < count_; ++k) {
      const double* q = vectors_.data() + k * ambient_;
      const double c = dot(q, r.data(), ambient_);
      for (std::size_t i = 0; i < ambient_; ++i) r[i] -= c * q[i];
    }
  }
  return r;
}

bool OrthonormalSet::within(double residual, double norm) const {
  return residual <= tolerance_ * std::max(1.0, norm);
}

Membership OrthonormalSet::contains(std::span<const double> v) const {
  const RealVector r = residual_of(v);
  const double residual = norm2(r);
  return {within(residual, norm2(v)), residual};
}

void OrthonormalSet::add(std::span<const double> v) {
  RealVector r = residual_of(v);
  const double residual = norm2(r);
  if (within(residual, norm2(v))) {
    throw std::invalid_argument("span add: vector already in span (residual " +
                                std::to_string(residual) + ")");
  }
  for (auto& x : r) x /= residual;
  vectors_.insert(vectors_.end(), r.begin(), r.end());
  ++count_;
}

}  // namespace qmeq
