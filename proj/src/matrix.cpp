#include "qmeq/matrix.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "qmeq/errors.hpp"
#include "qmeq/tolerances.hpp"

namespace qmeq {

namespace {

void require_same_shape(const ComplexMatrix& a, const ComplexMatrix& b, const char* what) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimensionError(std::string(what) + ": shape mismatch " + std::to_string(a.rows()) +
                         "x" + std::to_string(a.cols()) + " vs " + std::to_string(b.rows()) +
                         "x" + std::to_string(b.cols()));
  }
}

}  // namespace

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols) {}

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols, ComplexVector entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
  if (data_.size() != rows * cols) {
    throw DimensionError("ComplexMatrix: " + std::to_string(data_.size()) +
                         " entries for shape " + std::to_string(rows) + "x" +
                         std::to_string(cols));
  }
  if (!all_finite()) throw ValidationError("ComplexMatrix: non-finite entry");
}

ComplexMatrix::ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows) {
  rows_ = rows.size();
  cols_ = rows_ == 0 ? 0 : rows.begin()->size();
  data_.reserve(rows_ * cols_);
  for (const auto& row : rows) {
    if (row.size() != cols_) throw DimensionError("ComplexMatrix: ragged initializer");
    data_.insert(data_.end(), row.begin(), row.end());
  }
  if (!all_finite()) throw ValidationError("ComplexMatrix: non-finite entry");
}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
  ComplexMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

ComplexMatrix ComplexMatrix::outer(std::span<const Complex> v) {
  ComplexMatrix m(v.size(), v.size());
  for (std::size_t i = 0; i < v.size(); ++i)
    for (std::size_t j = 0; j < v.size(); ++j) m(i, j) = v[i] * std::conj(v[j]);
  return m;
}

ComplexMatrix ComplexMatrix::column(std::span<const Complex> v) {
  return ComplexMatrix(v.size(), 1, ComplexVector(v.begin(), v.end()));
}

ComplexMatrix ComplexMatrix::adjoint() const {
  ComplexMatrix out(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) out(c, r) = std::conj((*this)(r, c));
  return out;
}

Complex ComplexMatrix::trace() const {
  if (!is_square()) throw DimensionError("trace: matrix is not square");
  Complex t = 0.0;
  for (std::size_t i = 0; i < rows_; ++i) t += (*this)(i, i);
  return t;
}

double ComplexMatrix::frobenius_norm() const {
  double s = 0.0;
  for (const auto& z : data_) s += std::norm(z);
  return std::sqrt(s);
}

bool ComplexMatrix::all_finite() const {
  for (const auto& z : data_)
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
  return true;
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& other) {
  require_same_shape(*this, other, "operator+");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& other) {
  require_same_shape(*this, other, "operator-");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= other.data_[i];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(Complex scalar) {
  for (auto& z : data_) z *= scalar;
  return *this;
}

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols_ != b.rows_) {
    throw DimensionError("matrix product: inner dimensions " + std::to_string(a.cols_) +
                         " and " + std::to_string(b.rows_));
  }
  ComplexMatrix out(a.rows_, b.cols_);
  for (std::size_t i = 0; i < a.rows_; ++i) {
    Complex* row = &out.data_[i * b.cols_];
    for (std::size_t k = 0; k < a.cols_; ++k) {
      const Complex aik = a.data_[i * a.cols_ + k];
      if (aik == Complex{}) continue;
      const Complex* brow = &b.data_[k * b.cols_];
      for (std::size_t j = 0; j < b.cols_; ++j) row[j] += aik * brow[j];
    }
  }
  return out;
}

ComplexVector operator*(const ComplexMatrix& a, std::span<const Complex> v) {
  if (a.cols() != v.size()) throw DimensionError("matrix-vector product: size mismatch");
  ComplexVector out(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    Complex s = 0.0;
    for (std::size_t j = 0; j < a.cols(); ++j) s += a(i, j) * v[j];
    out[i] = s;
  }
  return out;
}

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_same_shape(a, b, "max_abs_diff");
  double m = 0.0;
  auto ea = a.entries();
  auto eb = b.entries();
  for (std::size_t i = 0; i < ea.size(); ++i) m = std::max(m, std::abs(ea[i] - eb[i]));
  return m;
}

double frobenius_distance(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_same_shape(a, b, "frobenius_distance");
  return (a - b).frobenius_norm();
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b, std::size_t dimension_cap) {
  const std::size_t p = b.rows();
  const std::size_t q = b.cols();
  if ((p != 0 && a.rows() > dimension_cap / p) || (q != 0 && a.cols() > dimension_cap / q)) {
    throw ResourceError("kron: result exceeds dimension cap " + std::to_string(dimension_cap));
  }
  ComplexMatrix out(a.rows() * p, a.cols() * q);
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      const Complex aij = a(i, j);
      if (aij == Complex{}) continue;
      for (std::size_t k = 0; k < p; ++k)
        for (std::size_t l = 0; l < q; ++l) out(i * p + k, j * q + l) = aij * b(k, l);
    }
  return out;
}

ComplexMatrix direct_sum_mat(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (!a.is_square() || !b.is_square())
    throw DimensionError("direct_sum_mat: operands must be square");
  const std::size_t na = a.rows();
  ComplexMatrix out(na + b.rows(), na + b.rows());
  for (std::size_t i = 0; i < na; ++i)
    for (std::size_t j = 0; j < na; ++j) out(i, j) = a(i, j);
  for (std::size_t i = 0; i < b.rows(); ++i)
    for (std::size_t j = 0; j < b.rows(); ++j) out(na + i, na + j) = b(i, j);
  return out;
}

ComplexMatrix partial_trace_left(const ComplexMatrix& op, std::size_t dim_left,
                                 std::size_t dim_right) {
  if (!op.is_square() || op.rows() != dim_left * dim_right) {
    throw DimensionError("partial_trace_left: operator is " + std::to_string(op.rows()) + "x" +
                         std::to_string(op.cols()) + ", expected square of size " +
                         std::to_string(dim_left * dim_right));
  }
  ComplexMatrix out(dim_right, dim_right);
  for (std::size_t j = 0; j < dim_left; ++j)
    for (std::size_t k = 0; k < dim_right; ++k)
      for (std::size_t l = 0; l < dim_right; ++l)
        out(k, l) += op(j * dim_right + k, j * dim_right + l);
  return out;
}

double hermitian_defect(const ComplexMatrix& h) {
  if (!h.is_square()) return std::numeric_limits<double>::infinity();
  double s = 0.0;
  for (std::size_t i = 0; i < h.rows(); ++i)
    for (std::size_t j = 0; j < h.cols(); ++j) s += std::norm(h(i, j) - std::conj(h(j, i)));
  return std::sqrt(s);
}

bool is_hermitian(const ComplexMatrix& h, double tolerance) {
  return hermitian_defect(h) <= tolerance;
}

void hermitian_vectorize_into(const ComplexMatrix& h, std::span<double> out) {
  const std::size_t d = h.rows();
  if (out.size() != d * d) throw DimensionError("hermitian_vectorize: output size mismatch");
  std::size_t pos = 0;
  for (std::size_t i = 0; i < d; ++i) out[pos++] = h(i, i).real();
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = i + 1; j < d; ++j) {
      out[pos++] = std::numbers::sqrt2 * h(i, j).real();
      out[pos++] = std::numbers::sqrt2 * h(i, j).imag();
    }
}

RealVector hermitian_vectorize(const ComplexMatrix& h) {
  const double defect = hermitian_defect(h);
  if (!(defect <= tol::kHermitian)) {
    throw ValidationError("hermitian_vectorize: input not Hermitian (||h - h^dagger||_F = " +
                          std::to_string(defect) + ")");
  }
  RealVector out(h.rows() * h.rows());
  hermitian_vectorize_into(h, out);
  return out;
}

ComplexMatrix hermitian_from_vector(std::span<const double> v, std::size_t dim) {
  if (v.size() != dim * dim) throw DimensionError("hermitian_from_vector: size mismatch");
  ComplexMatrix h(dim, dim);
  std::size_t pos = 0;
  for (std::size_t i = 0; i < dim; ++i) h(i, i) = v[pos++];
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = i + 1; j < dim; ++j) {
      const Complex z{v[pos] / std::numbers::sqrt2, v[pos + 1] / std::numbers::sqrt2};
      pos += 2;
      h(i, j) = z;
      h(j, i) = std::conj(z);
    }
  return h;
}

double unitarity_defect(const ComplexMatrix& u) {
  if (!u.is_square()) return std::numeric_limits<double>::infinity();
  return frobenius_distance(u.adjoint() * u, ComplexMatrix::identity(u.rows()));
}

bool is_unitary(const ComplexMatrix& u) { return unitarity_defect(u) <= tol::kUnitary; }

HermitianEigensystem hermitian_eigensystem(const ComplexMatrix& h) {
  if (!h.is_square()) throw DimensionError("hermitian_eigensystem: matrix is not square");
  const auto n = static_cast<Eigen::Index>(h.rows());
  Eigen::MatrixXcd m(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      // Symmetrize so tiny Hermitian defects do not leak into the solver.
      m(i, j) = 0.5 * (h(i, j) + std::conj(h(j, i)));
    }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(m);
  HermitianEigensystem out;
  out.values.resize(h.rows());
  out.vectors = ComplexMatrix(h.rows(), h.rows());
  for (Eigen::Index k = 0; k < n; ++k) {
    out.values[k] = solver.eigenvalues()(k);
    for (Eigen::Index i = 0; i < n; ++i) out.vectors(i, k) = solver.eigenvectors()(i, k);
  }
  return out;
}

bool is_density(const ComplexMatrix& r) {
  if (!r.is_square() || r.empty()) return false;
  if (!r.all_finite()) return false;
  if (hermitian_defect(r) > tol::kHermitian) return false;
  if (std::abs(r.trace() - Complex{1.0}) > tol::kTrace) return false;
  const auto eig = hermitian_eigensystem(r);
  return eig.values.front() >= -tol::kPsd;
}

}  // namespace qmeq
