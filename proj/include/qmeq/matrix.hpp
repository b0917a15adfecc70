#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace qmeq {

using Complex = std::complex<double>;
using RealVector = std::vector<double>;
using ComplexVector = std::vector<Complex>;

/// Largest row or column count any product-forming operation will produce.
inline constexpr std::size_t kDefaultDimensionCap = std::size_t{1} << 14;

/// Dense complex matrix, row-major.
class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  ComplexMatrix(std::size_t rows, std::size_t cols);
  /// Throws DimensionError if entries.size() != rows*cols and
  /// ValidationError if any entry is NaN or infinite.
  ComplexMatrix(std::size_t rows, std::size_t cols, ComplexVector entries);
  ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows);

  static ComplexMatrix identity(std::size_t n);
  static ComplexMatrix zero(std::size_t n) { return ComplexMatrix(n, n); }
  /// |v><v|
  static ComplexMatrix outer(std::span<const Complex> v);
  static ComplexMatrix column(std::span<const Complex> v);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool is_square() const noexcept { return rows_ == cols_; }
  bool empty() const noexcept { return data_.empty(); }

  Complex& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const Complex& operator()(std::size_t r, std::size_t c) const {
    return data_[r * cols_ + c];
  }

  std::span<const Complex> entries() const noexcept { return data_; }
  std::span<Complex> entries() noexcept { return data_; }

  ComplexMatrix adjoint() const;
  Complex trace() const;
  double frobenius_norm() const;
  bool all_finite() const;

  ComplexMatrix& operator+=(const ComplexMatrix& other);
  ComplexMatrix& operator-=(const ComplexMatrix& other);
  ComplexMatrix& operator*=(Complex scalar);

  friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
  friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
  friend ComplexMatrix operator*(ComplexMatrix a, Complex s) { return a *= s; }
  friend ComplexMatrix operator*(Complex s, ComplexMatrix a) { return a *= s; }
  friend ComplexMatrix operator-(ComplexMatrix a) { return a *= Complex{-1.0}; }
  friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);

  friend bool operator==(const ComplexMatrix&, const ComplexMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  ComplexVector data_;
};

/// Matrix-vector product.
ComplexVector operator*(const ComplexMatrix& a, std::span<const Complex> v);

/// Largest |a_ij - b_ij|; throws DimensionError on shape mismatch.
double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);
double frobenius_distance(const ComplexMatrix& a, const ComplexMatrix& b);

/// Kronecker product: result[i*p+k, j*q+l] = a[i,j] * b[k,l] for b of shape p x q.
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b,
                   std::size_t dimension_cap = kDefaultDimensionCap);

/// Block-diagonal diag(a, b). Both inputs must be square.
ComplexMatrix direct_sum_mat(const ComplexMatrix& a, const ComplexMatrix& b);

/// Traces out the left factor of a (dim_left * dim_right)-square operator:
/// result[k,l] = sum_j op[j*dim_right + k, j*dim_right + l].
ComplexMatrix partial_trace_left(const ComplexMatrix& op, std::size_t dim_left,
                                 std::size_t dim_right);

/// ||h - h^dagger||_F
double hermitian_defect(const ComplexMatrix& h);
bool is_hermitian(const ComplexMatrix& h, double tolerance);

/// Real coordinates of a Hermitian d x d matrix, isometric for the
/// Frobenius inner product: the d diagonal entries, then for every i < j
/// the pair (sqrt2 Re h_ij, sqrt2 Im h_ij).
/// Throws ValidationError when the input is not Hermitian within tolerance.
RealVector hermitian_vectorize(const ComplexMatrix& h);
/// Writes the coordinates into out (length d*d) without the Hermitian check.
void hermitian_vectorize_into(const ComplexMatrix& h, std::span<double> out);
/// Inverse of hermitian_vectorize.
ComplexMatrix hermitian_from_vector(std::span<const double> v, std::size_t dim);

/// ||U^dagger U - I||_F, or +inf for non-square input.
double unitarity_defect(const ComplexMatrix& u);
bool is_unitary(const ComplexMatrix& u);

struct HermitianEigensystem {
  RealVector values;        // ascending
  ComplexMatrix vectors;    // column k is the eigenvector for values[k]
};
HermitianEigensystem hermitian_eigensystem(const ComplexMatrix& h);

/// Hermitian, eigenvalues >= -tol::kPsd and |tr - 1| <= tol::kTrace.
bool is_density(const ComplexMatrix& r);

}  // namespace qmeq
