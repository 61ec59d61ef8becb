#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace ctspin::linalg {

using cplx = std::complex<double>;

// Dense complex matrix, row-major.  Heavy arithmetic routes through the
// runtime-dispatched kernels in ctspin::simd.
class Matrix {
 public:
  Matrix() = default;
  Matrix(int rows, int cols) : rows_(rows), cols_(cols), a_(static_cast<std::size_t>(rows) * cols) {}

  static Matrix identity(int n);
  static Matrix zero(int n) { return Matrix(n, n); }

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  std::size_t size() const { return a_.size(); }

  cplx& operator()(int i, int j) { return a_[static_cast<std::size_t>(i) * cols_ + j]; }
  const cplx& operator()(int i, int j) const { return a_[static_cast<std::size_t>(i) * cols_ + j]; }

  cplx* data() { return a_.data(); }
  const cplx* data() const { return a_.data(); }

  Matrix& operator+=(const Matrix& o);
  Matrix& operator-=(const Matrix& o);
  Matrix& operator*=(cplx alpha);
  friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
  friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
  friend Matrix operator*(Matrix a, cplx alpha) { return a *= alpha; }
  friend Matrix operator*(cplx alpha, Matrix a) { return a *= alpha; }
  friend Matrix operator*(Matrix a, double alpha) { return a *= cplx{alpha, 0.0}; }
  friend Matrix operator*(double alpha, Matrix a) { return a *= cplx{alpha, 0.0}; }

  Matrix adjoint() const;
  Matrix transpose() const;
  Matrix conjugate() const;
  cplx trace() const;
  double norm_fro() const;
  double norm_max() const;   // max |entry|
  double norm_one() const;   // max column abs sum
  bool is_square() const { return rows_ == cols_; }
  double hermiticity_defect() const;  // max |A - A^dagger| entry

 private:
  int rows_ = 0, cols_ = 0;
  std::vector<cplx> a_;
};

Matrix matmul(const Matrix& a, const Matrix& b);
Matrix kron(const Matrix& a, const Matrix& b);
Matrix commutator(const Matrix& a, const Matrix& b);

// Vector helpers on contiguous complex storage.
using Vector = std::vector<cplx>;
cplx dot(const Vector& x, const Vector& y);  // conj(x) . y
double norm(const Vector& x);
Vector matvec(const Matrix& a, const Vector& x);

// expectation value <x| A |x>
cplx expectation(const Matrix& a, const Vector& x);

}  // namespace ctspin::linalg
