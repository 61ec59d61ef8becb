#include "ctspin/linalg/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ctspin/simd/kernels.hpp"

namespace ctspin::linalg {

Matrix Matrix::identity(int n) {
  Matrix m(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix& Matrix::operator+=(const Matrix& o) {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw std::invalid_argument("matrix add: shape mismatch");
  simd::active().axpy({1.0, 0.0}, o.data(), data(), size());
  return *this;
}

Matrix& Matrix::operator-=(const Matrix& o) {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw std::invalid_argument("matrix sub: shape mismatch");
  simd::active().axpy({-1.0, 0.0}, o.data(), data(), size());
  return *this;
}

Matrix& Matrix::operator*=(cplx alpha) {
  simd::active().scal(alpha, data(), size());
  return *this;
}

Matrix Matrix::adjoint() const {
  Matrix m(cols_, rows_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) m(j, i) = std::conj((*this)(i, j));
  return m;
}

Matrix Matrix::transpose() const {
  Matrix m(cols_, rows_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) m(j, i) = (*this)(i, j);
  return m;
}

Matrix Matrix::conjugate() const {
  Matrix m(rows_, cols_);
  for (std::size_t i = 0; i < size(); ++i) m.a_[i] = std::conj(a_[i]);
  return m;
}

cplx Matrix::trace() const {
  if (!is_square()) throw std::invalid_argument("trace: non-square matrix");
  cplx t = 0.0;
  for (int i = 0; i < rows_; ++i) t += (*this)(i, i);
  return t;
}

double Matrix::norm_fro() const { return std::sqrt(simd::active().nrm2sq(data(), size())); }

double Matrix::norm_max() const {
  double m = 0.0;
  for (const cplx& v : a_) m = std::max(m, std::abs(v));
  return m;
}

double Matrix::norm_one() const {
  double best = 0.0;
  for (int j = 0; j < cols_; ++j) {
    double s = 0.0;
    for (int i = 0; i < rows_; ++i) s += std::abs((*this)(i, j));
    best = std::max(best, s);
  }
  return best;
}

double Matrix::hermiticity_defect() const {
  if (!is_square()) throw std::invalid_argument("hermiticity_defect: non-square matrix");
  double d = 0.0;
  for (int i = 0; i < rows_; ++i)
    for (int j = i; j < cols_; ++j)
      d = std::max(d, std::abs((*this)(i, j) - std::conj((*this)(j, i))));
  return d;
}

Matrix matmul(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) throw std::invalid_argument("matmul: inner dimension mismatch");
  Matrix c(a.rows(), b.cols());
  simd::active().gemm_acc(a.data(), b.data(), c.data(), a.rows(), a.cols(), b.cols());
  return c;
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix c(a.rows() * b.rows(), a.cols() * b.cols());
  for (int ia = 0; ia < a.rows(); ++ia)
    for (int ja = 0; ja < a.cols(); ++ja) {
      const cplx av = a(ia, ja);
      if (av == cplx{0.0, 0.0}) continue;
      for (int ib = 0; ib < b.rows(); ++ib)
        for (int jb = 0; jb < b.cols(); ++jb)
          c(ia * b.rows() + ib, ja * b.cols() + jb) = av * b(ib, jb);
    }
  return c;
}

Matrix commutator(const Matrix& a, const Matrix& b) { return matmul(a, b) - matmul(b, a); }

cplx dot(const Vector& x, const Vector& y) {
  if (x.size() != y.size()) throw std::invalid_argument("dot: length mismatch");
  return simd::active().dotc(x.data(), y.data(), x.size());
}

double norm(const Vector& x) { return std::sqrt(simd::active().nrm2sq(x.data(), x.size())); }

Vector matvec(const Matrix& a, const Vector& x) {
  if (static_cast<std::size_t>(a.cols()) != x.size())
    throw std::invalid_argument("matvec: shape mismatch");
  Vector y(a.rows());
  simd::active().gemm_acc(a.data(), x.data(), y.data(), a.rows(), a.cols(), 1);
  return y;
}

cplx expectation(const Matrix& a, const Vector& x) {
  Vector ax = matvec(a, x);
  return dot(x, ax);
}

}  // namespace ctspin::linalg
