#include "ctspin/linalg/eigh.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <stdexcept>

namespace ctspin::linalg {

EighResult eigh(const Matrix& h, double herm_tol) {
  if (!h.is_square()) throw std::invalid_argument("eigh: matrix must be square");
  const double defect = h.hermiticity_defect();
  if (defect > herm_tol)
    throw std::invalid_argument("eigh: matrix is not Hermitian (defect " + std::to_string(defect) + ")");

  const int n = h.rows();
  using EMat = Eigen::Matrix<std::complex<double>, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  Eigen::Map<const EMat> hm(h.data(), n, n);

  // Symmetrize exactly so tiny defects below tolerance cannot leak in.
  Eigen::MatrixXcd hs = (hm + hm.adjoint()) / 2.0;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(hs);
  if (solver.info() != Eigen::Success) throw std::runtime_error("eigh: eigensolver failed to converge");

  EighResult r;
  r.values.resize(n);
  for (int i = 0; i < n; ++i) r.values[i] = solver.eigenvalues()(i);
  r.vectors = Matrix(n, n);
  for (int j = 0; j < n; ++j) {
    // Phase fix: largest-|component| entry becomes real positive.
    int imax = 0;
    double amax = -1.0;
    for (int i = 0; i < n; ++i) {
      const double a = std::abs(solver.eigenvectors()(i, j));
      if (a > amax + 1e-14) {  // strict improvement; ties keep the lowest index
        amax = a;
        imax = i;
      }
    }
    std::complex<double> ph = solver.eigenvectors()(imax, j);
    std::complex<double> rot = (std::abs(ph) > 0.0) ? std::conj(ph) / std::abs(ph) : 1.0;
    for (int i = 0; i < n; ++i) r.vectors(i, j) = solver.eigenvectors()(i, j) * rot;
  }
  return r;
}

Matrix evolution_operator(const Matrix& h, double tau_ns, double herm_tol) {
  const EighResult eg = eigh(h, herm_tol);
  const int n = h.rows();
  Matrix u(n, n);
  for (int k = 0; k < n; ++k) {
    const double ph = -2.0 * M_PI * eg.values[k] * tau_ns;
    const std::complex<double> e = {std::cos(ph), std::sin(ph)};
    for (int i = 0; i < n; ++i) {
      const std::complex<double> col = eg.vectors(i, k) * e;
      for (int j = 0; j < n; ++j) u(i, j) += col * std::conj(eg.vectors(j, k));
    }
  }
  return u;
}

}  // namespace ctspin::linalg
