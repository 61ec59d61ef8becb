#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>

#include "ctspin/linalg/eigh.hpp"
#include "ctspin/linalg/expm.hpp"
#include "ctspin/linalg/matrix.hpp"

using ctspin::linalg::Matrix;
using ctspin::linalg::cplx;

namespace {

Matrix random_hermitian(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Matrix h(n, n);
  for (int i = 0; i < n; ++i) {
    h(i, i) = u(rng);
    for (int j = i + 1; j < n; ++j) {
      h(i, j) = {u(rng), u(rng)};
      h(j, i) = std::conj(h(i, j));
    }
  }
  return h;
}

}  // namespace

TEST_SUITE_BEGIN("linalg");

TEST_CASE("kron dimensions and a known 2x2 x 2x2 block") {
  Matrix a(2, 2), b(2, 2);
  a(0, 0) = 1.0;
  a(0, 1) = 2.0;
  a(1, 1) = -1.0;
  b(0, 1) = cplx{0, 1};
  b(1, 0) = cplx{0, -1};
  Matrix k = ctspin::linalg::kron(a, b);
  CHECK(k.rows() == 4);
  CHECK(k(0, 1) == cplx{0, 1});       // a00 * b01
  CHECK(k(0, 3) == cplx{0, 2});       // a01 * b01
  CHECK(k(2, 3) == cplx{0, -1});      // a11 * b01
  CHECK(k(3, 2) == cplx{0, 1});       // a11 * b10 = (-1)(-i)
}

TEST_CASE("eigh recovers a diagonal matrix and sorts ascending") {
  Matrix h(3, 3);
  h(0, 0) = 2.0;
  h(1, 1) = -1.0;
  h(2, 2) = 0.5;
  auto r = ctspin::linalg::eigh(h);
  CHECK(r.values[0] == doctest::Approx(-1.0));
  CHECK(r.values[1] == doctest::Approx(0.5));
  CHECK(r.values[2] == doctest::Approx(2.0));
  // Phase convention: dominant component real positive.
  CHECK(r.vectors(1, 0).real() == doctest::Approx(1.0));
}

TEST_CASE("eigh reconstructs H = V D V^dagger for random Hermitian matrices") {
  std::mt19937_64 rng(7);
  for (int n : {2, 5, 16}) {
    Matrix h = random_hermitian(rng, n);
    auto r = ctspin::linalg::eigh(h);
    Matrix d(n, n);
    for (int i = 0; i < n; ++i) d(i, i) = r.values[i];
    Matrix rec = ctspin::linalg::matmul(ctspin::linalg::matmul(r.vectors, d), r.vectors.adjoint());
    CHECK((rec - h).norm_max() < 1e-12);
    // Orthonormality
    Matrix g = ctspin::linalg::matmul(r.vectors.adjoint(), r.vectors);
    CHECK((g - Matrix::identity(n)).norm_max() < 1e-12);
  }
}

TEST_CASE("eigh rejects a non-Hermitian input") {
  Matrix h(2, 2);
  h(0, 1) = 1.0;  // h(1,0) stays 0
  CHECK_THROWS_AS(ctspin::linalg::eigh(h), std::invalid_argument);
}

TEST_CASE("eigh phase convention is deterministic across calls") {
  std::mt19937_64 rng(99);
  Matrix h = random_hermitian(rng, 8);
  auto r1 = ctspin::linalg::eigh(h);
  auto r2 = ctspin::linalg::eigh(h);
  CHECK((r1.vectors - r2.vectors).norm_max() == 0.0);
}

TEST_CASE("expm of a diagonal matrix exponentiates the diagonal") {
  Matrix a(2, 2);
  a(0, 0) = cplx{0.0, 1.0};
  a(1, 1) = -2.0;
  Matrix e = ctspin::linalg::expm(a);
  CHECK(std::abs(e(0, 0) - std::exp(cplx{0.0, 1.0})) < 1e-14);
  CHECK(std::abs(e(1, 1) - std::exp(cplx{-2.0, 0.0})) < 1e-14);
  CHECK(std::abs(e(0, 1)) == 0.0);
}

TEST_CASE("expm of a rotation generator gives cos/sin") {
  const double th = 1.234;
  Matrix a(2, 2);
  a(0, 1) = th;
  a(1, 0) = -th;
  Matrix e = ctspin::linalg::expm(a);
  CHECK(e(0, 0).real() == doctest::Approx(std::cos(th)).epsilon(1e-13));
  CHECK(e(0, 1).real() == doctest::Approx(std::sin(th)).epsilon(1e-13));
}

TEST_CASE("expm(-iH) is unitary and matches the eigendecomposition route") {
  std::mt19937_64 rng(21);
  const int n = 9;
  Matrix h = random_hermitian(rng, n);
  h *= 3.0;  // push past the Pade threshold so scaling-squaring engages
  Matrix a = h * cplx{0.0, -1.0};
  Matrix u = ctspin::linalg::expm(a);

  Matrix uu = ctspin::linalg::matmul(u.adjoint(), u);
  CHECK((uu - Matrix::identity(n)).norm_max() < 1e-12);

  auto r = ctspin::linalg::eigh(h);
  Matrix d(n, n);
  for (int i = 0; i < n; ++i) d(i, i) = std::exp(cplx{0.0, -r.values[i]});
  Matrix u2 = ctspin::linalg::matmul(ctspin::linalg::matmul(r.vectors, d), r.vectors.adjoint());
  CHECK((u - u2).norm_max() < 1e-11);
}

TEST_CASE("matvec and expectation agree with direct sums") {
  Matrix a(2, 2);
  a(0, 0) = 1.0;
  a(0, 1) = cplx{0, 1};
  a(1, 0) = cplx{0, -1};
  a(1, 1) = -1.0;
  ctspin::linalg::Vector x = {cplx{1.0, 0.0}, cplx{0.0, 1.0}};
  auto y = ctspin::linalg::matvec(a, x);
  CHECK(std::abs(y[0] - cplx{0.0, 0.0}) < 1e-15);  // 1*1 + i*i
  // <x|A|x> for Hermitian A is real
  CHECK(std::abs(ctspin::linalg::expectation(a, x).imag()) < 1e-15);
}

TEST_SUITE_END();
