#include "ctspin/redfield/propagate.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "ctspin/linalg/eigh.hpp"
#include "ctspin/linalg/expm.hpp"
#include "ctspin/units.hpp"

namespace ctspin::redfield {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void check_times(const std::vector<double>& t) {
  if (t.empty()) throw std::invalid_argument("propagate: empty time grid");
  if (t.front() < 0.0) throw std::invalid_argument("propagate: negative time");
  for (std::size_t i = 1; i < t.size(); ++i)
    if (t[i] <= t[i - 1]) throw std::invalid_argument("propagate: times must be strictly increasing");
}

void check_state(const Matrix& rho, int d) {
  if (rho.rows() != d || rho.cols() != d) throw std::invalid_argument("propagate: state shape mismatch");
  if (rho.hermiticity_defect() > 1e-9) throw std::invalid_argument("propagate: state not Hermitian");
  if (std::abs(rho.trace().real() - 1.0) > 1e-9 || std::abs(rho.trace().imag()) > 1e-12)
    throw std::invalid_argument("propagate: state trace must be 1");
}

double min_eigenvalue(const Matrix& rho) {
  auto eg = linalg::eigh(rho, 1e-7);
  double mn = eg.values.front();
  for (double v : eg.values) mn = std::min(mn, v);
  return mn;
}

Trajectory propagate_dense(const RedfieldTensor& tensor, const Matrix& rho0,
                           const std::vector<double>& times, bool check_positivity) {
  const int d = tensor.dim();
  const int d2 = d * d;
  const auto& e = tensor.energies();

  Matrix liouville(d2, d2);
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) {
      const int row = a * d + b;
      liouville(row, row) = linalg::cplx{0.0, -kTwoPi * (e[a] - e[b])};
      for (int c = 0; c < d; ++c)
        for (int dd = 0; dd < d; ++dd) liouville(row, c * d + dd) -= tensor.r(a, b, c, dd);
    }

  Trajectory out;
  out.t_ns = times;
  out.rho.reserve(times.size());

  linalg::Vector v(d2);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) v[static_cast<std::size_t>(i) * d + j] = rho0(i, j);

  double prev_t = 0.0;
  double cached_dt = -1.0;
  Matrix step;
  for (double t : times) {
    const double dt = t - prev_t;
    if (dt > 0.0) {
      if (dt != cached_dt) {
        step = linalg::expm(liouville * dt);
        cached_dt = dt;
      }
      v = linalg::matvec(step, v);
    }
    prev_t = t;
    Matrix rho(d, d);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) rho(i, j) = v[static_cast<std::size_t>(i) * d + j];
    if (check_positivity) {
      // Hermitize before the eigenvalue check; integration noise is tiny.
      Matrix h = (rho + rho.adjoint()) * 0.5;
      out.min_population = std::min(out.min_population, min_eigenvalue(h));
    }
    out.rho.push_back(std::move(rho));
  }
  out.positivity_flagged = out.min_population < -1e-8;
  return out;
}

}  // namespace

PopulationModes::PopulationModes(const RedfieldTensor& tensor, double temp_K) {
  if (temp_K <= 0.0) throw std::invalid_argument("PopulationModes: temperature must be positive");
  d_ = tensor.dim();
  const auto& e = tensor.energies();
  double emin = e[0];
  for (double x : e) emin = std::min(emin, x);

  sqrt_g_.resize(d_);
  for (int i = 0; i < d_; ++i) {
    // Populations initialized many hundreds of kB T above the ground state
    // would underflow this scaling; clamp keeps them finite (frozen).
    sqrt_g_[i] = std::max(std::exp(-(e[i] - emin) / (2.0 * units::kB_GHzPerK * temp_K)), 1e-290);
  }

  // Detailed balance makes S^-1 W S symmetric with S = diag(sqrt_g); build it
  // directly as sqrt(W_ac W_ca), which is overflow-safe.
  Eigen::MatrixXd ws(d_, d_);
  for (int a = 0; a < d_; ++a)
    for (int c = 0; c < d_; ++c)
      ws(a, c) = (a == c) ? tensor.w(a, a) : std::sqrt(tensor.w(a, c) * tensor.w(c, a));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(ws);
  if (solver.info() != Eigen::Success) throw std::runtime_error("PopulationModes: eigensolver failed");
  evals_.resize(d_);
  evecs_.resize(static_cast<std::size_t>(d_) * d_);
  for (int j = 0; j < d_; ++j) {
    evals_[j] = solver.eigenvalues()(j);
    for (int i = 0; i < d_; ++i) evecs_[static_cast<std::size_t>(j) * d_ + i] = solver.eigenvectors()(i, j);
  }
}

std::vector<double> PopulationModes::at(const std::vector<double>& p0, double t_ns) const {
  if (static_cast<int>(p0.size()) != d_) throw std::invalid_argument("PopulationModes: p0 size");
  std::vector<double> phi(d_, 0.0), out(d_, 0.0);
  for (int i = 0; i < d_; ++i) phi[i] = p0[i] == 0.0 ? 0.0 : p0[i] / sqrt_g_[i];
  for (int j = 0; j < d_; ++j) {
    double c = 0.0;
    for (int i = 0; i < d_; ++i) c += evecs_[static_cast<std::size_t>(j) * d_ + i] * phi[i];
    const double amp = c * std::exp(std::min(evals_[j], 0.0) * t_ns);
    for (int i = 0; i < d_; ++i) out[i] += evecs_[static_cast<std::size_t>(j) * d_ + i] * amp;
  }
  for (int i = 0; i < d_; ++i) out[i] *= sqrt_g_[i];
  return out;
}

PopulationModes::ModeDecomposition PopulationModes::decompose(
    const std::vector<double>& p0, const std::vector<double>& observable_diag) const {
  if (static_cast<int>(p0.size()) != d_ || static_cast<int>(observable_diag.size()) != d_)
    throw std::invalid_argument("PopulationModes: vector size");
  ModeDecomposition md;
  std::vector<double> phi(d_);
  for (int i = 0; i < d_; ++i) phi[i] = p0[i] == 0.0 ? 0.0 : p0[i] / sqrt_g_[i];

  double best_amp = 0.0;
  for (int j = 0; j < d_; ++j) {
    double c = 0.0, o = 0.0;
    for (int i = 0; i < d_; ++i) {
      const double q = evecs_[static_cast<std::size_t>(j) * d_ + i];
      c += q * phi[i];
      o += q * observable_diag[i] * sqrt_g_[i];
    }
    const double amp = c * o;
    // Modes with |rate| below numerical zero form the stationary manifold.
    if (std::abs(evals_[j]) < 1e-14) {
      md.constant += amp;
      continue;
    }
    md.rates.push_back(evals_[j]);
    md.amplitudes.push_back(amp);
  }
  // Dominant mode: the one carrying the largest share of the signal.
  for (std::size_t j = 0; j < md.rates.size(); ++j) {
    if (std::abs(md.amplitudes[j]) > best_amp) {
      best_amp = std::abs(md.amplitudes[j]);
      md.dominant_rate = md.rates[j];
    }
  }
  return md;
}

Trajectory propagate(const RedfieldTensor& tensor, const Matrix& rho0,
                     const std::vector<double>& times_ns, bool check_positivity) {
  check_times(times_ns);
  check_state(rho0, tensor.dim());
  if (tensor.dense()) return propagate_dense(tensor, rho0, times_ns, check_positivity);
  if (!tensor.secular())
    throw std::invalid_argument("propagate: structured tensors must be secular");

  // Structured (secular) path: populations evolve under exp(W t), each
  // coherence decays and rotates independently.  Both blocks are evolved
  // exactly at every requested time.
  const int d = tensor.dim();
  Matrix w(d, d);
  for (int a = 0; a < d; ++a)
    for (int c = 0; c < d; ++c) w(a, c) = tensor.w(a, c);

  Trajectory out;
  out.t_ns = times_ns;
  out.rho.reserve(times_ns.size());

  linalg::Vector p(d);
  for (int i = 0; i < d; ++i) p[i] = rho0(i, i).real();
  const auto& e = tensor.energies();

  double prev_t = 0.0;
  double cached_dt = -1.0;
  Matrix step;
  const Matrix coh = rho0;  // off-diagonal part evolves element-wise from t = 0
  for (double t : times_ns) {
    const double dt = t - prev_t;
    if (dt > 0.0) {
      if (dt != cached_dt) {
        step = linalg::expm(w * dt);
        cached_dt = dt;
      }
      p = linalg::matvec(step, p);
    }
    prev_t = t;
    Matrix rho(d, d);
    for (int i = 0; i < d; ++i) rho(i, i) = p[i].real();
    for (int a = 0; a < d; ++a)
      for (int b = 0; b < d; ++b) {
        if (a == b) continue;
        const double phase = -kTwoPi * (e[a] - e[b]) * t;
        const double decay = std::exp(-tensor.lambda(a, b) * t);
        rho(a, b) = coh(a, b) * decay * linalg::cplx{std::cos(phase), std::sin(phase)};
      }
    if (check_positivity) {
      double mn = 0.0;
      for (int i = 0; i < d; ++i) mn = std::min(mn, p[i].real());
      out.min_population = std::min(out.min_population, mn);
    }
    out.rho.push_back(std::move(rho));
  }
  out.positivity_flagged = out.min_population < -1e-8;
  return out;
}

}  // namespace ctspin::redfield
