#include "ctspin/redfield/tensor.hpp"

#include <cmath>
#include <stdexcept>

#include "ctspin/units.hpp"

namespace ctspin::redfield {

namespace {

// Gamma(nu) = rate(nu) / 2, the half-sided bath correlation integral with the
// imaginary (Lamb-shift) part dropped.
double half_rate(const bath::SpectralDensity& sd, double nu, double temp_K) {
  return 0.5 * bath::bath_rate(sd, nu, temp_K);
}

}  // namespace

RedfieldTensor build_redfield(const spin::Spectrum& spec,
                              const std::vector<CouplingChannel>& channels, double temp_K,
                              const RedfieldOptions& options) {
  const int d = spec.dim();
  if (d <= 0) throw std::invalid_argument("build_redfield: empty spectrum");
  if (channels.empty()) throw std::invalid_argument("build_redfield: no coupling channels");
  if (temp_K <= 0.0) throw std::invalid_argument("build_redfield: temperature must be positive");

  const bool structured = d > options.dense_limit;
  if (structured && !options.secular)
    throw std::invalid_argument(
        "build_redfield: dimensions above dense_limit require secular mode "
        "(the full rank-4 tensor is only stored up to dense_limit)");

  RedfieldTensor t;
  t.dim_ = d;
  t.secular_ = options.secular;
  t.energies_ = spec.energies;

  // Transform every coupling to the eigenbasis.
  std::vector<Matrix> vts;
  vts.reserve(channels.size());
  for (const auto& ch : channels) {
    if (ch.op.rows() != d || ch.op.cols() != d)
      throw std::invalid_argument("build_redfield: coupling operator shape mismatch");
    if (ch.op.hermiticity_defect() > 1e-9 * std::max(1.0, ch.op.norm_max()))
      throw std::invalid_argument("build_redfield: coupling operator is not Hermitian");
    vts.push_back(linalg::matmul(linalg::matmul(spec.states.adjoint(), ch.op), spec.states));
  }

  const auto& e = spec.energies;

  // Population-transfer rates and coherence decay rates (always computed;
  // they are cheap and power the structured propagation path).
  t.w_.assign(static_cast<std::size_t>(d) * d, 0.0);
  t.lam_.assign(static_cast<std::size_t>(d) * d, 0.0);
  for (std::size_t ic = 0; ic < channels.size(); ++ic) {
    const Matrix& v = vts[ic];
    const auto& sd = channels[ic].sd;
    for (int a = 0; a < d; ++a)
      for (int c = 0; c < d; ++c) {
        if (a == c) continue;
        const double el2 = std::norm(v(a, c));
        if (el2 == 0.0) continue;
        t.w_[static_cast<std::size_t>(a) * d + c] += el2 * bath::bath_rate(sd, e[c] - e[a], temp_K);
      }
  }
  for (int a = 0; a < d; ++a) {
    double out = 0.0;
    for (int k = 0; k < d; ++k)
      if (k != a) out += t.w_[static_cast<std::size_t>(k) * d + a];
    t.w_[static_cast<std::size_t>(a) * d + a] = -out;
  }
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) {
      if (a == b) continue;
      double lam = 0.5 * (-t.w_[static_cast<std::size_t>(a) * d + a] -
                          t.w_[static_cast<std::size_t>(b) * d + b]);
      for (std::size_t ic = 0; ic < channels.size(); ++ic) {
        const double dv = vts[ic](a, a).real() - vts[ic](b, b).real();
        lam += 0.5 * dv * dv * bath::bath_rate(channels[ic].sd, 0.0, temp_K);
      }
      t.lam_[static_cast<std::size_t>(a) * d + b] = lam;
    }

  if (structured) return t;

  // Dense rank-4 assembly:
  //   R_{ab,cd} = -Lambda_ac V_db - V_ac conj(Lambda_bd)
  //               + delta_db (V Lambda)_ac + delta_ac (Lambda^+ V)_db
  // with Lambda_nm = V_nm Gamma(E_m - E_n).
  t.r4_.assign(static_cast<std::size_t>(d) * d * d * d, {0.0, 0.0});
  for (std::size_t ic = 0; ic < channels.size(); ++ic) {
    const Matrix& v = vts[ic];
    const auto& sd = channels[ic].sd;
    Matrix lambda(d, d);
    for (int n = 0; n < d; ++n)
      for (int m = 0; m < d; ++m) lambda(n, m) = v(n, m) * half_rate(sd, e[m] - e[n], temp_K);
    const Matrix vl = linalg::matmul(v, lambda);
    const Matrix lv = linalg::matmul(lambda.adjoint(), v);

    for (int a = 0; a < d; ++a)
      for (int b = 0; b < d; ++b)
        for (int c = 0; c < d; ++c)
          for (int dd = 0; dd < d; ++dd) {
            linalg::cplx val = -lambda(a, c) * v(dd, b) - v(a, c) * std::conj(lambda(b, dd));
            if (dd == b) val += vl(a, c);
            if (a == c) val += lv(dd, b);
            t.r(a, b, c, dd) += val;
          }
  }

  if (options.secular) {
    for (int a = 0; a < d; ++a)
      for (int b = 0; b < d; ++b)
        for (int c = 0; c < d; ++c)
          for (int dd = 0; dd < d; ++dd) {
            const double nu_ab = e[a] - e[b], nu_cd = e[c] - e[dd];
            if (std::abs(nu_ab - nu_cd) > options.secular_cutoff_GHz) t.r(a, b, c, dd) = 0.0;
          }
  }
  return t;
}

double RedfieldTensor::trace_defect() const {
  if (!dense()) throw std::logic_error("trace_defect: dense tensor required");
  double worst = 0.0;
  for (int c = 0; c < dim_; ++c)
    for (int dd = 0; dd < dim_; ++dd) {
      linalg::cplx s = 0.0;
      for (int a = 0; a < dim_; ++a) s += r(a, a, c, dd);
      worst = std::max(worst, std::abs(s));
    }
  return worst;
}

double RedfieldTensor::hermiticity_defect() const {
  if (!dense()) throw std::logic_error("hermiticity_defect: dense tensor required");
  double worst = 0.0;
  for (int a = 0; a < dim_; ++a)
    for (int b = 0; b < dim_; ++b)
      for (int c = 0; c < dim_; ++c)
        for (int dd = 0; dd < dim_; ++dd)
          worst = std::max(worst, std::abs(r(a, b, c, dd) - std::conj(r(b, a, dd, c))));
  return worst;
}

Matrix gibbs_state(const std::vector<double>& energies_GHz, double temp_K) {
  if (temp_K <= 0.0) throw std::invalid_argument("gibbs_state: temperature must be positive");
  const int d = static_cast<int>(energies_GHz.size());
  double emin = energies_GHz[0];
  for (double x : energies_GHz) emin = std::min(emin, x);
  const double beta = 1.0 / (units::kB_GHzPerK * temp_K);
  double z = 0.0;
  Matrix rho(d, d);
  for (int i = 0; i < d; ++i) {
    const double w = std::exp(-(energies_GHz[i] - emin) * beta);
    rho(i, i) = w;
    z += w;
  }
  for (int i = 0; i < d; ++i) rho(i, i) /= z;
  return rho;
}

}  // namespace ctspin::redfield
