#include "ctspin/redfield/fit.hpp"

#include <algorithm>
#include <cmath>

#include "ctspin/units.hpp"

namespace ctspin::redfield {

namespace {

struct LinFit {
  double slope = 0.0, intercept = 0.0, r2 = 1.0, rms = 0.0;
};

LinFit linear_fit(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  const double den = n * sxx - sx * sx;
  LinFit f;
  if (std::abs(den) < 1e-300) return f;
  f.slope = (n * sxy - sx * sy) / den;
  f.intercept = (sy - f.slope * sx) / n;
  double ssr = 0, sst = 0;
  const double ym = sy / n;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = y[i] - (f.intercept + f.slope * x[i]);
    ssr += r * r;
    sst += (y[i] - ym) * (y[i] - ym);
  }
  f.rms = std::sqrt(ssr / n);
  f.r2 = sst > 0.0 ? 1.0 - ssr / sst : 1.0;
  return f;
}

// Gauss-Newton refinement of s = a + b exp(-t/tau) with Levenberg damping.
void refine(const std::vector<double>& t, const std::vector<double>& s, double& a, double& b,
            double& tau, bool fit_offset) {
  const std::size_t n = t.size();
  double lambda = 1e-3;
  auto chi2 = [&](double aa, double bb, double tt) {
    double c = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double r = s[i] - (aa + bb * std::exp(-t[i] / tt));
      c += r * r;
    }
    return c;
  };
  double best = chi2(a, b, tau);
  for (int iter = 0; iter < 100; ++iter) {
    // Normal equations over the active parameters (a optional).
    double jtj[3][3] = {{0}}, jtr[3] = {0};
    for (std::size_t i = 0; i < n; ++i) {
      const double ex = std::exp(-t[i] / tau);
      const double r = s[i] - (a + b * ex);
      const double grad[3] = {fit_offset ? 1.0 : 0.0, ex, b * ex * t[i] / (tau * tau)};
      for (int p = 0; p < 3; ++p) {
        jtr[p] += grad[p] * r;
        for (int q = 0; q < 3; ++q) jtj[p][q] += grad[p] * grad[q];
      }
    }
    for (int p = 0; p < 3; ++p) jtj[p][p] *= 1.0 + lambda;
    if (!fit_offset) jtj[0][0] = 1.0;  // inert row/column

    // Solve the 3x3 system by Cramer elimination.
    double m[3][4];
    for (int p = 0; p < 3; ++p) {
      for (int q = 0; q < 3; ++q) m[p][q] = jtj[p][q];
      m[p][3] = jtr[p];
    }
    bool singular = false;
    for (int col = 0; col < 3; ++col) {
      int piv = col;
      for (int row = col + 1; row < 3; ++row)
        if (std::abs(m[row][col]) > std::abs(m[piv][col])) piv = row;
      if (std::abs(m[piv][col]) < 1e-300) {
        singular = true;
        break;
      }
      std::swap(m[piv], m[col]);
      for (int row = 0; row < 3; ++row) {
        if (row == col) continue;
        const double f = m[row][col] / m[col][col];
        for (int q = col; q < 4; ++q) m[row][q] -= f * m[col][q];
      }
    }
    if (singular) break;
    const double da = fit_offset ? m[0][3] / m[0][0] : 0.0;
    const double db = m[1][3] / m[1][1];
    const double dtau = m[2][3] / m[2][2];

    double na = a + da, nb = b + db, ntau = tau + dtau;
    if (ntau <= 0.0) ntau = tau * 0.5;
    const double c = chi2(na, nb, ntau);
    if (c < best) {
      a = na;
      b = nb;
      tau = ntau;
      if (best - c < 1e-14 * (1.0 + best)) break;
      best = c;
      lambda = std::max(lambda * 0.3, 1e-12);
    } else {
      lambda *= 10.0;
      if (lambda > 1e8) break;
    }
  }
}

ExpFitResult fit_core(const std::vector<double>& t, const std::vector<double>& s, bool fit_offset) {
  if (t.size() != s.size() || t.size() < 4)
    throw FitError(FitError::Kind::kBadFit, "exponential fit needs at least 4 samples");

  double smax = 0.0;
  for (double v : s) smax = std::max(smax, std::abs(v));

  // Offset estimate from the tail, amplitude from the head.
  double a0 = 0.0;
  if (fit_offset) {
    const std::size_t tail = std::max<std::size_t>(1, t.size() / 10);
    for (std::size_t i = s.size() - tail; i < s.size(); ++i) a0 += s[i];
    a0 /= tail;
  }
  const double b0 = s.front() - a0;
  if (std::abs(b0) <= 1e-10 * std::max(smax, 1e-30) || smax == 0.0)
    throw FitError(FitError::Kind::kNoDecay, "signal does not decay (flat within tolerance)");

  // Linearized estimate of tau over the usable window.
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < t.size(); ++i) {
    const double d = (s[i] - a0) / b0;
    if (d > 0.05) {
      lx.push_back(t[i]);
      ly.push_back(std::log(d * std::abs(b0)));
    }
  }
  if (lx.size() < 3)
    throw FitError(FitError::Kind::kBadFit, "too few samples above the noise floor for a fit");
  LinFit lin = linear_fit(lx, ly);
  double tau = lin.slope < 0.0 ? -1.0 / lin.slope : (t.back() - t.front());

  double a = a0, b = b0;
  refine(t, s, a, b, tau, fit_offset);
  if (!(tau > 0.0) || !std::isfinite(tau))
    throw FitError(FitError::Kind::kBadFit, "exponential fit did not converge");
  if (t.back() < tau)
    throw FitError(FitError::Kind::kTooShort,
                   "trajectory shorter than one fitted time constant (decay < 1/e)");

  double ssr = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    const double r = s[i] - (a + b * std::exp(-t[i] / tau));
    ssr += r * r;
  }
  ExpFitResult out;
  out.tau_ns = tau;
  out.amplitude = b;
  out.offset = a;
  out.rel_residual = std::sqrt(ssr / t.size()) / std::abs(b);
  out.multi_exponential = out.rel_residual > 0.02;
  return out;
}

}  // namespace

ExpFitResult fit_exponential(const std::vector<double>& t_ns, const std::vector<double>& signal) {
  return fit_core(t_ns, signal, true);
}

ExpFitResult fit_exponential_to_zero(const std::vector<double>& t_ns,
                                     const std::vector<double>& magnitude) {
  return fit_core(t_ns, magnitude, false);
}

ExpFitResult extract_t1(const Trajectory& traj, const Matrix& observable) {
  std::vector<double> s;
  s.reserve(traj.rho.size());
  for (const auto& rho : traj.rho) {
    linalg::cplx tr = 0.0;
    for (int i = 0; i < rho.rows(); ++i)
      for (int j = 0; j < rho.cols(); ++j) tr += observable(i, j) * rho(j, i);
    s.push_back(tr.real());
  }
  return fit_exponential(traj.t_ns, s);
}

ExpFitResult extract_t2(const Trajectory& traj, int lo, int hi) {
  if (traj.rho.empty()) throw FitError(FitError::Kind::kBadFit, "empty trajectory");
  if (std::abs(traj.rho.front()(lo, hi)) == 0.0)
    throw FitError(FitError::Kind::kBadFit, "initial state carries no (lo, hi) coherence");
  std::vector<double> s;
  s.reserve(traj.rho.size());
  for (const auto& rho : traj.rho) s.push_back(std::abs(rho(lo, hi)));
  return fit_exponential_to_zero(traj.t_ns, s);
}

ArrheniusFit arrhenius_fit(const std::vector<double>& temp_K, const std::vector<double>& t1_us) {
  if (temp_K.size() != t1_us.size() || temp_K.size() < 2)
    throw std::invalid_argument("arrhenius_fit: need at least two (T, T1) points");
  std::vector<double> x, y;
  for (std::size_t i = 0; i < temp_K.size(); ++i) {
    if (temp_K[i] <= 0.0 || t1_us[i] <= 0.0)
      throw std::invalid_argument("arrhenius_fit: temperatures and T1 must be positive");
    x.push_back(1.0 / temp_K[i]);
    y.push_back(std::log(t1_us[i]));
  }
  LinFit lin = linear_fit(x, y);
  ArrheniusFit f;
  f.u_eff_GHz = lin.slope * units::kB_GHzPerK;  // slope has units of kelvin
  f.u_eff_cmInv = f.u_eff_GHz / units::kCmInvGHz;
  f.tau0_us = std::exp(lin.intercept);
  f.r_squared = lin.r2;
  f.residual_rms = lin.rms;
  return f;
}

}  // namespace ctspin::redfield
