#include "ctspin/bath/spectral.hpp"

#include <cmath>
#include <stdexcept>

#include "ctspin/units.hpp"

namespace ctspin::bath {

double spectral_density(const SpectralDensity& sd, double nu_GHz) {
  const double nu = std::abs(nu_GHz);
  if (const auto* oh = std::get_if<OhmicCutoff>(&sd)) {
    if (oh->eta < 0.0 || oh->omega_c <= 0.0)
      throw std::invalid_argument("spectral_density: ohmic requires eta >= 0, omega_c > 0");
    return oh->eta * nu * std::exp(-nu / oh->omega_c);
  }
  const auto& peaks = std::get<LorentzianPeaks>(sd);
  double j = 0.0;
  for (const auto& p : peaks) {
    if (p.width <= 0.0 || p.strength < 0.0)
      throw std::invalid_argument("spectral_density: lorentzian requires width > 0, strength >= 0");
    const double d = nu - p.omega0;
    j += p.strength * p.width * p.width / (d * d + p.width * p.width);
  }
  return j;
}

double bose_occupation(double nu_GHz, double temp_K) {
  if (temp_K <= 0.0) throw std::invalid_argument("bose_occupation: temperature must be positive");
  const double x = std::abs(nu_GHz) / (units::kB_GHzPerK * temp_K);
  if (x > 700.0) return 0.0;  // below double underflow in expm1
  return 1.0 / std::expm1(x);
}

double bath_rate(const SpectralDensity& sd, double nu_GHz, double temp_K) {
  if (temp_K <= 0.0) throw std::invalid_argument("bath_rate: temperature must be positive");
  if (nu_GHz == 0.0) {
    // Zero-frequency limit.  Ohmic: lim J(nu)(2n+1)/2 = eta kB T (classical
    // slope).  Lorentzian modes: defined as 0, a peaked phonon spectrum has
    // no secular pure-dephasing weight.
    if (const auto* oh = std::get_if<OhmicCutoff>(&sd)) return oh->eta * units::kB_GHzPerK * temp_K;
    return 0.0;
  }
  const double j = spectral_density(sd, nu_GHz);
  const double n = bose_occupation(nu_GHz, temp_K);
  return nu_GHz > 0.0 ? j * (n + 1.0) : j * n;
}

}  // namespace ctspin::bath
