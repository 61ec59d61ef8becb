#pragma once

#include <variant>
#include <vector>

namespace ctspin::bath {

// J(nu) = eta * nu * exp(-nu / omega_c) for nu >= 0.
struct OhmicCutoff {
  double eta = 1.0;        // dimensionless coupling strength
  double omega_c = 100.0;  // cutoff, GHz
};

struct LorentzianPeak {
  double omega0 = 100.0;  // peak position, GHz
  double width = 10.0;    // half width at half maximum, GHz
  double strength = 1.0;  // peak height (rate units)
};

// Sum of Lorentzian modes: J(nu) = sum s_p w_p^2 / ((nu - omega_p)^2 + w_p^2).
using LorentzianPeaks = std::vector<LorentzianPeak>;

using SpectralDensity = std::variant<OhmicCutoff, LorentzianPeaks>;

// Spectral density J(|nu|) >= 0.
double spectral_density(const SpectralDensity& sd, double nu_GHz);

// Bose-Einstein occupation at frequency nu (GHz) and temperature T (K).
double bose_occupation(double nu_GHz, double temp_K);

// One-phonon bath transition rate at system frequency nu (GHz):
//   nu > 0 (emission):   J(nu) (n(nu) + 1)
//   nu < 0 (absorption): J(|nu|) n(|nu|)
//   nu = 0:              variant-specific limit; eta * kB * T for ohmic
//                        (classical limit), 0 for lorentzian modes (peaked
//                        spectra carry no zero-frequency weight).
// Satisfies detailed balance rate(-nu) / rate(nu) = exp(-nu / kB T) exactly.
double bath_rate(const SpectralDensity& sd, double nu_GHz, double temp_K);

}  // namespace ctspin::bath
