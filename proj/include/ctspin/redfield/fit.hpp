#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "ctspin/redfield/propagate.hpp"

namespace ctspin::redfield {

class FitError : public std::runtime_error {
 public:
  enum class Kind { kNoDecay, kTooShort, kBadFit };
  FitError(Kind kind, const std::string& what) : std::runtime_error(what), kind(kind) {}
  Kind kind;
};

struct ExpFitResult {
  double tau_ns = 0.0;
  double amplitude = 0.0;
  double offset = 0.0;
  double rel_residual = 0.0;        // rms residual / |amplitude|
  bool multi_exponential = false;   // residual above the single-exponential bar
};

// Fits s(t) = offset + amplitude * exp(-t / tau).  Throws FitError:
//   kNoDecay   signal flat within tolerance
//   kTooShort  trajectory ends before one fitted time constant (the signal
//              has not decayed by 1/e)
//   kBadFit    degenerate data / non-convergence
ExpFitResult fit_exponential(const std::vector<double>& t_ns, const std::vector<double>& signal);

// Fits |s|(t) = amplitude * exp(-t / tau) (zero asymptote), for coherence
// magnitudes.
ExpFitResult fit_exponential_to_zero(const std::vector<double>& t_ns,
                                     const std::vector<double>& magnitude);

// T1 from the expectation value of a Hermitian observable along a trajectory.
ExpFitResult extract_t1(const Trajectory& traj, const Matrix& observable);

// T2 from the magnitude of the (lo, hi) coherence along a trajectory.
ExpFitResult extract_t2(const Trajectory& traj, int lo, int hi);

struct ArrheniusFit {
  double u_eff_GHz = 0.0;     // activation barrier
  double u_eff_cmInv = 0.0;
  double tau0_us = 0.0;       // attempt prefactor
  double r_squared = 1.0;     // of ln T1 vs 1/T
  double residual_rms = 0.0;  // rms residual of ln T1
};

// Linear fit of ln T1 against 1/T.  Requires at least two points (two points
// interpolate exactly), all temperatures and T1 values positive.
ArrheniusFit arrhenius_fit(const std::vector<double>& temp_K, const std::vector<double>& t1_us);

}  // namespace ctspin::redfield
