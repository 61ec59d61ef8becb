#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ctspin/spin/system.hpp"

namespace ctspin::ct {

// Observables a calibration can pin, all evaluated on one anticrossing of one
// sorted-level pair:
//   "ct_b_min_mT"  field of the anticrossing
//   "ct_gap_GHz"   gap at the anticrossing
struct CalibrationTarget {
  std::string observable;
  double value = 0.0;
  double weight = 1.0;
};

// Free parameters are addressed by name:
//   "tunneling_gap"      effective-doublet gap (cf 0,0)
//   "a_z"                axial hyperfine constant
//   "g_j"                electronic g-factor
//   "cf:k:q"             crystal-field coefficient B_k^q
//   "sec:k:q" / "sec"    electric-field response entry ("sec" = gap response)
struct CalibrationSettings {
  std::pair<int, int> pair{7, 8};   // 0-based level pair whose anticrossing is probed
  int anticrossing_index = 0;       // which minimum along the scan
  double b_start_mT = 1.0;
  double b_stop_mT = 300.0;
  double b_step_mT = 1.0;
  double tol = 1e-6;                // relative residual for convergence
  int max_iterations = 400;
};

struct CalibrationResult {
  spin::SpinSystemParams params;
  double residual = 0.0;                  // weighted rms relative residual
  std::vector<double> residual_history;   // best residual after each accepted step
  int iterations = 0;
  bool already_satisfied = false;         // initial parameters met the targets
};

class CalibrationError : public std::runtime_error {
 public:
  CalibrationError(const std::string& what, double best_residual)
      : std::runtime_error(what), best_residual(best_residual) {}
  double best_residual;
};

// Least-squares fit of the named free parameters to the targets via
// Nelder-Mead.  Deterministic (fixed initial simplex).  Throws
// CalibrationError if the residual does not reach settings.tol within
// settings.max_iterations.
CalibrationResult calibrate(const spin::SpinSystemParams& initial,
                            const std::vector<CalibrationTarget>& targets,
                            const std::vector<std::string>& free_params,
                            const CalibrationSettings& settings = {});

// Named-parameter access shared with the calibration CLI.
double get_param(const spin::SpinSystemParams& p, const std::string& name);
void set_param(spin::SpinSystemParams& p, const std::string& name, double value);

}  // namespace ctspin::ct
