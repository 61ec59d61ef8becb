#pragma once

#include <string>
#include <utility>
#include <vector>

#include "ctspin/redfield/fit.hpp"
#include "ctspin/redfield/tensor.hpp"

namespace ctspin::redfield {

struct SweepPoint {
  double b_mT = 0.0;
  double temp_K = 0.0;
  double t1_us = 0.0;
  double t2_us = 0.0;
  bool t1_ok = false;
  bool t2_ok = false;
  bool multi_exponential = false;
  std::string note;  // reason when a fit is missing
};

struct SweepConfig {
  std::pair<int, int> pair{7, 8};  // 0-based sorted-level pair to monitor
  int time_points = 60;            // samples per decay trajectory
  double span_time_constants = 6.0;  // trajectory length in units of 1/rate
  int threads = 1;
};

// T1/T2 of the monitored pair over a field x temperature grid.
//
// Per grid point the pipeline is: diagonalize H(B); build the secular
// Redfield rates; synthesize the T1 trajectory from a Gibbs state with the
// pair populations swapped (observable: upper minus lower pair population)
// and the T2 trajectory from a Gibbs state bearing pair coherence; fit
// exponentials.  Points where nothing decays are reported with ok = false
// and a reason note.
std::vector<SweepPoint> relaxation_sweep(const spin::SpinSystemParams& params,
                                         const std::vector<CouplingChannel>& channels,
                                         const std::vector<double>& b_grid_mT,
                                         const std::vector<double>& temp_grid_K,
                                         const SweepConfig& config = {});

// The coupling channels and spectral density used by the stock relaxation
// preset ("full_j8_relax"): a one-phonon ladder channel, a tunneling-gap
// modulation channel and an axial-distortion channel riding a single
// Lorentzian phonon mode at 68.4 cm^-1.  Scales are calibrated against the
// documented T1 anchor (about 8 us at the first anticrossing at 5 K).
std::vector<CouplingChannel> preset_relax_channels(const spin::SpinSystemParams& params);

}  // namespace ctspin::redfield
