#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "ctspin/spin/system.hpp"

namespace ctspin::ct {

// A located gap minimum between a sorted-level pair.
struct AnticrossingPoint {
  double b_min_mT = 0.0;    // field of the gap minimum
  double f_ct_GHz = 0.0;    // gap at the minimum
  double df_dB = 0.0;       // GHz per mT, central difference at b_min
  double d2f_dB2 = 0.0;     // GHz per mT^2
  std::pair<int, int> pair; // 0-based sorted-level indices (lo, hi)
};

// Gap between sorted levels (lo, hi) at field b_mT.
double gap_at(const spin::SpinSystemParams& params, std::pair<int, int> pair, double b_mT,
              double e_Vm = 0.0);

// Scans [b_start, b_stop] with the given coarse step, brackets every local
// minimum of the pair gap and refines each to b_tol_mT by golden-section
// search.  Returns points ordered by field; empty if the gap is monotone over
// the scan.
std::vector<AnticrossingPoint> find_anticrossings(const spin::SpinSystemParams& params,
                                                  std::pair<int, int> pair, double b_start_mT,
                                                  double b_stop_mT, double b_step_mT = 0.1,
                                                  double e_Vm = 0.0, double b_tol_mT = 1e-4);

struct ProtectionRow {
  double b_mT;
  double f_GHz;
  double df_dB;    // GHz / mT
  double d2f_dB2;  // GHz / mT^2
};

// First and second field-derivatives of an arbitrary transition frequency
// over a grid (central differences with step fd_step_mT).
std::vector<ProtectionRow> protection_profile(const std::function<double(double)>& f_of_bmT,
                                              double b_start_mT, double b_stop_mT,
                                              double b_step_mT, double fd_step_mT = 0.01);

// Convenience overload for a sorted-level pair of a spin system.
std::vector<ProtectionRow> protection_profile(const spin::SpinSystemParams& params,
                                              std::pair<int, int> pair, double b_start_mT,
                                              double b_stop_mT, double b_step_mT,
                                              double e_Vm = 0.0, double fd_step_mT = 0.01);

}  // namespace ctspin::ct
