#pragma once

#include <string>
#include <vector>

#include "ctspin/dimer/dimer.hpp"

namespace ctspin::pulse {

// Population transfer on the full 256-level manifold: a configured ladder of
// resonant drive rungs walks the pair from a chosen eigenstate into the
// operating-space ground state.  Each rung is propagated in its own rotating
// frame keeping every drive matrix element whose transition sits within
// keep_window_GHz of the carrier (a documented rotating-wave truncation);
// frames are unwound at absolute time so rungs compose coherently.

enum class DriveKind {
  kMicrowave,        // couples to the electronic moments (cannot change mI)
  kRadioFrequency,   // couples to the nuclear Ix of both sites
};

struct TransferRung {
  int from = 0, to = 0;              // composed-spectrum level indices
  DriveKind drive = DriveKind::kRadioFrequency;
  double omega_MHz = 0.01;           // Rabi amplitude on the nominal pair
  double carrier_GHz = 0.0;          // <= 0: resonant, E(to) - E(from)
  double duration_ns = 0.0;          // must be positive
  double keep_window_GHz = 2e-3;     // rotating-frame retention window
};

struct RungLog {
  double carrier_GHz = 0.0;
  double duration_ns = 0.0;
  double detuning_MHz = 0.0;         // carrier minus the nominal gap
  double to_population = 0.0;        // population of the rung target after it
  bool failed = false;               // off-resonant beyond 3 Omega
};

struct TransferReport {
  double final_population = 0.0;     // on the destination eigenstate
  bool success = false;              // final_population > 0.99
  std::vector<RungLog> rungs;
};

TransferReport initialization_transfer(const dimer::DimerSystem& d, double b_T,
                                       int start_level, int target_level,
                                       const std::vector<TransferRung>& rungs);

// Illustrative shipped ladder: two nuclear-drive rungs walking the
// (-3/2, -3/2) ground pair state into the (-1/2, -1/2) operating ground
// state through the degenerate one-site-flipped manifold.  Uses the full
// dipolar operator mode, whose level-dependent diagonal shifts detune the
// isolated-molecule analog of each rung.
struct TransferPlan {
  dimer::DimerSystem system;         // full-operator coupling mode
  double b_T = 0.012;
  int start_level = -1, target_level = -1;
  int monomer_start = -1, monomer_target = -1;  // single-site analog levels
  std::vector<TransferRung> rungs;
};
TransferPlan default_transfer_ladder(double b_T = 0.012);

// The same drive segments applied to one isolated molecule from the analog
// start level; returns the final overlap with the analog target level.  The
// dipolar diagonal shifts leave the pair resonant but the monomer detuned,
// which is what makes the initialization pair-selective.
double monomer_transfer_overlap(const TransferPlan& plan);

}  // namespace ctspin::pulse
