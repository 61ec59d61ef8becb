#pragma once

#include <stdexcept>
#include <vector>

#include "ctspin/spin/system.hpp"

namespace ctspin::ct {

// Raised by level_diagram when adiabatic tracking cannot follow a branch
// between neighbouring grid points (largest eigenvector overlap below the
// acceptance threshold); the caller should refine the field grid.
class RefineGridError : public std::runtime_error {
 public:
  RefineGridError(double b_mT, double overlap)
      : std::runtime_error("level tracking lost near B = " + std::to_string(b_mT) +
                           " mT (best eigenvector overlap " + std::to_string(overlap) +
                           "); refine the field grid"),
        b_mT(b_mT),
        overlap(overlap) {}
  double b_mT;
  double overlap;
};

struct LevelDiagram {
  std::vector<double> b_mT;                      // grid
  std::vector<std::vector<double>> energies;     // [point][level], ascending per point
  // branch_column[point][branch] = sorted-level index occupied by adiabatic
  // branch `branch` at that point (branches seeded from the first point).
  std::vector<std::vector<int>> branch_column;
  double min_overlap = 1.0;                      // worst tracking overlap seen
};

// Zeeman diagram over a uniform field grid along z.  Eigenvector-overlap
// tracking links levels between neighbouring points; an overlap below
// `overlap_threshold` raises RefineGridError.
LevelDiagram level_diagram(const spin::SpinSystemParams& params, double b_start_mT,
                           double b_stop_mT, double b_step_mT, double e_Vm = 0.0,
                           double overlap_threshold = 0.9);

}  // namespace ctspin::ct
