#include "ctspin/ct/diagram.hpp"

#include <cmath>
#include <numeric>

#include "ctspin/units.hpp"

namespace ctspin::ct {

LevelDiagram level_diagram(const spin::SpinSystemParams& params, double b_start_mT,
                           double b_stop_mT, double b_step_mT, double e_Vm,
                           double overlap_threshold) {
  if (b_step_mT <= 0.0) throw std::invalid_argument("level_diagram: step must be positive");
  if (b_stop_mT < b_start_mT) throw std::invalid_argument("level_diagram: stop below start");

  const int npts = static_cast<int>(std::floor((b_stop_mT - b_start_mT) / b_step_mT + 1e-9)) + 1;
  LevelDiagram d;
  d.b_mT.reserve(npts);
  d.energies.reserve(npts);
  d.branch_column.reserve(npts);

  const int dim = params.dim();
  spin::Spectrum prev;
  for (int ip = 0; ip < npts; ++ip) {
    const double b = b_start_mT + ip * b_step_mT;
    spin::Spectrum s = spin::diagonalize_z(params, units::mT_to_T(b), e_Vm);
    d.b_mT.push_back(b);
    d.energies.push_back(s.energies);

    std::vector<int> cols(dim);
    if (ip == 0) {
      std::iota(cols.begin(), cols.end(), 0);
    } else {
      // Greedy max-overlap assignment, previous branches in order.
      const auto& prev_cols = d.branch_column.back();
      std::vector<bool> used(dim, false);
      for (int br = 0; br < dim; ++br) {
        const int pc = prev_cols[br];
        int best = -1;
        double best_ov = -1.0;
        for (int c = 0; c < dim; ++c) {
          if (used[c]) continue;
          std::complex<double> ov{0.0, 0.0};
          for (int r = 0; r < dim; ++r) ov += std::conj(prev.states(r, pc)) * s.states(r, c);
          const double a = std::abs(ov);
          if (a > best_ov) {
            best_ov = a;
            best = c;
          }
        }
        if (best_ov < overlap_threshold) throw RefineGridError(b, best_ov);
        d.min_overlap = std::min(d.min_overlap, best_ov);
        cols[br] = best;
        used[best] = true;
      }
    }
    d.branch_column.push_back(std::move(cols));
    prev = std::move(s);
  }
  return d;
}

}  // namespace ctspin::ct
