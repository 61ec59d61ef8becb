#pragma once

#include <vector>

#include "ctspin/redfield/tensor.hpp"

namespace ctspin::redfield {

struct Trajectory {
  std::vector<double> t_ns;
  std::vector<Matrix> rho;        // density matrix in the eigenbasis at each time
  double min_population = 0.0;    // most negative density-matrix eigenvalue seen
  bool positivity_flagged = false;  // true if min_population < -1e-8
};

// Evolves rho0 (eigenbasis, Hermitian, unit trace) through the Redfield
// dynamics at the requested times (ns, non-negative, strictly increasing).
//
// Dense tensors use the exact exponential of the (dim^2 x dim^2) Liouvillian.
// Structured tensors use the exact block solution: populations through the
// detailed-balance-symmetrized eigendecomposition of W, coherences as
// independently decaying phases.  Trace is preserved to rounding either way;
// transient negativity (possible for non-secular dense dynamics) is flagged
// but not fatal.
Trajectory propagate(const RedfieldTensor& tensor, const Matrix& rho0,
                     const std::vector<double>& times_ns, bool check_positivity = true);

// Pre-factored population dynamics of a structured (secular) tensor:
// p(t) = S Q exp(diag(ev) t) Q^T S^-1 p0 with S = diag(sqrt(gibbs)).
class PopulationModes {
 public:
  PopulationModes(const RedfieldTensor& tensor, double temp_K);
  int dim() const { return d_; }
  // Populations at time t for initial populations p0.
  std::vector<double> at(const std::vector<double>& p0, double t_ns) const;
  // Signal sum_a obs_a p_a(t) decomposed once into exponential modes;
  // returns {rate (1/ns, <= 0), amplitude} pairs plus the constant term.
  struct ModeDecomposition {
    std::vector<double> rates;       // eigenvalues of W (<= 0)
    std::vector<double> amplitudes;  // contribution of each mode to the signal
    double constant = 0.0;           // stationary contribution
    // Slowest mode with non-negligible amplitude; 0 if nothing decays.
    double dominant_rate = 0.0;
  };
  ModeDecomposition decompose(const std::vector<double>& p0,
                              const std::vector<double>& observable_diag) const;

 private:
  int d_ = 0;
  std::vector<double> sqrt_g_;   // sqrt Gibbs weights (unnormalized)
  std::vector<double> evals_;    // eigenvalues of the symmetrized W
  std::vector<double> evecs_;    // column-major eigenvectors, d x d
};

}  // namespace ctspin::redfield
