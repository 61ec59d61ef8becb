#pragma once

#include <optional>
#include <vector>

#include "ctspin/bath/spectral.hpp"
#include "ctspin/linalg/matrix.hpp"
#include "ctspin/spin/system.hpp"

namespace ctspin::redfield {

using linalg::Matrix;

// A system-bath coupling channel: Hermitian operator in the same basis as the
// Hamiltonian handed to diagonalize(), with its own spectral density.
struct CouplingChannel {
  Matrix op;
  bath::SpectralDensity sd;
};

struct RedfieldOptions {
  bool secular = false;
  // Dense tensor entries R_{ab,cd} are kept only when
  // |nu_ab - nu_cd| <= secular_cutoff_GHz (secular mode).
  double secular_cutoff_GHz = 1e-6;
  // Dimensions above this require secular mode and use the structured
  // population/coherence representation instead of the rank-4 tensor.
  int dense_limit = 16;
};

// Redfield relaxation tensor at temperature temp_K for eigenstates `spec`,
// with Gamma(nu) = rate(nu)/2 and the imaginary (Lamb-shift) part dropped.
//
// Dense storage (dim <= dense_limit): full rank-4 R_{ab,cd}, equation
//   d rho_ab / dt = -i 2 pi nu_ab rho_ab - sum_cd R_{ab,cd} rho_cd.
// Structured storage (secular): population-transfer matrix W plus per-pair
// coherence decay rates lambda_ab.
class RedfieldTensor {
 public:
  int dim() const { return dim_; }
  bool dense() const { return !r4_.empty(); }
  bool secular() const { return secular_; }
  const std::vector<double>& energies() const { return energies_; }

  // Dense accessors.
  linalg::cplx r(int a, int b, int c, int d) const {
    return r4_[((static_cast<std::size_t>(a) * dim_ + b) * dim_ + c) * dim_ + d];
  }
  linalg::cplx& r(int a, int b, int c, int d) {
    return r4_[((static_cast<std::size_t>(a) * dim_ + b) * dim_ + c) * dim_ + d];
  }

  // Structured accessors.  W(a, c) for a != c is the population gain rate of
  // a from c (1/ns, >= 0); diagonal entries are -sum of the column's
  // off-diagonal entries.  lambda(a, b) is the decay rate of coherence ab.
  double w(int a, int c) const { return w_[static_cast<std::size_t>(a) * dim_ + c]; }
  double lambda(int a, int b) const { return lam_[static_cast<std::size_t>(a) * dim_ + b]; }

  // Diagnostics (dense only): max |sum_a R_{aa,cd}| -- exact zero of the
  // derivation shows up as rounding noise; and the Hermiticity defect
  // max |R_{ab,cd} - conj(R_{ba,dc})|.
  double trace_defect() const;
  double hermiticity_defect() const;

  friend RedfieldTensor build_redfield(const spin::Spectrum&, const std::vector<CouplingChannel>&,
                                       double, const RedfieldOptions&);

 private:
  int dim_ = 0;
  bool secular_ = false;
  std::vector<double> energies_;
  std::vector<linalg::cplx> r4_;  // dense rank-4, empty in structured mode
  std::vector<double> w_;         // structured population rates
  std::vector<double> lam_;       // structured coherence decay rates
};

// Builds the tensor.  Throws std::invalid_argument for non-Hermitian
// couplings, shape mismatches, or dim > options.dense_limit without secular
// mode (the full tensor has no compact representation there).
RedfieldTensor build_redfield(const spin::Spectrum& spec,
                              const std::vector<CouplingChannel>& channels, double temp_K,
                              const RedfieldOptions& options = {});

// Gibbs state exp(-H/kBT)/Z over the spectrum's energies, diagonal in the
// eigenbasis.
Matrix gibbs_state(const std::vector<double>& energies_GHz, double temp_K);

}  // namespace ctspin::redfield
