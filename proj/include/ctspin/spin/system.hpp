#pragma once

#include <array>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "ctspin/linalg/eigh.hpp"
#include "ctspin/linalg/matrix.hpp"
#include "ctspin/spin/angular.hpp"

namespace ctspin::spin {

using linalg::Matrix;

enum class ModelKind { kFullJ, kEffectiveDoublet };

// Crystal-field coefficients in GHz, keyed by (k, q).  The reserved key
// (0, 0) holds the effective-doublet tunneling gap Delta instead of a
// Stevens coefficient; it is only legal in the effective model, and ranked
// entries are only legal in the full model.
struct CrystalField {
  std::map<std::pair<int, int>, double> b;

  double& at(int k, int q) { return b[{k, q}]; }
  double get(int k, int q) const {
    auto it = b.find({k, q});
    return it == b.end() ? 0.0 : it->second;
  }
};

// Linear response of the crystal-field entries to an applied electric field,
// GHz per (V/m), keyed like CrystalField ((0,0) = gap response in the
// effective model).
struct EFieldResponse {
  std::map<std::pair<int, int>, double> db_dE;
  double get(int k, int q) const {
    auto it = db_dE.find({k, q});
    return it == db_dE.end() ? 0.0 : it->second;
  }
};

struct SpinSystemParams {
  ModelKind model = ModelKind::kEffectiveDoublet;
  AngularMomentumSpec electronic{8.0};  // total angular momentum J
  AngularMomentumSpec nuclear{3.5};     // nuclear spin I
  double g_j = 1.25;                    // electronic g-factor
  double a_z_GHz = 0.0;                 // axial hyperfine constant
  CrystalField cf;
  EFieldResponse sec;            // spin-electric coupling
  double electrode_gap_m = 2e-3; // converts a voltage to a field V/m

  // Optional terms, disabled by default.
  bool hyperfine_isotropic = false;  // use a_z for the transverse terms too
  bool nuclear_zeeman = false;
  double g_i = 1.192;        // nuclear g-factor (only with nuclear_zeeman)
  double p_quad_GHz = 0.0;   // quadrupole P * (Iz^2 - I(I+1)/3), 0 disables

  int dim() const {
    const int e = model == ModelKind::kEffectiveDoublet ? 2 : electronic.dim();
    return e * nuclear.dim();
  }
  double tunneling_gap() const { return cf.get(0, 0); }
  double efield_from_voltage(double volts) const { return volts / electrode_gap_m; }
};

// Validates the parameter set (model/coefficient-set consistency, positive
// dimensions).  Throws std::invalid_argument with a diagnostic on failure.
void validate(const SpinSystemParams& p);

// Electro-nuclear Hamiltonian at magnetic field b_T (tesla, lab frame
// components {x, y, z}) and electric field e_Vm (V/m along the switching
// axis).  Energies in GHz.
Matrix build_hamiltonian(const SpinSystemParams& p, const std::array<double, 3>& b_T,
                         double e_Vm = 0.0);

// Convenience: field along z only.
Matrix build_hamiltonian_z(const SpinSystemParams& p, double bz_T, double e_Vm = 0.0);

struct Spectrum {
  std::vector<double> energies;        // ascending, GHz
  Matrix states;                       // columns are eigenvectors in the product basis
  std::vector<std::string> basis_labels;  // product-basis labels "MJ,mI"
  int dim() const { return static_cast<int>(energies.size()); }
  double gap(int lower, int upper) const { return energies[upper] - energies[lower]; }
};

Spectrum diagonalize(const SpinSystemParams& p, const std::array<double, 3>& b_T, double e_Vm = 0.0);
Spectrum diagonalize_z(const SpinSystemParams& p, double bz_T, double e_Vm = 0.0);

std::vector<std::string> basis_labels(const SpinSystemParams& p);

// Electronic Jz in the product basis of the model (effective model: the
// doublet is the |MJ = +4>, |MJ = -4> pair, so Jz = 4 sigma_z x 1).
Matrix electronic_jz(const SpinSystemParams& p);

// <level| Jz |level> for a diagonalized system (levels are 0-based here;
// user-facing surfaces use 1-based indices).
double magnetic_moment(const SpinSystemParams& p, const Spectrum& s, int level);

// Squared weights of an eigenstate on the two electronic doublet components
// after tracing the nuclear label: {|alpha|^2, |beta|^2} for the |+4> / |-4>
// shares.  Meaningful for anticrossing pairs where the state lives in one
// nuclear sector.
std::array<double, 2> doublet_admixture(const SpinSystemParams& p, const Spectrum& s, int level);

// --- presets ------------------------------------------------------------

// Named parameter sets.  Throws std::invalid_argument for unknown names.
//   "experimental_9p1GHz"  effective doublet, 9.1 GHz gap
//   "calculated_11GHz"     effective doublet, 11 GHz gap
//   "full_j8_relax"        full J = 8 model with a quartic double-well
//                          crystal field (barrier ~34.5 cm^-1) used by the
//                          relaxation pipeline
SpinSystemParams preset(const std::string& name);
std::vector<std::string> preset_names();

}  // namespace ctspin::spin
