#pragma once

#include <array>
#include <string>
#include <vector>

#include "ctspin/linalg/matrix.hpp"
#include "ctspin/spin/system.hpp"

namespace ctspin::dimer {

using linalg::Matrix;

// Default site separation in Angstrom.  Calibrated so that the exchange
// splitting of the two middle operating levels at 12 mT (zero bias) is
// 0.09 MHz, which puts the quarter- and half-period SWAP times on either
// side of 5 us.  A declared calibration of the interaction scale, not a
// crystallographic distance.
inline constexpr double kDefaultSeparationAng = 61.245098061;

// Geometry of the coupled pair in the crystal frame.  Each site's easy axis
// is a unit director; the default is the antiparallel arrangement of an
// inversion-related pair with the separation perpendicular to the axes.
// Within the ground doublet only the axis component of J survives, so the
// point-dipole operator reduces to
//   D * [ (za.zb) - 3 (za.r^)(zb.r^) ] * Jz_a Jz_b
// with D = mu0 (gJ muB)^2 / (4 pi r^3).
struct DimerGeometry {
  std::array<double, 3> r_ang = {kDefaultSeparationAng, 0.0, 0.0};  // Angstrom
  std::array<double, 3> axis_a = {0.0, 0.0, 1.0};
  std::array<double, 3> axis_b = {0.0, 0.0, -1.0};
  double electrode_gap_m = 2e-3;  // voltage path for the site-b bias

  double separation_ang() const;
  // (za . zb) - 3 (za . r^)(zb . r^)
  double angular_factor() const;
};

// Throws std::invalid_argument for zero separation or non-unit axes.
void validate(const DimerGeometry& g);

// Point-dipole scale D = mu0 (g_j muB)^2 / (4 pi r^3) in GHz (multiplies the
// dimensionless Jz_a Jz_b product).
double dipolar_constant_GHz(const DimerGeometry& g, double g_j);

enum class CouplingMode {
  // Exchange form: a field-dependent scalar j(B) built from the operating
  // pair's moments multiplies the dipolar operator, so the coupling switches
  // off where the moments vanish.  Default.
  kEffectiveScalar,
  // Bare geometric point-dipole operator, field-independent coefficient.
  kFullDipolarOperator,
};

struct DimerSystem {
  spin::SpinSystemParams site_a;
  spin::SpinSystemParams site_b;  // the electric bias acts on this site only
  DimerGeometry geometry;
  CouplingMode mode = CouplingMode::kEffectiveScalar;
  double target_mI = -0.5;  // nuclear sector hosting the operating anticrossing

  double efield_Vm(double volts) const { return volts / geometry.electrode_gap_m; }
};

// Both sites from the named single-molecule preset (16-dimensional
// effective-doublet models only).
DimerSystem make_dimer(const std::string& preset_name = "experimental_9p1GHz");

// One diagonalized site together with its operating pair: the two levels of
// the target nuclear sector, identified through <Iz> (Iz commutes with the
// site Hamiltonian, so sectors are exact).
struct SiteStates {
  spin::Spectrum spec;
  int lo = -1, hi = -1;           // sorted-level indices of the pair
  double moment_lo = 0.0;         // <Jz> of the lower pair level
  double moment_hi = 0.0;         // <Jz> of the upper pair level
  double transition_GHz = 0.0;    // pair gap
};
SiteStates site_states(const spin::SpinSystemParams& p, double b_T, double e_Vm,
                       double target_mI);

// Scalar exchange coefficient (GHz) used by kEffectiveScalar:
//   j(B, V) = D * angular * <Jz>_a <Jz>_b / MJ^2
// with the signed upper-pair-level moments of the two sites; the
// normalization by the doublet MJ^2 = 16 makes the coefficient approach the
// bare point-dipole one when the moments saturate.
double exchange_scalar_GHz(const DimerSystem& d, double b_T, double volts);

// The dipolar interaction as a 256 x 256 operator in the product basis:
// prefactor * Jz_a (x) Jz_b where prefactor is D * angular (full mode) or
// j(B, V) (scalar mode).
Matrix dipolar_operator(const DimerSystem& d, double b_T, double volts);

// Composed Hamiltonian H_a (x) 1 + 1 (x) H_b(V) + H_dip at field b_T and
// site-b bias volts.  Throws std::invalid_argument unless both sites are
// 16-dimensional effective models.
Matrix compose(const DimerSystem& d, double b_T, double volts);

enum class Regime { kSymmetric, kAsymmetric, kMixed };
std::string to_string(Regime r);

// The four operating eigenstates, selected by maximal overlap with the
// product characters |00>, |01>, |10>, |11> built from the two sites'
// operating pairs (0 = lower pair level).  The character span is an exact
// invariant subspace of the composed Hamiltonian (Iz is conserved per site
// and each nuclear sector's electronic space is two-dimensional), so the
// operating energies and states come from the projected 4 x 4 block; the
// full 256-level solve is kept for the composed spectrum and for matching
// representative level indices.
//
// Regime of the middle pair, judged on the upper middle state:
//   asymmetric  a single product character describes it better than any
//               (anti)symmetric combination
//   symmetric   an (anti)symmetric combination describes it better, or the
//               pair is degenerate within 1e-9 GHz
//   mixed       neither description reaches half weight (a guard; cannot
//               occur for exact two-level sectors)
//
// delta_f_MHz = E(|10>) - E(|01>), signed by the labels, in the asymmetric
// regime; in the symmetric and mixed regimes the labels are not individually
// meaningful and the unsigned middle splitting is reported instead.
struct OperatingSpace {
  std::array<int, 4> levels;             // composed indices: 00, 01, 10, 11
                                         // (representatives when degenerate)
  std::array<double, 4> energies;        // GHz (middle pair ascending when
                                         // labels are ambiguous)
  std::array<double, 4> dominant_weight; // |<character|eigenstate>|^2
  Regime regime = Regime::kSymmetric;
  double delta_f_MHz = 0.0;
  double middle_splitting_MHz = 0.0;     // |E_mid_upper - E_mid_lower|
  SiteStates site_a, site_b;
  spin::Spectrum composed;
  Matrix characters;                     // 256 x 4 product characters
  Matrix operating_states;               // 256 x 4 exact operating states,
                                         // columns follow the slot order
};
OperatingSpace identify_operating_space(const DimerSystem& d, double b_T, double volts);

// Convenience: delta_f of the operating space at (B, V).
double delta_f_MHz(const DimerSystem& d, double b_T, double volts);

// Weights of a composed state on the electro-nuclear product basis formed by
// the single-site eigenlevels, each labeled by its nuclear sector <Iz> and
// its position (lo/hi) inside the sector, e.g. "-1/2:hi".  Row-major table,
// entries sum to 1 for a normalized state.
struct CompositionTable {
  std::vector<std::string> row_labels;  // site-a levels, energy order
  std::vector<std::string> col_labels;  // site-b levels
  std::vector<double> w;                // row-major, rows() x cols()
  int rows() const { return static_cast<int>(row_labels.size()); }
  int cols() const { return static_cast<int>(col_labels.size()); }
  double at(int ia, int ib) const { return w[static_cast<std::size_t>(ia) * cols() + ib]; }
  double total() const;
};
// Generic composed state (256 amplitudes in the product site basis).
CompositionTable composition_table(const SiteStates& a, const SiteStates& b,
                                   const linalg::Vector& psi);
// Operating state by slot (0..3 = |00>, |01>, |10>, |11> in the reported
// order); uses the exact projected states, which stay well-defined inside
// degenerate clusters of the composed spectrum.
CompositionTable composition_table(const OperatingSpace& os, int slot);

// Per-level exchange curves: j_i(B) = D * angular * <Jz>_i^a <Jz>_i^b / MJ^2
// for equal level indices on the two sites (MHz).
struct ExchangeProfile {
  std::vector<double> b_mT;
  std::vector<std::array<double, 16>> j_MHz;  // one row per field point
};
ExchangeProfile exchange_profile(const DimerSystem& d, double b_start_mT, double b_stop_mT,
                                 double b_step_mT, double volts = 0.0);

// Operating-space scan for one bias value.
struct DeltaFPoint {
  double b_mT = 0.0;
  double volts = 0.0;
  std::array<double, 4> energies_GHz{};  // 00, 01, 10, 11
  double deltaf_MHz = 0.0;
  Regime regime = Regime::kSymmetric;
};
std::vector<DeltaFPoint> delta_f_profile(const DimerSystem& d, double b_start_mT,
                                         double b_stop_mT, double b_step_mT, double volts);

}  // namespace ctspin::dimer
