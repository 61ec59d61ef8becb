#pragma once

// Unit conventions used throughout the library:
//   energy / frequency : GHz (cyclic frequency, h = 1)
//   time               : ns  (so energy * time is dimensionless cycles; phases
//                             always carry an explicit 2*pi)
//   magnetic field     : T   (grids and CLI surfaces use mT and convert here)
//   temperature        : K
//   electric field     : V/m
//   distance           : Angstrom
//   rates              : 1/ns

namespace ctspin::units {

// 1 cm^-1 expressed in GHz.
inline constexpr double kCmInvGHz = 29.9792458;

// Bohr magneton, GHz per tesla.
inline constexpr double kMuB_GHzPerT = 13.9962449;

// Nuclear magneton, GHz per tesla.
inline constexpr double kMuN_GHzPerT = 7.6225932e-3;

// Boltzmann constant, GHz per kelvin.
inline constexpr double kB_GHzPerK = 20.836619;

// mu0 * muB^2 / (4 pi h) in GHz * Angstrom^3: point-dipole coupling scale for
// two moments of 1 muB at 1 Angstrom.  Derived from CODATA muB, h.
inline constexpr double kDipole_GHzAng3 = 12.98013;

inline constexpr double mT_to_T(double mt) { return mt * 1e-3; }
inline constexpr double T_to_mT(double t) { return t * 1e3; }
inline constexpr double GHz_to_MHz(double g) { return g * 1e3; }
inline constexpr double MHz_to_GHz(double m) { return m * 1e-3; }
inline constexpr double ns_to_us(double ns) { return ns * 1e-3; }
inline constexpr double us_to_ns(double us) { return us * 1e3; }

}  // namespace ctspin::units
