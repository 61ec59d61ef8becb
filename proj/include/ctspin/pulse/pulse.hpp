#pragma once

#include <array>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "ctspin/dimer/dimer.hpp"
#include "ctspin/linalg/matrix.hpp"

namespace ctspin::pulse {

using linalg::cplx;
using linalg::Matrix;
using linalg::Vector;

// Default drive amplitude: a pi-pulse then lasts 1/(2 * 0.625 MHz) = 800 ns.
inline constexpr double kDefaultRabiMHz = 0.625;

// Default site-b bias while addressed one-qubit pulses run.  Calibrated so
// the partner-site transitions, detuned by |delta_f|, complete exactly two
// generalized Rabi cycles sqrt(delta_f^2 + Omega^2) = 2.5 MHz inside the
// 800 ns pi-pulse and hand their leakage back at the segment boundary.
inline constexpr double kDefaultOperatingVolts = 245.978585826;

// ---------------------------------------------------------------------------
// Projected working system

// The four operating levels at the working field in an explicit fixed basis:
// the zero-bias product characters |00>, |01>, |10>, |11>.  Their span is an
// exact invariant subspace of the composed dimer Hamiltonian for every bias
// (the bias only rotates the site-b electronic mixture inside its nuclear
// sector), so closed pulse dynamics reduce to 4 x 4 blocks without error.
class FourLevelSystem {
 public:
  FourLevelSystem(const dimer::DimerSystem& d, double b_T,
                  double volts_on = kDefaultOperatingVolts);

  const dimer::DimerSystem& dimer_system() const { return d_; }
  double field_T() const { return b_T_; }
  double volts_on() const { return volts_on_; }

  const Matrix& basis() const { return basis_; }          // 256 x 4
  const Matrix& drive() const { return drive_; }          // 4 x 4 projection
  // Projected Hamiltonian at a bias (cached; exact for every value).
  const Matrix& hamiltonian(double volts) const;
  // Character-energy difference E(to) - E(from) at a bias.
  double transition_GHz(int from, int to, double volts) const;
  // |<to|drive|from>|; zero for the 00<->11 and 01<->10 pairs.
  double drive_element(int from, int to) const;
  double middle_splitting_MHz() const;                    // at zero bias

  const dimer::OperatingSpace& space_off() const { return off_; }
  const dimer::OperatingSpace& space_on() const { return on_; }

 private:
  dimer::DimerSystem d_;
  double b_T_ = 0.0, volts_on_ = 0.0;
  dimer::OperatingSpace off_, on_;
  Matrix basis_, drive_;
  mutable std::map<double, Matrix> cache_;
};

// ---------------------------------------------------------------------------
// Sequences

struct MicrowavePulse {
  int from = 0, to = 2;              // operating slots
  double omega_MHz = kDefaultRabiMHz;
  double carrier_GHz = 0.0;          // <= 0: resonant with the transition
  double phase_rad = 0.0;
  double duration_ns = 0.0;          // <= 0: pi-pulse, 1/(2 omega)
};
struct EfieldStep {
  double volts = 0.0;
  double duration_ns = 0.0;          // may be zero: a pure switch
  double ramp_ns = 0.0;              // linear Hamiltonian ramp at the start
};
struct FreeEvolution {
  double duration_ns = 0.0;
};
using PulseSegment = std::variant<MicrowavePulse, EfieldStep, FreeEvolution>;

enum class Frame { kRotatingWave, kLab };

// Optional per-segment exponential damping in the operating basis:
// inter-character coherences decay with T2, excited populations feed the
// ground slot with T1.  A crude documented approximation, not a Redfield
// propagation.
struct Dissipation {
  double t1_us = 0.0;
  double t2_us = 0.0;
};

struct PulseSequence {
  std::vector<PulseSegment> segments;
  int initial_slot = 0;
  Vector initial_state;              // optional explicit 4-vector override
  Frame frame = Frame::kRotatingWave;
  std::optional<Dissipation> dissipation;
  double lab_dt_ns = 0.003;          // lab-frame integrator step
};

// Thrown in rotating-wave mode when a carrier sits further than three
// linewidths (3 Omega) from its target transition; the lab integrator has no
// such restriction.
class CarrierOffResonantError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SegmentLog {
  std::string kind;
  double t_start_ns = 0.0, duration_ns = 0.0;
  double volts = 0.0;                // governing bias after the segment
  double carrier_GHz = 0.0;          // resolved carrier (microwave only)
  std::array<double, 4> populations{};
};

struct GateResult {
  Vector psi;                        // final state (closed system)
  Matrix rho;                        // final density matrix (always filled)
  Matrix unitary;                    // realized 4 x 4 map (closed system)
  double unitary_defect = 0.0;       // max | U^dag U - 1 |
  bool closed = true;
  double total_duration_ns = 0.0;
  std::array<double, 4> populations{};
  double fidelity = -1.0;            // filled by protocol wrappers
  double concurrence = -1.0;         // filled by protocol wrappers
  std::vector<SegmentLog> log;
};

GateResult propagate_sequence(const FourLevelSystem& sys, const PulseSequence& seq);

// <target| rho |target> -- equals |<target|psi>|^2 for pure states and the
// Uhlmann fidelity against a pure target for mixed ones.
double overlap_fidelity(const Matrix& rho, const Vector& target);

// ---------------------------------------------------------------------------
// Calibration and protocol helpers

struct RabiScan {
  std::vector<double> t_ns, population;
  double pi_time_ns = 0.0;           // refined first population maximum
};
RabiScan rabi_scan(const FourLevelSystem& sys, int from, int to, double omega_MHz,
                   double t_max_ns, int n_points, double volts);

class NoOscillationError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SwapRecord {
  std::vector<double> t_ns, p_from, p_to;
  double frequency_MHz = 0.0;        // population oscillation frequency
  double period_ns = 0.0;
  double amplitude = 0.0;            // peak-to-peak population swing
  double half_rotation_ns = 0.0;     // quarter period: sqrt(SWAP)
  double full_transfer_ns = 0.0;     // half period: full SWAP
};
// Free evolution from |10> at zero bias; throws NoOscillationError when the
// population swing stays below resolution.
SwapRecord swap_oscillation(const FourLevelSystem& sys, double t_max_ns, int n_points);

enum class BellVariant { kPsi, kPhi };

struct BellProtocol {
  BellVariant variant = BellVariant::kPsi;
  double omega_MHz = kDefaultRabiMHz;
  double pi_duration_ns = 0.0;       // <= 0: 1/(2 omega)
  double swap_wait_ns = -1.0;        // < 0: quarter SWAP period; 0 skips
  Frame frame = Frame::kRotatingWave;
  std::optional<Dissipation> dissipation;
};

// The addressed sequence: bias on, pi-pulse |00> -> |10>, bias off, quarter
// SWAP wait; the Phi variant re-biases and adds the closing pi-pulse whose
// carrier serves the |10> -> |00> and |01> -> |11> transitions at once.
PulseSequence bell_sequence(const FourLevelSystem& sys, const BellProtocol& p);
GateResult bell_protocol(const FourLevelSystem& sys, const BellProtocol& p);

// Fidelity against the Bell family of the variant, maximized over the two
// single-qubit z-phases and the global phase: (|Psi|) uses rho's |01>/|10>
// block, (|Phi|) the |00>/|11> block.
double bell_fidelity(const Matrix& rho, BellVariant v);

// Wootters concurrence of a two-qubit density matrix in the operating basis.
// Throws std::invalid_argument unless rho is Hermitian, unit-trace and PSD
// within tolerance.
double concurrence(const Matrix& rho, double tol = 1e-8);

struct MonomerReport {
  double return_fidelity = 0.0;      // ground-state overlap, global phase out
  double rotation_turns = 0.0;       // accumulated drive angle / 2 pi
  bool compliant = false;            // return_fidelity > 0.99
  std::vector<double> detuning_MHz;  // per microwave segment
};
// Propagates the sequence on an isolated molecule (a two-level system at the
// working field).  biased_orientation selects the site-b orientation, whose
// gap follows the bias segments.
MonomerReport monomer_cancellation_check(const FourLevelSystem& sys,
                                         const PulseSequence& seq,
                                         bool biased_orientation = false);

}  // namespace ctspin::pulse
