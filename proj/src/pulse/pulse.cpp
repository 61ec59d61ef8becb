#include "ctspin/pulse/pulse.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>

#include "ctspin/linalg/eigh.hpp"
#include "ctspin/units.hpp"

namespace ctspin::pulse {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
// Excitation number of each operating slot: flips away from |00>.
constexpr std::array<double, 4> kExcitation = {0.0, 1.0, 1.0, 2.0};

// Exact segment propagator; the loose Hermiticity tolerance absorbs the
// rounding defect of projected blocks.
Matrix u_exact(const Matrix& h, double tau_ns) {
  return linalg::evolution_operator(h, tau_ns, 1e-6);
}

// Dominant frequency of a (anti)cosine-phased record sampled at the midpoint
// grid t_j = (j + 1/2) dt: discrete cosine transform of the mean-free signal,
// peak bin by |C|, parabolic refinement on the signed column.  Returns GHz
// for dt in ns.
double dominant_cosine_frequency_GHz(const std::vector<double>& samples, double dt_ns) {
  const int n = static_cast<int>(samples.size());
  double mean = 0.0;
  for (double p : samples) mean += p;
  mean /= n;
  std::vector<double> c(static_cast<std::size_t>(n), 0.0);
  for (int k = 1; k < n; ++k) {
    double s = 0.0;
    for (int j = 0; j < n; ++j)
      s += (samples[static_cast<std::size_t>(j)] - mean) *
           std::cos(std::numbers::pi * k * (j + 0.5) / n);
    c[static_cast<std::size_t>(k)] = s;
  }
  int best = 1;
  for (int k = 2; k < n; ++k)
    if (std::abs(c[static_cast<std::size_t>(k)]) > std::abs(c[static_cast<std::size_t>(best)]))
      best = k;
  const double sign = c[static_cast<std::size_t>(best)] < 0.0 ? -1.0 : 1.0;
  double kk = best;
  if (best > 1 && best < n - 1) {
    const double cm = sign * c[static_cast<std::size_t>(best - 1)];
    const double c0 = sign * c[static_cast<std::size_t>(best)];
    const double cp = sign * c[static_cast<std::size_t>(best + 1)];
    const double denom = cm - 2.0 * c0 + cp;
    if (denom < 0.0) kk += 0.5 * (cm - cp) / denom;
  }
  return kk / (2.0 * n * dt_ns);
}

// e^{-i 2 pi f n t} reduced mod full cycles before the trig calls.
cplx carrier_phase(double f_GHz, double n, double t_ns) {
  const double ph = -kTwoPi * n * std::fmod(f_GHz * t_ns, 1.0);
  return {std::cos(ph), std::sin(ph)};
}

struct ResolvedMw {
  double carrier_GHz = 0.0;
  double duration_ns = 0.0;
  double amp_GHz = 0.0;  // drive prefactor giving the requested Rabi rate
};

ResolvedMw resolve_mw(const FourLevelSystem& sys, const MicrowavePulse& m, double volts) {
  if (m.from < 0 || m.from > 3 || m.to < 0 || m.to > 3 || m.from == m.to)
    throw std::invalid_argument("pulse: microwave target slots must be distinct and 0..3");
  if (!(m.omega_MHz > 0.0))
    throw std::invalid_argument("pulse: microwave amplitude must be positive");
  const double el = sys.drive_element(m.from, m.to);
  if (el < 1e-9)
    throw std::invalid_argument("pulse: transition carries no drive matrix element");
  ResolvedMw r;
  const double gap = std::abs(sys.transition_GHz(m.from, m.to, volts));
  r.carrier_GHz = m.carrier_GHz > 0.0 ? m.carrier_GHz : gap;
  r.duration_ns = m.duration_ns > 0.0 ? m.duration_ns : 1e3 / (2.0 * m.omega_MHz);
  r.amp_GHz = units::MHz_to_GHz(m.omega_MHz) / el;
  return r;
}

class Engine {
 public:
  Engine(const FourLevelSystem& sys, const PulseSequence& seq) : sys_(sys), seq_(seq) {
    if (seq.frame == Frame::kLab && !(seq.lab_dt_ns > 0.0))
      throw std::invalid_argument("pulse: lab-frame step must be positive");
    closed_ = !seq.dissipation.has_value();
    Vector psi0;
    if (!seq.initial_state.empty()) {
      if (seq.initial_state.size() != 4)
        throw std::invalid_argument("pulse: initial state must have 4 components");
      psi0 = seq.initial_state;
      const double n = linalg::norm(psi0);
      if (std::abs(n - 1.0) > 1e-6)
        throw std::invalid_argument("pulse: initial state must be normalized");
      for (auto& a : psi0) a /= n;
    } else {
      if (seq.initial_slot < 0 || seq.initial_slot > 3)
        throw std::invalid_argument("pulse: initial slot must be 0..3");
      psi0.assign(4, 0.0);
      psi0[static_cast<std::size_t>(seq.initial_slot)] = 1.0;
    }
    if (closed_) {
      psi_ = std::move(psi0);
      u_tot_ = Matrix::identity(4);
    } else {
      rho_ = Matrix(4, 4);
      for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
          rho_(i, j) = psi0[static_cast<std::size_t>(i)] *
                       std::conj(psi0[static_cast<std::size_t>(j)]);
    }
  }

  void run(GateResult& out) {
    for (const auto& seg : seq_.segments) {
      std::visit([&](const auto& s) { handle(s, out); }, seg);
    }
    finalize(out);
  }

 private:
  void apply(const Matrix& u) {
    if (closed_) {
      psi_ = linalg::matvec(u, psi_);
      u_tot_ = linalg::matmul(u, u_tot_);
    } else {
      rho_ = linalg::matmul(u, linalg::matmul(rho_, u.adjoint()));
    }
  }

  // Crude exponential damping in the operating basis: coherences with T2,
  // excited populations feeding the ground slot with T1.
  void damp(double tau_ns) {
    if (closed_ || tau_ns <= 0.0) return;
    const auto& d = *seq_.dissipation;
    const double tau_us = units::ns_to_us(tau_ns);
    const double f2 = d.t2_us > 0.0 ? std::exp(-tau_us / d.t2_us) : 1.0;
    const double f1 = d.t1_us > 0.0 ? std::exp(-tau_us / d.t1_us) : 1.0;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j)
        if (i != j) rho_(i, j) *= f2;
    for (int i = 1; i < 4; ++i) {
      const cplx lost = rho_(i, i) * (1.0 - f1);
      rho_(i, i) -= lost;
      rho_(0, 0) += lost;
    }
  }

  void evolve_static(const Matrix& h, double tau_ns) {
    if (tau_ns <= 0.0) return;
    apply(u_exact(h, tau_ns));
    t_ns_ += tau_ns;
    damp(tau_ns);
  }

  void handle(const FreeEvolution& s, GateResult& out) {
    if (!(s.duration_ns > 0.0))
      throw std::invalid_argument("pulse: free-evolution duration must be positive");
    evolve_static(sys_.hamiltonian(volts_), s.duration_ns);
    log(out, "free", s.duration_ns, 0.0);
  }

  void handle(const EfieldStep& s, GateResult& out) {
    if (s.duration_ns < 0.0 || s.ramp_ns < 0.0 || s.ramp_ns > s.duration_ns)
      throw std::invalid_argument("pulse: bias segment needs 0 <= ramp <= duration");
    if (s.ramp_ns > 0.0) {
      // The projected Hamiltonian is linear in the bias, so a linear ramp is
      // a linear matrix path; midpoint-exponential substeps keep the
      // noncommutativity error negligible.
      const Matrix& h0 = sys_.hamiltonian(volts_);
      const Matrix& h1 = sys_.hamiltonian(s.volts);
      const int n = std::max(16, static_cast<int>(std::ceil(s.ramp_ns / 0.05)));
      const double dt = s.ramp_ns / n;
      for (int k = 0; k < n; ++k) {
        const double x = (k + 0.5) / n;
        Matrix h = h0 * (1.0 - x);
        h += h1 * x;
        apply(u_exact(h, dt));
      }
      t_ns_ += s.ramp_ns;
      damp(s.ramp_ns);
    }
    volts_ = s.volts;
    evolve_static(sys_.hamiltonian(volts_), s.duration_ns - s.ramp_ns);
    log(out, "efield", s.duration_ns, 0.0);
  }

  void handle(const MicrowavePulse& m, GateResult& out) {
    const ResolvedMw r = resolve_mw(sys_, m, volts_);
    const double gap = std::abs(sys_.transition_GHz(m.from, m.to, volts_));
    if (seq_.frame == Frame::kRotatingWave) {
      const double linewidth = units::MHz_to_GHz(m.omega_MHz);
      if (std::abs(r.carrier_GHz - gap) > 3.0 * linewidth)
        throw CarrierOffResonantError(
            "pulse: carrier sits more than three linewidths from the target "
            "transition; use the lab frame");
      rwa_pulse(m, r);
    } else {
      lab_pulse(m, r);
    }
    log(out, "microwave", r.duration_ns, r.carrier_GHz);
  }

  void rwa_pulse(const MicrowavePulse& m, const ResolvedMw& r) {
    // Excitation-number frame at the carrier: the static part keeps only its
    // flip-conserving block (diagonal plus the 01/10 exchange); static
    // single-flip elements, like the bias-induced site mixing, oscillate at
    // the carrier in this frame and average out, as do the diagonal drive
    // terms.  The drive contributes its co-rotating half on the single-flip
    // elements.
    Matrix ht = sys_.hamiltonian(volts_);
    const Matrix& d = sys_.drive();
    const cplx down = {std::cos(m.phase_rad), -std::sin(m.phase_rad)};
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b) {
        const double dn = kExcitation[a] - kExcitation[b];
        if (dn == 0.0) continue;
        ht(a, b) = 0.0;
        if (dn == 1.0) ht(a, b) = 0.5 * r.amp_GHz * down * d(a, b);
        else if (dn == -1.0) ht(a, b) = 0.5 * r.amp_GHz * std::conj(down) * d(a, b);
      }
    for (int k = 0; k < 4; ++k) ht(k, k) -= r.carrier_GHz * kExcitation[k];
    Matrix u = u_exact(ht, r.duration_ns);
    // Unwind the frame at absolute time on both ends.
    const double t1 = t_ns_ + r.duration_ns;
    for (int a = 0; a < 4; ++a) {
      const cplx ph1 = carrier_phase(r.carrier_GHz, kExcitation[a], t1);
      for (int b = 0; b < 4; ++b) {
        const cplx ph0 = carrier_phase(r.carrier_GHz, kExcitation[b], t_ns_);
        u(a, b) *= ph1 * std::conj(ph0);
      }
    }
    apply(u);
    t_ns_ += r.duration_ns;
    damp(r.duration_ns);
  }

  void lab_pulse(const MicrowavePulse& m, const ResolvedMw& r) {
    const Matrix& hv = sys_.hamiltonian(volts_);
    const Matrix& d = sys_.drive();
    const int n = std::max(1, static_cast<int>(std::ceil(r.duration_ns / seq_.lab_dt_ns)));
    const double dt = r.duration_ns / n;
    for (int k = 0; k < n; ++k) {
      const double tm = t_ns_ + (k + 0.5) * dt;
      const double c =
          r.amp_GHz * std::cos(kTwoPi * std::fmod(r.carrier_GHz * tm, 1.0) + m.phase_rad);
      Matrix h = hv;
      h += d * c;
      apply(u_exact(h, dt));
    }
    t_ns_ += r.duration_ns;
    damp(r.duration_ns);
  }

  void log(GateResult& out, const char* kind, double dur, double carrier) {
    SegmentLog l;
    l.kind = kind;
    l.t_start_ns = t_ns_ - dur;
    l.duration_ns = dur;
    l.volts = volts_;
    l.carrier_GHz = carrier;
    l.populations = populations();
    out.log.push_back(std::move(l));
  }

  std::array<double, 4> populations() const {
    std::array<double, 4> p{};
    for (int i = 0; i < 4; ++i)
      p[static_cast<std::size_t>(i)] =
          closed_ ? std::norm(psi_[static_cast<std::size_t>(i)]) : rho_(i, i).real();
    return p;
  }

  void finalize(GateResult& out) {
    out.closed = closed_;
    out.total_duration_ns = t_ns_;
    out.populations = populations();
    if (closed_) {
      out.psi = psi_;
      out.rho = Matrix(4, 4);
      for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
          out.rho(i, j) = psi_[static_cast<std::size_t>(i)] *
                          std::conj(psi_[static_cast<std::size_t>(j)]);
      out.unitary = u_tot_;
      Matrix defect = linalg::matmul(u_tot_.adjoint(), u_tot_);
      defect -= Matrix::identity(4);
      out.unitary_defect = defect.norm_max();
    } else {
      out.rho = rho_;
    }
  }

  const FourLevelSystem& sys_;
  const PulseSequence& seq_;
  bool closed_ = true;
  Vector psi_;
  Matrix rho_, u_tot_;
  double t_ns_ = 0.0;
  double volts_ = 0.0;
};

}  // namespace

// ---------------------------------------------------------------------------
// FourLevelSystem

FourLevelSystem::FourLevelSystem(const dimer::DimerSystem& d, double b_T, double volts_on)
    : d_(d), b_T_(b_T), volts_on_(volts_on) {
  off_ = dimer::identify_operating_space(d_, b_T_, 0.0);
  on_ = dimer::identify_operating_space(d_, b_T_, volts_on_);
  basis_ = off_.characters;

  // Microwave coupling: the oscillating field addresses the moment along the
  // shared axis direction, so each site enters with its axis projection.
  const Matrix jza = spin::electronic_jz(d_.site_a);
  const Matrix jzb = spin::electronic_jz(d_.site_b);
  const Matrix id = Matrix::identity(16);
  Matrix d256 = linalg::kron(jza, id) * d_.geometry.axis_a[2];
  d256 += linalg::kron(id, jzb) * d_.geometry.axis_b[2];
  drive_ = linalg::matmul(basis_.adjoint(), linalg::matmul(d256, basis_));
}

const Matrix& FourLevelSystem::hamiltonian(double volts) const {
  auto it = cache_.find(volts);
  if (it != cache_.end()) return it->second;
  const Matrix h = dimer::compose(d_, b_T_, volts);
  Matrix h4 = linalg::matmul(basis_.adjoint(), linalg::matmul(h, basis_));
  return cache_.emplace(volts, std::move(h4)).first->second;
}

double FourLevelSystem::transition_GHz(int from, int to, double volts) const {
  if (from < 0 || from > 3 || to < 0 || to > 3)
    throw std::invalid_argument("pulse: slot indices must be 0..3");
  const Matrix& h = hamiltonian(volts);
  return (h(to, to) - h(from, from)).real();
}

double FourLevelSystem::drive_element(int from, int to) const {
  if (from < 0 || from > 3 || to < 0 || to > 3)
    throw std::invalid_argument("pulse: slot indices must be 0..3");
  return std::abs(drive_(to, from));
}

double FourLevelSystem::middle_splitting_MHz() const {
  return off_.middle_splitting_MHz;
}

// ---------------------------------------------------------------------------
// Propagation and helpers

GateResult propagate_sequence(const FourLevelSystem& sys, const PulseSequence& seq) {
  if (seq.segments.empty())
    throw std::invalid_argument("pulse: sequence must contain at least one segment");
  GateResult out;
  Engine e(sys, seq);
  e.run(out);
  return out;
}

double overlap_fidelity(const Matrix& rho, const Vector& target) {
  if (rho.rows() != rho.cols() || static_cast<std::size_t>(rho.rows()) != target.size())
    throw std::invalid_argument("pulse: fidelity dimensions mismatch");
  cplx f = 0.0;
  for (int i = 0; i < rho.rows(); ++i)
    for (int j = 0; j < rho.cols(); ++j)
      f += std::conj(target[static_cast<std::size_t>(i)]) * rho(i, j) *
           target[static_cast<std::size_t>(j)];
  return f.real();
}

RabiScan rabi_scan(const FourLevelSystem& sys, int from, int to, double omega_MHz,
                   double t_max_ns, int n_points, double volts) {
  if (n_points < 8 || !(t_max_ns > 0.0))
    throw std::invalid_argument("pulse: Rabi scan needs t_max > 0 and >= 8 points");
  RabiScan scan;
  const double dt = t_max_ns / n_points;
  for (int k = 0; k < n_points; ++k) {
    PulseSequence seq;
    seq.initial_slot = from;
    seq.segments.push_back(EfieldStep{volts, 0.0, 0.0});
    MicrowavePulse m;
    m.from = from;
    m.to = to;
    m.omega_MHz = omega_MHz;
    m.duration_ns = (k + 0.5) * dt;
    seq.segments.push_back(m);
    const auto res = propagate_sequence(sys, seq);
    scan.t_ns.push_back(m.duration_ns);
    scan.population.push_back(res.populations[static_cast<std::size_t>(to)]);
  }
  // The record oscillates at the effective Rabi rate; its fringe maxima are
  // flat, so the pi time comes from the fitted frequency instead.
  const double f = dominant_cosine_frequency_GHz(scan.population, dt);
  if (!(f > 0.0))
    throw NoOscillationError("pulse: Rabi record shows no oscillation");
  scan.pi_time_ns = 1.0 / (2.0 * f);
  return scan;
}

SwapRecord swap_oscillation(const FourLevelSystem& sys, double t_max_ns, int n_points) {
  if (n_points < 16 || !(t_max_ns > 0.0))
    throw std::invalid_argument("pulse: swap record needs t_max > 0 and >= 16 points");
  SwapRecord rec;
  const Matrix& h = sys.hamiltonian(0.0);
  auto eg = linalg::eigh(h, 1e-6);
  const double dt = t_max_ns / n_points;
  for (int j = 0; j < n_points; ++j) {
    const double t = (j + 0.5) * dt;
    cplx a01 = 0.0, a10 = 0.0;
    for (int k = 0; k < 4; ++k) {
      const double ph = -kTwoPi * eg.values[k] * t;
      const cplx e = cplx{std::cos(ph), std::sin(ph)} * std::conj(eg.vectors(2, k));
      a01 += eg.vectors(1, k) * e;
      a10 += eg.vectors(2, k) * e;
    }
    rec.t_ns.push_back(t);
    rec.p_from.push_back(std::norm(a10));
    rec.p_to.push_back(std::norm(a01));
  }
  const auto [lo, hi] = std::minmax_element(rec.p_from.begin(), rec.p_from.end());
  rec.amplitude = *hi - *lo;
  if (rec.amplitude < 1e-6)
    throw NoOscillationError("pulse: population swing below resolution; "
                             "the exchange splitting is too small to observe");
  const double freq_GHz = dominant_cosine_frequency_GHz(rec.p_from, dt);
  rec.frequency_MHz = units::GHz_to_MHz(freq_GHz);
  rec.period_ns = 1.0 / freq_GHz;
  rec.full_transfer_ns = rec.period_ns / 2.0;
  rec.half_rotation_ns = rec.period_ns / 4.0;
  return rec;
}

PulseSequence bell_sequence(const FourLevelSystem& sys, const BellProtocol& p) {
  if (!(p.omega_MHz > 0.0))
    throw std::invalid_argument("pulse: Bell protocol needs a positive drive amplitude");
  const double split = sys.middle_splitting_MHz();
  if (split < 1e-9)
    throw NoOscillationError("pulse: Bell protocol needs a nonzero exchange splitting");
  const double pi_dur = p.pi_duration_ns > 0.0 ? p.pi_duration_ns : 1e3 / (2.0 * p.omega_MHz);
  const double wait = p.swap_wait_ns >= 0.0 ? p.swap_wait_ns : 1e3 / (4.0 * split);

  PulseSequence seq;
  seq.frame = p.frame;
  seq.dissipation = p.dissipation;
  seq.initial_slot = 0;
  seq.segments.push_back(EfieldStep{sys.volts_on(), 0.0, 0.0});
  MicrowavePulse up;
  up.from = 0;
  up.to = 2;
  up.omega_MHz = p.omega_MHz;
  up.duration_ns = pi_dur;
  seq.segments.push_back(up);
  seq.segments.push_back(EfieldStep{0.0, 0.0, 0.0});
  if (wait > 0.0) seq.segments.push_back(FreeEvolution{wait});
  if (p.variant == BellVariant::kPhi) {
    seq.segments.push_back(EfieldStep{sys.volts_on(), 0.0, 0.0});
    MicrowavePulse down = up;
    down.from = 2;
    down.to = 0;
    seq.segments.push_back(down);
    seq.segments.push_back(EfieldStep{0.0, 0.0, 0.0});
  }
  return seq;
}

GateResult bell_protocol(const FourLevelSystem& sys, const BellProtocol& p) {
  GateResult res = propagate_sequence(sys, bell_sequence(sys, p));
  res.fidelity = bell_fidelity(res.rho, p.variant);
  res.concurrence = concurrence(res.rho);
  return res;
}

double bell_fidelity(const Matrix& rho, BellVariant v) {
  if (rho.rows() != 4 || rho.cols() != 4)
    throw std::invalid_argument("pulse: Bell fidelity needs a 4 x 4 density matrix");
  const int a = v == BellVariant::kPsi ? 1 : 0;
  const int b = v == BellVariant::kPsi ? 2 : 3;
  const double f = 0.5 * (rho(a, a).real() + rho(b, b).real()) + std::abs(rho(a, b));
  return std::clamp(f, 0.0, 1.0);
}

double concurrence(const Matrix& rho, double tol) {
  if (rho.rows() != 4 || rho.cols() != 4)
    throw std::invalid_argument("pulse: concurrence needs a 4 x 4 density matrix");
  if (rho.hermiticity_defect() > tol)
    throw std::invalid_argument("pulse: concurrence input is not Hermitian");
  if (std::abs(rho.trace().real() - 1.0) > 1e-6 || std::abs(rho.trace().imag()) > tol)
    throw std::invalid_argument("pulse: concurrence input must have unit trace");
  auto eg = linalg::eigh(rho, tol);
  if (eg.values.front() < -tol)
    throw std::invalid_argument("pulse: concurrence input is not positive semidefinite");

  Matrix sqrt_rho(4, 4);
  for (int k = 0; k < 4; ++k) {
    const double s = std::sqrt(std::max(0.0, eg.values[k]));
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j)
        sqrt_rho(i, j) += eg.vectors(i, k) * s * std::conj(eg.vectors(j, k));
  }
  // Spin flip (sigma_y x sigma_y) conj(rho) (sigma_y x sigma_y).
  Matrix flip(4, 4);
  flip(0, 3) = -1.0;
  flip(1, 2) = 1.0;
  flip(2, 1) = 1.0;
  flip(3, 0) = -1.0;
  const Matrix rho_tilde = linalg::matmul(flip, linalg::matmul(rho.conjugate(), flip));
  const Matrix m = linalg::matmul(sqrt_rho, linalg::matmul(rho_tilde, sqrt_rho));
  auto em = linalg::eigh(m, 1e-6);
  std::array<double, 4> lam{};
  for (int k = 0; k < 4; ++k)
    lam[static_cast<std::size_t>(k)] = std::sqrt(std::max(0.0, em.values[k]));
  std::sort(lam.begin(), lam.end(), std::greater<>());
  return std::max(0.0, lam[0] - lam[1] - lam[2] - lam[3]);
}

MonomerReport monomer_cancellation_check(const FourLevelSystem& sys,
                                         const PulseSequence& seq,
                                         bool biased_orientation) {
  if (seq.segments.empty())
    throw std::invalid_argument("pulse: sequence must contain at least one segment");
  const auto& d = sys.dimer_system();
  std::map<double, double> gap_cache;
  auto gap = [&](double volts) {
    auto it = gap_cache.find(volts);
    if (it != gap_cache.end()) return it->second;
    const auto& site = biased_orientation ? d.site_b : d.site_a;
    const double e = biased_orientation ? d.efield_Vm(volts) : 0.0;
    const double g =
        dimer::site_states(site, sys.field_T(), e, d.target_mI).transition_GHz;
    gap_cache.emplace(volts, g);
    return g;
  };

  MonomerReport rep;
  Vector psi = {1.0, 0.0};
  double t = 0.0, volts = 0.0;

  auto free_phase = [&](double geff, double tau) {
    const double ph = -kTwoPi * std::fmod(geff * tau, 1.0);
    psi[1] *= cplx{std::cos(ph), std::sin(ph)};
    t += tau;
  };

  for (const auto& seg : seq.segments) {
    if (std::holds_alternative<FreeEvolution>(seg)) {
      const double tau = std::get<FreeEvolution>(seg).duration_ns;
      if (!(tau > 0.0))
        throw std::invalid_argument("pulse: free-evolution duration must be positive");
      free_phase(gap(volts), tau);
    } else if (std::holds_alternative<EfieldStep>(seg)) {
      const auto& s = std::get<EfieldStep>(seg);
      if (s.duration_ns < 0.0 || s.ramp_ns < 0.0 || s.ramp_ns > s.duration_ns)
        throw std::invalid_argument("pulse: bias segment needs 0 <= ramp <= duration");
      if (s.ramp_ns > 0.0) free_phase(0.5 * (gap(volts) + gap(s.volts)), s.ramp_ns);
      volts = s.volts;
      free_phase(gap(volts), s.duration_ns - s.ramp_ns);
    } else {
      const auto& m = std::get<MicrowavePulse>(seg);
      const ResolvedMw r = resolve_mw(sys, m, volts);
      const double det = gap(volts) - r.carrier_GHz;
      rep.detuning_MHz.push_back(units::GHz_to_MHz(det));
      Matrix h(2, 2);
      h(1, 1) = det;
      const double om = units::MHz_to_GHz(m.omega_MHz);
      h(0, 1) = 0.5 * om * cplx{std::cos(m.phase_rad), std::sin(m.phase_rad)};
      h(1, 0) = std::conj(h(0, 1));
      Matrix u = u_exact(h, r.duration_ns);
      const double t1 = t + r.duration_ns;
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
          u(a, b) *= carrier_phase(r.carrier_GHz, a, t1) *
                     std::conj(carrier_phase(r.carrier_GHz, b, t));
      psi = linalg::matvec(u, psi);
      t = t1;
      rep.rotation_turns += m.omega_MHz * r.duration_ns * 1e-3;
    }
  }
  rep.return_fidelity = std::norm(psi[0]);
  rep.compliant = rep.return_fidelity > 0.99;
  return rep;
}

}  // namespace ctspin::pulse
