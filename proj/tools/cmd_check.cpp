#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "ctspin/bath/spectral.hpp"
#include "ctspin/ct/anticrossing.hpp"
#include "ctspin/linalg/eigh.hpp"
#include "ctspin/pulse/pulse.hpp"
#include "ctspin/redfield/propagate.hpp"
#include "ctspin/redfield/tensor.hpp"
#include "ctspin/units.hpp"
#include "commands.hpp"

using ctspin::io::Table;
using ctspin::linalg::Matrix;

namespace {

struct CheckList {
  std::vector<std::string> lines;
  int failed = 0;

  // Passes when |value| < bound.
  void bound(const std::string& name, double value, double limit) {
    const bool ok = std::abs(value) < limit;
    if (!ok) ++failed;
    lines.push_back(std::string(ok ? "ok   " : "FAIL ") + name + "  (" + Table::num(value) +
                    " vs < " + Table::num(limit) + ")");
  }
};

}  // namespace

// Fast invariant suite over every layer: Hamiltonian structure, eigensolver,
// bath statistics, relaxation tensor, coupled-pair symmetry and pulse
// propagation.  Exit 0 when everything holds, 1 otherwise.
int run_check(const RunContext& ctx) {
  namespace sp = ctspin::spin;
  namespace rf = ctspin::redfield;
  namespace pl = ctspin::pulse;
  using ctspin::units::kB_GHzPerK;

  CheckList cl;
  const auto params = spin_params(ctx, ctx.preset);

  // Hamiltonian structure.
  const Matrix h0 = sp::build_hamiltonian_z(params, 0.0);
  const Matrix h1 = sp::build_hamiltonian_z(params, 0.012);
  const Matrix h2 = sp::build_hamiltonian_z(params, 0.024);
  cl.bound("hamiltonian_hermitian", h1.hermiticity_defect(), 1e-10);
  cl.bound("zeeman_linearity", ((h2 - h1) - (h1 - h0)).norm_max(), 1e-10);
  const Matrix e0 = sp::build_hamiltonian_z(params, 0.012, 0.0);
  const Matrix e1 = sp::build_hamiltonian_z(params, 0.012, 5e4);
  const Matrix e2 = sp::build_hamiltonian_z(params, 0.012, 1e5);
  cl.bound("efield_linearity", ((e2 - e1) - (e1 - e0)).norm_max(), 1e-10);

  // Eigensolver and admixture weights.
  const auto s = sp::diagonalize_z(params, 0.012);
  const Matrix gram = ctspin::linalg::matmul(s.states.adjoint(), s.states);
  cl.bound("eigenbasis_orthonormal", (gram - Matrix::identity(gram.rows())).norm_max(), 1e-12);
  const auto w_lo = sp::doublet_admixture(params, s, 7);
  const auto w_hi = sp::doublet_admixture(params, s, 8);
  cl.bound("admixture_unity_lo", w_lo[0] + w_lo[1] - 1.0, 1e-10);
  cl.bound("admixture_unity_hi", w_hi[0] + w_hi[1] - 1.0, 1e-10);

  // Bath statistics: detailed balance at 5 GHz / 5 K.
  const ctspin::bath::SpectralDensity sd = ctspin::bath::OhmicCutoff{0.02, 50.0};
  const double ratio = ctspin::bath::bath_rate(sd, -5.0, 5.0) / ctspin::bath::bath_rate(sd, 5.0, 5.0);
  cl.bound("bath_detailed_balance", ratio - std::exp(-5.0 / (kB_GHzPerK * 5.0)), 1e-12);

  // Relaxation tensor: derivation identities and the Gibbs fixed point.
  const std::vector<rf::CouplingChannel> channels{{sp::electronic_jz(params), sd}};
  const auto tensor = rf::build_redfield(s, channels, 5.0, {});
  cl.bound("redfield_trace_rule", tensor.trace_defect(), 1e-10);
  cl.bound("redfield_hermiticity", tensor.hermiticity_defect(), 1e-10);
  const int dim = s.dim();
  Matrix gibbs(dim, dim);
  double z = 0.0;
  for (int k = 0; k < dim; ++k) z += std::exp(-(s.energies[k] - s.energies[0]) / (kB_GHzPerK * 5.0));
  for (int k = 0; k < dim; ++k)
    gibbs(k, k) = std::exp(-(s.energies[k] - s.energies[0]) / (kB_GHzPerK * 5.0)) / z;
  const auto traj = rf::propagate(tensor, gibbs, {0.0, 1e3, 1e5});
  double gibbs_dev = 0.0;
  for (const auto& rho : traj.rho) gibbs_dev = std::max(gibbs_dev, (rho - gibbs).norm_max());
  cl.bound("gibbs_stationary", gibbs_dev, 1e-6);

  // Coupled pair: the frequency difference closes at the protected field.
  const auto d = dimer_from(ctx);
  const auto cts = ctspin::ct::find_anticrossings(d.site_a, {7, 8}, 16.0, 32.0, 0.5);
  if (cts.empty()) {
    cl.lines.push_back("FAIL symmetric_point_found  (no gap minimum in 16..32 mT)");
    ++cl.failed;
  } else {
    cl.bound("symmetric_point_delta_f_MHz",
             ctspin::dimer::delta_f_MHz(d, cts.front().b_min_mT * 1e-3, 0.0), 1e-6);
  }

  // Four-level projection and pulse propagation.
  const pl::FourLevelSystem sys(d, 0.012);
  const double ref = sys.drive_element(0, 2);
  double drive_dev = 0.0;
  for (auto [a, b] : {std::pair{0, 1}, {1, 3}, {2, 3}})
    drive_dev = std::max(drive_dev, std::abs(sys.drive_element(a, b) - ref));
  cl.bound("drive_single_flip_uniform", drive_dev / ref, 1e-9);
  cl.bound("drive_double_flip_dark",
           std::max(sys.drive_element(0, 3), sys.drive_element(1, 2)), 1e-12);

  pl::PulseSequence seq;
  seq.segments = {pl::EfieldStep{sys.volts_on(), 0.0, 0.0}, pl::MicrowavePulse{}};
  const auto gate = pl::propagate_sequence(sys, seq);
  cl.bound("pulse_unitarity_defect", gate.unitary_defect, 1e-9);
  cl.bound("pulse_trace", gate.rho.trace().real() - 1.0, 1e-12);

  // Phases of ~1e4 rad accumulate ~1e-12 of representation rounding, so the
  // bound sits above that floor.
  const Matrix u1 = ctspin::linalg::evolution_operator(sys.hamiltonian(0.0), 137.3);
  const Matrix u2 = ctspin::linalg::evolution_operator(sys.hamiltonian(0.0), 411.9);
  const Matrix u12 = ctspin::linalg::evolution_operator(sys.hamiltonian(0.0), 549.2);
  cl.bound("free_evolution_composes", (ctspin::linalg::matmul(u2, u1) - u12).norm_max(), 1e-10);

  cl.lines.push_back("passed " + Table::num(static_cast<long>(cl.lines.size()) - cl.failed) +
                     "/" + Table::num(static_cast<long>(cl.lines.size())));
  for (const auto& l : cl.lines) std::printf("%s\n", l.c_str());
  emit_report(ctx, "check_report", cl.lines, make_meta(ctx, "ctspin check", "check-v1"));
  return cl.failed == 0 ? 0 : 1;
}
