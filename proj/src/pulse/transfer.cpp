#include "ctspin/pulse/transfer.hpp"

#include <climits>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "ctspin/linalg/eigh.hpp"
#include "ctspin/spin/angular.hpp"
#include "ctspin/units.hpp"

namespace ctspin::pulse {
namespace {

using linalg::cplx;
using linalg::Matrix;
using linalg::Vector;

constexpr double kTwoPi = 2.0 * std::numbers::pi;

cplx frame_phase(double f_GHz, int layer, double t_ns) {
  const double ph = -kTwoPi * layer * std::fmod(f_GHz * t_ns, 1.0);
  return {std::cos(ph), std::sin(ph)};
}

// A rung with the carrier, duration and field amplitude fixed against the
// reference spectrum, so the identical segment can replay on another system.
struct ResolvedRung {
  double carrier_GHz = 0.0;
  double duration_ns = 0.0;
  double amp_GHz = 0.0;
  DriveKind kind = DriveKind::kRadioFrequency;
  double keep_window_GHz = 0.0;
};

// Level-space propagation of drive rungs.  The state lives in eigenlevel
// coordinates; each rung keeps the drive elements whose transitions sit
// inside the retention window, layers the resulting graph by energy order
// (per connected component, from its lowest level) and evolves the
// rotating-frame Hamiltonian exactly, unwinding the frame at absolute time.
struct Ladder {
  std::vector<double> en;
  Matrix vecs;
  Matrix d_rf, d_mw;  // drive operators in the eigenbasis
  Vector c;
  double t_ns = 0.0;

  const Matrix& drive(DriveKind k) const {
    return k == DriveKind::kRadioFrequency ? d_rf : d_mw;
  }

  std::vector<int> cluster(int level) const {
    std::vector<int> out;
    for (int k = 0; k < static_cast<int>(en.size()); ++k)
      if (std::abs(en[static_cast<std::size_t>(k)] -
                   en[static_cast<std::size_t>(level)]) <= 1e-9)
        out.push_back(k);
    return out;
  }

  double cluster_population(int level) const {
    double p = 0.0;
    for (int k : cluster(level)) p += std::norm(c[static_cast<std::size_t>(k)]);
    return p;
  }

  // Basis-invariant coupling between the degenerate clusters of two levels:
  // the Frobenius norm of the connecting drive block.  Inside a degenerate
  // cluster the eigenvectors are arbitrary mixtures, so single elements are
  // not well defined but this norm is.
  double coupling_norm(DriveKind kind, int from, int to) const {
    const Matrix& d = drive(kind);
    double s = 0.0;
    for (int k : cluster(to))
      for (int j : cluster(from)) s += std::norm(d(k, j));
    return std::sqrt(s);
  }

  void pulse(const ResolvedRung& r) {
    const int n = static_cast<int>(en.size());
    const Matrix& d = drive(r.kind);
    std::vector<std::array<int, 2>> edges;
    std::vector<std::vector<int>> adj(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k)
      for (int l = k + 1; l < n; ++l) {
        const double gap = std::abs(en[static_cast<std::size_t>(l)] -
                                    en[static_cast<std::size_t>(k)]);
        if (std::abs(gap - r.carrier_GHz) <= r.keep_window_GHz &&
            std::abs(d(l, k)) > 1e-12) {
          edges.push_back({k, l});
          adj[static_cast<std::size_t>(k)].push_back(l);
          adj[static_cast<std::size_t>(l)].push_back(k);
        }
      }
    std::vector<int> layer(static_cast<std::size_t>(n), INT_MIN);
    for (int s = 0; s < n; ++s) {
      if (layer[static_cast<std::size_t>(s)] != INT_MIN) continue;
      layer[static_cast<std::size_t>(s)] = 0;
      std::vector<int> queue{s};
      for (std::size_t qi = 0; qi < queue.size(); ++qi) {
        const int k = queue[qi];
        for (int l : adj[static_cast<std::size_t>(k)]) {
          if (layer[static_cast<std::size_t>(l)] != INT_MIN) continue;
          const int step = en[static_cast<std::size_t>(l)] >
                           en[static_cast<std::size_t>(k)] ? 1 : -1;
          layer[static_cast<std::size_t>(l)] = layer[static_cast<std::size_t>(k)] + step;
          queue.push_back(l);
        }
      }
    }
    Matrix ht(n, n);
    for (int k = 0; k < n; ++k)
      ht(k, k) = en[static_cast<std::size_t>(k)] -
                 layer[static_cast<std::size_t>(k)] * r.carrier_GHz;
    for (const auto& e : edges) {
      const int k = e[0], l = e[1];
      // Edges that close an inconsistent cycle in the layering are dropped.
      if (std::abs(layer[static_cast<std::size_t>(l)] -
                   layer[static_cast<std::size_t>(k)]) != 1)
        continue;
      ht(l, k) += 0.5 * r.amp_GHz * d(l, k);
      ht(k, l) += 0.5 * r.amp_GHz * d(k, l);
    }
    Matrix u = linalg::evolution_operator(ht, r.duration_ns, 1e-6);
    const double t1 = t_ns + r.duration_ns;
    for (int a = 0; a < n; ++a) {
      const cplx pa = frame_phase(r.carrier_GHz, layer[static_cast<std::size_t>(a)], t1);
      for (int b = 0; b < n; ++b)
        u(a, b) *= pa * std::conj(
            frame_phase(r.carrier_GHz, layer[static_cast<std::size_t>(b)], t_ns));
    }
    c = linalg::matvec(u, c);
    t_ns = t1;
  }
};

Matrix to_eigenbasis(const Matrix& op, const Matrix& vecs) {
  return linalg::matmul(vecs.adjoint(), linalg::matmul(op, vecs));
}

Ladder make_pair_ladder(const dimer::DimerSystem& d, double b_T, int start) {
  const Matrix h = dimer::compose(d, b_T, 0.0);
  auto eg = linalg::eigh(h, 1e-6);
  Ladder lad;
  lad.en = std::move(eg.values);
  lad.vecs = std::move(eg.vectors);

  const Matrix id16 = Matrix::identity(16);
  const Matrix id2 = Matrix::identity(2);
  const Matrix ix_a = linalg::kron(id2, spin::angular_momentum_ops(d.site_a.nuclear).jx);
  const Matrix ix_b = linalg::kron(id2, spin::angular_momentum_ops(d.site_b.nuclear).jx);
  Matrix rf = linalg::kron(ix_a, id16);
  rf += linalg::kron(id16, ix_b);
  Matrix mw = linalg::kron(spin::electronic_jz(d.site_a), id16) * d.geometry.axis_a[2];
  mw += linalg::kron(id16, spin::electronic_jz(d.site_b)) * d.geometry.axis_b[2];
  lad.d_rf = to_eigenbasis(rf, lad.vecs);
  lad.d_mw = to_eigenbasis(mw, lad.vecs);

  lad.c.assign(lad.en.size(), 0.0);
  lad.c[static_cast<std::size_t>(start)] = 1.0;
  return lad;
}

Ladder make_monomer_ladder(const spin::SpinSystemParams& p, double b_T, int start) {
  const auto spec = spin::diagonalize_z(p, b_T, 0.0);
  Ladder lad;
  lad.en = spec.energies;
  lad.vecs = spec.states;
  const Matrix rf = linalg::kron(Matrix::identity(2),
                                 spin::angular_momentum_ops(p.nuclear).jx);
  lad.d_rf = to_eigenbasis(rf, lad.vecs);
  lad.d_mw = to_eigenbasis(spin::electronic_jz(p), lad.vecs);
  lad.c.assign(lad.en.size(), 0.0);
  lad.c[static_cast<std::size_t>(start)] = 1.0;
  return lad;
}

std::vector<ResolvedRung> resolve_rungs(const Ladder& ref,
                                        const std::vector<TransferRung>& rungs,
                                        std::vector<RungLog>* logs) {
  const int n = static_cast<int>(ref.en.size());
  std::vector<ResolvedRung> out;
  for (const auto& rung : rungs) {
    if (rung.from < 0 || rung.from >= n || rung.to < 0 || rung.to >= n ||
        rung.from == rung.to)
      throw std::invalid_argument("transfer: rung levels must be distinct spectrum indices");
    if (!(rung.omega_MHz > 0.0))
      throw std::invalid_argument("transfer: rung amplitude must be positive");
    if (!(rung.duration_ns > 0.0))
      throw std::invalid_argument("transfer: rung duration must be explicit and positive");
    if (!(rung.keep_window_GHz > 0.0))
      throw std::invalid_argument("transfer: retention window must be positive");
    const double gap = std::abs(ref.en[static_cast<std::size_t>(rung.to)] -
                                ref.en[static_cast<std::size_t>(rung.from)]);
    ResolvedRung r;
    r.kind = rung.drive;
    r.keep_window_GHz = rung.keep_window_GHz;
    r.carrier_GHz = rung.carrier_GHz > 0.0 ? rung.carrier_GHz : gap;
    r.duration_ns = rung.duration_ns;
    const double el = ref.coupling_norm(rung.drive, rung.from, rung.to);
    if (el < 1e-12)
      throw std::invalid_argument("transfer: rung carries no drive coupling");
    r.amp_GHz = units::MHz_to_GHz(rung.omega_MHz) / el;
    if (logs) {
      RungLog log;
      log.carrier_GHz = r.carrier_GHz;
      log.duration_ns = r.duration_ns;
      log.detuning_MHz = units::GHz_to_MHz(r.carrier_GHz - gap);
      log.failed = std::abs(r.carrier_GHz - gap) > 3.0 * units::MHz_to_GHz(rung.omega_MHz);
      logs->push_back(log);
    }
    out.push_back(r);
  }
  return out;
}

}  // namespace

TransferReport initialization_transfer(const dimer::DimerSystem& d, double b_T,
                                       int start_level, int target_level,
                                       const std::vector<TransferRung>& rungs) {
  Ladder lad = make_pair_ladder(d, b_T, 0);
  const int n = static_cast<int>(lad.en.size());
  if (start_level < 0 || start_level >= n || target_level < 0 || target_level >= n)
    throw std::invalid_argument("transfer: start and target must be spectrum indices");
  lad.c.assign(lad.en.size(), 0.0);
  lad.c[static_cast<std::size_t>(start_level)] = 1.0;

  TransferReport rep;
  const auto resolved = resolve_rungs(lad, rungs, &rep.rungs);
  for (std::size_t i = 0; i < resolved.size(); ++i) {
    lad.pulse(resolved[i]);
    rep.rungs[i].to_population = lad.cluster_population(rungs[i].to);
  }
  rep.final_population = lad.cluster_population(target_level);
  rep.success = rep.final_population > 0.99;
  return rep;
}

TransferPlan default_transfer_ladder(double b_T) {
  TransferPlan plan;
  plan.system = dimer::make_dimer();
  plan.system.mode = dimer::CouplingMode::kFullDipolarOperator;
  plan.b_T = b_T;

  // Lower-branch site levels of the two nuclear sectors involved.
  const auto sa32 = dimer::site_states(plan.system.site_a, b_T, 0.0, -1.5);
  const auto sa12 = dimer::site_states(plan.system.site_a, b_T, 0.0, -0.5);
  const auto sb32 = dimer::site_states(plan.system.site_b, b_T, 0.0, -1.5);
  const auto sb12 = dimer::site_states(plan.system.site_b, b_T, 0.0, -0.5);
  plan.monomer_start = sa32.lo;
  plan.monomer_target = sa12.lo;

  // Composed levels by maximal overlap with the site-product characters.
  const Matrix h = dimer::compose(plan.system, b_T, 0.0);
  const auto eg = linalg::eigh(h, 1e-6);
  auto product_level = [&](const dimer::SiteStates& a, int la,
                           const dimer::SiteStates& b, int lb) {
    int best = 0;
    double wbest = -1.0;
    for (int k = 0; k < 256; ++k) {
      cplx ov = 0.0;
      for (int ia = 0; ia < 16; ++ia)
        for (int ib = 0; ib < 16; ++ib)
          ov += std::conj(a.spec.states(ia, la) * b.spec.states(ib, lb)) *
                eg.vectors(ia * 16 + ib, k);
      if (std::norm(ov) > wbest) {
        wbest = std::norm(ov);
        best = k;
      }
    }
    return best;
  };
  plan.start_level = product_level(sa32, sa32.lo, sb32, sb32.lo);
  const int middle = product_level(sa32, sa32.lo, sb12, sb12.lo);
  plan.target_level = product_level(sa12, sa12.lo, sb12, sb12.lo);

  // Two resonant nuclear rungs; each duration is the half cycle of the
  // cluster-normalized Rabi rate.
  TransferRung r1;
  r1.from = plan.start_level;
  r1.to = middle;
  r1.duration_ns = 1e3 / (2.0 * r1.omega_MHz);
  TransferRung r2;
  r2.from = middle;
  r2.to = plan.target_level;
  r2.duration_ns = 1e3 / (2.0 * r2.omega_MHz);
  plan.rungs = {r1, r2};
  return plan;
}

double monomer_transfer_overlap(const TransferPlan& plan) {
  const int n16 = 16;
  if (plan.monomer_start < 0 || plan.monomer_start >= n16 ||
      plan.monomer_target < 0 || plan.monomer_target >= n16)
    throw std::invalid_argument("transfer: monomer levels must be site spectrum indices");
  // Fix the segments against the pair spectrum, then replay them on the
  // isolated molecule: same carriers, same field amplitudes, same durations.
  const Ladder ref = make_pair_ladder(plan.system, plan.b_T, 0);
  const auto resolved = resolve_rungs(ref, plan.rungs, nullptr);
  Ladder mono = make_monomer_ladder(plan.system.site_a, plan.b_T, plan.monomer_start);
  for (const auto& r : resolved) mono.pulse(r);
  return mono.cluster_population(plan.monomer_target);
}

}  // namespace ctspin::pulse
