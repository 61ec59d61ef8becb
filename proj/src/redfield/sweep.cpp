#include "ctspin/redfield/sweep.hpp"

#include <atomic>
#include <cmath>
#include <thread>

#include "ctspin/spin/stevens.hpp"
#include "ctspin/units.hpp"

namespace ctspin::redfield {

namespace {

std::vector<double> log_time_grid(double rate, int n, double span) {
  // Geometric grid from 1% to `span` time constants of the given rate.
  const double tau = 1.0 / rate;
  std::vector<double> t(n);
  const double t0 = 0.01 * tau, t1 = span * tau;
  for (int i = 0; i < n; ++i) t[i] = t0 * std::pow(t1 / t0, static_cast<double>(i) / (n - 1));
  return t;
}

void sweep_point(const spin::SpinSystemParams& params,
                 const std::vector<CouplingChannel>& channels, double b_mT, double temp_K,
                 const SweepConfig& cfg, const spin::Spectrum& spec, SweepPoint& out) {
  out.b_mT = b_mT;
  out.temp_K = temp_K;
  (void)params;

  RedfieldOptions opt;
  opt.secular = true;
  RedfieldTensor tensor = build_redfield(spec, channels, temp_K, opt);
  const int d = tensor.dim();
  const auto [lo, hi] = cfg.pair;

  // --- T1: Gibbs with the pair populations swapped -----------------------
  Matrix gibbs = gibbs_state(spec.energies, temp_K);
  std::vector<double> p0(d);
  for (int i = 0; i < d; ++i) p0[i] = gibbs(i, i).real();
  std::swap(p0[lo], p0[hi]);

  std::vector<double> obs(d, 0.0);
  obs[hi] = 1.0;
  obs[lo] = -1.0;

  try {
    PopulationModes modes(tensor, temp_K);
    auto md = modes.decompose(p0, obs);
    if (md.dominant_rate >= -1e-18)
      throw FitError(FitError::Kind::kNoDecay, "population difference does not decay");
    const double rate = -md.dominant_rate;
    auto t = log_time_grid(rate, cfg.time_points, cfg.span_time_constants);
    std::vector<double> s(t.size());
    for (std::size_t i = 0; i < t.size(); ++i) {
      auto p = modes.at(p0, t[i]);
      s[i] = p[hi] - p[lo];
    }
    auto fit = fit_exponential(t, s);
    out.t1_us = units::ns_to_us(fit.tau_ns);
    out.t1_ok = true;
    out.multi_exponential = fit.multi_exponential;
  } catch (const FitError& e) {
    out.note = std::string("t1: ") + e.what();
  }

  // --- T2: decay rate of the pair coherence ------------------------------
  const double lam = tensor.lambda(lo, hi);
  if (lam <= 1e-18) {
    if (!out.note.empty()) out.note += "; ";
    out.note += "t2: coherence does not decay";
  } else {
    auto t = log_time_grid(lam, cfg.time_points, cfg.span_time_constants);
    std::vector<double> s(t.size());
    for (std::size_t i = 0; i < t.size(); ++i) s[i] = 0.5 * std::exp(-lam * t[i]);
    try {
      auto fit = fit_exponential_to_zero(t, s);
      out.t2_us = units::ns_to_us(fit.tau_ns);
      out.t2_ok = true;
    } catch (const FitError& e) {
      if (!out.note.empty()) out.note += "; ";
      out.note += std::string("t2: ") + e.what();
    }
  }
}

}  // namespace

std::vector<SweepPoint> relaxation_sweep(const spin::SpinSystemParams& params,
                                         const std::vector<CouplingChannel>& channels,
                                         const std::vector<double>& b_grid_mT,
                                         const std::vector<double>& temp_grid_K,
                                         const SweepConfig& config) {
  if (b_grid_mT.empty() || temp_grid_K.empty())
    throw std::invalid_argument("relaxation_sweep: empty grid");
  const auto [lo, hi] = config.pair;
  if (lo < 0 || hi <= lo || hi >= params.dim())
    throw std::invalid_argument("relaxation_sweep: bad level pair");

  const std::size_t nb = b_grid_mT.size(), nt = temp_grid_K.size();
  std::vector<SweepPoint> out(nb * nt);

  // One diagonalization per field value, shared across temperatures.
  const int nthreads = std::max(1, config.threads);
  std::vector<std::thread> pool;
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (;;) {
      const std::size_t ib = next.fetch_add(1);
      if (ib >= nb) return;
      spin::Spectrum spec = spin::diagonalize_z(params, units::mT_to_T(b_grid_mT[ib]));
      for (std::size_t it = 0; it < nt; ++it)
        sweep_point(params, channels, b_grid_mT[ib], temp_grid_K[it], config, spec,
                    out[ib * nt + it]);
    }
  };
  if (nthreads == 1) {
    worker();
  } else {
    for (int i = 0; i < nthreads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  return out;
}

std::vector<CouplingChannel> preset_relax_channels(const spin::SpinSystemParams& params) {
  if (params.model != spin::ModelKind::kFullJ)
    throw std::invalid_argument("preset_relax_channels: requires the full-J model");
  const auto& js = params.electronic;
  const Matrix in = Matrix::identity(params.nuclear.dim());

  // Single phonon mode at 68.4 cm^-1 (lowest optical mode of the anion).
  bath::LorentzianPeaks phonon{{68.4 * units::kCmInvGHz, 150.0, 1.0}};

  // Channel scales (GHz).  The ladder strength sets the two-step rate through
  // the barrier states and is calibrated so T1 = 8 us at the first
  // anticrossing (24 mT) at 5 K; the gap-modulation strength sets the
  // one-phonon rate away from the anticrossing, calibrated to a 40%
  // coherence-time drop 10 mT off.  The axial channel is diagonal in the
  // angular-momentum basis and inert under a peaked spectral density (no
  // zero-frequency weight); it is kept as the hook for bath variants that do
  // carry one.
  const double ladder_scale = 0.797361820223;
  const double gapmod_scale = 1.89679737839e-3;
  const double axial_scale = 1e-3;

  std::vector<CouplingChannel> ch;
  ch.push_back({linalg::kron(spin::stevens_operator(2, 1, js) * ladder_scale, in), phonon});
  ch.push_back({linalg::kron(spin::stevens_operator(4, 4, js) * gapmod_scale, in), phonon});
  ch.push_back({linalg::kron(spin::stevens_operator(2, 0, js) * axial_scale, in), phonon});
  return ch;
}

}  // namespace ctspin::redfield
