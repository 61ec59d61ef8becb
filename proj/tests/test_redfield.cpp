#include <doctest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "ctspin/bath/spectral.hpp"
#include "ctspin/linalg/matrix.hpp"
#include "ctspin/redfield/fit.hpp"
#include "ctspin/redfield/propagate.hpp"
#include "ctspin/redfield/sweep.hpp"
#include "ctspin/redfield/tensor.hpp"
#include "ctspin/spin/system.hpp"
#include "ctspin/units.hpp"

using namespace ctspin;
using linalg::cplx;
using linalg::Matrix;
using redfield::build_redfield;

namespace {

spin::Spectrum eigen_spectrum(std::vector<double> energies) {
  spin::Spectrum s;
  s.states = Matrix::identity(static_cast<int>(energies.size()));
  s.energies = std::move(energies);
  return s;
}

// Deterministic pseudo-random Hermitian matrix.
Matrix random_hermitian(int d, unsigned seed) {
  auto next = [&seed]() {
    seed = seed * 1664525u + 1013904223u;
    return (seed >> 8) * (1.0 / 16777216.0) - 0.5;
  };
  Matrix a(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) a(i, j) = cplx{next(), next()};
  return (a + a.adjoint()) * 0.5;
}

std::vector<double> linspace(double t0, double t1, int n) {
  std::vector<double> t(n);
  for (int i = 0; i < n; ++i) t[i] = t0 + (t1 - t0) * i / (n - 1);
  return t;
}

Matrix sigma_x2() {
  Matrix v(2, 2);
  v(0, 1) = 1.0;
  v(1, 0) = 1.0;
  return v;
}

}  // namespace

TEST_SUITE_BEGIN("redfield");

TEST_CASE("two-level transverse coupling reproduces the golden-rule rates") {
  const double nu = 9.1, temp = 5.0;
  auto spec = eigen_spectrum({-nu / 2.0, nu / 2.0});
  bath::SpectralDensity sd = bath::OhmicCutoff{0.01, 100.0};
  const double down = bath::bath_rate(sd, nu, temp);   // emission 1 -> 0
  const double up = bath::bath_rate(sd, -nu, temp);    // absorption 0 -> 1

  auto t = build_redfield(spec, {{sigma_x2(), sd}}, temp);
  REQUIRE(t.dense());

  // d rho_00/dt = -R_{00,00} rho_00 - R_{00,11} rho_11 = -up rho_00 + down rho_11.
  CHECK(t.r(0, 0, 0, 0).real() == doctest::Approx(up).epsilon(1e-12));
  CHECK(t.r(0, 0, 1, 1).real() == doctest::Approx(-down).epsilon(1e-12));
  CHECK(t.r(1, 1, 1, 1).real() == doctest::Approx(down).epsilon(1e-12));
  CHECK(t.r(1, 1, 0, 0).real() == doctest::Approx(-up).epsilon(1e-12));

  // Structured view agrees and satisfies detailed balance.
  CHECK(t.w(0, 1) == doctest::Approx(down).epsilon(1e-12));
  CHECK(t.w(1, 0) == doctest::Approx(up).epsilon(1e-12));
  CHECK(t.w(0, 1) / t.w(1, 0) ==
        doctest::Approx(std::exp(nu / (units::kB_GHzPerK * temp))).epsilon(1e-12));
  CHECK(t.w(0, 0) == doctest::Approx(-up).epsilon(1e-12));
  CHECK(t.lambda(0, 1) == doctest::Approx(0.5 * (down + up)).epsilon(1e-12));
}

TEST_CASE("tensor diagnostics: trace and Hermiticity defects at rounding level") {
  auto spec = eigen_spectrum({-5.0, -1.2, 2.4, 7.9});
  std::vector<redfield::CouplingChannel> ch = {
      {random_hermitian(4, 12345u), bath::OhmicCutoff{0.1, 50.0}},
      {random_hermitian(4, 777u), bath::LorentzianPeaks{{30.0, 5.0, 0.4}}},
  };
  auto t = build_redfield(spec, ch, 4.0);
  CHECK(t.trace_defect() < 1e-14);
  CHECK(t.hermiticity_defect() < 1e-14);
}

TEST_CASE("secular two-level dynamics: T2 = 2 T1 and thermal endpoint") {
  const double nu = 9.1, temp = 5.0;
  auto spec = eigen_spectrum({-nu / 2.0, nu / 2.0});
  bath::SpectralDensity sd = bath::OhmicCutoff{0.01, 100.0};
  const double gamma = bath::bath_rate(sd, nu, temp) + bath::bath_rate(sd, -nu, temp);

  redfield::RedfieldOptions opt;
  opt.secular = true;
  auto tensor = build_redfield(spec, {{sigma_x2(), sd}}, temp, opt);

  // T1 from the excited state.
  Matrix excited(2, 2);
  excited(1, 1) = 1.0;
  auto times = linspace(0.0, 6.0 / gamma, 61);
  auto traj = redfield::propagate(tensor, excited, times);
  CHECK(!traj.positivity_flagged);
  for (const auto& rho : traj.rho) CHECK(std::abs(rho.trace().real() - 1.0) < 1e-12);

  auto f1 = redfield::extract_t1(traj, Matrix::identity(2) * -1.0 + excited * 2.0);
  CHECK(f1.tau_ns == doctest::Approx(1.0 / gamma).epsilon(1e-8));
  CHECK(!f1.multi_exponential);

  // Endpoint within a hair of the Gibbs state.
  Matrix gibbs = redfield::gibbs_state(spec.energies, temp);
  CHECK((traj.rho.back() - gibbs).norm_max() < 2e-3);  // 6 time constants in

  // T2 from an equal superposition.
  Matrix sup(2, 2);
  sup(0, 0) = sup(1, 1) = 0.5;
  sup(0, 1) = sup(1, 0) = 0.5;
  auto traj2 = redfield::propagate(tensor, sup, times);
  auto f2 = redfield::extract_t2(traj2, 0, 1);
  CHECK(f2.tau_ns == doctest::Approx(2.0 / gamma).epsilon(1e-8));
  CHECK(f2.tau_ns / f1.tau_ns == doctest::Approx(2.0).epsilon(1e-7));

  // Coherence carries the Bohr phase exp(-i 2 pi (E0 - E1) t).
  const double t_probe = times[7];
  const cplx expected = 0.5 * std::exp(-0.5 * gamma * t_probe) *
                        std::exp(cplx{0.0, -2.0 * std::numbers::pi * (-nu) * t_probe});
  CHECK(std::abs(traj2.rho[7](0, 1) - expected) < 1e-9);
}

TEST_CASE("non-secular two-level populations still land on Gibbs exactly") {
  // With a purely off-diagonal coupling the population block decouples from
  // the coherences even without the secular approximation.
  const double nu = 9.1, temp = 5.0;
  auto spec = eigen_spectrum({-nu / 2.0, nu / 2.0});
  bath::SpectralDensity sd = bath::OhmicCutoff{0.01, 100.0};
  const double gamma = bath::bath_rate(sd, nu, temp) + bath::bath_rate(sd, -nu, temp);
  auto tensor = build_redfield(spec, {{sigma_x2(), sd}}, temp);

  Matrix excited(2, 2);
  excited(1, 1) = 1.0;
  auto traj = redfield::propagate(tensor, excited, {30.0 / gamma});
  Matrix gibbs = redfield::gibbs_state(spec.energies, temp);
  CHECK((traj.rho.back() - gibbs).norm_max() < 1e-9);
}

TEST_CASE("pure dephasing: no population decay, coherence dies at the classical rate") {
  const double nu = 4.0, temp = 5.0, eta = 0.02;
  auto spec = eigen_spectrum({-nu / 2.0, nu / 2.0});
  bath::SpectralDensity sd = bath::OhmicCutoff{eta, 100.0};
  Matrix sz(2, 2);
  sz(0, 0) = 1.0;
  sz(1, 1) = -1.0;
  auto tensor = build_redfield(spec, {{sz, sd}}, temp);

  // lambda = (1/2) rate(0) (V00 - V11)^2 = 2 eta kB T.
  const double lam = 2.0 * eta * units::kB_GHzPerK * temp;
  CHECK(tensor.lambda(0, 1) == doctest::Approx(lam).epsilon(1e-12));
  CHECK(tensor.w(0, 1) == 0.0);
  CHECK(tensor.w(1, 0) == 0.0);

  Matrix sup(2, 2);
  sup(0, 0) = sup(1, 1) = 0.5;
  sup(0, 1) = sup(1, 0) = 0.5;
  auto times = linspace(0.0, 5.0 / lam, 41);
  auto traj = redfield::propagate(tensor, sup, times);
  auto f2 = redfield::extract_t2(traj, 0, 1);
  CHECK(f2.tau_ns == doctest::Approx(1.0 / lam).epsilon(1e-8));

  // Populations are frozen: T1 extraction reports no decay.
  Matrix obs(2, 2);
  obs(0, 0) = -1.0;
  obs(1, 1) = 1.0;
  try {
    redfield::extract_t1(traj, obs);
    FAIL("expected FitError");
  } catch (const redfield::FitError& e) {
    CHECK(e.kind == redfield::FitError::Kind::kNoDecay);
  }
}

TEST_CASE("dense-secular and structured propagation agree to rounding") {
  auto spec = eigen_spectrum({0.0, 3.7, 9.2});  // all gaps distinct
  std::vector<redfield::CouplingChannel> ch = {
      {random_hermitian(3, 2024u), bath::OhmicCutoff{0.05, 40.0}},
      {random_hermitian(3, 99u), bath::LorentzianPeaks{{12.0, 3.0, 0.7}}},
  };
  redfield::RedfieldOptions dense_opt;
  dense_opt.secular = true;
  auto td = build_redfield(spec, ch, 3.0, dense_opt);
  REQUIRE(td.dense());

  redfield::RedfieldOptions struct_opt;
  struct_opt.secular = true;
  struct_opt.dense_limit = 2;  // force the structured representation
  auto ts = build_redfield(spec, ch, 3.0, struct_opt);
  REQUIRE(!ts.dense());

  Matrix rho0(3, 3);
  rho0(0, 0) = 0.5;
  rho0(1, 1) = 0.3;
  rho0(2, 2) = 0.2;
  rho0(0, 1) = rho0(1, 0) = 0.1;
  rho0(0, 2) = cplx{0.05, 0.02};
  rho0(2, 0) = std::conj(rho0(0, 2));

  auto times = linspace(0.25, 8.0, 12);
  auto a = redfield::propagate(td, rho0, times);
  auto b = redfield::propagate(ts, rho0, times);
  for (std::size_t i = 0; i < times.size(); ++i)
    CHECK((a.rho[i] - b.rho[i]).norm_max() < 1e-12);
}

TEST_CASE("Gibbs state is stationary under secular dynamics") {
  auto spec = eigen_spectrum({0.0, 3.7, 9.2});
  std::vector<redfield::CouplingChannel> ch = {
      {random_hermitian(3, 5150u), bath::OhmicCutoff{0.05, 40.0}}};
  redfield::RedfieldOptions opt;
  opt.secular = true;
  auto tensor = build_redfield(spec, ch, 3.0, opt);
  Matrix gibbs = redfield::gibbs_state(spec.energies, 3.0);
  auto traj = redfield::propagate(tensor, gibbs, {1.0, 10.0, 100.0});
  for (const auto& rho : traj.rho) CHECK((rho - gibbs).norm_max() < 1e-12);
}

TEST_CASE("rank-4 storage is refused above the dense limit unless secular") {
  std::vector<double> e(17);
  for (int i = 0; i < 17; ++i) e[i] = 1.1 * i + 0.01 * i * i;
  auto spec = eigen_spectrum(e);
  std::vector<redfield::CouplingChannel> ch = {
      {random_hermitian(17, 31u), bath::OhmicCutoff{0.05, 40.0}}};
  CHECK_THROWS_AS(build_redfield(spec, ch, 3.0), std::invalid_argument);

  redfield::RedfieldOptions opt;
  opt.secular = true;
  auto t = build_redfield(spec, ch, 3.0, opt);
  CHECK(!t.dense());
  CHECK(t.dim() == 17);
  // Structured propagation works there.
  Matrix rho0(17, 17);
  rho0(0, 0) = 1.0;
  auto traj = redfield::propagate(t, rho0, {0.5, 1.0});
  CHECK(std::abs(traj.rho.back().trace().real() - 1.0) < 1e-12);
}

TEST_CASE("population modes: closed two-level solution and mode decomposition") {
  const double nu = 9.1, temp = 5.0;
  auto spec = eigen_spectrum({-nu / 2.0, nu / 2.0});
  bath::SpectralDensity sd = bath::OhmicCutoff{0.01, 100.0};
  const double down = bath::bath_rate(sd, nu, temp);
  const double up = bath::bath_rate(sd, -nu, temp);
  const double gamma = down + up;

  redfield::RedfieldOptions opt;
  opt.secular = true;
  auto tensor = build_redfield(spec, {{sigma_x2(), sd}}, temp, opt);
  redfield::PopulationModes modes(tensor, temp);

  const double p1eq = up / gamma;  // ratio up/down = e^-beta nu fixes the split
  std::vector<double> p0 = {0.0, 1.0};
  for (double t : {0.3, 1.7, 6.0}) {
    auto p = modes.at(p0, t);
    const double p1 = p1eq + (1.0 - p1eq) * std::exp(-gamma * t);
    CHECK(p[1] == doctest::Approx(p1).epsilon(1e-10));
    CHECK(p[0] + p[1] == doctest::Approx(1.0).epsilon(1e-12));
  }

  auto md = modes.decompose(p0, {-1.0, 1.0});
  CHECK(md.dominant_rate == doctest::Approx(-gamma).epsilon(1e-10));
  CHECK(md.constant == doctest::Approx(2.0 * p1eq - 1.0).epsilon(1e-10));
  REQUIRE(md.rates.size() == 1);
  CHECK(md.amplitudes[0] == doctest::Approx(2.0 * (1.0 - p1eq)).epsilon(1e-10));
}

TEST_CASE("builder input validation") {
  auto spec = eigen_spectrum({0.0, 1.0});
  bath::SpectralDensity sd = bath::OhmicCutoff{0.1, 10.0};
  Matrix bad(2, 2);
  bad(0, 1) = 1.0;  // not Hermitian
  CHECK_THROWS_AS(build_redfield(spec, {{bad, sd}}, 4.0), std::invalid_argument);
  CHECK_THROWS_AS(build_redfield(spec, {{Matrix::identity(3), sd}}, 4.0), std::invalid_argument);
  CHECK_THROWS_AS(build_redfield(spec, {{sigma_x2(), sd}}, -1.0), std::invalid_argument);
  CHECK_THROWS_AS(build_redfield(spec, {}, 4.0), std::invalid_argument);
}

TEST_CASE("propagation input validation") {
  auto spec = eigen_spectrum({0.0, 1.0});
  bath::SpectralDensity sd = bath::OhmicCutoff{0.1, 10.0};
  auto tensor = build_redfield(spec, {{sigma_x2(), sd}}, 4.0);
  Matrix ok(2, 2);
  ok(0, 0) = 1.0;
  CHECK_THROWS_AS(redfield::propagate(tensor, ok, {}), std::invalid_argument);
  CHECK_THROWS_AS(redfield::propagate(tensor, ok, {-1.0}), std::invalid_argument);
  CHECK_THROWS_AS(redfield::propagate(tensor, ok, {1.0, 1.0}), std::invalid_argument);
  CHECK_THROWS_AS(redfield::propagate(tensor, Matrix::identity(2), {1.0}),
                  std::invalid_argument);  // trace 2
  Matrix nh(2, 2);
  nh(0, 0) = 1.0;
  nh(0, 1) = 0.3;
  CHECK_THROWS_AS(redfield::propagate(tensor, nh, {1.0}), std::invalid_argument);
}

TEST_CASE("relaxation sweep at the anticrossing: analytic T1, T2 = 2 T1") {
  auto p = spin::preset("experimental_9p1GHz");
  bath::SpectralDensity sd = bath::OhmicCutoff{1e-4, 100.0};
  // Electronic Jz couples the anticrossing pair with |<7|Jz|8>|^2 = 16.
  std::vector<redfield::CouplingChannel> ch = {{spin::electronic_jz(p), sd}};

  auto pts = redfield::relaxation_sweep(p, ch, {24.0}, {5.0});
  REQUIRE(pts.size() == 1);
  const auto& pt = pts[0];
  REQUIRE(pt.t1_ok);
  REQUIRE(pt.t2_ok);
  CHECK(!pt.multi_exponential);

  const double gamma = 16.0 * (bath::bath_rate(sd, 9.1, 5.0) + bath::bath_rate(sd, -9.1, 5.0));
  CHECK(pt.t1_us == doctest::Approx(units::ns_to_us(1.0 / gamma)).epsilon(1e-9));
  CHECK(pt.t2_us == doctest::Approx(2.0 * pt.t1_us).epsilon(1e-9));
}

TEST_CASE("relaxation sweep reports non-decaying points with a reason") {
  auto p = spin::preset("experimental_9p1GHz");
  // sigma_x x 1 is diagonal in the anticrossing eigenbasis: no population
  // transfer within the pair, pure dephasing only.
  Matrix op = linalg::kron(sigma_x2(), Matrix::identity(8));
  const double eta = 1e-4, temp = 5.0;
  bath::SpectralDensity sd = bath::OhmicCutoff{eta, 100.0};

  auto pts = redfield::relaxation_sweep(p, {{op, sd}}, {24.0}, {temp});
  REQUIRE(pts.size() == 1);
  CHECK(!pts[0].t1_ok);
  CHECK(pts[0].note.find("t1:") != std::string::npos);
  REQUIRE(pts[0].t2_ok);
  // lambda = (1/2) rate(0) (V77 - V88)^2 with V77 - V88 = -2.
  const double lam = 2.0 * eta * units::kB_GHzPerK * temp;
  CHECK(pts[0].t2_us == doctest::Approx(units::ns_to_us(1.0 / lam)).epsilon(1e-9));
}

TEST_CASE("stock relaxation channels: calibrated anchors and activated T1") {
  auto p = spin::preset("full_j8_relax");
  auto ch = redfield::preset_relax_channels(p);
  REQUIRE(ch.size() == 3);

  auto pts = redfield::relaxation_sweep(p, ch, {14.0, 24.0, 34.0}, {5.0});
  REQUIRE(pts.size() == 3);
  for (const auto& pt : pts) {
    REQUIRE(pt.t1_ok);
    REQUIRE(pt.t2_ok);
  }
  // Frozen calibration: T1 = 8 us at the anticrossing at 5 K, and the
  // coherence time drops 40% ten millitesla off on either side.
  CHECK(pts[1].t1_us == doctest::Approx(8.0).epsilon(1e-6));
  CHECK(pts[2].t2_us / pts[1].t2_us == doctest::Approx(0.6).epsilon(1e-6));
  CHECK(pts[0].t2_us / pts[1].t2_us == doctest::Approx(0.6).epsilon(1e-3));
  CHECK(pts[1].t2_us > pts[0].t2_us);
  CHECK(pts[1].t1_us > pts[0].t1_us);

  // Activated temperature dependence with the designed barrier.
  auto hot = redfield::relaxation_sweep(p, ch, {24.0}, {4.0, 5.0, 6.0});
  std::vector<double> temps = {4.0, 5.0, 6.0}, t1s;
  for (const auto& pt : hot) {
    REQUIRE(pt.t1_ok);
    t1s.push_back(pt.t1_us);
  }
  auto af = redfield::arrhenius_fit(temps, t1s);
  CHECK(af.u_eff_cmInv == doctest::Approx(34.5).epsilon(0.01));
  CHECK(af.r_squared > 0.999);
}

TEST_CASE("sweep results do not depend on the thread count") {
  auto p = spin::preset("experimental_9p1GHz");
  bath::SpectralDensity sd = bath::OhmicCutoff{1e-4, 100.0};
  std::vector<redfield::CouplingChannel> ch = {{spin::electronic_jz(p), sd}};
  const std::vector<double> b = {20.0, 24.0, 28.0};
  const std::vector<double> t = {5.0, 11.0};

  redfield::SweepConfig c1, c4;
  c1.threads = 1;
  c4.threads = 4;
  auto a = redfield::relaxation_sweep(p, ch, b, t, c1);
  auto bb = redfield::relaxation_sweep(p, ch, b, t, c4);
  REQUIRE(a.size() == bb.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].b_mT == bb[i].b_mT);
    CHECK(a[i].temp_K == bb[i].temp_K);
    CHECK(a[i].t1_us == bb[i].t1_us);  // bitwise: same instruction stream per point
    CHECK(a[i].t2_us == bb[i].t2_us);
    CHECK(a[i].t1_ok == bb[i].t1_ok);
    CHECK(a[i].t2_ok == bb[i].t2_ok);
    CHECK(a[i].note == bb[i].note);
  }
}

TEST_SUITE_END();
