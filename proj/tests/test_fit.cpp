#include <doctest.h>

#include <cmath>
#include <vector>

#include "ctspin/redfield/fit.hpp"
#include "ctspin/units.hpp"

using namespace ctspin;
using redfield::FitError;

namespace {

std::vector<double> linspace(double t0, double t1, int n) {
  std::vector<double> t(n);
  for (int i = 0; i < n; ++i) t[i] = t0 + (t1 - t0) * i / (n - 1);
  return t;
}

}  // namespace

TEST_SUITE_BEGIN("fit");

TEST_CASE("noiseless single exponential with offset is recovered to high precision") {
  auto t = linspace(0.0, 10.0, 50);
  std::vector<double> s(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) s[i] = 2.0 + 3.0 * std::exp(-t[i] / 1.7);
  auto f = redfield::fit_exponential(t, s);
  CHECK(f.tau_ns == doctest::Approx(1.7).epsilon(1e-7));
  CHECK(f.amplitude == doctest::Approx(3.0).epsilon(1e-6));
  CHECK(f.offset == doctest::Approx(2.0).epsilon(1e-6));
  CHECK(f.rel_residual < 1e-6);
  CHECK(!f.multi_exponential);
}

TEST_CASE("negative-amplitude recovery (signal growing toward its asymptote)") {
  auto t = linspace(0.0, 12.0, 40);
  std::vector<double> s(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) s[i] = 1.0 - 0.8 * std::exp(-t[i] / 2.5);
  auto f = redfield::fit_exponential(t, s);
  CHECK(f.tau_ns == doctest::Approx(2.5).epsilon(1e-7));
  CHECK(f.amplitude == doctest::Approx(-0.8).epsilon(1e-6));
  CHECK(f.offset == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("zero-asymptote fit for coherence magnitudes") {
  auto t = linspace(0.0, 9.0, 45);
  std::vector<double> s(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) s[i] = 0.8 * std::exp(-t[i] / 2.3);
  auto f = redfield::fit_exponential_to_zero(t, s);
  CHECK(f.tau_ns == doctest::Approx(2.3).epsilon(1e-9));
  CHECK(f.amplitude == doctest::Approx(0.8).epsilon(1e-9));
  CHECK(f.offset == 0.0);
}

TEST_CASE("flat signal raises kNoDecay") {
  auto t = linspace(0.0, 5.0, 20);
  std::vector<double> s(t.size(), 0.7);
  try {
    redfield::fit_exponential(t, s);
    FAIL("expected FitError");
  } catch (const FitError& e) {
    CHECK(e.kind == FitError::Kind::kNoDecay);
  }
}

TEST_CASE("trajectory shorter than the fitted time constant raises kTooShort") {
  auto t = linspace(0.0, 1.0, 30);
  std::vector<double> s(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) s[i] = std::exp(-t[i] / 2.0);
  try {
    redfield::fit_exponential_to_zero(t, s);
    FAIL("expected FitError");
  } catch (const FitError& e) {
    CHECK(e.kind == FitError::Kind::kTooShort);
  }
}

TEST_CASE("fewer than four samples raises kBadFit") {
  try {
    redfield::fit_exponential({0.0, 1.0, 2.0}, {3.0, 2.0, 1.5});
    FAIL("expected FitError");
  } catch (const FitError& e) {
    CHECK(e.kind == FitError::Kind::kBadFit);
  }
}

TEST_CASE("a genuine double exponential is flagged as multi-exponential") {
  auto t = linspace(0.0, 12.0, 60);
  std::vector<double> s(t.size());
  for (std::size_t i = 0; i < t.size(); ++i)
    s[i] = std::exp(-t[i] / 1.0) + std::exp(-t[i] / 5.0);
  auto f = redfield::fit_exponential_to_zero(t, s);
  CHECK(f.multi_exponential);
  // The effective time constant lies between the two components.
  CHECK(f.tau_ns > 1.0);
  CHECK(f.tau_ns < 5.0);
}

TEST_CASE("activation fit recovers a synthetic barrier exactly") {
  const double u = 34.5 * units::kCmInvGHz;  // GHz
  const double tau0 = 0.1;                   // us
  std::vector<double> temps = {3.0, 4.0, 5.0, 7.0, 10.0};
  std::vector<double> t1(temps.size());
  for (std::size_t i = 0; i < temps.size(); ++i)
    t1[i] = tau0 * std::exp(u / (units::kB_GHzPerK * temps[i]));
  auto f = redfield::arrhenius_fit(temps, t1);
  CHECK(f.u_eff_GHz == doctest::Approx(u).epsilon(1e-10));
  CHECK(f.u_eff_cmInv == doctest::Approx(34.5).epsilon(1e-10));
  CHECK(f.tau0_us == doctest::Approx(tau0).epsilon(1e-10));
  CHECK(f.r_squared == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(f.residual_rms < 1e-12);
}

TEST_CASE("two activation points interpolate exactly") {
  const double u = 50.0, tau0 = 2.0;
  std::vector<double> temps = {4.0, 8.0};
  std::vector<double> t1 = {tau0 * std::exp(u / (units::kB_GHzPerK * 4.0)),
                            tau0 * std::exp(u / (units::kB_GHzPerK * 8.0))};
  auto f = redfield::arrhenius_fit(temps, t1);
  CHECK(f.u_eff_GHz == doctest::Approx(u).epsilon(1e-12));
  CHECK(f.tau0_us == doctest::Approx(tau0).epsilon(1e-12));
  CHECK(f.residual_rms < 1e-13);
}

TEST_CASE("activation fit input validation") {
  CHECK_THROWS_AS(redfield::arrhenius_fit({5.0}, {1.0}), std::invalid_argument);
  CHECK_THROWS_AS(redfield::arrhenius_fit({5.0, 6.0}, {1.0}), std::invalid_argument);
  CHECK_THROWS_AS(redfield::arrhenius_fit({5.0, -1.0}, {1.0, 2.0}), std::invalid_argument);
  CHECK_THROWS_AS(redfield::arrhenius_fit({5.0, 6.0}, {1.0, 0.0}), std::invalid_argument);
}

TEST_SUITE_END();
