#include <doctest.h>

#include <cmath>
#include <vector>

#include "ctspin/ct/anticrossing.hpp"
#include "ctspin/ct/calibrate.hpp"
#include "ctspin/ct/diagram.hpp"
#include "ctspin/units.hpp"

using namespace ctspin;

TEST_SUITE_BEGIN("ct");

TEST_CASE("four anticrossings of the middle pair at 24/72/120/168 mT, gap pinned to the preset") {
  auto p = spin::preset("experimental_9p1GHz");
  auto pts = ct::find_anticrossings(p, {7, 8}, 1.0, 200.0, 1.0);
  REQUIRE(pts.size() == 4);
  const double expected[] = {24.0, 72.0, 120.0, 168.0};
  for (int i = 0; i < 4; ++i) {
    CHECK(pts[i].b_min_mT == doctest::Approx(expected[i]).epsilon(1e-5));
    CHECK(pts[i].f_ct_GHz == doctest::Approx(9.1).epsilon(1e-9));
    // Stationary gap at the minimum; curvature positive.
    CHECK(std::abs(pts[i].df_dB) < 1e-4);
    CHECK(pts[i].d2f_dB2 > 0.0);
  }
}

TEST_CASE("anticrossing field matches the closed-form hyperfine/Zeeman balance") {
  // Bias of nuclear sector mI: 4 g muB B + 4 a_z mI, zero at
  // B = a_z |mI| / (g muB).
  auto p = spin::preset("calculated_11GHz");
  auto pts = ct::find_anticrossings(p, {7, 8}, 1.0, 50.0, 1.0);
  REQUIRE(pts.size() == 1);
  const double b_closed = p.a_z_GHz * 0.5 / (p.g_j * units::kMuB_GHzPerT);
  CHECK(pts[0].b_min_mT == doctest::Approx(units::T_to_mT(b_closed)).epsilon(1e-6));
  CHECK(pts[0].f_ct_GHz == doctest::Approx(11.0).epsilon(1e-9));
}

TEST_CASE("monotone gap over the scan yields no anticrossings") {
  auto p = spin::preset("experimental_9p1GHz");
  auto pts = ct::find_anticrossings(p, {7, 8}, 30.0, 60.0, 1.0);
  CHECK(pts.empty());
}

TEST_CASE("level diagram tracks branches continuously on an adequate grid") {
  auto p = spin::preset("experimental_9p1GHz");
  auto d = ct::level_diagram(p, 0.5, 50.5, 0.5);
  CHECK(d.b_mT.size() == 101);
  CHECK(d.min_overlap > 0.99);
  // Sorted energies ascend at every point.
  for (const auto& row : d.energies)
    for (std::size_t i = 1; i < row.size(); ++i) CHECK(row[i] >= row[i - 1]);
  // Each branch-to-column assignment is a permutation.
  for (const auto& cols : d.branch_column) {
    std::vector<bool> seen(cols.size(), false);
    for (int c : cols) {
      REQUIRE(c >= 0);
      REQUIRE(c < static_cast<int>(cols.size()));
      CHECK(!seen[c]);
      seen[c] = true;
    }
  }
}

TEST_CASE("tracking failure on a hostile threshold asks for grid refinement") {
  auto p = spin::preset("experimental_9p1GHz");
  CHECK_THROWS_AS(ct::level_diagram(p, 0.5, 50.5, 10.0, 0.0, 0.999999), ct::RefineGridError);
}

TEST_CASE("protection profile: flat at the anticrossing, closed-form slope away from it") {
  auto p = spin::preset("experimental_9p1GHz");
  auto rows = ct::protection_profile(p, {7, 8}, 14.0, 34.0, 2.0);
  REQUIRE(rows.size() == 11);
  const auto& at_ct = rows[5];  // 24 mT
  CHECK(at_ct.b_mT == doctest::Approx(24.0));
  CHECK(at_ct.f_GHz == doctest::Approx(9.1).epsilon(1e-9));
  CHECK(std::abs(at_ct.df_dB) < 1e-6);
  CHECK(at_ct.d2f_dB2 > 0.0);
  // Two-level closed form at 14 mT: pair gap 2 sqrt((gap/2)^2 + eps^2) with
  // eps = 4 g muB B - 2 a_z, so |d gap/dB| = 8 g muB |eps| / sqrt(...) per T.
  const double gmu = p.g_j * units::kMuB_GHzPerT;
  const double eps = 4.0 * gmu * 0.014 - 2.0 * p.a_z_GHz;
  const double expect = 8.0 * gmu * std::abs(eps) / std::hypot(9.1 / 2.0, eps) * 1e-3;  // GHz/mT
  CHECK(std::abs(rows[0].df_dB) == doctest::Approx(expect).epsilon(1e-6));
  CHECK(std::abs(rows[0].df_dB) > 1e3 * std::abs(at_ct.df_dB));
}

TEST_CASE("calibration fixed point: targets already met leave parameters untouched") {
  auto p = spin::preset("experimental_9p1GHz");
  ct::CalibrationSettings st;
  st.b_start_mT = 10.0;
  st.b_stop_mT = 40.0;
  auto r = ct::calibrate(p, {{"ct_gap_GHz", 9.1, 1.0}, {"ct_b_min_mT", 24.0, 1.0}},
                         {"tunneling_gap"}, st);
  CHECK(r.already_satisfied);
  CHECK(r.residual < 1e-6);
  CHECK(ct::get_param(r.params, "tunneling_gap") == 9.1);
}

TEST_CASE("calibrating the gap reaches a shifted target") {
  auto p = spin::preset("experimental_9p1GHz");
  ct::CalibrationSettings st;
  st.b_start_mT = 10.0;
  st.b_stop_mT = 40.0;
  auto r = ct::calibrate(p, {{"ct_gap_GHz", 9.5, 1.0}}, {"tunneling_gap"}, st);
  CHECK(r.residual < 1e-6);
  CHECK(ct::get_param(r.params, "tunneling_gap") == doctest::Approx(9.5).epsilon(1e-5));
  for (std::size_t i = 1; i < r.residual_history.size(); ++i)
    CHECK(r.residual_history[i] <= r.residual_history[i - 1]);
}

TEST_CASE("calibrating the hyperfine constant moves the anticrossing field") {
  auto p = spin::preset("experimental_9p1GHz");
  ct::CalibrationSettings st;
  st.b_start_mT = 10.0;
  st.b_stop_mT = 60.0;
  auto r = ct::calibrate(p, {{"ct_b_min_mT", 30.0, 1.0}}, {"a_z"}, st);
  CHECK(r.residual < 1e-6);
  const double expect = 2.0 * p.g_j * units::kMuB_GHzPerT * 0.030;
  CHECK(ct::get_param(r.params, "a_z") == doctest::Approx(expect).epsilon(1e-4));
}

TEST_CASE("infeasible target raises a calibration error carrying the best residual") {
  auto p = spin::preset("experimental_9p1GHz");
  ct::CalibrationSettings st;
  st.b_start_mT = 10.0;
  st.b_stop_mT = 40.0;
  st.max_iterations = 40;
  try {
    ct::calibrate(p, {{"ct_gap_GHz", -5.0, 1.0}}, {"tunneling_gap"}, st);
    FAIL("expected CalibrationError");
  } catch (const ct::CalibrationError& e) {
    CHECK(e.best_residual > 0.0);
  }
}

TEST_SUITE_END();
