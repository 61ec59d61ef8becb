#include "ctspin/ct/anticrossing.hpp"

#include <cmath>
#include <stdexcept>

#include "ctspin/units.hpp"

namespace ctspin::ct {

namespace {

constexpr double kGolden = 0.6180339887498949;  // (sqrt(5) - 1) / 2

double golden_min(const std::function<double(double)>& f, double a, double b, double xtol) {
  double x1 = b - kGolden * (b - a);
  double x2 = a + kGolden * (b - a);
  double f1 = f(x1), f2 = f(x2);
  while (b - a > xtol) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - kGolden * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + kGolden * (b - a);
      f2 = f(x2);
    }
  }
  return 0.5 * (a + b);
}

}  // namespace

double gap_at(const spin::SpinSystemParams& params, std::pair<int, int> pair, double b_mT,
              double e_Vm) {
  if (pair.first < 0 || pair.second <= pair.first || pair.second >= params.dim())
    throw std::invalid_argument("gap_at: bad level pair");
  spin::Spectrum s = spin::diagonalize_z(params, units::mT_to_T(b_mT), e_Vm);
  return s.gap(pair.first, pair.second);
}

std::vector<AnticrossingPoint> find_anticrossings(const spin::SpinSystemParams& params,
                                                  std::pair<int, int> pair, double b_start_mT,
                                                  double b_stop_mT, double b_step_mT, double e_Vm,
                                                  double b_tol_mT) {
  if (b_step_mT <= 0.0 || b_tol_mT <= 0.0)
    throw std::invalid_argument("find_anticrossings: steps must be positive");
  if (b_stop_mT <= b_start_mT) throw std::invalid_argument("find_anticrossings: empty scan range");

  auto gap = [&](double b) { return gap_at(params, pair, b, e_Vm); };

  const int npts = static_cast<int>(std::floor((b_stop_mT - b_start_mT) / b_step_mT + 1e-9)) + 1;
  std::vector<double> g(npts);
  for (int i = 0; i < npts; ++i) g[i] = gap(b_start_mT + i * b_step_mT);

  std::vector<AnticrossingPoint> found;
  for (int i = 1; i + 1 < npts; ++i) {
    if (!(g[i] <= g[i - 1] && g[i] <= g[i + 1])) continue;
    if (g[i] == g[i - 1] && g[i] == g[i + 1]) continue;  // flat plateau, not a bracket
    const double a = b_start_mT + (i - 1) * b_step_mT;
    const double c = b_start_mT + (i + 1) * b_step_mT;
    AnticrossingPoint pt;
    pt.pair = pair;
    pt.b_min_mT = golden_min(gap, a, c, b_tol_mT);
    pt.f_ct_GHz = gap(pt.b_min_mT);
    const double h = 0.01;  // mT, central-difference step
    const double gp = gap(pt.b_min_mT + h), gm = gap(pt.b_min_mT - h);
    pt.df_dB = (gp - gm) / (2.0 * h);
    pt.d2f_dB2 = (gp - 2.0 * pt.f_ct_GHz + gm) / (h * h);
    found.push_back(pt);
  }
  return found;
}

std::vector<ProtectionRow> protection_profile(const std::function<double(double)>& f_of_bmT,
                                              double b_start_mT, double b_stop_mT,
                                              double b_step_mT, double fd_step_mT) {
  if (b_step_mT <= 0.0 || fd_step_mT <= 0.0)
    throw std::invalid_argument("protection_profile: steps must be positive");
  std::vector<ProtectionRow> rows;
  const int npts = static_cast<int>(std::floor((b_stop_mT - b_start_mT) / b_step_mT + 1e-9)) + 1;
  rows.reserve(npts);
  for (int i = 0; i < npts; ++i) {
    const double b = b_start_mT + i * b_step_mT;
    const double f0 = f_of_bmT(b);
    const double fp = f_of_bmT(b + fd_step_mT);
    const double fm = f_of_bmT(b - fd_step_mT);
    rows.push_back({b, f0, (fp - fm) / (2.0 * fd_step_mT), (fp - 2.0 * f0 + fm) / (fd_step_mT * fd_step_mT)});
  }
  return rows;
}

std::vector<ProtectionRow> protection_profile(const spin::SpinSystemParams& params,
                                              std::pair<int, int> pair, double b_start_mT,
                                              double b_stop_mT, double b_step_mT, double e_Vm,
                                              double fd_step_mT) {
  return protection_profile([&](double b) { return gap_at(params, pair, b, e_Vm); }, b_start_mT,
                            b_stop_mT, b_step_mT, fd_step_mT);
}

}  // namespace ctspin::ct
