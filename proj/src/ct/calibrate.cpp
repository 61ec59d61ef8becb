#include "ctspin/ct/calibrate.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ctspin/ct/anticrossing.hpp"

namespace ctspin::ct {

namespace {

std::pair<int, int> parse_kq(const std::string& name, std::size_t prefix_len) {
  const std::string rest = name.substr(prefix_len);
  const auto colon = rest.find(':');
  if (colon == std::string::npos)
    throw std::invalid_argument("calibrate: malformed parameter name '" + name + "'");
  return {std::stoi(rest.substr(0, colon)), std::stoi(rest.substr(colon + 1))};
}

}  // namespace

double get_param(const spin::SpinSystemParams& p, const std::string& name) {
  if (name == "tunneling_gap") return p.cf.get(0, 0);
  if (name == "a_z") return p.a_z_GHz;
  if (name == "g_j") return p.g_j;
  if (name == "sec") return p.sec.get(0, 0);
  if (name.rfind("cf:", 0) == 0) {
    auto kq = parse_kq(name, 3);
    return p.cf.get(kq.first, kq.second);
  }
  if (name.rfind("sec:", 0) == 0) {
    auto kq = parse_kq(name, 4);
    return p.sec.get(kq.first, kq.second);
  }
  throw std::invalid_argument("calibrate: unknown parameter '" + name + "'");
}

void set_param(spin::SpinSystemParams& p, const std::string& name, double value) {
  if (name == "tunneling_gap") {
    p.cf.at(0, 0) = value;
  } else if (name == "a_z") {
    p.a_z_GHz = value;
  } else if (name == "g_j") {
    p.g_j = value;
  } else if (name == "sec") {
    p.sec.db_dE[{0, 0}] = value;
  } else if (name.rfind("cf:", 0) == 0) {
    auto kq = parse_kq(name, 3);
    p.cf.at(kq.first, kq.second) = value;
  } else if (name.rfind("sec:", 0) == 0) {
    auto kq = parse_kq(name, 4);
    p.sec.db_dE[{kq.first, kq.second}] = value;
  } else {
    throw std::invalid_argument("calibrate: unknown parameter '" + name + "'");
  }
}

CalibrationResult calibrate(const spin::SpinSystemParams& initial,
                            const std::vector<CalibrationTarget>& targets,
                            const std::vector<std::string>& free_params,
                            const CalibrationSettings& settings) {
  if (targets.empty()) throw std::invalid_argument("calibrate: no targets");
  if (free_params.empty()) throw std::invalid_argument("calibrate: no free parameters");
  for (const auto& t : targets)
    if (t.observable != "ct_b_min_mT" && t.observable != "ct_gap_GHz")
      throw std::invalid_argument("calibrate: unknown observable '" + t.observable + "'");

  const int n = static_cast<int>(free_params.size());

  auto residual_of = [&](const std::vector<double>& x) -> double {
    spin::SpinSystemParams p = initial;
    for (int i = 0; i < n; ++i) set_param(p, free_params[i], x[i]);
    std::vector<AnticrossingPoint> pts;
    try {
      pts = find_anticrossings(p, settings.pair, settings.b_start_mT, settings.b_stop_mT,
                               settings.b_step_mT);
    } catch (const std::exception&) {
      return 1e9;
    }
    if (static_cast<int>(pts.size()) <= settings.anticrossing_index) return 1e9;
    const AnticrossingPoint& pt = pts[settings.anticrossing_index];
    double ss = 0.0, w = 0.0;
    for (const auto& t : targets) {
      const double obs = t.observable == "ct_b_min_mT" ? pt.b_min_mT : pt.f_ct_GHz;
      const double scale = std::max(std::abs(t.value), 1e-12);
      const double r = (obs - t.value) / scale;
      ss += t.weight * r * r;
      w += t.weight;
    }
    return std::sqrt(ss / w);
  };

  std::vector<double> x0(n);
  for (int i = 0; i < n; ++i) x0[i] = get_param(initial, free_params[i]);

  CalibrationResult result;
  result.params = initial;

  double f0 = residual_of(x0);
  result.residual_history.push_back(f0);
  if (f0 <= settings.tol) {
    // Fixed point: targets already met, parameters returned unchanged.
    result.residual = f0;
    result.already_satisfied = true;
    return result;
  }

  // Nelder-Mead with a deterministic initial simplex.
  std::vector<std::vector<double>> sx(n + 1, x0);
  std::vector<double> sf(n + 1);
  for (int i = 0; i < n; ++i) {
    double& xi = sx[i + 1][i];
    xi = (xi != 0.0) ? xi * 1.05 : 0.00025;
  }
  for (int i = 0; i <= n; ++i) sf[i] = residual_of(sx[i]);

  auto order = [&]() {
    std::vector<int> idx(n + 1);
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) { return sf[a] < sf[b]; });
    std::vector<std::vector<double>> nx(n + 1);
    std::vector<double> nf(n + 1);
    for (int i = 0; i <= n; ++i) {
      nx[i] = sx[idx[i]];
      nf[i] = sf[idx[i]];
    }
    sx = std::move(nx);
    sf = std::move(nf);
  };

  order();
  int iter = 0;
  for (; iter < settings.max_iterations && sf[0] > settings.tol; ++iter) {
    std::vector<double> centroid(n, 0.0);
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < n; ++k) centroid[k] += sx[i][k] / n;

    auto blend = [&](double coef) {
      std::vector<double> p(n);
      for (int k = 0; k < n; ++k) p[k] = centroid[k] + coef * (centroid[k] - sx[n][k]);
      return p;
    };

    std::vector<double> xr = blend(1.0);
    double fr = residual_of(xr);
    if (fr < sf[0]) {
      std::vector<double> xe = blend(2.0);
      double fe = residual_of(xe);
      if (fe < fr) {
        sx[n] = std::move(xe);
        sf[n] = fe;
      } else {
        sx[n] = std::move(xr);
        sf[n] = fr;
      }
    } else if (fr < sf[n - 1]) {
      sx[n] = std::move(xr);
      sf[n] = fr;
    } else {
      std::vector<double> xc = blend(fr < sf[n] ? 0.5 : -0.5);
      double fc = residual_of(xc);
      if (fc < std::min(fr, sf[n])) {
        sx[n] = std::move(xc);
        sf[n] = fc;
      } else {
        for (int i = 1; i <= n; ++i) {
          for (int k = 0; k < n; ++k) sx[i][k] = sx[0][k] + 0.5 * (sx[i][k] - sx[0][k]);
          sf[i] = residual_of(sx[i]);
        }
      }
    }
    order();
    if (result.residual_history.empty() || sf[0] < result.residual_history.back())
      result.residual_history.push_back(sf[0]);
  }

  result.iterations = iter;
  result.residual = sf[0];
  if (sf[0] > settings.tol)
    throw CalibrationError("calibration did not converge after " + std::to_string(iter) +
                               " iterations (best residual " + std::to_string(sf[0]) + ")",
                           sf[0]);
  for (int i = 0; i < n; ++i) set_param(result.params, free_params[i], sx[0][i]);
  return result;
}

}  // namespace ctspin::ct
