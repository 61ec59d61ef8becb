#include <sstream>

#include "ctspin/ct/calibrate.hpp"
#include "commands.hpp"

using ctspin::io::Table;

namespace {

std::vector<std::string> split_names(const std::string& csv) {
  std::vector<std::string> out;
  std::istringstream in(csv);
  std::string item;
  while (std::getline(in, item, ',')) {
    std::size_t a = item.find_first_not_of(" \t");
    std::size_t b = item.find_last_not_of(" \t");
    if (a != std::string::npos) out.push_back(item.substr(a, b - a + 1));
  }
  return out;
}

}  // namespace

// Fits named free parameters until the monitored anticrossing hits the
// targets; reports the converged values and the residual history.
//
// Config keys ([calibrate], all optional): target_b_min_mT (24),
// target_gap_GHz (the preset tunneling gap), weight_b/weight_gap (1),
// free ("a_z", comma-separated parameter names), pair_lo/pair_hi (8/9),
// anticrossing_index (1-based, 1), b_start_mT/b_stop_mT/b_step_mT (1/300/1),
// tol (1e-6), max_iterations (400).
int run_calibrate(const RunContext& ctx) {
  namespace ct = ctspin::ct;
  const auto initial = spin_params(ctx, ctx.preset);
  const auto& cfg = ctx.cfg;

  std::vector<ct::CalibrationTarget> targets;
  targets.push_back({"ct_b_min_mT", cfg.get_double_or("calibrate.target_b_min_mT", 24.0),
                     cfg.get_double_or("calibrate.weight_b", 1.0)});
  targets.push_back(
      {"ct_gap_GHz", cfg.get_double_or("calibrate.target_gap_GHz", initial.tunneling_gap()),
       cfg.get_double_or("calibrate.weight_gap", 1.0)});

  const auto free_params = split_names(cfg.get_string_or("calibrate.free", "a_z"));
  if (free_params.empty())
    throw ctspin::io::ConfigError("calibrate.free lists no parameters", 0, "calibrate.free");
  for (const auto& name : free_params) ct::get_param(initial, name);  // validates names

  ct::CalibrationSettings settings;
  const int dim = initial.dim();
  settings.pair = {level_index(cfg, "calibrate.pair_lo", 8, dim),
                   level_index(cfg, "calibrate.pair_hi", 9, dim)};
  settings.anticrossing_index =
      static_cast<int>(cfg.get_int_or("calibrate.anticrossing_index", 1)) - 1;
  settings.b_start_mT = cfg.get_double_or("calibrate.b_start_mT", 1.0);
  settings.b_stop_mT = cfg.get_double_or("calibrate.b_stop_mT", 300.0);
  settings.b_step_mT = cfg.get_double_or("calibrate.b_step_mT", 1.0);
  settings.tol = cfg.get_double_or("calibrate.tol", 1e-6);
  settings.max_iterations = static_cast<int>(cfg.get_int_or("calibrate.max_iterations", 400));

  const auto result = ct::calibrate(initial, targets, free_params, settings);

  std::vector<std::string> lines;
  lines.push_back("targets:");
  for (const auto& t : targets)
    lines.push_back("  " + t.observable + " = " + Table::num(t.value) +
                    "  (weight " + Table::num(t.weight) + ")");
  lines.push_back("free parameters:");
  for (const auto& name : free_params)
    lines.push_back("  " + name + ": " + Table::num(ct::get_param(initial, name)) + " -> " +
                    Table::num(ct::get_param(result.params, name)));
  lines.push_back("iterations: " + Table::num(result.iterations));
  lines.push_back("residual: " + Table::num(result.residual));
  lines.push_back(std::string("already_satisfied: ") +
                  (result.already_satisfied ? "true" : "false"));
  lines.push_back("residual history:");
  for (std::size_t i = 0; i < result.residual_history.size(); ++i)
    lines.push_back("  " + Table::num(static_cast<long>(i + 1)) + "  " +
                    Table::num(result.residual_history[i]));

  auto meta = make_meta(ctx, "ctspin calibrate", "calibrate-v1");
  emit_report(ctx, "calibrate_report", lines, meta);

  Table history({"step", "residual"});
  for (std::size_t i = 0; i < result.residual_history.size(); ++i)
    history.add({Table::num(static_cast<long>(i + 1)), Table::num(result.residual_history[i])});
  emit_table(ctx, "calibrate_history", history,
             make_meta(ctx, "ctspin calibrate", "calibrate-history-v1"));
  return 0;
}
