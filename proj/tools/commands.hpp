#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "ctspin/ct/calibrate.hpp"
#include "ctspin/dimer/dimer.hpp"
#include "ctspin/io/config.hpp"
#include "ctspin/io/table.hpp"
#include "ctspin/spin/system.hpp"

// Shared state of one CLI invocation.  `cfg` is the effective configuration:
// the parsed --config file with the resolved preset injected under
// run.preset, so its hash captures every input that shapes the output data
// (--out, --json and --threads deliberately stay outside the hash).
struct RunContext {
  ctspin::io::Config cfg;
  std::string preset;
  std::string out_dir = ".";
  bool json = false;
  int threads = 1;
};

int run_spectrum(const RunContext& ctx);
int run_ctfind(const RunContext& ctx);
int run_calibrate(const RunContext& ctx);
int run_relax(const RunContext& ctx);
int run_dimer(const RunContext& ctx);
int run_pulse(const RunContext& ctx);
int run_check(const RunContext& ctx);

// ---------------------------------------------------------------------------
// Helpers shared by the commands

inline std::string out_path(const RunContext& ctx, const std::string& name) {
  return (std::filesystem::path(ctx.out_dir) / name).string();
}

inline ctspin::io::Metadata make_meta(const RunContext& ctx, const std::string& tool,
                                      const std::string& schema) {
  ctspin::io::Metadata m;
  m.tool = tool;
  m.schema = schema;
  m.config_hash = ctx.cfg.hash();
  m.notes.push_back({"preset", ctx.preset});
  return m;
}

// Writes stem.csv and, with --json, stem.json.
inline void emit_table(const RunContext& ctx, const std::string& stem,
                       const ctspin::io::Table& table, const ctspin::io::Metadata& meta) {
  ctspin::io::write_text(out_path(ctx, stem + ".csv"), table.csv(meta));
  if (ctx.json) ctspin::io::write_text(out_path(ctx, stem + ".json"), table.json(meta));
}

// Writes stem.txt and, with --json, stem.json.
inline void emit_report(const RunContext& ctx, const std::string& stem,
                        const std::vector<std::string>& lines,
                        const ctspin::io::Metadata& meta) {
  ctspin::io::write_text(out_path(ctx, stem + ".txt"), ctspin::io::text_report(meta, lines));
  if (ctx.json) ctspin::io::write_text(out_path(ctx, stem + ".json"),
                                       ctspin::io::json_report(meta, lines));
}

// Uniform grid start..stop (inclusive) in steps of `step`.  Throws
// ConfigError (a usage error) when the grid is empty or the step is not
// positive; `field` names the config key family in the diagnostic.
inline std::vector<double> lin_grid(double start, double stop, double step,
                                    const std::string& field) {
  if (step <= 0.0)
    throw ctspin::io::ConfigError("grid step for " + field + " must be positive", 0, field);
  if (stop < start)
    throw ctspin::io::ConfigError("empty grid for " + field + " (stop < start)", 0, field);
  const int n = static_cast<int>((stop - start) / step + 1e-9) + 1;
  std::vector<double> out(n);
  for (int i = 0; i < n; ++i) out[i] = start + i * step;
  return out;
}

// Grid from "<section>.<stem>_<unit>" (explicit comma list) or the
// "<section>.<stem>_start_<unit>" / "_stop_" / "_step_" triple with the
// given defaults; e.g. spectrum.b_mT or spectrum.b_start_mT.
inline std::vector<double> grid_from(const ctspin::io::Config& cfg, const std::string& section,
                                     const std::string& stem, const std::string& unit,
                                     double d_start, double d_stop, double d_step) {
  const std::string base = section + "." + stem;
  if (cfg.has(base + "_" + unit)) return cfg.get_doubles(base + "_" + unit);
  return lin_grid(cfg.get_double_or(base + "_start_" + unit, d_start),
                  cfg.get_double_or(base + "_stop_" + unit, d_stop),
                  cfg.get_double_or(base + "_step_" + unit, d_step),
                  base + "_start/stop/step_" + unit);
}

// Named preset with every "param.*" override applied through the shared
// parameter naming ("param.a_z = 0.84", "param.cf.4.0 = -1.2" -> "cf:4:0").
inline ctspin::spin::SpinSystemParams spin_params(const RunContext& ctx,
                                                  const std::string& preset_name) {
  auto p = ctspin::spin::preset(preset_name);
  for (const auto& key : ctx.cfg.keys_with_prefix("param")) {
    std::string name = key.substr(std::string("param.").size());
    for (auto& c : name)
      if (c == '.') c = ':';
    try {
      ctspin::ct::set_param(p, name, ctx.cfg.get_double(key));
    } catch (const std::invalid_argument& e) {
      throw ctspin::io::ConfigError(e.what(), ctx.cfg.line_of(key), key);
    }
  }
  return p;
}

// Coupled pair from the run preset with the shared [dimer] geometry keys
// applied: separation_ang, mode ("scalar"/"full"), target_mI.
inline ctspin::dimer::DimerSystem dimer_from(const RunContext& ctx) {
  namespace dm = ctspin::dimer;
  auto d = dm::make_dimer(ctx.preset);
  const auto& cfg = ctx.cfg;
  if (cfg.has("dimer.separation_ang"))
    d.geometry.r_ang = {cfg.get_double("dimer.separation_ang"), 0.0, 0.0};
  if (cfg.has("dimer.mode")) {
    const std::string mode = cfg.get_string("dimer.mode");
    if (mode == "scalar") {
      d.mode = dm::CouplingMode::kEffectiveScalar;
    } else if (mode == "full") {
      d.mode = dm::CouplingMode::kFullDipolarOperator;
    } else {
      throw ctspin::io::ConfigError("dimer.mode must be 'scalar' or 'full', got '" + mode + "'",
                                    cfg.line_of("dimer.mode"), "dimer.mode");
    }
  }
  d.target_mI = cfg.get_double_or("dimer.target_mI", d.target_mI);
  return d;
}

// 1-based level index from config (user surfaces are 1-based), returned
// 0-based and range-checked against `dim`.
inline int level_index(const ctspin::io::Config& cfg, const std::string& key, int fallback_1based,
                       int dim) {
  const long v = cfg.get_int_or(key, fallback_1based);
  if (v < 1 || v > dim)
    throw ctspin::io::ConfigError("level index " + key + " = " + std::to_string(v) +
                                      " outside 1.." + std::to_string(dim),
                                  cfg.line_of(key), key);
  return static_cast<int>(v - 1);
}
