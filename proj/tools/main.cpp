#include <cstdio>
#include <exception>
#include <functional>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "ctspin/io/config.hpp"
#include "commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"ctspin: molecular spin qubit batch simulator"};
  app.require_subcommand(1);
  app.fallthrough();  // global flags may follow the subcommand name

  std::string config_path, preset, out_dir = ".";
  bool json = false;
  int threads = 1;
  app.add_option("--config", config_path, "configuration file (key/value with [sections])")
      ->check(CLI::ExistingFile);
  app.add_option("--preset", preset, "parameter preset")
      ->check(CLI::IsMember(ctspin::spin::preset_names()));
  app.add_option("--out", out_dir, "output directory (created if missing)");
  app.add_flag("--json", json, "also write JSON mirrors of every output");
  app.add_option("--threads", threads, "worker threads for grid sweeps")
      ->check(CLI::Range(1, 256));

  const std::map<std::string, std::function<int(const RunContext&)>> commands = {
      {"spectrum", run_spectrum}, {"ct-find", run_ctfind}, {"calibrate", run_calibrate},
      {"relax", run_relax},       {"dimer", run_dimer},    {"pulse", run_pulse},
      {"check", run_check},
  };
  app.add_subcommand("spectrum", "field-swept level diagram and doublet admixture");
  app.add_subcommand("ct-find", "locate gap minima (clock transitions) of a level pair");
  app.add_subcommand("calibrate", "fit model parameters to anticrossing targets");
  app.add_subcommand("relax", "T1/T2 over a field x temperature grid, with barrier fit");
  app.add_subcommand("dimer", "coupled-pair operating space and bias response");
  app.add_subcommand("pulse", "propagate a pulse sequence and report gate quality");
  app.add_subcommand("check", "run the fast invariant suite");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;  // usage problems exit 2, --help exits 0
  }

  try {
    RunContext ctx;
    if (!config_path.empty()) ctx.cfg = ctspin::io::Config::parse_file(config_path);
    if (!preset.empty()) ctx.cfg.set("run.preset", preset);
    ctx.preset = ctx.cfg.has("run.preset") ? ctx.cfg.get_string("run.preset")
                                           : "experimental_9p1GHz";
    ctx.cfg.set("run.preset", ctx.preset);
    ctx.out_dir = out_dir;
    ctx.json = json;
    ctx.threads = threads;
    return commands.at(app.get_subcommands().front()->get_name())(ctx);
  } catch (const ctspin::io::ConfigError& e) {
    std::fprintf(stderr, "config error: %s", e.what());
    if (e.line > 0) std::fprintf(stderr, " (line %d)", e.line);
    if (!e.field.empty()) std::fprintf(stderr, " (field %s)", e.field.c_str());
    std::fprintf(stderr, "\n");
    return 2;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
