#include <cstdio>

#include "ctspin/ct/anticrossing.hpp"
#include "commands.hpp"

using ctspin::io::Table;

// Gap minima of a level pair over a field scan, with the local derivative
// fingerprint (df/dB ~ 0 and positive curvature at a protected point).
//
// Config keys ([ctfind], all optional): b_start_mT/b_stop_mT/b_step_mT
// (1/300/0.5), pair_lo/pair_hi (1-based, 8/9), b_tol_mT (1e-4), e_Vm (0).
int run_ctfind(const RunContext& ctx) {
  const auto params = spin_params(ctx, ctx.preset);
  const double b_start = ctx.cfg.get_double_or("ctfind.b_start_mT", 1.0);
  const double b_stop = ctx.cfg.get_double_or("ctfind.b_stop_mT", 300.0);
  const double b_step = ctx.cfg.get_double_or("ctfind.b_step_mT", 0.5);
  if (b_step <= 0.0 || b_stop <= b_start)
    throw ctspin::io::ConfigError("empty scan range for ctfind.b_start/stop/step", 0,
                                  "ctfind.b_start_mT");
  const int dim = params.dim();
  const int lo = level_index(ctx.cfg, "ctfind.pair_lo", 8, dim);
  const int hi = level_index(ctx.cfg, "ctfind.pair_hi", 9, dim);
  const double b_tol = ctx.cfg.get_double_or("ctfind.b_tol_mT", 1e-4);
  const double e_Vm = ctx.cfg.get_double_or("ctfind.e_Vm", 0.0);

  const auto points =
      ctspin::ct::find_anticrossings(params, {lo, hi}, b_start, b_stop, b_step, e_Vm, b_tol);
  if (points.empty())
    std::fprintf(stderr, "warning: no gap minimum between levels %d and %d in [%g, %g] mT\n",
                 lo + 1, hi + 1, b_start, b_stop);

  Table t({"index", "B_min_mT", "f_CT_GHz", "df_dB_GHz_per_mT", "d2f_dB2_GHz_per_mT2",
           "level_lo", "level_hi"});
  int index = 1;
  for (const auto& p : points)
    t.add({Table::num(index++), Table::num(p.b_min_mT), Table::num(p.f_ct_GHz),
           Table::num(p.df_dB), Table::num(p.d2f_dB2), Table::num(p.pair.first + 1),
           Table::num(p.pair.second + 1)});

  auto meta = make_meta(ctx, "ctspin ct-find", "ctfind-v1");
  meta.notes.push_back({"scan_mT", Table::num(b_start) + ".." + Table::num(b_stop)});
  meta.notes.push_back({"pair", Table::num(lo + 1) + "/" + Table::num(hi + 1)});
  emit_table(ctx, "ctfind", t, meta);
  return 0;
}
