#include <cstdio>

#include "ctspin/io/table.hpp"
#include "ctspin/spin/system.hpp"
#include "commands.hpp"

using ctspin::io::Table;

// Level diagram over a field grid: sorted energies of every level, plus the
// doublet admixture weights of a monitored pair (its two levels split
// |+MJ>/|-MJ> weight as alpha^2/beta^2).
//
// Config keys ([spectrum], all optional): b_mT explicit list or
// b_start_mT/b_stop_mT/b_step_mT (0/300/1), e_Vm (0), pair_lo/pair_hi
// (1-based levels, 8/9).
int run_spectrum(const RunContext& ctx) {
  const auto params = spin_params(ctx, ctx.preset);
  const auto b_grid = grid_from(ctx.cfg, "spectrum", "b", "mT", 0.0, 300.0, 1.0);
  const double e_Vm = ctx.cfg.get_double_or("spectrum.e_Vm", 0.0);
  const int dim = params.dim();
  const int lo = level_index(ctx.cfg, "spectrum.pair_lo", 8, dim);
  const int hi = level_index(ctx.cfg, "spectrum.pair_hi", 9, dim);

  std::vector<std::string> columns{"B_mT"};
  for (int k = 1; k <= dim; ++k) {
    char name[16];
    std::snprintf(name, sizeof name, "E%02d_GHz", k);
    columns.push_back(name);
  }
  Table levels(columns);
  Table admix({"B_mT", "alpha_sq_lo", "beta_sq_lo", "alpha_sq_hi", "beta_sq_hi"});

  for (double b : b_grid) {
    const auto s = ctspin::spin::diagonalize_z(params, b * 1e-3, e_Vm);
    std::vector<std::string> row{Table::num(b)};
    for (int k = 0; k < dim; ++k) row.push_back(Table::num(s.energies[k]));
    levels.add(row);
    const auto wlo = ctspin::spin::doublet_admixture(params, s, lo);
    const auto whi = ctspin::spin::doublet_admixture(params, s, hi);
    admix.add({Table::num(b), Table::num(wlo[0]), Table::num(wlo[1]), Table::num(whi[0]),
               Table::num(whi[1])});
  }

  auto meta = make_meta(ctx, "ctspin spectrum", "spectrum-v1");
  meta.notes.push_back({"b_mT", Table::num(b_grid.front()) + ".." + Table::num(b_grid.back())});
  meta.notes.push_back({"e_Vm", Table::num(e_Vm)});
  emit_table(ctx, "spectrum", levels, meta);

  auto ameta = make_meta(ctx, "ctspin spectrum", "admixture-v1");
  ameta.notes.push_back({"pair", Table::num(lo + 1) + "/" + Table::num(hi + 1)});
  emit_table(ctx, "admixture", admix, ameta);
  return 0;
}
