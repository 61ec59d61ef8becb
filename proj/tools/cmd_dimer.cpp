#include <cstdio>

#include "ctspin/dimer/dimer.hpp"
#include "commands.hpp"

using ctspin::io::Table;

namespace {

void add_series(Table& t, const std::vector<ctspin::dimer::DeltaFPoint>& series) {
  for (const auto& p : series)
    t.add({Table::num(p.b_mT), Table::num(p.volts), Table::num(p.energies_GHz[0]),
           Table::num(p.energies_GHz[1]), Table::num(p.energies_GHz[2]),
           Table::num(p.energies_GHz[3]), Table::num(p.deltaf_MHz),
           ctspin::dimer::to_string(p.regime)});
}

}  // namespace

// Operating space of the coupled pair over a field scan, with the bias off
// and on: per-level energies, the middle-pair frequency difference deltaf
// and the regime classification, plus the off/on/difference decomposition
// and the state-composition tables at one working point.
//
// Config keys ([dimer], all optional): b_mT list or
// b_start_mT/b_stop_mT/b_step_mT (4/40/1), volts_on (the calibrated
// operating bias), separation_ang, mode ("scalar" or "full"), target_mI
// (-0.5), compose_b_mT (12), compose_volts (0).
int run_dimer(const RunContext& ctx) {
  namespace dm = ctspin::dimer;
  const auto& cfg = ctx.cfg;

  const auto d = dimer_from(ctx);
  const auto b_grid = grid_from(cfg, "dimer", "b", "mT", 4.0, 40.0, 1.0);
  const double volts_on = cfg.get_double_or("dimer.volts_on", 245.978585826);

  std::vector<dm::DeltaFPoint> off, on;
  off.reserve(b_grid.size());
  on.reserve(b_grid.size());
  for (double b : b_grid) {
    const auto so = dm::identify_operating_space(d, b * 1e-3, 0.0);
    const auto sv = dm::identify_operating_space(d, b * 1e-3, volts_on);
    off.push_back({b, 0.0, so.energies, so.delta_f_MHz, so.regime});
    on.push_back({b, volts_on, sv.energies, sv.delta_f_MHz, sv.regime});
  }

  Table t({"B_mT", "volts", "E00_GHz", "E01_GHz", "E10_GHz", "E11_GHz", "deltaf_MHz", "regime"});
  add_series(t, off);
  add_series(t, on);
  auto meta = make_meta(ctx, "ctspin dimer", "dimer-v1");
  meta.notes.push_back({"volts_on", Table::num(volts_on)});
  meta.notes.push_back({"separation_ang", Table::num(d.geometry.separation_ang())});
  emit_table(ctx, "dimer", t, meta);

  // Bias decomposition: without the field (dipole only), with it, and the
  // switching contribution as their difference.
  Table df({"B_mT", "deltaf_off_MHz", "deltaf_on_MHz", "deltaf_diff_MHz"});
  for (std::size_t i = 0; i < b_grid.size(); ++i)
    df.add({Table::num(b_grid[i]), Table::num(off[i].deltaf_MHz), Table::num(on[i].deltaf_MHz),
            Table::num(on[i].deltaf_MHz - off[i].deltaf_MHz)});
  emit_table(ctx, "deltaf", df, make_meta(ctx, "ctspin dimer", "deltaf-v1"));

  // Composition of the four operating states at one working point.
  const double cb = cfg.get_double_or("dimer.compose_b_mT", 12.0);
  const double cv = cfg.get_double_or("dimer.compose_volts", 0.0);
  const auto os = dm::identify_operating_space(d, cb * 1e-3, cv);
  static const char* kSlotName[4] = {"00", "01", "10", "11"};
  for (int slot = 0; slot < 4; ++slot) {
    const auto table = dm::composition_table(os, slot);
    std::vector<std::string> columns{"site_a"};
    for (const auto& c : table.col_labels) columns.push_back(c);
    Table m(columns);
    for (int ia = 0; ia < table.rows(); ++ia) {
      std::vector<std::string> row{table.row_labels[ia]};
      for (int ib = 0; ib < table.cols(); ++ib) row.push_back(Table::num(table.at(ia, ib)));
      m.add(row);
    }
    auto cmeta = make_meta(ctx, "ctspin dimer", "composition-v1");
    cmeta.notes.push_back({"state", kSlotName[slot]});
    cmeta.notes.push_back({"b_mT", Table::num(cb)});
    cmeta.notes.push_back({"volts", Table::num(cv)});
    emit_table(ctx, std::string("composition_") + kSlotName[slot], m, cmeta);
  }
  return 0;
}
