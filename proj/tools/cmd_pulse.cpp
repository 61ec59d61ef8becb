#include <algorithm>
#include <set>
#include <string>

#include "ctspin/io/config.hpp"
#include "ctspin/pulse/pulse.hpp"
#include "commands.hpp"

using ctspin::io::Config;
using ctspin::io::ConfigError;
using ctspin::io::Table;
namespace pl = ctspin::pulse;

namespace {

void require_known_keys(const Config& cfg, const std::string& section,
                        const std::set<std::string>& allowed) {
  for (const auto& key : cfg.keys_with_prefix(section)) {
    const std::string field = key.substr(section.size() + 1);
    if (!allowed.count(field))
      throw ConfigError("unknown field '" + field + "' in [" + section + "]",
                        cfg.line_of(key), key);
  }
}

pl::Frame parse_frame(const Config& cfg, const std::string& key, pl::Frame fallback) {
  if (!cfg.has(key)) return fallback;
  const std::string v = cfg.get_string(key);
  if (v == "rwa") return pl::Frame::kRotatingWave;
  if (v == "lab") return pl::Frame::kLab;
  throw ConfigError("frame must be 'rwa' or 'lab', got '" + v + "'", cfg.line_of(key), key);
}

// Declarative sequence file: a [run] section (initial_slot, frame,
// lab_dt_ns, t1_us, t2_us) plus [segment.1] .. [segment.N] sections, each
// with kind = microwave | efield | free and the kind's fields.  Malformed
// content raises ConfigError carrying the line and field.
pl::PulseSequence load_sequence(const Config& sf, const pl::FourLevelSystem& sys) {
  for (const auto& key : sf.keys()) {
    if (key.compare(0, 4, "run.") != 0 && key.compare(0, 8, "segment.") != 0)
      throw ConfigError("unexpected key outside [run]/[segment.N]: " + key, sf.line_of(key),
                        key);
  }

  pl::PulseSequence seq;
  require_known_keys(sf, "run", {"initial_slot", "frame", "lab_dt_ns", "t1_us", "t2_us"});
  seq.initial_slot = static_cast<int>(sf.get_int_or("run.initial_slot", 0));
  seq.frame = parse_frame(sf, "run.frame", pl::Frame::kRotatingWave);
  seq.lab_dt_ns = sf.get_double_or("run.lab_dt_ns", seq.lab_dt_ns);
  const double t1 = sf.get_double_or("run.t1_us", 0.0);
  const double t2 = sf.get_double_or("run.t2_us", 0.0);
  if (t1 > 0.0 || t2 > 0.0) seq.dissipation = pl::Dissipation{t1, t2};

  std::set<int> indices;
  for (const auto& key : sf.keys_with_prefix("segment")) {
    const std::size_t start = std::string("segment.").size();
    const std::size_t dot = key.find('.', start);
    const std::string label = key.substr(start, dot - start);
    int n = 0;
    try {
      std::size_t used = 0;
      n = std::stoi(label, &used);
      if (used != label.size() || n < 1) throw std::invalid_argument(label);
    } catch (const std::exception&) {
      throw ConfigError("segment sections must be [segment.N] with N >= 1, got '" + label + "'",
                        sf.line_of(key), key);
    }
    if (dot == std::string::npos)
      throw ConfigError("segment entries belong in sections: [segment." + label + "]",
                        sf.line_of(key), key);
    indices.insert(n);
  }
  if (indices.empty()) throw ConfigError("sequence file defines no segments", 0, "segment.1");
  if (*indices.rbegin() != static_cast<int>(indices.size()))
    throw ConfigError("segment indices must run 1..N without gaps", 0, "segment");

  for (int n = 1; n <= static_cast<int>(indices.size()); ++n) {
    const std::string sec = "segment." + std::to_string(n);
    const std::string kind = sf.get_string(sec + ".kind");
    if (kind == "microwave") {
      require_known_keys(sf, sec, {"kind", "from", "to", "omega_MHz", "carrier_GHz",
                                   "phase_rad", "duration_ns"});
      pl::MicrowavePulse mw;
      mw.from = static_cast<int>(sf.get_int_or(sec + ".from", mw.from));
      mw.to = static_cast<int>(sf.get_int_or(sec + ".to", mw.to));
      mw.omega_MHz = sf.get_double_or(sec + ".omega_MHz", mw.omega_MHz);
      mw.carrier_GHz = sf.get_double_or(sec + ".carrier_GHz", 0.0);
      mw.phase_rad = sf.get_double_or(sec + ".phase_rad", 0.0);
      mw.duration_ns = sf.get_double_or(sec + ".duration_ns", 0.0);
      seq.segments.push_back(mw);
    } else if (kind == "efield") {
      require_known_keys(sf, sec, {"kind", "voltage_V", "duration_ns", "ramp_ns"});
      pl::EfieldStep ef;
      if (sf.get_string_or(sec + ".voltage_V", "0") == "on") {
        ef.volts = sys.volts_on();
      } else {
        ef.volts = sf.get_double_or(sec + ".voltage_V", 0.0);
      }
      ef.duration_ns = sf.get_double_or(sec + ".duration_ns", 0.0);
      ef.ramp_ns = sf.get_double_or(sec + ".ramp_ns", 0.0);
      seq.segments.push_back(ef);
    } else if (kind == "free") {
      require_known_keys(sf, sec, {"kind", "duration_ns"});
      seq.segments.push_back(pl::FreeEvolution{sf.get_double(sec + ".duration_ns")});
    } else {
      throw ConfigError("unknown segment kind '" + kind + "'", sf.line_of(sec + ".kind"),
                        sec + ".kind");
    }
  }
  return seq;
}

std::string fmt_bool(bool b) { return b ? "true" : "false"; }

}  // namespace

// Propagates a pulse sequence on the four-level operating space and reports
// final populations, entanglement figures and the per-segment log.  The
// sequence comes from pulse.sequence (a declarative file) or the built-in
// pulse.protocol ("bell_psi" default, or "bell_phi").
//
// Config keys ([pulse], all optional unless noted): b_mT (12), volts_on
// (the calibrated operating bias), sequence (file path), protocol,
// omega_MHz, pi_duration_ns, swap_wait_ns, frame, t1_us, t2_us; plus the
// shared [dimer] geometry keys.
int run_pulse(const RunContext& ctx) {
  const auto& cfg = ctx.cfg;
  const double b_T = cfg.get_double_or("pulse.b_mT", 12.0) * 1e-3;
  const double volts_on = cfg.get_double_or("pulse.volts_on", pl::kDefaultOperatingVolts);
  const pl::FourLevelSystem sys(dimer_from(ctx), b_T, volts_on);

  pl::PulseSequence seq;
  std::string source;
  std::vector<std::pair<std::string, std::string>> extra_notes;
  if (cfg.has("pulse.sequence")) {
    const std::string path = cfg.get_string("pulse.sequence");
    const std::string bytes = ctspin::io::read_text(path);
    seq = load_sequence(Config::parse(bytes), sys);
    source = path;
    extra_notes.push_back({"sequence_hash", ctspin::io::fnv1a_hex(bytes)});
  } else {
    pl::BellProtocol proto;
    const std::string name = cfg.get_string_or("pulse.protocol", "bell_psi");
    if (name == "bell_psi") {
      proto.variant = pl::BellVariant::kPsi;
    } else if (name == "bell_phi") {
      proto.variant = pl::BellVariant::kPhi;
    } else {
      throw ConfigError("pulse.protocol must be 'bell_psi' or 'bell_phi', got '" + name + "'",
                        cfg.line_of("pulse.protocol"), "pulse.protocol");
    }
    proto.omega_MHz = cfg.get_double_or("pulse.omega_MHz", proto.omega_MHz);
    proto.pi_duration_ns = cfg.get_double_or("pulse.pi_duration_ns", proto.pi_duration_ns);
    proto.swap_wait_ns = cfg.get_double_or("pulse.swap_wait_ns", proto.swap_wait_ns);
    proto.frame = parse_frame(cfg, "pulse.frame", proto.frame);
    const double t1 = cfg.get_double_or("pulse.t1_us", 0.0);
    const double t2 = cfg.get_double_or("pulse.t2_us", 0.0);
    if (t1 > 0.0 || t2 > 0.0) proto.dissipation = pl::Dissipation{t1, t2};
    seq = pl::bell_sequence(sys, proto);
    source = name;
  }

  const auto result = pl::propagate_sequence(sys, seq);
  const double f_psi = pl::bell_fidelity(result.rho, pl::BellVariant::kPsi);
  const double f_phi = pl::bell_fidelity(result.rho, pl::BellVariant::kPhi);
  std::string conc;
  try {
    conc = Table::num(pl::concurrence(result.rho));
  } catch (const std::invalid_argument& e) {
    conc = std::string("invalid (") + e.what() + ")";
  }
  const auto mono_a = pl::monomer_cancellation_check(sys, seq, false);
  const auto mono_b = pl::monomer_cancellation_check(sys, seq, true);

  std::vector<std::string> lines;
  lines.push_back("sequence: " + source);
  lines.push_back("segments: " + Table::num(static_cast<long>(result.log.size())));
  lines.push_back("closed_system: " + fmt_bool(result.closed));
  lines.push_back("total_duration_ns: " + Table::num(result.total_duration_ns));
  if (result.closed)
    lines.push_back("unitary_defect: " + Table::num(result.unitary_defect));
  lines.push_back("populations: 00 " + Table::num(result.populations[0]) + "  01 " +
                  Table::num(result.populations[1]) + "  10 " +
                  Table::num(result.populations[2]) + "  11 " +
                  Table::num(result.populations[3]));
  lines.push_back("fidelity_psi: " + Table::num(f_psi));
  lines.push_back("fidelity_phi: " + Table::num(f_phi));
  lines.push_back("concurrence: " + conc);
  lines.push_back("monomer_unbiased: fidelity " + Table::num(mono_a.return_fidelity) +
                  ", turns " + Table::num(mono_a.rotation_turns) + ", compliant " +
                  fmt_bool(mono_a.compliant));
  lines.push_back("monomer_biased: fidelity " + Table::num(mono_b.return_fidelity) +
                  ", turns " + Table::num(mono_b.rotation_turns) + ", compliant " +
                  fmt_bool(mono_b.compliant));

  auto meta = make_meta(ctx, "ctspin pulse", "pulse-v1");
  for (const auto& n : extra_notes) meta.notes.push_back(n);
  emit_report(ctx, "pulse_report", lines, meta);

  Table seg({"seg", "kind", "t_start_ns", "duration_ns", "volts", "carrier_GHz", "p00", "p01",
             "p10", "p11"});
  int index = 1;
  for (const auto& l : result.log)
    seg.add({Table::num(index++), l.kind, Table::num(l.t_start_ns), Table::num(l.duration_ns),
             Table::num(l.volts), Table::num(l.carrier_GHz), Table::num(l.populations[0]),
             Table::num(l.populations[1]), Table::num(l.populations[2]),
             Table::num(l.populations[3])});
  auto smeta = make_meta(ctx, "ctspin pulse", "segments-v1");
  for (const auto& n : extra_notes) smeta.notes.push_back(n);
  emit_table(ctx, "pulse_segments", seg, smeta);
  return 0;
}
