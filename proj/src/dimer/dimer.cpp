#include "ctspin/dimer/dimer.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ctspin/linalg/eigh.hpp"
#include "ctspin/units.hpp"

namespace ctspin::dimer {
namespace {

constexpr double kDoubletMJ = 4.0;

double dot3(const std::array<double, 3>& a, const std::array<double, 3>& b) {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

linalg::Vector column(const Matrix& m, int j) {
  linalg::Vector v(m.rows());
  for (int i = 0; i < m.rows(); ++i) v[i] = m(i, j);
  return v;
}

void require_doublet_site(const spin::SpinSystemParams& p, const char* which) {
  if (p.model != spin::ModelKind::kEffectiveDoublet || p.dim() != 16)
    throw std::invalid_argument(std::string("dimer: site ") + which +
                                " must be a 16-level effective-doublet model "
                                "(composed dimension is fixed at 256)");
}

double coupling_prefactor(const DimerSystem& d, double b_T, double volts) {
  return d.mode == CouplingMode::kEffectiveScalar
             ? exchange_scalar_GHz(d, b_T, volts)
             : units::kDipole_GHzAng3 * d.site_a.g_j * d.site_b.g_j /
                   std::pow(d.geometry.separation_ang(), 3) * d.geometry.angular_factor();
}

}  // namespace

double DimerGeometry::separation_ang() const { return std::sqrt(dot3(r_ang, r_ang)); }

double DimerGeometry::angular_factor() const {
  const double r = separation_ang();
  const std::array<double, 3> rhat = {r_ang[0] / r, r_ang[1] / r, r_ang[2] / r};
  return dot3(axis_a, axis_b) - 3.0 * dot3(axis_a, rhat) * dot3(axis_b, rhat);
}

void validate(const DimerGeometry& g) {
  if (!(g.separation_ang() > 0.0))
    throw std::invalid_argument("dimer: site separation must be positive");
  for (const auto* ax : {&g.axis_a, &g.axis_b})
    if (std::abs(std::sqrt(dot3(*ax, *ax)) - 1.0) > 1e-9)
      throw std::invalid_argument("dimer: site axes must be unit vectors");
  if (g.electrode_gap_m <= 0.0)
    throw std::invalid_argument("dimer: electrode gap must be positive");
}

double dipolar_constant_GHz(const DimerGeometry& g, double g_j) {
  validate(g);
  return units::kDipole_GHzAng3 * g_j * g_j / std::pow(g.separation_ang(), 3);
}

DimerSystem make_dimer(const std::string& preset_name) {
  DimerSystem d;
  d.site_a = spin::preset(preset_name);
  d.site_b = d.site_a;
  require_doublet_site(d.site_a, "a");
  return d;
}

SiteStates site_states(const spin::SpinSystemParams& p, double b_T, double e_Vm,
                       double target_mI) {
  SiteStates out;
  out.spec = spin::diagonalize_z(p, b_T, e_Vm);

  const auto iops = spin::angular_momentum_ops(p.nuclear);
  const int edim = p.model == spin::ModelKind::kEffectiveDoublet ? 2 : p.electronic.dim();
  const Matrix iz = linalg::kron(Matrix::identity(edim), iops.jz);

  std::vector<int> sector;
  for (int l = 0; l < out.spec.dim(); ++l) {
    const double mi = linalg::expectation(iz, column(out.spec.states, l)).real();
    if (std::abs(mi - target_mI) < 0.25) sector.push_back(l);
  }
  if (sector.size() != 2)
    throw std::invalid_argument("dimer: expected exactly two levels in the target nuclear "
                                "sector, found " + std::to_string(sector.size()));
  out.lo = sector[0];
  out.hi = sector[1];
  out.moment_lo = spin::magnetic_moment(p, out.spec, out.lo);
  out.moment_hi = spin::magnetic_moment(p, out.spec, out.hi);
  out.transition_GHz = out.spec.gap(out.lo, out.hi);
  return out;
}

double exchange_scalar_GHz(const DimerSystem& d, double b_T, double volts) {
  validate(d.geometry);
  const SiteStates a = site_states(d.site_a, b_T, 0.0, d.target_mI);
  const SiteStates b = site_states(d.site_b, b_T, d.efield_Vm(volts), d.target_mI);
  const double d0 = units::kDipole_GHzAng3 * d.site_a.g_j * d.site_b.g_j /
                    std::pow(d.geometry.separation_ang(), 3);
  return d0 * d.geometry.angular_factor() * a.moment_hi * b.moment_hi /
         (kDoubletMJ * kDoubletMJ);
}

Matrix dipolar_operator(const DimerSystem& d, double b_T, double volts) {
  require_doublet_site(d.site_a, "a");
  require_doublet_site(d.site_b, "b");
  validate(d.geometry);
  const Matrix jza = spin::electronic_jz(d.site_a);
  const Matrix jzb = spin::electronic_jz(d.site_b);
  return coupling_prefactor(d, b_T, volts) * linalg::kron(jza, jzb);
}

Matrix compose(const DimerSystem& d, double b_T, double volts) {
  require_doublet_site(d.site_a, "a");
  require_doublet_site(d.site_b, "b");
  validate(d.geometry);
  const Matrix ha = spin::build_hamiltonian_z(d.site_a, b_T, 0.0);
  const Matrix hb = spin::build_hamiltonian_z(d.site_b, b_T, d.efield_Vm(volts));
  const Matrix id = Matrix::identity(16);
  Matrix h = linalg::kron(ha, id);
  h += linalg::kron(id, hb);
  h += dipolar_operator(d, b_T, volts);
  return h;
}

std::string to_string(Regime r) {
  switch (r) {
    case Regime::kSymmetric: return "symmetric";
    case Regime::kAsymmetric: return "asymmetric";
    case Regime::kMixed: return "mixed";
  }
  return "?";
}

OperatingSpace identify_operating_space(const DimerSystem& d, double b_T, double volts) {
  OperatingSpace os;
  os.site_a = site_states(d.site_a, b_T, 0.0, d.target_mI);
  os.site_b = site_states(d.site_b, b_T, d.efield_Vm(volts), d.target_mI);

  const Matrix h = compose(d, b_T, volts);
  auto eg = linalg::eigh(h);
  os.composed.energies = std::move(eg.values);
  os.composed.states = std::move(eg.vectors);
  const auto la = spin::basis_labels(d.site_a);
  const auto lb = spin::basis_labels(d.site_b);
  os.composed.basis_labels.reserve(256);
  for (const auto& a : la)
    for (const auto& b : lb) os.composed.basis_labels.push_back(a + ";" + b);

  // Product characters |00>, |01>, |10>, |11> (0 = lower pair level).
  os.characters = Matrix(256, 4);
  const std::array<std::pair<int, int>, 4> combos = {{{os.site_a.lo, os.site_b.lo},
                                                      {os.site_a.lo, os.site_b.hi},
                                                      {os.site_a.hi, os.site_b.lo},
                                                      {os.site_a.hi, os.site_b.hi}}};
  for (int c = 0; c < 4; ++c) {
    const auto va = column(os.site_a.spec.states, combos[c].first);
    const auto vb = column(os.site_b.spec.states, combos[c].second);
    for (int i = 0; i < 16; ++i)
      for (int j = 0; j < 16; ++j) os.characters(i * 16 + j, c) = va[i] * vb[j];
  }

  // The character span is an exact invariant subspace (Iz is conserved per
  // site and each sector's electronic space is two-dimensional), so the
  // operating analysis reduces to the projected 4 x 4 block.  Working there
  // also sidesteps an exact degeneracy of the full solve: at V = 0 the
  // sector identity <Jz>^2 + |<lo|Jz|hi>|^2 = MJ^2 pins every sector's upper
  // middle state at the same energy, and the 256-level solver then returns
  // arbitrary mixtures within that cluster.
  const Matrix h4 = linalg::matmul(os.characters.adjoint(),
                                   linalg::matmul(h, os.characters));
  auto eg4 = linalg::eigh(h4);

  // Greedy max-overlap assignment of characters to the four block states.
  std::array<int, 4> state_of_char{};
  {
    std::array<bool, 4> char_done{}, used{};
    for (int round = 0; round < 4; ++round) {
      double best = -1.0;
      int bc = -1, bk = -1;
      for (int c = 0; c < 4; ++c) {
        if (char_done[c]) continue;
        for (int k = 0; k < 4; ++k) {
          if (used[k]) continue;
          const double w = std::norm(eg4.vectors(c, k));
          if (w > best) { best = w; bc = c; bk = k; }
        }
      }
      char_done[bc] = true;
      used[bk] = true;
      state_of_char[bc] = bk;
      os.energies[bc] = eg4.values[bk];
      os.dominant_weight[bc] = best;
    }
  }

  // Representative indices in the composed spectrum by nearest energy (under
  // exact degeneracy any cluster member is equivalent).
  {
    std::vector<bool> used(256, false);
    for (int c = 0; c < 4; ++c) {
      int bl = -1;
      double bd = 0.0;
      for (int l = 0; l < 256; ++l) {
        if (used[l]) continue;
        const double dist = std::abs(os.composed.energies[l] - os.energies[c]);
        if (bl < 0 || dist < bd) { bl = l; bd = dist; }
      }
      used[bl] = true;
      os.levels[c] = bl;
    }
  }

  // Exact operating states in the full product basis, columns per slot.
  os.operating_states = Matrix(256, 4);
  for (int c = 0; c < 4; ++c)
    for (int i = 0; i < 256; ++i) {
      linalg::cplx s = 0.0;
      for (int b = 0; b < 4; ++b) s += os.characters(i, b) * eg4.vectors(b, state_of_char[c]);
      os.operating_states(i, c) = s;
    }

  // Middle-pair classification from the exact block states: the regime names
  // whichever description fits the upper middle state better, a single
  // product character or an (anti)symmetric combination.
  const double split = std::abs(os.energies[2] - os.energies[1]);
  os.middle_splitting_MHz = units::GHz_to_MHz(split);
  const int upper_state = os.energies[2] >= os.energies[1] ? state_of_char[2] : state_of_char[1];
  const linalg::cplx u01 = eg4.vectors(1, upper_state);
  const linalg::cplx u10 = eg4.vectors(2, upper_state);
  const double wp = std::max(std::norm(u01), std::norm(u10));
  const double wsa = std::max(std::norm((u01 + u10) / std::sqrt(2.0)),
                              std::norm((u01 - u10) / std::sqrt(2.0)));
  if (split < 1e-9) {
    os.regime = Regime::kSymmetric;  // degenerate middle pair
  } else if (wp <= 0.5 && wsa <= 0.5) {
    os.regime = Regime::kMixed;
  } else if (wp > wsa) {
    os.regime = Regime::kAsymmetric;
  } else {
    os.regime = Regime::kSymmetric;
  }

  if (os.regime == Regime::kAsymmetric) {
    os.delta_f_MHz = units::GHz_to_MHz(os.energies[2] - os.energies[1]);
  } else {
    // Labels are not individually meaningful; report the middle eigenvalues
    // in ascending order and the unsigned splitting.
    if (os.energies[1] > os.energies[2]) {
      std::swap(os.energies[1], os.energies[2]);
      std::swap(os.levels[1], os.levels[2]);
      std::swap(os.dominant_weight[1], os.dominant_weight[2]);
      for (int i = 0; i < 256; ++i)
        std::swap(os.operating_states(i, 1), os.operating_states(i, 2));
    }
    os.delta_f_MHz = os.middle_splitting_MHz;
  }
  return os;
}

double delta_f_MHz(const DimerSystem& d, double b_T, double volts) {
  return identify_operating_space(d, b_T, volts).delta_f_MHz;
}

namespace {

// Per-level labels "<mI>:<lo|hi>" for a diagonalized 16-level doublet site.
std::vector<std::string> level_labels(const SiteStates& s) {
  const spin::AngularMomentumSpec nuc{3.5};
  const auto iops = spin::angular_momentum_ops(nuc);
  const Matrix iz = linalg::kron(Matrix::identity(2), iops.jz);
  std::vector<std::string> labels(16);
  std::vector<int> seen(8, 0);
  for (int l = 0; l < 16; ++l) {
    const double mi = linalg::expectation(iz, column(s.spec.states, l)).real();
    const int idx = static_cast<int>(std::lround(3.5 - mi));
    labels[l] = spin::m_label(nuc, idx) + (seen[idx]++ ? ":hi" : ":lo");
  }
  return labels;
}

}  // namespace

CompositionTable composition_table(const SiteStates& a, const SiteStates& b,
                                   const linalg::Vector& psi) {
  if (a.spec.dim() != 16 || b.spec.dim() != 16 || psi.size() != 256)
    throw std::invalid_argument("dimer: composition table needs 16-level sites "
                                "and a 256-component state");
  CompositionTable t;
  t.row_labels = level_labels(a);
  t.col_labels = level_labels(b);
  t.w.assign(256, 0.0);
  // Amplitudes in the product of the site eigenbases:
  //   amp(ia, ib) = sum_{sa, sb} conj(Ua(sa, ia)) conj(Ub(sb, ib)) psi(sa*16+sb)
  for (int ia = 0; ia < 16; ++ia)
    for (int ib = 0; ib < 16; ++ib) {
      linalg::cplx amp = 0.0;
      for (int sa = 0; sa < 16; ++sa) {
        const linalg::cplx ua = std::conj(a.spec.states(sa, ia));
        if (ua == linalg::cplx{}) continue;
        linalg::cplx inner = 0.0;
        for (int sb = 0; sb < 16; ++sb)
          inner += std::conj(b.spec.states(sb, ib)) * psi[static_cast<std::size_t>(sa) * 16 + sb];
        amp += ua * inner;
      }
      t.w[static_cast<std::size_t>(ia) * 16 + ib] = std::norm(amp);
    }
  return t;
}

CompositionTable composition_table(const OperatingSpace& os, int slot) {
  if (slot < 0 || slot > 3)
    throw std::invalid_argument("dimer: operating slot must be 0..3");
  return composition_table(os.site_a, os.site_b, column(os.operating_states, slot));
}

double CompositionTable::total() const {
  double s = 0.0;
  for (double x : w) s += x;
  return s;
}

ExchangeProfile exchange_profile(const DimerSystem& d, double b_start_mT, double b_stop_mT,
                                 double b_step_mT, double volts) {
  if (!(b_step_mT > 0.0) || b_stop_mT < b_start_mT)
    throw std::invalid_argument("dimer: bad field grid");
  validate(d.geometry);
  const double d0 = units::kDipole_GHzAng3 * d.site_a.g_j * d.site_b.g_j /
                    std::pow(d.geometry.separation_ang(), 3) * d.geometry.angular_factor() /
                    (kDoubletMJ * kDoubletMJ);
  ExchangeProfile prof;
  const int n = static_cast<int>(std::floor((b_stop_mT - b_start_mT) / b_step_mT + 1e-9)) + 1;
  for (int k = 0; k < n; ++k) {
    const double b_mT = b_start_mT + k * b_step_mT;
    const auto sa = spin::diagonalize_z(d.site_a, units::mT_to_T(b_mT), 0.0);
    const auto sb = spin::diagonalize_z(d.site_b, units::mT_to_T(b_mT),
                                        d.efield_Vm(volts));
    std::array<double, 16> row{};
    for (int l = 0; l < 16; ++l) {
      const double ma = spin::magnetic_moment(d.site_a, sa, l);
      const double mb = spin::magnetic_moment(d.site_b, sb, l);
      row[l] = units::GHz_to_MHz(d0 * ma * mb);
    }
    prof.b_mT.push_back(b_mT);
    prof.j_MHz.push_back(row);
  }
  return prof;
}

std::vector<DeltaFPoint> delta_f_profile(const DimerSystem& d, double b_start_mT,
                                         double b_stop_mT, double b_step_mT, double volts) {
  if (!(b_step_mT > 0.0) || b_stop_mT < b_start_mT)
    throw std::invalid_argument("dimer: bad field grid");
  std::vector<DeltaFPoint> out;
  const int n = static_cast<int>(std::floor((b_stop_mT - b_start_mT) / b_step_mT + 1e-9)) + 1;
  for (int k = 0; k < n; ++k) {
    const double b_mT = b_start_mT + k * b_step_mT;
    const auto os = identify_operating_space(d, units::mT_to_T(b_mT), volts);
    DeltaFPoint p;
    p.b_mT = b_mT;
    p.volts = volts;
    p.energies_GHz = os.energies;
    p.deltaf_MHz = os.delta_f_MHz;
    p.regime = os.regime;
    out.push_back(p);
  }
  return out;
}

}  // namespace ctspin::dimer
