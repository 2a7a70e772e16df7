// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <limits>
#include <numbers>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/QR>

#include "entsep/entsep.hpp"

using namespace entsep;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
  std::vector<std::string> notes;
};

int g_failures = 0;

void run(const std::string& id, const std::string& title, double budget_s, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o.pass = false;
    o.detail = std::string("exception: ") + e.what();
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const bool in_time = secs <= budget_s;
  const bool pass = o.pass && in_time;
  if (!pass) ++g_failures;
  char timing[96];
  std::snprintf(timing, sizeof timing, "%.2f s of %.0f s", secs, budget_s);
  std::cout << id << ' ' << (pass ? "PASS" : "FAIL") << "  " << title << ": " << o.detail << " [" << timing
            << (in_time ? "" : ", over budget") << "]\n";
  for (const auto& n : o.notes) std::cout << "    " << n << '\n';
  std::cout.flush();
}

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

ComplexMatrix random_matrix(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  ComplexMatrix m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = Complex(g(rng), g(rng));
  return m;
}

ComplexMatrix random_unitary(int n, std::mt19937_64& rng) {
  Eigen::MatrixXcd g = random_matrix(n, rng);
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(g);
  return qr.householderQ();
}

// X^a Z^b on C^d.
ComplexMatrix weyl(int d, int a, int b) {
  ComplexMatrix m = ComplexMatrix::Zero(d, d);
  for (int k = 0; k < d; ++k) m((k + a) % d, k) = std::polar(1.0, 2.0 * std::numbers::pi * b * k / d);
  return m;
}

// Separable, with maximally mixed B marginal.
DensityMatrix twirled_separable(const DimSpec& dims, std::mt19937_64& rng) {
  const DensityMatrix sigma = random_separable(dims, 0, rng);
  const int db = dims[1];
  ComplexMatrix acc = ComplexMatrix::Zero(dims.total(), dims.total());
  for (int a = 0; a < db; ++a)
    for (int b = 0; b < db; ++b) {
      const ComplexMatrix g = kron(random_unitary(dims[0], rng), weyl(db, a, b));
      acc += g * sigma.matrix() * g.adjoint();
    }
  acc /= static_cast<double>(db * db);
  return DensityMatrix(0.5 * (acc + acc.adjoint()), dims);
}

DensityMatrix octahedron_state(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (;;) {
    const double t1 = u(rng), t2 = u(rng), t3 = u(rng);
    if (std::abs(t1) + std::abs(t2) + std::abs(t3) <= 1.0) return bell_diagonal({t1, t2, t3});
  }
}

DensityMatrix so3_separable(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const AntisymmetricUnitary v = spin_flip_V(4);
  for (;;) {
    const double p = u(rng), q = u(rng), r = u(rng);
    if (p + q + r > 1.0) continue;
    const DensityMatrix rho = so3_invariant_4x4({p, q, r});
    if (ppt_criterion(rho).margin > 1e-6 && breuer_operator_criterion(rho, Side::B, v).margin > 1e-6) return rho;
  }
}

// ---------------------------------------------------------------------------

Outcome ac1() {
  std::mt19937_64 rng(101);
  double dev = 0.0;
  const AntisymmetricUnitary v4 = canonical_V(4);
  for (int k = 0; k < 100; ++k) {
    const ComplexMatrix x = random_matrix(4, rng);
    const ComplexMatrix plus = breuer_hall(x, v4, MapSign::Plus);
    const ComplexMatrix minus = breuer_hall(x, v4, MapSign::Minus);
    dev = std::max(dev, max_abs_diff(reduction_map(x), 0.5 * (plus + minus)));
    dev = std::max(dev, max_abs_diff(time_reversal(x, v4), 0.5 * (plus - minus)));
  }
  const AntisymmetricUnitary v2 = canonical_V(2);
  for (int d : {2, 3, 4}) {
    for (int k = 0; k < 100; ++k) {
      const DensityMatrix rho = random_density(DimSpec{2, d}, rng);
      const ComplexMatrix lhs = rho.matrix() + partial_time_reversal(rho, 0, v2);
      dev = std::max(dev, max_abs_diff(lhs, kron(identity(2), rho.marginal(1))));
    }
  }
  for (int k = 0; k < 100; ++k) {
    const ComplexVector psi = random_unit_vector(2, rng);
    const ComplexMatrix proj = psi * psi.adjoint();
    dev = std::max(dev, breuer_hall(proj, v2, MapSign::Minus).cwiseAbs().maxCoeff());
  }
  Outcome o;
  o.pass = dev <= 1e-10;
  o.detail = "max deviation " + sci(dev) + " (tol 1e-10)";
  return o;
}

Outcome ac2() {
  Outcome o;
  std::ostringstream d;
  double dev = 0.0;
  for (int dim : {2, 4, 6}) {
    const DensityMatrix p = max_entangled(dim);
    const ComplexMatrix pt = partial_time_reversal(p, 0, canonical_V(dim));
    const double v = (p.matrix() * pt).trace().real();
    dev = std::max(dev, std::abs(v + 1.0 / dim));
    d << "d=" << dim << ": " << v << "  ";
  }
  const DensityMatrix singlet = bell_projector(BellState::PsiMinus);
  const CriterionReport q = quadratic_criterion(singlet, Side::B, canonical_V(2));
  dev = std::max(dev, std::abs(q.lhs + 0.5));
  o.pass = dev <= 1e-12 && !q.satisfied;
  d << "singlet Tr(rho rho^tau) = " << q.lhs << (q.satisfied ? " satisfied" : " violated");
  o.detail = d.str();
  return o;
}

struct Worst {
  double margin = std::numeric_limits<double>::infinity();
  std::string what;
  long checked = 0;
  long skipped = 0;

  void consider(const CriterionReport& r, const std::string& ctx) {
    if (r.assumption_ok && !*r.assumption_ok) {
      ++skipped;
      return;
    }
    ++checked;
    if (r.margin < margin) {
      margin = r.margin;
      what = r.name + (r.alpha ? "_a" + sci(*r.alpha) : "") + " " + ctx;
    }
  }
  void consider_value(double v, bool assumption, const std::string& what_) {
    if (!assumption) {
      ++skipped;
      return;
    }
    ++checked;
    if (v < margin) {
      margin = v;
      what = what_;
    }
  }
};

struct WitnessCase {
  MultiCopyWitness w;
  Side side;
  AntisymmetricUnitary u;
  // Which scalar criterion carries the assumption: 0 none, 3 fact3, 4 fact4.
  int assumption_from;
  int alpha;
};

std::vector<WitnessCase> soundness_witnesses(const DimSpec& dims) {
  std::vector<WitnessCase> out;
  for (Side side : {Side::B, Side::A}) {
    const int tau_dim = dims[side == Side::B ? 0 : 1];
    for (int a : {2, 3})
      out.push_back({build_witness(tableaux::entropic(dims, a, side), dims), side, canonical_V(2), 0, a});
    if (tau_dim % 2 != 0) continue;
    const AntisymmetricUnitary u = canonical_V(tau_dim);
    for (int a : {2, 3}) out.push_back({build_witness(tableaux::fact3(dims, a, side, u), dims), side, u, 3, a});
    out.push_back({build_witness(tableaux::fact4(dims, 3, side, u), dims), side, u, 4, 3});
    out.push_back({build_witness(tableaux::quadratic(dims, side, u), dims), side, u, 0, 2});
  }
  if (dims[0] == 2) out.push_back({build_witness(tableaux::fact1_special3(dims), dims), Side::B, canonical_V(2), 0, 3});
  return out;
}

void check_all(const DensityMatrix& rho, const std::vector<WitnessCase>& witnesses, Worst& w, const std::string& tag) {
  const DimSpec& dims = rho.dims();
  for (Side side : {Side::A, Side::B}) {
    const std::string ctx = tag + (side == Side::A ? " side A" : " side B");
    for (double a : {2.0, 3.0, 5.0, kInfinity}) w.consider(entropic_criterion(rho, a, side), ctx);
    w.consider(reduction_criterion(rho, side), ctx);
    const int tau_dim = dims[side == Side::B ? 0 : 1];
    if (tau_dim % 2 != 0) continue;
    std::vector<AntisymmetricUnitary> us = {canonical_V(tau_dim)};
    if (tau_dim > 2) us.push_back(spin_flip_V(tau_dim));
    for (const auto& u : us) {
      w.consider(breuer_operator_criterion(rho, side, u), ctx);
      w.consider(quadratic_criterion(rho, side, u), ctx);
      for (int a : {2, 3, 4, 5}) {
        w.consider(fact2(rho, a, side, u), ctx);
        w.consider(fact2_module(rho, a, side, u), ctx);
        w.consider(fact3(rho, a, side, u), ctx);
        w.consider(operator_power(rho, a, side, u), ctx);
        w.consider(operator_oddcut(rho, a, side, u), ctx);
      }
      for (int a : {3, 5}) {
        w.consider(fact4(rho, a, side, u), ctx);
        w.consider(sigma_general(rho, a, side, u), ctx);
      }
      w.consider(fact4_4k1(rho, 1, side, u), ctx);
      w.consider(fact3_limit(rho, side, u), ctx);
      w.consider(fact4_limit(rho, side, u), ctx);
    }
  }
  w.consider(ppt_criterion(rho), tag);
  if (dims[0] == 2) {
    for (int a : {3, 4, 5}) w.consider(fact1_special(rho, a), tag);
    for (int a = 2; a <= 6; ++a) w.consider(fact1(rho, a), tag);
  }
  for (const auto& c : witnesses) {
    bool ok = true;
    if (c.assumption_from == 3) ok = fact3(rho, c.alpha, c.side, c.u).assumption_ok.value_or(true);
    if (c.assumption_from == 4) ok = fact4(rho, c.alpha, c.side, c.u).assumption_ok.value_or(true);
    w.consider_value(evaluate_witness(c.w, rho), ok, "witness " + c.w.source + " " + tag);
  }
}

Outcome ac3() {
  std::mt19937_64 rng(303);
  Worst w;
  int states = 0;
  for (const DimSpec& dims : {DimSpec{2, 2}, DimSpec{2, 3}, DimSpec{2, 4}, DimSpec{4, 4}}) {
    const auto witnesses = soundness_witnesses(dims);
    const std::string tag = dims.to_string();
    const bool family = dims == DimSpec{2, 2} || dims == DimSpec{4, 4};
    const int n_generic = family ? 60 : 75;
    const int n_twirled = family ? 40 : 50;
    for (int k = 0; k < n_generic; ++k, ++states) check_all(random_separable(dims, 0, rng), witnesses, w, tag);
    for (int k = 0; k < n_twirled; ++k, ++states) check_all(twirled_separable(dims, rng), witnesses, w, tag + " twirled");
    if (dims == DimSpec{2, 2})
      for (int k = 0; k < 25; ++k, ++states) check_all(octahedron_state(rng), witnesses, w, tag + " bell-diagonal");
    if (dims == DimSpec{4, 4})
      for (int k = 0; k < 25; ++k, ++states) check_all(so3_separable(rng), witnesses, w, tag + " so3");
  }
  Outcome o;
  o.pass = states == 500 && w.margin >= -1e-9;
  o.detail = std::to_string(states) + " separable states, " + std::to_string(w.checked) + " evaluations (" +
             std::to_string(w.skipped) + " skipped on failed assumption), worst margin " + sci(w.margin) + " at " +
             w.what;
  return o;
}

Outcome ac4() {
  std::mt19937_64 rng(404);
  double worst_gap = std::numeric_limits<double>::infinity();
  double worst_eq = 0.0;
  for (int k = 0; k < 500; ++k) {
    const int d = 2 + k % 3;
    const DensityMatrix rho = random_density(DimSpec{2, d}, rng);
    for (int a = 3; a <= 9; ++a) {
      const double gap = fact1(rho, a).rhs - entropic_criterion(rho, a, Side::B).rhs;
      worst_gap = std::min(worst_gap, gap);
    }
  }
  for (const DimSpec& dims : {DimSpec{2, 2}, DimSpec{2, 4}, DimSpec{4, 4}, DimSpec{4, 2}}) {
    for (int k = 0; k < 50; ++k) {
      const DensityMatrix rho = random_density(dims, rng);
      for (Side side : {Side::A, Side::B}) {
        const int tau_dim = dims[side == Side::B ? 0 : 1];
        const CriterionReport f = fact3(rho, 2, side, canonical_V(tau_dim));
        const CriterionReport e = entropic_criterion(rho, 2, side);
        worst_eq = std::max({worst_eq, std::abs(f.lhs - e.lhs), std::abs(f.rhs - e.rhs)});
      }
    }
  }
  Outcome o;
  o.pass = worst_gap >= -1e-12 && worst_eq <= 1e-12;
  o.detail = "min rhs(fact1) - rhs(entropic) over alpha 3..9 = " + sci(worst_gap) +
             ", max |fact3 - entropic| at alpha 2 = " + sci(worst_eq);
  return o;
}

// --- grid helpers -----------------------------------------------------------

struct GridView {
  const RegionScan& scan;
  int nx;
  int ny;

  GridView(const RegionScan& s) : scan(s), nx(s.spec.axes.at(0).steps), ny(s.spec.axes.at(1).steps) {}
  const ScanRow& at(int i, int j) const { return scan.rows[static_cast<std::size_t>(i * ny + j)]; }
  bool valid(int i, int j) const { return at(i, j).valid; }
  bool sat(int i, int j, std::size_t c) const { return at(i, j).reports[c].satisfied; }
  double margin(int i, int j, std::size_t c) const { return at(i, j).reports[c].margin; }
};

ScanSpec so3_spec(double p, int steps, std::vector<std::string> criteria) {
  ScanSpec spec;
  spec.family = Family::So3;
  spec.fixed = {{"p", p}};
  spec.axes = {Axis{"q", 0.0, 1.0, steps}, Axis{"r", 0.0, 1.0, steps}};
  for (const auto& c : criteria) spec.criteria.push_back(parse_criterion_request(c));
  return spec;
}

Outcome ac5() {
  ScanSpec spec;
  spec.family = Family::DiVincenzo;
  spec.axes = {Axis{"b", 0.0, 1.0, 200}, Axis{"c", 0.0, 1.0, 200}};
  for (const char* c : {"ppt", "entropic:3", "fact1:3", "entropic:5", "fact1:5"})
    spec.criteria.push_back(parse_criterion_request(c));
  const RegionScan scan = run_scan(spec);
  Outcome o;
  std::ostringstream d;
  d << count_valid(scan) << " valid points;";
  std::size_t bad = 0;
  for (int a : {3, 5}) {
    const std::string e = "entropic_a" + std::to_string(a);
    const std::string f = "fact1_a" + std::to_string(a);
    const std::size_t s_in_n = count_violated_but_satisfied(scan, f, "ppt");
    const std::size_t n_in_r = count_violated_but_satisfied(scan, e, f);
    bad += s_in_n + n_in_r;
    d << " a=" << a << ": S-N " << s_in_n << ", N-R " << n_in_r << " (R-N " << count_violated_but_satisfied(scan, f, e)
      << ")";
  }
  o.pass = bad == 0;
  o.detail = d.str();
  return o;
}

struct Ac6Result {
  std::size_t valid = 0;
  std::size_t contain_bad = 0;
  std::size_t limit_mismatch = 0;
  std::size_t limit_mismatch_npt = 0;
  std::size_t bound_entangled = 0;
  std::size_t bound_missed = 0;
  std::size_t gap_set = 0;
  std::size_t oddcut_hits = 0;
  std::size_t sym_diff = 0;
  std::size_t cells = 0;
};

Ac6Result ac6_slice(double p) {
  const RegionScan scan = run_scan(so3_spec(
      p, 200, {"ppt", "breuer", "entropic:5", "fact3:5", "fact4:5", "fact3_limit", "oddcut:6", "fact4:17", "fact4_limit"}));
  const GridView g(scan);
  const std::size_t ppt = 0, breuer = 1, ent5 = 2, f3 = 3, f4 = 4, lim = 5, odd = 6, f417 = 7, f4lim = 8;
  Ac6Result r;
  r.cells = static_cast<std::size_t>(g.nx * g.ny);
  auto entangled = [&](int i, int j) { return !g.sat(i, j, ppt) || !g.sat(i, j, breuer); };
  auto near_boundary = [&](int i, int j) {
    const bool e = entangled(i, j);
    for (int di = -2; di <= 2; ++di)
      for (int dj = -2; dj <= 2; ++dj) {
        const int a = i + di, b = j + dj;
        if (a < 0 || b < 0 || a >= g.nx || b >= g.ny || !g.valid(a, b)) continue;
        if (entangled(a, b) != e) return true;
      }
    return false;
  };
  for (int i = 0; i < g.nx; ++i)
    for (int j = 0; j < g.ny; ++j) {
      if (!g.valid(i, j)) continue;
      ++r.valid;
      const bool sep = !entangled(i, j);
      // S ⊆ I ⊆ N ⊆ E
      if (sep && !g.sat(i, j, f4)) ++r.contain_bad;
      if (g.sat(i, j, f4) && !g.sat(i, j, f3)) ++r.contain_bad;
      if (g.sat(i, j, f3) && !g.sat(i, j, ent5)) ++r.contain_bad;
      const bool detected = !g.sat(i, j, lim);
      if (detected != entangled(i, j) && !near_boundary(i, j)) {
        ++r.limit_mismatch;
        if (!g.sat(i, j, ppt)) ++r.limit_mismatch_npt;
      }
      if (g.sat(i, j, ppt) && !g.sat(i, j, breuer)) {
        ++r.bound_entangled;
        if (!detected && !near_boundary(i, j)) ++r.bound_missed;
      }
      if (g.sat(i, j, breuer) && !g.sat(i, j, ppt)) {
        ++r.gap_set;
        if (!g.sat(i, j, odd)) ++r.oddcut_hits;
      }
      if (g.sat(i, j, f417) != g.sat(i, j, f4lim)) ++r.sym_diff;
    }
  return r;
}

std::string pct(std::size_t a, std::size_t b) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f%%", b == 0 ? 0.0 : 100.0 * static_cast<double>(a) / static_cast<double>(b));
  return buf;
}

Outcome ac6() {
  std::vector<std::pair<double, Ac6Result>> slices;
  for (double p : {0.0, 0.2}) slices.emplace_back(p, ac6_slice(p));
  Outcome o;
  std::vector<std::string> failed;
  auto part = [&](const std::string& id, const std::string& title,
                  const std::function<bool(const Ac6Result&, std::ostringstream&)>& f) {
    bool pass = true;
    std::ostringstream d;
    for (const auto& [p, r] : slices) {
      d << "p=" << p << ": ";
      pass = f(r, d) && pass;
      d << "; ";
    }
    if (!pass) failed.push_back(id);
    o.notes.push_back("(" + id + ") " + (pass ? "PASS " : "FAIL ") + title + ": " + d.str());
  };
  part("a", "containment S <= I <= N <= E at alpha 5", [](const Ac6Result& r, std::ostringstream& d) {
    d << r.contain_bad << " counterexamples in " << r.valid << " points";
    return r.contain_bad == 0;
  });
  part("b", "limit classification equals NPT or Breuer-violated up to a 2-cell band",
       [](const Ac6Result& r, std::ostringstream& d) {
         d << r.limit_mismatch << " mismatches outside band (" << r.limit_mismatch_npt << " undetected NPT); "
           << r.bound_missed << " of " << r.bound_entangled << " bound entangled points missed";
         return r.limit_mismatch == 0;
       });
  part("c", "oddcut at alpha 6 detects >= 1% of Breuer-satisfied NPT points",
       [](const Ac6Result& r, std::ostringstream& d) {
         d << r.oddcut_hits << " of " << r.gap_set << " (" << pct(r.oddcut_hits, r.gap_set) << ")";
         return r.gap_set > 0 && 100 * r.oddcut_hits >= r.gap_set;
       });
  part("d", "fact4 alpha 17 region within 5% of its limit", [](const Ac6Result& r, std::ostringstream& d) {
    d << r.sym_diff << " differing points = " << pct(r.sym_diff, r.valid) << " of state area ("
      << pct(r.sym_diff, r.cells) << " of square)";
    return 20 * r.sym_diff <= r.valid;
  });
  o.pass = failed.empty();
  if (failed.empty()) {
    o.detail = "all parts pass";
  } else {
    o.detail = "failing parts:";
    for (const auto& f : failed) o.detail += " " + f;
  }
  return o;
}

Outcome ac7() {
  Outcome o;
  std::ostringstream d;
  std::size_t bad = 0, octa_bad = 0, valid = 0;
  for (double t3 : {-0.6, -0.2, 0.0, 0.3, 0.7}) {
    ScanSpec spec;
    spec.family = Family::BellDiagonal;
    spec.fixed = {{"t3", t3}};
    spec.axes = {Axis{"t1", -1.0, 1.0, 200}, Axis{"t2", -1.0, 1.0, 200}};
    for (const char* c : {"ppt", "guhne_lewenstein:3", "fact1:3", "guhne_lewenstein:6", "fact1:6"})
      spec.criteria.push_back(parse_criterion_request(c));
    const RegionScan scan = run_scan(spec);
    valid += count_valid(scan);
    bad += count_violated_but_satisfied(scan, "guhne_lewenstein_a3", "fact1_a3");
    bad += count_violated_but_satisfied(scan, "guhne_lewenstein_a6", "fact1_a6");
    for (const auto& row : scan.rows) {
      if (!row.valid) continue;
      const double l1 = std::abs(row.coords[0]) + std::abs(row.coords[1]) + std::abs(t3);
      if (row.reports[0].satisfied != (l1 <= 1.0 + 1e-9)) ++octa_bad;
    }
  }
  o.pass = bad == 0 && octa_bad == 0;
  d << valid << " valid points in 5 slices; violating GL but satisfying fact1: " << bad
    << "; PPT vs octahedron disagreements: " << octa_bad;
  o.detail = d.str();
  return o;
}

Outcome ac8() {
  std::mt19937_64 rng(808);
  double dev = 0.0;
  struct Case {
    DimSpec dims;
    int alpha;
    bool is_fact4;
  };
  const std::vector<Case> cases = {
      {{2, 2}, 3, false}, {{2, 2}, 3, true}, {{4, 4}, 2, false}, {{4, 4}, 3, true}};
  std::ostringstream d;
  for (const auto& c : cases) {
    const AntisymmetricUnitary u = canonical_V(c.dims[0]);
    const MapTableau t = c.is_fact4 ? tableaux::fact4(c.dims, c.alpha, Side::B, u)
                                    : tableaux::fact3(c.dims, c.alpha, Side::B, u);
    const MultiCopyWitness w = build_witness(t, c.dims);
    double case_dev = 0.0;
    for (int k = 0; k < 100; ++k) {
      const DensityMatrix rho = random_density(c.dims, rng);
      const double scalar = c.is_fact4 ? fact4(rho, c.alpha, Side::B, u).margin : fact3(rho, c.alpha, Side::B, u).margin;
      case_dev = std::max(case_dev, std::abs(evaluate_witness(w, rho) - scalar));
    }
    dev = std::max(dev, case_dev);
    d << w.source << " on " << c.dims.to_string() << " " << sci(case_dev) << "; ";
  }
  double mult_dev = 0.0;
  for (int k = 0; k < 100; ++k) {
    const int n = 2 + k % 3;
    const int dd = 2 + (k / 3) % 2;
    std::vector<ComplexMatrix> xs;
    ComplexMatrix prod = identity(dd);
    for (int i = 0; i < n; ++i) {
      xs.push_back(random_matrix(dd, rng));
      prod = (prod * xs.back()).eval();
    }
    const ComplexMatrix big = kron_all(xs);
    mult_dev = std::max(mult_dev, max_abs_diff(multiply_contract(big, dd, n), prod));
    const OperatorMap m = multiplication_map(n, dd);
    const ComplexMatrix y = random_matrix(dd, rng);
    const Complex lhs = (y * m.apply(big)).trace();
    const Complex rhs = (m.apply_dual(y) * big).trace();
    mult_dev = std::max(mult_dev, std::abs(lhs - rhs) / std::max(1.0, std::abs(lhs)));
  }
  d << "multiplication map " << sci(mult_dev);
  Outcome o;
  o.pass = dev <= 1e-9 && mult_dev <= 1e-9;
  o.detail = d.str();
  return o;
}

Outcome ac9() {
  std::mt19937_64 rng(909);
  Outcome o;
  std::ostringstream d;
  double dev = 0.0;
  int subsets = 0;
  for (int n = 1; n <= 4; ++n) {
    for (int k = 0; k < 5; ++k) {
      const DensityMatrix rho = random_density(DimSpec::qubits(n), rng);
      const OutcomeTable table = joint_probabilities(rho);
      for (int mask = 0; mask < (1 << n); ++mask) {
        std::vector<int> idx;
        for (int q = 0; q < n; ++q)
          if (mask & (1 << q)) idx.push_back(q + 1);
        const ComplexMatrix refl = multiqubit_reflection(rho, idx);
        const double want = (rho.matrix() * refl).trace().real();
        dev = std::max(dev, std::abs(mean_from_probs(table, ReflectionSet(idx, n)) - want));
        ++subsets;
      }
    }
  }
  d << "identity over " << subsets << " (state, I') pairs: " << sci(dev);

  // Sign patterns on a generic table.
  double sign_dev = 0.0;
  {
    auto generic = [&](int n) {
      std::uniform_real_distribution<double> u(0.1, 1.0);
      std::vector<double> p(static_cast<std::size_t>(1 << n));
      double s = 0.0;
      for (auto& x : p) s += (x = u(rng));
      for (auto& x : p) x /= s;
      return OutcomeTable(n, p);
    };
    const OutcomeTable t3 = generic(3);
    auto p3 = [&](int a, int b, int c) { return t3({a, b, c}); };
    sign_dev = std::max(sign_dev, std::abs(signed_probability_sum(t3, ReflectionSet({3}, 3)) -
                                           (p3(0, 0, 1) - p3(0, 1, 1) - p3(1, 0, 1) + p3(1, 1, 1))));
    sign_dev = std::max(sign_dev,
                        std::abs(signed_probability_sum(t3, ReflectionSet({2, 3}, 3)) - (p3(0, 1, 1) - p3(1, 1, 1))));
    const OutcomeTable t4 = generic(4);
    auto p4 = [&](int a, int b) { return t4({a, b, 1, 1}); };
    sign_dev = std::max(sign_dev, std::abs(signed_probability_sum(t4, ReflectionSet({3, 4}, 4)) -
                                           (p4(0, 0) - p4(0, 1) - p4(1, 0) + p4(1, 1))));
  }
  d << "; example sign patterns " << sci(sign_dev);

  // 2⊗4 as three qubits, reflection on the first.
  double ent_dev = 0.0;
  for (int k = 0; k < 20; ++k) {
    const DensityMatrix rho = random_density(DimSpec::qubits(3), rng);
    const double mean = mean_from_probs(joint_probabilities(rho), ReflectionSet({1}, 3));
    const ComplexMatrix rb = partial_trace_keep(rho.matrix(), rho.dims(), std::vector<int>{1, 2});
    const double want = (rb * rb).trace().real() - (rho.matrix() * rho.matrix()).trace().real();
    ent_dev = std::max(ent_dev, std::abs(mean - want));
  }
  d << "; qubit-side reflection vs purity gap " << sci(ent_dev);

  // Singlet, exact and sampled.
  const DensityMatrix singlet = bell_projector(BellState::PsiMinus);
  const OutcomeTable exact = joint_probabilities(singlet);
  const ReflectionSet r2({2}, 2);
  const double exact_mean = mean_from_probs(exact, r2);
  const std::int64_t shots = 100000;
  const double p01 = exact({0, 1}), p11 = exact({1, 1});
  const double var_signed = (p01 + p11 - (p01 - p11) * (p01 - p11)) / static_cast<double>(shots);
  const double sigma = 2.0 * std::sqrt(var_signed);
  const double sampled = mean_from_probs(shot_sample(exact, shots, std::uint64_t{2024}), r2);
  const bool within = std::abs(sampled - exact_mean) <= 3.0 * sigma;
  d << "; singlet mean " << exact_mean << ", sampled " << sampled << " (sigma " << sci(sigma) << ")";
  o.notes.push_back("lab value -0.2330 +- 0.016 depends on an unpublished state and is not reproduced");

  o.pass = dev <= 1e-9 && sign_dev <= 1e-15 && ent_dev <= 1e-9 && std::abs(exact_mean + 0.5) <= 1e-12 && within;
  o.detail = d.str();
  return o;
}

Outcome ac10() {
  std::vector<std::array<double, 3>> points;
  for (double p : {0.0, 0.2})
    for (int i = 0; i < 12 && points.size() < 50; ++i)
      for (int j = 0; j < 12 && points.size() < 50; ++j) {
        const double q = (i + 0.5) / 12.0, r = (j + 0.5) / 12.0;
        if (p + q + r <= 1.0) points.push_back({p, q, r});
      }
  const AntisymmetricUnitary v = spin_flip_V(4);
  std::size_t disagree = 0, exempt = 0;
  for (const auto& [p, q, r] : points) {
    const DensityMatrix rho = so3_invariant_4x4({p, q, r});
    const CriterionReport lim = fact3_limit(rho, Side::B, v);
    const CriterionReport big = fact3(rho, 201, Side::B, v);
    if (big.satisfied == lim.satisfied) continue;
    if (std::abs(lim.margin) < 1e-3) {
      ++exempt;
    } else {
      ++disagree;
    }
  }
  Outcome o;
  o.pass = points.size() == 50 && disagree == 0;
  o.detail = std::to_string(points.size()) + " points, " + std::to_string(disagree) + " disagreements, " +
             std::to_string(exempt) + " exempt near the limit boundary";
  return o;
}

}  // namespace

int main() {
  std::cout.precision(6);
  run("AC1", "algebraic identities", 1.0, ac1);
  run("AC2", "maximally entangled oracle", 1.0, ac2);
  run("AC3", "soundness on separable states", 30.0, ac3);
  run("AC4", "strength ordering", 10.0, ac4);
  run("AC5", "DiVincenzo containment S < N < R at alpha 3, 5", 60.0, ac5);
  run("AC6", "SO(3) 4x4 slices p=0, 0.2 at 200x200", 300.0, ac6);
  run("AC7", "Bell-diagonal slices at alpha 3, 6", 60.0, ac7);
  run("AC8", "witness equivalence", 120.0, ac8);
  run("AC9", "two-copy experiment simulation", 60.0, ac9);
  run("AC10", "limit convergence at alpha 201", 120.0, ac10);
  std::cout << (g_failures == 0 ? "ALL PASS" : std::to_string(g_failures) + " FAILED") << '\n';
  return g_failures == 0 ? 0 : 1;
}
