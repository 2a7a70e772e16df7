#include "entsep/scan.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <iomanip>
#include <limits>
#include <sstream>
#include <thread>

namespace entsep {

namespace {

constexpr double kSimplexSlack = 1e-12;

double get(const ParamMap& p, const std::string& name) {
  const auto it = p.find(name);
  if (it == p.end()) throw std::invalid_argument("missing family parameter '" + name + "'");
  return it->second;
}

// Shortest text that reads back to the same double.
std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

// Snap values within the slack of the boundary onto it so that the state
// factories accept them.
double snap(double v) { return std::abs(v) < kSimplexSlack ? 0.0 : v; }

}  // namespace

std::string family_name(Family f) {
  switch (f) {
    case Family::BellDiagonal: return "bell_diagonal";
    case Family::BellMixture: return "bell_mixture";
    case Family::DiVincenzo: return "divincenzo";
    case Family::So3: return "so3_4x4";
  }
  return "";
}

Family parse_family(const std::string& name) {
  if (name == "bell_diagonal") return Family::BellDiagonal;
  if (name == "bell_mixture") return Family::BellMixture;
  if (name == "divincenzo") return Family::DiVincenzo;
  if (name == "so3_4x4" || name == "so3") return Family::So3;
  throw std::invalid_argument("unknown family '" + name + "'");
}

const std::vector<std::string>& family_parameters(Family f) {
  static const std::vector<std::string> bd{"t1", "t2", "t3"};
  static const std::vector<std::string> pqr{"p", "q", "r"};
  static const std::vector<std::string> bc{"b", "c"};
  switch (f) {
    case Family::BellDiagonal: return bd;
    case Family::DiVincenzo: return bc;
    default: return pqr;
  }
}

DimSpec family_dims(Family f) { return f == Family::So3 ? DimSpec{4, 4} : DimSpec{2, 2}; }

bool family_point_valid(Family f, const ParamMap& params) {
  switch (f) {
    case Family::BellDiagonal:
      return BellDiagonalParams{get(params, "t1"), get(params, "t2"), get(params, "t3")}.valid(kSimplexSlack);
    case Family::BellMixture: {
      const double p = get(params, "p"), q = get(params, "q"), r = get(params, "r");
      return p >= -kSimplexSlack && q >= -kSimplexSlack && r >= -kSimplexSlack && p + q + r <= 1.0 + kSimplexSlack;
    }
    case Family::DiVincenzo:
      return DivParams{get(params, "b"), get(params, "c")}.valid(kSimplexSlack);
    case Family::So3:
      return So3Params{get(params, "p"), get(params, "q"), get(params, "r")}.valid(kSimplexSlack);
  }
  return false;
}

DensityMatrix family_state(Family f, const ParamMap& params) {
  if (!family_point_valid(f, params)) throw InvalidParameterError("family point outside the parameter domain");
  switch (f) {
    case Family::BellDiagonal: {
      BellDiagonalParams t{get(params, "t1"), get(params, "t2"), get(params, "t3")};
      if (!t.valid()) {
        // Within slack: shrink toward the centre by the violation.
        const double s = 1.0 - 2.0 * kSimplexSlack;
        t = {t.t1 * s, t.t2 * s, t.t3 * s};
      }
      return bell_diagonal(t);
    }
    case Family::BellMixture: {
      const double p = snap(get(params, "p")), q = snap(get(params, "q")), r = snap(get(params, "r"));
      const double s = 1.0 - p - q - r;
      const double scale = s < 0 ? 1.0 / (p + q + r) : 1.0;
      return bell_mixture(p * scale, q * scale, r * scale);
    }
    case Family::DiVincenzo: {
      double b = snap(get(params, "b")), c = snap(get(params, "c"));
      if (b + c > 1.0) {
        const double s = 1.0 / (b + c);
        b *= s;
        c *= s;
      }
      return divincenzo({b, c});
    }
    case Family::So3: {
      double p = snap(get(params, "p")), q = snap(get(params, "q")), r = snap(get(params, "r"));
      if (p + q + r > 1.0) {
        const double s = 1.0 / (p + q + r);
        p *= s;
        q *= s;
        r *= s;
      }
      return so3_invariant_4x4({p, q, r});
    }
  }
  throw std::logic_error("family_state: unreachable");
}

double Axis::value(int k) const {
  if (steps < 2) return min;
  if (k == steps - 1) return max;
  return min + (max - min) * static_cast<double>(k) / static_cast<double>(steps - 1);
}

void ScanSpec::validate() const {
  const auto& names = family_parameters(family);
  std::vector<std::string> seen;
  for (const Axis& a : axes) {
    if (std::find(names.begin(), names.end(), a.name) == names.end()) {
      throw std::invalid_argument("axis '" + a.name + "' is not a parameter of " + family_name(family));
    }
    if (a.steps < 2) throw std::invalid_argument("axis '" + a.name + "' needs at least 2 steps");
    if (!(a.min <= a.max) || !std::isfinite(a.min) || !std::isfinite(a.max)) {
      throw std::invalid_argument("axis '" + a.name + "' has a malformed range");
    }
    if (std::find(seen.begin(), seen.end(), a.name) != seen.end()) {
      throw std::invalid_argument("axis '" + a.name + "' appears twice");
    }
    seen.push_back(a.name);
  }
  for (const auto& [k, v] : fixed) {
    if (std::find(names.begin(), names.end(), k) == names.end()) {
      throw std::invalid_argument("fixed parameter '" + k + "' is not a parameter of " + family_name(family));
    }
    if (std::find(seen.begin(), seen.end(), k) != seen.end()) {
      throw std::invalid_argument("parameter '" + k + "' is both fixed and an axis");
    }
    if (!std::isfinite(v)) throw std::invalid_argument("fixed parameter '" + k + "' is not finite");
    seen.push_back(k);
  }
  for (const auto& n : names) {
    if (std::find(seen.begin(), seen.end(), n) == seen.end()) {
      throw std::invalid_argument("parameter '" + n + "' is neither fixed nor an axis");
    }
  }
  for (const auto& c : criteria) {
    if (!is_known_criterion(c.name)) throw std::invalid_argument("unknown criterion '" + c.name + "'");
  }
  if (u_choice == UChoice::Custom && !custom_u) throw std::invalid_argument("custom U selected but not supplied");
  if (threads < 0) throw std::invalid_argument("threads must be nonnegative");
}

std::size_t ScanSpec::point_count() const {
  std::size_t n = 1;
  for (const Axis& a : axes) n *= static_cast<std::size_t>(a.steps);
  return n;
}

std::optional<AntisymmetricUnitary> resolve_u(Family f, UChoice choice, const std::optional<ComplexMatrix>& custom) {
  const int d = family_dims(f)[0];
  switch (choice) {
    case UChoice::Canonical: return canonical_V(d);
    case UChoice::SpinFlip: return spin_flip_V(d);
    case UChoice::Custom:
      if (!custom) throw std::invalid_argument("custom U selected but not supplied");
      return AntisymmetricUnitary(*custom);
    case UChoice::Auto: break;
  }
  return f == Family::So3 ? spin_flip_V(d) : canonical_V(d);
}

std::size_t RegionScan::criterion_index(const std::string& label) const {
  for (std::size_t k = 0; k < spec.criteria.size(); ++k)
    if (spec.criteria[k].label() == label) return k;
  throw std::invalid_argument("scan has no criterion labelled '" + label + "'");
}

ScanRow classify_point(Family f, const ParamMap& params, const std::vector<CriterionRequest>& criteria,
                       const std::optional<AntisymmetricUnitary>& u, const CriterionOptions& opts) {
  ScanRow row;
  for (const auto& name : family_parameters(f)) row.coords.push_back(get(params, name));
  row.valid = family_point_valid(f, params);
  if (!row.valid) return row;
  const DensityMatrix rho = family_state(f, params);
  for (const auto& c : criteria) row.reports.push_back(evaluate_criterion(c, rho, u, opts));
  return row;
}

RegionScan run_scan(const ScanSpec& spec) {
  spec.validate();
  const auto u = resolve_u(spec.family, spec.u_choice, spec.custom_u);
  const std::size_t total = spec.point_count();
  RegionScan scan{spec, std::vector<ScanRow>(total)};

  auto work = [&](std::size_t idx) {
    ParamMap params = spec.fixed;
    std::vector<double> coords(spec.axes.size());
    std::size_t rest = idx;
    for (std::size_t k = spec.axes.size(); k-- > 0;) {
      const auto steps = static_cast<std::size_t>(spec.axes[k].steps);
      coords[k] = spec.axes[k].value(static_cast<int>(rest % steps));
      params[spec.axes[k].name] = coords[k];
      rest /= steps;
    }
    ScanRow row = classify_point(spec.family, params, spec.criteria, u, spec.options);
    row.coords = std::move(coords);
    scan.rows[idx] = std::move(row);
  };

  unsigned threads = spec.threads > 0 ? static_cast<unsigned>(spec.threads) : std::thread::hardware_concurrency();
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(total, 1))));
  if (threads == 1) {
    for (std::size_t i = 0; i < total; ++i) work(i);
    return scan;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      (void)t;
      for (std::size_t i = next++; i < total && !failed; i = next++) {
        try {
          work(i);
        } catch (...) {
          if (!failed.exchange(true)) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
  return scan;
}

void emit_csv(const RegionScan& scan, std::ostream& out) {
  std::vector<std::string> header;
  for (const Axis& a : scan.spec.axes) header.push_back(a.name);
  for (const auto& c : scan.spec.criteria) {
    header.push_back("margin_" + c.label());
    header.push_back("sat_" + c.label());
  }
  for (std::size_t k = 0; k < header.size(); ++k) out << (k ? "," : "") << header[k];
  out << '\n';
  for (const ScanRow& row : scan.rows) {
    bool first = true;
    auto cell = [&](const std::string& s) {
      out << (first ? "" : ",") << s;
      first = false;
    };
    for (double v : row.coords) cell(format_double(v));
    for (std::size_t k = 0; k < scan.spec.criteria.size(); ++k) {
      if (!row.valid) {
        cell("NA");
        cell("NA");
      } else {
        cell(format_double(row.reports[k].margin));
        cell(row.reports[k].satisfied ? "1" : "0");
      }
    }
    out << '\n';
  }
}

std::string scan_csv(const RegionScan& scan) {
  std::ostringstream os;
  emit_csv(scan, os);
  return os.str();
}

std::string scan_svg(const RegionScan& scan, const std::string& criterion_label) {
  if (scan.spec.axes.size() < 2) throw std::invalid_argument("scan_svg: need at least two axes");
  const std::size_t ci = scan.criterion_index(criterion_label);
  const Axis& ax = scan.spec.axes[0];
  const Axis& ay = scan.spec.axes[1];
  std::size_t inner = 1;
  for (std::size_t k = 2; k < scan.spec.axes.size(); ++k) inner *= static_cast<std::size_t>(scan.spec.axes[k].steps);

  const double cell = std::max(1.0, 400.0 / std::max(ax.steps, ay.steps));
  const double plot_w = cell * ax.steps, plot_h = cell * ay.steps;
  const double left = 50, top = 30, legend_h = 70;
  std::ostringstream os;
  os << std::setprecision(6);
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << left + plot_w + 20 << "\" height=\""
     << top + plot_h + legend_h << "\">\n";
  os << "<title>" << family_name(scan.spec.family) << " " << criterion_label << "</title>\n";
  os << "<rect x=\"0\" y=\"0\" width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n";
  const char* kSat = "#d9d9d9";
  const char* kViol = "#404040";
  const char* kInvalid = "#ffffff";
  for (int i = 0; i < ax.steps; ++i) {
    for (int j = 0; j < ay.steps; ++j) {
      // Only the first slice of any further axes is drawn.
      const std::size_t idx = (static_cast<std::size_t>(i) * static_cast<std::size_t>(ay.steps) +
                               static_cast<std::size_t>(j)) * inner;
      const ScanRow& row = scan.rows[idx];
      const char* fill = !row.valid ? kInvalid : (row.reports[ci].satisfied ? kSat : kViol);
      if (fill == kInvalid) continue;
      os << "<rect x=\"" << left + i * cell << "\" y=\"" << top + (ay.steps - 1 - j) * cell << "\" width=\"" << cell
         << "\" height=\"" << cell << "\" fill=\"" << fill << "\"/>\n";
    }
  }
  os << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << plot_w << "\" height=\"" << plot_h
     << "\" fill=\"none\" stroke=\"#000000\"/>\n";
  os << "<text x=\"" << left + plot_w / 2 << "\" y=\"" << top + plot_h + 18 << "\" text-anchor=\"middle\" "
     << "font-size=\"12\">" << ax.name << " [" << ax.min << ", " << ax.max << "]</text>\n";
  os << "<text x=\"14\" y=\"" << top + plot_h / 2 << "\" font-size=\"12\" transform=\"rotate(-90 14 "
     << top + plot_h / 2 << ")\" text-anchor=\"middle\">" << ay.name << " [" << ay.min << ", " << ay.max
     << "]</text>\n";
  const double ly = top + plot_h + 32;
  const std::pair<const char*, const char*> legend[] = {
      {kSat, "satisfied"}, {kViol, "violated"}, {kInvalid, "outside domain"}};
  double lx = left;
  for (const auto& [color, text] : legend) {
    os << "<rect x=\"" << lx << "\" y=\"" << ly << "\" width=\"12\" height=\"12\" fill=\"" << color
       << "\" stroke=\"#000000\"/>\n";
    os << "<text x=\"" << lx + 16 << "\" y=\"" << ly + 11 << "\" font-size=\"12\">" << text << "</text>\n";
    lx += 110;
  }
  os << "</svg>\n";
  return os.str();
}

std::size_t count_violated_but_satisfied(const RegionScan& scan, const std::string& x, const std::string& y) {
  const std::size_t ix = scan.criterion_index(x), iy = scan.criterion_index(y);
  std::size_t n = 0;
  for (const ScanRow& r : scan.rows)
    if (r.valid && !r.reports[ix].satisfied && r.reports[iy].satisfied) ++n;
  return n;
}

std::size_t count_violated(const RegionScan& scan, const std::string& label) {
  const std::size_t i = scan.criterion_index(label);
  std::size_t n = 0;
  for (const ScanRow& r : scan.rows)
    if (r.valid && !r.reports[i].satisfied) ++n;
  return n;
}

std::size_t count_valid(const RegionScan& scan) {
  return static_cast<std::size_t>(
      std::count_if(scan.rows.begin(), scan.rows.end(), [](const ScanRow& r) { return r.valid; }));
}

}  // namespace entsep
