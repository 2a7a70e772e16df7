#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "entsep/entsep.hpp"

namespace entsep::cli {

namespace {

class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct Globals {
  double tol = 1e-9;
  std::string u_file;
  std::uint64_t seed = 12345;
  int threads = 0;
  std::string out;
};

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep))
    if (!item.empty()) parts.push_back(item);
  return parts;
}

std::vector<double> parse_doubles(const std::string& s, const char* what) {
  std::vector<double> v;
  for (const auto& p : split(s, ',')) {
    std::size_t used = 0;
    double x = 0.0;
    try {
      x = std::stod(p, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != p.size()) throw UsageError(std::string(what) + ": '" + p + "' is not a number");
    v.push_back(x);
  }
  return v;
}

std::vector<int> parse_ints(const std::string& s, const char* what) {
  std::vector<int> v;
  for (double x : parse_doubles(s, what)) {
    if (x != std::floor(x)) throw UsageError(std::string(what) + ": integers expected");
    v.push_back(static_cast<int>(x));
  }
  return v;
}

std::vector<CriterionRequest> parse_criteria(const std::string& s) {
  std::vector<CriterionRequest> out;
  for (const auto& item : split(s, ',')) {
    try {
      out.push_back(parse_criterion_request(item));
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
  }
  if (out.empty()) throw UsageError("--criteria is empty");
  return out;
}

ParamMap family_params(Family f, const std::vector<double>& values) {
  const auto& names = family_parameters(f);
  if (values.size() != names.size()) {
    throw UsageError("family " + family_name(f) + " takes " + std::to_string(names.size()) + " parameters");
  }
  ParamMap p;
  for (std::size_t k = 0; k < names.size(); ++k) p[names[k]] = values[k];
  return p;
}

Family family_or_usage(const std::string& name) {
  try {
    return parse_family(name);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

Side side_or_usage(const std::string& s) {
  if (s == "A" || s == "a") return Side::A;
  if (s == "B" || s == "b") return Side::B;
  throw UsageError("--side must be A or B");
}

std::optional<ComplexMatrix> load_u(const Globals& g) {
  if (g.u_file.empty()) return std::nullopt;
  return matrix_from_json(read_text_file(g.u_file));
}

void emit(const Globals& g, std::ostream& out, const std::string& text) {
  if (g.out.empty()) {
    out << text;
  } else {
    write_text_file(g.out, text);
  }
}

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(std::numeric_limits<double>::max_digits10) << v;
  return os.str();
}

// --- check -----------------------------------------------------------------

struct CheckArgs {
  std::string state_file;
  std::string family;
  std::string params;
  std::string criteria;
};

int run_check(const CheckArgs& a, const Globals& g, std::ostream& out) {
  if (a.state_file.empty() == a.family.empty()) throw UsageError("check needs exactly one of --state or --family");
  const auto requests = parse_criteria(a.criteria);
  CriterionOptions opts;
  opts.tol = g.tol;
  std::optional<DensityMatrix> rho;
  std::optional<AntisymmetricUnitary> u;
  const auto custom = load_u(g);
  if (!a.family.empty()) {
    const Family f = family_or_usage(a.family);
    const ParamMap p = family_params(f, parse_doubles(a.params, "--params"));
    if (!family_point_valid(f, p)) throw UsageError("--params lie outside the family's domain");
    rho = family_state(f, p);
    u = resolve_u(f, custom ? UChoice::Custom : UChoice::Auto, custom);
  } else {
    rho = state_from_json(read_text_file(a.state_file));
    if (custom) u = AntisymmetricUnitary(*custom);
  }
  std::ostringstream text;
  bool violated = false;
  for (const auto& req : requests) {
    const CriterionReport r = evaluate_criterion(req, *rho, u, opts);
    violated = violated || !r.satisfied;
    text << report_to_json(r) << '\n';
  }
  emit(g, out, text.str());
  return violated ? kViolation : kOk;
}

// --- scan ------------------------------------------------------------------

struct ScanArgs {
  std::string spec_file;
  std::string family;
  std::vector<std::string> fixed;
  std::vector<std::string> axes;
  std::string criteria;
  std::string svg;
  std::string svg_criterion;
};

ScanSpec spec_from_flags(const ScanArgs& a) {
  ScanSpec spec;
  spec.family = family_or_usage(a.family);
  for (const auto& kv : a.fixed) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw UsageError("--fixed expects name=value");
    spec.fixed[kv.substr(0, eq)] = parse_doubles(kv.substr(eq + 1), "--fixed").at(0);
  }
  for (const auto& ax : a.axes) {
    const auto parts = split(ax, ':');
    if (parts.size() != 4) throw UsageError("--axis expects name:min:max:steps");
    const auto lo = parse_doubles(parts[1], "--axis");
    const auto hi = parse_doubles(parts[2], "--axis");
    const auto st = parse_ints(parts[3], "--axis");
    spec.axes.push_back(Axis{parts[0], lo.at(0), hi.at(0), st.at(0)});
  }
  if (!a.criteria.empty()) spec.criteria = parse_criteria(a.criteria);
  return spec;
}

int run_scan_command(const ScanArgs& a, const Globals& g, std::ostream& out, std::ostream& err) {
  if (a.spec_file.empty() == a.family.empty()) throw UsageError("scan needs exactly one of --spec or --family");
  ScanSpec spec;
  if (!a.spec_file.empty()) {
    const std::string text = read_text_file(a.spec_file);
    try {
      spec = scan_spec_from_json(text);
    } catch (const FormatError& e) {
      throw UsageError(e.what());
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
  } else {
    spec = spec_from_flags(a);
  }
  spec.options.tol = g.tol;
  if (g.threads > 0) spec.threads = g.threads;
  if (const auto custom = load_u(g)) {
    spec.u_choice = UChoice::Custom;
    spec.custom_u = custom;
  }
  try {
    spec.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  const RegionScan scan = run_scan(spec);
  emit(g, out, scan_csv(scan));
  if (!a.svg.empty()) {
    std::string label = a.svg_criterion;
    if (label.empty()) {
      if (spec.criteria.empty()) throw UsageError("--svg needs at least one criterion");
      label = spec.criteria.front().label();
    }
    write_text_file(a.svg, scan_svg(scan, label));
  }
  std::ostream& summary = g.out.empty() ? err : out;
  summary << "points " << scan.rows.size() << " valid " << count_valid(scan) << '\n';
  for (const auto& c : spec.criteria) summary << "violated " << c.label() << ' ' << count_violated(scan, c.label()) << '\n';
  return kOk;
}

// --- witness ---------------------------------------------------------------

struct WitnessArgs {
  std::string tableau = "fact3";
  int alpha = 3;
  std::string dims = "2,2";
  std::string side = "B";
  int verify = 10;
  bool allow_large = false;
};

int run_witness(const WitnessArgs& a, const Globals& g, std::ostream& out, std::ostream& err) {
  const std::vector<int> factors = parse_ints(a.dims, "--dims");
  if (factors.size() != 2) throw UsageError("--dims must list two factors");
  const DimSpec dims(factors);
  const Side side = side_or_usage(a.side);
  const int tau_dim = dims[side == Side::A ? 1 : 0];
  std::optional<AntisymmetricUnitary> u;
  if (const auto custom = load_u(g)) {
    u = AntisymmetricUnitary(*custom);
  } else if (tau_dim % 2 == 0) {
    u = canonical_V(tau_dim);
  }
  auto need_u = [&]() -> const AntisymmetricUnitary& {
    if (!u) throw UsageError("tableau needs an even-dimensional reversed factor");
    return *u;
  };
  MapTableau t;
  if (a.tableau == "entropic") {
    t = tableaux::entropic(dims, a.alpha, side);
  } else if (a.tableau == "fact3") {
    t = tableaux::fact3(dims, a.alpha, side, need_u());
  } else if (a.tableau == "fact4") {
    if (a.alpha % 2 == 0) throw UsageError("fact4 tableau needs odd --alpha");
    t = tableaux::fact4(dims, a.alpha, side, need_u());
  } else if (a.tableau == "fact1_special") {
    t = tableaux::fact1_special3(dims);
  } else if (a.tableau == "quadratic") {
    t = tableaux::quadratic(dims, side, need_u());
  } else {
    throw UsageError("unknown tableau '" + a.tableau + "'");
  }
  WitnessBuildOptions bopts;
  bopts.allow_large = a.allow_large;
  MultiCopyWitness w;
  try {
    w = build_witness(t, dims, bopts);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  std::mt19937_64 rng(g.seed);
  double worst = 0.0;
  for (int k = 0; k < a.verify; ++k) {
    const DensityMatrix rho = random_density(dims, rng);
    worst = std::max(worst, std::abs(evaluate_witness(w, rho) - evaluate_tableau(t, rho).value));
  }
  std::ostream& report = g.out.empty() ? err : out;
  report << "witness " << w.source << " side " << w.op.rows() << " nonzeros " << w.op.nonZeros() << " checked "
         << a.verify << " max_deviation " << fmt(worst) << '\n';
  if (!g.out.empty()) write_text_file(g.out, witness_to_json(w));
  return worst <= 1e-9 ? kOk : kRuntimeError;
}

// --- simulate --------------------------------------------------------------

struct SimulateArgs {
  std::string state_file;
  std::string reflect;
  int n = 0;
  std::int64_t shots = 0;
};

int run_simulate(const SimulateArgs& a, const Globals& g, std::ostream& out, std::ostream& err) {
  const DensityMatrix rho = state_from_json(read_text_file(a.state_file));
  if (!rho.dims().all_qubits()) throw UsageError("simulate needs a state on qubits");
  const int n = rho.dims().size();
  if (a.n != 0 && a.n != n) throw UsageError("--n does not match the state's qubit count");
  ReflectionSet refl;
  try {
    refl = ReflectionSet(parse_ints(a.reflect, "--reflect"), n);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  OutcomeTable table = joint_probabilities(rho);
  if (a.shots > 0) table = shot_sample(table, a.shots, g.seed);
  if (g.out.empty()) {
    out << outcome_csv(table);
  } else {
    write_text_file(g.out, outcome_csv(table));
  }
  out << "mean = " << fmt(mean_from_probs(table, refl)) << '\n';
  err << "signed_sum = " << fmt(signed_probability_sum(table, refl)) << '\n';
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Separability criteria from partial time reversal", "entsep"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--tol", g.tol, "Relative margin tolerance")->check(CLI::PositiveNumber);
  app.add_option("--u-file", g.u_file, "JSON matrix for U on the reversed factor");
  app.add_option("--seed", g.seed, "Random seed");
  app.add_option("--threads", g.threads, "Worker threads for scans (0 = all cores)")->check(CLI::NonNegativeNumber);
  app.add_option("--out", g.out, "Write the main artifact to this file");

  CheckArgs ca;
  auto* check = app.add_subcommand("check", "Evaluate criteria on one state");
  check->fallthrough();
  check->add_option("--state", ca.state_file, "State JSON file");
  check->add_option("--family", ca.family, "bell_diagonal | bell_mixture | divincenzo | so3");
  check->add_option("--params", ca.params, "Comma-separated family parameters");
  check->add_option("--criteria", ca.criteria, "Comma-separated name[:alpha[:side]] list")->required();

  ScanArgs sa;
  auto* scan = app.add_subcommand("scan", "Grid scan over a state family, CSV output");
  scan->fallthrough();
  scan->add_option("--spec", sa.spec_file, "ScanSpec JSON file");
  scan->add_option("--family", sa.family, "Family when no spec file is given");
  scan->add_option("--fixed", sa.fixed, "name=value, repeatable");
  scan->add_option("--axis", sa.axes, "name:min:max:steps, repeatable");
  scan->add_option("--criteria", sa.criteria, "Comma-separated name[:alpha[:side]] list");
  scan->add_option("--svg", sa.svg, "Also write an SVG heatmap");
  scan->add_option("--svg-criterion", sa.svg_criterion, "Criterion label for the heatmap");

  WitnessArgs wa;
  auto* witness = app.add_subcommand("witness", "Build a multi-copy witness and verify it");
  witness->fallthrough();
  witness->add_option("--tableau", wa.tableau, "entropic | fact3 | fact4 | fact1_special | quadratic");
  witness->add_option("--alpha", wa.alpha, "Number of copies")->check(CLI::PositiveNumber);
  witness->add_option("--dims", wa.dims, "Per-copy dims, e.g. 2,2");
  witness->add_option("--side", wa.side, "Marginal side A or B");
  witness->add_option("--verify", wa.verify, "Random states to check")->check(CLI::NonNegativeNumber);
  witness->add_flag("--allow-large", wa.allow_large, "Lift the default size cap");

  SimulateArgs ma;
  auto* simulate = app.add_subcommand("simulate", "Two-copy pair measurement statistics");
  simulate->fallthrough();
  simulate->add_option("--state", ma.state_file, "n-qubit state JSON file")->required();
  simulate->add_option("--reflect", ma.reflect, "Comma-separated 1-based reflected qubits");
  simulate->add_option("--n", ma.n, "Expected qubit count");
  simulate->add_option("--shots", ma.shots, "Sample this many shots")->check(CLI::NonNegativeNumber);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsageError;
  }

  try {
    if (check->parsed()) return run_check(ca, g, out);
    if (scan->parsed()) return run_scan_command(sa, g, out, err);
    if (witness->parsed()) return run_witness(wa, g, out, err);
    return run_simulate(ma, g, out, err);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsageError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kRuntimeError;
  }
}

}  // namespace entsep::cli
