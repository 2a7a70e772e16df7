#include "entsep/criteria.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace entsep {

namespace {

constexpr double kImagResidueTol = 1e-8;
// Generic weight for splitting degeneracies of ρ + c ρ^τ.
constexpr double kJointBasisWeight = 0.7236067977499790;

int index_of(Side s) { return s == Side::A ? 0 : 1; }

ComplexMatrix hermitize(const ComplexMatrix& x) { return 0.5 * (x + x.adjoint()); }

// Tr(ab) without forming the product.
Complex trace_product(const ComplexMatrix& a, const ComplexMatrix& b) {
  return a.cwiseProduct(b.transpose()).sum();
}

double real_trace(const ComplexMatrix& x) { return x.trace().real(); }

struct Bipartite {
  const ComplexMatrix& rho;
  DimSpec dims;
  int side;        // marginal factor
  int tau;         // reversed factor
  ComplexMatrix marginal;
  ComplexMatrix side_op;  // ρ_A⊗I or I⊗ρ_B
};

Bipartite prepare(const DensityMatrix& state, Side side, const char* what) {
  state.dims().require_bipartite(what);
  Bipartite b{state.matrix(), state.dims(), index_of(side), 1 - index_of(side), {}, {}};
  b.marginal = partial_trace(b.rho, b.dims, b.side);
  b.side_op = embed(b.marginal, b.dims, b.side);
  return b;
}

ComplexMatrix reversed(const Bipartite& b, const ComplexMatrix& u) {
  return hermitize(partial_unitary_transpose(b.rho, b.dims, b.tau, u));
}

bool commutes(const ComplexMatrix& rho, const ComplexMatrix& other, const CriterionOptions& opts) {
  const double scale = std::max(rho.norm() * other.norm(), 1e-300);
  return commutator_fro(rho, other) <= opts.assumption_tol * scale;
}

double nonzero_scale(double s) { return s > 0.0 && std::isfinite(s) ? s : 1.0; }

CriterionReport finish(CriterionReport r, double scale, const CriterionOptions& opts) {
  r.margin = r.lhs - r.rhs;
  r.tol = opts.tol * nonzero_scale(scale);
  r.satisfied = r.margin >= -r.tol;
  if (r.assumption_ok && !*r.assumption_ok && r.note.empty()) {
    r.note = "commutation assumption violated; value computed anyway";
  }
  return r;
}

CriterionReport trace_report(std::string name, std::optional<double> alpha, double lhs, double rhs,
                             std::optional<bool> assumption, const CriterionOptions& opts) {
  CriterionReport r;
  r.name = std::move(name);
  r.alpha = alpha;
  r.lhs = lhs;
  r.rhs = rhs;
  r.assumption_ok = assumption;
  return finish(std::move(r), std::max(std::abs(lhs), std::abs(rhs)), opts);
}

CriterionReport eig_report(std::string name, std::optional<double> alpha, const ComplexMatrix& diff,
                           double scale, std::optional<bool> assumption, const CriterionOptions& opts) {
  CriterionReport r;
  r.name = std::move(name);
  r.alpha = alpha;
  r.lhs = min_eig(hermitize(diff));
  r.rhs = 0.0;
  r.assumption_ok = assumption;
  return finish(std::move(r), scale, opts);
}

void require_alpha_at_least(int alpha, int min, const char* what) {
  if (alpha < min) {
    throw std::invalid_argument(std::string(what) + ": alpha must be at least " + std::to_string(min));
  }
}

void require_odd(int alpha, const char* what) {
  if (alpha < 1 || alpha % 2 == 0) throw std::invalid_argument(std::string(what) + ": alpha must be odd");
}

// ½[Tr ρ(ρ+τ)^{α−1} + Tr ρ(ρ−τ)^{α−1}]
double symmetric_rhs(const ComplexMatrix& rho, const ComplexMatrix& rt, int alpha) {
  const ComplexMatrix plus = mat_pow_int(rho + rt, alpha - 1);
  const ComplexMatrix minus = mat_pow_int(rho - rt, alpha - 1);
  return 0.5 * (trace_product(rho, plus).real() + trace_product(rho, minus).real());
}

struct JointSpectrum {
  std::vector<std::pair<double, double>> pairs;
  double residual = 0.0;
};

// Eigenpairs of two commuting Hermitian matrices, read off from the
// eigenvectors of a generic combination.
JointSpectrum joint_spectrum(const ComplexMatrix& x, const ComplexMatrix& y) {
  const EigenSystem es = hermitian_eig(hermitize(x + kJointBasisWeight * y));
  JointSpectrum js;
  for (Eigen::Index i = 0; i < es.values.size(); ++i) {
    const ComplexVector v = es.vectors.col(i);
    const double a = (v.adjoint() * x * v)(0, 0).real();
    const double b = (v.adjoint() * y * v)(0, 0).real();
    js.residual = std::max({js.residual, (x * v - a * v).norm(), (y * v - b * v).norm()});
    js.pairs.emplace_back(a, b);
  }
  return js;
}

}  // namespace

double trace_power(const ComplexMatrix& rho, double alpha) {
  if (alpha < 0) throw std::invalid_argument("trace_power: negative alpha");
  const RealVector ev = hermitian_eigenvalues(rho);
  double s = 0.0;
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    const double v = std::max(ev[i], 0.0);
    if (alpha == 0.0) {
      s += v > 1e-10 ? 1.0 : 0.0;
    } else {
      s += std::pow(v, alpha);
    }
  }
  return s;
}

double q_term(const DensityMatrix& rho, const QTermSpec& spec, int tau_subsystem, const AntisymmetricUnitary& u) {
  if (spec.exponents.empty() || spec.exponents.size() % 2 != 0) {
    throw std::invalid_argument("q_term: exponent list must be nonempty with even length");
  }
  if (std::none_of(spec.exponents.begin(), spec.exponents.end(), [](int e) { return e != 0; })) {
    throw std::invalid_argument("q_term: at least one exponent must be nonzero");
  }
  const ComplexMatrix rt = partial_time_reversal(rho, tau_subsystem, u);
  ComplexMatrix prod = identity(rho.dim());
  for (std::size_t k = 0; k < spec.exponents.size(); ++k) {
    const int e = spec.exponents[k];
    if (e < 0) throw std::invalid_argument("q_term: exponents must be nonnegative");
    if (e == 0) continue;
    prod = (prod * mat_pow_int(k % 2 == 0 ? rho.matrix() : rt, e)).eval();
  }
  const Complex t = prod.trace();
  if (std::abs(t.imag()) > kImagResidueTol) {
    std::ostringstream os;
    os << "q_term: imaginary residue " << t.imag() << " exceeds tolerance";
    throw std::runtime_error(os.str());
  }
  return t.real();
}

double renyi(const ComplexMatrix& rho, double alpha) {
  if (alpha < 0) throw std::invalid_argument("renyi: negative alpha");
  const RealVector ev = hermitian_eigenvalues(rho);
  if (std::isinf(alpha)) return -std::log(ev.maxCoeff());
  if (alpha == 1.0) {
    double s = 0.0;
    for (Eigen::Index i = 0; i < ev.size(); ++i)
      if (ev[i] > 0) s -= ev[i] * std::log(ev[i]);
    return s;
  }
  return std::log(trace_power(rho, alpha)) / (1.0 - alpha);
}

double renyi(const DensityMatrix& rho, double alpha) { return renyi(rho.matrix(), alpha); }

double tsallis(const std::vector<double>& probs, double alpha) {
  if (alpha < 0) throw std::invalid_argument("tsallis: negative alpha");
  if (alpha == 1.0) {
    double s = 0.0;
    for (double p : probs)
      if (p > 0) s -= p * std::log(p);
    return s;
  }
  double sum = 0.0;
  for (double p : probs) {
    const double q = std::max(p, 0.0);
    if (std::isinf(alpha)) {
      sum = std::max(sum, q);
    } else if (alpha == 0.0) {
      sum += q > 0 ? 1.0 : 0.0;
    } else {
      sum += std::pow(q, alpha);
    }
  }
  if (std::isinf(alpha)) return 0.0;
  return (1.0 - sum) / (alpha - 1.0);
}

CriterionReport entropic_criterion(const DensityMatrix& rho, double alpha, Side side, const CriterionOptions& opts) {
  if (alpha < 0) throw std::invalid_argument("entropic_criterion: negative alpha");
  const Bipartite b = prepare(rho, side, "entropic_criterion");
  double lhs = 0.0, rhs = 0.0;
  if (std::isinf(alpha)) {
    lhs = max_eig(b.marginal);
    rhs = max_eig(b.rho);
  } else if (alpha > 1.0) {
    lhs = trace_power(b.marginal, alpha);
    rhs = trace_power(b.rho, alpha);
  } else if (alpha == 1.0) {
    lhs = renyi(b.rho, 1.0);
    rhs = renyi(b.marginal, 1.0);
  } else {
    lhs = trace_power(b.rho, alpha);
    rhs = trace_power(b.marginal, alpha);
  }
  return trace_report("entropic", alpha, lhs, rhs, std::nullopt, opts);
}

CriterionReport ppt_criterion(const DensityMatrix& rho, const CriterionOptions& opts) {
  rho.dims().require_bipartite("ppt_criterion");
  const ComplexMatrix pt = partial_transpose(rho.matrix(), rho.dims(), 1);
  return eig_report("ppt", std::nullopt, pt, max_eig(rho.matrix()), std::nullopt, opts);
}

CriterionReport reduction_criterion(const DensityMatrix& rho, Side side, const CriterionOptions& opts) {
  const Bipartite b = prepare(rho, side, "reduction_criterion");
  return eig_report("reduction", std::nullopt, b.side_op - b.rho, max_eig(b.marginal), std::nullopt, opts);
}

CriterionReport breuer_operator_criterion(const DensityMatrix& rho, Side side, const AntisymmetricUnitary& u,
                                          const CriterionOptions& opts) {
  const Bipartite b = prepare(rho, side, "breuer_operator_criterion");
  const ComplexMatrix rt = reversed(b, u.matrix());
  return eig_report("breuer", std::nullopt, b.side_op - b.rho - rt, max_eig(b.marginal), std::nullopt, opts);
}

CriterionReport fact1(const DensityMatrix& rho, int alpha, const CriterionOptions& opts) {
  require_alpha_at_least(alpha, 1, "fact1");
  if (!rho.dims().is_bipartite() || rho.dims()[0] != 2) throw DimensionError("fact1: dims must be (2, d)");
  const Bipartite b = prepare(rho, Side::B, "fact1");
  const ComplexMatrix rt = reversed(b, canonical_V(2).matrix());
  const double lhs = trace_power(b.marginal, alpha);
  const double rhs = symmetric_rhs(b.rho, rt, alpha);
  return trace_report("fact1", alpha, lhs, rhs, commutes(b.rho, b.side_op, opts), opts);
}

CriterionReport fact1_special(const DensityMatrix& rho, int alpha, const CriterionOptions& opts) {
  if (alpha < 3 || alpha > 5) throw std::invalid_argument("fact1_special: alpha must be 3, 4 or 5");
  if (!rho.dims().is_bipartite() || rho.dims()[0] != 2) throw DimensionError("fact1_special: dims must be (2, d)");
  const Bipartite b = prepare(rho, Side::B, "fact1_special");
  const ComplexMatrix& r = b.rho;
  const ComplexMatrix t = reversed(b, canonical_V(2).matrix());
  const ComplexMatrix r2 = r * r;
  const ComplexMatrix t2 = t * t;
  double rhs = 0.0;
  switch (alpha) {
    case 3:
      rhs = real_trace(r2 * r) + trace_product(r, t2).real();
      break;
    case 4: {
      const ComplexMatrix rt = r * t;
      rhs = real_trace(r2 * r2) + 2.0 * trace_product(r2, t2).real() + trace_product(rt, rt).real();
      break;
    }
    default: {
      const ComplexMatrix r3 = r2 * r;
      const ComplexMatrix trt = t * r * t;
      rhs = real_trace(r3 * r2) + 3.0 * trace_product(r3, t2).real() + 3.0 * trace_product(r2, trt).real() +
            trace_product(r, t2 * t2).real();
      break;
    }
  }
  const double lhs = trace_power(b.marginal, alpha);
  return trace_report("fact1_special", alpha, lhs, rhs, std::nullopt, opts);
}

CriterionReport fact2(const DensityMatrix& rho, int alpha, Side side, const AntisymmetricUnitary& u,
                      const CriterionOptions& opts) {
  require_alpha_at_least(alpha, 1, "fact2");
  const Bipartite b = prepare(rho, side, "fact2");
  const ComplexMatrix rt = reversed(b, u.matrix());
  const double lhs = trace_power(b.marginal, alpha);
  const double rhs = trace_product(b.rho, mat_pow_int(b.rho + rt, alpha - 1)).real();
  return trace_report("fact2", alpha, lhs, rhs, commutes(b.rho, b.side_op, opts), opts);
}

CriterionReport fact2_module(const DensityMatrix& rho, int alpha, Side side, const AntisymmetricUnitary& u,
                             const CriterionOptions& opts) {
  require_alpha_at_least(alpha, 1, "fact2_module");
  const Bipartite b = prepare(rho, side, "fact2_module");
  const ComplexMatrix rt = hermitize(mat_abs(reversed(b, u.matrix())));
  const double lhs = trace_power(b.marginal, alpha);
  const double rhs = trace_product(b.rho, mat_pow_int(b.rho + rt, alpha - 1)).real();
  return trace_report("fact2_module", alpha, lhs, rhs, commutes(b.rho, b.side_op, opts), opts);
}

CriterionReport fact3(const DensityMatrix& rho, int alpha, Side side, const AntisymmetricUnitary& u,
                      const CriterionOptions& opts) {
  require_alpha_at_least(alpha, 1, "fact3");
  const Bipartite b = prepare(rho, side, "fact3");
  const ComplexMatrix rt = reversed(b, u.matrix());
  const double lhs = trace_power(b.marginal, alpha);
  const double rhs = symmetric_rhs(b.rho, rt, alpha);
  return trace_report("fact3", alpha, lhs, rhs, commutes(b.rho, b.side_op, opts), opts);
}

CriterionReport fact3_limit(const DensityMatrix& rho, Side side, const AntisymmetricUnitary& u,
                            const CriterionOptions& opts) {
  const Bipartite b = prepare(rho, side, "fact3_limit");
  const ComplexMatrix rt = reversed(b, u.matrix());
  const JointSpectrum js = joint_spectrum(b.rho, rt);
  double rhs = 0.0;
  for (const auto& [lam, mu] : js.pairs)
    if (lam > opts.lambda_threshold) rhs = std::max({rhs, std::abs(lam + mu), std::abs(lam - mu)});
  const bool joint = js.residual <= opts.assumption_tol * std::max(b.rho.norm(), 1e-300);
  const bool ok = joint && commutes(b.rho, b.side_op, opts);
  CriterionReport r = trace_report("fact3_limit", kInfinity, max_eig(b.marginal), rhs, ok, opts);
  if (!joint) r.note = "rho and its partial time reversal share no eigenbasis; limit value is heuristic";
  return r;
}

CriterionReport fact4(const DensityMatrix& rho, int alpha, Side side, const AntisymmetricUnitary& u,
                      const CriterionOptions& opts) {
  require_odd(alpha, "fact4");
  const Bipartite b = prepare(rho, side, "fact4");
  const ComplexMatrix rt = reversed(b, u.matrix());
  const double lhs = trace_power(b.marginal, alpha);
  const bool ok = commutes(b.rho, rt, opts);
  double sum = 0.0;
  if (ok) {
    // Summing over the joint eigenbasis avoids the cancellation noise of Tr(AB)
    // when the large eigenvalues of the two powers sit on different vectors.
    for (const auto& [lam, mu] : joint_spectrum(b.rho, rt).pairs)
      sum += std::pow(std::max(lam, 0.0), (alpha + 1) / 2) * std::pow(mu, (alpha - 1) / 2);
  } else {
    sum = trace_product(mat_pow_int(b.rho, (alpha + 1) / 2), mat_pow_int(rt, (alpha - 1) / 2)).real();
  }
  const double rhs = std::ldexp(sum, alpha - 1);
  return trace_report("fact4", alpha, lhs, rhs, ok, opts);
}

CriterionReport fact4_4k1(const DensityMatrix& rho, int k, Side side, const AntisymmetricUnitary& u,
                          const CriterionOptions& opts) {
  if (k < 0) throw std::invalid_argument("fact4_4k1: k must be nonnegative");
  const int alpha = 4 * k + 1;
  const Bipartite b = prepare(rho, side, "fact4_4k1");
  const ComplexMatrix rt = reversed(b, u.matrix());
  const double lhs = trace_power(b.marginal, alpha);
  const double rhs =
      std::ldexp(trace_product(mat_pow_int(b.rho, 2 * k + 1), mat_pow_int(rt * rt, k)).real(), 4 * k);
  return trace_report("fact4_4k1", alpha, lhs, rhs, commutes(b.rho, rt, opts), opts);
}

CriterionReport fact4_limit(const DensityMatrix& rho, Side side, const AntisymmetricUnitary& u,
                            const CriterionOptions& opts) {
  const Bipartite b = prepare(rho, side, "fact4_limit");
  const ComplexMatrix rt = reversed(b, u.matrix());
  const double lhs = max_eig(b.marginal);
  const double rhs = 2.0 * std::sqrt(spectral_norm(b.rho * rt));
  return trace_report("fact4_limit", kInfinity, lhs, rhs, commutes(b.rho, rt, opts), opts);
}

CriterionReport sigma_general(const DensityMatrix& rho, int alpha, Side side, const AntisymmetricUnitary& u,
                              const CriterionOptions& opts) {
  require_odd(alpha, "sigma_general");
  const Bipartite b = prepare(rho, side, "sigma_general");
  const ComplexMatrix rt = reversed(b, u.matrix());
  const RealVector lam = hermitian_eigenvalues(b.rho);  // ascending
  std::vector<double> sv(static_cast<std::size_t>(lam.size()));
  const RealVector tev = hermitian_eigenvalues(rt);
  for (Eigen::Index i = 0; i < tev.size(); ++i) sv[static_cast<std::size_t>(i)] = std::abs(tev[i]);
  std::sort(sv.begin(), sv.end(), std::greater<>());
  double rhs = 0.0;
  for (std::size_t i = 0; i < sv.size(); ++i) {
    rhs += std::pow(sv[i], (alpha - 1) / 2) *
           std::pow(std::max(lam[static_cast<Eigen::Index>(i)], 0.0), (alpha + 1) / 2);
  }
  const double lhs = trace_power(b.marginal, alpha);
  return trace_report("sigma_general", alpha, lhs, rhs, std::nullopt, opts);
}

CriterionReport operator_power(const DensityMatrix& rho, int alpha, Side side, const AntisymmetricUnitary& u,
                               const CriterionOptions& opts) {
  require_alpha_at_least(alpha, 1, "operator_power");
  const Bipartite b = prepare(rho, side, "operator_power");
  const ComplexMatrix rt = reversed(b, u.matrix());
  const ComplexMatrix diff = mat_pow_int(b.side_op, alpha) - mat_pow_int(b.rho + rt, alpha);
  return eig_report("operator_power", alpha, diff, std::pow(max_eig(b.marginal), alpha),
                    commutes(b.rho, b.side_op, opts), opts);
}

CriterionReport operator_oddcut(const DensityMatrix& rho, int alpha, Side side, const AntisymmetricUnitary& u,
                                const CriterionOptions& opts) {
  require_alpha_at_least(alpha, 1, "operator_oddcut");
  const Bipartite b = prepare(rho, side, "operator_oddcut");
  const ComplexMatrix rt = reversed(b, u.matrix());
  const ComplexMatrix cut = 0.5 * (mat_pow_int(b.rho + rt, alpha) + mat_pow_int(b.rho - rt, alpha));
  const ComplexMatrix diff = mat_pow_int(b.side_op, alpha) - cut;
  return eig_report("oddcut", alpha, diff, std::pow(max_eig(b.marginal), alpha), commutes(b.rho, b.side_op, opts),
                    opts);
}

CriterionReport quadratic_criterion(const DensityMatrix& rho, Side side, const ComplexMatrix& u,
                                    const CriterionOptions& opts) {
  const Bipartite b = prepare(rho, side, "quadratic_criterion");
  const ComplexMatrix rt = reversed(b, u);
  CriterionReport r;
  r.name = "quadratic";
  r.lhs = trace_product(b.rho, rt).real();
  r.rhs = 0.0;
  return finish(std::move(r), trace_product(b.rho, b.rho).real(), opts);
}

CriterionReport quadratic_criterion(const DensityMatrix& rho, Side side, const AntisymmetricUnitary& u,
                                    const CriterionOptions& opts) {
  return quadratic_criterion(rho, side, u.matrix(), opts);
}

std::vector<double> bell_probabilities(const DensityMatrix& rho) {
  if (rho.dims() != DimSpec{2, 2}) throw DimensionError("bell_probabilities: two-qubit state required");
  std::vector<double> p;
  for (BellState s : {BellState::PsiPlus, BellState::PsiMinus, BellState::PhiPlus, BellState::PhiMinus}) {
    const ComplexVector v = bell_vector(s);
    p.push_back((v.adjoint() * rho.matrix() * v)(0, 0).real());
  }
  return p;
}

CriterionReport guhne_lewenstein(const DensityMatrix& rho, double alpha, const CriterionOptions& opts) {
  if (alpha < 0) throw std::invalid_argument("guhne_lewenstein: negative alpha");
  const double lhs = tsallis(bell_probabilities(rho), alpha);
  double rhs = 0.0;
  if (alpha == 1.0) {
    rhs = std::log(2.0);
  } else if (!std::isinf(alpha)) {
    rhs = (1.0 - std::pow(2.0, 1.0 - alpha)) / (alpha - 1.0);
  }
  return trace_report("guhne_lewenstein", alpha, lhs, rhs, std::nullopt, opts);
}

std::string CriterionRequest::label() const {
  std::ostringstream os;
  os << name;
  if (alpha) {
    os << "_a";
    if (std::isinf(*alpha)) {
      os << "inf";
    } else {
      os << *alpha;
    }
  }
  if (side) os << (*side == Side::A ? "_A" : "_B");
  return os.str();
}

CriterionRequest parse_criterion_request(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ':')) parts.push_back(item);
  if (parts.empty() || parts.size() > 3 || parts[0].empty()) {
    throw std::invalid_argument("criterion request '" + text + "' must look like name[:alpha[:side]]");
  }
  CriterionRequest req;
  req.name = parts[0];
  if (!is_known_criterion(req.name)) throw std::invalid_argument("unknown criterion '" + req.name + "'");
  if (parts.size() >= 2 && !parts[1].empty()) {
    if (parts[1] == "inf") {
      req.alpha = kInfinity;
    } else {
      std::size_t used = 0;
      try {
        req.alpha = std::stod(parts[1], &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != parts[1].size()) throw std::invalid_argument("bad alpha in criterion request '" + text + "'");
    }
  }
  if (parts.size() == 3) {
    if (parts[2] == "A" || parts[2] == "a") {
      req.side = Side::A;
    } else if (parts[2] == "B" || parts[2] == "b") {
      req.side = Side::B;
    } else {
      throw std::invalid_argument("side must be A or B in criterion request '" + text + "'");
    }
  }
  return req;
}

const std::vector<CriterionInfo>& criterion_registry() {
  static const std::vector<CriterionInfo> registry = {
      {"entropic", true, false, "Tr rho_side^a >= Tr rho^a"},
      {"ppt", false, false, "min eig of the partial transpose"},
      {"reduction", false, false, "rho_side (x) I - rho >= 0"},
      {"breuer", false, true, "rho_side (x) I - rho - rho^tau >= 0"},
      {"fact1", true, false, "2(x)d symmetric time-reversal bound"},
      {"fact1_special", true, false, "2(x)d unconditional bound, a in {3,4,5}"},
      {"fact2", true, true, "Tr rho_side^a >= Tr rho (rho + rho^tau)^(a-1)"},
      {"fact2_module", true, true, "fact2 with |rho^tau|"},
      {"fact3", true, true, "symmetric (+,-) bound"},
      {"fact3_limit", false, true, "a -> infinity limit of fact3"},
      {"fact4", true, true, "product bound, odd a"},
      {"fact4_4k1", true, true, "product bound with even powers, a = 4k+1"},
      {"fact4_limit", false, true, "a -> infinity limit of fact4"},
      {"sigma_general", true, true, "singular-value bound, odd a"},
      {"operator_power", true, true, "(rho_side (x) I)^a >= (rho + rho^tau)^a"},
      {"oddcut", true, true, "(rho_side (x) I)^a >= even part of (rho +- rho^tau)^a"},
      {"quadratic", false, true, "Tr rho rho^tau >= 0"},
      {"guhne_lewenstein", true, false, "Bell-basis Tsallis bound, two qubits"},
  };
  return registry;
}

bool is_known_criterion(const std::string& name) {
  const auto& reg = criterion_registry();
  return std::any_of(reg.begin(), reg.end(), [&](const CriterionInfo& c) { return c.name == name; });
}

CriterionReport evaluate_criterion(const CriterionRequest& request, const DensityMatrix& rho,
                                   const std::optional<AntisymmetricUnitary>& u, const CriterionOptions& opts) {
  const auto& reg = criterion_registry();
  const auto info = std::find_if(reg.begin(), reg.end(), [&](const CriterionInfo& c) { return c.name == request.name; });
  if (info == reg.end()) throw std::invalid_argument("unknown criterion '" + request.name + "'");
  if (info->needs_alpha && !request.alpha) {
    throw std::invalid_argument("criterion '" + request.name + "' needs an alpha");
  }
  const Side side = request.side.value_or(Side::B);
  const double alpha = request.alpha.value_or(1.0);
  auto integer_alpha = [&]() {
    if (std::isinf(alpha) || alpha != std::floor(alpha)) {
      throw std::invalid_argument("criterion '" + request.name + "' needs an integer alpha");
    }
    return static_cast<int>(alpha);
  };
  auto unitary = [&]() -> AntisymmetricUnitary {
    rho.dims().require_bipartite(request.name.c_str());
    const int d = rho.dims()[1 - index_of(side)];
    if (u) {
      if (u->dim() != d) throw DimensionError("supplied U does not match the reversed factor");
      return *u;
    }
    return canonical_V(d);
  };

  const std::string& n = request.name;
  if (n == "entropic") return entropic_criterion(rho, alpha, side, opts);
  if (n == "ppt") return ppt_criterion(rho, opts);
  if (n == "reduction") return reduction_criterion(rho, side, opts);
  if (n == "breuer") return breuer_operator_criterion(rho, side, unitary(), opts);
  if (n == "fact1") return fact1(rho, integer_alpha(), opts);
  if (n == "fact1_special") return fact1_special(rho, integer_alpha(), opts);
  if (n == "fact2") return fact2(rho, integer_alpha(), side, unitary(), opts);
  if (n == "fact2_module") return fact2_module(rho, integer_alpha(), side, unitary(), opts);
  if (n == "fact3") return fact3(rho, integer_alpha(), side, unitary(), opts);
  if (n == "fact3_limit") return fact3_limit(rho, side, unitary(), opts);
  if (n == "fact4") return fact4(rho, integer_alpha(), side, unitary(), opts);
  if (n == "fact4_4k1") {
    const int a = integer_alpha();
    if (a < 1 || (a - 1) % 4 != 0) throw std::invalid_argument("fact4_4k1: alpha must be 4k+1");
    return fact4_4k1(rho, (a - 1) / 4, side, unitary(), opts);
  }
  if (n == "fact4_limit") return fact4_limit(rho, side, unitary(), opts);
  if (n == "sigma_general") return sigma_general(rho, integer_alpha(), side, unitary(), opts);
  if (n == "operator_power") return operator_power(rho, integer_alpha(), side, unitary(), opts);
  if (n == "oddcut") return operator_oddcut(rho, integer_alpha(), side, unitary(), opts);
  if (n == "quadratic") return quadratic_criterion(rho, side, unitary(), opts);
  return guhne_lewenstein(rho, alpha, opts);
}

}  // namespace entsep
