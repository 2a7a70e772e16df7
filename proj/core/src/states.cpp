#include "entsep/states.hpp"

#include <array>
#include <cmath>
#include <sstream>

namespace entsep {

namespace {

const Complex kI{0.0, 1.0};

bool is_half_integer(double x) {
  const double twice = 2.0 * x;
  return std::abs(twice - std::round(twice)) < 1e-9;
}

int twice_of(double x) { return static_cast<int>(std::lround(2.0 * x)); }

// Factorial of a nonnegative integer as a double; spins here stay small.
double factorial(int n) {
  double out = 1.0;
  for (int k = 2; k <= n; ++k) out *= k;
  return out;
}

bool triangle_ok(int tj1, int tj2, int tJ) {
  return tJ >= std::abs(tj1 - tj2) && tJ <= tj1 + tj2 && ((tj1 + tj2 + tJ) % 2 == 0);
}

}  // namespace

DensityMatrix::DensityMatrix(ComplexMatrix mat, DimSpec dims)
    : mat_(std::move(mat)), dims_(std::move(dims)) {
  if (mat_.rows() != mat_.cols() || mat_.rows() != dims_.total()) {
    throw DimensionError("DensityMatrix: matrix side does not match dims " + dims_.to_string());
  }
  const double herm = hermiticity_error(mat_);
  if (herm > kHermitianTol) {
    std::ostringstream os;
    os << "DensityMatrix: not Hermitian (max deviation " << herm << ")";
    throw InvalidStateError(os.str());
  }
  const Complex tr = mat_.trace();
  if (std::abs(tr - Complex(1.0, 0.0)) > kTraceTol) {
    std::ostringstream os;
    os << "DensityMatrix: trace " << tr.real() << " differs from 1";
    throw InvalidStateError(os.str());
  }
  const double lowest = min_eig(mat_);
  if (lowest < -kPositivityTol) {
    std::ostringstream os;
    os << "DensityMatrix: negative eigenvalue " << lowest;
    throw InvalidStateError(os.str());
  }
}

ComplexMatrix DensityMatrix::marginal(int keep) const { return partial_trace(mat_, dims_, keep); }

ComplexMatrix pauli(int index) {
  ComplexMatrix s(2, 2);
  switch (index) {
    case 0: s << 1, 0, 0, 1; break;
    case 1: s << 0, 1, 1, 0; break;
    case 2: s << 0, -kI, kI, 0; break;
    case 3: s << 1, 0, 0, -1; break;
    default: throw std::out_of_range("pauli: index must be 0..3");
  }
  return s;
}

ComplexVector bell_vector(BellState which) {
  const double h = 1.0 / std::sqrt(2.0);
  ComplexVector v = ComplexVector::Zero(4);
  switch (which) {
    case BellState::PsiPlus: v[1] = h; v[2] = h; break;
    case BellState::PsiMinus: v[1] = h; v[2] = -h; break;
    case BellState::PhiPlus: v[0] = h; v[3] = h; break;
    case BellState::PhiMinus: v[0] = h; v[3] = -h; break;
  }
  return v;
}

DensityMatrix bell_projector(BellState which) {
  return pure_state(bell_vector(which), DimSpec{2, 2});
}

DensityMatrix pure_state(const ComplexVector& psi, const DimSpec& dims) {
  const double norm = psi.norm();
  if (norm == 0.0) throw InvalidStateError("pure_state: zero vector");
  const ComplexVector unit = psi / norm;
  return DensityMatrix(unit * unit.adjoint(), dims);
}

DensityMatrix product_state(const DensityMatrix& a, const DensityMatrix& b) {
  std::vector<int> factors = a.dims().factors();
  factors.insert(factors.end(), b.dims().factors().begin(), b.dims().factors().end());
  return DensityMatrix(kron(a.matrix(), b.matrix()), DimSpec(std::move(factors)));
}

DensityMatrix maximally_mixed(const DimSpec& dims) {
  return DensityMatrix(identity(dims.total()) / static_cast<double>(dims.total()), dims);
}

bool BellDiagonalParams::valid(double tol) const {
  // Bell weights (1 + t·c)/4 for the four vertices c.
  const std::array<double, 4> w = {
      1 - t1 - t2 - t3,
      1 - t1 + t2 + t3,
      1 + t1 - t2 + t3,
      1 + t1 + t2 - t3,
  };
  for (double x : w)
    if (x < -tol) return false;
  return true;
}

bool So3Params::valid(double tol) const {
  return p >= -tol && q >= -tol && r >= -tol && p + q + r <= 1.0 + tol;
}

bool DivParams::valid(double tol) const { return b >= -tol && c >= -tol && b + c <= 1.0 + tol; }

DensityMatrix bell_diagonal(const BellDiagonalParams& params) {
  if (!params.valid()) {
    throw InvalidParameterError("bell_diagonal: correlation vector outside the tetrahedron");
  }
  ComplexMatrix rho = identity(4);
  const std::array<double, 3> t = {params.t1, params.t2, params.t3};
  for (int i = 1; i <= 3; ++i) rho += t[static_cast<std::size_t>(i - 1)] * kron(pauli(i), pauli(i));
  return DensityMatrix(rho / 4.0, DimSpec{2, 2});
}

BellDiagonalParams bell_mixture_correlations(double p, double q, double r) {
  // Tr(P σᵢ⊗σᵢ) per Bell projector: ψ₊ (1,1,−1), ψ₋ (−1,−1,−1), φ₊ (1,−1,1), φ₋ (−1,1,1).
  const double s = 1.0 - p - q - r;
  return BellDiagonalParams{
      p - q + r - s,
      p - q - r + s,
      -p - q + r + s,
  };
}

DensityMatrix bell_mixture(double p, double q, double r) {
  const double s = 1.0 - p - q - r;
  constexpr double tol = 1e-12;
  if (p < -tol || q < -tol || r < -tol || s < -tol) {
    throw InvalidParameterError("bell_mixture: weights outside the simplex");
  }
  const ComplexMatrix rho = p * bell_projector(BellState::PsiPlus).matrix() +
                            q * bell_projector(BellState::PsiMinus).matrix() +
                            r * bell_projector(BellState::PhiPlus).matrix() +
                            s * bell_projector(BellState::PhiMinus).matrix();
  return DensityMatrix(rho, DimSpec{2, 2});
}

DensityMatrix max_entangled(int d) {
  if (d < 2) throw InvalidParameterError("max_entangled: d must be at least 2");
  ComplexVector v = ComplexVector::Zero(d * d);
  for (int i = 0; i < d; ++i) v[i * d + i] = 1.0;
  return pure_state(v, DimSpec{d, d});
}

DensityMatrix divincenzo(const DivParams& params) {
  if (!params.valid()) throw InvalidParameterError("divincenzo: need b, c >= 0 and b + c <= 1");
  const double a = 0.5 * (1.0 - params.b - params.c);
  ComplexMatrix rho = ComplexMatrix::Zero(4, 4);
  rho(0, 0) = a;
  rho(3, 3) = a;
  rho += params.b * bell_projector(BellState::PsiMinus).matrix();
  rho += params.c * bell_projector(BellState::PsiPlus).matrix();
  return DensityMatrix(rho, DimSpec{2, 2});
}

double clebsch_gordan(double j1, double m1, double j2, double m2, double J, double M) {
  for (double x : {j1, m1, j2, m2, J, M}) {
    if (!is_half_integer(x)) throw InvalidParameterError("clebsch_gordan: arguments must be half-integers");
  }
  const int tj1 = twice_of(j1), tm1 = twice_of(m1), tj2 = twice_of(j2), tm2 = twice_of(m2);
  const int tJ = twice_of(J), tM = twice_of(M);
  if (tj1 < 0 || tj2 < 0 || tJ < 0) throw InvalidParameterError("clebsch_gordan: negative spin");
  if (!triangle_ok(tj1, tj2, tJ)) throw InvalidParameterError("clebsch_gordan: triangle rule violated");
  if (std::abs(tm1) > tj1 || std::abs(tm2) > tj2 || std::abs(tM) > tJ) return 0.0;
  if ((tj1 - tm1) % 2 != 0 || (tj2 - tm2) % 2 != 0 || (tJ - tM) % 2 != 0) {
    throw InvalidParameterError("clebsch_gordan: projection incompatible with spin");
  }
  if (tM != tm1 + tm2) return 0.0;

  // Racah's closed form; all factorial arguments are integers here.
  auto f = [](int twice) { return factorial(twice / 2); };
  const double pre = std::sqrt((tJ + 1) * f(tj1 + tj2 - tJ) * f(tj1 - tj2 + tJ) * f(-tj1 + tj2 + tJ) /
                               f(tj1 + tj2 + tJ + 2)) *
                     std::sqrt(f(tJ + tM) * f(tJ - tM) * f(tj1 - tm1) * f(tj1 + tm1) * f(tj2 - tm2) *
                               f(tj2 + tm2));
  double sum = 0.0;
  for (int k = 0;; ++k) {
    const int a = tj1 + tj2 - tJ - 2 * k;
    const int b = tj1 - tm1 - 2 * k;
    const int c = tj2 + tm2 - 2 * k;
    const int d = tJ - tj2 + tm1 + 2 * k;
    const int e = tJ - tj1 - tm2 + 2 * k;
    if (a < 0 || b < 0 || c < 0) break;
    if (d < 0 || e < 0) continue;
    const double term = 1.0 / (factorial(k) * f(a) * f(b) * f(c) * f(d) * f(e));
    sum += (k % 2 == 0) ? term : -term;
  }
  return pre * sum;
}

ComplexMatrix angular_momentum_projector(double j1, double j2, double J, bool normalized) {
  for (double x : {j1, j2, J}) {
    if (!is_half_integer(x)) throw InvalidParameterError("angular_momentum_projector: half-integers required");
  }
  const int tj1 = twice_of(j1), tj2 = twice_of(j2), tJ = twice_of(J);
  if (tj1 < 0 || tj2 < 0 || !triangle_ok(tj1, tj2, tJ)) {
    throw InvalidParameterError("angular_momentum_projector: triangle rule violated");
  }
  const int d1 = tj1 + 1, d2 = tj2 + 1;
  ComplexMatrix proj = ComplexMatrix::Zero(d1 * d2, d1 * d2);
  for (int tM = tJ; tM >= -tJ; tM -= 2) {
    ComplexVector v = ComplexVector::Zero(d1 * d2);
    for (int a = 0; a < d1; ++a) {
      const int tm1 = tj1 - 2 * a;
      for (int b = 0; b < d2; ++b) {
        const int tm2 = tj2 - 2 * b;
        if (tm1 + tm2 != tM) continue;
        v[a * d2 + b] = clebsch_gordan(0.5 * tj1, 0.5 * tm1, 0.5 * tj2, 0.5 * tm2, 0.5 * tJ, 0.5 * tM);
      }
    }
    proj += v * v.adjoint();
  }
  if (normalized) proj /= static_cast<double>(tJ + 1);
  return proj;
}

DensityMatrix so3_invariant_4x4(const So3Params& params) {
  if (!params.valid()) throw InvalidParameterError("so3_invariant_4x4: need p, q, r >= 0 and p + q + r <= 1");
  const double w3 = 1.0 - params.p - params.q - params.r;
  const ComplexMatrix rho = params.p * angular_momentum_projector(1.5, 1.5, 0) +
                            params.q * angular_momentum_projector(1.5, 1.5, 1) +
                            params.r * angular_momentum_projector(1.5, 1.5, 2) +
                            w3 * angular_momentum_projector(1.5, 1.5, 3);
  return DensityMatrix(rho, DimSpec{4, 4});
}

ComplexVector random_unit_vector(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  ComplexVector v(n);
  for (int i = 0; i < n; ++i) v[i] = Complex(g(rng), g(rng));
  return v / v.norm();
}

DensityMatrix random_density(const DimSpec& dims, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  const int n = dims.total();
  ComplexMatrix gm(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) gm(i, j) = Complex(g(rng), g(rng));
  ComplexMatrix rho = gm * gm.adjoint();
  rho /= rho.trace().real();
  rho = 0.5 * (rho + rho.adjoint()).eval();
  return DensityMatrix(rho, dims);
}

DensityMatrix random_density(const DimSpec& dims, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return random_density(dims, rng);
}

DensityMatrix random_separable(const DimSpec& dims, int n_terms, std::mt19937_64& rng) {
  dims.require_bipartite("random_separable");
  if (n_terms <= 0) n_terms = dims[0] * dims[1] * 4;
  // Uniform simplex weights from normalized exponentials.
  std::exponential_distribution<double> expo(1.0);
  std::vector<double> w(static_cast<std::size_t>(n_terms));
  double total = 0.0;
  for (double& x : w) total += (x = expo(rng));
  ComplexMatrix rho = ComplexMatrix::Zero(dims.total(), dims.total());
  for (double x : w) {
    const DensityMatrix a = random_density(DimSpec{dims[0]}, rng);
    const DensityMatrix b = random_density(DimSpec{dims[1]}, rng);
    rho += (x / total) * kron(a.matrix(), b.matrix());
  }
  rho = 0.5 * (rho + rho.adjoint()).eval();
  rho /= rho.trace().real();
  return DensityMatrix(rho, dims);
}

DensityMatrix random_separable(const DimSpec& dims, int n_terms, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return random_separable(dims, n_terms, rng);
}

}  // namespace entsep
