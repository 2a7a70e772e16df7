#include "entsep/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace entsep {

namespace {

// Mixed-radix digits of a flat index; factor 0 is the most significant.
struct Radix {
  explicit Radix(const DimSpec& dims) : factors(dims.factors()), strides(factors.size()) {
    int s = 1;
    for (std::size_t k = factors.size(); k-- > 0;) {
      strides[k] = s;
      s *= factors[k];
    }
  }
  int digit(int index, std::size_t k) const { return (index / strides[k]) % factors[k]; }

  std::vector<int> factors;
  std::vector<int> strides;
};

void require_side(const ComplexMatrix& x, const DimSpec& dims, const char* what) {
  if (x.rows() != x.cols() || x.rows() != dims.total()) {
    std::ostringstream os;
    os << what << ": matrix " << x.rows() << "x" << x.cols()
       << " does not match dims " << dims.to_string();
    throw DimensionError(os.str());
  }
}

void require_subsystem(const DimSpec& dims, int subsystem, const char* what) {
  if (subsystem < 0 || subsystem >= dims.size()) {
    throw DimensionError(std::string(what) + ": subsystem index out of range");
  }
}

}  // namespace

DimSpec::DimSpec(std::vector<int> factors) : factors_(std::move(factors)) {
  if (factors_.empty()) throw DimensionError("DimSpec: no factors");
  total_ = 1;
  for (int f : factors_) {
    if (f < 1) throw DimensionError("DimSpec: factor dimensions must be positive");
    total_ *= f;
  }
}

DimSpec DimSpec::qubits(int n) {
  if (n < 1) throw DimensionError("DimSpec::qubits: need at least one qubit");
  return DimSpec(std::vector<int>(static_cast<std::size_t>(n), 2));
}

bool DimSpec::all_qubits() const {
  return !factors_.empty() &&
         std::all_of(factors_.begin(), factors_.end(), [](int f) { return f == 2; });
}

void DimSpec::require_bipartite(const char* what) const {
  if (!is_bipartite()) {
    throw DimensionError(std::string(what) + ": bipartite dims required, got " + to_string());
  }
}

std::string DimSpec::to_string() const {
  std::ostringstream os;
  os << "(";
  for (std::size_t i = 0; i < factors_.size(); ++i) os << (i ? "," : "") << factors_[i];
  os << ")";
  return os.str();
}

ComplexMatrix identity(int n) { return ComplexMatrix::Identity(n, n); }

Complex trace(const ComplexMatrix& x) { return x.trace(); }

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

ComplexMatrix kron_all(std::span<const ComplexMatrix> factors) {
  if (factors.empty()) return identity(1);
  ComplexMatrix out = factors.front();
  for (std::size_t k = 1; k < factors.size(); ++k) out = kron(out, factors[k]);
  return out;
}

ComplexMatrix partial_trace(const ComplexMatrix& x, const DimSpec& dims, int keep) {
  require_subsystem(dims, keep, "partial_trace");
  const int kept[] = {keep};
  return partial_trace_keep(x, dims, kept);
}

ComplexMatrix partial_trace_keep(const ComplexMatrix& x, const DimSpec& dims,
                                 std::span<const int> keep) {
  require_side(x, dims, "partial_trace");
  std::vector<bool> kept(static_cast<std::size_t>(dims.size()), false);
  for (int k : keep) {
    require_subsystem(dims, k, "partial_trace");
    kept[static_cast<std::size_t>(k)] = true;
  }
  const Radix radix(dims);
  int out_dim = 1;
  for (int k = 0; k < dims.size(); ++k)
    if (kept[static_cast<std::size_t>(k)]) out_dim *= dims[k];

  auto split = [&](int index, int& kept_index, int& traced_index) {
    kept_index = 0;
    traced_index = 0;
    for (std::size_t k = 0; k < radix.factors.size(); ++k) {
      const int d = radix.digit(index, k);
      if (kept[k]) {
        kept_index = kept_index * radix.factors[k] + d;
      } else {
        traced_index = traced_index * radix.factors[k] + d;
      }
    }
  };

  const int n = dims.total();
  std::vector<int> kept_of(static_cast<std::size_t>(n)), traced_of(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) split(i, kept_of[i], traced_of[i]);

  ComplexMatrix out = ComplexMatrix::Zero(out_dim, out_dim);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (traced_of[i] == traced_of[j]) out(kept_of[i], kept_of[j]) += x(i, j);
    }
  }
  return out;
}

ComplexMatrix partial_transpose(const ComplexMatrix& x, const DimSpec& dims, int subsystem) {
  require_side(x, dims, "partial_transpose");
  require_subsystem(dims, subsystem, "partial_transpose");
  const Radix radix(dims);
  const auto k = static_cast<std::size_t>(subsystem);
  const int stride = radix.strides[k];
  const int n = dims.total();
  ComplexMatrix out(n, n);
  for (int i = 0; i < n; ++i) {
    const int di = radix.digit(i, k);
    for (int j = 0; j < n; ++j) {
      const int dj = radix.digit(j, k);
      out(i + (dj - di) * stride, j + (di - dj) * stride) = x(i, j);
    }
  }
  return out;
}

ComplexMatrix embed(const ComplexMatrix& op, const DimSpec& dims, int subsystem) {
  require_subsystem(dims, subsystem, "embed");
  if (op.rows() != dims[subsystem] || op.cols() != dims[subsystem]) {
    throw DimensionError("embed: operator does not match subsystem dimension");
  }
  int before = 1, after = 1;
  for (int k = 0; k < subsystem; ++k) before *= dims[k];
  for (int k = subsystem + 1; k < dims.size(); ++k) after *= dims[k];
  return kron(kron(identity(before), op), identity(after));
}

double hermiticity_error(const ComplexMatrix& x) {
  if (x.rows() != x.cols()) return std::numeric_limits<double>::infinity();
  return (x - x.adjoint()).cwiseAbs().maxCoeff();
}

bool is_hermitian(const ComplexMatrix& x, double tol) {
  return x.rows() == x.cols() && hermiticity_error(x) <= tol;
}

void require_square(const ComplexMatrix& x, const char* what) {
  if (x.rows() != x.cols()) throw DimensionError(std::string(what) + ": square matrix required");
}

void require_hermitian(const ComplexMatrix& x, const char* what) {
  require_square(x, what);
  const double err = hermiticity_error(x);
  if (err > kHermitianTol) {
    std::ostringstream os;
    os << what << ": matrix is not Hermitian (max deviation " << err << ")";
    throw NotHermitianError(os.str());
  }
}

EigenSystem hermitian_eig(const ComplexMatrix& h) {
  require_hermitian(h, "hermitian_eig");
  const Eigen::MatrixXcd col_major = h;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(col_major, Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("hermitian_eig: eigensolver did not converge");
  }
  return EigenSystem{solver.eigenvalues(), solver.eigenvectors()};
}

RealVector hermitian_eigenvalues(const ComplexMatrix& h) {
  require_hermitian(h, "hermitian_eigenvalues");
  const Eigen::MatrixXcd col_major = h;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(col_major, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("hermitian_eigenvalues: eigensolver did not converge");
  }
  return solver.eigenvalues();
}

ComplexMatrix mat_pow_int(const ComplexMatrix& x, int k) {
  require_square(x, "mat_pow_int");
  if (k < 0) throw std::invalid_argument("mat_pow_int: negative exponent");
  ComplexMatrix result = identity(static_cast<int>(x.rows()));
  ComplexMatrix base = x;
  bool first = true;
  while (k > 0) {
    if (k & 1) {
      if (first) {
        result = base;
        first = false;
      } else {
        result = (result * base).eval();
      }
    }
    k >>= 1;
    if (k > 0) base = (base * base).eval();
  }
  return result;
}

ComplexMatrix mat_abs(const ComplexMatrix& h) {
  return hermitian_function(h, [](double v) { return std::abs(v); });
}

double operator_norm(const ComplexMatrix& h) {
  const RealVector ev = hermitian_eigenvalues(h);
  return std::max(std::abs(ev.minCoeff()), std::abs(ev.maxCoeff()));
}

double spectral_norm(const ComplexMatrix& x) {
  const Eigen::MatrixXcd col_major = x;
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(col_major);
  return svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
}

double min_eig(const ComplexMatrix& h) { return hermitian_eigenvalues(h).minCoeff(); }

double max_eig(const ComplexMatrix& h) { return hermitian_eigenvalues(h).maxCoeff(); }

double commutator_fro(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_square(a, "commutator_fro");
  require_square(b, "commutator_fro");
  if (a.rows() != b.rows()) throw DimensionError("commutator_fro: side mismatch");
  return (a * b - b * a).norm();
}

double max_abs_diff(const ComplexMatrix& x, const ComplexMatrix& y) {
  if (x.rows() != y.rows() || x.cols() != y.cols()) {
    throw DimensionError("max_abs_diff: shape mismatch");
  }
  if (x.size() == 0) return 0.0;
  return (x - y).cwiseAbs().maxCoeff();
}

}  // namespace entsep
