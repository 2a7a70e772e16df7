#pragma once

#include <complex>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace entsep {

using Complex = std::complex<double>;

/// Dense complex matrix, row-major. Every operator in the library is one of these.
using ComplexMatrix =
    Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

/// Absolute entrywise tolerance used to decide Hermiticity.
inline constexpr double kHermitianTol = 1e-10;

class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class NotHermitianError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Ordered subsystem dimensions of a tensor-product space.
class DimSpec {
 public:
  DimSpec() = default;
  explicit DimSpec(std::vector<int> factors);
  DimSpec(std::initializer_list<int> factors)
      : DimSpec(std::vector<int>(factors)) {}

  static DimSpec bipartite(int dim_a, int dim_b) { return DimSpec{dim_a, dim_b}; }
  static DimSpec qubits(int n);

  int total() const { return total_; }
  int size() const { return static_cast<int>(factors_.size()); }
  int operator[](int i) const { return factors_.at(static_cast<std::size_t>(i)); }
  const std::vector<int>& factors() const { return factors_; }

  bool is_bipartite() const { return factors_.size() == 2; }
  bool all_qubits() const;

  /// Throws DimensionError unless there are exactly two factors.
  void require_bipartite(const char* what) const;

  std::string to_string() const;

  friend bool operator==(const DimSpec&, const DimSpec&) = default;

 private:
  std::vector<int> factors_;
  int total_ = 0;
};

/// Eigenpairs of a Hermitian matrix; values ascending, vectors as columns.
struct EigenSystem {
  RealVector values;
  ComplexMatrix vectors;
};

ComplexMatrix identity(int n);
Complex trace(const ComplexMatrix& x);

/// (a⊗b)_{(i·rb+k),(j·cb+l)} = a_{ij} b_{kl}
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix kron_all(std::span<const ComplexMatrix> factors);

/// Reduced matrix on the single factor `keep`.
ComplexMatrix partial_trace(const ComplexMatrix& x, const DimSpec& dims, int keep);
/// Reduced matrix on the listed factors (kept in ascending order).
ComplexMatrix partial_trace_keep(const ComplexMatrix& x, const DimSpec& dims,
                                 std::span<const int> keep);

ComplexMatrix partial_transpose(const ComplexMatrix& x, const DimSpec& dims,
                                int subsystem);

/// Embeds a one-factor operator into the full space: I⊗…⊗op⊗…⊗I.
ComplexMatrix embed(const ComplexMatrix& op, const DimSpec& dims, int subsystem);

bool is_hermitian(const ComplexMatrix& x, double tol = kHermitianTol);
double hermiticity_error(const ComplexMatrix& x);
void require_square(const ComplexMatrix& x, const char* what);
void require_hermitian(const ComplexMatrix& x, const char* what);

EigenSystem hermitian_eig(const ComplexMatrix& h);
RealVector hermitian_eigenvalues(const ComplexMatrix& h);

/// Binary exponentiation by exact multiplication; k = 0 gives the identity.
ComplexMatrix mat_pow_int(const ComplexMatrix& x, int k);

/// |h| = sqrt(h†h) for Hermitian h.
ComplexMatrix mat_abs(const ComplexMatrix& h);

/// Applies f to the eigenvalues of a Hermitian matrix.
template <class F>
ComplexMatrix hermitian_function(const ComplexMatrix& h, F&& f) {
  const EigenSystem es = hermitian_eig(h);
  RealVector mapped(es.values.size());
  for (Eigen::Index i = 0; i < es.values.size(); ++i) mapped[i] = f(es.values[i]);
  return es.vectors * mapped.cast<Complex>().asDiagonal() * es.vectors.adjoint();
}

double operator_norm(const ComplexMatrix& h);
/// Largest singular value; valid for non-Hermitian input.
double spectral_norm(const ComplexMatrix& x);
double min_eig(const ComplexMatrix& h);
double max_eig(const ComplexMatrix& h);

/// ‖ab − ba‖_F
double commutator_fro(const ComplexMatrix& a, const ComplexMatrix& b);

/// Largest |x_ij − y_ij|.
double max_abs_diff(const ComplexMatrix& x, const ComplexMatrix& y);

}  // namespace entsep
