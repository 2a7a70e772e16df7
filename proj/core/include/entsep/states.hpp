#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>

#include "entsep/matrix.hpp"

namespace entsep {

class InvalidStateError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class InvalidParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Tolerances a matrix must meet to be accepted as a density matrix.
inline constexpr double kTraceTol = 1e-10;
inline constexpr double kPositivityTol = 1e-10;

/// Hermitian, positive semidefinite, unit-trace matrix with its tensor layout.
class DensityMatrix {
 public:
  /// Validates Hermiticity, trace and positivity (InvalidStateError) and the
  /// matrix side against dims (DimensionError).
  DensityMatrix(ComplexMatrix mat, DimSpec dims);

  const ComplexMatrix& matrix() const { return mat_; }
  const DimSpec& dims() const { return dims_; }
  int dim() const { return dims_.total(); }

  /// Reduced state on one factor.
  ComplexMatrix marginal(int keep) const;

 private:
  ComplexMatrix mat_;
  DimSpec dims_;
};

/// Pauli matrices σ₀..σ₃ (σ₀ = I₂).
ComplexMatrix pauli(int index);

enum class BellState { PsiPlus, PsiMinus, PhiPlus, PhiMinus };

/// |ψ±⟩ = (|01⟩ ± |10⟩)/√2, |φ±⟩ = (|00⟩ ± |11⟩)/√2
ComplexVector bell_vector(BellState which);
DensityMatrix bell_projector(BellState which);

/// Pure state |ψ⟩⟨ψ| after normalizing ψ.
DensityMatrix pure_state(const ComplexVector& psi, const DimSpec& dims);
DensityMatrix product_state(const DensityMatrix& a, const DensityMatrix& b);
DensityMatrix maximally_mixed(const DimSpec& dims);

/// Correlation vector of a Bell-diagonal state; must lie in the tetrahedron
/// spanned by (−1,−1,−1), (−1,1,1), (1,−1,1), (1,1,−1).
struct BellDiagonalParams {
  double t1 = 0.0;
  double t2 = 0.0;
  double t3 = 0.0;

  bool valid(double tol = 1e-12) const;
};

/// Weights of the 4⊗4 SO(3)-invariant family on P₀, P₁, P₂ (P₃ takes the rest).
struct So3Params {
  double p = 0.0;
  double q = 0.0;
  double r = 0.0;

  bool valid(double tol = 1e-12) const;
};

/// Two-qubit family a(|00⟩⟨00|+|11⟩⟨11|) + b|ψ₋⟩⟨ψ₋| + c|ψ₊⟩⟨ψ₊|, a = (1−b−c)/2.
struct DivParams {
  double b = 0.0;
  double c = 0.0;

  bool valid(double tol = 1e-12) const;
};

/// ρ = (1/4)(I⊗I + Σ tᵢ σᵢ⊗σᵢ)
DensityMatrix bell_diagonal(const BellDiagonalParams& params);

/// p|ψ₊⟩⟨ψ₊| + q|ψ₋⟩⟨ψ₋| + r|φ₊⟩⟨φ₊| + (1−p−q−r)|φ₋⟩⟨φ₋|
DensityMatrix bell_mixture(double p, double q, double r);

/// Correlation vector of bell_mixture(p, q, r).
BellDiagonalParams bell_mixture_correlations(double p, double q, double r);

/// P₊^(d) = (1/d) Σ_ij |ii⟩⟨jj|
DensityMatrix max_entangled(int d);

DensityMatrix divincenzo(const DivParams& params);

/// Condon–Shortley coefficient ⟨j1 m1; j2 m2 | J M⟩. Arguments are
/// half-integers; returns 0 when M ≠ m1 + m2.
double clebsch_gordan(double j1, double m1, double j2, double m2, double J, double M);

/// Eigenprojector of total angular momentum J for spins j1⊗j2, basis ordered
/// m = j, j−1, …, −j on each factor. With `normalized` the result is divided
/// by 2J+1 so that its trace is one.
ComplexMatrix angular_momentum_projector(double j1, double j2, double J, bool normalized = true);

/// p P₀ + q P₁ + r P₂ + (1−p−q−r) P₃ for two spin-3/2 particles.
DensityMatrix so3_invariant_4x4(const So3Params& params);

/// GG†/Tr(GG†) for a complex Gaussian G.
DensityMatrix random_density(const DimSpec& dims, std::mt19937_64& rng);
DensityMatrix random_density(const DimSpec& dims, std::uint64_t seed);

/// Σᵢ pᵢ ρᵢ⊗ρ̃ᵢ with random local states and simplex weights. `n_terms` = 0
/// selects the default dA·dB·4.
DensityMatrix random_separable(const DimSpec& dims, int n_terms, std::mt19937_64& rng);
DensityMatrix random_separable(const DimSpec& dims, int n_terms, std::uint64_t seed);

/// Haar-random unit vector of dimension n.
ComplexVector random_unit_vector(int n, std::mt19937_64& rng);

}  // namespace entsep
