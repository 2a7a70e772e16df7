#pragma once

#include <string>
#include <vector>

#include <Eigen/SparseCore>

#include "entsep/criteria.hpp"
#include "entsep/maps.hpp"

namespace entsep {

using SparseMatrix = Eigen::SparseMatrix<Complex, Eigen::RowMajor>;

/// Cyclic n-copy swap with Tr(𝒱 ρ₁⊗…⊗ρ_n) = Tr(ρ₁…ρ_n): maps
/// |Φ₁⟩|Φ₂⟩…|Φ_n⟩ to |Φ₂⟩…|Φ_n⟩|Φ₁⟩.
SparseMatrix swap_n_sparse(int d, int n);
ComplexMatrix swap_n(int d, int n);
/// ½(𝒱 + 𝒱†)
SparseMatrix symmetrized_swap_sparse(int d, int n);
ComplexMatrix symmetrized_swap(int d, int n);

/// Rows of maps Θ_ij with weights μ_i; encodes Σ μ_i Tr Π_j Θ_ij(ρ) ≥ 0.
struct MapTableau {
  std::vector<double> mu;
  std::vector<std::vector<OperatorMap>> theta;
  std::string source;

  int copies() const;
  int input_side() const;
  /// Throws DimensionError unless every row has α maps on a common input
  /// side and each row has a common output side.
  void validate() const;
};

struct MultiCopyWitness {
  SparseMatrix op;
  int copies = 0;
  DimSpec per_copy_dims;
  std::string source;

  int per_copy_side() const { return per_copy_dims.total(); }
  ComplexMatrix to_dense() const;
};

struct WitnessBuildOptions {
  /// Lifts the default size cap (per-copy side ≤ 4: α ≤ 5, otherwise side^α ≤ 4096).
  bool allow_large = false;
};

/// Largest α built without `allow_large`.
int default_max_copies(int per_copy_side);

MultiCopyWitness build_witness(const MapTableau& tableau, const DimSpec& per_copy_dims,
                               const WitnessBuildOptions& opts = {});

/// Hermitian part of Θ^{(α)†}(|Ψ⟩⟨Ψ|) with Θ^{(α)} = Λ^{(α)} ∘ Σ μ_i ⊗_j Θ_ij; all rows must map
/// onto the side of psi.
MultiCopyWitness witness_from_vector(const MapTableau& tableau, const DimSpec& per_copy_dims,
                                     const ComplexVector& psi, const WitnessBuildOptions& opts = {});

/// Re Tr(W ρ^{⊗α}) contracted entrywise; throws std::runtime_error when the
/// imaginary part exceeds 1e-9.
double evaluate_witness(const MultiCopyWitness& w, const DensityMatrix& rho);

struct TableauValue {
  double value = 0.0;
  /// Largest |Im Tr Π_j Θ_ij(ρ)| over rows.
  double max_imag = 0.0;
};

/// Σ μ_i Re Tr Π_j Θ_ij(ρ), evaluated per row with ordinary products.
TableauValue evaluate_tableau(const MapTableau& tableau, const DensityMatrix& rho);

/// Σ μ_i ⊗_j Θ_ij applied to ρ^{⊗α} and contracted by Λ^{(α)}: the operator
/// Σ μ_i Θ_i1(ρ)⋯Θ_iα(ρ).
ComplexMatrix tableau_operator(const MapTableau& tableau, const DensityMatrix& rho);

/// Λ^{(n)}(A₁⊗…⊗A_n) = A₁⋯A_n on d^n-dimensional inputs.
ComplexMatrix multiply_contract(const ComplexMatrix& x, int d, int n);
/// Λ^{(n)} with dense dual; the dual is Σ Y_mk E_{i₁k}⊗E_{i₂i₁}⊗…⊗E_{m i_{n−1}}.
OperatorMap multiplication_map(int n, int d);

namespace tableaux {

/// Tr ρ_side^α − Tr ρ^α
MapTableau entropic(const DimSpec& dims, int alpha, Side side);
/// fact3 margin
MapTableau fact3(const DimSpec& dims, int alpha, Side side, const AntisymmetricUnitary& u);
/// fact4 margin, odd α
MapTableau fact4(const DimSpec& dims, int alpha, Side side, const AntisymmetricUnitary& u);
/// Tr ρ_B³ − Tr ρ³ − Tr ρ(ρ^{τ_A})² on 2⊗d
MapTableau fact1_special3(const DimSpec& dims);
/// Tr ρ ρ^τ
MapTableau quadratic(const DimSpec& dims, Side side, const AntisymmetricUnitary& u);
/// (ρ_side⊗I)^α − ½[(ρ+ρ^τ)^α + (ρ−ρ^τ)^α] under Λ^{(α)}
MapTableau oddcut(const DimSpec& dims, int alpha, Side side, const AntisymmetricUnitary& u);

}  // namespace tableaux

}  // namespace entsep
