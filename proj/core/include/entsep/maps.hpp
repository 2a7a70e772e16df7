#pragma once

#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "entsep/matrix.hpp"
#include "entsep/states.hpp"

namespace entsep {

/// Tolerance on ‖Uᵀ+U‖_F and ‖U†U−I‖_F.
inline constexpr double kUnitaryTol = 1e-10;

/// Antisymmetric unitary on an even-dimensional space.
class AntisymmetricUnitary {
 public:
  /// Throws DimensionError for odd or non-square input, std::invalid_argument
  /// when the matrix is not antisymmetric or not unitary.
  explicit AntisymmetricUnitary(ComplexMatrix u);

  const ComplexMatrix& matrix() const { return u_; }
  int dim() const { return static_cast<int>(u_.rows()); }

 private:
  ComplexMatrix u_;
};

/// Anti-diagonal with +1 on the upper half and −1 on the lower half.
AntisymmetricUnitary canonical_V(int d);

/// Anti-diagonal (−1)^k, the spin-flip V_{m,−m} = (−1)^{j−m} in the m = j..−j
/// basis. Commutes with collective SU(2) rotations; equals canonical_V(2).
AntisymmetricUnitary spin_flip_V(int d);

/// U Xᵀ U†
ComplexMatrix time_reversal(const ComplexMatrix& x, const AntisymmetricUnitary& u);
/// Same action for an arbitrary unitary.
ComplexMatrix time_reversal(const ComplexMatrix& x, const ComplexMatrix& u);

ComplexMatrix partial_time_reversal(const ComplexMatrix& x, const DimSpec& dims, int subsystem,
                                    const AntisymmetricUnitary& u);
ComplexMatrix partial_time_reversal(const DensityMatrix& rho, int subsystem,
                                    const AntisymmetricUnitary& u);
/// (I⊗U) X^{T_sub} (I⊗U†) for any unitary U on the factor.
ComplexMatrix partial_unitary_transpose(const ComplexMatrix& x, const DimSpec& dims, int subsystem,
                                        const ComplexMatrix& u);

enum class MapSign { Plus, Minus };

/// (Tr A) I − A
ComplexMatrix reduction_map(const ComplexMatrix& a);
/// (Tr A) I − A ∓ U Aᵀ U†, with Minus giving the positive Breuer–Hall map.
ComplexMatrix breuer_hall(const ComplexMatrix& a, const AntisymmetricUnitary& u, MapSign sign);

/// Applies σ_y (·)^{Γ_i} σ_y to each listed qubit (1-based indices).
ComplexMatrix multiqubit_reflection(const ComplexMatrix& x, int n_qubits,
                                    std::span<const int> reflected);
ComplexMatrix multiqubit_reflection(const DensityMatrix& rho, std::span<const int> reflected);

/// Linear map on square matrices together with its dual under the bilinear
/// pairing Tr[X Θ(Y)] = Tr[Θ†(X) Y].
class OperatorMap {
 public:
  using Action = std::function<ComplexMatrix(const ComplexMatrix&)>;

  OperatorMap(std::string name, int input_side, int output_side, Action apply, Action dual);

  const std::string& name() const { return name_; }
  int input_side() const { return in_; }
  int output_side() const { return out_; }

  /// Throws DimensionError on a side mismatch.
  ComplexMatrix apply(const ComplexMatrix& x) const;
  ComplexMatrix apply_dual(const ComplexMatrix& x) const;
  ComplexMatrix operator()(const ComplexMatrix& x) const { return apply(x); }

  /// The dual as a map in its own right; dual().dual() acts as *this.
  OperatorMap dual() const;

 private:
  std::string name_;
  int in_;
  int out_;
  Action apply_;
  Action dual_;
};

namespace maps {

OperatorMap identity(int d);
OperatorMap transpose(int d);
OperatorMap time_reversal(const AntisymmetricUnitary& u);
/// τ^U for a general unitary; the dual is Uᵀ Xᵀ Ū.
OperatorMap unitary_transpose(const ComplexMatrix& u);
OperatorMap partial_transpose(const DimSpec& dims, int subsystem);
OperatorMap partial_time_reversal(const DimSpec& dims, int subsystem, const AntisymmetricUnitary& u);
/// Reduced matrix on factor `keep` of a bipartite space.
OperatorMap partial_trace(const DimSpec& dims, int keep);
/// X ↦ X⊗I_{extra} (extra_side after the input).
OperatorMap tensor_identity(int input_side, int extra_side);
OperatorMap reduction(int d);
OperatorMap breuer_hall(const AntisymmetricUnitary& u, MapSign sign);
/// Applies `local` to one factor; the factor must match local's input side.
OperatorMap local(const DimSpec& dims, int subsystem, const OperatorMap& local);
OperatorMap sum(const std::vector<OperatorMap>& terms);
/// outer ∘ inner
OperatorMap compose(const OperatorMap& outer, const OperatorMap& inner);
OperatorMap scale(Complex factor, const OperatorMap& map);

}  // namespace maps

}  // namespace entsep
