#pragma once

#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "entsep/maps.hpp"
#include "entsep/states.hpp"

namespace entsep {

/// Factor whose marginal enters a criterion. The partial time reversal (or
/// transpose) always acts on the other factor.
enum class Side { A, B };

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Relative tolerances; see the README for how the scale is chosen.
struct CriterionOptions {
  double tol = 1e-9;
  /// Commutator Frobenius norm allowed, relative to ‖ρ‖_F.
  double assumption_tol = 1e-8;
  /// Eigenvalues of ρ at or below this count as zero in the α→∞ limit.
  double lambda_threshold = 1e-12;
};

struct CriterionReport {
  std::string name;
  /// Empty for criteria without an order; may be +∞.
  std::optional<double> alpha;
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;
  bool satisfied = true;
  /// Empty when the criterion has no assumption.
  std::optional<bool> assumption_ok;
  /// Effective tolerance: options.tol times the criterion's natural scale.
  double tol = 0.0;
  std::string note;
};

/// Alternating exponent list (l₁, k₁, l₂, k₂, …) for Tr[ρ^{l₁}(ρ^τ)^{k₁}⋯].
struct QTermSpec {
  std::vector<int> exponents;
};

/// Throws std::runtime_error when the imaginary residue exceeds 1e-8.
double q_term(const DensityMatrix& rho, const QTermSpec& spec, int tau_subsystem,
              const AntisymmetricUnitary& u);

/// Rényi entropy (natural log). α = 1 gives von Neumann, α = 0 log rank,
/// α = ∞ −log‖ρ‖.
double renyi(const ComplexMatrix& rho, double alpha);
double renyi(const DensityMatrix& rho, double alpha);
/// Tsallis entropy of a distribution; α = 1 gives Shannon (natural log).
double tsallis(const std::vector<double>& probs, double alpha);

/// Tr ρ^α for real α ≥ 0 from the spectrum (negative roundoff clipped).
double trace_power(const ComplexMatrix& rho, double alpha);

CriterionReport entropic_criterion(const DensityMatrix& rho, double alpha, Side side,
                                   const CriterionOptions& opts = {});

CriterionReport ppt_criterion(const DensityMatrix& rho, const CriterionOptions& opts = {});
CriterionReport reduction_criterion(const DensityMatrix& rho, Side side, const CriterionOptions& opts = {});
CriterionReport breuer_operator_criterion(const DensityMatrix& rho, Side side, const AntisymmetricUnitary& u,
                                          const CriterionOptions& opts = {});

/// 2⊗d states only: marginal on B, time reversal on the qubit.
CriterionReport fact1(const DensityMatrix& rho, int alpha, const CriterionOptions& opts = {});
CriterionReport fact1_special(const DensityMatrix& rho, int alpha, const CriterionOptions& opts = {});

CriterionReport fact2(const DensityMatrix& rho, int alpha, Side side, const AntisymmetricUnitary& u,
                      const CriterionOptions& opts = {});
CriterionReport fact2_module(const DensityMatrix& rho, int alpha, Side side, const AntisymmetricUnitary& u,
                             const CriterionOptions& opts = {});

CriterionReport fact3(const DensityMatrix& rho, int alpha, Side side, const AntisymmetricUnitary& u,
                      const CriterionOptions& opts = {});
CriterionReport fact3_limit(const DensityMatrix& rho, Side side, const AntisymmetricUnitary& u,
                            const CriterionOptions& opts = {});

/// Odd α only.
CriterionReport fact4(const DensityMatrix& rho, int alpha, Side side, const AntisymmetricUnitary& u,
                      const CriterionOptions& opts = {});
/// α = 4k+1 with exact even powers of ρ^τ.
CriterionReport fact4_4k1(const DensityMatrix& rho, int k, Side side, const AntisymmetricUnitary& u,
                          const CriterionOptions& opts = {});
CriterionReport fact4_limit(const DensityMatrix& rho, Side side, const AntisymmetricUnitary& u,
                            const CriterionOptions& opts = {});

/// Singular-value bound without commutation assumption; odd α only.
CriterionReport sigma_general(const DensityMatrix& rho, int alpha, Side side, const AntisymmetricUnitary& u,
                              const CriterionOptions& opts = {});

/// (ρ_side⊗I)^α ≥ (ρ+ρ^τ)^α; lhs is the minimum eigenvalue of the difference.
CriterionReport operator_power(const DensityMatrix& rho, int alpha, Side side, const AntisymmetricUnitary& u,
                               const CriterionOptions& opts = {});
/// (ρ_side⊗I)^α ≥ ½[(ρ+ρ^τ)^α + (ρ−ρ^τ)^α]
CriterionReport operator_oddcut(const DensityMatrix& rho, int alpha, Side side, const AntisymmetricUnitary& u,
                                const CriterionOptions& opts = {});

/// Tr(ρ ρ^τ) ≥ 0
CriterionReport quadratic_criterion(const DensityMatrix& rho, Side side, const AntisymmetricUnitary& u,
                                    const CriterionOptions& opts = {});
/// Same inequality with U Xᵀ U† for any unitary U on the reversed factor.
CriterionReport quadratic_criterion(const DensityMatrix& rho, Side side, const ComplexMatrix& u,
                                    const CriterionOptions& opts = {});

/// Bell-basis outcome probabilities (ψ₊, ψ₋, φ₊, φ₋) of a two-qubit state.
std::vector<double> bell_probabilities(const DensityMatrix& rho);
CriterionReport guhne_lewenstein(const DensityMatrix& rho, double alpha, const CriterionOptions& opts = {});

/// Named access used by scans and the CLI.
struct CriterionRequest {
  std::string name;
  std::optional<double> alpha;
  std::optional<Side> side;

  /// name, or name_a<alpha> ("fact3_a5", "entropic_ainf").
  std::string label() const;
};

/// Parses "fact3:5", "fact3:5:A", "ppt", "entropic:inf".
CriterionRequest parse_criterion_request(const std::string& text);

struct CriterionInfo {
  std::string name;
  bool needs_alpha;
  bool uses_u;
  std::string description;
};

const std::vector<CriterionInfo>& criterion_registry();
bool is_known_criterion(const std::string& name);

/// Default side is B. `u` applies to the reversed factor; when empty the
/// canonical V of that dimension is used.
CriterionReport evaluate_criterion(const CriterionRequest& request, const DensityMatrix& rho,
                                   const std::optional<AntisymmetricUnitary>& u,
                                   const CriterionOptions& opts = {});

}  // namespace entsep
