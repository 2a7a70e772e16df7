#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "entsep/witness.hpp"

namespace entsep {

/// Joint outcome distribution over n qubit pairs. Outcome s_i = 0 is the
/// symmetric (coalescence) result, 1 the antisymmetric one; the flat index
/// has s₁ as its most significant bit.
class OutcomeTable {
 public:
  /// Throws std::invalid_argument unless probs has 2^n entries, each
  /// ≥ −1e-12, summing to 1 within 1e-10.
  OutcomeTable(int n, std::vector<double> probs);

  int n() const { return n_; }
  const std::vector<double>& probs() const { return probs_; }
  double operator()(const std::vector<int>& outcome) const;
  static int flat_index(const std::vector<int>& outcome);

 private:
  int n_;
  std::vector<double> probs_;
};

/// Strictly increasing 1-based qubit indices.
class ReflectionSet {
 public:
  ReflectionSet() = default;
  /// Throws unless indices are strictly increasing within 1..n.
  ReflectionSet(std::vector<int> indices, int n);

  const std::vector<int>& indices() const { return indices_; }
  bool contains(int qubit) const;
  int size() const { return static_cast<int>(indices_.size()); }

 private:
  std::vector<int> indices_;
};

/// (P⁰, P¹) = ((1 + 𝒱)/2, (1 − 𝒱)/2) on two qubits.
std::pair<ComplexMatrix, ComplexMatrix> pair_projectors();

/// Index permutation from the copy layout (A₁…A_n, A′₁…A′_n) to the paired
/// layout (A₁A′₁, A₂A′₂, …).
std::vector<int> pairing_permutation(int n);

OutcomeTable joint_probabilities(const DensityMatrix& rho);

/// ⊗_{i∉I′} 𝒱 ⊗_{k∈I′} 2P¹ in the copy layout; its mean on ρ⊗ρ is Tr(ρ ρ^{τ_{I′}}).
MultiCopyWitness two_copy_observable(int n, const ReflectionSet& reflected);

/// Σ over outcomes with s_i = 1 on I′ of (−1)^{Σ_{i∉I′} s_i} p(s).
double signed_probability_sum(const OutcomeTable& table, const ReflectionSet& reflected);

/// 2^{|I′|} · signed_probability_sum, equal to Tr(ρ ρ^{τ_{I′}}).
double mean_from_probs(const OutcomeTable& table, const ReflectionSet& reflected);

/// Multinomial resample with `shots` draws, returned as frequencies.
OutcomeTable shot_sample(const OutcomeTable& table, std::int64_t shots, std::mt19937_64& rng);
OutcomeTable shot_sample(const OutcomeTable& table, std::int64_t shots, std::uint64_t seed);

/// Header s1,…,sn,prob and one row per outcome at full precision.
std::string outcome_csv(const OutcomeTable& table);

}  // namespace entsep
