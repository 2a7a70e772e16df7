#include <gtest/gtest.h>

#include <sstream>

#include "test_helpers.hpp"

using namespace entsep;
using namespace entsep::testing;

namespace {

// p(s) = 2⁻ⁿ Σ_S (−1)^{|S ∩ {j : s_j = 1}|} Tr ρ_S²
double purity_expansion(const DensityMatrix& rho, const std::vector<int>& s) {
  const int n = rho.dims().size();
  double sum = 0.0;
  for (int mask = 0; mask < (1 << n); ++mask) {
    std::vector<int> keep;
    int sign = 0;
    for (int j = 0; j < n; ++j)
      if (mask & (1 << j)) {
        keep.push_back(j);
        sign += s[static_cast<std::size_t>(j)];
      }
    double purity = 1.0;
    if (!keep.empty()) {
      const ComplexMatrix r = partial_trace_keep(rho.matrix(), rho.dims(), keep);
      purity = real_trace(r * r);
    }
    sum += (sign % 2 == 0 ? 1.0 : -1.0) * purity;
  }
  return sum / (1 << n);
}

}  // namespace

TEST(PairProjectors, SymmetricAndSinglet) {
  const auto [sym, anti] = pair_projectors();
  EXPECT_LT(max_abs_diff(sym + anti, identity(4)), 1e-15);
  EXPECT_LT(max_abs_diff(anti * anti, anti), 1e-15);
  EXPECT_NEAR(real_trace(anti), 1.0, 1e-15);
  EXPECT_LT(max_abs_diff(anti, bell_projector(BellState::PsiMinus).matrix()), 1e-15);
}

TEST(Pairing, PermutationIsBijection) {
  for (int n = 1; n <= 4; ++n) {
    std::vector<int> perm = pairing_permutation(n);
    ASSERT_EQ(perm.size(), std::size_t{1} << (2 * n));
    std::sort(perm.begin(), perm.end());
    for (std::size_t i = 0; i < perm.size(); ++i) EXPECT_EQ(perm[i], static_cast<int>(i));
  }
}

TEST(JointProbabilities, MatchPurityExpansion) {
  std::mt19937_64 rng(1);
  for (int n = 1; n <= 3; ++n) {
    const DensityMatrix rho = random_density(DimSpec::qubits(n), rng);
    const OutcomeTable t = joint_probabilities(rho);
    for (int idx = 0; idx < (1 << n); ++idx) {
      std::vector<int> s;
      for (int j = n - 1; j >= 0; --j) s.push_back((idx >> j) & 1);
      EXPECT_NEAR(t(s), purity_expansion(rho, s), 1e-13);
    }
  }
}

TEST(JointProbabilities, ProductStateFactorizes) {
  std::mt19937_64 rng(2);
  const DensityMatrix a = random_density(DimSpec{2}, rng);
  const DensityMatrix b = random_density(DimSpec{2}, rng);
  const OutcomeTable ta = joint_probabilities(a), tb = joint_probabilities(b);
  const OutcomeTable tab = joint_probabilities(product_state(a, b));
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y) EXPECT_NEAR(tab({x, y}), ta({x}) * tb({y}), 1e-14);
  // Single qubit: p(1) = (1 − Tr ρ²)/2.
  EXPECT_NEAR(ta({1}), 0.5 * (1.0 - real_trace(a.matrix() * a.matrix())), 1e-14);
}

TEST(Observable, MeanEqualsReflectedOverlap) {
  std::mt19937_64 rng(3);
  const DensityMatrix rho = random_density(DimSpec::qubits(3), rng);
  for (const std::vector<int>& idx : {std::vector<int>{}, {1}, {2, 3}, {1, 2, 3}}) {
    const ReflectionSet r(idx, 3);
    const double want = real_trace(rho.matrix() * multiqubit_reflection(rho, idx));
    EXPECT_NEAR(evaluate_witness(two_copy_observable(3, r), rho), want, 1e-13);
    EXPECT_NEAR(mean_from_probs(joint_probabilities(rho), r), want, 1e-13);
  }
}

TEST(SignedSum, TwoQubitPattern) {
  const OutcomeTable t(2, {0.1, 0.2, 0.3, 0.4});
  EXPECT_NEAR(signed_probability_sum(t, ReflectionSet({2}, 2)), 0.2 - 0.4, 1e-15);
  EXPECT_NEAR(mean_from_probs(t, ReflectionSet({2}, 2)), 2 * (0.2 - 0.4), 1e-15);
  EXPECT_NEAR(signed_probability_sum(t, ReflectionSet({}, 2)), 0.1 - 0.2 - 0.3 + 0.4, 1e-15);
  EXPECT_NEAR(signed_probability_sum(t, ReflectionSet({1, 2}, 2)), 0.4, 1e-15);
}

TEST(Singlet, ExactValues) {
  const DensityMatrix singlet = bell_projector(BellState::PsiMinus);
  const OutcomeTable t = joint_probabilities(singlet);
  EXPECT_NEAR(t({0, 0}), 0.75, 1e-15);
  EXPECT_NEAR(t({0, 1}), 0.0, 1e-15);
  EXPECT_NEAR(t({1, 1}), 0.25, 1e-15);
  EXPECT_NEAR(mean_from_probs(t, ReflectionSet({2}, 2)), -0.5, 1e-15);
  EXPECT_NEAR(mean_from_probs(t, ReflectionSet({1}, 2)), -0.5, 1e-15);
  // Reflecting both qubits gives Tr ρ(σ_y⊗σ_y)ρ*(σ_y⊗σ_y) = 1 for the singlet.
  EXPECT_NEAR(mean_from_probs(t, ReflectionSet({1, 2}, 2)), 1.0, 1e-15);
}

TEST(OutcomeTable, Validation) {
  EXPECT_THROW(OutcomeTable(2, {0.5, 0.5}), std::invalid_argument);
  EXPECT_THROW(OutcomeTable(1, {1.5, -0.5}), std::invalid_argument);
  EXPECT_THROW(OutcomeTable(1, {0.6, 0.6}), std::invalid_argument);
  EXPECT_EQ(OutcomeTable::flat_index({1, 0, 1}), 5);
  EXPECT_THROW(OutcomeTable::flat_index({2}), std::invalid_argument);
  EXPECT_THROW(ReflectionSet({2, 1}, 3), std::invalid_argument);
  EXPECT_THROW(ReflectionSet({4}, 3), std::invalid_argument);
  EXPECT_THROW(joint_probabilities(random_density(DimSpec{2, 3}, std::uint64_t{1})), DimensionError);
}

TEST(Shots, SeededAndNormalized) {
  const OutcomeTable t(2, {0.1, 0.2, 0.3, 0.4});
  const OutcomeTable a = shot_sample(t, 1000, std::uint64_t{7});
  const OutcomeTable b = shot_sample(t, 1000, std::uint64_t{7});
  EXPECT_EQ(a.probs(), b.probs());
  double sum = 0.0;
  for (double p : a.probs()) {
    sum += p;
    EXPECT_NEAR(p * 1000, std::round(p * 1000), 1e-9);
  }
  EXPECT_NEAR(sum, 1.0, 1e-12);
  EXPECT_THROW(shot_sample(t, 0, std::uint64_t{1}), std::invalid_argument);
}

TEST(Csv, HeaderAndRows) {
  const OutcomeTable t(2, {0.1, 0.2, 0.3, 0.4});
  const std::string csv = outcome_csv(t);
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "s1,s2,prob");
  std::getline(in, line);
  EXPECT_EQ(line.substr(0, 4), "0,0,");
  EXPECT_NEAR(std::stod(line.substr(4)), 0.1, 0.0);
  int rows = 1;
  while (std::getline(in, line)) ++rows;
  EXPECT_EQ(rows, 4);
}
