#include "entsep/experiment.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

namespace entsep {

namespace {

constexpr double kNegativeClamp = 1e-12;

std::vector<int> bits_of(int index, int n) {
  std::vector<int> s(static_cast<std::size_t>(n));
  for (int j = n - 1; j >= 0; --j) {
    s[static_cast<std::size_t>(j)] = index & 1;
    index >>= 1;
  }
  return s;
}

// Operator on the copy layout whose paired form is ⊗_j ops[j].
SparseMatrix paired_operator(const std::vector<ComplexMatrix>& ops) {
  const int n = static_cast<int>(ops.size());
  const ComplexMatrix paired = kron_all(ops);
  const std::vector<int> perm = pairing_permutation(n);
  const int side = static_cast<int>(perm.size());
  std::vector<Eigen::Triplet<Complex>> trip;
  for (int r = 0; r < side; ++r)
    for (int c = 0; c < side; ++c) {
      const Complex v = paired(perm[static_cast<std::size_t>(r)], perm[static_cast<std::size_t>(c)]);
      if (v != Complex(0.0, 0.0)) trip.emplace_back(r, c, v);
    }
  SparseMatrix m(side, side);
  m.setFromTriplets(trip.begin(), trip.end());
  return m;
}

}  // namespace

OutcomeTable::OutcomeTable(int n, std::vector<double> probs) : n_(n), probs_(std::move(probs)) {
  if (n_ < 1 || n_ > 20) throw std::invalid_argument("OutcomeTable: n must be in 1..20");
  if (probs_.size() != (std::size_t{1} << n_)) throw std::invalid_argument("OutcomeTable: need 2^n probabilities");
  double sum = 0.0;
  for (double p : probs_) {
    if (!(p >= -kNegativeClamp)) throw std::invalid_argument("OutcomeTable: negative probability");
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-10) throw std::invalid_argument("OutcomeTable: probabilities do not sum to 1");
}

int OutcomeTable::flat_index(const std::vector<int>& outcome) {
  int idx = 0;
  for (int s : outcome) {
    if (s != 0 && s != 1) throw std::invalid_argument("OutcomeTable: outcomes must be 0 or 1");
    idx = idx * 2 + s;
  }
  return idx;
}

double OutcomeTable::operator()(const std::vector<int>& outcome) const {
  if (static_cast<int>(outcome.size()) != n_) throw std::invalid_argument("OutcomeTable: outcome length mismatch");
  return probs_[static_cast<std::size_t>(flat_index(outcome))];
}

ReflectionSet::ReflectionSet(std::vector<int> indices, int n) : indices_(std::move(indices)) {
  for (std::size_t k = 0; k < indices_.size(); ++k) {
    if (indices_[k] < 1 || indices_[k] > n) throw std::invalid_argument("ReflectionSet: index out of range");
    if (k > 0 && indices_[k] <= indices_[k - 1]) {
      throw std::invalid_argument("ReflectionSet: indices must be strictly increasing");
    }
  }
}

bool ReflectionSet::contains(int qubit) const {
  for (int i : indices_)
    if (i == qubit) return true;
  return false;
}

std::pair<ComplexMatrix, ComplexMatrix> pair_projectors() {
  const ComplexMatrix v = swap_n(2, 2);
  const ComplexMatrix id = identity(4);
  return {0.5 * (id + v), 0.5 * (id - v)};
}

std::vector<int> pairing_permutation(int n) {
  if (n < 1) throw std::invalid_argument("pairing_permutation: n must be positive");
  const int side = 1 << (2 * n);
  std::vector<int> perm(static_cast<std::size_t>(side));
  for (int x = 0; x < side; ++x) {
    const int a = x >> n;              // copy 1 bits a₁…a_n
    const int b = x & ((1 << n) - 1);  // copy 2 bits b₁…b_n
    int y = 0;
    for (int j = n - 1; j >= 0; --j) {
      y = (y << 2) | (((a >> j) & 1) << 1) | ((b >> j) & 1);
    }
    perm[static_cast<std::size_t>(x)] = y;
  }
  return perm;
}

OutcomeTable joint_probabilities(const DensityMatrix& rho) {
  if (!rho.dims().all_qubits()) throw DimensionError("joint_probabilities: all factors must be qubits");
  const int n = rho.dims().size();
  if (n > 6) throw DimensionError("joint_probabilities: at most 6 qubits");
  const ComplexMatrix two = kron(rho.matrix(), rho.matrix());
  const auto [p0, p1] = pair_projectors();
  std::vector<double> probs(std::size_t{1} << n);
  for (int idx = 0; idx < (1 << n); ++idx) {
    std::vector<ComplexMatrix> ops;
    for (int s : bits_of(idx, n)) ops.push_back(s == 0 ? p0 : p1);
    const SparseMatrix proj = paired_operator(ops);
    Complex t(0.0, 0.0);
    for (int k = 0; k < proj.outerSize(); ++k)
      for (SparseMatrix::InnerIterator it(proj, k); it; ++it) t += it.value() * two(it.col(), k);
    probs[static_cast<std::size_t>(idx)] = t.real();
  }
  return OutcomeTable(n, std::move(probs));
}

MultiCopyWitness two_copy_observable(int n, const ReflectionSet& reflected) {
  if (n < 1 || n > 6) throw DimensionError("two_copy_observable: n must be in 1..6");
  for (int i : reflected.indices())
    if (i > n) throw std::invalid_argument("two_copy_observable: reflected qubit out of range");
  const ComplexMatrix v = swap_n(2, 2);
  const ComplexMatrix anti2 = identity(4) - v;  // 2P¹
  std::vector<ComplexMatrix> ops;
  for (int j = 1; j <= n; ++j) ops.push_back(reflected.contains(j) ? anti2 : v);
  std::ostringstream src;
  src << "two_copy_reflect{";
  for (std::size_t k = 0; k < reflected.indices().size(); ++k) src << (k ? "," : "") << reflected.indices()[k];
  src << "}";
  return MultiCopyWitness{paired_operator(ops), 2, DimSpec::qubits(n), src.str()};
}

double signed_probability_sum(const OutcomeTable& table, const ReflectionSet& reflected) {
  const int n = table.n();
  for (int i : reflected.indices())
    if (i > n) throw std::invalid_argument("signed_probability_sum: reflected qubit out of range");
  double sum = 0.0;
  for (int idx = 0; idx < (1 << n); ++idx) {
    const std::vector<int> s = bits_of(idx, n);
    bool keep = true;
    int parity = 0;
    for (int j = 1; j <= n; ++j) {
      const int sj = s[static_cast<std::size_t>(j - 1)];
      if (reflected.contains(j)) {
        keep = keep && sj == 1;
      } else {
        parity += sj;
      }
    }
    if (keep) sum += (parity % 2 == 0 ? 1.0 : -1.0) * table.probs()[static_cast<std::size_t>(idx)];
  }
  return sum;
}

double mean_from_probs(const OutcomeTable& table, const ReflectionSet& reflected) {
  return std::ldexp(signed_probability_sum(table, reflected), reflected.size());
}

OutcomeTable shot_sample(const OutcomeTable& table, std::int64_t shots, std::mt19937_64& rng) {
  if (shots < 1) throw std::invalid_argument("shot_sample: shots must be at least 1");
  std::vector<double> p = table.probs();
  for (double& x : p)
    if (x < 0.0) x = 0.0;
  double remaining_mass = 0.0;
  for (double x : p) remaining_mass += x;
  std::int64_t remaining = shots;
  std::vector<double> freq(p.size(), 0.0);
  for (std::size_t k = 0; k < p.size() && remaining > 0; ++k) {
    std::int64_t count = remaining;
    if (k + 1 < p.size()) {
      const double q = remaining_mass > 0.0 ? std::min(1.0, p[k] / remaining_mass) : 0.0;
      std::binomial_distribution<std::int64_t> draw(remaining, q);
      count = draw(rng);
    }
    freq[k] = static_cast<double>(count) / static_cast<double>(shots);
    remaining -= count;
    remaining_mass -= p[k];
  }
  return OutcomeTable(table.n(), std::move(freq));
}

OutcomeTable shot_sample(const OutcomeTable& table, std::int64_t shots, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return shot_sample(table, shots, rng);
}

std::string outcome_csv(const OutcomeTable& table) {
  std::ostringstream os;
  for (int j = 1; j <= table.n(); ++j) os << 's' << j << ',';
  os << "prob\n";
  char buf[32];
  for (int idx = 0; idx < (1 << table.n()); ++idx) {
    for (int s : bits_of(idx, table.n())) os << s << ',';
    const auto res = std::to_chars(buf, buf + sizeof buf, table.probs()[static_cast<std::size_t>(idx)]);
    os.write(buf, res.ptr - buf) << '\n';
  }
  return os.str();
}

}  // namespace entsep
