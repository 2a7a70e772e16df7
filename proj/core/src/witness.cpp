#include "entsep/witness.hpp"

#include <cmath>
#include <sstream>

namespace entsep {

namespace {

constexpr double kWitnessImagTol = 1e-9;

struct Entry {
  int row;
  int col;
  Complex value;
};
using Entries = std::vector<Entry>;
using Triplets = std::vector<Eigen::Triplet<Complex>>;

int int_pow(int base, int exp) {
  long long out = 1;
  for (int k = 0; k < exp; ++k) {
    out *= base;
    if (out > (1LL << 30)) throw DimensionError("multi-copy space too large");
  }
  return static_cast<int>(out);
}

Entries nonzeros(const ComplexMatrix& m) {
  Entries out;
  for (int r = 0; r < m.rows(); ++r)
    for (int c = 0; c < m.cols(); ++c)
      if (m(r, c) != Complex(0.0, 0.0)) out.push_back({r, c, m(r, c)});
  return out;
}

// Dual images Θ†(E_ab) for a ∈ [0, d_out), b ∈ [0, d_out), flattened a*d_out+b.
std::vector<Entries> dual_unit_images(const OperatorMap& map) {
  const int d = map.output_side();
  std::vector<Entries> out;
  out.reserve(static_cast<std::size_t>(d * d));
  for (int a = 0; a < d; ++a) {
    for (int b = 0; b < d; ++b) {
      ComplexMatrix e = ComplexMatrix::Zero(d, d);
      e(a, b) = 1.0;
      out.push_back(nonzeros(map.apply_dual(e)));
    }
  }
  return out;
}

// Adds coef · ⊗_j factors[j] to the triplet list; each factor lives on side D.
void add_kron(Triplets& trip, const std::vector<const Entries*>& factors, int side, Complex coef) {
  Entries acc{{0, 0, coef}};
  Entries next;
  for (const Entries* f : factors) {
    if (f->empty()) return;
    next.clear();
    next.reserve(acc.size() * f->size());
    for (const Entry& x : acc)
      for (const Entry& y : *f) next.push_back({x.row * side + y.row, x.col * side + y.col, x.value * y.value});
    acc.swap(next);
  }
  for (const Entry& e : acc) trip.emplace_back(e.row, e.col, e.value);
}

// Iterates over all tuples in [0, d)^n.
template <class F>
void for_each_tuple(int d, int n, F&& f) {
  std::vector<int> idx(static_cast<std::size_t>(n), 0);
  while (true) {
    f(idx);
    int k = n - 1;
    while (k >= 0 && ++idx[static_cast<std::size_t>(k)] == d) idx[static_cast<std::size_t>(k--)] = 0;
    if (k < 0) return;
  }
}

void check_cap(int side, int copies, const WitnessBuildOptions& opts) {
  if (!opts.allow_large && copies > default_max_copies(side)) {
    std::ostringstream os;
    os << "witness with " << copies << " copies of a " << side
       << "-dimensional system exceeds the default cap of " << default_max_copies(side)
       << "; set allow_large to override";
    throw std::invalid_argument(os.str());
  }
}

SparseMatrix from_triplets(int n, const Triplets& trip) {
  SparseMatrix m(n, n);
  m.setFromTriplets(trip.begin(), trip.end());
  m.prune(Complex(0.0, 0.0), 0.0);
  return m;
}

void require_hermitian_sparse(const SparseMatrix& w, const char* what) {
  const SparseMatrix diff = w - SparseMatrix(w.adjoint());
  double err = 0.0;
  for (int k = 0; k < diff.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(diff, k); it; ++it) err = std::max(err, std::abs(it.value()));
  if (err > 1e-9) {
    std::ostringstream os;
    os << what << ": witness is not Hermitian (deviation " << err << "); maps must preserve Hermiticity";
    throw NotHermitianError(os.str());
  }
}

OperatorMap keep_marginal(const DimSpec& dims, Side side) {
  return maps::partial_trace(dims, side == Side::A ? 0 : 1);
}

OperatorMap reversal(const DimSpec& dims, Side side, const AntisymmetricUnitary& u) {
  const int tau = side == Side::A ? 1 : 0;
  if (dims[tau] != u.dim()) throw DimensionError("tableau: U does not match the reversed factor");
  return maps::partial_time_reversal(dims, tau, u);
}

}  // namespace

SparseMatrix swap_n_sparse(int d, int n) {
  if (d < 1) throw DimensionError("swap_n: d must be positive");
  if (n < 2) throw std::invalid_argument("swap_n: n must be at least 2");
  const int side = int_pow(d, n);
  const int lead = side / d;
  Triplets trip;
  trip.reserve(static_cast<std::size_t>(side));
  // |x₁ x₂ … x_n⟩ ↦ |x₂ … x_n x₁⟩
  for (int x = 0; x < side; ++x) {
    const int first = x / lead;
    const int rest = x % lead;
    trip.emplace_back(rest * d + first, x, Complex(1.0, 0.0));
  }
  return from_triplets(side, trip);
}

ComplexMatrix swap_n(int d, int n) { return ComplexMatrix(swap_n_sparse(d, n)); }

SparseMatrix symmetrized_swap_sparse(int d, int n) {
  const SparseMatrix v = swap_n_sparse(d, n);
  return 0.5 * (v + SparseMatrix(v.adjoint()));
}

ComplexMatrix symmetrized_swap(int d, int n) { return ComplexMatrix(symmetrized_swap_sparse(d, n)); }

int MapTableau::copies() const { return theta.empty() ? 0 : static_cast<int>(theta.front().size()); }

int MapTableau::input_side() const {
  return theta.empty() || theta.front().empty() ? 0 : theta.front().front().input_side();
}

void MapTableau::validate() const {
  if (theta.empty()) throw DimensionError("MapTableau: no rows");
  if (mu.size() != theta.size()) throw DimensionError("MapTableau: mu and theta have different row counts");
  const int alpha = copies();
  if (alpha < 1) throw DimensionError("MapTableau: rows must contain at least one map");
  const int in = input_side();
  for (std::size_t i = 0; i < theta.size(); ++i) {
    const auto& row = theta[i];
    if (static_cast<int>(row.size()) != alpha) throw DimensionError("MapTableau: rows have different lengths");
    for (const OperatorMap& m : row) {
      if (m.input_side() != in) throw DimensionError("MapTableau: maps act on different input sides");
      if (m.output_side() != row.front().output_side()) {
        throw DimensionError("MapTableau: row " + std::to_string(i) + " mixes output sides");
      }
    }
  }
}

ComplexMatrix MultiCopyWitness::to_dense() const { return ComplexMatrix(op); }

int default_max_copies(int per_copy_side) {
  if (per_copy_side <= 4) return 5;
  int alpha = 1;
  long long size = per_copy_side;
  while (size * per_copy_side <= 4096) {
    size *= per_copy_side;
    ++alpha;
  }
  return alpha;
}

MultiCopyWitness build_witness(const MapTableau& tableau, const DimSpec& per_copy_dims,
                               const WitnessBuildOptions& opts) {
  tableau.validate();
  const int side = tableau.input_side();
  if (side != per_copy_dims.total()) throw DimensionError("build_witness: tableau does not act on per_copy_dims");
  const int alpha = tableau.copies();
  check_cap(side, alpha, opts);
  const int total = int_pow(side, alpha);

  Triplets trip;
  for (std::size_t i = 0; i < tableau.theta.size(); ++i) {
    const auto& row = tableau.theta[i];
    const int d = row.front().output_side();
    std::vector<std::vector<Entries>> images;
    for (const OperatorMap& m : row) images.push_back(dual_unit_images(m));
    const Complex coef(0.5 * tableau.mu[i], 0.0);
    std::vector<const Entries*> fwd(static_cast<std::size_t>(alpha)), bwd(static_cast<std::size_t>(alpha));
    // 𝒱 = Σ ⊗_j E_{i_j i_{j−1}}, indices cyclic; 𝒱† swaps each pair.
    for_each_tuple(d, alpha, [&](const std::vector<int>& idx) {
      for (int j = 0; j < alpha; ++j) {
        const int cur = idx[static_cast<std::size_t>(j)];
        const int prev = idx[static_cast<std::size_t>((j + alpha - 1) % alpha)];
        fwd[static_cast<std::size_t>(j)] = &images[static_cast<std::size_t>(j)][static_cast<std::size_t>(cur * d + prev)];
        bwd[static_cast<std::size_t>(j)] = &images[static_cast<std::size_t>(j)][static_cast<std::size_t>(prev * d + cur)];
      }
      add_kron(trip, fwd, side, coef);
      add_kron(trip, bwd, side, coef);
    });
  }
  MultiCopyWitness w{from_triplets(total, trip), alpha, per_copy_dims, tableau.source};
  require_hermitian_sparse(w.op, "build_witness");
  return w;
}

MultiCopyWitness witness_from_vector(const MapTableau& tableau, const DimSpec& per_copy_dims,
                                     const ComplexVector& psi, const WitnessBuildOptions& opts) {
  tableau.validate();
  if (std::abs(psi.norm() - 1.0) > 1e-10) throw std::invalid_argument("witness_from_vector: psi must be a unit vector");
  const int side = tableau.input_side();
  if (side != per_copy_dims.total()) throw DimensionError("witness_from_vector: tableau does not act on per_copy_dims");
  const int alpha = tableau.copies();
  check_cap(side, alpha, opts);
  const int total = int_pow(side, alpha);
  const ComplexMatrix y = psi * psi.adjoint();

  Triplets trip;
  for (std::size_t i = 0; i < tableau.theta.size(); ++i) {
    const auto& row = tableau.theta[i];
    const int d = row.front().output_side();
    if (d != psi.size()) throw DimensionError("witness_from_vector: psi does not match the row output side");
    std::vector<std::vector<Entries>> images;
    for (const OperatorMap& m : row) images.push_back(dual_unit_images(m));
    std::vector<const Entries*> slots(static_cast<std::size_t>(alpha));
    // Λ†(Y) = Σ Y_mk E_{i₁k}⊗E_{i₂i₁}⊗…⊗E_{m i_{α−1}}; tuple is (k, i₁, …, i_{α−1}, m).
    for_each_tuple(d, alpha + 1, [&](const std::vector<int>& idx) {
      const int k = idx.front();
      const int m = idx.back();
      const Complex ymk = y(m, k);
      if (ymk == Complex(0.0, 0.0)) return;
      for (int j = 0; j < alpha; ++j) {
        const int row_index = idx[static_cast<std::size_t>(j + 1)];
        const int col_index = idx[static_cast<std::size_t>(j)];
        slots[static_cast<std::size_t>(j)] =
            &images[static_cast<std::size_t>(j)][static_cast<std::size_t>(row_index * d + col_index)];
      }
      add_kron(trip, slots, side, tableau.mu[i] * ymk);
    });
  }
  // Products of Hermitian operators need not be Hermitian; on ρ^{⊗α} the
  // Hermitian part gives the same (real) expectation.
  const SparseMatrix raw = from_triplets(total, trip);
  MultiCopyWitness w{SparseMatrix(0.5 * (raw + SparseMatrix(raw.adjoint()))), alpha, per_copy_dims,
                     tableau.source + "|psi"};
  require_hermitian_sparse(w.op, "witness_from_vector");
  return w;
}

double evaluate_witness(const MultiCopyWitness& w, const DensityMatrix& rho) {
  if (rho.dims() != w.per_copy_dims) throw DimensionError("evaluate_witness: state dims do not match the witness");
  const int side = w.per_copy_side();
  const ComplexMatrix& r = rho.matrix();
  std::vector<int> rd(static_cast<std::size_t>(w.copies)), cd(static_cast<std::size_t>(w.copies));
  Complex sum(0.0, 0.0);
  for (int k = 0; k < w.op.outerSize(); ++k) {
    int rr = k;
    for (int j = w.copies - 1; j >= 0; --j) {
      rd[static_cast<std::size_t>(j)] = rr % side;
      rr /= side;
    }
    for (SparseMatrix::InnerIterator it(w.op, k); it; ++it) {
      int cc = static_cast<int>(it.col());
      for (int j = w.copies - 1; j >= 0; --j) {
        cd[static_cast<std::size_t>(j)] = cc % side;
        cc /= side;
      }
      Complex prod = it.value();
      for (int j = 0; j < w.copies; ++j) prod *= r(cd[static_cast<std::size_t>(j)], rd[static_cast<std::size_t>(j)]);
      sum += prod;
    }
  }
  if (std::abs(sum.imag()) > kWitnessImagTol) {
    std::ostringstream os;
    os << "evaluate_witness: imaginary residue " << sum.imag() << " exceeds " << kWitnessImagTol;
    throw std::runtime_error(os.str());
  }
  return sum.real();
}

ComplexMatrix tableau_operator(const MapTableau& tableau, const DensityMatrix& rho) {
  tableau.validate();
  if (tableau.input_side() != rho.dim()) throw DimensionError("tableau_operator: state does not match the tableau");
  const int d = tableau.theta.front().front().output_side();
  ComplexMatrix acc = ComplexMatrix::Zero(d, d);
  for (std::size_t i = 0; i < tableau.theta.size(); ++i) {
    const auto& row = tableau.theta[i];
    if (row.front().output_side() != d) throw DimensionError("tableau_operator: rows have different output sides");
    ComplexMatrix prod = row.front().apply(rho.matrix());
    for (std::size_t j = 1; j < row.size(); ++j) prod = (prod * row[j].apply(rho.matrix())).eval();
    acc += tableau.mu[i] * prod;
  }
  return acc;
}

TableauValue evaluate_tableau(const MapTableau& tableau, const DensityMatrix& rho) {
  tableau.validate();
  if (tableau.input_side() != rho.dim()) throw DimensionError("evaluate_tableau: state does not match the tableau");
  TableauValue out;
  for (std::size_t i = 0; i < tableau.theta.size(); ++i) {
    const auto& row = tableau.theta[i];
    ComplexMatrix prod = row.front().apply(rho.matrix());
    for (std::size_t j = 1; j < row.size(); ++j) prod = (prod * row[j].apply(rho.matrix())).eval();
    const Complex t = prod.trace();
    out.value += tableau.mu[i] * t.real();
    out.max_imag = std::max(out.max_imag, std::abs(t.imag()));
  }
  return out;
}

ComplexMatrix multiply_contract(const ComplexMatrix& x, int d, int n) {
  if (n < 1) throw std::invalid_argument("multiplication_map: n must be at least 1");
  const int side = int_pow(d, n);
  if (x.rows() != side || x.cols() != side) throw DimensionError("multiplication_map: input side is not d^n");
  const int inner = side / d;  // d^{n−1}
  ComplexMatrix out = ComplexMatrix::Zero(d, d);
  // Λ(X)_km = Σ_I X_{(k,I),(I,m)}
  for (int k = 0; k < d; ++k)
    for (int m = 0; m < d; ++m)
      for (int mid = 0; mid < inner; ++mid) out(k, m) += x(k * inner + mid, mid * d + m);
  return out;
}

OperatorMap multiplication_map(int n, int d) {
  const int side = int_pow(d, n);
  auto f = [d, n](const ComplexMatrix& x) { return multiply_contract(x, d, n); };
  auto g = [d, n, side](const ComplexMatrix& y) {
    const int inner = side / d;
    ComplexMatrix out = ComplexMatrix::Zero(side, side);
    // Row index (i₁,…,i_{n−1},m), column (k,i₁,…,i_{n−1}).
    for (int k = 0; k < d; ++k)
      for (int m = 0; m < d; ++m)
        for (int mid = 0; mid < inner; ++mid) out(mid * d + m, k * inner + mid) += y(m, k);
    return out;
  };
  return OperatorMap("Lambda" + std::to_string(n), side, d, f, g);
}

namespace tableaux {

MapTableau entropic(const DimSpec& dims, int alpha, Side side) {
  if (alpha < 1) throw std::invalid_argument("entropic tableau: alpha must be positive");
  dims.require_bipartite("entropic tableau");
  const auto n = static_cast<std::size_t>(alpha);
  MapTableau t;
  t.mu = {1.0, -1.0};
  t.theta = {std::vector<OperatorMap>(n, keep_marginal(dims, side)),
             std::vector<OperatorMap>(n, maps::identity(dims.total()))};
  t.source = "entropic_a" + std::to_string(alpha);
  return t;
}

MapTableau fact3(const DimSpec& dims, int alpha, Side side, const AntisymmetricUnitary& u) {
  if (alpha < 1) throw std::invalid_argument("fact3 tableau: alpha must be positive");
  dims.require_bipartite("fact3 tableau");
  const auto n = static_cast<std::size_t>(alpha);
  const OperatorMap id = maps::identity(dims.total());
  const OperatorMap tau = reversal(dims, side, u);
  const OperatorMap plus = maps::sum({id, tau});
  const OperatorMap minus = maps::sum({id, maps::scale(-1.0, tau)});
  std::vector<OperatorMap> row_plus(n, plus), row_minus(n, minus);
  row_plus.front() = id;
  row_minus.front() = id;
  MapTableau t;
  t.mu = {1.0, -0.5, -0.5};
  t.theta = {std::vector<OperatorMap>(n, keep_marginal(dims, side)), row_plus, row_minus};
  t.source = "fact3_a" + std::to_string(alpha);
  return t;
}

MapTableau fact4(const DimSpec& dims, int alpha, Side side, const AntisymmetricUnitary& u) {
  if (alpha < 1 || alpha % 2 == 0) throw std::invalid_argument("fact4 tableau: alpha must be odd");
  dims.require_bipartite("fact4 tableau");
  const auto n = static_cast<std::size_t>(alpha);
  std::vector<OperatorMap> row(n, maps::identity(dims.total()));
  const OperatorMap tau = reversal(dims, side, u);
  for (std::size_t j = (n + 1) / 2; j < n; ++j) row[j] = tau;
  MapTableau t;
  t.mu = {1.0, -std::ldexp(1.0, alpha - 1)};
  t.theta = {std::vector<OperatorMap>(n, keep_marginal(dims, side)), row};
  t.source = "fact4_a" + std::to_string(alpha);
  return t;
}

MapTableau fact1_special3(const DimSpec& dims) {
  if (!dims.is_bipartite() || dims[0] != 2) throw DimensionError("fact1_special tableau: dims must be (2, d)");
  const OperatorMap id = maps::identity(dims.total());
  const OperatorMap tau = reversal(dims, Side::B, canonical_V(2));
  MapTableau t;
  t.mu = {1.0, -1.0, -1.0};
  t.theta = {std::vector<OperatorMap>(3, keep_marginal(dims, Side::B)), std::vector<OperatorMap>(3, id),
             {id, tau, tau}};
  t.source = "fact1_special_a3";
  return t;
}

MapTableau quadratic(const DimSpec& dims, Side side, const AntisymmetricUnitary& u) {
  dims.require_bipartite("quadratic tableau");
  MapTableau t;
  t.mu = {1.0};
  t.theta = {{maps::identity(dims.total()), reversal(dims, side, u)}};
  t.source = "quadratic";
  return t;
}

MapTableau oddcut(const DimSpec& dims, int alpha, Side side, const AntisymmetricUnitary& u) {
  if (alpha < 1) throw std::invalid_argument("oddcut tableau: alpha must be positive");
  dims.require_bipartite("oddcut tableau");
  const auto n = static_cast<std::size_t>(alpha);
  const OperatorMap id = maps::identity(dims.total());
  const OperatorMap tau = reversal(dims, side, u);
  const int keep = side == Side::A ? 0 : 1;
  const OperatorMap trace_out = maps::partial_trace(dims, keep);
  const OperatorMap lift = keep == 0 ? maps::tensor_identity(dims[0], dims[1])
                                     : maps::partial_trace(dims, 1).dual();
  MapTableau t;
  t.mu = {1.0, -0.5, -0.5};
  t.theta = {std::vector<OperatorMap>(n, maps::compose(lift, trace_out)),
             std::vector<OperatorMap>(n, maps::sum({id, tau})),
             std::vector<OperatorMap>(n, maps::sum({id, maps::scale(-1.0, tau)}))};
  t.source = "oddcut_a" + std::to_string(alpha);
  return t;
}

}  // namespace tableaux

}  // namespace entsep
