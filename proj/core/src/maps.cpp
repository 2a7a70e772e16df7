#include "entsep/maps.hpp"

#include <sstream>

namespace entsep {

namespace {

void require_unitary(const ComplexMatrix& u, const char* what) {
  require_square(u, what);
  if ((u.adjoint() * u - identity(static_cast<int>(u.rows()))).norm() > kUnitaryTol) {
    throw std::invalid_argument(std::string(what) + ": matrix is not unitary");
  }
}

void require_side(const ComplexMatrix& x, int side, const char* what) {
  if (x.rows() != side || x.cols() != side) {
    std::ostringstream os;
    os << what << ": expected " << side << "x" << side << " matrix, got " << x.rows() << "x" << x.cols();
    throw DimensionError(os.str());
  }
}

// Local action on factor k built from the images of matrix units:
// out[(p,i,q),(p',j,q')] = Σ_ab x[(p,a,q),(p',b,q')] M(E_ab)_ij.
ComplexMatrix apply_local(const ComplexMatrix& x, const DimSpec& dims, int k,
                          const std::vector<ComplexMatrix>& unit_images, int d_out) {
  const int d_in = dims[k];
  int before = 1, after = 1;
  for (int m = 0; m < k; ++m) before *= dims[m];
  for (int m = k + 1; m < dims.size(); ++m) after *= dims[m];
  const int n_out = before * d_out * after;
  ComplexMatrix out = ComplexMatrix::Zero(n_out, n_out);
  auto in_index = [&](int p, int a, int q) { return (p * d_in + a) * after + q; };
  auto out_index = [&](int p, int i, int q) { return (p * d_out + i) * after + q; };
  for (int a = 0; a < d_in; ++a) {
    for (int b = 0; b < d_in; ++b) {
      const ComplexMatrix& img = unit_images[static_cast<std::size_t>(a * d_in + b)];
      for (int i = 0; i < d_out; ++i) {
        for (int j = 0; j < d_out; ++j) {
          const Complex m = img(i, j);
          if (m == Complex(0.0, 0.0)) continue;
          for (int p = 0; p < before; ++p)
            for (int q = 0; q < after; ++q)
              for (int p2 = 0; p2 < before; ++p2)
                for (int q2 = 0; q2 < after; ++q2)
                  out(out_index(p, i, q), out_index(p2, j, q2)) += m * x(in_index(p, a, q), in_index(p2, b, q2));
        }
      }
    }
  }
  return out;
}

std::vector<ComplexMatrix> unit_images(const OperatorMap::Action& f, int d_in) {
  std::vector<ComplexMatrix> images;
  images.reserve(static_cast<std::size_t>(d_in * d_in));
  for (int a = 0; a < d_in; ++a) {
    for (int b = 0; b < d_in; ++b) {
      ComplexMatrix e = ComplexMatrix::Zero(d_in, d_in);
      e(a, b) = 1.0;
      images.push_back(f(e));
    }
  }
  return images;
}

}  // namespace

AntisymmetricUnitary::AntisymmetricUnitary(ComplexMatrix u) : u_(std::move(u)) {
  require_square(u_, "AntisymmetricUnitary");
  if (u_.rows() == 0 || u_.rows() % 2 != 0) {
    throw DimensionError("AntisymmetricUnitary: dimension must be even and positive");
  }
  if ((u_.transpose() + u_).norm() > kUnitaryTol) {
    throw std::invalid_argument("AntisymmetricUnitary: matrix is not antisymmetric");
  }
  require_unitary(u_, "AntisymmetricUnitary");
}

AntisymmetricUnitary canonical_V(int d) {
  if (d < 2 || d % 2 != 0) throw DimensionError("canonical_V: d must be even and >= 2");
  ComplexMatrix v = ComplexMatrix::Zero(d, d);
  for (int k = 0; k < d; ++k) v(k, d - 1 - k) = (k < d / 2) ? 1.0 : -1.0;
  return AntisymmetricUnitary(std::move(v));
}

AntisymmetricUnitary spin_flip_V(int d) {
  if (d < 2 || d % 2 != 0) throw DimensionError("spin_flip_V: d must be even and >= 2");
  ComplexMatrix v = ComplexMatrix::Zero(d, d);
  for (int k = 0; k < d; ++k) v(k, d - 1 - k) = (k % 2 == 0) ? 1.0 : -1.0;
  return AntisymmetricUnitary(std::move(v));
}

ComplexMatrix time_reversal(const ComplexMatrix& x, const AntisymmetricUnitary& u) {
  require_side(x, u.dim(), "time_reversal");
  return u.matrix() * x.transpose() * u.matrix().adjoint();
}

ComplexMatrix time_reversal(const ComplexMatrix& x, const ComplexMatrix& u) {
  require_unitary(u, "time_reversal");
  require_side(x, static_cast<int>(u.rows()), "time_reversal");
  return u * x.transpose() * u.adjoint();
}

ComplexMatrix partial_unitary_transpose(const ComplexMatrix& x, const DimSpec& dims, int subsystem,
                                        const ComplexMatrix& u) {
  if (subsystem < 0 || subsystem >= dims.size()) {
    throw DimensionError("partial_time_reversal: subsystem index out of range");
  }
  if (u.rows() != dims[subsystem]) {
    throw DimensionError("partial_time_reversal: unitary does not match subsystem dimension");
  }
  const ComplexMatrix big = embed(u, dims, subsystem);
  return big * partial_transpose(x, dims, subsystem) * big.adjoint();
}

ComplexMatrix partial_time_reversal(const ComplexMatrix& x, const DimSpec& dims, int subsystem,
                                    const AntisymmetricUnitary& u) {
  return partial_unitary_transpose(x, dims, subsystem, u.matrix());
}

ComplexMatrix partial_time_reversal(const DensityMatrix& rho, int subsystem, const AntisymmetricUnitary& u) {
  return partial_time_reversal(rho.matrix(), rho.dims(), subsystem, u);
}

ComplexMatrix reduction_map(const ComplexMatrix& a) {
  require_square(a, "reduction_map");
  return a.trace() * identity(static_cast<int>(a.rows())) - a;
}

ComplexMatrix breuer_hall(const ComplexMatrix& a, const AntisymmetricUnitary& u, MapSign sign) {
  const ComplexMatrix t = time_reversal(a, u);
  if (sign == MapSign::Minus) return reduction_map(a) - t;
  return reduction_map(a) + t;
}

ComplexMatrix multiqubit_reflection(const ComplexMatrix& x, int n_qubits, std::span<const int> reflected) {
  const DimSpec dims = DimSpec::qubits(n_qubits);
  const ComplexMatrix sy = pauli(2);
  ComplexMatrix out = x;
  for (int q : reflected) {
    if (q < 1 || q > n_qubits) throw DimensionError("multiqubit_reflection: qubit index out of range");
    out = partial_unitary_transpose(out, dims, q - 1, sy);
  }
  return out;
}

ComplexMatrix multiqubit_reflection(const DensityMatrix& rho, std::span<const int> reflected) {
  if (!rho.dims().all_qubits()) throw DimensionError("multiqubit_reflection: all factors must be qubits");
  return multiqubit_reflection(rho.matrix(), rho.dims().size(), reflected);
}

OperatorMap::OperatorMap(std::string name, int input_side, int output_side, Action apply, Action dual)
    : name_(std::move(name)), in_(input_side), out_(output_side), apply_(std::move(apply)), dual_(std::move(dual)) {
  if (in_ < 1 || out_ < 1) throw DimensionError("OperatorMap: sides must be positive");
}

ComplexMatrix OperatorMap::apply(const ComplexMatrix& x) const {
  require_side(x, in_, name_.c_str());
  return apply_(x);
}

ComplexMatrix OperatorMap::apply_dual(const ComplexMatrix& x) const {
  require_side(x, out_, (name_ + "^dual").c_str());
  return dual_(x);
}

OperatorMap OperatorMap::dual() const {
  std::string n = name_;
  const std::string suffix = "^dual";
  if (n.size() > suffix.size() && n.compare(n.size() - suffix.size(), suffix.size(), suffix) == 0) {
    n.resize(n.size() - suffix.size());
  } else {
    n += suffix;
  }
  return OperatorMap(n, out_, in_, dual_, apply_);
}

namespace maps {

OperatorMap identity(int d) {
  auto f = [](const ComplexMatrix& x) { return x; };
  return OperatorMap("id", d, d, f, f);
}

OperatorMap transpose(int d) {
  auto f = [](const ComplexMatrix& x) -> ComplexMatrix { return x.transpose(); };
  return OperatorMap("T", d, d, f, f);
}

OperatorMap unitary_transpose(const ComplexMatrix& u) {
  require_unitary(u, "unitary_transpose");
  const int d = static_cast<int>(u.rows());
  auto f = [u](const ComplexMatrix& x) -> ComplexMatrix { return u * x.transpose() * u.adjoint(); };
  auto g = [u](const ComplexMatrix& x) -> ComplexMatrix { return u.transpose() * x.transpose() * u.conjugate(); };
  return OperatorMap("tau", d, d, f, g);
}

OperatorMap time_reversal(const AntisymmetricUnitary& u) { return unitary_transpose(u.matrix()); }

OperatorMap partial_transpose(const DimSpec& dims, int subsystem) {
  if (subsystem < 0 || subsystem >= dims.size()) throw DimensionError("partial_transpose: bad subsystem");
  auto f = [dims, subsystem](const ComplexMatrix& x) { return entsep::partial_transpose(x, dims, subsystem); };
  return OperatorMap("T_" + std::to_string(subsystem), dims.total(), dims.total(), f, f);
}

OperatorMap partial_time_reversal(const DimSpec& dims, int subsystem, const AntisymmetricUnitary& u) {
  OperatorMap m = local(dims, subsystem, time_reversal(u));
  return OperatorMap("tau_" + std::to_string(subsystem), m.input_side(), m.output_side(),
                     [m](const ComplexMatrix& x) { return m.apply(x); },
                     [m](const ComplexMatrix& x) { return m.apply_dual(x); });
}

OperatorMap partial_trace(const DimSpec& dims, int keep) {
  dims.require_bipartite("maps::partial_trace");
  if (keep != 0 && keep != 1) throw DimensionError("maps::partial_trace: keep must be 0 or 1");
  const int d_keep = dims[keep];
  const int d_drop = dims[1 - keep];
  auto f = [dims, keep](const ComplexMatrix& x) { return entsep::partial_trace(x, dims, keep); };
  auto g = [keep, d_drop](const ComplexMatrix& x) -> ComplexMatrix {
    return keep == 0 ? kron(x, entsep::identity(d_drop)) : kron(entsep::identity(d_drop), x);
  };
  return OperatorMap(keep == 0 ? "Tr_B" : "Tr_A", dims.total(), d_keep, f, g);
}

OperatorMap tensor_identity(int input_side, int extra_side) {
  return partial_trace(DimSpec{input_side, extra_side}, 0).dual();
}

OperatorMap reduction(int d) {
  auto f = [](const ComplexMatrix& x) { return reduction_map(x); };
  return OperatorMap("red", d, d, f, f);
}

OperatorMap breuer_hall(const AntisymmetricUnitary& u, MapSign sign) {
  const OperatorMap tau = time_reversal(u);
  const double s = sign == MapSign::Minus ? -1.0 : 1.0;
  auto f = [tau, s](const ComplexMatrix& x) -> ComplexMatrix { return reduction_map(x) + s * tau.apply(x); };
  auto g = [tau, s](const ComplexMatrix& x) -> ComplexMatrix { return reduction_map(x) + s * tau.apply_dual(x); };
  return OperatorMap(sign == MapSign::Minus ? "BH-" : "BH+", u.dim(), u.dim(), f, g);
}

OperatorMap local(const DimSpec& dims, int subsystem, const OperatorMap& inner) {
  if (subsystem < 0 || subsystem >= dims.size()) throw DimensionError("maps::local: bad subsystem");
  if (dims[subsystem] != inner.input_side()) {
    throw DimensionError("maps::local: factor dimension does not match the local map");
  }
  std::vector<int> out_factors = dims.factors();
  out_factors[static_cast<std::size_t>(subsystem)] = inner.output_side();
  const DimSpec out_dims(out_factors);
  const auto fwd = std::make_shared<std::vector<ComplexMatrix>>(
      unit_images([inner](const ComplexMatrix& x) { return inner.apply(x); }, inner.input_side()));
  const auto bwd = std::make_shared<std::vector<ComplexMatrix>>(
      unit_images([inner](const ComplexMatrix& x) { return inner.apply_dual(x); }, inner.output_side()));
  const int d_out = inner.output_side();
  const int d_in = inner.input_side();
  auto f = [dims, subsystem, fwd, d_out](const ComplexMatrix& x) {
    return apply_local(x, dims, subsystem, *fwd, d_out);
  };
  auto g = [out_dims, subsystem, bwd, d_in](const ComplexMatrix& x) {
    return apply_local(x, out_dims, subsystem, *bwd, d_in);
  };
  return OperatorMap(inner.name() + "@" + std::to_string(subsystem), dims.total(), out_dims.total(), f, g);
}

OperatorMap sum(const std::vector<OperatorMap>& terms) {
  if (terms.empty()) throw std::invalid_argument("maps::sum: no terms");
  std::string name;
  for (const auto& t : terms) {
    if (t.input_side() != terms.front().input_side() || t.output_side() != terms.front().output_side()) {
      throw DimensionError("maps::sum: terms have different sides");
    }
    name += (name.empty() ? "" : "+") + t.name();
  }
  auto f = [terms](const ComplexMatrix& x) {
    ComplexMatrix acc = terms.front().apply(x);
    for (std::size_t k = 1; k < terms.size(); ++k) acc += terms[k].apply(x);
    return acc;
  };
  auto g = [terms](const ComplexMatrix& x) {
    ComplexMatrix acc = terms.front().apply_dual(x);
    for (std::size_t k = 1; k < terms.size(); ++k) acc += terms[k].apply_dual(x);
    return acc;
  };
  return OperatorMap("(" + name + ")", terms.front().input_side(), terms.front().output_side(), f, g);
}

OperatorMap compose(const OperatorMap& outer, const OperatorMap& inner) {
  if (inner.output_side() != outer.input_side()) {
    throw DimensionError("maps::compose: " + inner.name() + " output does not feed " + outer.name());
  }
  auto f = [outer, inner](const ComplexMatrix& x) { return outer.apply(inner.apply(x)); };
  auto g = [outer, inner](const ComplexMatrix& x) { return inner.apply_dual(outer.apply_dual(x)); };
  return OperatorMap(outer.name() + "o" + inner.name(), inner.input_side(), outer.output_side(), f, g);
}

OperatorMap scale(Complex factor, const OperatorMap& map) {
  auto f = [factor, map](const ComplexMatrix& x) -> ComplexMatrix { return factor * map.apply(x); };
  auto g = [factor, map](const ComplexMatrix& x) -> ComplexMatrix { return factor * map.apply_dual(x); };
  std::ostringstream os;
  os << factor.real();
  if (factor.imag() != 0.0) os << (factor.imag() > 0 ? "+" : "") << factor.imag() << "i";
  return OperatorMap(os.str() + "*" + map.name(), map.input_side(), map.output_side(), f, g);
}

}  // namespace maps

}  // namespace entsep
