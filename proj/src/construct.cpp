#include "steercert/construct.hpp"

#include <cmath>
#include <numbers>

namespace steercert {

namespace {

// Shared by the floating-point and rational paths: for every key, the
// composite-Bob operator tr_A[(M_a|x x I) rho].
template <class T>
std::map<ElementKey, BasicMatrix<T>> measured_bob_operators(
    const ScenarioSpec& s, const std::vector<std::size_t>& alice_dims,
    const std::vector<std::size_t>& bob_dims, const BasicMatrix<T>& rho,
    const std::vector<std::vector<std::vector<BasicMatrix<T>>>>& ops) {
  std::size_t dA = 1;
  for (std::size_t d : alice_dims) dA *= d;
  std::size_t dB = 1;
  for (std::size_t d : bob_dims) dB *= d;
  std::map<ElementKey, BasicMatrix<T>> out;
  for (const auto& key : all_keys(s)) {
    BasicMatrix<T> mA = ops.at(0).at(key.x[0]).at(key.a[0]);
    for (std::size_t j = 1; j < alice_dims.size(); ++j)
      mA = kron(mA, ops.at(j).at(key.x[j]).at(key.a[j]));
    // tr_A[(mA x I) rho](r, c) = sum_{i,l} mA(i, l) rho((l, r), (i, c))
    BasicMatrix<T> t(dB, dB);
    for (std::size_t i = 0; i < dA; ++i)
      for (std::size_t l = 0; l < dA; ++l) {
        const T& m = mA(i, l);
        if (m == T(0)) continue;
        for (std::size_t r = 0; r < dB; ++r)
          for (std::size_t c = 0; c < dB; ++c) t(r, c) += m * rho(l * dB + r, i * dB + c);
      }
    out.emplace(key, std::move(t));
  }
  return out;
}

template <class T>
std::vector<BasicMatrix<T>> bob_marginals(const BasicMatrix<T>& t,
                                          const std::vector<std::size_t>& bob_dims) {
  std::vector<BasicMatrix<T>> out;
  if (bob_dims.size() == 1) {
    out.push_back(t);
    return out;
  }
  const DimVector dims(bob_dims);
  for (std::size_t k = 0; k < bob_dims.size(); ++k) out.push_back(partial_trace(t, dims, {k}));
  return out;
}

ScenarioSpec scenario_of(const std::vector<std::vector<std::vector<QMatrix>>>& ops,
                         const std::vector<std::size_t>& bob_dims) {
  ScenarioSpec s;
  s.num_alices = ops.size();
  for (const auto& a : ops) {
    s.settings.push_back(a.size());
    std::vector<std::size_t> o;
    for (const auto& x : a) o.push_back(x.size());
    s.outcomes.push_back(o);
  }
  s.num_bobs = bob_dims.size();
  s.bob_dims = bob_dims;
  return s;
}

QMatrix qdiag(Rational a, Rational b) {
  QMatrix m(2, 2);
  m(0, 0) = QComplex(std::move(a));
  m(1, 1) = QComplex(std::move(b));
  return m;
}

QMatrix qsym(Rational a, Rational b, Rational d) {
  QMatrix m(2, 2);
  m(0, 0) = QComplex(a);
  m(0, 1) = QComplex(b);
  m(1, 0) = QComplex(b);
  m(1, 1) = QComplex(std::move(d));
  return m;
}

Rational q(long long p, long long r) { return Rational(p) / r; }

// Z basis (x = 0) and X basis (x = 1) projectors for one qubit.
std::vector<std::vector<QMatrix>> z_then_x() {
  return {{qdiag(1, 0), qdiag(0, 1)},
          {qsym(q(1, 2), q(1, 2), q(1, 2)), qsym(q(1, 2), q(-1, 2), q(1, 2))}};
}

QMatrix pure_exact(const std::vector<std::size_t>& support, std::size_t dim) {
  // Uniform superposition over the given basis states.
  QMatrix m(dim, dim);
  const Rational w = Rational(1) / static_cast<long long>(support.size());
  for (std::size_t i : support)
    for (std::size_t j : support) m(i, j) = QComplex(w);
  return m;
}

}  // namespace

QuantumRealization ExactRealization::to_realization() const {
  QuantumRealization qr;
  qr.alice_dims = alice_dims;
  qr.bob_dims = bob_dims;
  qr.state = HermitianMatrix(to_cmatrix(state));
  for (const auto& alice : alice_ops) {
    std::vector<std::vector<HermitianMatrix>> sets;
    for (const auto& x : alice) {
      std::vector<HermitianMatrix> row;
      for (const auto& m : x) row.emplace_back(to_cmatrix(m));
      sets.push_back(std::move(row));
    }
    qr.alice_measurements.emplace_back(std::move(sets));
  }
  return qr;
}

std::map<ElementKey, HermitianMatrix> quantum_parent(const QuantumRealization& qr) {
  qr.validate();
  std::vector<std::vector<std::vector<CMatrix>>> ops;
  for (const auto& m : qr.alice_measurements) {
    std::vector<std::vector<CMatrix>> sets;
    for (const auto& row : m.ops()) {
      std::vector<CMatrix> r;
      for (const auto& h : row) r.push_back(h.matrix());
      sets.push_back(std::move(r));
    }
    ops.push_back(std::move(sets));
  }
  auto t = measured_bob_operators(qr.scenario(), qr.alice_dims, qr.bob_dims, qr.state.matrix(), ops);
  std::map<ElementKey, HermitianMatrix> out;
  for (auto& [k, m] : t) out.emplace(k, HermitianMatrix(m, 1e-8));
  return out;
}

Assemblage from_quantum_realization(const QuantumRealization& qr) {
  const auto parent = quantum_parent(qr);
  Assemblage::Elements e;
  for (const auto& [k, t] : parent) {
    std::vector<HermitianMatrix> bobs;
    for (auto& m : bob_marginals(t.matrix(), qr.bob_dims)) bobs.emplace_back(m);
    e.emplace(k, std::move(bobs));
  }
  return Assemblage(qr.scenario(), std::move(e));
}

ExactElements exact_from_quantum_realization(const ExactRealization& qr) {
  const ScenarioSpec s = scenario_of(qr.alice_ops, qr.bob_dims);
  auto t = measured_bob_operators(s, qr.alice_dims, qr.bob_dims, qr.state, qr.alice_ops);
  ExactElements out;
  for (auto& [k, m] : t) out.emplace(k, bob_marginals(m, qr.bob_dims));
  return out;
}

Assemblage assemblage_from_exact(const ScenarioSpec& s, const ExactElements& e) {
  Assemblage::Elements el;
  for (const auto& [k, mats] : e) {
    std::vector<HermitianMatrix> bobs;
    for (const auto& m : mats) bobs.emplace_back(to_cmatrix(m));
    el.emplace(k, std::move(bobs));
  }
  return Assemblage(s, std::move(el));
}

Assemblage pr_assemblage() {
  const ScenarioSpec s = ScenarioSpec::uniform(2, 2, 2, {2, 2});
  Assemblage::Elements e;
  for (const auto& key : all_keys(s)) {
    const bool hit = ((key.a[0] ^ key.a[1]) == (key.x[0] & key.x[1]));
    const double p = hit ? 0.5 : 0.0;
    const HermitianMatrix m = HermitianMatrix::identity(2).scaled(p / 2.0);
    e.emplace(key, std::vector<HermitianMatrix>{m, m});
  }
  return Assemblage(s, std::move(e));
}

PositiveMapSpec PositiveMapSpec::identity(std::size_t dim) {
  PositiveMapSpec m;
  m.dim = dim;
  return m;
}

PositiveMapSpec PositiveMapSpec::reduction_transpose(CMatrix u) {
  PositiveMapSpec m;
  m.dim = u.rows();
  m.kind = Kind::ReductionTranspose;
  m.unitary = std::move(u);
  m.check();
  return m;
}

void PositiveMapSpec::check() const {
  if (dim == 0) throw InvalidArgument("positive map: dimension must be positive");
  if (kind == Kind::Identity) return;
  if (!unitary.is_square() || unitary.rows() != dim)
    throw InvalidArgument("positive map: unitary has the wrong shape");
  if (max_abs_diff(unitary * unitary.adjoint(), CMatrix::identity(dim)) > 1e-12)
    throw InvalidArgument("positive map: U is not unitary");
  if (max_abs_diff(unitary.transpose(), -unitary) > 1e-12)
    throw InvalidArgument("positive map: U is not antisymmetric");
}

CMatrix apply_positive_map(const PositiveMapSpec& m, const CMatrix& rho) {
  if (!rho.is_square() || rho.rows() != m.dim)
    throw DimensionError("apply_positive_map: input dimension does not match the map");
  if (m.kind == PositiveMapSpec::Kind::Identity) return rho;
  CMatrix out = CMatrix::identity(m.dim) * rho.trace();
  out -= rho;
  out -= m.unitary * rho.transpose() * m.unitary.adjoint();
  return out * cplx(0.5);
}

HermitianMatrix apply_positive_map(const PositiveMapSpec& m, const HermitianMatrix& rho) {
  return HermitianMatrix(apply_positive_map(m, rho.matrix()));
}

CMatrix apply_local_map(const PositiveMapSpec& m, const CMatrix& rho, const DimVector& dims,
                        std::size_t factor) {
  if (factor >= dims.size()) throw DimensionError("apply_local_map: factor out of range");
  if (!rho.is_square() || rho.rows() != dims.product())
    throw DimensionError("apply_local_map: matrix does not match dims");
  if (dims[factor] != m.dim) throw DimensionError("apply_local_map: factor dimension mismatch");
  const std::size_t d = m.dim;
  std::size_t inner = 1;  // stride of the factor
  for (std::size_t i = factor + 1; i < dims.size(); ++i) inner *= dims[i];
  const std::size_t outer = rho.rows() / (d * inner);
  auto index = [&](std::size_t o, std::size_t k, std::size_t in) { return (o * d + k) * inner + in; };
  CMatrix out(rho.rows(), rho.cols());
  CMatrix block(d, d);
  for (std::size_t o1 = 0; o1 < outer; ++o1)
    for (std::size_t i1 = 0; i1 < inner; ++i1)
      for (std::size_t o2 = 0; o2 < outer; ++o2)
        for (std::size_t i2 = 0; i2 < inner; ++i2) {
          for (std::size_t k = 0; k < d; ++k)
            for (std::size_t l = 0; l < d; ++l) block(k, l) = rho(index(o1, k, i1), index(o2, l, i2));
          const CMatrix mapped = apply_positive_map(m, block);
          for (std::size_t k = 0; k < d; ++k)
            for (std::size_t l = 0; l < d; ++l) out(index(o1, k, i1), index(o2, l, i2)) = mapped(k, l);
        }
  return out;
}

Assemblage ptp_construction(const QuantumRealization& qr, const std::vector<PositiveMapSpec>& maps) {
  if (maps.size() != qr.bob_dims.size())
    throw DimensionError("ptp_construction: one map per Bob required");
  for (std::size_t k = 0; k < maps.size(); ++k) {
    maps[k].check();
    if (maps[k].dim != qr.bob_dims[k]) throw DimensionError("ptp_construction: map dimension mismatch");
  }
  const Assemblage base = from_quantum_realization(qr);
  Assemblage::Elements e;
  for (const auto& [key, bobs] : base.elements()) {
    std::vector<HermitianMatrix> mapped;
    for (std::size_t k = 0; k < bobs.size(); ++k) {
      HermitianMatrix h = apply_positive_map(maps[k], bobs[k]);
      const double lmin = min_eigenvalue(h);
      if (lmin < -1e-8)
        throw ValidationError("ptp_construction: element " + to_string(key) + " for Bob " +
                              std::to_string(k) + " has eigenvalue " + std::to_string(lmin) +
                              "; the map is not positive");
      mapped.push_back(std::move(h));
    }
    e.emplace(key, std::move(mapped));
  }
  return Assemblage(base.scenario(), std::move(e));
}

Assemblage ptp_construction(const HermitianMatrix& rho, const MeasurementSet& alice_meas,
                            const std::vector<PositiveMapSpec>& maps) {
  QuantumRealization qr;
  qr.alice_dims = {alice_meas.dim()};
  for (const auto& m : maps) qr.bob_dims.push_back(m.dim);
  qr.state = rho;
  qr.alice_measurements = {alice_meas};
  return ptp_construction(qr, maps);
}

CMatrix x_tensor_y() { return kron(pauli::X(), pauli::Y()); }

MeasurementSet plus_minus_then_computational() {
  const double h = 1.0 / std::numbers::sqrt2;
  return MeasurementSet::from_bases({CMatrix{{h, h}, {h, -h}}, CMatrix::identity(2)});
}

MeasurementSet x_plus_minus_z_bases() {
  // (I +- (X +- Z)/sqrt2)/2, written out.
  const double s = 1.0 / (2.0 * std::numbers::sqrt2);
  auto proj = [&](double sign_outcome, double sign_z) {
    return HermitianMatrix(CMatrix{{0.5 + sign_outcome * sign_z * s, sign_outcome * s},
                                   {sign_outcome * s, 0.5 - sign_outcome * sign_z * s}});
  };
  return MeasurementSet({{proj(1, 1), proj(-1, 1)}, {proj(1, -1), proj(-1, -1)}});
}

Assemblage two_alice_ptp_construction(const HermitianMatrix& rho,
                                      const std::optional<MeasurementSet>& first_alice) {
  QuantumRealization qr;
  qr.alice_dims = {2, 2};
  qr.bob_dims = {2, 4};
  qr.state = rho;
  qr.alice_measurements = {first_alice ? *first_alice : plus_minus_then_computational(),
                           x_plus_minus_z_bases()};
  return ptp_construction(
      qr, {PositiveMapSpec::identity(2), PositiveMapSpec::reduction_transpose(x_tensor_y())});
}

ExactElements noise_elements_exact(NoiseKind kind) {
  // Identical for both Bobs.
  std::map<std::pair<int, int>, QMatrix> m;  // (a, x)
  switch (kind) {
    case NoiseKind::GHZ:
      m[{0, 0}] = qdiag(q(1, 2), 0);
      m[{1, 0}] = qdiag(0, q(1, 2));
      m[{0, 1}] = qdiag(q(1, 4), q(1, 4));
      m[{1, 1}] = qdiag(q(1, 4), q(1, 4));
      break;
    case NoiseKind::W:
      m[{0, 0}] = qdiag(q(1, 3), q(1, 3));
      m[{1, 0}] = qdiag(q(1, 3), 0);
      m[{0, 1}] = qsym(q(1, 3), q(1, 6), q(1, 6));
      m[{1, 1}] = qsym(q(1, 3), q(-1, 6), q(1, 6));
      break;
    case NoiseKind::White:
      for (int a = 0; a < 2; ++a)
        for (int x = 0; x < 2; ++x) m[{a, x}] = qdiag(q(1, 4), q(1, 4));
      break;
  }
  ExactElements out;
  for (const auto& [ax, mat] : m)
    out[ElementKey{{static_cast<std::size_t>(ax.first)}, {static_cast<std::size_t>(ax.second)}}] = {
        mat, mat};
  return out;
}

Assemblage noise_assemblage(NoiseKind kind, const ScenarioSpec& s) {
  s.check();
  if (kind == NoiseKind::White) {
    Assemblage::Elements e;
    for (const auto& key : all_keys(s)) {
      double p = 1.0;
      for (std::size_t j = 0; j < s.num_alices; ++j) p /= static_cast<double>(s.outcomes[j][key.x[j]]);
      std::vector<HermitianMatrix> bobs;
      for (std::size_t d : s.bob_dims)
        bobs.push_back(HermitianMatrix::identity(d).scaled(p / static_cast<double>(d)));
      e.emplace(key, std::move(bobs));
    }
    return Assemblage(s, std::move(e));
  }
  if (!(s == ScenarioSpec::uniform(1, 2, 2, {2, 2})))
    throw InvalidArgument("noise_assemblage: GHZ and W noise need one Alice, two binary settings and two qubit Bobs");
  return assemblage_from_exact(s, noise_elements_exact(kind));
}

ExactRealization ghz_realization_exact() {
  ExactRealization r;
  r.alice_dims = {2};
  r.bob_dims = {2, 2};
  r.state = pure_exact({0, 7}, 8);
  r.alice_ops = {z_then_x()};
  return r;
}

ExactRealization w_realization_exact() {
  ExactRealization r;
  r.alice_dims = {2};
  r.bob_dims = {2, 2};
  r.state = pure_exact({1, 2, 4}, 8);
  r.alice_ops = {z_then_x()};
  return r;
}

QuantumRealization maximally_mixed_realization() {
  const double h = 0.5;
  const CMatrix psi_plus{{0, 0, 0, 0}, {0, h, h, 0}, {0, h, h, 0}, {0, 0, 0, 0}};
  QuantumRealization qr;
  qr.alice_dims = {2};
  qr.bob_dims = {2, 2};
  qr.state = HermitianMatrix(kron(CMatrix::identity(2) * cplx(0.5), psi_plus));
  qr.alice_measurements = {plus_minus_then_computational()};
  return qr;
}

Assemblage load_fixture(Fixture f) {
  switch (f) {
    case Fixture::PR:
      return pr_assemblage();
    case Fixture::ABB_1:
    case Fixture::ABB_PQNL:
      return assemblage_from_exact(ScenarioSpec::uniform(1, 2, 2, {2, 2}), fixture_exact(f));
    case Fixture::ABB_PTP_1: {
      const auto psi = abb_ptp1_state_vector();
      const HermitianMatrix rho(CMatrix::outer(psi));
      return ptp_construction(
          rho, plus_minus_then_computational(),
          {PositiveMapSpec::identity(2), PositiveMapSpec::reduction_transpose(x_tensor_y())});
    }
  }
  throw InvalidArgument("load_fixture: unknown fixture");
}

Fixture fixture_from_name(std::string_view name) {
  if (name == "abb1" || name == "ABB_1") return Fixture::ABB_1;
  if (name == "abb-pqnl" || name == "ABB_PQNL") return Fixture::ABB_PQNL;
  if (name == "abb-ptp1" || name == "ABB_PTP_1") return Fixture::ABB_PTP_1;
  if (name == "pr" || name == "PR") return Fixture::PR;
  throw InvalidArgument("unknown fixture '" + std::string(name) + "'");
}

}  // namespace steercert
