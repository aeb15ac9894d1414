#pragma once

// Random generators and brute-force oracles shared by the test binaries.

#include <Eigen/Dense>
#include <cmath>
#include <random>
#include <vector>

#include "steercert/construct.hpp"
#include "steercert/model.hpp"

namespace testing_support {

using namespace steercert;

using Rng = std::mt19937_64;

inline cplx gauss_c(Rng& rng) {
  std::normal_distribution<double> g;
  return {g(rng), g(rng)};
}

inline std::size_t pick(Rng& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

inline CMatrix ginibre(Rng& rng, std::size_t r, std::size_t c) {
  CMatrix m(r, c);
  for (auto& z : m.entries()) z = gauss_c(rng);
  return m;
}

inline Eigen::MatrixXcd to_eigen(const CMatrix& m) {
  Eigen::MatrixXcd e(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) e(i, j) = m(i, j);
  return e;
}

inline CMatrix from_eigen(const Eigen::MatrixXcd& e) {
  CMatrix m(e.rows(), e.cols());
  for (Eigen::Index i = 0; i < e.rows(); ++i)
    for (Eigen::Index j = 0; j < e.cols(); ++j) m(i, j) = e(i, j);
  return m;
}

// Rank-r density matrix, r = d by default.
inline HermitianMatrix random_density(Rng& rng, std::size_t d, std::size_t rank = 0) {
  const CMatrix g = ginibre(rng, d, rank == 0 ? d : rank);
  CMatrix rho = g * g.adjoint();
  rho = rho * cplx(1.0 / rho.trace().real());
  return HermitianMatrix(rho);
}

inline std::vector<cplx> random_pure_vector(Rng& rng, std::size_t d) {
  std::vector<cplx> v(d);
  double n = 0.0;
  for (auto& z : v) {
    z = gauss_c(rng);
    n += std::norm(z);
  }
  for (auto& z : v) z /= std::sqrt(n);
  return v;
}

inline CMatrix random_unitary(Rng& rng, std::size_t d) {
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(to_eigen(ginibre(rng, d, d)));
  return from_eigen(qr.householderQ() * Eigen::MatrixXcd::Identity(d, d));
}

// Random POVM with the given number of outcomes: E_a = S^{-1/2} A_a S^{-1/2}.
inline std::vector<HermitianMatrix> random_povm(Rng& rng, std::size_t d, std::size_t outcomes) {
  std::vector<CMatrix> a;
  CMatrix s(d, d);
  for (std::size_t k = 0; k < outcomes; ++k) {
    const CMatrix g = ginibre(rng, d, d);
    a.push_back(g * g.adjoint());
    s += a.back();
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(to_eigen(s));
  const Eigen::MatrixXcd isq = es.operatorInverseSqrt();
  std::vector<HermitianMatrix> out;
  for (const auto& ak : a) out.push_back(HermitianMatrix(from_eigen(isq * to_eigen(ak) * isq), 1e-8));
  // Absorb rounding so the set sums to the identity to machine precision.
  CMatrix tot(d, d);
  for (std::size_t k = 0; k + 1 < out.size(); ++k) tot += out[k].matrix();
  out.back() = HermitianMatrix(CMatrix::identity(d) - tot, 1e-8);
  return out;
}

inline MeasurementSet random_measurements(Rng& rng, std::size_t d, const std::vector<std::size_t>& outcomes) {
  std::vector<std::vector<HermitianMatrix>> ops;
  for (std::size_t o : outcomes) {
    if (o == d && pick(rng, 0, 1) == 0) {
      const CMatrix u = random_unitary(rng, d);
      std::vector<HermitianMatrix> proj;
      for (std::size_t c = 0; c < d; ++c) {
        std::vector<cplx> col(d);
        for (std::size_t r = 0; r < d; ++r) col[r] = u(r, c);
        proj.push_back(HermitianMatrix(CMatrix::outer(col)));
      }
      ops.push_back(std::move(proj));
    } else {
      ops.push_back(random_povm(rng, d, o));
    }
  }
  return MeasurementSet(std::move(ops), 1e-9);
}

// One Alice, random Bob dimensions, settings, outcomes, mixed or pure state.
inline QuantumRealization random_realization_one_alice(Rng& rng) {
  QuantumRealization qr;
  const std::size_t da = pick(rng, 2, 3);
  qr.alice_dims = {da};
  static const std::vector<std::vector<std::size_t>> bob_choices = {{2}, {3}, {2, 2}, {2, 3}};
  qr.bob_dims = bob_choices[pick(rng, 0, bob_choices.size() - 1)];
  std::size_t total = da;
  for (std::size_t d : qr.bob_dims) total *= d;
  const std::size_t rank = pick(rng, 0, 1) == 0 ? 1 : pick(rng, 2, total);
  qr.state = random_density(rng, total, rank);
  const std::size_t settings = pick(rng, 2, 3);
  std::vector<std::size_t> outcomes(settings);
  for (auto& o : outcomes) o = pick(rng, 2, 3);
  qr.alice_measurements = {random_measurements(rng, da, outcomes)};
  return qr;
}

// Oracles by direct index summation.

inline std::vector<std::size_t> digits(std::size_t flat, const std::vector<std::size_t>& dims) {
  std::vector<std::size_t> d(dims.size());
  for (std::size_t k = dims.size(); k-- > 0;) {
    d[k] = flat % dims[k];
    flat /= dims[k];
  }
  return d;
}

inline std::size_t flatten(const std::vector<std::size_t>& d, const std::vector<std::size_t>& dims) {
  std::size_t f = 0;
  for (std::size_t k = 0; k < dims.size(); ++k) f = f * dims[k] + d[k];
  return f;
}

inline CMatrix oracle_kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t r = 0; r < out.rows(); ++r)
    for (std::size_t c = 0; c < out.cols(); ++c)
      out(r, c) = a(r / b.rows(), c / b.cols()) * b(r % b.rows(), c % b.cols());
  return out;
}

// Sum over every pair of full indices that agree on the traced factors.
inline CMatrix oracle_partial_trace(const CMatrix& m, const std::vector<std::size_t>& dims,
                                    const std::vector<std::size_t>& keep) {
  std::vector<std::size_t> kdims;
  for (std::size_t k : keep) kdims.push_back(dims[k]);
  std::size_t kd = 1;
  for (std::size_t d : kdims) kd *= d;
  CMatrix out(kd, kd);
  const std::size_t n = m.rows();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const auto di = digits(i, dims);
      const auto dj = digits(j, dims);
      bool same_traced = true;
      for (std::size_t k = 0; k < dims.size(); ++k) {
        bool kept = false;
        for (std::size_t q : keep) kept = kept || q == k;
        if (!kept && di[k] != dj[k]) same_traced = false;
      }
      if (!same_traced) continue;
      std::vector<std::size_t> ki, kj;
      for (std::size_t q : keep) {
        ki.push_back(di[q]);
        kj.push_back(dj[q]);
      }
      out(flatten(ki, kdims), flatten(kj, kdims)) += m(i, j);
    }
  return out;
}

// p(a|x) directly from a one-Alice realisation: tr[(M_a|x x I) rho].
inline double oracle_probability(const QuantumRealization& qr, const ElementKey& key) {
  const std::size_t da = qr.alice_dims[0];
  const std::size_t rest = qr.state.dim() / da;
  const CMatrix& m = qr.alice_measurements[0].op(key.x[0], key.a[0]).matrix();
  cplx acc = 0.0;
  for (std::size_t i = 0; i < da; ++i)
    for (std::size_t j = 0; j < da; ++j)
      for (std::size_t r = 0; r < rest; ++r) acc += m(i, j) * qr.state(j * rest + r, i * rest + r);
  return acc.real();
}

}  // namespace testing_support
