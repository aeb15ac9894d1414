#include "steercert/matcore.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include <Eigen/Eigenvalues>

namespace steercert {

DimVector::DimVector(std::vector<std::size_t> factors) : factors_(std::move(factors)) {
  for (auto f : factors_)
    if (f == 0) throw DimensionError("DimVector: local dimensions must be positive");
}

std::size_t DimVector::product() const {
  return std::accumulate(factors_.begin(), factors_.end(), std::size_t{1},
                         std::multiplies<>());
}

double hermitian_asymmetry(const CMatrix& m) {
  if (!m.is_square()) throw DimensionError("hermitian_asymmetry: matrix is not square");
  double worst = 0.0;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = i; j < m.cols(); ++j)
      worst = std::max(worst, std::abs(m(i, j) - std::conj(m(j, i))));
  return worst;
}

double max_abs_diff(const CMatrix& a, const CMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimensionError("max_abs_diff: shape mismatch");
  }
  double worst = 0.0;
  for (std::size_t k = 0; k < a.entries().size(); ++k)
    worst = std::max(worst, std::abs(a.entries()[k] - b.entries()[k]));
  return worst;
}

HermitianMatrix::HermitianMatrix(const CMatrix& m, double asymmetry_tol) : m_(m) {
  if (!m.is_square()) throw DimensionError("HermitianMatrix: matrix is not square");
  for (const auto& z : m.entries())
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
      throw InvalidArgument("HermitianMatrix: non-finite entry");
    }
  const double asym = hermitian_asymmetry(m);
  if (asym > asymmetry_tol) {
    throw ValidationError("HermitianMatrix: asymmetry " + std::to_string(asym) +
                          " exceeds tolerance");
  }
  const std::size_t n = m.rows();
  for (std::size_t i = 0; i < n; ++i) {
    m_(i, i) = cplx(m(i, i).real(), 0.0);
    for (std::size_t j = i + 1; j < n; ++j) {
      const cplx v = 0.5 * (m(i, j) + std::conj(m(j, i)));
      m_(i, j) = v;
      m_(j, i) = std::conj(v);
    }
  }
}

HermitianMatrix HermitianMatrix::diagonal(std::span<const double> d) {
  CMatrix m(d.size(), d.size());
  for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
  return HermitianMatrix(m);
}

HermitianMatrix kron(const HermitianMatrix& a, const HermitianMatrix& b) {
  return HermitianMatrix(kron(a.matrix(), b.matrix()));
}

namespace detail {

TraceIndexMap make_trace_index_map(const DimVector& dims, std::span<const std::size_t> keep) {
  const std::size_t nf = dims.size();
  if (keep.empty()) throw InvalidArgument("partial_trace: keep set is empty");
  std::vector<bool> kept(nf, false);
  for (auto k : keep) {
    if (k >= nf) throw InvalidArgument("partial_trace: keep index out of range");
    if (kept[k]) throw InvalidArgument("partial_trace: duplicate keep index");
    kept[k] = true;
  }
  TraceIndexMap map;
  for (std::size_t f = 0; f < nf; ++f) (kept[f] ? map.kept_dim : map.traced_dim) *= dims[f];
  const std::size_t n = dims.product();
  map.kept.resize(n);
  map.traced.resize(n);
  std::vector<std::size_t> digit(nf, 0);
  for (std::size_t idx = 0; idx < n; ++idx) {
    std::size_t rem = idx;
    for (std::size_t f = nf; f-- > 0;) {
      digit[f] = rem % dims[f];
      rem /= dims[f];
    }
    std::size_t ki = 0;
    std::size_t ti = 0;
    for (std::size_t f = 0; f < nf; ++f) {
      if (kept[f]) {
        ki = ki * dims[f] + digit[f];
      } else {
        ti = ti * dims[f] + digit[f];
      }
    }
    map.kept[idx] = ki;
    map.traced[idx] = ti;
  }
  return map;
}

}  // namespace detail

HermitianMatrix partial_trace(const HermitianMatrix& m, const DimVector& dims,
                              std::span<const std::size_t> keep) {
  return HermitianMatrix(partial_trace(m.matrix(), dims, keep));
}

std::vector<double> eigenvalues(const HermitianMatrix& h) {
  const auto n = static_cast<Eigen::Index>(h.dim());
  Eigen::MatrixXcd m(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) m(i, j) = h(i, j);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw ConvergenceError("eigenvalue iteration did not converge");
  std::vector<double> out(es.eigenvalues().data(), es.eigenvalues().data() + n);
  return out;
}

double min_eigenvalue(const HermitianMatrix& h) {
  if (h.dim() == 0) throw DimensionError("min_eigenvalue: empty matrix");
  return eigenvalues(h).front();
}

CMatrix to_cmatrix(const QMatrix& q) {
  CMatrix out(q.rows(), q.cols());
  for (std::size_t i = 0; i < q.rows(); ++i)
    for (std::size_t j = 0; j < q.cols(); ++j) out(i, j) = q(i, j).to_complex();
  return out;
}

namespace pauli {
CMatrix I() { return CMatrix::identity(2); }
CMatrix X() { return CMatrix{{0, 1}, {1, 0}}; }
CMatrix Y() { return CMatrix{{0, cplx(0, -1)}, {cplx(0, 1), 0}}; }
CMatrix Z() { return CMatrix{{1, 0}, {0, -1}}; }
}  // namespace pauli

}  // namespace steercert
