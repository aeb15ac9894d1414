#pragma once

// Dense complex matrices, tensor products and partial traces.
//
// Tensor-product indices are big-endian: for dims (d0, d1, ..., dk) the basis
// state |i0 i1 ... ik> has flat index ((i0 * d1 + i1) * d2 + i2) ... .

#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

#include "steercert/error.hpp"
#include "steercert/rational.hpp"

namespace steercert {

using cplx = std::complex<double>;

template <class T>
class BasicMatrix {
 public:
  BasicMatrix() = default;
  BasicMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
  BasicMatrix(std::size_t rows, std::size_t cols, std::vector<T> row_major)
      : rows_(rows), cols_(cols), data_(std::move(row_major)) {
    if (data_.size() != rows_ * cols_) {
      throw DimensionError("matrix entry count does not match rows x cols");
    }
  }
  BasicMatrix(std::initializer_list<std::initializer_list<T>> rows) {
    rows_ = rows.size();
    cols_ = rows_ == 0 ? 0 : rows.begin()->size();
    data_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
      if (r.size() != cols_) throw DimensionError("ragged matrix literal");
      data_.insert(data_.end(), r.begin(), r.end());
    }
  }

  static BasicMatrix identity(std::size_t n) {
    BasicMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = T(1);
    return m;
  }

  static BasicMatrix zero(std::size_t rows, std::size_t cols) { return BasicMatrix(rows, cols); }

  // |v><v| for a column vector v given as a flat list.
  static BasicMatrix outer(std::span<const T> v) {
    BasicMatrix m(v.size(), v.size());
    for (std::size_t i = 0; i < v.size(); ++i)
      for (std::size_t j = 0; j < v.size(); ++j) m(i, j) = v[i] * conj_of(v[j]);
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool is_square() const { return rows_ == cols_; }

  T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<const T> entries() const { return data_; }
  std::span<T> entries() { return data_; }

  BasicMatrix adjoint() const {
    BasicMatrix out(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) out(j, i) = conj_of((*this)(i, j));
    return out;
  }

  BasicMatrix transpose() const {
    BasicMatrix out(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) out(j, i) = (*this)(i, j);
    return out;
  }

  T trace() const {
    T acc{};
    for (std::size_t i = 0; i < std::min(rows_, cols_); ++i) acc += (*this)(i, i);
    return acc;
  }

  BasicMatrix& operator+=(const BasicMatrix& o) {
    check_same_shape(o);
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
    return *this;
  }
  BasicMatrix& operator-=(const BasicMatrix& o) {
    check_same_shape(o);
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
    return *this;
  }
  BasicMatrix& operator*=(const T& s) {
    for (auto& v : data_) v *= s;
    return *this;
  }

  friend BasicMatrix operator+(BasicMatrix a, const BasicMatrix& b) { return a += b; }
  friend BasicMatrix operator-(BasicMatrix a, const BasicMatrix& b) { return a -= b; }
  friend BasicMatrix operator*(BasicMatrix a, const T& s) { return a *= s; }
  friend BasicMatrix operator*(const T& s, BasicMatrix a) { return a *= s; }
  friend BasicMatrix operator-(BasicMatrix a) {
    for (auto& v : a.data_) v = -v;
    return a;
  }

  friend BasicMatrix operator*(const BasicMatrix& a, const BasicMatrix& b) {
    if (a.cols_ != b.rows_) throw DimensionError("matrix product shape mismatch");
    BasicMatrix out(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const T& aik = a(i, k);
        for (std::size_t j = 0; j < b.cols_; ++j) out(i, j) += aik * b(k, j);
      }
    return out;
  }

  friend bool operator==(const BasicMatrix& a, const BasicMatrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

 private:
  void check_same_shape(const BasicMatrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw DimensionError("matrix shape mismatch");
  }

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

using CMatrix = BasicMatrix<cplx>;
using QMatrix = BasicMatrix<QComplex>;

// Local dimensions of a tensor-product space.
class DimVector {
 public:
  DimVector() = default;
  DimVector(std::vector<std::size_t> factors);  // NOLINT(google-explicit-constructor)
  DimVector(std::initializer_list<std::size_t> factors)
      : DimVector(std::vector<std::size_t>(factors)) {}

  std::size_t size() const { return factors_.size(); }
  std::size_t operator[](std::size_t i) const { return factors_[i]; }
  std::size_t product() const;
  const std::vector<std::size_t>& factors() const { return factors_; }

 private:
  std::vector<std::size_t> factors_;
};

// Square complex matrix equal to its conjugate transpose. Construction
// symmetrises ((M + M^dag) / 2) and rejects inputs whose entrywise asymmetry
// exceeds the tolerance.
class HermitianMatrix {
 public:
  static constexpr double kDefaultAsymmetryTol = 1e-9;

  HermitianMatrix() = default;
  explicit HermitianMatrix(const CMatrix& m, double asymmetry_tol = kDefaultAsymmetryTol);

  static HermitianMatrix identity(std::size_t n) { return HermitianMatrix(CMatrix::identity(n)); }
  static HermitianMatrix zero(std::size_t n) { return HermitianMatrix(CMatrix(n, n)); }
  static HermitianMatrix diagonal(std::span<const double> d);

  std::size_t dim() const { return m_.rows(); }
  const CMatrix& matrix() const { return m_; }
  const cplx& operator()(std::size_t i, std::size_t j) const { return m_(i, j); }
  double trace() const { return m_.trace().real(); }

  HermitianMatrix operator+(const HermitianMatrix& o) const { return HermitianMatrix(m_ + o.m_); }
  HermitianMatrix operator-(const HermitianMatrix& o) const { return HermitianMatrix(m_ - o.m_); }
  HermitianMatrix scaled(double s) const { return HermitianMatrix(m_ * cplx(s)); }

 private:
  CMatrix m_;
};

// Largest |m(i,j) - conj(m(j,i))|.
double hermitian_asymmetry(const CMatrix& m);

// Largest |a(i,j) - b(i,j)|.
double max_abs_diff(const CMatrix& a, const CMatrix& b);

template <class T>
BasicMatrix<T> kron(const BasicMatrix<T>& a, const BasicMatrix<T>& b) {
  BasicMatrix<T> out(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      const T aij = a(i, j);
      for (std::size_t k = 0; k < b.rows(); ++k)
        for (std::size_t l = 0; l < b.cols(); ++l)
          out(i * b.rows() + k, j * b.cols() + l) = aij * b(k, l);
    }
  return out;
}

HermitianMatrix kron(const HermitianMatrix& a, const HermitianMatrix& b);

namespace detail {

// Maps each full index onto (kept index, traced index) for a factorised space.
struct TraceIndexMap {
  std::vector<std::size_t> kept;
  std::vector<std::size_t> traced;
  std::size_t kept_dim = 1;
  std::size_t traced_dim = 1;
};

TraceIndexMap make_trace_index_map(const DimVector& dims, std::span<const std::size_t> keep);

}  // namespace detail

// Reduced matrix over the factors listed in `keep` (0-based, any order; the
// result keeps the original factor order).
template <class T>
BasicMatrix<T> partial_trace(const BasicMatrix<T>& m, const DimVector& dims,
                             std::span<const std::size_t> keep) {
  if (!m.is_square()) throw DimensionError("partial_trace: matrix is not square");
  if (dims.product() != m.rows()) {
    throw DimensionError("partial_trace: product of dims does not match matrix dimension");
  }
  const auto map = detail::make_trace_index_map(dims, keep);
  BasicMatrix<T> out(map.kept_dim, map.kept_dim);
  const std::size_t n = m.rows();
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c)
      if (map.traced[r] == map.traced[c]) out(map.kept[r], map.kept[c]) += m(r, c);
  return out;
}

template <class T>
BasicMatrix<T> partial_trace(const BasicMatrix<T>& m, const DimVector& dims,
                             std::initializer_list<std::size_t> keep) {
  return partial_trace(m, dims, std::span<const std::size_t>(keep.begin(), keep.size()));
}

HermitianMatrix partial_trace(const HermitianMatrix& m, const DimVector& dims,
                              std::span<const std::size_t> keep);

// Ascending eigenvalues. Throws ConvergenceError if the eigensolver fails.
std::vector<double> eigenvalues(const HermitianMatrix& h);

double min_eigenvalue(const HermitianMatrix& h);

inline bool is_psd(const HermitianMatrix& h, double tol) {
  if (tol < 0) throw InvalidArgument("is_psd: tolerance must be non-negative");
  return min_eigenvalue(h) >= -tol;
}

CMatrix to_cmatrix(const QMatrix& q);

// Standard one-qubit operators.
namespace pauli {
CMatrix I();
CMatrix X();
CMatrix Y();
CMatrix Z();
}  // namespace pauli

}  // namespace steercert
