#include <algorithm>

#include "steercert/sdp.hpp"

namespace steercert::sdp {

LinearForm& LinearForm::operator+=(const LinearForm& o) {
  terms.insert(terms.end(), o.terms.begin(), o.terms.end());
  constant += o.constant;
  return *this;
}

LinearForm& LinearForm::operator-=(const LinearForm& o) {
  terms.reserve(terms.size() + o.terms.size());
  for (const auto& [k, v] : o.terms) terms.emplace_back(k, -v);
  constant -= o.constant;
  return *this;
}

LinearForm& LinearForm::operator*=(double s) {
  for (auto& t : terms) t.second *= s;
  constant *= s;
  return *this;
}

void LinearForm::compress() {
  if (terms.empty()) return;
  std::sort(terms.begin(), terms.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  std::size_t out = 0;
  for (std::size_t i = 0; i < terms.size();) {
    const std::size_t k = terms[i].first;
    double acc = 0.0;
    for (; i < terms.size() && terms[i].first == k; ++i) acc += terms[i].second;
    if (acc != 0.0) terms[out++] = {k, acc};
  }
  terms.resize(out);
}

double LinearForm::evaluate(std::span<const double> u) const {
  double acc = constant;
  for (const auto& [k, v] : terms) acc += v * u[k];
  return acc;
}

ComplexForm& ComplexForm::operator*=(cplx s) {
  const double a = s.real();
  const double b = s.imag();
  if (b == 0.0) {
    re *= a;
    im *= a;
    return *this;
  }
  // (re + i im)(a + i b) = (a re - b im) + i (b re + a im)
  LinearForm new_re = re * a - im * b;
  LinearForm new_im = re * b + im * a;
  re = std::move(new_re);
  im = std::move(new_im);
  return *this;
}

AffineMatrix AffineMatrix::constant(const CMatrix& m) {
  AffineMatrix out(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) = ComplexForm(m(i, j));
  return out;
}

AffineMatrix AffineMatrix::scaled_variable(const CMatrix& m, std::size_t index) {
  AffineMatrix out(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) {
      const cplx v = m(i, j);
      if (v.real() != 0.0) out(i, j).re.terms.emplace_back(index, v.real());
      if (v.imag() != 0.0) out(i, j).im.terms.emplace_back(index, v.imag());
    }
  return out;
}

AffineMatrix AffineMatrix::identity_times(std::size_t n, const LinearForm& f) {
  AffineMatrix out(n, n);
  for (std::size_t i = 0; i < n; ++i) out(i, i).re = f;
  return out;
}

AffineMatrix AffineMatrix::from_blocks(const std::vector<std::vector<AffineMatrix>>& blocks) {
  if (blocks.empty()) return {};
  std::vector<std::size_t> row_sizes;
  std::vector<std::size_t> col_sizes;
  for (const auto& row : blocks) {
    if (row.size() != blocks.front().size()) throw DimensionError("from_blocks: ragged blocks");
    row_sizes.push_back(row.front().rows());
  }
  for (const auto& b : blocks.front()) col_sizes.push_back(b.cols());
  std::size_t total_rows = 0;
  std::size_t total_cols = 0;
  for (auto r : row_sizes) total_rows += r;
  for (auto c : col_sizes) total_cols += c;
  AffineMatrix out(total_rows, total_cols);
  std::size_t r0 = 0;
  for (std::size_t bi = 0; bi < blocks.size(); ++bi) {
    std::size_t c0 = 0;
    for (std::size_t bj = 0; bj < blocks[bi].size(); ++bj) {
      const auto& b = blocks[bi][bj];
      if (b.rows() != row_sizes[bi] || b.cols() != col_sizes[bj]) {
        throw DimensionError("from_blocks: inconsistent block sizes");
      }
      for (std::size_t i = 0; i < b.rows(); ++i)
        for (std::size_t j = 0; j < b.cols(); ++j) out(r0 + i, c0 + j) = b(i, j);
      c0 += col_sizes[bj];
    }
    r0 += row_sizes[bi];
  }
  return out;
}

AffineMatrix& AffineMatrix::operator+=(const AffineMatrix& o) {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw DimensionError("AffineMatrix: shape mismatch");
  for (std::size_t k = 0; k < e_.size(); ++k) e_[k] += o.e_[k];
  return *this;
}

AffineMatrix& AffineMatrix::operator-=(const AffineMatrix& o) {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw DimensionError("AffineMatrix: shape mismatch");
  for (std::size_t k = 0; k < e_.size(); ++k) e_[k] -= o.e_[k];
  return *this;
}

AffineMatrix& AffineMatrix::operator*=(cplx s) {
  for (auto& f : e_) f *= s;
  return *this;
}

AffineMatrix AffineMatrix::adjoint() const {
  AffineMatrix out(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) out(j, i) = (*this)(i, j).conj();
  return out;
}

AffineMatrix AffineMatrix::partial_trace(const DimVector& dims,
                                         std::span<const std::size_t> keep) const {
  if (rows_ != cols_) throw DimensionError("partial_trace: expression is not square");
  if (dims.product() != rows_) {
    throw DimensionError("partial_trace: product of dims does not match matrix dimension");
  }
  const auto map = detail::make_trace_index_map(dims, keep);
  AffineMatrix out(map.kept_dim, map.kept_dim);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c)
      if (map.traced[r] == map.traced[c]) out(map.kept[r], map.kept[c]) += (*this)(r, c);
  for (auto& f : out.e_) {
    f.re.compress();
    f.im.compress();
  }
  return out;
}

CMatrix AffineMatrix::evaluate(std::span<const double> u) const {
  CMatrix out(rows_, cols_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) out(i, j) = (*this)(i, j).evaluate(u);
  return out;
}

MatrixVar ConicProblem::add_hermitian(std::string name, std::size_t dim) {
  if (dim == 0) throw DimensionError("add_hermitian: dimension must be positive");
  VarInfo v;
  v.name = std::move(name);
  v.rows = v.cols = dim;
  v.hermitian = true;
  v.offset = num_unknowns_;
  v.count = dim * dim;
  v.expr = AffineMatrix(dim, dim);
  std::size_t k = v.offset;
  for (std::size_t i = 0; i < dim; ++i) v.expr(i, i).re = LinearForm::variable(k++);
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = i + 1; j < dim; ++j) {
      const std::size_t kr = k++;
      const std::size_t ki = k++;
      v.expr(i, j) = ComplexForm(LinearForm::variable(kr), LinearForm::variable(ki));
      v.expr(j, i) = ComplexForm(LinearForm::variable(kr), LinearForm::variable(ki, -1.0));
    }
  num_unknowns_ = k;
  vars_.push_back(std::move(v));
  return MatrixVar{vars_.size() - 1};
}

MatrixVar ConicProblem::add_complex(std::string name, std::size_t rows, std::size_t cols) {
  if (rows == 0 || cols == 0) throw DimensionError("add_complex: dimensions must be positive");
  VarInfo v;
  v.name = std::move(name);
  v.rows = rows;
  v.cols = cols;
  v.hermitian = false;
  v.offset = num_unknowns_;
  v.count = 2 * rows * cols;
  v.expr = AffineMatrix(rows, cols);
  std::size_t k = v.offset;
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) {
      const std::size_t kr = k++;
      const std::size_t ki = k++;
      v.expr(i, j) = ComplexForm(LinearForm::variable(kr), LinearForm::variable(ki));
    }
  num_unknowns_ = k;
  vars_.push_back(std::move(v));
  return MatrixVar{vars_.size() - 1};
}

std::size_t ConicProblem::add_scalar(std::string name) {
  scalar_names_.push_back(name);
  scalars_.emplace_back(std::move(name), num_unknowns_);
  return num_unknowns_++;
}

void ConicProblem::check_form(const LinearForm& f) const {
  for (const auto& [k, v] : f.terms) {
    if (k >= num_unknowns_) throw InvalidArgument("constraint references an unknown variable");
    if (!std::isfinite(v)) throw InvalidArgument("non-finite coefficient");
  }
  if (!std::isfinite(f.constant)) throw InvalidArgument("non-finite constant");
}

void ConicProblem::add_equality(LinearForm f) {
  f.compress();
  check_form(f);
  equalities_.push_back(std::move(f));
}

void ConicProblem::add_hermitian_equality(const AffineMatrix& lhs, const CMatrix& rhs) {
  if (lhs.rows() != rhs.rows() || lhs.cols() != rhs.cols() || lhs.rows() != lhs.cols()) {
    throw DimensionError("add_hermitian_equality: shape mismatch");
  }
  for (std::size_t i = 0; i < lhs.rows(); ++i) {
    add_equality(lhs(i, i).re - LinearForm(rhs(i, i).real()));
    for (std::size_t j = i + 1; j < lhs.cols(); ++j) {
      add_equality(lhs(i, j).re - LinearForm(rhs(i, j).real()));
      add_equality(lhs(i, j).im - LinearForm(rhs(i, j).imag()));
    }
  }
}

void ConicProblem::add_complex_equality(const AffineMatrix& lhs, const CMatrix& rhs) {
  if (lhs.rows() != rhs.rows() || lhs.cols() != rhs.cols()) {
    throw DimensionError("add_complex_equality: shape mismatch");
  }
  for (std::size_t i = 0; i < lhs.rows(); ++i)
    for (std::size_t j = 0; j < lhs.cols(); ++j) {
      add_equality(lhs(i, j).re - LinearForm(rhs(i, j).real()));
      add_equality(lhs(i, j).im - LinearForm(rhs(i, j).imag()));
    }
}

void ConicProblem::add_psd(AffineMatrix expr, std::string label) {
  if (expr.rows() != expr.cols() || expr.rows() == 0) {
    throw DimensionError("add_psd: expression must be square and non-empty");
  }
  for (std::size_t i = 0; i < expr.rows(); ++i)
    for (std::size_t j = i; j < expr.cols(); ++j) {
      expr(i, j).re.compress();
      expr(i, j).im.compress();
      check_form(expr(i, j).re);
      check_form(expr(i, j).im);
    }
  psd_.push_back({std::move(expr), std::move(label)});
}

void ConicProblem::set_objective(LinearForm f, Sense sense) {
  f.compress();
  check_form(f);
  objective_ = Objective{std::move(f), sense};
}

const char* to_string(Status s) {
  switch (s) {
    case Status::Optimal: return "Optimal";
    case Status::Feasible: return "Feasible";
    case Status::Infeasible: return "Infeasible";
    case Status::Unknown: return "Unknown";
  }
  return "Unknown";
}

CMatrix SolveOutcome::value(const ConicProblem& p, MatrixVar v) const {
  if (!has_point()) throw SolverUnknown("no solution point available");
  return p.expr(v).evaluate(values);
}

HermitianMatrix SolveOutcome::hermitian_value(const ConicProblem& p, MatrixVar v) const {
  return HermitianMatrix(value(p, v));
}

std::map<std::string, CMatrix> SolveOutcome::assignment(const ConicProblem& p) const {
  std::map<std::string, CMatrix> out;
  if (!has_point()) return out;
  for (const auto& v : p.variables()) out[v.name] = v.expr.evaluate(values);
  return out;
}

CMatrix embed_real(const CMatrix& h) {
  if (!h.is_square()) throw DimensionError("embed_real: matrix is not square");
  const std::size_t d = h.rows();
  CMatrix out(2 * d, 2 * d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) {
      const double re = h(i, j).real();
      const double im = h(i, j).imag();
      out(i, j) = re;
      out(i + d, j + d) = re;
      out(i + d, j) = im;
      out(i, j + d) = -im;
    }
  return out;
}

AffineMatrix embed_real(const AffineMatrix& h) {
  if (h.rows() != h.cols()) throw DimensionError("embed_real: expression is not square");
  const std::size_t d = h.rows();
  AffineMatrix out(2 * d, 2 * d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) {
      const auto& f = h(i, j);
      out(i, j).re = f.re;
      out(i + d, j + d).re = f.re;
      out(i + d, j).re = f.im;
      out(i, j + d).re = LinearForm() - f.im;
    }
  return out;
}

}  // namespace steercert::sdp
