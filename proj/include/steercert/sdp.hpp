#pragma once

// Block-structured semidefinite programs over complex Hermitian matrix
// variables.
//
// A ConicProblem owns a vector u of real scalar unknowns. Matrix variables
// are views onto slices of u: a Hermitian d x d variable uses d real diagonal
// unknowns and d(d-1) unknowns for the real and imaginary parts of the strict
// upper triangle. Constraints and objective are affine in u.

#include <cstddef>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "steercert/matcore.hpp"

namespace steercert::sdp {

// constant + sum_k coeff_k * u[index_k]
struct LinearForm {
  std::vector<std::pair<std::size_t, double>> terms;
  double constant = 0.0;

  LinearForm() = default;
  explicit LinearForm(double c) : constant(c) {}
  static LinearForm variable(std::size_t index, double coeff = 1.0) {
    LinearForm f;
    f.terms.emplace_back(index, coeff);
    return f;
  }

  bool is_constant() const { return terms.empty(); }
  LinearForm& operator+=(const LinearForm& o);
  LinearForm& operator-=(const LinearForm& o);
  LinearForm& operator*=(double s);
  friend LinearForm operator+(LinearForm a, const LinearForm& b) { return a += b; }
  friend LinearForm operator-(LinearForm a, const LinearForm& b) { return a -= b; }
  friend LinearForm operator*(LinearForm a, double s) { return a *= s; }
  friend LinearForm operator*(double s, LinearForm a) { return a *= s; }

  // Merges repeated indices and drops zero coefficients.
  void compress();
  double evaluate(std::span<const double> u) const;
};

// Affine complex scalar.
struct ComplexForm {
  LinearForm re;
  LinearForm im;

  ComplexForm() = default;
  ComplexForm(LinearForm r, LinearForm i) : re(std::move(r)), im(std::move(i)) {}
  explicit ComplexForm(cplx c) : re(c.real()), im(c.imag()) {}

  ComplexForm& operator+=(const ComplexForm& o) {
    re += o.re;
    im += o.im;
    return *this;
  }
  ComplexForm& operator-=(const ComplexForm& o) {
    re -= o.re;
    im -= o.im;
    return *this;
  }
  ComplexForm& operator*=(cplx s);
  ComplexForm conj() const { return {re, LinearForm() - im}; }
  cplx evaluate(std::span<const double> u) const { return {re.evaluate(u), im.evaluate(u)}; }
};

// Complex matrix whose entries are affine in u.
class AffineMatrix {
 public:
  AffineMatrix() = default;
  AffineMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), e_(rows * cols) {}
  static AffineMatrix constant(const CMatrix& m);
  // m * u[index]
  static AffineMatrix scaled_variable(const CMatrix& m, std::size_t index);
  static AffineMatrix identity_times(std::size_t n, const LinearForm& f);
  static AffineMatrix from_blocks(const std::vector<std::vector<AffineMatrix>>& blocks);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  ComplexForm& operator()(std::size_t i, std::size_t j) { return e_[i * cols_ + j]; }
  const ComplexForm& operator()(std::size_t i, std::size_t j) const { return e_[i * cols_ + j]; }

  AffineMatrix& operator+=(const AffineMatrix& o);
  AffineMatrix& operator-=(const AffineMatrix& o);
  AffineMatrix& operator*=(cplx s);
  friend AffineMatrix operator+(AffineMatrix a, const AffineMatrix& b) { return a += b; }
  friend AffineMatrix operator-(AffineMatrix a, const AffineMatrix& b) { return a -= b; }
  friend AffineMatrix operator*(AffineMatrix a, cplx s) { return a *= s; }

  AffineMatrix adjoint() const;
  AffineMatrix partial_trace(const DimVector& dims, std::span<const std::size_t> keep) const;
  AffineMatrix partial_trace(const DimVector& dims, std::initializer_list<std::size_t> keep) const {
    return partial_trace(dims, std::span<const std::size_t>(keep.begin(), keep.size()));
  }
  CMatrix evaluate(std::span<const double> u) const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<ComplexForm> e_;
};

struct MatrixVar {
  std::size_t id = 0;
};

struct SolverConfig {
  double eps_feas = 1e-8;
  double eps_gap = 1e-8;
  int max_iters = 200;
};

enum class Sense { Minimize, Maximize };

class ConicProblem {
 public:
  MatrixVar add_hermitian(std::string name, std::size_t dim);
  // Unstructured complex rows x cols variable (2 * rows * cols unknowns).
  MatrixVar add_complex(std::string name, std::size_t rows, std::size_t cols);
  std::size_t add_scalar(std::string name);

  const AffineMatrix& expr(MatrixVar v) const { return vars_.at(v.id).expr; }
  LinearForm scalar(std::size_t index) const { return LinearForm::variable(index); }

  // f == 0.
  void add_equality(LinearForm f);
  // lhs == rhs on the upper triangle, diagonal real part only.
  void add_hermitian_equality(const AffineMatrix& lhs, const CMatrix& rhs);
  // lhs == rhs entrywise, real and imaginary parts.
  void add_complex_equality(const AffineMatrix& lhs, const CMatrix& rhs);

  // expr must be square; it is read as Hermitian from its upper triangle.
  void add_psd(AffineMatrix expr, std::string label = {});

  void set_objective(LinearForm f, Sense sense);
  void clear_objective() { objective_.reset(); }

  struct VarInfo {
    std::string name;
    std::size_t rows = 0;
    std::size_t cols = 0;
    bool hermitian = false;
    std::size_t offset = 0;
    std::size_t count = 0;
    AffineMatrix expr;
  };
  struct PsdConstraint {
    AffineMatrix expr;
    std::string label;
  };
  struct Objective {
    LinearForm f;
    Sense sense;
  };

  std::size_t num_unknowns() const { return num_unknowns_; }
  const std::vector<VarInfo>& variables() const { return vars_; }
  const std::vector<std::string>& scalar_names() const { return scalar_names_; }
  const std::vector<LinearForm>& equalities() const { return equalities_; }
  const std::vector<PsdConstraint>& psd_constraints() const { return psd_; }
  const std::optional<Objective>& objective() const { return objective_; }

 private:
  void check_form(const LinearForm& f) const;

  std::size_t num_unknowns_ = 0;
  std::vector<VarInfo> vars_;
  std::vector<std::pair<std::string, std::size_t>> scalars_;
  std::vector<std::string> scalar_names_;
  std::vector<LinearForm> equalities_;
  std::vector<PsdConstraint> psd_;
  std::optional<Objective> objective_;
};

enum class Status { Optimal, Feasible, Infeasible, Unknown };

const char* to_string(Status s);

struct Diagnostics {
  int iterations = 0;
  double primal_residual = 0.0;    // relative, PSD-side (slack) residual
  double dual_residual = 0.0;      // relative
  double equality_residual = 0.0;  // max |E u - e| at the returned point
  double relative_gap = 0.0;
  // Bound on the objective implied by the dual iterate (an upper bound for
  // maximisation, a lower bound for minimisation).
  std::optional<double> dual_bound;
  // Residual of the infeasibility certificate when status == Infeasible.
  std::optional<double> certificate_residual;
  std::string message;
};

struct SolveOutcome {
  Status status = Status::Unknown;
  std::vector<double> values;  // the unknown vector u
  std::optional<double> objective_value;
  // Smallest eigenvalue over all PSD constraints at the returned point. For
  // feasibility problems this is the optimal max-slack value.
  double margin = 0.0;
  Diagnostics diagnostics;

  bool has_point() const { return status == Status::Optimal || status == Status::Feasible; }
  CMatrix value(const ConicProblem& p, MatrixVar v) const;
  HermitianMatrix hermitian_value(const ConicProblem& p, MatrixVar v) const;
  double scalar(std::size_t index) const { return values.at(index); }
  // Evaluated variables keyed by name.
  std::map<std::string, CMatrix> assignment(const ConicProblem& p) const;
};

// [[Re H, -Im H], [Im H, Re H]]
CMatrix embed_real(const CMatrix& h);
AffineMatrix embed_real(const AffineMatrix& h);

// With an objective: Optimal on convergence, Unknown otherwise. Without an
// objective the problem is solved as "maximise t such that every PSD
// expression minus t*I is PSD" (t capped at 1) and classified Feasible iff
// t* >= -eps_feas; Infeasible requires a dual certificate bounding t below
// -eps_feas. Throws NumericalBreakdown on factorisation failure.
SolveOutcome solve(const ConicProblem& p, const SolverConfig& cfg = {});

// Sparse SDPA (.dat-s) export of the lowered real problem. Equalities become
// pairs of inequalities in a trailing diagonal block.
void write_sdpa(const ConicProblem& p, std::ostream& os);

}  // namespace steercert::sdp
