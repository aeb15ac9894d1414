// Infeasible primal-dual path-following method (HKM direction, Mehrotra
// predictor-corrector) for the real block form produced by lower().
//
// Primal (in u):  min c.u   s.t.  S = G0 + sum_j u_j G_j  PSD,  E u = e
// Dual:           max -<G0, X> + e.w   s.t.  <G_j, X> + (E^T w)_j = c_j,  X PSD
//
// Each Newton step solves the KKT system
//   [ M  E^T ] [ du ]   [ h   ]
//   [ E  0   ] [ -dw] = [ r_e ]
// with M_ij = <G_i, X G_j S^-1>.

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include "lowering.hpp"

namespace steercert::sdp {

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;
using detail::LoweredBlock;
using detail::LoweredProblem;

struct EqualitySystem {
  MatrixXd E;  // independent rows only
  VectorXd e;
  VectorXd particular;  // minimum-norm solution of E u = e
  double inconsistency = 0.0;
};

EqualitySystem reduce_equalities(const std::vector<LinearForm>& eqs, int m) {
  EqualitySystem sys;
  const int p = static_cast<int>(eqs.size());
  sys.particular = VectorXd::Zero(m);
  if (p == 0) {
    sys.E.resize(0, m);
    sys.e.resize(0);
    return sys;
  }
  MatrixXd E = MatrixXd::Zero(p, m);
  VectorXd e(p);
  for (int r = 0; r < p; ++r) {
    for (const auto& [k, v] : eqs[r].terms) E(r, static_cast<Eigen::Index>(k)) += v;
    e(r) = -eqs[r].constant;
  }
  // Row scaling keeps the rank decision independent of how constraints were written.
  for (int r = 0; r < p; ++r) {
    const double nrm = E.row(r).norm();
    if (nrm > 0) {
      E.row(r) /= nrm;
      e(r) /= nrm;
    }
  }
  Eigen::ColPivHouseholderQR<MatrixXd> qr(E.transpose());
  qr.setThreshold(1e-10);
  const int rank = static_cast<int>(qr.rank());
  std::vector<int> keep(rank);
  for (int i = 0; i < rank; ++i) keep[i] = qr.colsPermutation().indices()(i);
  std::sort(keep.begin(), keep.end());
  sys.E.resize(rank, m);
  sys.e.resize(rank);
  for (int i = 0; i < rank; ++i) {
    sys.E.row(i) = E.row(keep[i]);
    sys.e(i) = e(keep[i]);
  }
  if (rank > 0) {
    // Minimum-norm solution through a QR of E^T.
    Eigen::HouseholderQR<MatrixXd> q2(sys.E.transpose());
    const MatrixXd R = q2.matrixQR().topRows(rank).triangularView<Eigen::Upper>();
    VectorXd y = R.transpose().triangularView<Eigen::Lower>().solve(sys.e);
    VectorXd full = VectorXd::Zero(m);
    full.head(rank) = y;
    sys.particular = q2.householderQ() * full;
  }
  // Rows dropped as dependent must still be satisfied.
  sys.inconsistency = p > 0 ? (E * sys.particular - e).cwiseAbs().maxCoeff() : 0.0;
  return sys;
}

// Largest alpha with X + alpha dX PSD (infinity if unbounded).
double max_step(const MatrixXd& X, const MatrixXd& dX) {
  Eigen::LLT<MatrixXd> llt(X);
  if (llt.info() != Eigen::Success) return 0.0;
  const MatrixXd& L = llt.matrixL();
  MatrixXd Y = L.triangularView<Eigen::Lower>().solve(dX);
  Y = L.triangularView<Eigen::Lower>().solve(Y.transpose()).transpose();
  Y = 0.5 * (Y + Y.transpose());
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(Y, Eigen::EigenvaluesOnly);
  const double lmin = es.eigenvalues()(0);
  if (lmin >= 0) return std::numeric_limits<double>::infinity();
  return -1.0 / lmin;
}

double sparse_trace(const detail::SparseSym& g, const MatrixXd& A) {
  // Frobenius product <G, A>.
  double acc = 0.0;
  for (std::size_t k = 0; k < g.vals.size(); ++k) acc += g.vals[k] * A(g.rows[k], g.cols[k]);
  return acc;
}

// tr(G T) for a general square T.
double sparse_trace_product(const detail::SparseSym& g, const MatrixXd& T) {
  double acc = 0.0;
  for (std::size_t k = 0; k < g.vals.size(); ++k) acc += g.vals[k] * T(g.cols[k], g.rows[k]);
  return acc;
}

void add_scaled(MatrixXd& A, const detail::SparseSym& g, double s) {
  for (std::size_t k = 0; k < g.vals.size(); ++k) A(g.rows[k], g.cols[k]) += s * g.vals[k];
}

class InteriorPoint {
 public:
  InteriorPoint(const LoweredProblem& lp, const EqualitySystem& eq, const SolverConfig& cfg)
      : lp_(lp), eq_(eq), cfg_(cfg), m_(lp.num_unknowns), p_(static_cast<int>(eq.E.rows())) {}

  struct Result {
    VectorXd u;
    double pobj = 0.0;
    double dobj = 0.0;
    double relgap = 0.0;
    double pinf = 0.0;
    double dinf = 0.0;
    double einf = 0.0;
    int iterations = 0;
    bool converged = false;
    std::string message;
  };

  Result run();

 private:
  void initialise();
  void compute_residuals();
  void factor_kkt();
  void solve_direction(const std::vector<MatrixXd>& Rc, VectorXd& du, VectorXd& dw,
                       std::vector<MatrixXd>& dX, std::vector<MatrixXd>& dS);

  const LoweredProblem& lp_;
  const EqualitySystem& eq_;
  const SolverConfig& cfg_;
  int m_;
  int p_;

  VectorXd u_;
  VectorXd w_;
  std::vector<MatrixXd> X_;
  std::vector<MatrixXd> S_;
  std::vector<MatrixXd> Sinv_;
  std::vector<MatrixXd> Rp_;  // S - G(u)
  VectorXd rd_;
  VectorXd re_;
  double pobj_ = 0.0;
  double dobj_ = 0.0;
  double mu_ = 0.0;
  int total_dim_ = 0;
  double norm_g0_ = 0.0;
  double norm_c_ = 0.0;
  double norm_e_ = 0.0;

  bool use_sparse_ = false;
  Eigen::PartialPivLU<MatrixXd> dense_lu_;
  Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> sparse_lu_;
  std::vector<std::vector<int>> block_vars_;  // var ids per block
};

void InteriorPoint::initialise() {
  const auto nb = lp_.blocks.size();
  X_.resize(nb);
  S_.resize(nb);
  Sinv_.resize(nb);
  Rp_.resize(nb);
  block_vars_.resize(nb);
  total_dim_ = 0;
  norm_c_ = lp_.c.norm();
  norm_e_ = eq_.e.size() ? eq_.e.cwiseAbs().maxCoeff() : 0.0;
  double g0sq = 0.0;
  for (std::size_t b = 0; b < nb; ++b) {
    const auto& blk = lp_.blocks[b];
    const int n = blk.dim;
    total_dim_ += n;
    g0sq += blk.g0.squaredNorm();
    double max_g = 0.0;
    double xi_ratio = 0.0;
    for (const auto& g : blk.vars) {
      double sq = 0.0;
      for (double v : g.vals) sq += v * v;
      const double gn = std::sqrt(sq);
      max_g = std::max(max_g, gn);
      xi_ratio = std::max(xi_ratio, (1.0 + std::abs(lp_.c(g.var))) / (1.0 + gn));
      block_vars_[b].push_back(g.var);
    }
    const double sn = std::sqrt(static_cast<double>(n));
    const double xi = std::max({10.0, sn, sn * xi_ratio});
    const double eta = std::max({10.0, sn, blk.g0.norm(), max_g});
    X_[b] = xi * MatrixXd::Identity(n, n);
    S_[b] = eta * MatrixXd::Identity(n, n);
  }
  norm_g0_ = std::sqrt(g0sq);
  u_ = eq_.particular;
  w_ = VectorXd::Zero(p_);

  // Decide the KKT factorisation from the fill of M.
  // Upper bound for nnz(K): sum over blocks of (#vars in block)^2 plus E.
  std::size_t nnz = 2 * static_cast<std::size_t>(eq_.E.size());
  for (const auto& bv : block_vars_) nnz += bv.size() * bv.size();
  const double n_kkt = static_cast<double>(m_ + p_);
  use_sparse_ = n_kkt > 600 && static_cast<double>(nnz) < 0.15 * n_kkt * n_kkt;
}

void InteriorPoint::compute_residuals() {
  const auto nb = lp_.blocks.size();
  pobj_ = lp_.c.dot(u_) + lp_.c0;
  dobj_ = lp_.c0 + (p_ ? eq_.e.dot(w_) : 0.0);
  rd_ = lp_.c;
  if (p_) rd_ -= eq_.E.transpose() * w_;
  mu_ = 0.0;
  for (std::size_t b = 0; b < nb; ++b) {
    const auto& blk = lp_.blocks[b];
    MatrixXd G = blk.g0;
    for (const auto& g : blk.vars) add_scaled(G, g, u_(g.var));
    Rp_[b] = S_[b] - G;
    dobj_ -= (blk.g0.array() * X_[b].array()).sum();
    for (const auto& g : blk.vars) rd_(g.var) -= sparse_trace(g, X_[b]);
    mu_ += (X_[b].array() * S_[b].array()).sum();
  }
  mu_ /= std::max(1, total_dim_);
  re_ = p_ ? VectorXd(eq_.e - eq_.E * u_) : VectorXd();
}

void InteriorPoint::factor_kkt() {
  const auto nb = lp_.blocks.size();
  MatrixXd M = MatrixXd::Zero(m_, m_);
  for (std::size_t b = 0; b < nb; ++b) {
    const auto& blk = lp_.blocks[b];
    const MatrixXd& X = X_[b];
    const MatrixXd& Si = Sinv_[b];
    const int n = blk.dim;
    MatrixXd Q(n, n);
    for (const auto& gi : blk.vars) {
      // Q = X G_i S^-1
      Q.setZero();
      if (gi.vals.size() * static_cast<std::size_t>(n) > 2 * static_cast<std::size_t>(n) * n) {
        MatrixXd G = MatrixXd::Zero(n, n);
        add_scaled(G, gi, 1.0);
        Q.noalias() = X * G * Si;
      } else {
        for (std::size_t k = 0; k < gi.vals.size(); ++k)
          Q.noalias() += gi.vals[k] * X.col(gi.rows[k]) * Si.row(gi.cols[k]);
      }
      for (const auto& gj : blk.vars) M(gj.var, gi.var) += sparse_trace_product(gj, Q);
    }
  }
  M = 0.5 * (M + M.transpose());
  // Unknowns absent from every block would make M singular.
  for (int i = 0; i < m_; ++i)
    if (M(i, i) <= 0) M(i, i) = 1e-12;

  const int n = m_ + p_;
  if (use_sparse_) {
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(static_cast<std::size_t>(n) * 8);
    for (int j = 0; j < m_; ++j)
      for (int i = 0; i < m_; ++i)
        if (M(i, j) != 0.0) trip.emplace_back(i, j, M(i, j));
    for (int r = 0; r < p_; ++r)
      for (int j = 0; j < m_; ++j) {
        const double v = eq_.E(r, j);
        if (v != 0.0) {
          trip.emplace_back(m_ + r, j, v);
          trip.emplace_back(j, m_ + r, v);
        }
      }
    Eigen::SparseMatrix<double> K(n, n);
    K.setFromTriplets(trip.begin(), trip.end());
    K.makeCompressed();
    sparse_lu_.compute(K);
    if (sparse_lu_.info() != Eigen::Success) {
      use_sparse_ = false;
    } else {
      return;
    }
  }
  MatrixXd K = MatrixXd::Zero(n, n);
  K.topLeftCorner(m_, m_) = M;
  if (p_) {
    K.block(0, m_, m_, p_) = eq_.E.transpose();
    K.block(m_, 0, p_, m_) = eq_.E;
  }
  dense_lu_.compute(K);
}

void InteriorPoint::solve_direction(const std::vector<MatrixXd>& Rc, VectorXd& du, VectorXd& dw,
                                    std::vector<MatrixXd>& dX, std::vector<MatrixXd>& dS) {
  const auto nb = lp_.blocks.size();
  VectorXd rhs(m_ + p_);
  rhs.head(m_) = -rd_;
  for (std::size_t b = 0; b < nb; ++b) {
    const MatrixXd T = (Rc[b] + X_[b] * Rp_[b]) * Sinv_[b];
    for (const auto& g : lp_.blocks[b].vars) rhs(g.var) += sparse_trace_product(g, T);
  }
  if (p_) rhs.tail(p_) = re_;
  VectorXd sol = use_sparse_ ? VectorXd(sparse_lu_.solve(rhs)) : VectorXd(dense_lu_.solve(rhs));
  if (!sol.allFinite()) throw NumericalBreakdown("KKT solve produced non-finite values");
  du = sol.head(m_);
  dw = p_ ? VectorXd(-sol.tail(p_)) : VectorXd();
  dX.resize(nb);
  dS.resize(nb);
  for (std::size_t b = 0; b < nb; ++b) {
    MatrixXd d = -Rp_[b];
    for (const auto& g : lp_.blocks[b].vars) add_scaled(d, g, du(g.var));
    dS[b] = d;
    MatrixXd T = (Rc[b] - X_[b] * d) * Sinv_[b];
    dX[b] = 0.5 * (T + T.transpose());
  }
}

InteriorPoint::Result InteriorPoint::run() {
  initialise();
  Result res;
  const auto nb = lp_.blocks.size();
  double prev_alpha = 1.0;
  int stall = 0;
  for (int iter = 0;; ++iter) {
    compute_residuals();
    res.pobj = pobj_;
    res.dobj = dobj_;
    res.relgap = std::abs(pobj_ - dobj_) / (1.0 + std::abs(pobj_) + std::abs(dobj_));
    double rp = 0.0;
    for (const auto& R : Rp_) rp += R.squaredNorm();
    res.pinf = std::sqrt(rp) / (1.0 + norm_g0_);
    res.dinf = rd_.norm() / (1.0 + norm_c_);
    res.einf = p_ ? re_.cwiseAbs().maxCoeff() / (1.0 + norm_e_) : 0.0;
    res.iterations = iter;
    res.u = u_;
    if (res.relgap <= cfg_.eps_gap && res.pinf <= cfg_.eps_feas && res.dinf <= cfg_.eps_feas &&
        res.einf <= cfg_.eps_feas) {
      res.converged = true;
      res.message = "converged";
      return res;
    }
    if (iter >= cfg_.max_iters) {
      res.message = "iteration limit reached";
      return res;
    }
    if (u_.cwiseAbs().maxCoeff() > 1e12) {
      res.message = "iterates diverged (problem may be infeasible or unbounded)";
      return res;
    }
    bool factor_ok = true;
    for (std::size_t b = 0; b < nb; ++b) {
      Eigen::LLT<MatrixXd> llt(S_[b]);
      if (llt.info() != Eigen::Success) {
        factor_ok = false;
        break;
      }
      Sinv_[b] = llt.solve(MatrixXd::Identity(S_[b].rows(), S_[b].cols()));
      Sinv_[b] = 0.5 * (Sinv_[b] + Sinv_[b].transpose());
    }
    if (!factor_ok) throw NumericalBreakdown("slack matrix lost positive definiteness");
    factor_kkt();

    // Predictor.
    std::vector<MatrixXd> Rc(nb);
    for (std::size_t b = 0; b < nb; ++b) Rc[b] = -X_[b] * S_[b];
    VectorXd du;
    VectorXd dw;
    std::vector<MatrixXd> dX;
    std::vector<MatrixXd> dS;
    solve_direction(Rc, du, dw, dX, dS);
    double ax = std::numeric_limits<double>::infinity();
    double as = std::numeric_limits<double>::infinity();
    for (std::size_t b = 0; b < nb; ++b) {
      ax = std::min(ax, max_step(X_[b], dX[b]));
      as = std::min(as, max_step(S_[b], dS[b]));
    }
    ax = std::min(1.0, ax);
    as = std::min(1.0, as);
    double mu_aff = 0.0;
    for (std::size_t b = 0; b < nb; ++b)
      mu_aff += ((X_[b] + ax * dX[b]).array() * (S_[b] + as * dS[b]).array()).sum();
    mu_aff /= std::max(1, total_dim_);
    const double ratio = std::clamp(mu_aff / std::max(mu_, 1e-300), 0.0, 1.0);
    const double expo = std::max(1.0, 3.0 * std::min(ax, as) * std::min(ax, as));
    const double sigma = std::pow(ratio, expo);

    // Corrector.
    for (std::size_t b = 0; b < nb; ++b)
      Rc[b] = sigma * mu_ * MatrixXd::Identity(X_[b].rows(), X_[b].cols()) - X_[b] * S_[b] -
              dX[b] * dS[b];
    std::vector<MatrixXd> dXc;
    std::vector<MatrixXd> dSc;
    solve_direction(Rc, du, dw, dXc, dSc);
    ax = std::numeric_limits<double>::infinity();
    as = std::numeric_limits<double>::infinity();
    for (std::size_t b = 0; b < nb; ++b) {
      ax = std::min(ax, max_step(X_[b], dXc[b]));
      as = std::min(as, max_step(S_[b], dSc[b]));
    }
    const double gamma = 0.9 + 0.09 * std::min(std::min(ax, as), 1.0);
    ax = std::min(1.0, gamma * ax);
    as = std::min(1.0, gamma * as);
    for (std::size_t b = 0; b < nb; ++b) {
      X_[b] += ax * dXc[b];
      S_[b] += as * dSc[b];
      X_[b] = 0.5 * (X_[b] + X_[b].transpose());
      S_[b] = 0.5 * (S_[b] + S_[b].transpose());
    }
    if (p_) w_ += ax * dw;
    u_ += as * du;

    const double alpha = std::min(ax, as);
    stall = (alpha < 1e-8 && prev_alpha < 1e-8) ? stall + 1 : 0;
    prev_alpha = alpha;
    if (stall >= 3) {
      compute_residuals();
      res.u = u_;
      res.pobj = pobj_;
      res.dobj = dobj_;
      res.iterations = iter + 1;
      res.message = "step length stalled";
      return res;
    }
  }
}

double min_eig_of(const CMatrix& m) {
  return min_eigenvalue(HermitianMatrix(m, std::numeric_limits<double>::infinity()));
}

}  // namespace

SolveOutcome solve(const ConicProblem& p, const SolverConfig& cfg) {
  if (cfg.eps_feas <= 0 || cfg.eps_gap <= 0 || cfg.max_iters <= 0) {
    throw InvalidArgument("SolverConfig entries must be positive");
  }
  const bool feasibility = !p.objective().has_value();
  const LoweredProblem lp = detail::lower(p, feasibility);
  const EqualitySystem eq = reduce_equalities(lp.equalities, lp.num_unknowns);

  SolveOutcome out;
  const double e_scale = 1.0 + (eq.e.size() ? eq.e.cwiseAbs().maxCoeff() : 0.0);
  if (eq.inconsistency > 1e3 * cfg.eps_feas * e_scale) {
    out.status = Status::Infeasible;
    out.diagnostics.certificate_residual = 0.0;
    out.diagnostics.equality_residual = eq.inconsistency;
    out.diagnostics.message = "equality constraints are inconsistent";
    out.values.assign(p.num_unknowns(), 0.0);
    return out;
  }

  if (lp.blocks.empty()) {
    // Pure linear system: any particular solution will do.
    out.values.assign(eq.particular.data(), eq.particular.data() + p.num_unknowns());
    out.status = feasibility ? Status::Feasible : Status::Unknown;
    if (!feasibility && lp.c.norm() == 0) out.status = Status::Optimal;
    out.diagnostics.message = "no PSD constraints";
    return out;
  }

  InteriorPoint ipm(lp, eq, cfg);
  const auto r = ipm.run();

  out.values.assign(r.u.data(), r.u.data() + p.num_unknowns());
  auto& d = out.diagnostics;
  d.iterations = r.iterations;
  d.primal_residual = r.pinf;
  d.dual_residual = r.dinf;
  d.relative_gap = r.relgap;
  d.message = r.message;
  {
    double worst = 0.0;
    for (const auto& f : p.equalities()) worst = std::max(worst, std::abs(f.evaluate(out.values)));
    d.equality_residual = worst;
  }
  const double sgn = lp.maximize ? -1.0 : 1.0;
  d.dual_bound = sgn * r.dobj;

  double margin = std::numeric_limits<double>::infinity();
  for (const auto& c : p.psd_constraints())
    margin = std::min(margin, min_eig_of(c.expr.evaluate(out.values)));
  out.margin = margin;

  if (feasibility) {
    const double t = r.u(lp.slack);
    out.margin = t;
    const bool point_ok = margin >= -cfg.eps_feas && d.equality_residual <= cfg.eps_feas * e_scale;
    if (point_ok) {
      out.status = Status::Feasible;
    } else if (r.converged && *d.dual_bound < -cfg.eps_feas) {
      out.status = Status::Infeasible;
      d.certificate_residual = r.dinf;
    } else {
      out.status = Status::Unknown;
    }
    return out;
  }

  out.objective_value = sgn * r.pobj;
  const bool point_ok = margin >= -cfg.eps_feas && d.equality_residual <= cfg.eps_feas * e_scale;
  out.status = (r.converged && point_ok) ? Status::Optimal : Status::Unknown;
  return out;
}

}  // namespace steercert::sdp
