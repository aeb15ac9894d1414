#pragma once

// Real block-diagonal form of a ConicProblem:
//
//   minimise   c.u + c0
//   subject to S_b(u) = G0_b + sum_j u_j G_jb  PSD   for every block b
//              E u = e
//
// Complex PSD expressions are embedded as [[Re, -Im], [Im, Re]].

#include <vector>

#include <Eigen/Dense>

#include "steercert/sdp.hpp"

namespace steercert::sdp::detail {

struct SparseSym {
  int var = 0;
  // Full (both triangles) list of nonzeros of G_jb.
  std::vector<int> rows;
  std::vector<int> cols;
  std::vector<double> vals;
};

struct LoweredBlock {
  int dim = 0;
  Eigen::MatrixXd g0;
  std::vector<SparseSym> vars;  // sorted by var
  int source = -1;              // index into ConicProblem::psd_constraints(), -1 for added blocks
  bool embedded = false;
};

struct LoweredProblem {
  int num_unknowns = 0;
  int slack = -1;  // index of the max-slack unknown in feasibility mode
  std::vector<LoweredBlock> blocks;
  Eigen::VectorXd c;
  double c0 = 0.0;
  bool maximize = false;  // c was negated from a maximisation
  std::vector<LinearForm> equalities;
};

// feasibility_mode adds the slack unknown t, subtracts t*I from every block,
// appends the block 1 - t >= 0 and sets the objective to "maximise t".
LoweredProblem lower(const ConicProblem& p, bool feasibility_mode);

}  // namespace steercert::sdp::detail
