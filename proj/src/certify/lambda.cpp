#include <sstream>

#include "parent_constraints.hpp"
#include "steercert/certify.hpp"

namespace steercert {

namespace {

using sdp::AffineMatrix;
using sdp::LinearForm;

std::string describe(const sdp::SolveOutcome& o) {
  std::ostringstream os;
  os << "solver returned " << sdp::to_string(o.status) << " after " << o.diagnostics.iterations
     << " iterations (" << o.diagnostics.message << "; primal residual "
     << o.diagnostics.primal_residual << ", dual residual " << o.diagnostics.dual_residual
     << ", gap " << o.diagnostics.relative_gap << ")";
  return os.str();
}

}  // namespace

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::QuantumCertified: return "QuantumCertified";
    case Verdict::PostquantumCertified: return "PostquantumCertified";
    case Verdict::Inconclusive: return "Inconclusive";
  }
  return "Inconclusive";
}

const char* to_string(Condition c) {
  return c == Condition::Condition1_NPA ? "Condition1_NPA" : "Condition2_Parent";
}

LambdaProblem build_lambda_problem(const Assemblage& asm_) {
  asm_.require_complete();
  const auto& s = asm_.scenario();
  const std::size_t D = s.bob_total_dim();
  const DimVector bdims = s.bob_dim_vector();

  LambdaProblem lp;
  auto& p = lp.problem;
  lp.t_index = p.add_scalar("t");
  for (const auto& key : all_keys(s))
    lp.parents.emplace(key, p.add_hermitian("sigma " + to_string(key), D));

  const AffineMatrix tI = AffineMatrix::identity_times(D, p.scalar(lp.t_index));
  for (const auto& [key, var] : lp.parents) {
    const AffineMatrix& e = p.expr(var);
    p.add_psd(e - tI, "parent " + to_string(key));
    for (std::size_t k = 0; k < s.num_bobs; ++k) {
      const CMatrix& target = asm_.element(key, k).matrix();
      if (s.num_bobs == 1) {
        p.add_hermitian_equality(e, target);
      } else {
        p.add_hermitian_equality(e.partial_trace(bdims, {k}), target);
      }
    }
  }

  detail::add_parent_no_signalling(p, s, lp.parents);
  p.set_objective(p.scalar(lp.t_index), sdp::Sense::Maximize);
  return lp;
}

LambdaReport lambda_relaxation(const Assemblage& asm_, const sdp::SolverConfig& cfg) {
  const LambdaProblem lp = build_lambda_problem(asm_);
  const sdp::SolveOutcome o = sdp::solve(lp.problem, cfg);
  if (!o.has_point()) throw SolverUnknown("lambda relaxation: " + describe(o));
  LambdaReport r;
  r.lambda_star = *o.objective_value;
  r.status = o.status;
  r.diagnostics = o.diagnostics;
  for (const auto& [key, var] : lp.parents)
    r.parent.elements.emplace(key, o.hermitian_value(lp.problem, var));
  return r;
}

CertificationReport certify(const Assemblage& asm_, int npa_level, const sdp::SolverConfig& cfg) {
  if (npa_level < 1) throw InvalidArgument("certify: npa_level must be at least 1");
  CertificationReport rep;
  const auto& s = asm_.scenario();
  if (s.num_alices >= 2) {
    rep.npa = npa_membership(s, joint_probabilities(asm_), npa_level, cfg);
    rep.npa_level_used = npa_level;
  }
  rep.lambda = lambda_relaxation(asm_, cfg);
  const bool npa_failed = rep.npa && rep.npa->status == sdp::Status::Infeasible;
  const bool parent_failed = !rep.lambda.parent_exists(cfg.eps_feas);
  if (npa_failed) {
    rep.verdict = Verdict::PostquantumCertified;
    rep.failed_condition = Condition::Condition1_NPA;
  } else if (parent_failed) {
    rep.verdict = Verdict::PostquantumCertified;
    rep.failed_condition = Condition::Condition2_Parent;
  } else if (s.num_alices == 1) {
    rep.verdict = Verdict::QuantumCertified;
  } else {
    rep.verdict = Verdict::Inconclusive;
  }
  return rep;
}

}  // namespace steercert
