#pragma once

// Certification engines: the parent-state relaxation, scalar NPA for the
// Alices' correlations, LHS models and the level-1 operator hierarchy.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "steercert/model.hpp"
#include "steercert/sdp.hpp"

namespace steercert {

struct ParentAssemblage {
  std::map<ElementKey, HermitianMatrix> elements;  // on the composite Bob space
};

struct LambdaReport {
  double lambda_star = 0.0;
  ParentAssemblage parent;
  sdp::Status status = sdp::Status::Unknown;
  sdp::Diagnostics diagnostics;

  bool parent_exists(double eps_feas) const { return lambda_star >= -eps_feas; }
};

// The parent-state program:
//   maximise t  s.t.  sigma_{a|x} - t I PSD,
//                     tr_{all but k} sigma_{a|x} = sigma^(k)_{a|x},
//                     sigma_{a|x} no-signalling in every Alice.
// The problem is exposed so it can be exported.
struct LambdaProblem {
  sdp::ConicProblem problem;
  std::size_t t_index = 0;
  std::map<ElementKey, sdp::MatrixVar> parents;
};
LambdaProblem build_lambda_problem(const Assemblage& asm_);

// Throws SolverUnknown (with the diagnostics in the message) when the solver
// returns no usable point.
LambdaReport lambda_relaxation(const Assemblage& asm_, const sdp::SolverConfig& cfg = {});

enum class Verdict { QuantumCertified, PostquantumCertified, Inconclusive };
enum class Condition { Condition1_NPA, Condition2_Parent };

const char* to_string(Verdict v);
const char* to_string(Condition c);

struct NpaResult {
  sdp::Status status = sdp::Status::Unknown;  // Feasible, Infeasible or Unknown
  double margin = 0.0;                        // optimal max-slack t
  std::size_t moment_size = 0;
  sdp::Diagnostics diagnostics;
};

struct CertificationReport {
  Verdict verdict = Verdict::Inconclusive;
  std::optional<Condition> failed_condition;
  LambdaReport lambda;
  int npa_level_used = 0;  // 0 when the NPA check was skipped (one Alice)
  std::optional<NpaResult> npa;
};

CertificationReport certify(const Assemblage& asm_, int npa_level = 1,
                            const sdp::SolverConfig& cfg = {});

// Correlations p(a|x) over the Alices of `parties` (Bob fields ignored).
// Levels 1 and 2 are supported; others throw UnsupportedLevel.
NpaResult npa_membership(const ScenarioSpec& parties, const std::map<ElementKey, double>& p,
                         int level, const sdp::SolverConfig& cfg = {});
sdp::ConicProblem build_npa_problem(const ScenarioSpec& parties,
                                    const std::map<ElementKey, double>& p, int level);

struct LhsModel {
  // Deterministic strategy lambda: outcome for every (Alice, setting),
  // flattened Alice-major.
  std::vector<std::vector<std::size_t>> strategies;
  std::vector<double> weights;
  std::vector<std::vector<HermitianMatrix>> bob_states;  // [lambda][k], unit trace
};

struct LhsResult {
  sdp::Status status = sdp::Status::Unknown;
  double margin = 0.0;
  std::optional<LhsModel> model;  // present iff Feasible
  sdp::Diagnostics diagnostics;
};

// Enumerates at most 10^6 deterministic strategies (InvalidArgument beyond).
LhsResult lhs_membership(const Assemblage& asm_, const sdp::SolverConfig& cfg = {});

// Every deterministic strategy of the scenario, in the order used by LhsModel.
std::vector<std::vector<std::size_t>> deterministic_strategies(const ScenarioSpec& s);
// D_lambda(a|x) in {0, 1}.
bool strategy_outputs(const ScenarioSpec& s, const std::vector<std::size_t>& strategy,
                      const ElementKey& key);
// max over (a, x, k) of the entrywise deviation between the model's
// prediction and the assemblage.
double lhs_model_residual(const LhsModel& m, const Assemblage& asm_);

struct HierarchyResult {
  sdp::Status status = sdp::Status::Unknown;
  double margin = 0.0;
  std::size_t monomials = 0;
  sdp::Diagnostics diagnostics;
};

// Level 1 only; other levels throw UnsupportedLevel.
HierarchyResult outer_hierarchy_membership(const Assemblage& asm_, int level,
                                           const sdp::SolverConfig& cfg = {});

}  // namespace steercert
