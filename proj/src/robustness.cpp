#include "steercert/robustness.hpp"

#include <algorithm>

#include "certify/parent_constraints.hpp"

namespace steercert {

using sdp::AffineMatrix;
using sdp::LinearForm;

Assemblage mix(const Assemblage& noise, const Assemblage& a, double r) {
  if (!(r >= 0.0 && r <= 1.0)) throw InvalidArgument("mix: weight must lie in [0, 1]");
  if (!(noise.scenario() == a.scenario())) throw InvalidArgument("mix: scenarios differ");
  a.require_complete();
  noise.require_complete();
  Assemblage::Elements e;
  for (const auto& [key, bobs] : a.elements()) {
    const auto& nb = noise.element(key);
    std::vector<HermitianMatrix> out;
    for (std::size_t k = 0; k < bobs.size(); ++k)
      out.push_back(HermitianMatrix(nb[k].matrix() * cplx(r) + bobs[k].matrix() * cplx(1.0 - r)));
    e.emplace(key, std::move(out));
  }
  return Assemblage(a.scenario(), std::move(e));
}

const char* to_string(NoiseKind k) {
  switch (k) {
    case NoiseKind::White: return "white";
    case NoiseKind::GHZ: return "ghz";
    case NoiseKind::W: return "w";
  }
  return "custom";
}

RobustnessResult robustness(const Assemblage& asm_, const Assemblage& noise,
                            const std::string& label, const sdp::SolverConfig& cfg) {
  if (!(noise.scenario() == asm_.scenario()))
    throw InvalidArgument("robustness: noise and assemblage scenarios differ");
  asm_.require_complete();
  const LambdaReport nl = lambda_relaxation(noise, cfg);
  if (!nl.parent_exists(cfg.eps_feas))
    throw InvalidArgument("robustness: the noise assemblage has no parent (lambda = " +
                          std::to_string(nl.lambda_star) + "), so no mixture can be fixed");

  const auto& s = asm_.scenario();
  const std::size_t D = s.bob_total_dim();
  const DimVector bdims = s.bob_dim_vector();

  sdp::ConicProblem p;
  const std::size_t r = p.add_scalar("r");
  std::map<ElementKey, sdp::MatrixVar> parents;
  for (const auto& key : all_keys(s)) parents.emplace(key, p.add_hermitian("sigma " + to_string(key), D));

  AffineMatrix r_only(1, 1);
  r_only(0, 0).re = p.scalar(r);
  p.add_psd(r_only, "r >= 0");
  AffineMatrix r_cap(1, 1);
  r_cap(0, 0).re = LinearForm(1.0) - p.scalar(r);
  p.add_psd(r_cap, "r <= 1");

  for (const auto& [key, var] : parents) {
    const AffineMatrix& e = p.expr(var);
    p.add_psd(e, "parent " + to_string(key));
    for (std::size_t k = 0; k < s.num_bobs; ++k) {
      const CMatrix& target = asm_.element(key, k).matrix();
      const CMatrix delta = noise.element(key, k).matrix() - target;
      // marginal - r * (noise - asm) == asm
      AffineMatrix lhs = s.num_bobs == 1 ? e : e.partial_trace(bdims, {k});
      AffineMatrix shift(delta.rows(), delta.cols());
      for (std::size_t i = 0; i < delta.rows(); ++i)
        for (std::size_t j = 0; j < delta.cols(); ++j) {
          shift(i, j).re = p.scalar(r) * delta(i, j).real();
          shift(i, j).im = p.scalar(r) * delta(i, j).imag();
        }
      p.add_hermitian_equality(lhs - shift, target);
    }
  }
  detail::add_parent_no_signalling(p, s, parents);
  p.set_objective(p.scalar(r), sdp::Sense::Minimize);

  const auto o = sdp::solve(p, cfg);
  if (o.status == sdp::Status::Infeasible)
    throw InvalidArgument("robustness: no mixture with the noise admits a parent");
  if (!o.has_point())
    throw SolverUnknown("robustness: solver returned " + std::string(sdp::to_string(o.status)) +
                        " (" + o.diagnostics.message + ")");

  RobustnessResult res;
  res.r_star = std::clamp(*o.objective_value, 0.0, 1.0);
  res.noise = label;
  res.lower_bound = s.num_alices >= 2;
  res.status = o.status;
  res.diagnostics = o.diagnostics;
  for (const auto& [key, var] : parents)
    res.parent_at_optimum.elements.emplace(key, o.hermitian_value(p, var));
  return res;
}

RobustnessResult robustness(const Assemblage& asm_, NoiseKind kind, const sdp::SolverConfig& cfg) {
  return robustness(asm_, noise_assemblage(kind, asm_.scenario()), to_string(kind), cfg);
}

}  // namespace steercert
