#include <algorithm>
#include <cmath>

#include "steercert/certify.hpp"

namespace steercert {

namespace {

constexpr double kMaxStrategies = 1e6;

std::size_t flat_index(const ScenarioSpec& s, std::size_t j, std::size_t x) {
  std::size_t off = 0;
  for (std::size_t i = 0; i < j; ++i) off += s.settings[i];
  return off + x;
}

}  // namespace

std::vector<std::vector<std::size_t>> deterministic_strategies(const ScenarioSpec& s) {
  s.check();
  std::vector<std::size_t> radix;
  double count = 1.0;
  for (std::size_t j = 0; j < s.num_alices; ++j)
    for (std::size_t x = 0; x < s.settings[j]; ++x) {
      radix.push_back(s.outcomes[j][x]);
      count *= static_cast<double>(s.outcomes[j][x]);
    }
  if (count > kMaxStrategies)
    throw InvalidArgument("lhs_membership: " + std::to_string(static_cast<long long>(count)) +
                          " deterministic strategies exceed the limit of 1000000");
  std::vector<std::vector<std::size_t>> out;
  std::vector<std::size_t> cur(radix.size(), 0);
  while (true) {
    out.push_back(cur);
    std::size_t i = radix.size();
    bool done = true;
    while (i > 0) {
      --i;
      if (++cur[i] < radix[i]) {
        done = false;
        break;
      }
      cur[i] = 0;
    }
    if (done) break;
  }
  return out;
}

bool strategy_outputs(const ScenarioSpec& s, const std::vector<std::size_t>& strategy,
                      const ElementKey& key) {
  for (std::size_t j = 0; j < s.num_alices; ++j)
    if (strategy.at(flat_index(s, j, key.x[j])) != key.a[j]) return false;
  return true;
}

double lhs_model_residual(const LhsModel& m, const Assemblage& asm_) {
  const auto& s = asm_.scenario();
  double worst = 0.0;
  for (const auto& key : all_keys(s))
    for (std::size_t k = 0; k < s.num_bobs; ++k) {
      CMatrix pred(s.bob_dims[k], s.bob_dims[k]);
      for (std::size_t l = 0; l < m.strategies.size(); ++l)
        if (strategy_outputs(s, m.strategies[l], key))
          pred += m.bob_states[l][k].matrix() * cplx(m.weights[l]);
      worst = std::max(worst, max_abs_diff(pred, asm_.element(key, k).matrix()));
    }
  return worst;
}

LhsResult lhs_membership(const Assemblage& asm_, const sdp::SolverConfig& cfg) {
  asm_.require_complete();
  const auto& s = asm_.scenario();
  const auto strategies = deterministic_strategies(s);

  sdp::ConicProblem p;
  std::vector<std::vector<sdp::MatrixVar>> vars(strategies.size());
  for (std::size_t l = 0; l < strategies.size(); ++l) {
    for (std::size_t k = 0; k < s.num_bobs; ++k) {
      vars[l].push_back(p.add_hermitian(
          "rho lambda " + std::to_string(l) + " Bob " + std::to_string(k), s.bob_dims[k]));
      p.add_psd(p.expr(vars[l][k]));
    }
    // Shared weight p(lambda) = tr rho~^k_lambda for every k.
    for (std::size_t k = 1; k < s.num_bobs; ++k) {
      sdp::LinearForm diff;
      const auto& e0 = p.expr(vars[l][0]);
      const auto& ek = p.expr(vars[l][k]);
      for (std::size_t i = 0; i < s.bob_dims[k]; ++i) diff += ek(i, i).re;
      for (std::size_t i = 0; i < s.bob_dims[0]; ++i) diff -= e0(i, i).re;
      p.add_equality(diff);
    }
  }
  for (const auto& key : all_keys(s))
    for (std::size_t k = 0; k < s.num_bobs; ++k) {
      sdp::AffineMatrix sum(s.bob_dims[k], s.bob_dims[k]);
      for (std::size_t l = 0; l < strategies.size(); ++l)
        if (strategy_outputs(s, strategies[l], key)) sum += p.expr(vars[l][k]);
      p.add_hermitian_equality(sum, asm_.element(key, k).matrix());
    }

  const auto o = sdp::solve(p, cfg);
  LhsResult r;
  r.status = o.status;
  r.margin = o.margin;
  r.diagnostics = o.diagnostics;
  if (o.status != sdp::Status::Feasible) return r;

  LhsModel m;
  m.strategies = strategies;
  for (std::size_t l = 0; l < strategies.size(); ++l) {
    std::vector<HermitianMatrix> states;
    const HermitianMatrix first = o.hermitian_value(p, vars[l][0]);
    const double w = std::max(0.0, first.trace());
    m.weights.push_back(w);
    for (std::size_t k = 0; k < s.num_bobs; ++k) {
      const HermitianMatrix h = o.hermitian_value(p, vars[l][k]);
      const double tr = h.trace();
      if (tr < 1e-12) {
        states.push_back(HermitianMatrix::identity(s.bob_dims[k]).scaled(1.0 / s.bob_dims[k]));
      } else {
        states.push_back(h.scaled(1.0 / tr));
      }
    }
    m.bob_states.push_back(std::move(states));
  }
  r.model = std::move(m);
  return r;
}

}  // namespace steercert
