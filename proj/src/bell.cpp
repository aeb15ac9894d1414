#include "steercert/bell.hpp"

#include <algorithm>
#include <cmath>

#include "steercert/construct.hpp"

namespace steercert {

namespace {

ScenarioSpec party_spec(const std::vector<std::size_t>& settings,
                        const std::vector<std::vector<std::size_t>>& outcomes) {
  ScenarioSpec s;
  s.num_alices = settings.size();
  s.settings = settings;
  s.outcomes = outcomes;
  s.num_bobs = 1;
  s.bob_dims = {1};
  return s;
}

}  // namespace

BellScenarioData correlations_from_realization(const QuantumRealization& qr,
                                               const std::vector<MeasurementSet>& bob_meas) {
  qr.validate();
  if (bob_meas.size() != qr.bob_dims.size())
    throw DimensionError("correlations_from_realization: one measurement set per Bob required");
  for (std::size_t k = 0; k < bob_meas.size(); ++k)
    if (bob_meas[k].dim() != qr.bob_dims[k])
      throw DimensionError("correlations_from_realization: Bob " + std::to_string(k) +
                           " measurement dimension mismatch");

  const ScenarioSpec as = qr.scenario();
  std::vector<std::size_t> settings = as.settings;
  std::vector<std::vector<std::size_t>> outcomes = as.outcomes;
  for (const auto& m : bob_meas) {
    settings.push_back(m.num_settings());
    std::vector<std::size_t> o;
    for (std::size_t y = 0; y < m.num_settings(); ++y) o.push_back(m.num_outcomes(y));
    outcomes.push_back(o);
  }
  BellScenarioData d;
  d.parties = party_spec(settings, outcomes);
  d.num_alices = as.num_alices;

  const auto parent = quantum_parent(qr);  // tr_A[(M_a|x x I) rho]
  const ScenarioSpec bob_parties =
      party_spec({settings.begin() + as.num_alices, settings.end()},
                 {outcomes.begin() + as.num_alices, outcomes.end()});
  const auto bob_keys = all_keys(bob_parties);
  for (const auto& [key, tau] : parent) {
    for (const auto& bk : bob_keys) {
      CMatrix mb = bob_meas[0].op(bk.x[0], bk.a[0]).matrix();
      for (std::size_t k = 1; k < bob_meas.size(); ++k) mb = kron(mb, bob_meas[k].op(bk.x[k], bk.a[k]).matrix());
      const double prob = (mb * tau.matrix()).trace().real();
      ElementKey full = key;
      full.a.insert(full.a.end(), bk.a.begin(), bk.a.end());
      full.x.insert(full.x.end(), bk.x.begin(), bk.x.end());
      d.p[full] = prob;
    }
  }
  return d;
}

BellScenarioData marginal(const BellScenarioData& d, const std::vector<std::size_t>& parties) {
  const auto& s = d.parties;
  std::vector<std::size_t> settings;
  std::vector<std::vector<std::size_t>> outcomes;
  for (std::size_t j : parties) {
    if (j >= s.num_alices) throw InvalidArgument("marginal: party index out of range");
    settings.push_back(s.settings[j]);
    outcomes.push_back(s.outcomes[j]);
  }
  BellScenarioData out;
  out.parties = party_spec(settings, outcomes);
  out.num_alices = 0;
  for (std::size_t j : parties)
    if (j < d.num_alices) ++out.num_alices;
  for (const auto& key : all_keys(out.parties)) {
    std::vector<std::size_t> x(s.num_alices, 0);
    for (std::size_t i = 0; i < parties.size(); ++i) x[parties[i]] = key.x[i];
    double acc = 0.0;
    for (const auto& a : s.outcome_vectors(x)) {
      bool match = true;
      for (std::size_t i = 0; i < parties.size(); ++i) match = match && a[parties[i]] == key.a[i];
      if (match) acc += d.p.at({a, x});
    }
    out.p[key] = acc;
  }
  return out;
}

double BellScenarioData::normalisation_violation() const {
  double worst = 0.0;
  for (const auto& x : parties.setting_vectors()) {
    double tot = 0.0;
    for (const auto& a : parties.outcome_vectors(x)) tot += p.at({a, x});
    worst = std::max(worst, std::abs(tot - 1.0));
  }
  return worst;
}

double BellScenarioData::min_probability() const {
  double m = 1.0;
  for (const auto& [k, v] : p) m = std::min(m, v);
  return m;
}

double BellScenarioData::no_signalling_violation() const {
  // Summing out party j must not depend on x_j.
  double worst = 0.0;
  const auto& s = parties;
  for (std::size_t j = 0; j < s.num_alices; ++j)
    for (const auto& x : s.setting_vectors()) {
      if (x[j] == 0) continue;
      std::vector<std::size_t> x0 = x;
      x0[j] = 0;
      std::map<std::vector<std::size_t>, double> lhs;
      std::map<std::vector<std::size_t>, double> rhs;
      for (const auto& a : s.outcome_vectors(x)) {
        auto r = a;
        r.erase(r.begin() + static_cast<std::ptrdiff_t>(j));
        lhs[r] += p.at({a, x});
      }
      for (const auto& a : s.outcome_vectors(x0)) {
        auto r = a;
        r.erase(r.begin() + static_cast<std::ptrdiff_t>(j));
        rhs[r] += p.at({a, x0});
      }
      for (const auto& [r, v] : lhs) worst = std::max(worst, std::abs(v - rhs[r]));
    }
  return worst;
}

BellFunctional chsh_functional(std::size_t minus_y1, std::size_t minus_y2) {
  if (minus_y1 > 1 || minus_y2 > 1) throw InvalidArgument("chsh_functional: settings are 0 or 1");
  BellFunctional f;
  f.parties = party_spec({2, 2}, {{2, 2}, {2, 2}});
  f.classical_bound = 2.0;
  f.label = "CHSH";
  if (minus_y1 != 1 || minus_y2 != 1)
    f.label += " (minus sign at y=(" + std::to_string(minus_y1) + "," + std::to_string(minus_y2) + "))";
  for (const auto& key : all_keys(f.parties)) {
    const double parity = ((key.a[0] + key.a[1]) % 2 == 0) ? 1.0 : -1.0;
    const double sign = (key.x[0] == minus_y1 && key.x[1] == minus_y2) ? -1.0 : 1.0;
    f.coefficients[key] = parity * sign;
  }
  return f;
}

double evaluate(const BellFunctional& f, const BellScenarioData& d) {
  if (!(f.parties.settings == d.parties.settings && f.parties.outcomes == d.parties.outcomes))
    throw InvalidArgument("evaluate: functional and data have different party structure");
  double acc = 0.0;
  for (const auto& [key, c] : f.coefficients) acc += c * d.p.at(key);
  return acc;
}

ChshValue best_chsh(const BellScenarioData& two_party) {
  ChshValue best;
  best.value = -1e300;
  for (std::size_t y1 = 0; y1 < 2; ++y1)
    for (std::size_t y2 = 0; y2 < 2; ++y2) {
      const double v = evaluate(chsh_functional(y1, y2), two_party);
      if (v > best.value) best = {v, y1, y2};
    }
  return best;
}

std::vector<MeasurementSet> tsirelson_bob_measurements() {
  auto proj = [](const CMatrix& obs, double sign) {
    return HermitianMatrix((CMatrix::identity(2) + obs * cplx(sign)) * cplx(0.5));
  };
  auto binary = [&](const CMatrix& o0, const CMatrix& o1) {
    return MeasurementSet({{proj(o0, 1), proj(o0, -1)}, {proj(o1, 1), proj(o1, -1)}});
  };
  const cplx r(1.0 / std::sqrt(2.0));
  return {binary(pauli::X(), pauli::Z()),
          binary((pauli::X() + pauli::Z()) * r, (pauli::X() - pauli::Z()) * r)};
}

}  // namespace steercert
