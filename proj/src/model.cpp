#include "steercert/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace steercert {

namespace {

std::string join(const std::vector<std::size_t>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(v[i]);
  }
  return s;
}

// Mixed-radix enumeration, first digit most significant.
std::vector<std::vector<std::size_t>> product_range(const std::vector<std::size_t>& radix) {
  std::vector<std::vector<std::size_t>> out;
  std::vector<std::size_t> cur(radix.size(), 0);
  for (std::size_t r : radix)
    if (r == 0) return out;
  while (true) {
    out.push_back(cur);
    std::size_t i = radix.size();
    while (i > 0) {
      --i;
      if (++cur[i] < radix[i]) break;
      cur[i] = 0;
      if (i == 0) return out;
    }
    if (radix.empty()) return out;
  }
}

}  // namespace

ScenarioSpec ScenarioSpec::uniform(std::size_t num_alices, std::size_t settings,
                                   std::size_t outcomes, std::vector<std::size_t> bob_dims) {
  ScenarioSpec s;
  s.num_alices = num_alices;
  s.settings.assign(num_alices, settings);
  s.outcomes.assign(num_alices, std::vector<std::size_t>(settings, outcomes));
  s.num_bobs = bob_dims.size();
  s.bob_dims = std::move(bob_dims);
  return s;
}

void ScenarioSpec::check() const {
  if (num_alices == 0) throw InvalidArgument("scenario: need at least one Alice");
  if (num_bobs == 0) throw InvalidArgument("scenario: need at least one Bob");
  if (settings.size() != num_alices)
    throw InvalidArgument("scenario: settings must have one entry per Alice");
  if (outcomes.size() != num_alices)
    throw InvalidArgument("scenario: outcomes must have one entry per Alice");
  if (bob_dims.size() != num_bobs)
    throw InvalidArgument("scenario: bob_dims must have one entry per Bob");
  for (std::size_t j = 0; j < num_alices; ++j) {
    if (settings[j] == 0) throw InvalidArgument("scenario: Alice with no settings");
    if (outcomes[j].size() != settings[j])
      throw InvalidArgument("scenario: Alice " + std::to_string(j) +
                            " needs one outcome count per setting");
    for (std::size_t c : outcomes[j])
      if (c == 0) throw InvalidArgument("scenario: setting with no outcomes");
  }
  for (std::size_t d : bob_dims)
    if (d == 0) throw InvalidArgument("scenario: Bob dimension must be positive");
}

std::size_t ScenarioSpec::bob_total_dim() const {
  std::size_t d = 1;
  for (std::size_t b : bob_dims) d *= b;
  return d;
}

std::vector<std::vector<std::size_t>> ScenarioSpec::setting_vectors() const {
  return product_range(settings);
}

std::vector<std::vector<std::size_t>> ScenarioSpec::outcome_vectors(
    const std::vector<std::size_t>& x) const {
  if (x.size() != num_alices) throw DimensionError("outcome_vectors: setting vector length");
  std::vector<std::size_t> radix(num_alices);
  for (std::size_t j = 0; j < num_alices; ++j) radix[j] = outcomes.at(j).at(x[j]);
  return product_range(radix);
}

std::string to_string(const ElementKey& key) {
  return "a=(" + join(key.a) + ") x=(" + join(key.x) + ")";
}

std::vector<ElementKey> all_keys(const ScenarioSpec& s) {
  std::vector<ElementKey> keys;
  for (const auto& x : s.setting_vectors())
    for (const auto& a : s.outcome_vectors(x)) keys.push_back({a, x});
  return keys;
}

Assemblage::Assemblage(ScenarioSpec scenario, Elements elements)
    : scenario_(std::move(scenario)), elements_(std::move(elements)) {
  scenario_.check();
  for (const auto& [key, bobs] : elements_) {
    if (key.a.size() != scenario_.num_alices || key.x.size() != scenario_.num_alices)
      throw DimensionError("assemblage: key " + to_string(key) + " has the wrong length");
    for (std::size_t j = 0; j < scenario_.num_alices; ++j) {
      if (key.x[j] >= scenario_.settings[j] || key.a[j] >= scenario_.outcomes[j][key.x[j]])
        throw DimensionError("assemblage: key " + to_string(key) + " out of range");
    }
    if (bobs.size() != scenario_.num_bobs)
      throw DimensionError("assemblage: key " + to_string(key) + " needs one matrix per Bob");
    for (std::size_t k = 0; k < bobs.size(); ++k)
      if (bobs[k].dim() != scenario_.bob_dims[k])
        throw DimensionError("assemblage: key " + to_string(key) + ", Bob " + std::to_string(k) +
                             " has dimension " + std::to_string(bobs[k].dim()));
  }
}

const std::vector<HermitianMatrix>& Assemblage::element(const ElementKey& key) const {
  auto it = elements_.find(key);
  if (it == elements_.end()) throw ValidationError("assemblage: missing element " + to_string(key));
  return it->second;
}

std::vector<ElementKey> Assemblage::missing_keys() const {
  std::vector<ElementKey> out;
  for (auto& k : all_keys(scenario_))
    if (!elements_.count(k)) out.push_back(k);
  return out;
}

void Assemblage::require_complete() const {
  const auto missing = missing_keys();
  if (missing.empty()) return;
  std::string msg = "assemblage: missing elements";
  for (std::size_t i = 0; i < missing.size() && i < 8; ++i) msg += " " + to_string(missing[i]);
  if (missing.size() > 8) msg += " ... (" + std::to_string(missing.size()) + " total)";
  throw ValidationError(msg);
}

double ValidationReport::worst(const std::string& check) const {
  double w = 0.0;
  for (const auto& v : violations)
    if (v.check == check) w = std::max(w, v.magnitude);
  return w;
}

ValidationReport validate(const Assemblage& asm_, const ValidationTolerances& tol) {
  asm_.require_complete();
  const auto& s = asm_.scenario();
  ValidationReport rep;
  auto add = [&](const char* check, std::string where, double mag) {
    rep.violations.push_back({check, std::move(where), mag});
  };

  for (const auto& [key, bobs] : asm_.elements()) {
    for (std::size_t k = 0; k < bobs.size(); ++k) {
      const double lmin = min_eigenvalue(bobs[k]);
      if (lmin < -tol.psd) add("psd", to_string(key) + " Bob " + std::to_string(k), -lmin);
    }
    for (std::size_t k = 1; k < bobs.size(); ++k) {
      const double d = std::abs(bobs[k].trace() - bobs[0].trace());
      if (d > tol.trace_agreement)
        add("trace_agreement", to_string(key) + " Bob " + std::to_string(k), d);
    }
  }

  for (const auto& x : s.setting_vectors()) {
    double total = 0.0;
    for (const auto& a : s.outcome_vectors(x)) total += asm_.element({a, x}, 0).trace();
    if (std::abs(total - 1.0) > tol.normalisation)
      add("normalisation", "x=(" + join(x) + ")", std::abs(total - 1.0));
  }

  // For every subset S of Alices (bitmask of kept parties) compare the
  // partial sums over the complement's outcomes across the complement's
  // settings. S = {} is the Bob-side consistency condition.
  const std::size_t n = s.num_alices;
  for (std::size_t mask = 0; mask + 1 < (std::size_t{1} << n); ++mask) {
    const bool bob_side = mask == 0;
    const double limit = bob_side ? tol.bob_consistency : tol.no_signalling;
    // marginal[(a_S, x_S)] -> per-Bob matrix from the first x_{S^c} seen.
    std::map<std::pair<std::vector<std::size_t>, std::vector<std::size_t>>,
             std::vector<CMatrix>> first;
    std::map<std::pair<std::vector<std::size_t>, std::vector<std::size_t>>, double> worst;
    for (const auto& x : s.setting_vectors()) {
      std::map<std::vector<std::size_t>, std::vector<CMatrix>> sums;  // keyed by a_S
      for (const auto& a : s.outcome_vectors(x)) {
        std::vector<std::size_t> aS;
        for (std::size_t j = 0; j < n; ++j)
          if (mask >> j & 1) aS.push_back(a[j]);
        auto& acc = sums[aS];
        const auto& bobs = asm_.element({a, x});
        if (acc.empty())
          for (const auto& b : bobs) acc.push_back(CMatrix(b.dim(), b.dim()));
        for (std::size_t k = 0; k < bobs.size(); ++k) acc[k] += bobs[k].matrix();
      }
      std::vector<std::size_t> xS;
      for (std::size_t j = 0; j < n; ++j)
        if (mask >> j & 1) xS.push_back(x[j]);
      for (auto& [aS, mats] : sums) {
        auto key = std::make_pair(aS, xS);
        auto it = first.find(key);
        if (it == first.end()) {
          first.emplace(key, mats);
          continue;
        }
        double d = 0.0;
        for (std::size_t k = 0; k < mats.size(); ++k)
          d = std::max(d, max_abs_diff(mats[k], it->second[k]));
        worst[key] = std::max(worst[key], d);
      }
    }
    for (const auto& [key, d] : worst) {
      if (d <= limit) continue;
      std::string where;
      if (bob_side) {
        where = "sum over all outcomes";
      } else {
        where = "kept Alices mask " + std::to_string(mask) + " a_S=(" + join(key.first) +
                ") x_S=(" + join(key.second) + ")";
      }
      add(bob_side ? "bob_consistency" : "no_signalling", where, d);
    }
  }
  return rep;
}

std::map<ElementKey, double> joint_probabilities(const Assemblage& asm_) {
  asm_.require_complete();
  std::map<ElementKey, double> p;
  for (const auto& [key, bobs] : asm_.elements()) p[key] = bobs.at(0).trace();
  return p;
}

HermitianMatrix bob_reduced_state(const Assemblage& asm_, std::size_t k, double tol) {
  asm_.require_complete();
  const auto& s = asm_.scenario();
  if (k >= s.num_bobs) throw InvalidArgument("bob_reduced_state: Bob index out of range");
  std::optional<CMatrix> ref;
  for (const auto& x : s.setting_vectors()) {
    CMatrix acc(s.bob_dims[k], s.bob_dims[k]);
    for (const auto& a : s.outcome_vectors(x)) acc += asm_.element({a, x}, k).matrix();
    if (!ref) {
      ref = acc;
    } else if (double d = max_abs_diff(acc, *ref); d > tol) {
      throw ValidationError("bob_reduced_state: Bob " + std::to_string(k) +
                            " marginal depends on x=(" + join(x) + ") by " + std::to_string(d));
    }
  }
  return HermitianMatrix(*ref);
}

std::optional<HermitianMatrix> conditional_state(const Assemblage& asm_, const ElementKey& key,
                                                 std::size_t k) {
  const auto& e = asm_.element(key, k);
  const double p = e.trace();
  if (p < 1e-12) return std::nullopt;
  return e.scaled(1.0 / p);
}

MeasurementSet::MeasurementSet(std::vector<std::vector<HermitianMatrix>> ops, double tol)
    : ops_(std::move(ops)) {
  if (ops_.empty() || ops_[0].empty())
    throw ValidationError("measurement set: need at least one setting with one outcome");
  dim_ = ops_[0][0].dim();
  for (std::size_t x = 0; x < ops_.size(); ++x) {
    if (ops_[x].empty()) throw ValidationError("measurement set: setting with no outcomes");
    CMatrix sum(dim_, dim_);
    for (std::size_t a = 0; a < ops_[x].size(); ++a) {
      const auto& m = ops_[x][a];
      if (m.dim() != dim_) throw DimensionError("measurement set: operators of mixed dimension");
      const double lmin = min_eigenvalue(m);
      if (lmin < -tol)
        throw ValidationError("measurement set: operator (x=" + std::to_string(x) +
                              ", a=" + std::to_string(a) + ") has eigenvalue " +
                              std::to_string(lmin));
      sum += m.matrix();
    }
    const double d = max_abs_diff(sum, CMatrix::identity(dim_));
    if (d > tol)
      throw ValidationError("measurement set: setting " + std::to_string(x) +
                            " does not sum to the identity (deviation " + std::to_string(d) + ")");
  }
}

MeasurementSet MeasurementSet::from_bases(const std::vector<CMatrix>& bases, double tol) {
  std::vector<std::vector<HermitianMatrix>> ops;
  for (const auto& u : bases) {
    if (!u.is_square()) throw DimensionError("from_bases: basis matrix must be square");
    std::vector<HermitianMatrix> row;
    for (std::size_t c = 0; c < u.cols(); ++c) {
      std::vector<cplx> v(u.rows());
      for (std::size_t r = 0; r < u.rows(); ++r) v[r] = u(r, c);
      row.emplace_back(CMatrix::outer(v));
    }
    ops.push_back(std::move(row));
  }
  return MeasurementSet(std::move(ops), tol);
}

DimVector QuantumRealization::dims() const {
  std::vector<std::size_t> f = alice_dims;
  f.insert(f.end(), bob_dims.begin(), bob_dims.end());
  return DimVector(f);
}

ScenarioSpec QuantumRealization::scenario() const {
  ScenarioSpec s;
  s.num_alices = alice_measurements.size();
  for (const auto& m : alice_measurements) {
    s.settings.push_back(m.num_settings());
    std::vector<std::size_t> o;
    for (std::size_t x = 0; x < m.num_settings(); ++x) o.push_back(m.num_outcomes(x));
    s.outcomes.push_back(o);
  }
  s.num_bobs = bob_dims.size();
  s.bob_dims = bob_dims;
  return s;
}

void QuantumRealization::validate(double tol) const {
  if (alice_dims.size() != alice_measurements.size())
    throw DimensionError("realization: one measurement set per Alice required");
  if (bob_dims.empty()) throw DimensionError("realization: need at least one Bob");
  for (std::size_t j = 0; j < alice_dims.size(); ++j)
    if (alice_measurements[j].dim() != alice_dims[j])
      throw DimensionError("realization: Alice " + std::to_string(j) +
                           " measurement dimension mismatch");
  if (dims().product() != state.dim())
    throw DimensionError("realization: state dimension " + std::to_string(state.dim()) +
                         " does not match the product of local dimensions");
  const double lmin = min_eigenvalue(state);
  if (lmin < -tol)
    throw ValidationError("realization: state is not PSD (min eigenvalue " +
                          std::to_string(lmin) + ")");
  if (std::abs(state.trace() - 1.0) > tol)
    throw ValidationError("realization: state trace is " + std::to_string(state.trace()));
}

}  // namespace steercert
