#pragma once

// Bell correlations obtained by also measuring the Bobs of a quantum
// realisation. Bare assemblages are not accepted: the joint statistics need
// the underlying state.

#include <map>
#include <string>
#include <vector>

#include "steercert/model.hpp"

namespace steercert {

// p(a b | x y) over all parties, Alices first then Bobs. The key's a and x
// vectors have one entry per party.
struct BellScenarioData {
  ScenarioSpec parties;  // every party listed as an "Alice"; Bob fields unused
  std::size_t num_alices = 0;
  std::map<ElementKey, double> p;

  // Max deviation over all normalisation and no-signalling checks.
  double no_signalling_violation() const;
  double normalisation_violation() const;
  double min_probability() const;
};

BellScenarioData correlations_from_realization(const QuantumRealization& qr,
                                               const std::vector<MeasurementSet>& bob_meas);

// Marginal onto the listed parties (in the given order); the others are
// summed at setting 0.
BellScenarioData marginal(const BellScenarioData& d, const std::vector<std::size_t>& parties);

struct BellFunctional {
  ScenarioSpec parties;
  std::map<ElementKey, double> coefficients;
  double classical_bound = 0.0;
  std::string label;
};

// Two parties with binary settings and outcomes, correlator form
// sum_{y1 y2} s(y1, y2) E(y1, y2) with s = -1 only at (minus_y1, minus_y2).
// The default is the usual sign pattern; all four are the same inequality
// up to relabelling outcomes.
BellFunctional chsh_functional(std::size_t minus_y1 = 1, std::size_t minus_y2 = 1);

// sum of coefficients times probabilities. Throws InvalidArgument when the
// party structure differs.
double evaluate(const BellFunctional& f, const BellScenarioData& d);

// Largest value over the four CHSH sign patterns, with the pattern found.
struct ChshValue {
  double value = 0.0;
  std::size_t minus_y1 = 1;
  std::size_t minus_y2 = 1;
};
ChshValue best_chsh(const BellScenarioData& two_party);

// Bob 1 measures X then Z; Bob 2 measures (X + Z)/sqrt2 then (X - Z)/sqrt2.
std::vector<MeasurementSet> tsirelson_bob_measurements();

}  // namespace steercert
