#pragma once

// Scenarios, assemblages and quantum realisations.
//
// Alices are indexed 0..n-1, Bobs 0..N-1. Settings and outcomes are 0-based.
// Assemblage elements are stored subnormalised: tr sigma^(k)_{a|x} = p(a|x).

#include <compare>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "steercert/matcore.hpp"

namespace steercert {

struct ScenarioSpec {
  std::size_t num_alices = 1;
  std::vector<std::size_t> settings;               // |X_j|
  std::vector<std::vector<std::size_t>> outcomes;  // |A^j_x|, outcomes[j][x]
  std::size_t num_bobs = 1;
  std::vector<std::size_t> bob_dims;

  // Every Alice has `settings` settings with `outcomes` outcomes each.
  static ScenarioSpec uniform(std::size_t num_alices, std::size_t settings, std::size_t outcomes,
                              std::vector<std::size_t> bob_dims);

  // Throws InvalidArgument on inconsistent lengths or zero counts.
  void check() const;

  std::size_t bob_total_dim() const;
  DimVector bob_dim_vector() const { return DimVector(bob_dims); }

  // All joint setting vectors, lexicographic with Alice 0 most significant.
  std::vector<std::vector<std::size_t>> setting_vectors() const;
  // All joint outcome vectors compatible with setting vector x.
  std::vector<std::vector<std::size_t>> outcome_vectors(const std::vector<std::size_t>& x) const;

  friend bool operator==(const ScenarioSpec&, const ScenarioSpec&) = default;
};

struct ElementKey {
  std::vector<std::size_t> a;
  std::vector<std::size_t> x;

  friend auto operator<=>(const ElementKey&, const ElementKey&) = default;
  friend bool operator==(const ElementKey&, const ElementKey&) = default;
};

std::string to_string(const ElementKey& key);

// Every (a, x) key of the scenario, x-major.
std::vector<ElementKey> all_keys(const ScenarioSpec& s);

class Assemblage {
 public:
  using Elements = std::map<ElementKey, std::vector<HermitianMatrix>>;

  Assemblage() = default;
  // Checks that every supplied key is in range and every matrix has the
  // right Bob dimension. Missing keys are allowed here; validate() reports them.
  Assemblage(ScenarioSpec scenario, Elements elements);

  const ScenarioSpec& scenario() const { return scenario_; }
  const Elements& elements() const { return elements_; }
  // Throws ValidationError if the key is absent.
  const std::vector<HermitianMatrix>& element(const ElementKey& key) const;
  const HermitianMatrix& element(const ElementKey& key, std::size_t bob) const {
    return element(key).at(bob);
  }

  std::vector<ElementKey> missing_keys() const;
  // Throws ValidationError listing missing keys.
  void require_complete() const;

 private:
  ScenarioSpec scenario_;
  Elements elements_;
};

struct ValidationTolerances {
  double psd = 1e-9;
  double trace_agreement = 1e-9;
  double normalisation = 1e-9;
  double no_signalling = 1e-8;
  double bob_consistency = 1e-8;
};

struct Violation {
  std::string check;  // "psd", "trace_agreement", "normalisation", "no_signalling", "bob_consistency"
  std::string where;
  double magnitude = 0.0;
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
  // Largest magnitude among violations of the named check (0 if none).
  double worst(const std::string& check) const;
};

// Throws ValidationError when elements are missing.
ValidationReport validate(const Assemblage& asm_, const ValidationTolerances& tol = {});

std::map<ElementKey, double> joint_probabilities(const Assemblage& asm_);

// sum_a sigma^(k)_{a|0...0}; throws ValidationError if the sum depends on x
// beyond tol.
HermitianMatrix bob_reduced_state(const Assemblage& asm_, std::size_t k, double tol = 1e-8);

// sigma^(k)_{a|x} / p(a|x), or nullopt when p < 1e-12.
std::optional<HermitianMatrix> conditional_state(const Assemblage& asm_, const ElementKey& key,
                                                 std::size_t k);

class MeasurementSet {
 public:
  MeasurementSet() = default;
  // ops[x][a]; throws ValidationError unless every element is PSD and each
  // setting sums to the identity (both to tol).
  MeasurementSet(std::vector<std::vector<HermitianMatrix>> ops, double tol = 1e-10);

  // Projective measurements in the given orthonormal bases (columns of each unitary).
  static MeasurementSet from_bases(const std::vector<CMatrix>& bases, double tol = 1e-10);

  std::size_t dim() const { return dim_; }
  std::size_t num_settings() const { return ops_.size(); }
  std::size_t num_outcomes(std::size_t x) const { return ops_.at(x).size(); }
  const HermitianMatrix& op(std::size_t x, std::size_t a) const { return ops_.at(x).at(a); }
  const std::vector<std::vector<HermitianMatrix>>& ops() const { return ops_; }

 private:
  std::size_t dim_ = 0;
  std::vector<std::vector<HermitianMatrix>> ops_;
};

struct QuantumRealization {
  std::vector<std::size_t> alice_dims;
  std::vector<std::size_t> bob_dims;
  HermitianMatrix state;  // on H_A1 x ... x H_An x H_B1 x ... x H_BN
  std::vector<MeasurementSet> alice_measurements;

  // Throws ValidationError / DimensionError on inconsistent data.
  void validate(double tol = 1e-10) const;
  ScenarioSpec scenario() const;
  DimVector dims() const;
};

}  // namespace steercert
