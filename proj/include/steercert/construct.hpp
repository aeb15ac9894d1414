#pragma once

// Assemblage generators: quantum realisations, the PR box, local positive
// maps, noise models and the bundled fixtures.

#include <map>
#include <optional>
#include <string_view>
#include <vector>

#include "steercert/model.hpp"

namespace steercert {

// A quantum realisation with exact rational data. Pure states with
// irrational amplitudes still have rational density matrices (e.g. GHZ).
struct ExactRealization {
  std::vector<std::size_t> alice_dims;
  std::vector<std::size_t> bob_dims;
  QMatrix state;
  std::vector<std::vector<std::vector<QMatrix>>> alice_ops;  // [alice][x][a]

  QuantumRealization to_realization() const;
};

using ExactElements = std::map<ElementKey, std::vector<QMatrix>>;

// sigma^(k)_{a|x} = tr_{all but Bob k} [ (M_{a1|x1} x ... x M_{an|xn} x I) rho ].
Assemblage from_quantum_realization(const QuantumRealization& qr);
ExactElements exact_from_quantum_realization(const ExactRealization& qr);

// tr_A [ (M_{a|x} x I) rho ] on the composite Bob space: the natural parent
// of from_quantum_realization(qr).
std::map<ElementKey, HermitianMatrix> quantum_parent(const QuantumRealization& qr);

Assemblage assemblage_from_exact(const ScenarioSpec& s, const ExactElements& e);

// p(a1 a2|x1 x2) = [a1 xor a2 = x1 x2] / 2, Bob elements p I/2 for two qubit Bobs.
Assemblage pr_assemblage();

struct PositiveMapSpec {
  enum class Kind { Identity, ReductionTranspose };

  std::size_t dim = 1;
  Kind kind = Kind::Identity;
  CMatrix unitary;  // ReductionTranspose only

  static PositiveMapSpec identity(std::size_t dim);
  // rho -> (tr(rho) I - rho - U rho^T U^dag) / 2. U must be unitary and
  // antisymmetric.
  static PositiveMapSpec reduction_transpose(CMatrix u);

  // Throws InvalidArgument when the unitary fails either property to 1e-12.
  void check() const;
};

// Applies the map to any dim x dim matrix (the map is linear).
CMatrix apply_positive_map(const PositiveMapSpec& m, const CMatrix& rho);
HermitianMatrix apply_positive_map(const PositiveMapSpec& m, const HermitianMatrix& rho);

// (I x ... x Lambda x ... x I) applied to the given tensor factor.
CMatrix apply_local_map(const PositiveMapSpec& m, const CMatrix& rho, const DimVector& dims,
                        std::size_t factor);

// Measured quantum assemblage with Lambda^(k) applied to Bob k's marginal.
// Throws ValidationError if any element ends up with eigenvalue < -1e-8.
Assemblage ptp_construction(const QuantumRealization& qr, const std::vector<PositiveMapSpec>& maps);
Assemblage ptp_construction(const HermitianMatrix& rho, const MeasurementSet& alice_meas,
                            const std::vector<PositiveMapSpec>& maps);

// X (x) Y, the antisymmetric unitary used for the four-dimensional Bob.
CMatrix x_tensor_y();

// {|+><+|, |-><-|} for x = 0 and {|0><0|, |1><1|} for x = 1.
MeasurementSet plus_minus_then_computational();
// Eigenbases of X+Z (x = 0) and X-Z (x = 1); outcome 0 is the +sqrt(2) eigenvector.
MeasurementSet x_plus_minus_z_bases();

// Two Alices (qubits) and Bobs of dimensions 2 and 4. The 4-dimensional Bob
// receives the reduction-transpose map with U = X (x) Y.
Assemblage two_alice_ptp_construction(const HermitianMatrix& rho,
                                      const std::optional<MeasurementSet>& first_alice = {});

enum class NoiseKind { White, GHZ, W };

// White noise exists for every scenario; GHZ and W need one Alice with two
// binary settings and two qubit Bobs (throws InvalidArgument otherwise).
Assemblage noise_assemblage(NoiseKind kind, const ScenarioSpec& s);
// Exact entries of the GHZ and W noise assemblages.
ExactElements noise_elements_exact(NoiseKind kind);

// GHZ and W states with Alice on the first qubit measuring Z (x = 0) and X (x = 1).
ExactRealization ghz_realization_exact();
ExactRealization w_realization_exact();

// (I/2) x |Psi+><Psi+| with Alice measuring X then Z. Every element is I/4.
QuantumRealization maximally_mixed_realization();

enum class Fixture { ABB_PQNL, ABB_1, ABB_PTP_1, PR };

Assemblage load_fixture(Fixture f);
// Throws InvalidArgument for unknown names. Accepts "abb-pqnl", "abb1",
// "abb-ptp1", "pr" and the enum spellings.
Fixture fixture_from_name(std::string_view name);
// Rational entries for the two transcribed fixtures.
ExactElements fixture_exact(Fixture f);
// The three-party pure state behind ABB_PTP_1 (normalised).
std::vector<cplx> abb_ptp1_state_vector();

}  // namespace steercert
