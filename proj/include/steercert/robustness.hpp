#pragma once

// Noise mixing and the minimum noise weight that makes a parent exist.

#include <string>

#include "steercert/certify.hpp"
#include "steercert/construct.hpp"

namespace steercert {

// r * noise + (1 - r) * a, elementwise per Bob. Throws InvalidArgument on
// scenario mismatch or r outside [0, 1].
Assemblage mix(const Assemblage& noise, const Assemblage& a, double r);

struct RobustnessResult {
  double r_star = 0.0;
  std::string noise;  // "white", "ghz", "w" or "custom"
  ParentAssemblage parent_at_optimum;
  // With two or more Alices only the parent condition is tested, so r_star
  // is a lower bound on the noise needed for a quantum realisation.
  bool lower_bound = false;
  sdp::Status status = sdp::Status::Unknown;
  sdp::Diagnostics diagnostics;
};

// minimise r over (r, sigma_{a|x} PSD) such that the parent reproduces
// r * noise + (1 - r) * asm and is no-signalling. Throws InvalidArgument if
// the noise has no parent itself, SolverUnknown if the solve is inconclusive.
RobustnessResult robustness(const Assemblage& asm_, const Assemblage& noise,
                            const std::string& label = "custom",
                            const sdp::SolverConfig& cfg = {});
RobustnessResult robustness(const Assemblage& asm_, NoiseKind kind,
                            const sdp::SolverConfig& cfg = {});

const char* to_string(NoiseKind k);

}  // namespace steercert
