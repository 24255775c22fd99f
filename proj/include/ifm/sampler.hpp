#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "ifm/circuits.hpp"

namespace ifm {

// Pinned in report metadata; changing the generator is a breaking change to
// bit-reproducibility.
inline constexpr const char* kRngAlgorithm = "splitmix64";

struct SampleReport {
  std::map<std::string, std::uint64_t> counts;
  std::uint64_t trials = 0;
  std::map<std::string, double> empirical;
  double max_abs_dev = 0.0;  // largest |empirical - exact| over labels
  std::uint64_t seed = 0;
};

// Seeded Monte Carlo over the circuit's classical branch points: each
// absorption channel draws absorbed-vs-survive, the terminal detection draws
// one mode.  Unitaries are never sampled.  Per-trial substreams are derived
// from (seed, trial index), so counts are bit-reproducible and independent
// of evaluation order.
SampleReport sample(const Circuit& circuit, const ModeState& initial, std::uint64_t trials,
                    std::uint64_t seed);

// Draws whole outcomes from an already-exact distribution; used for the
// steady-state cavity protocol, which has no event-tree circuit to walk.
SampleReport sample_distribution(const OutcomeDistribution& exact, std::uint64_t trials,
                                 std::uint64_t seed);

// Outcome label of a single trial, exposed for determinism tests.
std::string trial_outcome(const Circuit& circuit, const ModeState& initial, std::uint64_t seed,
                          std::uint64_t trial);

}  // namespace ifm
