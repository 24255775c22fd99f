#include "ifm/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

namespace ifm {

namespace {

constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;

std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Full finalization of (seed, trial) gives each trial an uncorrelated
// starting state; a bare additive offset would make neighbouring trials
// shifted copies of the same stream.
std::uint64_t substream_state(std::uint64_t seed, std::uint64_t trial) {
  return mix64(seed + kGamma * (trial + 1));
}

std::uint64_t next_u64(std::uint64_t& state) { return mix64(state += kGamma); }

double next_unit(std::uint64_t& state) {
  return static_cast<double>(next_u64(state) >> 11) * 0x1.0p-53;
}

ModeState working_state(const Circuit& circuit, const ModeState& initial) {
  std::vector<std::pair<ModeLabel, Amplitude>> amps;
  amps.reserve(circuit.modes.size());
  for (const auto& m : circuit.modes) {
    const int pos = initial.find(m);
    amps.emplace_back(m, pos < 0 ? Amplitude{0.0, 0.0}
                                 : initial.amplitudes[static_cast<std::size_t>(pos)].second);
  }
  return ModeState(std::move(amps), initial.weight);
}

std::string walk_trial(const Circuit& circuit, const std::vector<FlatStep>& steps,
                       const ModeState& start, std::uint64_t seed, std::uint64_t trial) {
  std::uint64_t state = substream_state(seed, trial);
  ModeState branch = start;
  for (const auto& step : steps) {
    if (step.unitary != nullptr) {
      branch = apply_unitary(branch, *step.unitary);
      continue;
    }
    const AbsorptionChannel& ch = *step.channel;
    const double p_absorb = ch.absorb_prob * std::norm(branch.amp(ch.mode));
    if (p_absorb > 0.0 && next_unit(state) < p_absorb) {
      return sink_outcome(ch.sink_label, step.repetition);
    }
    branch = apply_absorption(branch, ch).first;
  }

  const double u = next_unit(state);
  double cum = 0.0;
  for (const auto& [mode, name] : circuit.detectors) {
    cum += std::norm(branch.amp(mode));
    if (u < cum) return detector_outcome(name);
  }
  return kUndetectedOutcome;
}

}  // namespace

std::string trial_outcome(const Circuit& circuit, const ModeState& initial, std::uint64_t seed,
                          std::uint64_t trial) {
  const std::vector<FlatStep> steps = flatten(circuit);
  return walk_trial(circuit, steps, working_state(circuit, initial), seed, trial);
}

SampleReport sample(const Circuit& circuit, const ModeState& initial, std::uint64_t trials,
                    std::uint64_t seed) {
  if (trials == 0) throw DomainError("sample: trials must be >= 1");
  const std::vector<FlatStep> steps = flatten(circuit);
  const ModeState start = working_state(circuit, initial);

  SampleReport report;
  report.trials = trials;
  report.seed = seed;
  for (std::uint64_t trial = 0; trial < trials; ++trial) {
    ++report.counts[walk_trial(circuit, steps, start, seed, trial)];
  }

  const OutcomeDistribution exact = run_exact(circuit, initial);
  for (const auto& [label, count] : report.counts) {
    report.empirical[label] = static_cast<double>(count) / static_cast<double>(trials);
  }
  for (const auto& [label, p] : exact.entries) {
    const auto it = report.empirical.find(label);
    const double e = it == report.empirical.end() ? 0.0 : it->second;
    report.max_abs_dev = std::max(report.max_abs_dev, std::abs(e - p));
  }
  for (const auto& [label, e] : report.empirical) {
    report.max_abs_dev = std::max(report.max_abs_dev, std::abs(e - exact.prob(label)));
  }
  return report;
}

SampleReport sample_distribution(const OutcomeDistribution& exact, std::uint64_t trials,
                                 std::uint64_t seed) {
  if (trials == 0) throw DomainError("sample_distribution: trials must be >= 1");

  SampleReport report;
  report.trials = trials;
  report.seed = seed;
  for (std::uint64_t trial = 0; trial < trials; ++trial) {
    std::uint64_t state = substream_state(seed, trial);
    const double u = next_unit(state);
    double cum = 0.0;
    const std::string* drawn = nullptr;
    for (const auto& [label, p] : exact.entries) {
      if (p <= 0.0) continue;
      cum += p;
      drawn = &label;
      if (u < cum) break;
    }
    if (drawn == nullptr) throw DomainError("sample_distribution: empty distribution");
    ++report.counts[*drawn];
  }

  for (const auto& [label, count] : report.counts) {
    report.empirical[label] = static_cast<double>(count) / static_cast<double>(trials);
  }
  for (const auto& [label, p] : exact.entries) {
    const auto it = report.empirical.find(label);
    const double e = it == report.empirical.end() ? 0.0 : it->second;
    report.max_abs_dev = std::max(report.max_abs_dev, std::abs(e - p));
  }
  return report;
}

}  // namespace ifm
