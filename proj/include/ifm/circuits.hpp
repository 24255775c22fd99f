#pragma once

#include <map>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "ifm/elements.hpp"
#include "ifm/qcore.hpp"

namespace ifm {

// One pass of a repeated stage.  Bodies hold plain optical elements; nesting
// repeat blocks is not supported (no construction in scope needs it).
struct RepeatBlock {
  std::vector<OpticalElement> body;
  int count = 1;
  RepeatBlock(std::vector<OpticalElement> body_, int count_);
};

using Element = std::variant<Unitary, AbsorptionChannel, RepeatBlock>;

Element repeat_block(std::vector<OpticalElement> body, int count);

// Ordered elements plus terminal detectors.  Immutable once built; safe to
// share across threads.
struct Circuit {
  std::vector<ModeLabel> modes;
  std::vector<Element> elements;
  std::vector<std::pair<ModeLabel, std::string>> detectors;

  Circuit(std::vector<ModeLabel> modes_, std::vector<Element> elements_,
          std::vector<std::pair<ModeLabel, std::string>> detectors_);
};

struct OutcomeDistribution {
  std::map<std::string, double> entries;

  double prob(const std::string& label) const;  // 0 for missing labels
  double total() const;
};

// Outcome label grammar, fixed for stable report schemas.
std::string detector_outcome(const std::string& name);
std::string sink_outcome(const std::string& sink_label, int repetition);
inline const std::string kUndetectedOutcome = "undetected";

// Unrolled view of a circuit: repeat blocks expanded, each step tagged with
// its repetition index (0 outside repeat blocks).  Pointers alias the
// circuit; keep it alive.
struct FlatStep {
  const Unitary* unitary = nullptr;
  const AbsorptionChannel* channel = nullptr;
  int repetition = 0;
};

std::vector<FlatStep> flatten(const Circuit& circuit);

// Exact event-tree evaluation.  Unitaries transform the branch in place;
// every absorption channel application contributes one absorbed leaf (kept
// even at probability zero) and one surviving branch; terminal detector
// modes contribute weight x |amp|^2.  Pure function.
OutcomeDistribution run_exact(const Circuit& circuit, const ModeState& initial);

}  // namespace ifm
