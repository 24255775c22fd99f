#include "ifm/circuits.hpp"

#include <algorithm>
#include <cmath>

namespace ifm {

namespace {

bool declared(const std::vector<ModeLabel>& modes, const ModeLabel& label) {
  return std::find(modes.begin(), modes.end(), label) != modes.end();
}

void check_optical(const std::vector<ModeLabel>& modes, const OpticalElement& el) {
  if (const auto* u = std::get_if<Unitary>(&el)) {
    for (const auto& m : u->modes) {
      if (!declared(modes, m)) {
        throw ConfigError("Circuit: element references undeclared mode '" + m.str() + "'");
      }
    }
  } else {
    const auto& ch = std::get<AbsorptionChannel>(el);
    if (!declared(modes, ch.mode)) {
      throw ConfigError("Circuit: element references undeclared mode '" + ch.mode.str() + "'");
    }
  }
}

}  // namespace

RepeatBlock::RepeatBlock(std::vector<OpticalElement> body_, int count_)
    : body(std::move(body_)), count(count_) {
  if (count < 1) throw DomainError("repeat_block: count must be >= 1");
}

Element repeat_block(std::vector<OpticalElement> body, int count) {
  return RepeatBlock(std::move(body), count);
}

Circuit::Circuit(std::vector<ModeLabel> modes_, std::vector<Element> elements_,
                 std::vector<std::pair<ModeLabel, std::string>> detectors_)
    : modes(std::move(modes_)), elements(std::move(elements_)), detectors(std::move(detectors_)) {
  if (modes.empty()) throw ConfigError("Circuit: needs at least one mode");
  for (std::size_t i = 0; i < modes.size(); ++i) {
    for (std::size_t j = i + 1; j < modes.size(); ++j) {
      if (modes[i] == modes[j]) {
        throw ConfigError("Circuit: duplicate mode '" + modes[i].str() + "'");
      }
    }
  }
  for (const auto& el : elements) {
    if (const auto* block = std::get_if<RepeatBlock>(&el)) {
      for (const auto& inner : block->body) check_optical(modes, inner);
    } else if (const auto* u = std::get_if<Unitary>(&el)) {
      check_optical(modes, OpticalElement(*u));
    } else {
      check_optical(modes, OpticalElement(std::get<AbsorptionChannel>(el)));
    }
  }
  for (std::size_t i = 0; i < detectors.size(); ++i) {
    if (!declared(modes, detectors[i].first)) {
      throw ConfigError("Circuit: detector on undeclared mode '" + detectors[i].first.str() +
                        "'");
    }
    if (detectors[i].second.empty()) throw ConfigError("Circuit: empty detector name");
    for (std::size_t j = i + 1; j < detectors.size(); ++j) {
      if (detectors[i].first == detectors[j].first) {
        throw ConfigError("Circuit: duplicate detector on mode '" + detectors[i].first.str() +
                          "'");
      }
      if (detectors[i].second == detectors[j].second) {
        throw ConfigError("Circuit: duplicate detector name '" + detectors[i].second + "'");
      }
    }
  }
}

double OutcomeDistribution::prob(const std::string& label) const {
  const auto it = entries.find(label);
  return it == entries.end() ? 0.0 : it->second;
}

double OutcomeDistribution::total() const {
  double sum = 0.0;
  for (const auto& [label, p] : entries) sum += p;
  return sum;
}

std::string detector_outcome(const std::string& name) { return "det:" + name; }

std::string sink_outcome(const std::string& sink_label, int repetition) {
  return "sink:" + sink_label + "#" + std::to_string(repetition);
}

std::vector<FlatStep> flatten(const Circuit& circuit) {
  std::vector<FlatStep> steps;
  const auto push_optical = [&steps](const OpticalElement& el, int rep) {
    FlatStep step;
    step.repetition = rep;
    if (const auto* u = std::get_if<Unitary>(&el)) {
      step.unitary = u;
    } else {
      step.channel = &std::get<AbsorptionChannel>(el);
    }
    steps.push_back(step);
  };
  for (const auto& el : circuit.elements) {
    if (const auto* block = std::get_if<RepeatBlock>(&el)) {
      for (int rep = 0; rep < block->count; ++rep) {
        for (const auto& inner : block->body) push_optical(inner, rep);
      }
    } else if (const auto* u = std::get_if<Unitary>(&el)) {
      FlatStep step;
      step.unitary = u;
      steps.push_back(step);
    } else {
      FlatStep step;
      step.channel = &std::get<AbsorptionChannel>(el);
      steps.push_back(step);
    }
  }
  return steps;
}

OutcomeDistribution run_exact(const Circuit& circuit, const ModeState& initial) {
  for (const auto& [label, a] : initial.amplitudes) {
    if (!declared(circuit.modes, label)) {
      throw ConfigError("run_exact: initial state uses undeclared mode '" + label.str() + "'");
    }
  }
  if (std::abs(mass(initial) - 1.0) > kTol) {
    throw ConfigError("run_exact: initial state is not normalized");
  }

  // Work on the full declared mode set so every element finds its modes.
  std::vector<std::pair<ModeLabel, Amplitude>> amps;
  amps.reserve(circuit.modes.size());
  for (const auto& m : circuit.modes) {
    const int pos = initial.find(m);
    amps.emplace_back(m, pos < 0 ? Amplitude{0.0, 0.0}
                                 : initial.amplitudes[static_cast<std::size_t>(pos)].second);
  }
  ModeState branch(std::move(amps), initial.weight);

  OutcomeDistribution dist;
  for (const auto& step : flatten(circuit)) {
    if (step.unitary != nullptr) {
      branch = apply_unitary(branch, *step.unitary);
    } else {
      auto [survived, absorbed] = apply_absorption(branch, *step.channel);
      dist.entries[sink_outcome(absorbed.sink_label, step.repetition)] += absorbed.probability;
      branch = std::move(survived);
    }
  }

  for (const auto& [mode, name] : circuit.detectors) {
    dist.entries[detector_outcome(name)] += branch.weight * std::norm(branch.amp(mode));
  }
  double undetected = 0.0;
  for (const auto& [mode, a] : branch.amplitudes) {
    bool has_detector = false;
    for (const auto& [dmode, name] : circuit.detectors) {
      if (dmode == mode) {
        has_detector = true;
        break;
      }
    }
    if (!has_detector) undetected += branch.weight * std::norm(a);
  }
  if (undetected > 0.0) dist.entries[kUndetectedOutcome] += undetected;
  return dist;
}

}  // namespace ifm
