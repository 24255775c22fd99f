#include "ifm/qcore.hpp"

#include <cmath>

namespace ifm {

namespace {

void require_finite(const Amplitude& a, const char* where) {
  if (!std::isfinite(a.real()) || !std::isfinite(a.imag())) {
    throw DomainError(std::string(where) + ": non-finite amplitude");
  }
}

void require_finite(const ModeState& s, const char* where) {
  if (!std::isfinite(s.weight)) {
    throw DomainError(std::string(where) + ": non-finite weight");
  }
  for (const auto& [label, a] : s.amplitudes) {
    require_finite(a, where);
  }
}

}  // namespace

std::string ModeLabel::str() const {
  if (particle < 0) return name;
  return "p" + std::to_string(particle) + ":" + name;
}

ModeState::ModeState(std::vector<std::pair<ModeLabel, Amplitude>> amps, double w)
    : amplitudes(std::move(amps)), weight(w) {
  if (!(weight >= 0.0 && weight <= 1.0 + kTol)) {
    throw DomainError("ModeState: weight must lie in [0,1]");
  }
  for (std::size_t i = 0; i < amplitudes.size(); ++i) {
    for (std::size_t j = i + 1; j < amplitudes.size(); ++j) {
      if (amplitudes[i].first == amplitudes[j].first) {
        throw ConfigError("ModeState: duplicate mode label '" +
                          amplitudes[i].first.str() + "'");
      }
    }
  }
  require_finite(*this, "ModeState");
}

ModeState ModeState::basis(const std::vector<ModeLabel>& modes, std::size_t occupied) {
  if (occupied >= modes.size()) {
    throw ConfigError("ModeState::basis: occupied index out of range");
  }
  std::vector<std::pair<ModeLabel, Amplitude>> amps;
  amps.reserve(modes.size());
  for (std::size_t i = 0; i < modes.size(); ++i) {
    amps.emplace_back(modes[i], i == occupied ? Amplitude{1.0, 0.0} : Amplitude{0.0, 0.0});
  }
  return ModeState(std::move(amps));
}

int ModeState::find(const ModeLabel& label) const {
  for (std::size_t i = 0; i < amplitudes.size(); ++i) {
    if (amplitudes[i].first == label) return static_cast<int>(i);
  }
  return -1;
}

Amplitude ModeState::amp(const ModeLabel& label) const {
  const int i = find(label);
  if (i < 0) throw ConfigError("unknown mode label '" + label.str() + "'");
  return amplitudes[static_cast<std::size_t>(i)].second;
}

double norm_sq(const ModeState& state) {
  double n = 0.0;
  for (const auto& [label, a] : state.amplitudes) n += std::norm(a);
  return n;
}

double mass(const ModeState& state) { return state.weight * norm_sq(state); }

Unitary::Unitary(std::vector<ModeLabel> modes_, std::vector<std::vector<Amplitude>> matrix_)
    : modes(std::move(modes_)), matrix(std::move(matrix_)) {
  const std::size_t k = modes.size();
  if (k == 0) throw ConfigError("Unitary: needs at least one mode");
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i + 1; j < k; ++j) {
      if (modes[i] == modes[j]) {
        throw ConfigError("Unitary: duplicate mode label '" + modes[i].str() + "'");
      }
    }
  }
  if (matrix.size() != k) throw ConfigError("Unitary: matrix/mode size mismatch");
  for (const auto& row : matrix) {
    if (row.size() != k) throw ConfigError("Unitary: matrix is not square");
    for (const auto& a : row) require_finite(a, "Unitary");
  }
  // U†U = I, entrywise to kTol.
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      Amplitude dot{0.0, 0.0};
      for (std::size_t m = 0; m < k; ++m) {
        dot += std::conj(matrix[m][i]) * matrix[m][j];
      }
      const Amplitude expected = (i == j) ? Amplitude{1.0, 0.0} : Amplitude{0.0, 0.0};
      if (std::abs(dot - expected) > kTol) {
        throw DomainError("Unitary: matrix is not unitary to 1e-12");
      }
    }
  }
}

AbsorptionChannel::AbsorptionChannel(ModeLabel mode_, double absorb_prob_,
                                     std::string sink_label_, double survivor_phase_)
    : mode(std::move(mode_)),
      absorb_prob(absorb_prob_),
      sink_label(std::move(sink_label_)),
      survivor_phase(survivor_phase_) {
  if (!(absorb_prob >= 0.0 && absorb_prob <= 1.0)) {
    throw DomainError("AbsorptionChannel: absorb_prob must lie in [0,1]");
  }
  if (!std::isfinite(survivor_phase)) {
    throw DomainError("AbsorptionChannel: non-finite survivor phase");
  }
}

ModeState apply_unitary(const ModeState& state, const Unitary& u) {
  require_finite(state, "apply_unitary");
  const std::size_t k = u.modes.size();
  std::vector<std::size_t> idx(k);
  for (std::size_t i = 0; i < k; ++i) {
    const int pos = state.find(u.modes[i]);
    if (pos < 0) throw ConfigError("apply_unitary: unknown mode label '" + u.modes[i].str() + "'");
    idx[i] = static_cast<std::size_t>(pos);
  }

  std::vector<Amplitude> in(k);
  for (std::size_t i = 0; i < k; ++i) in[i] = state.amplitudes[idx[i]].second;

  ModeState out = state;
  for (std::size_t i = 0; i < k; ++i) {
    Amplitude acc{0.0, 0.0};
    for (std::size_t j = 0; j < k; ++j) acc += u.matrix[i][j] * in[j];
    out.amplitudes[idx[i]].second = acc;
  }
  require_finite(out, "apply_unitary");
  return out;
}

std::pair<ModeState, AbsorbedEvent> apply_absorption(const ModeState& state,
                                                     const AbsorptionChannel& ch) {
  require_finite(state, "apply_absorption");
  const int pos = state.find(ch.mode);
  if (pos < 0) {
    throw ConfigError("apply_absorption: unknown mode label '" + ch.mode.str() + "'");
  }
  const std::size_t i = static_cast<std::size_t>(pos);
  const Amplitude a = state.amplitudes[i].second;
  const double mode_prob = std::norm(a);

  // Identity cases keep the state bit-exact.
  if (mode_prob == 0.0 || (ch.absorb_prob == 0.0 && ch.survivor_phase == 0.0)) {
    return {state, AbsorbedEvent{ch.sink_label, 0.0}};
  }

  const double absorbed = state.weight * ch.absorb_prob * mode_prob;

  ModeState survived = state;
  const Amplitude pass =
      std::sqrt(1.0 - ch.absorb_prob) * std::polar(1.0, ch.survivor_phase);
  survived.amplitudes[i].second = a * pass;

  const double remaining = norm_sq(survived);
  if (remaining <= 0.0) {
    // Dead branch: all mass went into the sink.
    for (auto& [label, amp] : survived.amplitudes) amp = Amplitude{0.0, 0.0};
    survived.weight = 0.0;
    return {survived, AbsorbedEvent{ch.sink_label, absorbed}};
  }

  const double scale = 1.0 / std::sqrt(remaining);
  for (auto& [label, amp] : survived.amplitudes) amp *= scale;
  survived.weight = state.weight * remaining;
  require_finite(survived, "apply_absorption");
  return {survived, AbsorbedEvent{ch.sink_label, absorbed}};
}

}  // namespace ifm
