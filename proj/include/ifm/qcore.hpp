#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace ifm {

/// Complex amplitude carried by a photonic mode.
using Amplitude = std::complex<double>;

/// Tolerance shared by every norm / unitarity / mass-conservation check.
inline constexpr double kTol = 1e-12;

/// A circuit or state references modes inconsistently (unknown label,
/// duplicate detector, malformed wiring).
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A numeric parameter is outside its allowed range.
struct DomainError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Names one photonic mode. `particle` tags the register a mode belongs
/// to in multi-particle setups; -1 means a single-particle space.
struct ModeLabel {
  std::string name;
  int particle = -1;

  bool operator==(const ModeLabel& other) const = default;

  /// "name" or "p<particle>:name".
  std::string str() const;
};

/// Amplitude vector over labeled modes, normalized or subnormalized.
/// `weight` is the classical probability of the branch this state lives
/// on, so weight * norm_sq(state) is the absolute probability mass.
struct ModeState {
  std::vector<std::pair<ModeLabel, Amplitude>> amplitudes;
  double weight = 1.0;

  ModeState() = default;
  ModeState(std::vector<std::pair<ModeLabel, Amplitude>> amps, double w = 1.0);

  /// Unit basis state: all amplitude on modes[occupied].
  static ModeState basis(const std::vector<ModeLabel>& modes, std::size_t occupied);

  /// Index of `label`, or -1 when the state does not carry it.
  int find(const ModeLabel& label) const;

  /// Amplitude on `label`; ConfigError when the mode is unknown.
  Amplitude amp(const ModeLabel& label) const;
};

/// Sum of |amplitude|^2 over all modes.
double norm_sq(const ModeState& state);

/// weight * norm_sq: absolute probability mass carried by the state.
double mass(const ModeState& state);

/// k-mode unitary element. U†U = I is enforced at construction to kTol.
struct Unitary {
  std::vector<ModeLabel> modes;
  std::vector<std::vector<Amplitude>> matrix;  // square, modes.size() rows

  Unitary(std::vector<ModeLabel> modes_, std::vector<std::vector<Amplitude>> matrix_);
};

/// Non-unitary element: moves probability mass on `mode` into a labeled
/// classical sink. Amplitude that survives the object is additionally
/// rotated by survivor_phase (partial absorbers imprint arg(t) there).
struct AbsorptionChannel {
  ModeLabel mode;
  double absorb_prob;
  std::string sink_label;
  double survivor_phase;

  AbsorptionChannel(ModeLabel mode_, double absorb_prob_, std::string sink_label_,
                    double survivor_phase_ = 0.0);
};

/// Classical record produced by one absorption-channel application.
struct AbsorbedEvent {
  std::string sink_label;
  double probability = 0.0;
};

/// Applies u to the amplitudes on u.modes; all other amplitudes are
/// untouched. Norm is preserved.
ModeState apply_unitary(const ModeState& state, const Unitary& u);

/// Splits the branch at the object. Returns the surviving state
/// (amplitudes renormalized to unit norm, weight rescaled so the mass
/// bookkeeping stays exact) plus the absorbed event; the absorbed
/// probability and the surviving mass add up to the input mass.
std::pair<ModeState, AbsorbedEvent> apply_absorption(const ModeState& state,
                                                     const AbsorptionChannel& ch);

}  // namespace ifm
