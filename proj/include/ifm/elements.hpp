#pragma once

#include <string>
#include <utility>
#include <variant>

#include "ifm/qcore.hpp"

namespace ifm {

enum class ObjectKind { Absent, Opaque, Exploding, Semitransparent, Dud };

const char* to_string(ObjectKind kind);

/// The object placed in the interaction region. `transmittance` is the
/// complex per-pass amplitude a photon keeps when crossing it; it is
/// meaningful only for semitransparent objects (|t| = 1 elsewhere).
/// A dud has its trigger locked and acts as a perfect mirror.
struct ObjectSpec {
  ObjectKind kind = ObjectKind::Absent;
  Amplitude transmittance{1.0, 0.0};
  std::string sink_label = "absorbed";

  static ObjectSpec absent();
  static ObjectSpec opaque();
  static ObjectSpec exploding();
  static ObjectSpec semitransparent(Amplitude t);
  static ObjectSpec dud();

  /// Absorption probability implied by the kind (1 - |t|^2 for
  /// semitransparent objects).
  double absorb_prob() const;
};

/// Per-bounce mixing angle between the two connected cavities.
struct CavityCoupler {
  double theta;

  explicit CavityCoupler(double theta_);
};

/// Lossless Fabry-Perot mirror pair: each mirror has intensity
/// reflectivity R; phi is the round-trip detuning phase (0 = resonant).
struct MirrorPair {
  double reflectivity_R;
  double detuning_phi;

  explicit MirrorPair(double reflectivity_R_, double detuning_phi_ = 0.0);
};

/// A passive optical element: unitary or absorbing.
using OpticalElement = std::variant<Unitary, AbsorptionChannel>;

/// Symmetric beam splitter [[cos t, i sin t], [i sin t, cos t]] on the
/// given mode pair; theta = pi/4 is 50/50.
Unitary beam_splitter(double theta, const std::pair<ModeLabel, ModeLabel>& modes);

/// Multiplies the mode amplitude by e^{i phi}.
Unitary phase_shifter(double phi, const ModeLabel& mode);

/// Real rotation [[cos t, -sin t], [sin t, cos t]] on (from, to); N steps
/// of zeno_coupler(N) move all amplitude from `from` to `to`.
Unitary coupler_rotation(const CavityCoupler& coupler, const ModeLabel& from,
                         const ModeLabel& to);

/// Coupler whose N-step composition is a full A->B transfer.
CavityCoupler zeno_coupler(int n);

/// Channel (or mirror unitary, for duds) realizing the object on `mode`.
OpticalElement object_channel(const ObjectSpec& spec, const ModeLabel& mode);

}  // namespace ifm
