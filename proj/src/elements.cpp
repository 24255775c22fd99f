#include "ifm/elements.hpp"

#include <cmath>
#include <numbers>

namespace ifm {

const char* to_string(ObjectKind kind) {
  switch (kind) {
    case ObjectKind::Absent: return "absent";
    case ObjectKind::Opaque: return "opaque";
    case ObjectKind::Exploding: return "exploding";
    case ObjectKind::Semitransparent: return "semitransparent";
    case ObjectKind::Dud: return "dud";
  }
  return "unknown";
}

ObjectSpec ObjectSpec::absent() { return ObjectSpec{ObjectKind::Absent, {1.0, 0.0}, "absorbed"}; }

ObjectSpec ObjectSpec::opaque() { return ObjectSpec{ObjectKind::Opaque, {0.0, 0.0}, "explosion"}; }

ObjectSpec ObjectSpec::exploding() {
  return ObjectSpec{ObjectKind::Exploding, {0.0, 0.0}, "explosion"};
}

ObjectSpec ObjectSpec::semitransparent(Amplitude t) {
  if (std::abs(t) > 1.0 + kTol) {
    throw DomainError("semitransparent object: |t| must not exceed 1");
  }
  return ObjectSpec{ObjectKind::Semitransparent, t, "absorbed"};
}

ObjectSpec ObjectSpec::dud() { return ObjectSpec{ObjectKind::Dud, {1.0, 0.0}, "absorbed"}; }

double ObjectSpec::absorb_prob() const {
  switch (kind) {
    case ObjectKind::Absent:
    case ObjectKind::Dud:
      return 0.0;
    case ObjectKind::Opaque:
    case ObjectKind::Exploding:
      return 1.0;
    case ObjectKind::Semitransparent: {
      const double p = 1.0 - std::norm(transmittance);
      return p < 0.0 ? 0.0 : p;  // |t| = 1 + eps rounds to 0
    }
  }
  return 0.0;
}

CavityCoupler::CavityCoupler(double theta_) : theta(theta_) {
  if (!(theta > 0.0 && theta <= std::numbers::pi / 2.0)) {
    throw DomainError("CavityCoupler: theta must lie in (0, pi/2]");
  }
}

MirrorPair::MirrorPair(double reflectivity_R_, double detuning_phi_)
    : reflectivity_R(reflectivity_R_), detuning_phi(detuning_phi_) {
  if (!(reflectivity_R >= 0.0 && reflectivity_R < 1.0)) {
    throw DomainError("MirrorPair: reflectivity R must lie in [0,1)");
  }
  if (!std::isfinite(detuning_phi)) {
    throw DomainError("MirrorPair: non-finite detuning");
  }
}

Unitary beam_splitter(double theta, const std::pair<ModeLabel, ModeLabel>& modes) {
  if (!(theta >= 0.0 && theta <= std::numbers::pi / 2.0)) {
    throw DomainError("beam_splitter: theta must lie in [0, pi/2]");
  }
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  return Unitary({modes.first, modes.second},
                 {{Amplitude{c, 0.0}, Amplitude{0.0, s}},
                  {Amplitude{0.0, s}, Amplitude{c, 0.0}}});
}

Unitary phase_shifter(double phi, const ModeLabel& mode) {
  if (!std::isfinite(phi)) throw DomainError("phase_shifter: non-finite phase");
  return Unitary({mode}, {{std::polar(1.0, phi)}});
}

Unitary coupler_rotation(const CavityCoupler& coupler, const ModeLabel& from,
                         const ModeLabel& to) {
  const double c = std::cos(coupler.theta);
  const double s = std::sin(coupler.theta);
  return Unitary({from, to},
                 {{Amplitude{c, 0.0}, Amplitude{-s, 0.0}},
                  {Amplitude{s, 0.0}, Amplitude{c, 0.0}}});
}

CavityCoupler zeno_coupler(int n) {
  if (n < 1) throw DomainError("zeno_coupler: N must be >= 1");
  return CavityCoupler(std::numbers::pi / (2.0 * n));
}

OpticalElement object_channel(const ObjectSpec& spec, const ModeLabel& mode) {
  switch (spec.kind) {
    case ObjectKind::Dud:
      // Locked trigger: a perfect mirror on the interferometer path.
      return Unitary({mode}, {{Amplitude{1.0, 0.0}}});
    case ObjectKind::Semitransparent: {
      if (std::abs(spec.transmittance) > 1.0 + kTol) {
        throw DomainError("object_channel: |t| must not exceed 1");
      }
      return AbsorptionChannel(mode, spec.absorb_prob(), spec.sink_label,
                               std::arg(spec.transmittance));
    }
    case ObjectKind::Absent:
    case ObjectKind::Opaque:
    case ObjectKind::Exploding:
      return AbsorptionChannel(mode, spec.absorb_prob(), spec.sink_label);
  }
  throw DomainError("object_channel: unknown object kind");
}

}  // namespace ifm
