#pragma once

#include <string>
#include <vector>

#include "ifm/circuits.hpp"
#include "ifm/elements.hpp"

namespace ifm {

// Single-shot summary of a protocol run.
//   p_detect_object   probability of the object-announcing click
//   p_explosion       total mass absorbed at the object
//   p_inconclusive    remaining mass
//   efficiency_eta    p_detect / (p_detect + p_explosion), 0 when both are 0
//   false_positive    probability of the announcing click with no object
//                     present (nonzero only for the cavity scheme)
struct ProtocolResult {
  OutcomeDistribution distribution;
  double p_detect_object = 0.0;
  double p_explosion = 0.0;
  double p_inconclusive = 0.0;
  double efficiency_eta = 0.0;
  double false_positive = 0.0;
};

// A built protocol: circuit, initial state, and the outcome label whose
// click announces the object.
struct ProtocolSetup {
  Circuit circuit;
  ModeState initial;
  std::string detect_label;
};

ProtocolResult summarize(const OutcomeDistribution& dist, const std::string& detect_label);
ProtocolResult run_protocol(const ProtocolSetup& setup);

// Mach-Zehnder with the object on the lower arm; detectors dark (upper) and
// bright (lower).  The dark port is silent whenever the object channel is
// the identity.
ProtocolSetup ev_mz_setup(const ObjectSpec& object);
ProtocolResult ev_mz(const ObjectSpec& object);

// Two coupled cavities A and B, N bounces of rotation pi/2N with the object
// in B, terminal measurement of which cavity holds the photon.  A click on
// A announces the object.
ProtocolSetup zeno_setup(int n, const ObjectSpec& object);
ProtocolResult zeno_cavity(int n, const ObjectSpec& object);

// Resonant cavity in steady state, response summed as the round-trip
// geometric series to |term| < 1e-15.  Reflection announces the object;
// false_positive records the empty-cavity reflection at the same detuning.
// Dud objects are rejected (a locked mirror inside a cavity has no
// transmittance model here).
ProtocolResult fabry_perot(const MirrorPair& mirrors, const ObjectSpec& object);

// Dud discrimination: the object replaces the lower-arm mirror, so only
// exploding and dud kinds are meaningful.  A dud reflects like a perfect
// mirror and restores the empty-interferometer interference; note this is a
// different wiring from ev_mz(absent), where the arm keeps its own mirror
// and the (separate) object is simply missing.
ProtocolSetup penrose_setup(const ObjectSpec& object);
ProtocolResult penrose_dud(const ObjectSpec& object);

// Two overlapping interferometers; the joint mode where both particles
// occupy the inner arms is annihilated.  Joint detectors dark/bright per
// particle; the dark_dark click is the announcing outcome.
ProtocolSetup hardy_setup(bool include_annihilation = true);
OutcomeDistribution hardy();
ProtocolResult hardy_result();

double efficiency(const ProtocolResult& result);

// One row of the imaging dose table.  dose_ratio compares the absorbed dose
// against a direct transmission measurement (1 - |t|^2); NaN when both
// doses are zero (fully transparent object).
struct ImagingRow {
  Amplitude t;
  double p_dark = 0.0;
  double p_bright = 0.0;
  double p_absorbed = 0.0;
  double dose_ratio = 0.0;
};

std::vector<ImagingRow> imaging_dose_sweep(const std::vector<Amplitude>& t_values);

}  // namespace ifm
