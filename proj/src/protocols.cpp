#include "ifm/protocols.hpp"

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <utility>

namespace ifm {

namespace {

constexpr double kHalfPi = std::numbers::pi / 2.0;

Element as_element(const OpticalElement& el) {
  return std::visit([](const auto& e) -> Element { return e; }, el);
}

struct CavityResponse {
  Amplitude reflected;
  Amplitude transmitted;
  double absorbed = 0.0;
};

// Steady-state response of the two-mirror cavity with a per-pass amplitude
// transmittance t inside.  Mirrors are lossless and symmetric: outside
// reflection +r, cavity-side reflections -r, transmission tau (Stokes
// relations).  phi is the round-trip detuning phase.
CavityResponse cavity_response(double reflectivity_R, double phi, Amplitude t) {
  const double r = std::sqrt(reflectivity_R);
  const double tau = std::sqrt(1.0 - reflectivity_R);
  const Amplitude round_trip = Amplitude{reflectivity_R, 0.0} * t * t * std::polar(1.0, phi);

  // Geometric series sum_k round_trip^k to |term| < 1e-15.
  Amplitude series{0.0, 0.0};
  Amplitude term{1.0, 0.0};
  long iterations = 0;
  while (std::abs(term) >= 1e-15) {
    series += term;
    term *= round_trip;
    if (++iterations > 100'000'000L) {
      throw DomainError("fabry_perot: round-trip series did not converge");
    }
  }

  const Amplitude forward = tau * series;  // intracavity amplitude heading at the object
  CavityResponse out;
  out.reflected = r - r * tau * tau * t * t * std::polar(1.0, phi) * series;
  out.transmitted = tau * tau * t * series;
  const double loss = 1.0 - std::norm(t);
  out.absorbed = loss * (1.0 + reflectivity_R * std::norm(t)) * std::norm(forward);
  return out;
}

}  // namespace

ProtocolResult summarize(const OutcomeDistribution& dist, const std::string& detect_label) {
  ProtocolResult result;
  result.distribution = dist;
  for (const auto& [label, p] : dist.entries) {
    if (label == detect_label) {
      result.p_detect_object += p;
    } else if (label.starts_with("sink:")) {
      result.p_explosion += p;
    } else {
      result.p_inconclusive += p;
    }
  }
  result.efficiency_eta = efficiency(result);
  return result;
}

ProtocolResult run_protocol(const ProtocolSetup& setup) {
  return summarize(run_exact(setup.circuit, setup.initial), setup.detect_label);
}

double efficiency(const ProtocolResult& result) {
  const double denom = result.p_detect_object + result.p_explosion;
  // Below working precision the denominator is interference residue, not a
  // click probability; treat it as zero rather than amplify it to eta = 1.
  if (denom <= kTol) return 0.0;
  return result.p_detect_object / denom;
}

ProtocolSetup ev_mz_setup(const ObjectSpec& object) {
  const ModeLabel upper{"upper"};
  const ModeLabel lower{"lower"};
  std::vector<Element> elements;
  elements.push_back(beam_splitter(kHalfPi / 2.0, {upper, lower}));
  elements.push_back(as_element(object_channel(object, lower)));
  // Phase tuning slot; zero with this splitter convention puts the dark
  // fringe on the upper output.
  elements.push_back(phase_shifter(0.0, upper));
  elements.push_back(beam_splitter(kHalfPi / 2.0, {upper, lower}));
  Circuit circuit({upper, lower}, std::move(elements), {{upper, "dark"}, {lower, "bright"}});
  ModeState initial = ModeState::basis({upper, lower}, 0);
  return ProtocolSetup{std::move(circuit), std::move(initial), detector_outcome("dark")};
}

ProtocolResult ev_mz(const ObjectSpec& object) { return run_protocol(ev_mz_setup(object)); }

ProtocolSetup zeno_setup(int n, const ObjectSpec& object) {
  const ModeLabel a{"A"};
  const ModeLabel b{"B"};
  std::vector<OpticalElement> bounce;
  bounce.push_back(coupler_rotation(zeno_coupler(n), a, b));
  bounce.push_back(object_channel(object, b));
  std::vector<Element> elements;
  elements.push_back(repeat_block(std::move(bounce), n));
  Circuit circuit({a, b}, std::move(elements), {{a, "A"}, {b, "B"}});
  ModeState initial = ModeState::basis({a, b}, 0);
  return ProtocolSetup{std::move(circuit), std::move(initial), detector_outcome("A")};
}

ProtocolResult zeno_cavity(int n, const ObjectSpec& object) {
  return run_protocol(zeno_setup(n, object));
}

ProtocolResult fabry_perot(const MirrorPair& mirrors, const ObjectSpec& object) {
  if (object.kind == ObjectKind::Dud) {
    throw DomainError("fabry_perot: dud objects are not supported");
  }
  Amplitude t = object.transmittance;
  if (object.kind == ObjectKind::Absent) t = Amplitude{1.0, 0.0};
  if (object.kind == ObjectKind::Opaque || object.kind == ObjectKind::Exploding) {
    t = Amplitude{0.0, 0.0};
  }

  const CavityResponse response = cavity_response(mirrors.reflectivity_R, mirrors.detuning_phi, t);

  OutcomeDistribution dist;
  dist.entries[detector_outcome("reflect")] = std::norm(response.reflected);
  dist.entries[detector_outcome("transmit")] = std::norm(response.transmitted);
  dist.entries[sink_outcome(object.sink_label, 0)] = response.absorbed;

  ProtocolResult result = summarize(dist, detector_outcome("reflect"));
  const CavityResponse empty =
      cavity_response(mirrors.reflectivity_R, mirrors.detuning_phi, Amplitude{1.0, 0.0});
  result.false_positive = std::norm(empty.reflected);
  return result;
}

ProtocolSetup penrose_setup(const ObjectSpec& object) {
  if (object.kind != ObjectKind::Exploding && object.kind != ObjectKind::Dud) {
    throw DomainError("penrose_dud: object must be exploding or dud");
  }
  const ModeLabel upper{"upper"};
  const ModeLabel lower{"lower"};
  std::vector<Element> elements;
  elements.push_back(beam_splitter(kHalfPi / 2.0, {upper, lower}));
  // The object stands in for the lower-arm mirror: a dud reflects like the
  // mirror it replaces (identity here, the mirror being part of the
  // wiring), a live trigger absorbs the photon.
  elements.push_back(as_element(object_channel(object, lower)));
  elements.push_back(phase_shifter(0.0, upper));
  elements.push_back(beam_splitter(kHalfPi / 2.0, {upper, lower}));
  Circuit circuit({upper, lower}, std::move(elements), {{upper, "dark"}, {lower, "bright"}});
  ModeState initial = ModeState::basis({upper, lower}, 0);
  return ProtocolSetup{std::move(circuit), std::move(initial), detector_outcome("dark")};
}

ProtocolResult penrose_dud(const ObjectSpec& object) {
  return run_protocol(penrose_setup(object));
}

ProtocolSetup hardy_setup(bool include_annihilation) {
  // Joint configuration modes "<arm of particle 1>&<arm of particle 2>";
  // the inner arms overlap.
  const ModeLabel oo{"outer&outer"};
  const ModeLabel oi{"outer&inner"};
  const ModeLabel io{"inner&outer"};
  const ModeLabel ii{"inner&inner"};
  const double theta = kHalfPi / 2.0;

  std::vector<Element> elements;
  // Entry splitters, one per particle; each acts on the pair of joint modes
  // that differ only in that particle's arm.
  elements.push_back(beam_splitter(theta, {oo, io}));
  elements.push_back(beam_splitter(theta, {oi, ii}));
  elements.push_back(beam_splitter(theta, {oo, oi}));
  elements.push_back(beam_splitter(theta, {io, ii}));
  if (include_annihilation) {
    elements.push_back(AbsorptionChannel(ii, 1.0, "annihilation"));
  }
  // Exit splitters.
  elements.push_back(beam_splitter(theta, {oo, io}));
  elements.push_back(beam_splitter(theta, {oi, ii}));
  elements.push_back(beam_splitter(theta, {oo, oi}));
  elements.push_back(beam_splitter(theta, {io, ii}));

  Circuit circuit({oo, oi, io, ii}, std::move(elements),
                  {{oo, "dark_dark"}, {oi, "dark_bright"}, {io, "bright_dark"},
                   {ii, "bright_bright"}});
  ModeState initial = ModeState::basis({oo, oi, io, ii}, 0);
  return ProtocolSetup{std::move(circuit), std::move(initial), detector_outcome("dark_dark")};
}

OutcomeDistribution hardy() {
  const ProtocolSetup setup = hardy_setup(true);
  return run_exact(setup.circuit, setup.initial);
}

ProtocolResult hardy_result() { return run_protocol(hardy_setup(true)); }

std::vector<ImagingRow> imaging_dose_sweep(const std::vector<Amplitude>& t_values) {
  std::vector<ImagingRow> rows;
  rows.reserve(t_values.size());
  for (const Amplitude& t : t_values) {
    const ProtocolResult result = ev_mz(ObjectSpec::semitransparent(t));
    ImagingRow row;
    row.t = t;
    row.p_dark = result.distribution.prob(detector_outcome("dark"));
    row.p_bright = result.distribution.prob(detector_outcome("bright"));
    row.p_absorbed = result.p_explosion;
    const double direct = 1.0 - std::norm(t);
    if (direct <= 0.0 && row.p_absorbed <= 0.0) {
      row.dose_ratio = std::numeric_limits<double>::quiet_NaN();
    } else {
      row.dose_ratio = row.p_absorbed / direct;
    }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace ifm
