#include "ifm/cli.hpp"

#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ifm/protocols.hpp"
#include "ifm/report.hpp"
#include "ifm/sampler.hpp"

namespace ifm {

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitDomain = 3;

// Signals conditions mapped to exit code 2.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct CliOptions {
  std::string protocol;
  std::string object_name = "absent";
  int n = 0;
  double reflectivity = 0.0;
  double phi = 0.0;
  std::string t_text;
  std::string t_polar_text;
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
  std::string format = "csv";
  std::string output;
  std::string param;
  std::string values_text;
  double from = 0.0;
  double to = 0.0;
  int steps = 0;
};

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string current;
  for (const char c : text) {
    if (c == sep) {
      parts.push_back(current);
      current.clear();
    } else {
      current += c;
    }
  }
  parts.push_back(current);
  return parts;
}

double parse_real(const std::string& text, const std::string& flag) {
  double value = 0.0;
  const char* begin = text.data();
  const char* end = begin + text.size();
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc{} || ptr != end) {
    throw UsageError("flag " + flag + ": '" + text + "' is not a number");
  }
  return value;
}

Amplitude parse_cartesian(const std::string& text) {
  const std::vector<std::string> parts = split(text, ',');
  if (parts.size() == 1) return Amplitude{parse_real(parts[0], "--t"), 0.0};
  if (parts.size() == 2) {
    return Amplitude{parse_real(parts[0], "--t"), parse_real(parts[1], "--t")};
  }
  throw UsageError("flag --t expects 're' or 're,im'");
}

Amplitude parse_polar(const std::string& text) {
  const std::vector<std::string> parts = split(text, ',');
  if (parts.size() != 2) throw UsageError("flag --t-polar expects 'modulus,phase'");
  return std::polar(parse_real(parts[0], "--t-polar"), parse_real(parts[1], "--t-polar"));
}

ObjectSpec build_object(const std::string& name, const std::optional<Amplitude>& t) {
  if (name == "absent") return ObjectSpec::absent();
  if (name == "opaque") return ObjectSpec::opaque();
  if (name == "exploding") return ObjectSpec::exploding();
  if (name == "dud") return ObjectSpec::dud();
  if (name == "semitransparent") {
    if (!t.has_value()) {
      throw UsageError("object 'semitransparent' requires flag --t or --t-polar");
    }
    return ObjectSpec::semitransparent(*t);
  }
  throw UsageError("unknown object kind '" + name + "'");
}

void write_output(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    out << text;
    return;
  }
  std::ofstream file(path);
  if (!file) throw UsageError("flag --output: cannot open '" + path + "'");
  file << text;
}

std::string join(const std::vector<std::string>& parts, char sep) {
  std::string joined;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i > 0) joined += sep;
    joined += parts[i];
  }
  return joined;
}

struct RunFlags {
  CLI::Option* object = nullptr;
  CLI::Option* n = nullptr;
  CLI::Option* reflectivity = nullptr;
  CLI::Option* phi = nullptr;
  CLI::Option* t = nullptr;
  CLI::Option* t_polar = nullptr;
};

struct SweepFlags {
  CLI::Option* object = nullptr;
  CLI::Option* reflectivity = nullptr;
  CLI::Option* phi = nullptr;
  CLI::Option* values = nullptr;
  CLI::Option* from = nullptr;
  CLI::Option* to = nullptr;
  CLI::Option* steps = nullptr;
};

bool given(const CLI::Option* option) { return option != nullptr && option->count() > 0; }

void reject_flag(const std::string& flag, const std::string& protocol) {
  throw UsageError("flag " + flag + " is not valid for protocol '" + protocol + "'");
}

std::optional<Amplitude> transmittance_from(const CliOptions& opt, const RunFlags& flags) {
  if (given(flags.t)) return parse_cartesian(opt.t_text);
  if (given(flags.t_polar)) return parse_polar(opt.t_polar_text);
  return std::nullopt;
}

int do_run(const CliOptions& opt, const RunFlags& flags, std::ostream& out) {
  const std::string& p = opt.protocol;

  if (given(flags.object) && (p == "hardy" || p == "imaging")) reject_flag("--object", p);
  if (given(flags.n) && p != "zeno") reject_flag("--N", p);
  if (given(flags.reflectivity) && p != "fabry-perot") reject_flag("--R", p);
  if (given(flags.phi) && p != "fabry-perot") reject_flag("--phi", p);
  const bool wants_t = p == "imaging" || opt.object_name == "semitransparent";
  if (given(flags.t) && !wants_t) reject_flag("--t", p);
  if (given(flags.t_polar) && !wants_t) reject_flag("--t-polar", p);

  if (p == "zeno" && !given(flags.n)) throw UsageError("protocol 'zeno' requires flag --N");
  if (p == "fabry-perot" && !given(flags.reflectivity)) {
    throw UsageError("protocol 'fabry-perot' requires flag --R");
  }
  if (p == "penrose" && !given(flags.object)) {
    throw UsageError("protocol 'penrose' requires flag --object (exploding or dud)");
  }
  if (p == "imaging" && !given(flags.t) && !given(flags.t_polar)) {
    throw UsageError("protocol 'imaging' requires flag --t or --t-polar");
  }

  const std::optional<Amplitude> t = transmittance_from(opt, flags);

  ProtocolResult result;
  std::optional<ProtocolSetup> setup;
  std::optional<ImagingRow> imaging_row;
  std::vector<std::string> param_names;
  std::vector<std::string> param_values;

  if (p == "ev-mz") {
    const ObjectSpec object = build_object(opt.object_name, t);
    setup = ev_mz_setup(object);
    param_names = {"object"};
    param_values = {opt.object_name};
  } else if (p == "zeno") {
    const ObjectSpec object = build_object(opt.object_name, t);
    setup = zeno_setup(opt.n, object);
    param_names = {"N", "object"};
    param_values = {std::to_string(opt.n), opt.object_name};
  } else if (p == "fabry-perot") {
    const ObjectSpec object = build_object(opt.object_name, t);
    result = fabry_perot(MirrorPair(opt.reflectivity, opt.phi), object);
    param_names = {"R", "phi", "object"};
    param_values = {format_double(opt.reflectivity), format_double(opt.phi), opt.object_name};
  } else if (p == "penrose") {
    const ObjectSpec object = build_object(opt.object_name, t);
    setup = penrose_setup(object);
    param_names = {"object"};
    param_values = {opt.object_name};
  } else if (p == "hardy") {
    setup = hardy_setup(true);
  } else {  // imaging
    imaging_row = imaging_dose_sweep({*t}).front();
    setup = ev_mz_setup(ObjectSpec::semitransparent(*t));
    param_names = {"t"};
    param_values = {format_complex(*t)};
  }
  if (t.has_value() && p != "imaging") {
    param_names.emplace_back("t");
    param_values.push_back(format_complex(*t));
  }
  if (setup.has_value()) result = run_protocol(*setup);

  std::optional<SampleReport> sample_report;
  if (opt.trials > 0) {
    if (setup.has_value()) {
      sample_report = sample(setup->circuit, setup->initial, opt.trials, opt.seed);
    } else {
      sample_report = sample_distribution(result.distribution, opt.trials, opt.seed);
    }
  }

  ReportMeta meta;
  meta.protocol = p;
  meta.param_name = join(param_names, ';');
  meta.param_value = join(param_values, ';');
  meta.seed = opt.seed;
  meta.timestamp = iso8601_utc_now();

  std::string text;
  if (opt.format == "json") {
    text = json_run(meta, result, sample_report.has_value() ? &*sample_report : nullptr,
                    imaging_row.has_value() ? &*imaging_row : nullptr);
  } else {
    std::ostringstream csv;
    csv << csv_distribution(meta, result.distribution);
    csv << '\n' << csv_summary(meta, result);
    if (imaging_row.has_value()) {
      csv << '\n' << csv_imaging_header() << csv_imaging_row(*imaging_row);
    }
    if (sample_report.has_value()) {
      csv << '\n' << csv_sample(*sample_report, result.distribution);
    }
    text = csv.str();
  }
  write_output(text, opt.output, out);
  return 0;
}

std::vector<double> sweep_values(const CliOptions& opt, const SweepFlags& flags) {
  const bool has_values = given(flags.values);
  const bool has_range = given(flags.from) || given(flags.to) || given(flags.steps);
  if (has_values && has_range) {
    throw UsageError("flag --values conflicts with --from/--to/--steps");
  }
  std::vector<double> values;
  if (has_values) {
    for (const std::string& token : split(opt.values_text, ',')) {
      if (token.empty()) throw UsageError("flag --values: empty entry");
      values.push_back(parse_real(token, "--values"));
    }
  } else if (has_range) {
    if (!given(flags.from) || !given(flags.to) || !given(flags.steps)) {
      throw UsageError("flags --from, --to and --steps must be given together");
    }
    if (opt.steps < 1) throw UsageError("flag --steps: sweep is empty");
    if (opt.steps == 1) {
      values.push_back(opt.from);
    } else {
      for (int k = 0; k < opt.steps; ++k) {
        values.push_back(opt.from + (opt.to - opt.from) * k / (opt.steps - 1));
      }
    }
  }
  if (values.empty()) throw UsageError("sweep is empty: give --values or --from/--to/--steps");
  return values;
}

int do_sweep(const CliOptions& opt, const SweepFlags& flags, std::ostream& out) {
  const std::string& p = opt.protocol;

  static const std::vector<std::pair<std::string, std::string>> kAllowed = {
      {"zeno", "N"}, {"fabry-perot", "phi"}, {"fabry-perot", "R"}, {"imaging", "t"}};
  bool allowed = false;
  for (const auto& [proto, param] : kAllowed) {
    if (proto == p && param == opt.param) allowed = true;
  }
  if (!allowed) {
    throw UsageError("flag --param: '" + opt.param + "' is not sweepable for protocol '" + p +
                     "'");
  }

  if (given(flags.object) && p == "imaging") reject_flag("--object", p);
  if (given(flags.reflectivity)) {
    if (p != "fabry-perot") reject_flag("--R", p);
    if (opt.param == "R") throw UsageError("flag --R conflicts with sweeping R");
  }
  if (given(flags.phi)) {
    if (p != "fabry-perot") reject_flag("--phi", p);
    if (opt.param == "phi") throw UsageError("flag --phi conflicts with sweeping phi");
  }
  if (p == "fabry-perot" && opt.param == "phi" && !given(flags.reflectivity)) {
    throw UsageError("sweeping phi requires a fixed --R");
  }

  const std::vector<double> values = sweep_values(opt, flags);

  ReportMeta meta;
  meta.protocol = p;
  meta.param_name = opt.param;
  meta.param_value = "";
  meta.seed = opt.seed;
  meta.timestamp = iso8601_utc_now();

  std::string text;
  if (p == "imaging") {
    std::vector<Amplitude> ts;
    ts.reserve(values.size());
    for (const double v : values) ts.emplace_back(v, 0.0);
    const std::vector<ImagingRow> rows = imaging_dose_sweep(ts);
    if (opt.format == "json") {
      text = json_imaging(meta, rows);
    } else {
      std::ostringstream csv;
      csv << csv_imaging_header();
      for (const ImagingRow& row : rows) csv << csv_imaging_row(row);
      text = csv.str();
    }
  } else {
    const ObjectSpec object = build_object(opt.object_name, std::nullopt);
    std::vector<std::pair<std::string, ProtocolResult>> rows;
    rows.reserve(values.size());
    for (const double v : values) {
      if (p == "zeno") {
        if (v != std::floor(v) || v > 2e9) {
          throw UsageError("flag --param N: sweep values must be integers");
        }
        rows.emplace_back(format_double(v), zeno_cavity(static_cast<int>(v), object));
      } else {
        const MirrorPair mirrors = opt.param == "phi" ? MirrorPair(opt.reflectivity, v)
                                                      : MirrorPair(v, opt.phi);
        rows.emplace_back(format_double(v), fabry_perot(mirrors, object));
      }
    }
    if (opt.format == "json") {
      text = json_sweep(meta, rows);
    } else {
      std::ostringstream csv;
      csv << csv_sweep_header();
      for (const auto& [value, result] : rows) csv << csv_sweep_row(p, value, result);
      text = csv.str();
    }
  }
  write_output(text, opt.output, out);
  return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CliOptions opt;
  RunFlags run_flags;
  SweepFlags sweep_flags;

  CLI::App app{"Interaction-free measurement protocol simulator"};
  app.name("ifm");
  app.set_version_flag("--version", kToolVersion);
  app.require_subcommand(1);

  CLI::App* run_cmd = app.add_subcommand("run", "Evaluate one protocol configuration");
  run_cmd->add_option("protocol", opt.protocol, "Protocol to run")
      ->required()
      ->check(CLI::IsMember({"ev-mz", "zeno", "fabry-perot", "penrose", "hardy", "imaging"}));
  run_flags.object =
      run_cmd->add_option("--object", opt.object_name,
                          "Object kind: absent|opaque|exploding|semitransparent|dud")
          ->check(CLI::IsMember({"absent", "opaque", "exploding", "semitransparent", "dud"}));
  run_flags.n = run_cmd->add_option("--N", opt.n, "Bounce count (zeno)");
  run_flags.reflectivity =
      run_cmd->add_option("--R", opt.reflectivity, "Mirror reflectivity (fabry-perot)");
  run_flags.phi = run_cmd->add_option("--phi", opt.phi, "Round-trip detuning (fabry-perot)");
  run_flags.t = run_cmd->add_option("--t", opt.t_text, "Transmittance 're' or 're,im'");
  run_flags.t_polar =
      run_cmd->add_option("--t-polar", opt.t_polar_text, "Transmittance 'modulus,phase'");
  run_flags.t->excludes(run_flags.t_polar);
  run_cmd->add_option("--trials", opt.trials, "Monte Carlo trials (0 = exact only)");
  run_cmd->add_option("--seed", opt.seed, "RNG seed");
  run_cmd->add_option("--format", opt.format, "Output format")
      ->check(CLI::IsMember({"csv", "json"}));
  run_cmd->add_option("--output", opt.output, "Output path (default stdout)");

  CLI::App* sweep_cmd = app.add_subcommand("sweep", "Evaluate a protocol over a parameter range");
  sweep_cmd->add_option("protocol", opt.protocol, "Protocol to sweep")
      ->required()
      ->check(CLI::IsMember({"zeno", "fabry-perot", "imaging"}));
  sweep_cmd->add_option("--param", opt.param, "Swept parameter: N|phi|R|t")
      ->required()
      ->check(CLI::IsMember({"N", "phi", "R", "t"}));
  sweep_flags.values =
      sweep_cmd->add_option("--values", opt.values_text, "Comma-separated sweep values");
  sweep_flags.from = sweep_cmd->add_option("--from", opt.from, "Sweep start");
  sweep_flags.to = sweep_cmd->add_option("--to", opt.to, "Sweep end");
  sweep_flags.steps = sweep_cmd->add_option("--steps", opt.steps, "Sweep point count");
  sweep_flags.object =
      sweep_cmd->add_option("--object", opt.object_name,
                            "Object kind: absent|opaque|exploding|semitransparent|dud")
          ->check(CLI::IsMember({"absent", "opaque", "exploding", "semitransparent", "dud"}));
  sweep_flags.reflectivity =
      sweep_cmd->add_option("--R", opt.reflectivity, "Fixed mirror reflectivity");
  sweep_flags.phi = sweep_cmd->add_option("--phi", opt.phi, "Fixed round-trip detuning");
  sweep_cmd->add_option("--format", opt.format, "Output format")
      ->check(CLI::IsMember({"csv", "json"}));
  sweep_cmd->add_option("--output", opt.output, "Output path (default stdout)");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (run_cmd->parsed()) return do_run(opt, run_flags, out);
    return do_sweep(opt, sweep_flags, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kExitDomain;
  }
}

}  // namespace ifm
