#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "ifm/cli.hpp"
#include "ifm/protocols.hpp"
#include "ifm/report.hpp"
#include "json.hpp"

namespace {

struct CliResult {
  int code = -1;
  std::string out;
  std::string err;
};

CliResult invoke(const std::vector<std::string>& args) {
  std::ostringstream out;
  std::ostringstream err;
  CliResult result;
  result.code = ifm::run_cli(args, out, err);
  result.out = out.str();
  result.err = err.str();
  return result;
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  return lines;
}

std::vector<std::string> fields_of(const std::string& line) {
  std::vector<std::string> fields;
  std::string current;
  for (const char c : line) {
    if (c == ',') {
      fields.push_back(current);
      current.clear();
    } else {
      current += c;
    }
  }
  fields.push_back(current);
  return fields;
}

// The data line following the seven-column summary header.
std::vector<std::string> summary_row(const std::string& text) {
  const auto lines = lines_of(text);
  const std::string header =
      "protocol,param_value,p_detect,p_explode,p_inconclusive,eta,false_positive";
  for (std::size_t i = 0; i + 1 < lines.size(); ++i) {
    if (lines[i] == header) return fields_of(lines[i + 1]);
  }
  return {};
}

// The data line following the six-column dose-table header.
std::vector<std::string> dose_row(const std::string& text) {
  const auto lines = lines_of(text);
  const std::string header = "protocol,param_value,p_dark,p_bright,p_absorbed,dose_ratio";
  for (std::size_t i = 0; i + 1 < lines.size(); ++i) {
    if (lines[i] == header) return fields_of(lines[i + 1]);
  }
  return {};
}

// The distribution-section probability for an outcome label.
std::string probability_of(const std::string& text, const std::string& label) {
  for (const std::string& line : lines_of(text)) {
    const auto fields = fields_of(line);
    if (fields.size() == 5 && fields[3] == label) return fields[4];
  }
  return "<missing>";
}

}  // namespace

TEST_CASE("the canonical interferometer run prints the quarter split") {
  const auto result = invoke({"run", "ev-mz", "--object", "opaque"});
  CHECK(result.code == 0);
  CHECK(result.err.empty());
  CHECK(probability_of(result.out, "det:dark") == "0.25");
  CHECK(probability_of(result.out, "det:bright") == "0.25");
  CHECK(probability_of(result.out, "sink:explosion#0") == "0.5");
  const auto summary = summary_row(result.out);
  REQUIRE(summary.size() == 7);
  CHECK(summary[1] == "opaque");
  CHECK(summary[2] == "0.25");          // p_detect
  CHECK(summary[3] == "0.5");           // p_explode
  CHECK(summary[4] == "0.25");          // p_inconclusive
  CHECK(summary[5] == "0.333333333333");  // eta
  CHECK(summary[6] == "0");             // false_positive
}

TEST_CASE("the default object is absent and the dark port prints zero") {
  const auto result = invoke({"run", "ev-mz"});
  CHECK(result.code == 0);
  CHECK(probability_of(result.out, "det:dark") == "0");
  CHECK(probability_of(result.out, "det:bright") == "1");
}

TEST_CASE("a single-bounce cavity run never clicks the announcing detector") {
  const auto result = invoke({"run", "zeno", "--N", "1", "--object", "opaque"});
  CHECK(result.code == 0);
  const auto summary = summary_row(result.out);
  REQUIRE(summary.size() == 7);
  CHECK(summary[1] == "1;opaque");
  CHECK(summary[2] == "0");  // p_detect: the photon always reaches the object
  CHECK(summary[3] == "1");  // p_explode
  CHECK(summary[5] == "0");  // eta
}

TEST_CASE("joint-interferometer probabilities reach the JSON report") {
  const auto result = invoke({"run", "hardy", "--format", "json"});
  CHECK(result.code == 0);
  const auto doc = nlohmann::json::parse(result.out);
  CHECK(doc["metadata"]["protocol"] == "hardy");
  CHECK(doc["distribution"]["det:dark_dark"].get<double>() == 0.0625);
  CHECK(doc["distribution"]["sink:annihilation#0"].get<double>() == 0.25);
  CHECK(doc["summary"]["eta"].get<double>() == 0.2);
}

TEST_CASE("a dud run reports no absorption outcome at all") {
  const auto result = invoke({"run", "penrose", "--object", "dud"});
  CHECK(result.code == 0);
  CHECK(probability_of(result.out, "det:bright") == "1");
  CHECK(probability_of(result.out, "det:dark") == "0");
  CHECK(result.out.find("sink:") == std::string::npos);
}

TEST_CASE("irrelevant flags are rejected by name") {
  const auto n_flag = invoke({"run", "ev-mz", "--N", "5"});
  CHECK(n_flag.code == 2);
  CHECK(n_flag.err.find("--N") != std::string::npos);
  CHECK(n_flag.err.find("ev-mz") != std::string::npos);

  const auto object_flag = invoke({"run", "hardy", "--object", "opaque"});
  CHECK(object_flag.code == 2);
  CHECK(object_flag.err.find("--object") != std::string::npos);

  const auto r_flag = invoke({"run", "zeno", "--N", "5", "--R", "0.9"});
  CHECK(r_flag.code == 2);
  CHECK(r_flag.err.find("--R") != std::string::npos);

  const auto t_flag = invoke({"run", "ev-mz", "--object", "opaque", "--t", "0.5"});
  CHECK(t_flag.code == 2);
  CHECK(t_flag.err.find("--t") != std::string::npos);
}

TEST_CASE("protocols insist on their required flags") {
  CHECK(invoke({"run", "zeno"}).code == 2);
  CHECK(invoke({"run", "fabry-perot"}).code == 2);
  CHECK(invoke({"run", "penrose"}).code == 2);
  CHECK(invoke({"run", "imaging"}).code == 2);
  CHECK(invoke({"run", "ev-mz", "--object", "semitransparent"}).code == 2);
}

TEST_CASE("cartesian and polar transmittance are mutually exclusive") {
  const auto result =
      invoke({"run", "imaging", "--t", "0.6", "--t-polar", "0.6,0"});
  CHECK(result.code == 2);
}

TEST_CASE("an imaging run adds the dose table") {
  const auto result = invoke({"run", "imaging", "--t", "0.6"});
  CHECK(result.code == 0);
  const auto row = dose_row(result.out);
  REQUIRE(row.size() == 6);
  CHECK(row[1] == "0.6");
  CHECK(row[2] == "0.04");
  CHECK(row[3] == "0.64");
  CHECK(row[4] == "0.32");
  CHECK(row[5] == "0.5");
}

TEST_CASE("a transparent sample prints nan for the dose ratio") {
  const auto result = invoke({"run", "imaging", "--t", "1"});
  CHECK(result.code == 0);
  const auto row = dose_row(result.out);
  REQUIRE(row.size() == 6);
  CHECK(row[1] == "1");
  CHECK(row[5] == "nan");
}

TEST_CASE("polar transmittance matches its cartesian absorption") {
  const auto result = invoke({"run", "imaging", "--t-polar", "0.8,1.1"});
  CHECK(result.code == 0);
  const auto row = dose_row(result.out);
  REQUIRE(row.size() == 6);
  // |t| = 0.8 gives p_absorbed = (1 - 0.64)/2 = 0.18 regardless of phase.
  CHECK(row[1].find("i") != std::string::npos);
  CHECK(std::stod(row[4]) == doctest::Approx(0.18).epsilon(1e-9));
  CHECK(row[5] == "0.5");
}

TEST_CASE("out-of-range physics parameters exit with the domain code") {
  CHECK(invoke({"run", "zeno", "--N", "0", "--object", "opaque"}).code == 3);
  CHECK(invoke({"run", "fabry-perot", "--R", "1.2"}).code == 3);
  CHECK(invoke({"run", "imaging", "--t", "1.5"}).code == 3);
  CHECK(invoke({"run", "ev-mz", "--object", "semitransparent", "--t", "1.5,0"}).code == 3);
  CHECK(invoke({"run", "fabry-perot", "--R", "0.9", "--object", "dud"}).code == 3);
}

TEST_CASE("malformed invocations exit with the usage code") {
  CHECK(invoke({}).code == 2);
  CHECK(invoke({"run"}).code == 2);
  CHECK(invoke({"run", "unknown-protocol"}).code == 2);
  CHECK(invoke({"run", "ev-mz", "--format", "xml"}).code == 2);
  CHECK(invoke({"run", "ev-mz", "--bogus"}).code == 2);
  CHECK(invoke({"run", "ev-mz", "--object", "bogus"}).code == 2);
  CHECK(invoke({"bogus-command"}).code == 2);
}

TEST_CASE("version and help requests succeed") {
  const auto version = invoke({"--version"});
  CHECK(version.code == 0);
  CHECK(version.out.find(ifm::kToolVersion) != std::string::npos);
  const auto help = invoke({"--help"});
  CHECK(help.code == 0);
  CHECK(help.out.find("run") != std::string::npos);
  CHECK(help.out.find("sweep") != std::string::npos);
}

TEST_CASE("bounce-count sweeps print one row per value") {
  const auto result =
      invoke({"sweep", "zeno", "--param", "N", "--values", "1,10,100", "--object", "opaque"});
  CHECK(result.code == 0);
  const auto lines = lines_of(result.out);
  REQUIRE(lines.size() == 4);
  CHECK(lines[0] == ifm::csv_sweep_header().substr(0, ifm::csv_sweep_header().size() - 1));
  // The N = 10 row round-trips the library's numbers through the text format.
  const auto row = fields_of(lines[2]);
  REQUIRE(row.size() == 7);
  CHECK(row[1] == "10");
  const auto expected = ifm::zeno_cavity(10, ifm::ObjectSpec::opaque());
  CHECK(std::stod(row[2]) == ifm::round_sig(expected.p_detect_object, 12));
  CHECK(std::stod(row[3]) == ifm::round_sig(expected.p_explosion, 12));
  CHECK(std::stod(row[5]) == ifm::round_sig(expected.efficiency_eta, 12));
}

TEST_CASE("detuning sweeps carry the false-positive column") {
  const auto result = invoke({"sweep", "fabry-perot", "--param", "phi", "--R", "0.99",
                              "--values", "0,0.01"});
  CHECK(result.code == 0);
  const auto lines = lines_of(result.out);
  REQUIRE(lines.size() == 3);
  const auto resonant = fields_of(lines[1]);
  const auto detuned = fields_of(lines[2]);
  REQUIRE(resonant.size() == 7);
  REQUIRE(detuned.size() == 7);
  CHECK(std::stod(resonant[6]) == 0.0);
  CHECK(std::stod(detuned[6]) == doctest::Approx(0.497485353904).epsilon(1e-9));
}

TEST_CASE("reflectivity sweeps hold the detuning fixed") {
  const auto result = invoke({"sweep", "fabry-perot", "--param", "R", "--phi", "0.01",
                              "--values", "0.5,0.99", "--object", "absent"});
  CHECK(result.code == 0);
  const auto lines = lines_of(result.out);
  REQUIRE(lines.size() == 3);
  const auto expected = ifm::fabry_perot(ifm::MirrorPair(0.99, 0.01), ifm::ObjectSpec::absent());
  CHECK(std::stod(fields_of(lines[2])[2]) == ifm::round_sig(expected.p_detect_object, 12));
}

TEST_CASE("imaging sweeps produce dose rows over a linear grid") {
  const auto result = invoke({"sweep", "imaging", "--param", "t", "--from", "0", "--to", "1",
                              "--steps", "5"});
  CHECK(result.code == 0);
  const auto lines = lines_of(result.out);
  REQUIRE(lines.size() == 6);
  CHECK(fields_of(lines[1])[1] == "0");
  CHECK(fields_of(lines[2])[1] == "0.25");
  CHECK(fields_of(lines[5])[1] == "1");
  CHECK(fields_of(lines[1])[5] == "0.5");
  CHECK(fields_of(lines[5])[5] == "nan");
}

TEST_CASE("sweep misuse exits with the usage code and a named flag") {
  const auto conflict =
      invoke({"sweep", "fabry-perot", "--param", "R", "--R", "0.9", "--values", "0.5"});
  CHECK(conflict.code == 2);
  CHECK(conflict.err.find("--R") != std::string::npos);

  const auto no_r = invoke({"sweep", "fabry-perot", "--param", "phi", "--values", "0"});
  CHECK(no_r.code == 2);
  CHECK(no_r.err.find("--R") != std::string::npos);

  CHECK(invoke({"sweep", "zeno", "--param", "N", "--values", "2.5"}).code == 2);
  CHECK(invoke({"sweep", "zeno", "--param", "phi", "--values", "0.1"}).code == 2);
  CHECK(invoke({"sweep", "imaging", "--param", "t", "--values", "0.5", "--object", "opaque"})
            .code == 2);
  CHECK(invoke({"sweep", "zeno", "--param", "N", "--values", "1", "--from", "1", "--to", "2",
                "--steps", "2"})
            .code == 2);
  CHECK(invoke({"sweep", "zeno", "--param", "N", "--from", "1"}).code == 2);
  CHECK(invoke({"sweep", "zeno", "--param", "N", "--from", "1", "--to", "5", "--steps", "0"})
            .code == 2);
  CHECK(invoke({"sweep", "zeno", "--param", "N", "--values", ""}).code == 2);
  CHECK(invoke({"sweep", "zeno", "--param", "N"}).code == 2);
  CHECK(invoke({"sweep", "hardy", "--param", "N", "--values", "1"}).code == 2);
}

TEST_CASE("sampled runs are reproducible seed for seed") {
  const std::vector<std::string> args = {"run",     "zeno",   "--N",    "5",
                                         "--object", "opaque", "--trials", "2000",
                                         "--seed",  "7",      "--format", "json"};
  const auto first = invoke(args);
  const auto second = invoke(args);
  CHECK(first.code == 0);
  const auto doc1 = nlohmann::json::parse(first.out);
  const auto doc2 = nlohmann::json::parse(second.out);
  CHECK(doc1["sample"] == doc2["sample"]);
  CHECK(doc1["distribution"] == doc2["distribution"]);
  CHECK(doc1["metadata"]["seed"] == 7);

  std::uint64_t total = 0;
  for (const auto& [label, count] : doc1["sample"]["counts"].items()) {
    total += count.get<std::uint64_t>();
  }
  CHECK(total == 2000);
  CHECK(doc1["distribution"]["det:A"].get<double>() ==
        ifm::round_sig(std::pow(std::cos(std::numbers::pi / 10.0), 10.0), 12));
}

TEST_CASE("steady-state cavity runs can be sampled too") {
  const auto result = invoke({"run", "fabry-perot", "--R", "0.5", "--object", "opaque",
                              "--trials", "1000", "--seed", "3", "--format", "json"});
  CHECK(result.code == 0);
  const auto doc = nlohmann::json::parse(result.out);
  std::uint64_t total = 0;
  for (const auto& [label, count] : doc["sample"]["counts"].items()) {
    total += count.get<std::uint64_t>();
    CHECK((label == "det:reflect" || label == "det:transmit" || label == "sink:explosion#0"));
  }
  CHECK(total == 1000);
}

TEST_CASE("reports can be written to a file instead of stdout") {
  const std::string path = "cli_test_output.tmp";
  const auto result = invoke({"run", "ev-mz", "--object", "opaque", "--output", path});
  CHECK(result.code == 0);
  CHECK(result.out.empty());
  std::ifstream file(path);
  REQUIRE(file.good());
  std::stringstream content;
  content << file.rdbuf();
  CHECK(content.str().find("det:dark,0.25") != std::string::npos);
  file.close();
  CHECK(std::remove(path.c_str()) == 0);
}

TEST_CASE("unwritable output paths are usage errors") {
  const auto result = invoke({"run", "ev-mz", "--output", "no-such-dir/out.csv"});
  CHECK(result.code == 2);
  CHECK(result.err.find("--output") != std::string::npos);
}
