#include "ifm/report.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <sstream>

#include "json.hpp"

namespace ifm {

namespace {

using OrderedJson = nlohmann::ordered_json;

// JSON has no NaN literal; non-finite values become null.
OrderedJson json_number(double v) {
  if (!std::isfinite(v)) return nullptr;
  return round_sig(v, report_precision());
}

OrderedJson json_probability(double v) { return json_number(clamp_report(v)); }

OrderedJson metadata_block(const ReportMeta& meta) {
  OrderedJson m;
  m["tool_version"] = kToolVersion;
  m["rng"] = kRngAlgorithm;
  m["seed"] = meta.seed;
  m["timestamp"] = meta.timestamp;
  m["protocol"] = meta.protocol;
  m["param_name"] = meta.param_name;
  m["param_value"] = meta.param_value;
  return m;
}

OrderedJson summary_block(const ProtocolResult& result) {
  OrderedJson s;
  s["p_detect"] = json_probability(result.p_detect_object);
  s["p_explode"] = json_probability(result.p_explosion);
  s["p_inconclusive"] = json_probability(result.p_inconclusive);
  s["eta"] = json_probability(result.efficiency_eta);
  s["false_positive"] = json_probability(result.false_positive);
  return s;
}

std::string prob(double v) { return format_double(clamp_report(v)); }

}  // namespace

int report_precision() {
  const char* env = std::getenv("IFM_PRECISION");
  if (env == nullptr || *env == '\0') return 12;
  int digits = 0;
  const char* end = env + std::string_view(env).size();
  const auto [ptr, ec] = std::from_chars(env, end, digits);
  if (ec != std::errc{} || ptr != end || digits < 1 || digits > 17) {
    throw ConfigError("IFM_PRECISION must be an integer in [1,17]");
  }
  return digits;
}

std::string format_double(double v, int digits) {
  std::array<char, 64> buf{};
  const auto [ptr, ec] =
      std::to_chars(buf.data(), buf.data() + buf.size(), v, std::chars_format::general, digits);
  if (ec != std::errc{}) throw DomainError("format_double: formatting failed");
  return std::string(buf.data(), ptr);
}

std::string format_double(double v) { return format_double(v, report_precision()); }

double round_sig(double v, int digits) {
  if (!std::isfinite(v)) return v;
  const std::string text = format_double(v, digits);
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
  if (ec != std::errc{}) throw DomainError("round_sig: parse failed");
  return out;
}

double clamp_report(double v) {
  if (std::isfinite(v) && std::abs(v) < 1e-15) return 0.0;
  return v;
}

std::string format_complex(Amplitude a) {
  if (a.imag() == 0.0) return format_double(a.real());
  const std::string re = format_double(a.real());
  const std::string im = format_double(std::abs(a.imag()));
  return re + (a.imag() < 0.0 ? "-" : "+") + im + "i";
}

std::string iso8601_utc_now() {
  const std::time_t now = std::time(nullptr);
  std::tm utc{};
  gmtime_r(&now, &utc);
  std::array<char, 32> buf{};
  const std::size_t n = std::strftime(buf.data(), buf.size(), "%Y-%m-%dT%H:%M:%SZ", &utc);
  return std::string(buf.data(), n);
}

std::string csv_distribution(const ReportMeta& meta, const OutcomeDistribution& dist) {
  std::ostringstream out;
  out << "protocol,param_name,param_value,outcome_label,probability\n";
  for (const auto& [label, p] : dist.entries) {
    out << meta.protocol << ',' << meta.param_name << ',' << meta.param_value << ',' << label
        << ',' << prob(p) << '\n';
  }
  return out.str();
}

std::string csv_summary(const ReportMeta& meta, const ProtocolResult& result) {
  return csv_sweep_header() + csv_sweep_row(meta.protocol, meta.param_value, result);
}

std::string csv_sample(const SampleReport& report, const OutcomeDistribution& exact) {
  std::ostringstream out;
  out << "outcome_label,count,empirical,exact\n";
  for (const auto& [label, count] : report.counts) {
    const auto it = report.empirical.find(label);
    const double e = it == report.empirical.end() ? 0.0 : it->second;
    out << label << ',' << count << ',' << prob(e) << ',' << prob(exact.prob(label)) << '\n';
  }
  out << "\ntrials,seed,rng,max_abs_dev\n";
  out << report.trials << ',' << report.seed << ',' << kRngAlgorithm << ','
      << prob(report.max_abs_dev) << '\n';
  return out.str();
}

std::string csv_sweep_header() {
  return "protocol,param_value,p_detect,p_explode,p_inconclusive,eta,false_positive\n";
}

std::string csv_sweep_row(const std::string& protocol, const std::string& param_value,
                          const ProtocolResult& result) {
  std::ostringstream out;
  out << protocol << ',' << param_value << ',' << prob(result.p_detect_object) << ','
      << prob(result.p_explosion) << ',' << prob(result.p_inconclusive) << ','
      << prob(result.efficiency_eta) << ',' << prob(result.false_positive) << '\n';
  return out.str();
}

std::string csv_imaging_header() {
  return "protocol,param_value,p_dark,p_bright,p_absorbed,dose_ratio\n";
}

std::string csv_imaging_row(const ImagingRow& row) {
  std::ostringstream out;
  out << "imaging," << format_complex(row.t) << ',' << prob(row.p_dark) << ','
      << prob(row.p_bright) << ',' << prob(row.p_absorbed) << ','
      << format_double(row.dose_ratio) << '\n';
  return out.str();
}

std::string json_run(const ReportMeta& meta, const ProtocolResult& result,
                     const SampleReport* sample_report, const ImagingRow* imaging_row) {
  OrderedJson doc;
  doc["metadata"] = metadata_block(meta);
  OrderedJson dist;
  for (const auto& [label, p] : result.distribution.entries) {
    dist[label] = json_probability(p);
  }
  doc["distribution"] = dist;
  doc["summary"] = summary_block(result);
  if (imaging_row != nullptr) {
    OrderedJson r;
    r["t"] = format_complex(imaging_row->t);
    r["p_dark"] = json_probability(imaging_row->p_dark);
    r["p_bright"] = json_probability(imaging_row->p_bright);
    r["p_absorbed"] = json_probability(imaging_row->p_absorbed);
    r["dose_ratio"] = json_number(imaging_row->dose_ratio);
    doc["imaging"] = r;
  }
  if (sample_report != nullptr) {
    OrderedJson s;
    s["trials"] = sample_report->trials;
    s["max_abs_dev"] = json_probability(sample_report->max_abs_dev);
    OrderedJson counts;
    for (const auto& [label, count] : sample_report->counts) counts[label] = count;
    s["counts"] = counts;
    OrderedJson empirical;
    for (const auto& [label, e] : sample_report->empirical) {
      empirical[label] = json_probability(e);
    }
    s["empirical"] = empirical;
    doc["sample"] = s;
  }
  return doc.dump(2) + "\n";
}

std::string json_sweep(const ReportMeta& meta,
                       const std::vector<std::pair<std::string, ProtocolResult>>& rows) {
  OrderedJson doc;
  doc["metadata"] = metadata_block(meta);
  OrderedJson out_rows = OrderedJson::array();
  for (const auto& [param_value, result] : rows) {
    OrderedJson row;
    row["param_value"] = param_value;
    row["p_detect"] = json_probability(result.p_detect_object);
    row["p_explode"] = json_probability(result.p_explosion);
    row["p_inconclusive"] = json_probability(result.p_inconclusive);
    row["eta"] = json_probability(result.efficiency_eta);
    row["false_positive"] = json_probability(result.false_positive);
    out_rows.push_back(row);
  }
  doc["rows"] = out_rows;
  return doc.dump(2) + "\n";
}

std::string json_imaging(const ReportMeta& meta, const std::vector<ImagingRow>& rows) {
  OrderedJson doc;
  doc["metadata"] = metadata_block(meta);
  OrderedJson out_rows = OrderedJson::array();
  for (const ImagingRow& row : rows) {
    OrderedJson r;
    r["t"] = format_complex(row.t);
    r["p_dark"] = json_probability(row.p_dark);
    r["p_bright"] = json_probability(row.p_bright);
    r["p_absorbed"] = json_probability(row.p_absorbed);
    r["dose_ratio"] = json_number(row.dose_ratio);
    out_rows.push_back(r);
  }
  doc["rows"] = out_rows;
  return doc.dump(2) + "\n";
}

}  // namespace ifm
