#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "ifm/circuits.hpp"
#include "ifm/protocols.hpp"
#include "ifm/sampler.hpp"

namespace ifm {

inline constexpr const char* kToolVersion = "0.1.0";

// Default 12 significant digits; the IFM_PRECISION environment variable
// overrides it (integer in [1,17]; anything else is a configuration error).
int report_precision();

// Locale-independent, '.' decimal separator; "nan"/"inf" for non-finite.
std::string format_double(double v, int digits);
std::string format_double(double v);

// Nearest double to the `digits`-significant-digit decimal of v.
double round_sig(double v, int digits);

// Report-side clamp: |v| < 1e-15 becomes 0.  Raw values stay untouched
// inside the library.
double clamp_report(double v);

std::string format_complex(Amplitude a);  // "re" or "re+imi" / "re-imi"

std::string iso8601_utc_now();

struct ReportMeta {
  std::string protocol;
  std::string param_name;
  std::string param_value;
  std::uint64_t seed = 0;
  std::string timestamp;  // fill with iso8601_utc_now()
};

// CSV sections.  Headers are fixed; see the README for the schemas.
std::string csv_distribution(const ReportMeta& meta, const OutcomeDistribution& dist);
std::string csv_summary(const ReportMeta& meta, const ProtocolResult& result);
std::string csv_sample(const SampleReport& report, const OutcomeDistribution& exact);
std::string csv_sweep_header();
std::string csv_sweep_row(const std::string& protocol, const std::string& param_value,
                          const ProtocolResult& result);
std::string csv_imaging_header();
std::string csv_imaging_row(const ImagingRow& row);

// JSON documents (one object per command).
std::string json_run(const ReportMeta& meta, const ProtocolResult& result,
                     const SampleReport* sample_report, const ImagingRow* imaging_row = nullptr);
std::string json_sweep(const ReportMeta& meta,
                       const std::vector<std::pair<std::string, ProtocolResult>>& rows);
std::string json_imaging(const ReportMeta& meta, const std::vector<ImagingRow>& rows);

}  // namespace ifm
