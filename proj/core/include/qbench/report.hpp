#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qbench/device.hpp"
#include "qbench/noise.hpp"
#include "qbench/protocols.hpp"
#include "qbench/serialize.hpp"
#include "qbench/transpile.hpp"

namespace qbench {

inline constexpr const char* kRunConfigSchema = "runcfg/1";
inline constexpr const char* kReportSchema = "report/1";

std::string harness_version();

// ---- run configuration ----

inline constexpr const char* kProtocolNames[] = {"qv",     "volumetric", "rb",        "layer_fidelity", "mirror",
                                                 "clops",  "shadows",    "collision", "xeb"};

struct ProtocolSpec {
  std::string name;  // one of kProtocolNames
  std::string id;    // unique label in the report; defaults to name
  Json params = Json::object();
};

struct VerificationSpec {
  bool enabled = true;
  XebVerifyOptions options;
};

struct RunConfig {
  std::string device_path;  // as written in the config; empty when inline
  DeviceModel device;
  Json noise_overrides = Json::object();
  std::uint64_t seed = 0;
  int repetitions = 1;
  VerificationSpec verification;
  std::vector<ProtocolSpec> protocols;
  std::optional<TranspileConfig> peak;
  std::string report_path;
  std::string text_path;
  std::map<std::string, std::string> checklist;  // attribute -> operator text
  std::vector<std::string> notes;

  // Device noise with the overrides applied.
  NoiseModel noise() const;
  // Throws PreconditionError naming the first problem, including bad protocol parameters.
  void validate() const;
};

// Relative device and QASM paths resolve against base_dir; QASM preparation
// files for shadows are read here and kept inline as "qasm_text".
RunConfig run_config_from_json(const Json& j, const std::string& base_dir = ".");
RunConfig load_run_config(const std::string& path);
// The device is always written inline so the result is self-contained.
Json to_json(const RunConfig& cfg);

// Default peak pipeline used when peak is requested without a pass list.
TranspileConfig default_peak_config(std::uint64_t seed);

// ---- report ----

inline constexpr const char* kChecklistAttributes[] = {"relevance", "reproducibility", "fairness", "verifiability",
                                                       "usability"};

struct ChecklistEntry {
  std::string text;                   // operator supplied
  std::vector<std::string> evidence;  // filled in by the harness
};

struct MetricSummary {
  double mean = 0.0;
  double std = 0.0;  // sample standard deviation, 0 for a single repetition
  std::vector<double> values;
};

MetricSummary summarize_values(const std::vector<double>& values);

struct ProtocolBlock {
  std::string id;
  std::string protocol;
  std::string mode;  // "base" or "peak"
  Json params = Json::object();
  TranspileConfig transpile;
  std::vector<ItemSeed> seeds;   // protocol generator per repetition
  std::vector<Json> repetitions;  // protocol result JSON per repetition
  std::map<std::string, MetricSummary> summary;
  std::string error;  // non-empty when the protocol failed
  double wall_seconds = 0.0;
};

enum class ReportStatus : std::uint8_t { Verified, VerificationFailed, VerificationSkipped };
std::string report_status_name(ReportStatus s);
ReportStatus report_status_from_name(const std::string& s);

struct Report {
  std::string harness_version;
  std::string generated_at;  // UTC, ISO 8601
  std::uint64_t master_seed = 0;
  int repetitions = 1;
  DeviceModel device;
  NoiseModel noise;
  Json config = Json::object();
  StaticMetrics static_metrics;
  std::optional<XebVerification> verification;
  ReportStatus status = ReportStatus::Verified;
  std::vector<ProtocolBlock> base;
  std::vector<ProtocolBlock> peak;
  std::map<std::string, ChecklistEntry> checklist;
  std::vector<std::string> notes;
  double wall_seconds = 0.0;
};

Json to_json(const StaticMetrics& m);
StaticMetrics static_metrics_from_json(const Json& j);

Json to_json(const ProtocolBlock& b);
ProtocolBlock protocol_block_from_json(const Json& j);

Json to_json(const Report& r);
Report report_from_json(const Json& j);
Report load_report(const std::string& path);

// Headline numbers of one protocol result, keyed by metric name.
std::map<std::string, double> headline_metrics(const std::string& protocol, const Json& result);

// Runs one protocol from its name and parameters.
Json run_protocol(const ProtocolSpec& spec, const DeviceModel& d, const NoiseModel& noise,
                  const TranspileConfig& transpile, Rng& rng);
// Throws PreconditionError for unknown protocols or parameters.
void validate_protocol_spec(const ProtocolSpec& spec);

// Generator of repetition rep of the protocol labelled id.
Rng protocol_rng(std::uint64_t master_seed, const std::string& id, int repetition);

// Device verification first; when it fails the report carries no protocol
// blocks. Otherwise every protocol runs under the base pipeline, then under
// peak when configured. Protocol errors are recorded in their block.
Report run_benchmark_suite(const RunConfig& cfg);

enum class ReportFormat : std::uint8_t { Json, Text };
ReportFormat report_format_from_name(const std::string& s);
std::string render_report(const Report& r, ReportFormat format);

// Removes wall-clock fields (generated_at, wall_seconds, elapsed_seconds,
// layers_per_second) at every depth.
Json strip_timing_fields(const Json& j);

enum class VerifyStatus : std::uint8_t { Ok, Discrepancies, Unverifiable };
std::string verify_status_name(VerifyStatus s);

struct SelfVerifyOptions {
  double tolerance = 1e-9;  // relative to max(1, |a|, |b|)
  // Number of items per protocol result to re-execute from their seeds; 0 disables.
  std::size_t reexecute = 0;
};

struct SelfVerifyResult {
  VerifyStatus status = VerifyStatus::Ok;
  std::vector<std::string> discrepancies;
  std::vector<std::string> unverifiable;
  std::size_t checked = 0;
  std::size_t reexecuted = 0;

  bool ok() const { return status == VerifyStatus::Ok; }
};

// Recomputes every aggregate from the per-item records. Works on the JSON form
// so that a report edited on disk is checked as written.
SelfVerifyResult self_verify_report(const Json& report, const SelfVerifyOptions& opt = {});
SelfVerifyResult self_verify_report(const Report& report, const SelfVerifyOptions& opt = {});

}  // namespace qbench
