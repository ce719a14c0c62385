#include "qbench/report.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <functional>
#include <limits>
#include <set>
#include <sstream>

#include "qbench/error.hpp"
#include "qbench/qasm.hpp"
#include "qbench/randgen.hpp"

#ifndef QBENCH_VERSION_STRING
#define QBENCH_VERSION_STRING "0.0.0"
#endif

namespace qbench {

namespace fs = std::filesystem;

std::string harness_version() { return std::string("qbench ") + QBENCH_VERSION_STRING; }

namespace {

// ---- protocol parameters ----

class Params {
 public:
  Params(const Json& j, std::string where) : j_(j), where_(std::move(where)) {
    if (!j_.is_object()) throw PreconditionError(where_ + ": parameters must be an object");
  }

  template <typename T>
  T get(const std::string& key, T fallback) {
    used_.insert(key);
    if (!j_.contains(key) || j_.at(key).is_null()) return fallback;
    try {
      return j_.at(key).get<T>();
    } catch (const Json::exception&) {
      throw PreconditionError(where_ + ": parameter '" + key + "' has the wrong type");
    }
  }

  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it)
      if (!used_.count(it.key())) throw PreconditionError(where_ + ": unknown parameter '" + it.key() + "'");
  }

 private:
  const Json& j_;
  std::string where_;
  std::set<std::string> used_;
};

QvOptions qv_options(const Json& j, const TranspileConfig& t) {
  Params p(j, "qv");
  QvOptions o;
  o.min_width = p.get("min_width", o.min_width);
  o.max_width = p.get("max_width", o.max_width);
  o.circuits_per_width = p.get("circuits_per_width", o.circuits_per_width);
  o.shots = p.get("shots", o.shots);
  o.strict = p.get("strict", o.strict);
  o.cap = p.get("cap", o.cap);
  p.finish();
  o.transpile = t;
  return o;
}

VolumetricOptions volumetric_options(const Json& j, const TranspileConfig& t) {
  Params p(j, "volumetric");
  VolumetricOptions o;
  o.shape = shape_from_name(p.get<std::string>("shape", shape_name(o.shape)));
  o.widths = p.get("widths", o.widths);
  o.depths = p.get("depths", o.depths);
  o.metric = volumetric_metric_from_name(p.get<std::string>("metric", volumetric_metric_name(o.metric)));
  o.circuits_per_point = p.get("circuits_per_point", o.circuits_per_point);
  o.shots = p.get("shots", o.shots);
  o.cap = p.get("cap", o.cap);
  p.finish();
  o.transpile = t;
  return o;
}

RbOptions rb_options(const Json& j, const TranspileConfig& t) {
  Params p(j, "rb");
  RbOptions o;
  o.n_qubits = p.get("n_qubits", o.n_qubits);
  o.lengths = p.get("lengths", o.lengths);
  o.sequences_per_length = p.get("sequences_per_length", o.sequences_per_length);
  o.shots = p.get("shots", o.shots);
  p.finish();
  o.transpile = t;
  return o;
}

LayerFidelityOptions layer_fidelity_options(const Json& j, const TranspileConfig& t) {
  Params p(j, "layer_fidelity");
  LayerFidelityOptions o;
  o.chain = p.get("chain", o.chain);
  o.lengths = p.get("lengths", o.lengths);
  o.sequences_per_length = p.get("sequences_per_length", o.sequences_per_length);
  o.shots = p.get("shots", o.shots);
  p.finish();
  o.transpile = t;
  return o;
}

MirrorOptions mirror_options(const Json& j, const TranspileConfig& t) {
  Params p(j, "mirror");
  MirrorOptions o;
  o.widths = p.get("widths", o.widths);
  o.depths = p.get("depths", o.depths);
  o.randomizations = p.get("randomizations", o.randomizations);
  o.shots = p.get("shots", o.shots);
  p.finish();
  o.transpile = t;
  return o;
}

ClopsOptions clops_options(const Json& j, const TranspileConfig& t) {
  Params p(j, "clops");
  ClopsOptions o;
  o.width = p.get("width", o.width);
  o.layers_total = p.get("layers_total", o.layers_total);
  o.batch = p.get("batch", o.batch);
  o.shots = p.get("shots", o.shots);
  p.finish();
  o.transpile = t;
  return o;
}

XebVerifyOptions xeb_options(const Json& j, const TranspileConfig& t, const std::string& where) {
  Params p(j, where);
  XebVerifyOptions o;
  o.n = p.get("n", o.n);
  o.depth = p.get("depth", o.depth);
  o.circuits = p.get("circuits", o.circuits);
  o.shots = p.get("shots", o.shots);
  o.threshold = p.get("threshold", o.threshold);
  p.finish();
  o.transpile = t;
  return o;
}

Circuit drop_measurements(const Circuit& c) {
  Circuit out(c.n_qubits());
  out.metadata() = c.metadata();
  for (const auto& layer : c.layers()) {
    std::vector<Gate> kept;
    for (const auto& g : layer)
      if (g.kind != GateKind::Measure) kept.push_back(g);
    if (!kept.empty()) out.add_layer(std::move(kept));
  }
  return out;
}

struct ShadowOptions {
  Circuit prep;
  std::vector<PauliString> observables;
  std::uint64_t snapshots = 1000;
  bool noisy = true;
};

ShadowOptions shadow_options(const Json& j) {
  Params p(j, "shadows");
  ShadowOptions o;
  const std::string prep = p.get<std::string>("prep", "ghz");
  const int n = p.get("n", 3);
  const std::string text = p.get<std::string>("qasm_text", "");
  if (prep == "ghz") {
    o.prep = ghz_circuit(n);
  } else if (prep == "qasm") {
    if (text.empty()) throw PreconditionError("shadows: prep 'qasm' needs qasm_text or a qasm file");
    o.prep = drop_measurements(parse_qasm(text));
  } else {
    throw PreconditionError("shadows: unknown prep '" + prep + "' (expected ghz or qasm)");
  }
  for (const auto& s : p.get("observables", std::vector<std::string>{})) o.observables.push_back(PauliString::parse(s));
  if (o.observables.empty()) {
    for (int q = 0; q < o.prep.n_qubits(); ++q) {
      PauliString z(o.prep.n_qubits());
      z.set(q, 'Z');
      o.observables.push_back(z);
    }
  }
  o.snapshots = p.get("snapshots", o.snapshots);
  o.noisy = p.get("noisy", o.noisy);
  p.finish();
  return o;
}

struct CollisionOptions {
  int n = 10;
  int cap = kDefaultQubitCap;
};

CollisionOptions collision_options(const Json& j) {
  Params p(j, "collision");
  CollisionOptions o;
  o.n = p.get("n", o.n);
  o.cap = p.get("cap", o.cap);
  p.finish();
  return o;
}

std::string utc_now() {
  std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

bool is_protocol_name(const std::string& s) {
  return std::find_if(std::begin(kProtocolNames), std::end(kProtocolNames),
                      [&](const char* n) { return s == n; }) != std::end(kProtocolNames);
}

double mean_of(const std::vector<double>& v) {
  if (v.empty()) return 0.0;
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

}  // namespace

// ---- run configuration ----

NoiseModel RunConfig::noise() const {
  return noise_from_json(noise_overrides, NoiseModel::from_device(device), device.n_qubits);
}

void validate_protocol_spec(const ProtocolSpec& spec) {
  TranspileConfig t;
  if (spec.name == "qv") {
    qv_options(spec.params, t);
  } else if (spec.name == "volumetric") {
    volumetric_options(spec.params, t);
  } else if (spec.name == "rb") {
    rb_options(spec.params, t);
  } else if (spec.name == "layer_fidelity") {
    layer_fidelity_options(spec.params, t);
  } else if (spec.name == "mirror") {
    mirror_options(spec.params, t);
  } else if (spec.name == "clops") {
    clops_options(spec.params, t);
  } else if (spec.name == "shadows") {
    shadow_options(spec.params);
  } else if (spec.name == "collision") {
    collision_options(spec.params);
  } else if (spec.name == "xeb") {
    xeb_options(spec.params, t, "xeb");
  } else {
    throw PreconditionError("unknown protocol '" + spec.name + "'");
  }
}

void RunConfig::validate() const {
  device.validate();
  noise();
  if (repetitions < 1) throw PreconditionError("repetitions must be at least 1");
  if (verification.enabled) {
    int connected = static_cast<int>(device.largest_component().size());
    if (verification.options.n > connected)
      throw PreconditionError("verification width " + std::to_string(verification.options.n) + " exceeds the " +
                              std::to_string(connected) + " connected working qubits of the device");
    if (verification.options.circuits < 1 || verification.options.shots < 1)
      throw PreconditionError("verification needs at least one circuit and one shot");
  }
  std::set<std::string> ids;
  for (const auto& p : protocols) {
    if (!ids.insert(p.id).second) throw PreconditionError("duplicate protocol id '" + p.id + "'");
    validate_protocol_spec(p);
  }
  if (peak) {
    if (peak->mode != TranspileMode::Peak) throw PreconditionError("peak configuration must use peak mode");
    peak->validate();
  }
  for (const auto& [k, v] : checklist)
    if (std::find_if(std::begin(kChecklistAttributes), std::end(kChecklistAttributes),
                     [&](const char* a) { return k == a; }) == std::end(kChecklistAttributes))
      throw PreconditionError("unknown checklist attribute '" + k + "'");
}

TranspileConfig default_peak_config(std::uint64_t seed) {
  TranspileConfig t;
  t.mode = TranspileMode::Peak;
  t.passes = {"route_swaps", "decompose_to_native", "cancel_inverses", "merge_rotations", "validate"};
  t.seed = seed;
  return t;
}

RunConfig run_config_from_json(const Json& j, const std::string& base_dir) {
  if (!j.is_object()) throw PreconditionError("run configuration must be a JSON object");
  if (!j.contains("schema") || j.at("schema") != kRunConfigSchema)
    throw PreconditionError(std::string("run configuration needs \"schema\": \"") + kRunConfigSchema + "\"");
  static const std::set<std::string> keys = {"schema",       "device",   "device_source", "noise",
                                             "seed",         "repetitions", "verification", "protocols",
                                             "peak",         "output",   "checklist",     "notes"};
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!keys.count(it.key())) throw PreconditionError("unknown run configuration field '" + it.key() + "'");

  RunConfig cfg;
  try {
    if (!j.contains("device")) throw PreconditionError("run configuration needs a device");
    const Json& dev = j.at("device");
    if (dev.is_string()) {
      cfg.device_path = dev.get<std::string>();
      fs::path p = fs::path(base_dir) / cfg.device_path;
      if (fs::path(cfg.device_path).is_absolute()) p = cfg.device_path;
      cfg.device = device_from_json(load_json_file(p.string()));
    } else {
      cfg.device = device_from_json(dev);
      if (j.contains("device_source")) cfg.device_path = j.at("device_source").get<std::string>();
    }
    if (j.contains("noise")) {
      cfg.noise_overrides = j.at("noise");
      if (!cfg.noise_overrides.is_object()) throw PreconditionError("noise overrides must be an object");
    }
    cfg.seed = j.value("seed", std::uint64_t{0});
    cfg.repetitions = j.value("repetitions", 1);

    if (j.contains("verification")) {
      Json v = j.at("verification");
      if (!v.is_object()) throw PreconditionError("verification must be an object");
      cfg.verification.enabled = v.value("enabled", true);
      v.erase("enabled");
      cfg.verification.options = xeb_options(v, {}, "verification");
    }

    if (j.contains("protocols")) {
      for (const auto& pj : j.at("protocols")) {
        if (!pj.is_object() || !pj.contains("name"))
          throw PreconditionError("every protocol entry needs a name");
        ProtocolSpec spec;
        spec.name = pj.at("name").get<std::string>();
        if (!is_protocol_name(spec.name)) throw PreconditionError("unknown protocol '" + spec.name + "'");
        spec.id = pj.value("id", spec.name);
        spec.params = pj;
        spec.params.erase("name");
        spec.params.erase("id");
        if (spec.name == "shadows" && spec.params.contains("qasm")) {
          std::string path = spec.params.at("qasm").get<std::string>();
          fs::path p = fs::path(path).is_absolute() ? fs::path(path) : fs::path(base_dir) / path;
          spec.params["qasm_text"] = read_text_file(p.string());
          spec.params["prep"] = "qasm";
          spec.params.erase("qasm");
        }
        cfg.protocols.push_back(std::move(spec));
      }
    }

    if (j.contains("peak") && !j.at("peak").is_null()) {
      const Json& pk = j.at("peak");
      TranspileConfig t = default_peak_config(pk.value("seed", std::uint64_t{0}));
      if (pk.contains("passes")) t.passes = pk.at("passes").get<std::vector<std::string>>();
      cfg.peak = t;
    }
    if (j.contains("output")) {
      cfg.report_path = j.at("output").value("report", "");
      cfg.text_path = j.at("output").value("text", "");
    }
    if (j.contains("checklist")) cfg.checklist = j.at("checklist").get<std::map<std::string, std::string>>();
    if (j.contains("notes")) cfg.notes = j.at("notes").get<std::vector<std::string>>();
  } catch (const Json::exception& e) {
    throw PreconditionError(std::string("invalid run configuration: ") + e.what());
  }
  cfg.validate();
  return cfg;
}

RunConfig load_run_config(const std::string& path) {
  fs::path p(path);
  std::string dir = p.has_parent_path() ? p.parent_path().string() : ".";
  return run_config_from_json(load_json_file(path), dir);
}

Json to_json(const RunConfig& cfg) {
  Json j;
  j["schema"] = kRunConfigSchema;
  j["device"] = to_json(cfg.device);
  if (!cfg.device_path.empty()) j["device_source"] = cfg.device_path;
  j["noise"] = cfg.noise_overrides;
  j["seed"] = cfg.seed;
  j["repetitions"] = cfg.repetitions;
  const auto& v = cfg.verification.options;
  j["verification"] = {{"enabled", cfg.verification.enabled}, {"n", v.n},         {"depth", v.depth},
                       {"circuits", v.circuits},                {"shots", v.shots}, {"threshold", v.threshold}};
  Json protocols = Json::array();
  for (const auto& p : cfg.protocols) {
    Json pj = p.params;
    pj["name"] = p.name;
    pj["id"] = p.id;
    protocols.push_back(pj);
  }
  j["protocols"] = protocols;
  if (cfg.peak) j["peak"] = {{"passes", cfg.peak->passes}, {"seed", cfg.peak->seed}};
  Json out = Json::object();
  if (!cfg.report_path.empty()) out["report"] = cfg.report_path;
  if (!cfg.text_path.empty()) out["text"] = cfg.text_path;
  j["output"] = out;
  j["checklist"] = cfg.checklist;
  j["notes"] = cfg.notes;
  return j;
}

// ---- report types ----

MetricSummary summarize_values(const std::vector<double>& values) {
  MetricSummary s;
  s.values = values;
  s.mean = mean_of(values);
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    s.std = std::sqrt(ss / static_cast<double>(values.size() - 1));
  }
  return s;
}

std::string report_status_name(ReportStatus s) {
  switch (s) {
    case ReportStatus::Verified: return "verified";
    case ReportStatus::VerificationFailed: return "device verification failed";
    case ReportStatus::VerificationSkipped: return "verification skipped";
  }
  return "verified";
}

ReportStatus report_status_from_name(const std::string& s) {
  for (auto v : {ReportStatus::Verified, ReportStatus::VerificationFailed, ReportStatus::VerificationSkipped})
    if (report_status_name(v) == s) return v;
  throw PreconditionError("unknown report status '" + s + "'");
}

namespace {

Json summary_json(const SummaryStats& s) {
  return {{"min", s.min}, {"mean", s.mean}, {"max", s.max}, {"count", s.count}};
}

double as_double(const Json& j) {
  return j.is_null() ? std::numeric_limits<double>::quiet_NaN() : j.get<double>();
}

SummaryStats summary_from(const Json& j) {
  SummaryStats s;
  s.min = as_double(j.at("min"));
  s.mean = as_double(j.at("mean"));
  s.max = as_double(j.at("max"));
  s.count = j.at("count").get<std::size_t>();
  return s;
}

}  // namespace

Json to_json(const StaticMetrics& m) {
  return {{"n_qubits", m.n_qubits},
          {"working_qubits", m.working_qubits},
          {"working_connected_qubits", m.working_connected_qubits},
          {"degree", summary_json(m.degree)},
          {"coupling_spectral_norm", m.coupling_spectral_norm},
          {"gate_fidelity_1q", summary_json(m.gate_fidelity_1q)},
          {"gate_fidelity_2q", summary_json(m.gate_fidelity_2q)},
          {"readout_fidelity", summary_json(m.readout_fidelity)},
          {"t1", summary_json(m.t1)},
          {"t2", summary_json(m.t2)},
          {"gate_duration", summary_json(m.gate_duration)}};
}

StaticMetrics static_metrics_from_json(const Json& j) {
  StaticMetrics m;
  m.n_qubits = j.at("n_qubits").get<int>();
  m.working_qubits = j.at("working_qubits").get<int>();
  m.working_connected_qubits = j.at("working_connected_qubits").get<int>();
  m.degree = summary_from(j.at("degree"));
  m.coupling_spectral_norm = as_double(j.at("coupling_spectral_norm"));
  m.gate_fidelity_1q = summary_from(j.at("gate_fidelity_1q"));
  m.gate_fidelity_2q = summary_from(j.at("gate_fidelity_2q"));
  m.readout_fidelity = summary_from(j.at("readout_fidelity"));
  m.t1 = summary_from(j.at("t1"));
  m.t2 = summary_from(j.at("t2"));
  m.gate_duration = summary_from(j.at("gate_duration"));
  return m;
}

Json to_json(const ProtocolBlock& b) {
  Json seeds = Json::array();
  for (const auto& s : b.seeds) seeds.push_back({{"seed", s.seed}, {"stream", s.stream}});
  Json summary = Json::object();
  for (const auto& [k, s] : b.summary) summary[k] = {{"mean", s.mean}, {"std", s.std}, {"values", s.values}};
  return {{"id", b.id},
          {"protocol", b.protocol},
          {"mode", b.mode},
          {"params", b.params},
          {"transpile", to_json(b.transpile)},
          {"seeds", seeds},
          {"repetitions", b.repetitions},
          {"summary", summary},
          {"error", b.error},
          {"wall_seconds", b.wall_seconds}};
}

ProtocolBlock protocol_block_from_json(const Json& j) {
  ProtocolBlock b;
  b.id = j.at("id").get<std::string>();
  b.protocol = j.at("protocol").get<std::string>();
  b.mode = j.at("mode").get<std::string>();
  b.params = j.value("params", Json::object());
  b.transpile = transpile_config_from_json(j.value("transpile", Json::object()));
  for (const auto& s : j.value("seeds", Json::array()))
    b.seeds.push_back({s.at("seed").get<std::uint64_t>(), s.at("stream").get<std::uint64_t>()});
  for (const auto& r : j.value("repetitions", Json::array())) b.repetitions.push_back(r);
  const Json summary = j.value("summary", Json::object());
  for (const auto& [k, s] : summary.items()) {
    MetricSummary m;
    m.mean = as_double(s.at("mean"));
    m.std = as_double(s.at("std"));
    for (const auto& v : s.at("values")) m.values.push_back(as_double(v));
    b.summary[k] = m;
  }
  b.error = j.value("error", "");
  b.wall_seconds = j.value("wall_seconds", 0.0);
  return b;
}

Json to_json(const Report& r) {
  Json j;
  j["schema"] = kReportSchema;
  j["harness_version"] = r.harness_version;
  j["generated_at"] = r.generated_at;
  j["master_seed"] = r.master_seed;
  j["repetitions"] = r.repetitions;
  j["device"] = to_json(r.device);
  j["noise"] = to_json(r.noise);
  j["config"] = r.config;
  j["static_metrics"] = to_json(r.static_metrics);
  j["verification"] = r.verification ? to_json(*r.verification) : Json(nullptr);
  j["status"] = report_status_name(r.status);
  j["verified"] = r.status == ReportStatus::Verified;
  Json base = Json::array(), peak = Json::array();
  for (const auto& b : r.base) base.push_back(to_json(b));
  for (const auto& b : r.peak) peak.push_back(to_json(b));
  j["base"] = base;
  j["peak"] = peak;
  Json checklist = Json::object();
  for (const auto& [k, e] : r.checklist) checklist[k] = {{"text", e.text}, {"evidence", e.evidence}};
  j["checklist"] = checklist;
  j["notes"] = r.notes;
  j["wall_seconds"] = r.wall_seconds;
  return j;
}

Report report_from_json(const Json& j) {
  if (!j.is_object() || j.value("schema", "") != kReportSchema)
    throw PreconditionError(std::string("not a ") + kReportSchema + " document");
  try {
    Report r;
    r.harness_version = j.at("harness_version").get<std::string>();
    r.generated_at = j.value("generated_at", "");
    r.master_seed = j.at("master_seed").get<std::uint64_t>();
    r.repetitions = j.at("repetitions").get<int>();
    r.device = device_from_json(j.at("device"));
    r.noise = noise_from_json(j.at("noise"), {}, r.device.n_qubits);
    r.config = j.value("config", Json::object());
    r.static_metrics = static_metrics_from_json(j.at("static_metrics"));
    if (j.contains("verification") && !j.at("verification").is_null())
      r.verification = xeb_verification_from_json(j.at("verification"));
    r.status = report_status_from_name(j.at("status").get<std::string>());
    for (const auto& b : j.value("base", Json::array())) r.base.push_back(protocol_block_from_json(b));
    for (const auto& b : j.value("peak", Json::array())) r.peak.push_back(protocol_block_from_json(b));
    if (!r.peak.empty() && r.base.empty()) throw PreconditionError("report has peak results without base results");
    const Json checklist = j.value("checklist", Json::object());
    for (const auto& [k, e] : checklist.items())
      r.checklist[k] = {e.value("text", ""), e.value("evidence", std::vector<std::string>{})};
    r.notes = j.value("notes", std::vector<std::string>{});
    r.wall_seconds = j.value("wall_seconds", 0.0);
    return r;
  } catch (const Json::exception& e) {
    throw PreconditionError(std::string("invalid report: ") + e.what());
  }
}

Report load_report(const std::string& path) { return report_from_json(load_json_file(path)); }

// ---- running ----

std::map<std::string, double> headline_metrics(const std::string& protocol, const Json& result) {
  const Json& a = result.at("aggregate");
  std::map<std::string, double> m;
  if (protocol == "qv") {
    m["qv"] = as_double(a.at("qv"));
    m["D"] = as_double(a.at("D"));
  } else if (protocol == "volumetric") {
    std::vector<double> v;
    for (const auto& row : a.at("rows")) v.push_back(as_double(row.at("value")));
    m["mean_" + a.at("metric").get<std::string>()] = mean_of(v);
  } else if (protocol == "rb") {
    m["error_per_clifford"] = as_double(a.at("error_per_clifford"));
    m["p"] = as_double(a.at("fit").at("p"));
  } else if (protocol == "layer_fidelity") {
    m["eplg"] = as_double(a.at("eplg"));
    m["layer_fidelity"] = as_double(a.at("layer_fidelity"));
  } else if (protocol == "mirror") {
    m["mean_success"] = as_double(a.at("mean_success"));
    m["polarization"] = as_double(a.at("polarization"));
  } else if (protocol == "clops") {
    m["layers"] = as_double(a.at("layers"));
    if (a.contains("layers_per_second")) m["layers_per_second"] = as_double(a.at("layers_per_second"));
  } else if (protocol == "shadows") {
    for (const auto& e : a.at("estimates")) m["<" + e.at("observable").get<std::string>() + ">"] = as_double(e.at("estimate"));
  } else if (protocol == "collision") {
    m["volume"] = as_double(a.at("volume"));
  } else if (protocol == "xeb") {
    m["fidelity"] = as_double(a.at("fidelity"));
    m["alpha_mean"] = as_double(a.at("alpha_mean"));
  } else {
    throw PreconditionError("unknown protocol '" + protocol + "'");
  }
  return m;
}

Json run_protocol(const ProtocolSpec& spec, const DeviceModel& d, const NoiseModel& noise,
                  const TranspileConfig& transpile, Rng& rng) {
  const Json& p = spec.params;
  if (spec.name == "qv") return to_json(run_quantum_volume(d, noise, qv_options(p, transpile), rng));
  if (spec.name == "volumetric") return to_json(run_volumetric(d, noise, volumetric_options(p, transpile), rng));
  if (spec.name == "rb") return to_json(run_rb(d, noise, rb_options(p, transpile), rng));
  if (spec.name == "layer_fidelity")
    return to_json(run_layer_fidelity(d, noise, layer_fidelity_options(p, transpile), rng));
  if (spec.name == "mirror") return to_json(run_mirror_benchmark(d, noise, mirror_options(p, transpile), rng));
  if (spec.name == "clops") return to_json(run_clops(d, noise, clops_options(p, transpile), rng));
  if (spec.name == "shadows") {
    ShadowOptions o = shadow_options(p);
    return to_json(shadow_estimate(o.prep, o.observables, o.snapshots, rng, o.noisy ? noise : NoiseModel{}));
  }
  if (spec.name == "collision") {
    CollisionOptions o = collision_options(p);
    return to_json(run_collision_test(d, noise, o.n, rng, transpile, o.cap));
  }
  if (spec.name == "xeb") return to_json(xeb_verify_device(d, noise, xeb_options(p, transpile, "xeb"), rng));
  throw PreconditionError("unknown protocol '" + spec.name + "'");
}

Rng protocol_rng(std::uint64_t master_seed, const std::string& id, int repetition) {
  return Rng(master_seed, fnv1a64(id)).substream(static_cast<std::uint64_t>(repetition));
}

namespace {

ProtocolBlock run_block(const ProtocolSpec& spec, const std::string& mode, const TranspileConfig& transpile,
                        const RunConfig& cfg, const NoiseModel& noise) {
  auto t0 = std::chrono::steady_clock::now();
  ProtocolBlock b;
  b.id = spec.id;
  b.protocol = spec.name;
  b.mode = mode;
  b.params = spec.params;
  b.transpile = transpile;
  try {
    std::map<std::string, std::vector<double>> values;
    for (int rep = 0; rep < cfg.repetitions; ++rep) {
      Rng rng = protocol_rng(cfg.seed, spec.id, rep);
      b.seeds.push_back({rng.seed(), rng.stream()});
      Json result = run_protocol(spec, cfg.device, noise, transpile, rng);
      for (const auto& [k, v] : headline_metrics(spec.name, result)) values[k].push_back(v);
      b.repetitions.push_back(std::move(result));
    }
    for (const auto& [k, v] : values) b.summary[k] = summarize_values(v);
  } catch (const std::exception& e) {
    b.seeds.clear();
    b.repetitions.clear();
    b.summary.clear();
    b.error = e.what();
  }
  b.wall_seconds = seconds_since(t0);
  return b;
}

std::string join(const std::vector<std::string>& v, const std::string& sep) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? sep : "") + v[i];
  return out;
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), f, v);
  return buf;
}

void fill_checklist(Report& r, const RunConfig& cfg) {
  for (const char* a : kChecklistAttributes) {
    auto it = cfg.checklist.find(a);
    r.checklist[a].text = it == cfg.checklist.end() ? "" : it->second;
  }
  std::size_t item_seeds = 0, blocks_with_records = 0, failed = 0;
  std::vector<std::string> names;
  for (const auto* list : {&r.base, &r.peak}) {
    for (const auto& b : *list) {
      if (!b.error.empty()) ++failed;
      bool has = false;
      for (const auto& rep : b.repetitions) {
        if (rep.contains("records") && !rep.at("records").empty()) {
          has = true;
          item_seeds += rep.at("records").size();
        }
      }
      if (has) ++blocks_with_records;
    }
  }
  for (const auto& b : r.base) names.push_back(b.id);

  auto& relevance = r.checklist["relevance"].evidence;
  if (!names.empty()) relevance.push_back("protocols run: " + join(names, ", "));
  relevance.push_back("static metrics over " + std::to_string(r.static_metrics.working_connected_qubits) +
                      " connected working qubits");

  auto& repro = r.checklist["reproducibility"].evidence;
  repro.push_back("master seed " + std::to_string(r.master_seed) + ", " + std::to_string(r.repetitions) +
                  " repetition(s) with mean and std recorded");
  repro.push_back(std::to_string(item_seeds) + " per-item records carry their generator seed");
  repro.push_back("harness " + r.harness_version);

  auto& fair = r.checklist["fairness"].evidence;
  fair.push_back("base pipeline (" + join(base_pipeline(), ", ") + ") applied to every protocol");
  if (cfg.peak) {
    auto equivalence = [&]() -> std::string {
      for (const auto& b : r.peak)
        for (const auto& rep : b.repetitions)
          if (rep.contains("pass_log")) return rep.at("pass_log").value("equivalence", "not run");
      return "not run";
    };
    std::string eq = equivalence();
    fair.push_back("peak pipeline (" + join(cfg.peak->passes, ", ") + ") reported separately; equivalence probe: " +
                   eq);
    fair.push_back("base and peak use identical circuits and seeds");
  } else {
    fair.push_back("no peak results");
  }

  auto& verif = r.checklist["verifiability"].evidence;
  if (r.verification) {
    verif.push_back("device verification " + report_status_name(r.status) + ": XEB fidelity " +
                    fmt("%.4f", r.verification->fidelity) + " against threshold " +
                    fmt("%.2f", r.verification->threshold));
  } else {
    verif.push_back("device verification disabled");
  }
  verif.push_back(std::to_string(blocks_with_records) + " result blocks embed per-item records for recomputation");
  if (failed) verif.push_back(std::to_string(failed) + " protocol block(s) failed; see their error field");

  auto& use = r.checklist["usability"].evidence;
  use.push_back(std::string("machine form ") + kReportSchema + " (canonical JSON), text rendering");
  use.push_back(std::string("configuration ") + kRunConfigSchema + " embedded in the report");
}

}  // namespace

Report run_benchmark_suite(const RunConfig& cfg) {
  cfg.validate();
  auto t0 = std::chrono::steady_clock::now();
  Report r;
  r.harness_version = harness_version();
  r.generated_at = utc_now();
  r.master_seed = cfg.seed;
  r.repetitions = cfg.repetitions;
  r.device = cfg.device;
  r.noise = cfg.noise();
  r.config = to_json(cfg);
  r.static_metrics = static_device_metrics(cfg.device);
  r.notes = cfg.notes;

  if (cfg.verification.enabled) {
    Rng vr = protocol_rng(cfg.seed, "verification", 0);
    r.verification = xeb_verify_device(cfg.device, r.noise, cfg.verification.options, vr);
    r.status = r.verification->verified ? ReportStatus::Verified : ReportStatus::VerificationFailed;
  } else {
    r.status = ReportStatus::VerificationSkipped;
    r.notes.push_back("device verification was disabled for this run");
  }

  if (r.status == ReportStatus::VerificationFailed) {
    r.notes.push_back("device verification failed (XEB fidelity " + fmt("%.4f", r.verification->fidelity) +
                      " below " + fmt("%.2f", r.verification->threshold) + "); benchmark stages were not run");
  } else {
    for (const auto& spec : cfg.protocols) r.base.push_back(run_block(spec, "base", TranspileConfig{}, cfg, r.noise));
    if (cfg.peak)
      for (const auto& spec : cfg.protocols) r.peak.push_back(run_block(spec, "peak", *cfg.peak, cfg, r.noise));
    for (const auto* list : {&r.base, &r.peak})
      for (const auto& b : *list)
        if (!b.error.empty()) r.notes.push_back(b.mode + " " + b.id + " failed: " + b.error);
    for (const auto& b : r.base)
      if (b.protocol == "clops") r.notes.push_back("CLOPS measures the simulator host, not a quantum device");
  }
  bool layered = r.verification.has_value();
  bool qasm_input = false;
  for (const auto& b : r.base) {
    layered = layered || b.protocol == "qv" || b.protocol == "volumetric" || b.protocol == "collision" ||
              b.protocol == "xeb" || b.protocol == "clops";
    qasm_input = qasm_input || (b.protocol == "shadows" && b.params.value("prep", "") == "qasm");
  }
  if (layered) r.notes.push_back("random model circuits at odd width leave one qubit idle in every layer");
  if (qasm_input)
    r.notes.push_back("circuit input uses the OpenQASM 2.0 subset accepted by qbench parse, not a standard interchange format");
  fill_checklist(r, cfg);
  r.wall_seconds = seconds_since(t0);
  return r;
}

// ---- rendering ----

ReportFormat report_format_from_name(const std::string& s) {
  if (s == "json") return ReportFormat::Json;
  if (s == "text") return ReportFormat::Text;
  throw PreconditionError("unknown report format '" + s + "' (expected json or text)");
}

namespace {

std::string pad(std::string s, std::size_t w) {
  if (s.size() < w) s.append(w - s.size(), ' ');
  return s;
}

std::string num(double v) {
  if (std::fabs(v) >= 1e5 || (v != 0.0 && std::fabs(v) < 1e-3)) return fmt("%.3e", v);
  if (v == std::floor(v)) return fmt("%.0f", v);
  return fmt("%.4f", v);
}

std::string stats_line(const SummaryStats& s) {
  if (s.count == 0) return "n/a";
  return "mean " + num(s.mean) + " (min " + num(s.min) + ", max " + num(s.max) + ")";
}

void render_table(std::ostringstream& out, const std::string& title, const std::vector<ProtocolBlock>& blocks) {
  out << title << "\n";
  for (const auto& b : blocks) {
    out << "  " << pad(b.id, 18);
    if (!b.error.empty()) {
      out << "error: " << b.error << "\n";
      continue;
    }
    std::vector<std::string> parts;
    for (const auto& [k, s] : b.summary) {
      std::string part = k + " = " + num(s.mean);
      if (b.repetitions.size() > 1) part += " +/- " + num(s.std);
      parts.push_back(part);
    }
    out << join(parts, "; ") << "\n";
  }
  out << "\n";
}

}  // namespace

std::string render_report(const Report& r, ReportFormat format) {
  if (format == ReportFormat::Json) return canonical_json(to_json(r));
  std::ostringstream out;
  const auto& m = r.static_metrics;
  out << "QUANTUM BENCHMARK REPORT\n";
  out << "========================\n";
  out << pad("Harness", 14) << r.harness_version << "\n";
  out << pad("Generated", 14) << r.generated_at << "\n";
  out << pad("Master seed", 14) << r.master_seed << "\n";
  out << pad("Repetitions", 14) << r.repetitions << "\n";
  out << pad("Status", 14) << report_status_name(r.status) << "\n\n";

  out << "Hardware\n";
  out << "  " << pad("Device", 20) << r.device.name << ", " << m.n_qubits << " qubits (" << m.working_qubits
      << " working, " << m.working_connected_qubits << " connected)\n";
  out << "  " << pad("Connectivity", 20) << r.device.edges.size() << " couplings, degree " << stats_line(m.degree)
      << ", spectral norm " << num(m.coupling_spectral_norm) << "\n";
  out << "  " << pad("1q gate fidelity", 20) << stats_line(m.gate_fidelity_1q) << "\n";
  out << "  " << pad("2q gate fidelity", 20) << stats_line(m.gate_fidelity_2q) << "\n";
  out << "  " << pad("Readout fidelity", 20) << stats_line(m.readout_fidelity) << "\n";
  out << "  " << pad("T1", 20) << stats_line(m.t1) << "\n";
  out << "  " << pad("T2", 20) << stats_line(m.t2) << "\n";
  out << "Software\n";
  out << "  " << pad("Base pipeline", 20) << join(base_pipeline(), ", ") << "\n";
  if (!r.peak.empty()) out << "  " << pad("Peak pipeline", 20) << join(r.peak.front().transpile.passes, ", ") << "\n";
  out << "  " << pad("Simulators", 20) << "noisy statevector, stabilizer tableau\n\n";

  out << "Device verification\n";
  if (r.verification) {
    const auto& v = *r.verification;
    out << "  XEB n=" << v.n << " depth=" << v.depth << " circuits=" << v.items.size() << ": fidelity "
        << num(v.fidelity) << " (threshold " << num(v.threshold) << "), " << (v.verified ? "verified" : "FAILED")
        << "\n\n";
  } else {
    out << "  skipped\n\n";
  }

  if (!r.base.empty()) render_table(out, "Base results", r.base);
  if (!r.peak.empty()) render_table(out, "Peak results", r.peak);

  if (!r.notes.empty()) {
    out << "Notes\n";
    for (const auto& n : r.notes) out << "  - " << n << "\n";
    out << "\n";
  }
  out << "Quality checklist\n";
  for (const char* a : kChecklistAttributes) {
    auto it = r.checklist.find(a);
    if (it == r.checklist.end()) continue;
    out << "  " << a << ": " << (it->second.text.empty() ? "(not provided)" : it->second.text) << "\n";
    for (const auto& e : it->second.evidence) out << "    * " << e << "\n";
  }
  return out.str();
}

Json strip_timing_fields(const Json& j) {
  static const std::set<std::string> timing = {"generated_at", "wall_seconds", "elapsed_seconds",
                                               "layers_per_second"};
  if (j.is_object()) {
    Json out = Json::object();
    for (auto it = j.begin(); it != j.end(); ++it)
      if (!timing.count(it.key())) out[it.key()] = strip_timing_fields(it.value());
    return out;
  }
  if (j.is_array()) {
    Json out = Json::array();
    for (const auto& v : j) out.push_back(strip_timing_fields(v));
    return out;
  }
  return j;
}

// ---- self verification ----

std::string verify_status_name(VerifyStatus s) {
  switch (s) {
    case VerifyStatus::Ok: return "ok";
    case VerifyStatus::Discrepancies: return "discrepancies";
    case VerifyStatus::Unverifiable: return "unverifiable";
  }
  return "ok";
}

namespace {

class Verifier {
 public:
  Verifier(const SelfVerifyOptions& opt, SelfVerifyResult& out) : opt_(opt), out_(out) {}

  void num(const std::string& where, double stored, double recomputed) {
    ++out_.checked;
    double scale = std::max({1.0, std::fabs(stored), std::fabs(recomputed)});
    bool same = (std::isnan(stored) && std::isnan(recomputed)) || std::fabs(stored - recomputed) <= opt_.tolerance * scale;
    if (!same)
      out_.discrepancies.push_back(where + ": stored " + fmt("%.17g", stored) + ", recomputed " +
                                   fmt("%.17g", recomputed));
  }

  template <typename T>
  void exact(const std::string& where, const T& stored, const T& recomputed) {
    ++out_.checked;
    if (!(stored == recomputed)) {
      std::ostringstream s;
      s << where << ": stored " << stored << ", recomputed " << recomputed;
      out_.discrepancies.push_back(s.str());
    }
  }

  void unverifiable(const std::string& why) { out_.unverifiable.push_back(why); }
  void reexecuted() { ++out_.reexecuted; }

  std::vector<std::size_t> sample(std::size_t n) const {
    std::vector<std::size_t> idx;
    if (opt_.reexecute == 0 || n == 0) return idx;
    std::size_t k = std::min(opt_.reexecute, n);
    for (std::size_t i = 0; i < k; ++i) idx.push_back(i * n / k);
    return idx;
  }

 private:
  const SelfVerifyOptions& opt_;
  SelfVerifyResult& out_;
};

Rng item_rng(const ItemSeed& s) { return Rng(s.seed, s.stream); }

void verify_xeb(Verifier& v, const std::string& where, const XebVerification& r, const DeviceModel& d,
                const NoiseModel& noise, const TranspileConfig& t) {
  std::vector<double> alphas, ratios;
  std::uint64_t total = 0;
  for (const auto& it : r.items) {
    alphas.push_back(it.alpha);
    ratios.push_back(it.alpha / it.ideal);
    total += it.shots;
  }
  v.num(where + ".alpha_mean", r.alpha_mean, mean_of(alphas));
  v.num(where + ".fidelity", r.fidelity, mean_of(ratios));
  v.num(where + ".std_error", r.std_error, 1.0 / std::sqrt(static_cast<double>(total)));
  v.exact(where + ".verified", r.verified, mean_of(ratios) >= r.threshold);
  for (std::size_t i : v.sample(r.items.size())) {
    const auto& it = r.items[i];
    Rng item = item_rng(it.seed);
    Rng gen = item.substream(0), run = item.substream(1);
    Circuit c = xeb_circuit(r.n, r.depth, gen);
    ProbDist ideal = ideal_distribution(c);
    SampleSet s = execute_circuit(c, d, noise, t, it.shots, run, i * it.shots);
    v.num(where + ".records[" + std::to_string(i) + "].alpha (re-executed)", it.alpha, xeb_alpha(s, ideal).alpha);
    v.num(where + ".records[" + std::to_string(i) + "].ideal (re-executed)", it.ideal, xeb_expected_ideal(ideal));
    v.reexecuted();
  }
}

void verify_sequences(Verifier& v, const std::string& where, const std::vector<int>& lengths,
                      const std::vector<double>& survival, const DecayFit& fit,
                      const std::vector<RbSequenceRecord>& items) {
  std::vector<double> s = rb_survival_means(lengths, items);
  v.exact(where + ".survival.size", survival.size(), s.size());
  for (std::size_t i = 0; i < std::min(s.size(), survival.size()); ++i)
    v.num(where + ".survival[" + std::to_string(i) + "]", survival[i], s[i]);
  DecayFit f = fit_exponential_decay(std::vector<double>(lengths.begin(), lengths.end()), s);
  v.num(where + ".fit.A", fit.A, f.A);
  v.num(where + ".fit.B", fit.B, f.B);
  v.num(where + ".fit.p", fit.p, f.p);
  v.num(where + ".fit.residual", fit.residual, f.residual);
}

template <typename MakeCircuit>
void reexecute_sequences(Verifier& v, const std::string& where, const std::vector<RbSequenceRecord>& items,
                         const DeviceModel& d, const NoiseModel& noise, const TranspileConfig& t,
                         MakeCircuit make) {
  for (std::size_t i : v.sample(items.size())) {
    const auto& it = items[i];
    Rng item = item_rng(it.seed);
    Rng gen = item.substream(0), run = item.substream(1);
    Circuit c = make(it.length, gen);
    SampleSet s = execute_circuit(c, d, noise, t, it.shots, run, i * it.shots);
    std::string zeros(static_cast<std::size_t>(s.n_bits()), '0');
    v.exact(where + ".records[" + std::to_string(i) + "].survivors (re-executed)", it.survivors, s.count(zeros));
    v.reexecuted();
  }
}

bool has_records(const Json& rep) { return rep.contains("records") && !rep.at("records").empty(); }

void verify_result(Verifier& v, const std::string& where, const std::string& protocol, const Json& rep,
                   const Json& params, const DeviceModel& d, const NoiseModel& noise, const TranspileConfig& t) {
  if (protocol != "clops" && !has_records(rep)) {
    v.unverifiable(where + ": per-item records missing");
    return;
  }
  if (protocol == "qv") {
    QvResult r = qv_result_from_json(rep);
    int cap = params.value("cap", kDefaultQubitCap);
    std::vector<QvWidthRecord> widths = r.widths;
    std::uint64_t index = 0;
    for (std::size_t wi = 0; wi < widths.size(); ++wi) {
      auto& w = widths[wi];
      std::string wl = where + ".widths[" + std::to_string(w.width) + "]";
      if (w.items.empty()) {
        v.unverifiable(wl + ": per-circuit records missing");
        continue;
      }
      double sum = 0.0;
      for (const auto& it : w.items) {
        v.num(wl + ".hog", it.hog, static_cast<double>(it.heavy) / static_cast<double>(it.shots));
        sum += static_cast<double>(it.heavy) / static_cast<double>(it.shots);
      }
      double mean = sum / static_cast<double>(w.items.size());
      v.exact(wl + ".circuits", w.circuits, w.items.size());
      v.num(wl + ".mean_hog", w.mean_hog, mean);
      double lb = qv_lower_bound(mean, w.items.size());
      v.num(wl + ".lower_bound", w.lower_bound, lb);
      v.exact(wl + ".pass", w.pass, lb > kQvThreshold);
      w.pass = lb > kQvThreshold;
      std::vector<std::size_t> picks = v.sample(w.items.size());
      for (std::size_t i : picks) {
        const auto& it = w.items[i];
        Rng item = item_rng(it.seed);
        Rng gen = item.substream(0), run = item.substream(1);
        Circuit c = qv_model_circuit(w.width, gen);
        ProbDist ideal = ideal_distribution(c, cap);
        SampleSet s = execute_circuit(c, d, noise, t, it.shots, run, (index + i) * it.shots, cap);
        v.exact(wl + ".records[" + std::to_string(i) + "].heavy (re-executed)", it.heavy, heavy_count(s, ideal));
        v.reexecuted();
      }
      index += w.items.size();
    }
    int D = qv_depth_from_passes(widths);
    v.exact(where + ".D", r.D, D);
    v.exact(where + ".qv", r.qv, std::uint64_t{1} << D);
    v.exact(where + ".achieved", r.achieved, D > 0);
  } else if (protocol == "volumetric") {
    VolumetricTable tb = volumetric_from_json(rep);
    int cap = params.value("cap", kDefaultQubitCap);
    VolumetricMetric metric = volumetric_metric_from_name(tb.metric);
    std::uint64_t index = 0;
    for (const auto& row : tb.rows) {
      std::string rl = where + ".rows[" + std::to_string(row.width) + "x" + std::to_string(row.depth) + "]";
      if (row.items.empty()) {
        v.unverifiable(rl + ": per-circuit records missing");
        continue;
      }
      std::vector<double> vals;
      for (const auto& it : row.items) vals.push_back(it.value);
      double mean = mean_of(vals);
      v.num(rl + ".value", row.value, mean);
      if (row.has_pass) v.exact(rl + ".pass", row.pass, mean > kQvThreshold);
      for (std::size_t i : v.sample(row.items.size())) {
        const auto& it = row.items[i];
        Rng item = item_rng(it.seed);
        Rng gen = item.substream(0), run = item.substream(1);
        Circuit c = metric == VolumetricMetric::Xeb ? xeb_circuit(row.width, row.depth, gen)
                                                    : qv_layers_circuit(row.width, row.depth, gen);
        ProbDist ideal = ideal_distribution(c, cap);
        SampleSet s = execute_circuit(c, d, noise, t, it.shots, run, (index + i) * it.shots, cap);
        double val = 0.0;
        switch (metric) {
          case VolumetricMetric::Hog: val = hog_probability(s, ideal); break;
          case VolumetricMetric::Hellinger: val = hellinger_distance(s.empirical(), ideal); break;
          case VolumetricMetric::L1: val = l1_distance(s.empirical(), ideal); break;
          case VolumetricMetric::Xeb: val = xeb_alpha(s, ideal).alpha; break;
        }
        v.num(rl + ".records[" + std::to_string(i) + "].value (re-executed)", it.value, val);
        v.reexecuted();
      }
      index += row.items.size();
    }
  } else if (protocol == "rb") {
    RbResult r = rb_result_from_json(rep);
    verify_sequences(v, where, r.lengths, r.survival, r.fit, r.items);
    v.num(where + ".error_per_clifford", r.error_per_clifford, rb_error_per_clifford(r.fit.p, r.n_qubits));
    reexecute_sequences(v, where, r.items, d, noise, t,
                        [&](int m, Rng& gen) { return rb_sequence(r.n_qubits, m, gen); });
  } else if (protocol == "layer_fidelity") {
    LayerFidelityResult r = layer_fidelity_from_json(rep);
    verify_sequences(v, where, r.lengths, r.survival, r.fit, r.items);
    double lf = layer_fidelity_from_decay(r.fit.p, r.chain);
    v.num(where + ".layer_fidelity", r.layer_fidelity, lf);
    v.num(where + ".eplg", r.eplg, eplg(r.layer_fidelity, r.two_qubit_gates));
    reexecute_sequences(v, where, r.items, d, noise, t,
                        [&](int m, Rng& gen) { return layer_fidelity_sequence(r.chain, m, gen); });
  } else if (protocol == "mirror") {
    MirrorResult r = mirror_result_from_json(rep);
    std::vector<double> all, pols;
    for (const auto& p : r.points) {
      std::vector<double> succ;
      for (const auto& it : r.items)
        if (it.width == p.width && it.depth == p.depth)
          succ.push_back(static_cast<double>(it.successes) / static_cast<double>(it.shots));
      std::string pl = where + ".points[" + std::to_string(p.width) + "x" + std::to_string(p.depth) + "]";
      if (succ.empty()) {
        v.unverifiable(pl + ": per-circuit records missing");
        continue;
      }
      double s = mean_of(succ);
      v.num(pl + ".success", p.success, s);
      v.num(pl + ".polarization", p.polarization, mirror_polarization(s, p.width));
      pols.push_back(mirror_polarization(s, p.width));
    }
    for (const auto& it : r.items) all.push_back(static_cast<double>(it.successes) / static_cast<double>(it.shots));
    v.num(where + ".mean_success", r.mean_success, mean_of(all));
    v.num(where + ".polarization", r.polarization, mean_of(pols));
    for (std::size_t i : v.sample(r.items.size())) {
      const auto& it = r.items[i];
      Rng item = item_rng(it.seed);
      Rng gen = item.substream(0), run = item.substream(1);
      Circuit base = random_clifford_circuit(it.width, it.depth, gen);
      MirrorSpec spec = make_mirror_circuit(base, gen);
      SampleSet s = execute_circuit(spec.full, d, noise, t, it.shots, run, i * it.shots);
      std::string il = where + ".records[" + std::to_string(i) + "]";
      v.exact(il + ".expected (re-executed)", it.expected, spec.expected);
      v.exact(il + ".successes (re-executed)", it.successes, s.count(spec.expected));
      v.reexecuted();
    }
  } else if (protocol == "clops") {
    ClopsResult r = clops_result_from_json(rep);
    const Json& a = rep.at("aggregate");
    if (a.contains("elapsed_seconds") && a.contains("layers_per_second"))
      v.num(where + ".layers_per_second", r.layers_per_second,
            static_cast<double>(r.layers) / r.elapsed_seconds);
  } else if (protocol == "shadows") {
    ShadowResult r = shadow_result_from_json(rep);
    std::vector<PauliString> obs;
    for (const auto& e : r.estimates) obs.push_back(e.observable);
    auto re = shadow_estimates_from(r.snapshots, obs);
    for (std::size_t i = 0; i < re.size(); ++i) {
      std::string el = where + ".estimates[" + r.estimates[i].observable.str() + "]";
      v.num(el + ".estimate", r.estimates[i].estimate, re[i].estimate);
      v.num(el + ".variance_bound", r.estimates[i].variance_bound, re[i].variance_bound);
      v.exact(el + ".weight", r.estimates[i].weight, re[i].weight);
      v.exact(el + ".snapshots", r.estimates[i].snapshots, re[i].snapshots);
    }
  } else if (protocol == "collision") {
    CollisionTestResult r = collision_result_from_json(rep);
    const Json& rec = rep.at("records").at(0);
    auto shots = rec.at("shots").get<std::uint64_t>();
    auto distinct = rec.at("distinct").get<std::uint64_t>();
    CollisionStats s = collision_volume(shots, distinct, r.n);
    v.exact(where + ".shots", r.stats.shots, shots);
    v.exact(where + ".distinct", r.stats.distinct, distinct);
    v.exact(where + ".collisions", r.stats.collisions, s.collisions);
    v.num(where + ".volume", r.stats.volume, s.volume);
    v.exact(where + ".pass", r.pass, s.volume >= kCollisionThreshold);
    if (!v.sample(1).empty()) {
      int cap = params.value("cap", kDefaultQubitCap);
      Rng item = item_rng(r.seed);
      Rng gen = item.substream(0), run = item.substream(1);
      Circuit c = qv_model_circuit(r.n, gen);
      SampleSet ss = execute_circuit(c, d, noise, t, shots, run, 0, cap);
      v.exact(where + ".distinct (re-executed)", distinct, static_cast<std::uint64_t>(ss.counts().size()));
      v.reexecuted();
    }
  } else if (protocol == "xeb") {
    verify_xeb(v, where, xeb_verification_from_json(rep), d, noise, t);
  } else {
    v.unverifiable(where + ": unknown protocol '" + protocol + "'");
  }
}

}  // namespace

SelfVerifyResult self_verify_report(const Json& j, const SelfVerifyOptions& opt) {
  SelfVerifyResult out;
  Verifier v(opt, out);
  Report r;
  try {
    r = report_from_json(j);
  } catch (const Error& e) {
    out.unverifiable.push_back(std::string("report does not parse: ") + e.what());
    out.status = VerifyStatus::Unverifiable;
    return out;
  }
  try {
    if (r.verification) {
      if (r.verification->items.empty()) {
        v.unverifiable("verification: per-circuit records missing");
      } else {
        verify_xeb(v, "verification", *r.verification, r.device, r.noise, TranspileConfig{});
      }
      v.exact("status", report_status_name(r.status),
              report_status_name(r.verification->verified ? ReportStatus::Verified
                                                          : ReportStatus::VerificationFailed));
    }
    if (r.status == ReportStatus::VerificationFailed && !(r.base.empty() && r.peak.empty()))
      out.discrepancies.push_back("protocol results present although device verification failed");

    for (const auto* list : {&r.base, &r.peak}) {
      for (const auto& b : *list) {
        std::string where = b.mode + "." + b.id;
        if (!b.error.empty()) continue;
        std::map<std::string, std::vector<double>> values;
        for (std::size_t i = 0; i < b.repetitions.size(); ++i) {
          const Json& rep = b.repetitions[i];
          std::string rl = where + ".repetitions[" + std::to_string(i) + "]";
          verify_result(v, rl, b.protocol, rep, b.params, r.device, r.noise, b.transpile);
          for (const auto& [k, val] : headline_metrics(b.protocol, rep)) values[k].push_back(val);
        }
        for (const auto& [k, s] : b.summary) {
          auto it = values.find(k);
          if (it == values.end()) {
            if (k != "layers_per_second") out.discrepancies.push_back(where + ".summary." + k + ": no source values");
            continue;
          }
          MetricSummary m = summarize_values(it->second);
          v.num(where + ".summary." + k + ".mean", s.mean, m.mean);
          v.num(where + ".summary." + k + ".std", s.std, m.std);
          v.exact(where + ".summary." + k + ".count", s.values.size(), m.values.size());
          for (std::size_t i = 0; i < std::min(s.values.size(), m.values.size()); ++i)
            v.num(where + ".summary." + k + ".values[" + std::to_string(i) + "]", s.values[i], m.values[i]);
        }
        for (const auto& [k, vals] : values)
          if (!b.summary.count(k) && k != "layers_per_second")
            out.discrepancies.push_back(where + ".summary." + k + ": missing");
      }
    }
  } catch (const std::exception& e) {
    out.unverifiable.push_back(std::string("records could not be read: ") + e.what());
  }
  if (!out.discrepancies.empty()) {
    out.status = VerifyStatus::Discrepancies;
  } else if (!out.unverifiable.empty()) {
    out.status = VerifyStatus::Unverifiable;
  } else {
    out.status = VerifyStatus::Ok;
  }
  return out;
}

SelfVerifyResult self_verify_report(const Report& report, const SelfVerifyOptions& opt) {
  return self_verify_report(to_json(report), opt);
}

}  // namespace qbench
