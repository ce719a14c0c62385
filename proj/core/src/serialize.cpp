#include "qbench/serialize.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "qbench/error.hpp"

namespace qbench {

namespace {

void dump_value(const Json& j, int depth, std::string& out);

void newline(int depth, std::string& out) {
  out += '\n';
  out.append(static_cast<std::size_t>(2 * depth), ' ');
}

bool is_scalar(const Json& j) { return !j.is_object() && !j.is_array(); }

void dump_float(double v, std::string& out) {
  if (!std::isfinite(v)) {
    out += "null";
    return;
  }
  if (v == 0.0) v = 0.0;  // no "-0"
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  out += buf;
}

std::string hex64(std::uint64_t v) {
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

void dump_value(const Json& j, int depth, std::string& out) {
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += '{';
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ',';
        first = false;
        newline(depth + 1, out);
        out += Json(it.key()).dump();
        out += ": ";
        dump_value(it.value(), depth + 1, out);
      }
      newline(depth, out);
      out += '}';
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      const bool flat = std::all_of(j.begin(), j.end(), is_scalar);
      out += '[';
      bool first = true;
      for (const auto& v : j) {
        if (!first) out += flat ? ", " : ",";
        first = false;
        if (!flat) newline(depth + 1, out);
        dump_value(v, depth + 1, out);
      }
      if (!flat) newline(depth, out);
      out += ']';
      return;
    }
    case Json::value_t::number_float: dump_float(j.get<double>(), out); return;
    default: out += j.dump(); return;
  }
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

GateKind kind_from_json(const std::string& name) {
  for (GateKind k : kAllGateKinds)
    if (lower(std::string(gate_name(k))) == lower(name)) return k;
  throw PreconditionError("unknown gate kind '" + name + "'");
}

std::string kind_json_name(GateKind k) { return lower(std::string(gate_name(k))); }

const Json& need(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw PreconditionError(std::string("missing field '") + key + "'");
  return j.at(key);
}

// null stands for a non-finite value in canonical output.
double as_double(const Json& j) {
  return j.is_null() ? std::numeric_limits<double>::quiet_NaN() : j.get<double>();
}

template <typename T>
T get_or(const Json& j, const char* key, T fallback) {
  if (!j.is_object() || !j.contains(key) || j.at(key).is_null()) return fallback;
  return j.at(key).get<T>();
}

// Wraps nlohmann type errors so callers see one exception family.
template <typename F>
auto guarded(const char* what, F&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const Json::exception& e) {
    throw PreconditionError(std::string("invalid ") + what + ": " + e.what());
  }
}

void check_schema(const Json& j, const char* schema) {
  if (!j.is_object()) throw PreconditionError(std::string("expected a ") + schema + " object");
  if (j.contains("schema") && j.at("schema") != schema)
    throw PreconditionError("schema mismatch: expected " + std::string(schema) + ", got " + j.at("schema").dump());
}

Json seed_json(const ItemSeed& s) { return {{"seed", s.seed}, {"stream", s.stream}}; }
ItemSeed seed_from(const Json& j) { return {need(j, "seed").get<std::uint64_t>(), need(j, "stream").get<std::uint64_t>()}; }

Json fit_json(const DecayFit& f) {
  return {{"A", f.A}, {"B", f.B}, {"p", f.p}, {"residual", f.residual}, {"converged", f.converged}};
}
DecayFit fit_from(const Json& j) {
  DecayFit f;
  f.A = as_double(need(j, "A"));
  f.B = as_double(need(j, "B"));
  f.p = as_double(need(j, "p"));
  f.residual = as_double(need(j, "residual"));
  f.converged = get_or(j, "converged", true);
  return f;
}

Json sequence_records(const std::vector<RbSequenceRecord>& items) {
  Json a = Json::array();
  for (const auto& it : items) {
    Json r = seed_json(it.seed);
    r["length"] = it.length;
    r["shots"] = it.shots;
    r["survivors"] = it.survivors;
    a.push_back(r);
  }
  return a;
}

std::vector<RbSequenceRecord> sequence_records_from(const Json& a) {
  std::vector<RbSequenceRecord> out;
  for (const auto& r : a) {
    RbSequenceRecord it;
    it.seed = seed_from(r);
    it.length = need(r, "length").get<int>();
    it.shots = need(r, "shots").get<std::uint64_t>();
    it.survivors = need(r, "survivors").get<std::uint64_t>();
    out.push_back(it);
  }
  return out;
}

PassLog optional_pass_log(const Json& j) {
  return j.contains("pass_log") ? pass_log_from_json(j.at("pass_log")) : PassLog{};
}

const Json& records_of(const Json& j) {
  static const Json empty = Json::array();
  return j.contains("records") ? j.at("records") : empty;
}

}  // namespace

std::string canonical_json(const Json& j) {
  std::string out;
  dump_value(j, 0, out);
  out += '\n';
  return out;
}

Json parse_json(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    std::size_t pos = std::min<std::size_t>(e.byte, text.size());
    int line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < pos; ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    std::string msg = e.what();
    auto colon = msg.rfind(": ");
    throw ParseError("malformed JSON" + (colon == std::string::npos ? "" : msg.substr(colon)), line, col);
  }
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw PreconditionError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Json load_json_file(const std::string& path) {
  std::string text = read_text_file(path);
  try {
    return parse_json(text);
  } catch (const ParseError& e) {
    throw ParseError(path + ": malformed JSON", e.line(), e.column());
  }
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw PreconditionError("cannot write '" + path + "'");
  out << text;
  if (!out) throw PreconditionError("failed writing '" + path + "'");
}

// ---- circuits ----

Json to_json(const Gate& g) {
  Json j;
  j["op"] = kind_json_name(g.kind);
  j["targets"] = g.targets;
  if (is_parameterized(g.kind)) j["angle"] = g.angle;
  if (g.kind == GateKind::Measure) j["cbit"] = g.cbit;
  if (g.kind == GateKind::PauliLayer) j["paulis"] = g.paulis;
  if (g.kind == GateKind::U2Q) {
    Json m = Json::array();
    for (int r = 0; r < 4; ++r) {
      Json row = Json::array();
      for (int c = 0; c < 4; ++c) row.push_back(Json::array({(*g.unitary)(r, c).real(), (*g.unitary)(r, c).imag()}));
      m.push_back(row);
    }
    j["matrix"] = m;
  }
  return j;
}

Gate gate_from_json(const Json& j) {
  return guarded("gate", [&] {
    Gate g;
    g.kind = kind_from_json(need(j, "op").get<std::string>());
    g.targets = need(j, "targets").get<std::vector<int>>();
    if (is_parameterized(g.kind)) g.angle = as_double(need(j, "angle"));
    if (g.kind == GateKind::Measure) g.cbit = need(j, "cbit").get<int>();
    if (g.kind == GateKind::PauliLayer) g.paulis = need(j, "paulis").get<std::string>();
    if (g.kind == GateKind::U2Q) {
      const Json& m = need(j, "matrix");
      if (!m.is_array() || m.size() != 4) throw PreconditionError("U2Q matrix must be 4x4");
      Mat4 u;
      for (int r = 0; r < 4; ++r) {
        const Json& row = m.at(static_cast<std::size_t>(r));
        if (!row.is_array() || row.size() != 4) throw PreconditionError("U2Q matrix must be 4x4");
        for (int c = 0; c < 4; ++c) {
          const Json& e = row.at(static_cast<std::size_t>(c));
          u(r, c) = cplx(e.at(0).get<double>(), e.at(1).get<double>());
        }
      }
      g.unitary = std::make_shared<const Mat4>(u);
    }
    g.validate();
    return g;
  });
}

Json to_json(const Circuit& c) {
  Json j;
  j["schema"] = kCircuitSchema;
  j["n_qubits"] = c.n_qubits();
  j["n_clbits"] = c.n_clbits();
  const auto& m = c.metadata();
  Json meta = {{"name", m.name}, {"mid_circuit_measure", m.mid_circuit_measure}};
  if (m.has_seed) {
    meta["seed"] = m.seed;
    meta["stream"] = m.stream;
  }
  if (!m.input_layout.empty()) meta["input_layout"] = m.input_layout;
  j["metadata"] = meta;
  Json layers = Json::array();
  for (const auto& layer : c.layers()) {
    Json l = Json::array();
    for (const auto& g : layer) l.push_back(to_json(g));
    layers.push_back(l);
  }
  j["layers"] = layers;
  return j;
}

Circuit circuit_from_json(const Json& j) {
  check_schema(j, kCircuitSchema);
  return guarded("circuit", [&] {
    int n = need(j, "n_qubits").get<int>();
    Circuit c(n, get_or(j, "n_clbits", n));
    if (j.contains("metadata")) {
      const Json& m = j.at("metadata");
      c.metadata().name = get_or<std::string>(m, "name", "");
      c.metadata().mid_circuit_measure = get_or(m, "mid_circuit_measure", false);
      if (m.contains("seed")) {
        c.metadata().seed = m.at("seed").get<std::uint64_t>();
        c.metadata().stream = get_or<std::uint64_t>(m, "stream", 0);
        c.metadata().has_seed = true;
      }
      c.metadata().input_layout = get_or(m, "input_layout", std::vector<int>{});
    }
    for (const auto& l : need(j, "layers")) {
      std::vector<Gate> layer;
      for (const auto& g : l) layer.push_back(gate_from_json(g));
      c.add_layer(std::move(layer));
    }
    c.validate();
    return c;
  });
}

// ---- devices and noise ----

Json to_json(const DriftSchedule& s) { return {{"cycle", s.cycle}, {"noise_std", s.noise_std}, {"seed", s.seed}}; }

DriftSchedule drift_from_json(const Json& j) {
  return guarded("drift schedule", [&] {
    DriftSchedule s;
    s.cycle = need(j, "cycle").get<std::vector<double>>();
    s.noise_std = get_or(j, "noise_std", 0.0);
    s.seed = get_or<std::uint64_t>(j, "seed", 0);
    s.validate();
    return s;
  });
}

namespace {

Json kind_map(const std::map<GateKind, double>& m) {
  Json j = Json::object();
  for (const auto& [k, v] : m) j[kind_json_name(k)] = v;
  return j;
}

std::map<GateKind, double> kind_map_from(const Json& j) {
  std::map<GateKind, double> m;
  for (auto it = j.begin(); it != j.end(); ++it) m[kind_from_json(it.key())] = it.value().get<double>();
  return m;
}

Json edge_map(const std::map<std::pair<int, int>, double>& m) {
  Json a = Json::array();
  for (const auto& [k, v] : m) a.push_back({{"a", k.first}, {"b", k.second}, {"p", v}});
  return a;
}

std::map<std::pair<int, int>, double> edge_map_from(const Json& a) {
  std::map<std::pair<int, int>, double> m;
  for (const auto& e : a) {
    const int a = need(e, "a").get<int>();
    const int b = need(e, "b").get<int>();
    m[{std::min(a, b), std::max(a, b)}] = as_double(need(e, "p"));
  }
  return m;
}

}  // namespace

Json to_json(const DeviceModel& d) {
  Json j;
  j["schema"] = kDeviceSchema;
  j["name"] = d.name;
  j["n_qubits"] = d.n_qubits;
  j["working"] = d.working;
  Json edges = Json::array();
  for (const auto& e : d.edges) edges.push_back({{"a", e.a}, {"b", e.b}, {"strength", e.strength}});
  j["edges"] = edges;
  Json natives = Json::array();
  for (GateKind k : d.native_gates) natives.push_back(kind_json_name(k));
  j["native_gates"] = natives;
  j["gate_error"] = kind_map(d.gate_error);
  j["edge_error"] = edge_map(d.edge_error);
  j["gate_duration"] = kind_map(d.gate_duration);
  j["t1"] = d.t1;
  j["t2"] = d.t2;
  j["readout_error"] = d.readout_error;
  if (d.drift) j["drift"] = to_json(*d.drift);
  return j;
}

DeviceModel device_from_json(const Json& j) {
  check_schema(j, kDeviceSchema);
  return guarded("device model", [&] {
    DeviceModel d;
    d.name = get_or<std::string>(j, "name", "device");
    d.n_qubits = need(j, "n_qubits").get<int>();
    if (d.n_qubits < 0) throw PreconditionError("n_qubits must be nonnegative");
    const std::size_t n = static_cast<std::size_t>(d.n_qubits);
    d.working = j.contains("working") ? j.at("working").get<std::vector<bool>>() : std::vector<bool>(n, true);
    for (const auto& e : get_or(j, "edges", Json::array())) {
      if (e.is_array()) {
        d.edges.push_back({e.at(0).get<int>(), e.at(1).get<int>(), e.size() > 2 ? e.at(2).get<double>() : 1.0});
      } else {
        d.edges.push_back({need(e, "a").get<int>(), need(e, "b").get<int>(), get_or(e, "strength", 1.0)});
      }
    }
    if (j.contains("native_gates")) {
      for (const auto& k : j.at("native_gates")) d.native_gates.insert(kind_from_json(k.get<std::string>()));
    } else {
      d.native_gates = devices::default_natives();
    }
    if (j.contains("gate_error")) d.gate_error = kind_map_from(j.at("gate_error"));
    if (j.contains("edge_error")) d.edge_error = edge_map_from(j.at("edge_error"));
    if (j.contains("gate_duration")) d.gate_duration = kind_map_from(j.at("gate_duration"));
    d.t1 = get_or(j, "t1", std::vector<double>{});
    d.t2 = get_or(j, "t2", std::vector<double>{});
    d.readout_error = get_or(j, "readout_error", std::vector<double>{});
    if (j.contains("drift") && !j.at("drift").is_null()) d.drift = drift_from_json(j.at("drift"));
    d.validate();
    return d;
  });
}

Json to_json(const NoiseModel& n) {
  Json j;
  j["gate_error"] = kind_map(n.gate_error);
  j["edge_error"] = edge_map(n.edge_error);
  j["readout_error"] = n.readout_error;
  if (n.drift) j["drift"] = to_json(*n.drift);
  return j;
}

NoiseModel noise_from_json(const Json& j, const NoiseModel& base, int n_qubits) {
  if (j.is_null()) return base;
  if (!j.is_object()) throw PreconditionError("noise overrides must be an object");
  return guarded("noise model", [&] {
    NoiseModel n = base;
    if (j.contains("gate_error"))
      for (const auto& [k, v] : kind_map_from(j.at("gate_error"))) n.gate_error[k] = v;
    if (j.contains("edge_error"))
      for (const auto& [k, v] : edge_map_from(j.at("edge_error"))) n.edge_error[k] = v;
    if (j.contains("readout_error")) {
      const Json& r = j.at("readout_error");
      if (r.is_number()) {
        int width = n_qubits > 0 ? n_qubits : static_cast<int>(n.readout_error.size());
        if (width <= 0) throw PreconditionError("scalar readout_error needs a known qubit count");
        n.readout_error.assign(static_cast<std::size_t>(width), r.get<double>());
      } else {
        n.readout_error = r.get<std::vector<double>>();
      }
    }
    if (j.contains("drift")) {
      if (j.at("drift").is_null()) {
        n.drift.reset();
      } else {
        n.drift = drift_from_json(j.at("drift"));
      }
    }
    if (j.contains("scale")) n = n.scaled(j.at("scale").get<double>());
    n.validate();
    return n;
  });
}

// ---- distributions ----

Json to_json(const SampleSet& s) {
  Json j = Json::object();
  for (const auto& [bits, count] : s.counts()) j[bits] = count;
  return j;
}

SampleSet samples_from_json(const Json& j, int n_bits) {
  return guarded("sample set", [&] {
    SampleSet s(n_bits);
    for (auto it = j.begin(); it != j.end(); ++it) {
      if (static_cast<int>(it.key().size()) != n_bits)
        throw PreconditionError("bitstring '" + it.key() + "' does not have " + std::to_string(n_bits) + " bits");
      s.add(it.key(), it.value().get<std::uint64_t>());
    }
    return s;
  });
}

Json to_json(const ProbDist& p) { return p.probs(); }

ProbDist probdist_from_json(const Json& j) {
  return guarded("distribution", [&] {
    auto v = j.get<std::vector<double>>();
    int bits = 0;
    while ((std::size_t{1} << bits) < v.size()) ++bits;
    if ((std::size_t{1} << bits) != v.size()) throw PreconditionError("distribution length is not a power of two");
    ProbDist p(bits, std::move(v));
    p.check();
    return p;
  });
}

// ---- transpilation ----

Json to_json(const TranspileConfig& cfg) {
  return {{"mode", mode_name(cfg.mode)}, {"passes", cfg.passes}, {"seed", cfg.seed}};
}

TranspileConfig transpile_config_from_json(const Json& j) {
  return guarded("transpile config", [&] {
    TranspileConfig c;
    c.mode = mode_from_name(get_or<std::string>(j, "mode", "base"));
    c.passes = get_or(j, "passes", std::vector<std::string>{});
    c.seed = get_or<std::uint64_t>(j, "seed", 0);
    c.validate();
    return c;
  });
}

Json to_json(const PassLog& log) {
  Json entries = Json::array();
  for (const auto& e : log.entries)
    entries.push_back({{"name", e.name},
                       {"gates_in", e.gates_in},
                       {"gates_out", e.gates_out},
                       {"swaps_added", e.swaps_added},
                       {"violations", e.violations},
                       {"wall_seconds", e.wall_seconds}});
  return {{"mode", log.mode},
          {"pipeline_version", log.pipeline_version},
          {"entries", entries},
          {"equivalence", log.equivalence}};
}

PassLog pass_log_from_json(const Json& j) {
  return guarded("pass log", [&] {
    PassLog log;
    log.mode = get_or<std::string>(j, "mode", "");
    log.pipeline_version = get_or<std::string>(j, "pipeline_version", "");
    log.equivalence = get_or<std::string>(j, "equivalence", "");
    for (const auto& e : get_or(j, "entries", Json::array())) {
      PassRecord r;
      r.name = need(e, "name").get<std::string>();
      r.gates_in = get_or<std::size_t>(e, "gates_in", 0);
      r.gates_out = get_or<std::size_t>(e, "gates_out", 0);
      r.swaps_added = get_or<std::size_t>(e, "swaps_added", 0);
      r.violations = get_or<std::size_t>(e, "violations", 0);
      r.wall_seconds = get_or(e, "wall_seconds", 0.0);
      log.entries.push_back(r);
    }
    return log;
  });
}

// ---- protocol results ----

Json to_json(const QvResult& r) {
  Json records = Json::array(), widths = Json::array();
  for (const auto& w : r.widths) {
    for (const auto& it : w.items) {
      Json rec = seed_json(it.seed);
      rec["width"] = w.width;
      rec["shots"] = it.shots;
      rec["heavy"] = it.heavy;
      rec["hog"] = it.hog;
      records.push_back(rec);
    }
    widths.push_back({{"width", w.width},
                      {"circuits", w.circuits},
                      {"mean_hog", w.mean_hog},
                      {"lower_bound", w.lower_bound},
                      {"pass", w.pass}});
  }
  Json agg = {{"widths", widths},     {"D", r.D},
              {"qv", r.qv},           {"achieved", r.achieved},
              {"conformant", r.conformant}, {"rule", r.rule}};
  return {{"records", records}, {"aggregate", agg}, {"pass_log", to_json(r.pass_log)}};
}

QvResult qv_result_from_json(const Json& j) {
  return guarded("QV result", [&] {
    QvResult r;
    const Json& agg = need(j, "aggregate");
    for (const auto& w : need(agg, "widths")) {
      QvWidthRecord rec;
      rec.width = need(w, "width").get<int>();
      rec.circuits = need(w, "circuits").get<std::size_t>();
      rec.mean_hog = as_double(need(w, "mean_hog"));
      rec.lower_bound = as_double(need(w, "lower_bound"));
      rec.pass = need(w, "pass").get<bool>();
      r.widths.push_back(rec);
    }
    for (const auto& it : records_of(j)) {
      int width = need(it, "width").get<int>();
      auto w = std::find_if(r.widths.begin(), r.widths.end(), [&](const QvWidthRecord& x) { return x.width == width; });
      if (w == r.widths.end()) throw PreconditionError("QV record for unknown width " + std::to_string(width));
      QvCircuitRecord c;
      c.seed = seed_from(it);
      c.shots = need(it, "shots").get<std::uint64_t>();
      c.heavy = need(it, "heavy").get<std::uint64_t>();
      c.hog = as_double(need(it, "hog"));
      w->items.push_back(c);
    }
    r.D = need(agg, "D").get<int>();
    r.qv = need(agg, "qv").get<std::uint64_t>();
    r.achieved = get_or(agg, "achieved", r.D > 0);
    r.conformant = get_or(agg, "conformant", true);
    r.rule = get_or<std::string>(agg, "rule", kQvRule);
    r.pass_log = optional_pass_log(j);
    return r;
  });
}

Json to_json(const VolumetricTable& t) {
  Json records = Json::array(), rows = Json::array();
  for (const auto& row : t.rows) {
    for (const auto& it : row.items) {
      Json rec = seed_json(it.seed);
      rec["width"] = row.width;
      rec["depth"] = row.depth;
      rec["shots"] = it.shots;
      rec["value"] = it.value;
      records.push_back(rec);
    }
    Json jr = {{"width", row.width}, {"depth", row.depth}, {"metric", row.metric}, {"value", row.value}};
    if (row.has_pass) jr["pass"] = row.pass;
    rows.push_back(jr);
  }
  return {{"records", records},
          {"aggregate", {{"shape", t.shape}, {"metric", t.metric}, {"rows", rows}}},
          {"pass_log", to_json(t.pass_log)}};
}

VolumetricTable volumetric_from_json(const Json& j) {
  return guarded("volumetric table", [&] {
    VolumetricTable t;
    const Json& agg = need(j, "aggregate");
    t.shape = need(agg, "shape").get<std::string>();
    t.metric = need(agg, "metric").get<std::string>();
    for (const auto& jr : need(agg, "rows")) {
      VolumetricRow row;
      row.width = need(jr, "width").get<int>();
      row.depth = need(jr, "depth").get<int>();
      row.metric = need(jr, "metric").get<std::string>();
      row.value = as_double(need(jr, "value"));
      row.has_pass = jr.contains("pass");
      row.pass = get_or(jr, "pass", false);
      t.rows.push_back(row);
    }
    for (const auto& it : records_of(j)) {
      int w = need(it, "width").get<int>(), d = need(it, "depth").get<int>();
      auto row = std::find_if(t.rows.begin(), t.rows.end(),
                              [&](const VolumetricRow& r) { return r.width == w && r.depth == d; });
      if (row == t.rows.end()) throw PreconditionError("volumetric record for an unknown grid point");
      row->items.push_back({seed_from(it), need(it, "shots").get<std::uint64_t>(), as_double(need(it, "value"))});
    }
    t.pass_log = optional_pass_log(j);
    return t;
  });
}

Json to_json(const RbResult& r) {
  Json agg = {{"n_qubits", r.n_qubits},
              {"lengths", r.lengths},
              {"survival", r.survival},
              {"fit", fit_json(r.fit)},
              {"error_per_clifford", r.error_per_clifford}};
  return {{"records", sequence_records(r.items)}, {"aggregate", agg}, {"pass_log", to_json(r.pass_log)}};
}

RbResult rb_result_from_json(const Json& j) {
  return guarded("RB result", [&] {
    RbResult r;
    const Json& agg = need(j, "aggregate");
    r.n_qubits = need(agg, "n_qubits").get<int>();
    r.lengths = need(agg, "lengths").get<std::vector<int>>();
    r.survival = need(agg, "survival").get<std::vector<double>>();
    r.fit = fit_from(need(agg, "fit"));
    r.error_per_clifford = as_double(need(agg, "error_per_clifford"));
    r.items = sequence_records_from(records_of(j));
    r.pass_log = optional_pass_log(j);
    return r;
  });
}

Json to_json(const LayerFidelityResult& r) {
  Json agg = {{"chain", r.chain},
              {"two_qubit_gates", r.two_qubit_gates},
              {"lengths", r.lengths},
              {"survival", r.survival},
              {"fit", fit_json(r.fit)},
              {"layer_fidelity", r.layer_fidelity},
              {"eplg", r.eplg},
              {"procedure", r.procedure},
              {"procedure_hash", hex64(fnv1a64(r.procedure))}};
  return {{"records", sequence_records(r.items)}, {"aggregate", agg}, {"pass_log", to_json(r.pass_log)}};
}

LayerFidelityResult layer_fidelity_from_json(const Json& j) {
  return guarded("layer fidelity result", [&] {
    LayerFidelityResult r;
    const Json& agg = need(j, "aggregate");
    r.chain = need(agg, "chain").get<int>();
    r.two_qubit_gates = need(agg, "two_qubit_gates").get<int>();
    r.lengths = need(agg, "lengths").get<std::vector<int>>();
    r.survival = need(agg, "survival").get<std::vector<double>>();
    r.fit = fit_from(need(agg, "fit"));
    r.layer_fidelity = as_double(need(agg, "layer_fidelity"));
    r.eplg = as_double(need(agg, "eplg"));
    r.procedure = agg.value("procedure", std::string(kLayerFidelityProcedure));
    r.items = sequence_records_from(records_of(j));
    r.pass_log = optional_pass_log(j);
    return r;
  });
}

Json to_json(const MirrorResult& r) {
  Json records = Json::array(), points = Json::array();
  for (const auto& it : r.items) {
    Json rec = seed_json(it.seed);
    rec["width"] = it.width;
    rec["depth"] = it.depth;
    rec["expected"] = it.expected;
    rec["shots"] = it.shots;
    rec["successes"] = it.successes;
    records.push_back(rec);
  }
  for (const auto& p : r.points)
    points.push_back(
        {{"width", p.width}, {"depth", p.depth}, {"success", p.success}, {"polarization", p.polarization}});
  Json agg = {{"points", points}, {"mean_success", r.mean_success}, {"polarization", r.polarization}};
  return {{"records", records}, {"aggregate", agg}, {"pass_log", to_json(r.pass_log)}};
}

MirrorResult mirror_result_from_json(const Json& j) {
  return guarded("mirror result", [&] {
    MirrorResult r;
    const Json& agg = need(j, "aggregate");
    for (const auto& p : need(agg, "points"))
      r.points.push_back({need(p, "width").get<int>(), need(p, "depth").get<int>(), as_double(need(p, "success")),
                          as_double(need(p, "polarization"))});
    r.mean_success = as_double(need(agg, "mean_success"));
    r.polarization = as_double(need(agg, "polarization"));
    for (const auto& it : records_of(j)) {
      MirrorCircuitRecord rec;
      rec.seed = seed_from(it);
      rec.width = need(it, "width").get<int>();
      rec.depth = need(it, "depth").get<int>();
      rec.expected = need(it, "expected").get<std::string>();
      rec.shots = need(it, "shots").get<std::uint64_t>();
      rec.successes = need(it, "successes").get<std::uint64_t>();
      r.items.push_back(rec);
    }
    r.pass_log = optional_pass_log(j);
    return r;
  });
}

Json to_json(const ClopsResult& r) {
  Json agg = {{"width", r.width},
              {"circuits", r.circuits},
              {"layers", r.layers},
              {"gates", r.gates},
              {"shots", r.shots},
              {"elapsed_seconds", r.elapsed_seconds},
              {"layers_per_second", r.layers_per_second},
              {"host_relative", r.host_relative}};
  return {{"records", Json::array()}, {"aggregate", agg}, {"pass_log", to_json(r.pass_log)}};
}

ClopsResult clops_result_from_json(const Json& j) {
  return guarded("CLOPS result", [&] {
    ClopsResult r;
    const Json& agg = need(j, "aggregate");
    r.width = need(agg, "width").get<int>();
    r.circuits = need(agg, "circuits").get<std::uint64_t>();
    r.layers = need(agg, "layers").get<std::uint64_t>();
    r.gates = need(agg, "gates").get<std::uint64_t>();
    r.shots = need(agg, "shots").get<std::uint64_t>();
    r.elapsed_seconds = get_or(agg, "elapsed_seconds", 0.0);
    r.layers_per_second = get_or(agg, "layers_per_second", 0.0);
    r.host_relative = get_or(agg, "host_relative", true);
    r.pass_log = optional_pass_log(j);
    return r;
  });
}

Json to_json(const ShadowResult& r) {
  Json records = Json::array(), estimates = Json::array();
  for (const auto& s : r.snapshots) {
    std::vector<int> cl(s.cliffords.begin(), s.cliffords.end());
    records.push_back({{"cliffords", cl}, {"outcome", s.outcome}});
  }
  for (const auto& e : r.estimates)
    estimates.push_back({{"observable", e.observable.str()},
                         {"weight", e.weight},
                         {"estimate", e.estimate},
                         {"variance_bound", e.variance_bound},
                         {"snapshots", e.snapshots}});
  return {{"records", records}, {"aggregate", {{"estimates", estimates}}}, {"seed", seed_json(r.seed)}};
}

ShadowResult shadow_result_from_json(const Json& j) {
  return guarded("shadow result", [&] {
    ShadowResult r;
    if (j.contains("seed")) r.seed = seed_from(j.at("seed"));
    for (const auto& e : need(need(j, "aggregate"), "estimates")) {
      ShadowEstimate est;
      est.observable = PauliString::parse(need(e, "observable").get<std::string>());
      est.weight = need(e, "weight").get<int>();
      est.estimate = as_double(need(e, "estimate"));
      est.variance_bound = as_double(need(e, "variance_bound"));
      est.snapshots = need(e, "snapshots").get<std::uint64_t>();
      r.estimates.push_back(est);
    }
    for (const auto& s : records_of(j)) {
      ShadowSnapshot snap;
      for (int c : need(s, "cliffords").get<std::vector<int>>()) {
        if (c < 0 || c >= 24) throw PreconditionError("Clifford index out of range");
        snap.cliffords.push_back(static_cast<std::uint8_t>(c));
      }
      snap.outcome = need(s, "outcome").get<std::string>();
      r.snapshots.push_back(std::move(snap));
    }
    return r;
  });
}

Json to_json(const CollisionTestResult& r) {
  Json rec = seed_json(r.seed);
  rec["n"] = r.n;
  rec["shots"] = r.stats.shots;
  rec["distinct"] = r.stats.distinct;
  Json agg = {{"n", r.n},
              {"shots", r.stats.shots},
              {"outcomes", r.stats.outcomes},
              {"distinct", r.stats.distinct},
              {"collisions", r.stats.collisions},
              {"volume", r.stats.volume},
              {"threshold", kCollisionThreshold},
              {"pass", r.pass}};
  return {{"records", Json::array({rec})}, {"aggregate", agg}, {"pass_log", to_json(r.pass_log)}};
}

CollisionTestResult collision_result_from_json(const Json& j) {
  return guarded("collision result", [&] {
    CollisionTestResult r;
    const Json& agg = need(j, "aggregate");
    r.n = need(agg, "n").get<int>();
    r.stats.shots = need(agg, "shots").get<std::uint64_t>();
    r.stats.outcomes = as_double(need(agg, "outcomes"));
    r.stats.distinct = need(agg, "distinct").get<std::uint64_t>();
    r.stats.collisions = need(agg, "collisions").get<std::uint64_t>();
    r.stats.volume = as_double(need(agg, "volume"));
    r.pass = need(agg, "pass").get<bool>();
    const Json& recs = records_of(j);
    if (!recs.empty()) r.seed = seed_from(recs.at(0));
    r.pass_log = optional_pass_log(j);
    return r;
  });
}

Json to_json(const XebVerification& r) {
  Json records = Json::array();
  for (const auto& it : r.items) {
    Json rec = seed_json(it.seed);
    rec["shots"] = it.shots;
    rec["alpha"] = it.alpha;
    rec["ideal"] = it.ideal;
    records.push_back(rec);
  }
  Json agg = {{"n", r.n},
              {"depth", r.depth},
              {"alpha_mean", r.alpha_mean},
              {"std_error", r.std_error},
              {"fidelity", r.fidelity},
              {"threshold", r.threshold},
              {"verified", r.verified}};
  return {{"records", records}, {"aggregate", agg}, {"pass_log", to_json(r.pass_log)}};
}

XebVerification xeb_verification_from_json(const Json& j) {
  return guarded("XEB verification", [&] {
    XebVerification r;
    const Json& agg = need(j, "aggregate");
    r.n = need(agg, "n").get<int>();
    r.depth = need(agg, "depth").get<int>();
    r.alpha_mean = as_double(need(agg, "alpha_mean"));
    r.std_error = as_double(need(agg, "std_error"));
    r.fidelity = as_double(need(agg, "fidelity"));
    r.threshold = as_double(need(agg, "threshold"));
    r.verified = need(agg, "verified").get<bool>();
    for (const auto& it : records_of(j))
      r.items.push_back({seed_from(it), need(it, "shots").get<std::uint64_t>(), as_double(need(it, "alpha")),
                         as_double(need(it, "ideal"))});
    r.pass_log = optional_pass_log(j);
    return r;
  });
}

}  // namespace qbench
