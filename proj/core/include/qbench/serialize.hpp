#pragma once

#include <string>

#include "json.hpp"
#include "qbench/circuit.hpp"
#include "qbench/device.hpp"
#include "qbench/distributions.hpp"
#include "qbench/noise.hpp"
#include "qbench/protocols.hpp"
#include "qbench/transpile.hpp"

namespace qbench {

using Json = nlohmann::json;

inline constexpr const char* kCircuitSchema = "circuit/1";
inline constexpr const char* kDeviceSchema = "devmodel/1";

// Sorted keys, two-space indentation, floats printed with %.17g, non-finite
// floats as null. Parsing the output and dumping again is byte-identical.
std::string canonical_json(const Json& j);

// Throws ParseError (with line and column) on malformed input.
Json parse_json(const std::string& text);
Json load_json_file(const std::string& path);
std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

Json to_json(const Gate& g);
Gate gate_from_json(const Json& j);

Json to_json(const Circuit& c);
Circuit circuit_from_json(const Json& j);

Json to_json(const DeviceModel& d);
DeviceModel device_from_json(const Json& j);

Json to_json(const DriftSchedule& s);
DriftSchedule drift_from_json(const Json& j);

Json to_json(const NoiseModel& n);
// Starts from base and replaces every field present in j. Accepted keys:
// gate_error {kind: p}, edge_error [{a, b, p}], readout_error (list or one
// number for every qubit), drift, scale (applied last to gate errors).
NoiseModel noise_from_json(const Json& j, const NoiseModel& base = {}, int n_qubits = 0);

// {bitstring: count}
Json to_json(const SampleSet& s);
SampleSet samples_from_json(const Json& j, int n_bits);

// Dense array of probabilities.
Json to_json(const ProbDist& p);
ProbDist probdist_from_json(const Json& j);

Json to_json(const TranspileConfig& cfg);
TranspileConfig transpile_config_from_json(const Json& j);

Json to_json(const PassLog& log);
PassLog pass_log_from_json(const Json& j);

// Protocol results as {records, aggregate, pass_log}; the inverse functions
// restore the stored aggregate as-is, so self-verification can compare it
// against a recomputation from the records.
Json to_json(const QvResult& r);
QvResult qv_result_from_json(const Json& j);
Json to_json(const VolumetricTable& t);
VolumetricTable volumetric_from_json(const Json& j);
Json to_json(const RbResult& r);
RbResult rb_result_from_json(const Json& j);
Json to_json(const LayerFidelityResult& r);
LayerFidelityResult layer_fidelity_from_json(const Json& j);
Json to_json(const MirrorResult& r);
MirrorResult mirror_result_from_json(const Json& j);
Json to_json(const ClopsResult& r);
ClopsResult clops_result_from_json(const Json& j);
Json to_json(const ShadowResult& r);
ShadowResult shadow_result_from_json(const Json& j);
Json to_json(const CollisionTestResult& r);
CollisionTestResult collision_result_from_json(const Json& j);
Json to_json(const XebVerification& r);
XebVerification xeb_verification_from_json(const Json& j);

}  // namespace qbench
