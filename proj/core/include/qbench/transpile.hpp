#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qbench/circuit.hpp"
#include "qbench/device.hpp"

namespace qbench {

// Identifies the canonical base pipeline in reports.
inline constexpr const char* kBasePipelineVersion = "base-1";

// Maps logical qubits onto the device and inserts SWAPs along shortest
// coupling-graph paths (greedy, lowest-index tie-break). The initial layout is
// stored in the output metadata; when the logical-to-physical map changes,
// explicit measurements restore the logical classical register.
Circuit route_swaps(const Circuit& c, const DeviceModel& d);

// Rewrites every gate into the device's native set: SWAP and CZ/CX conversions,
// U2Q via a three-CX Cartan form, single-qubit runs merged and re-synthesized.
// A circuit that is already native is returned unchanged.
Circuit decompose_to_native(const Circuit& c, const DeviceModel& d);

// Removes adjacent gate/inverse pairs on identical targets.
Circuit cancel_inverses(const Circuit& c);

// Fuses adjacent rotations about the same axis on the same qubit and drops
// rotations by multiples of 2 pi.
Circuit merge_rotations(const Circuit& c);

enum class TranspileMode : std::uint8_t { Base, Peak };

std::string mode_name(TranspileMode m);
TranspileMode mode_from_name(const std::string& s);

struct TranspileConfig {
  TranspileMode mode = TranspileMode::Base;
  std::vector<std::string> passes;  // peak only; base must leave this empty or canonical
  std::uint64_t seed = 0;           // drives the peak equivalence probe

  void validate() const;
};

const std::vector<std::string>& base_pipeline();
const std::vector<std::string>& available_passes();

struct PassRecord {
  std::string name;
  std::size_t gates_in = 0;
  std::size_t gates_out = 0;
  std::size_t swaps_added = 0;
  std::size_t violations = 0;  // remaining device violations after the pass
  double wall_seconds = 0.0;
};

struct PassLog {
  std::string mode;
  std::string pipeline_version;
  std::vector<PassRecord> entries;
  std::string equivalence;  // "not-required", "passed" or "skipped: <reason>"
};

struct TranspileResult {
  Circuit circuit;
  PassLog log;
};

// Runs the configured pipeline. The output always has zero device violations;
// peak pipelines are additionally checked by a randomized equivalence probe.
TranspileResult run_pipeline(const Circuit& c, const DeviceModel& d, const TranspileConfig& cfg);

// Compares the logical action of two circuits on random product input states,
// honoring the candidate's input layout and its measurement relabeling. The
// probe does not run (ran == false, reason set) when either circuit simulates
// more than max_width qubits or leaves an active qubit unmeasured.
struct ProbeResult {
  bool ran = false;
  bool equivalent = false;
  double min_fidelity = 1.0;
  std::string reason;
};
ProbeResult probe_equivalence(const Circuit& reference, const Circuit& candidate, std::uint64_t seed,
                              int trials = 3, int max_width = 12);

}  // namespace qbench
