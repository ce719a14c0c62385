#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "qbench/circuit.hpp"
#include "qbench/gate.hpp"

namespace qbench {

// Periodic calibration drift: the effective error rate of shot i is
// clamp(base + cycle[i mod period] + Z_i, 0, 1) with Z_i ~ N(0, noise_std^2)
// drawn from a counter-based stream, so rate_at(i) is reproducible in isolation.
struct DriftSchedule {
  std::vector<double> cycle;  // additive offsets C_0..C_{T-1}
  double noise_std = 0.0;
  std::uint64_t seed = 0;

  std::size_t period() const { return cycle.size(); }
  void validate() const;
};

double drift_rate_at(const DriftSchedule& schedule, double base_rate, std::uint64_t shot_index);

struct Coupling {
  int a = 0;
  int b = 0;
  double strength = 1.0;  // normalized to [0, 1]
};

// Simulated processor descriptor.
struct DeviceModel {
  std::string name = "device";
  int n_qubits = 0;
  std::vector<bool> working;
  std::vector<Coupling> edges;
  std::set<GateKind> native_gates;
  std::map<GateKind, double> gate_error;                 // depolarizing probability per kind
  std::map<std::pair<int, int>, double> edge_error;      // 2q override, key (min, max)
  std::map<GateKind, double> gate_duration;              // seconds
  std::vector<double> t1;
  std::vector<double> t2;
  std::vector<double> readout_error;                     // bit-flip probability per qubit
  std::optional<DriftSchedule> drift;

  // Throws PreconditionError listing the first violated invariant.
  void validate() const;

  bool is_working(int q) const { return q >= 0 && q < n_qubits && working[q]; }

  // Working-to-working couplings with positive strength.
  bool coupled(int a, int b) const;
  std::vector<std::vector<int>> adjacency() const;

  // Largest connected component of working qubits, sorted ascending.
  std::vector<int> largest_component() const;

  std::size_t working_count() const;
};

namespace devices {
// Fully specified noiseless devices with every qubit working.
DeviceModel line(int n, std::set<GateKind> natives = {});
DeviceModel all_to_all(int n, std::set<GateKind> natives = {});
DeviceModel grid(int rows, int cols, std::set<GateKind> natives = {});

// Rz, Rx, Ry, CX plus the Clifford alphabet; the default native set.
std::set<GateKind> default_natives();
}  // namespace devices

struct Violation {
  enum class Type { GateSet, Connectivity, DeadQubit, OutOfRange };
  Type type;
  std::size_t layer = 0;
  std::size_t index = 0;
  std::string message;
};

std::string violation_type_name(Violation::Type t);

// Empty iff every gate is native, targets working qubits in range, and every
// two-qubit gate acts on a coupled working pair. Measure and Barrier are always legal.
std::vector<Violation> validate_against_device(const Circuit& c, const DeviceModel& d);

}  // namespace qbench
