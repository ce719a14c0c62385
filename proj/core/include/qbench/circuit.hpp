#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "qbench/gate.hpp"

namespace qbench {

struct CircuitMetadata {
  std::string name;
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
  bool has_seed = false;
  // Measurements may precede other operations on the same qubit.
  bool mid_circuit_measure = false;
  // Physical qubit holding logical qubit i at the start; empty means identity.
  std::vector<int> input_layout;
};

// Layered gate-level circuit. Layers are ordered in time; within a layer no
// qubit is touched twice. Unless flagged, measurements live in a trailing
// measurement-only layer.
class Circuit {
 public:
  Circuit() = default;
  explicit Circuit(int n_qubits, int n_clbits = -1);

  int n_qubits() const { return n_qubits_; }
  int n_clbits() const { return n_clbits_; }
  const std::vector<std::vector<Gate>>& layers() const { return layers_; }
  std::size_t depth() const { return layers_.size(); }

  CircuitMetadata& metadata() { return meta_; }
  const CircuitMetadata& metadata() const { return meta_; }

  // Places the gate in the earliest layer after every layer touching its targets.
  // Measurements are collected into the trailing measurement layer.
  void append(const Gate& g);
  void append(const std::vector<Gate>& gs);

  // Appends a complete layer verbatim (after validation).
  void add_layer(std::vector<Gate> layer);

  // Appends every gate of other (same width) in order.
  void extend(const Circuit& other);

  std::size_t gate_count() const;  // excluding barriers
  std::size_t count(GateKind kind) const;
  bool has_measurements() const;

  void for_each_gate(const std::function<void(const Gate&)>& fn) const;
  std::vector<Gate> flatten() const;

  // Throws PreconditionError on any invariant violation.
  void validate() const;

  // qubit -> cbit map of the measured qubits; identity on all qubits when the
  // circuit carries no Measure gates.
  std::vector<std::pair<int, int>> measurement_map() const;

  friend bool operator==(const Circuit& a, const Circuit& b) {
    return a.n_qubits_ == b.n_qubits_ && a.n_clbits_ == b.n_clbits_ && a.layers_ == b.layers_ &&
           a.meta_.input_layout == b.meta_.input_layout;
  }

 private:
  void check_targets(const Gate& g) const;
  int final_measure_layer() const;

  int n_qubits_ = 0;
  int n_clbits_ = 0;
  std::vector<std::vector<Gate>> layers_;
  CircuitMetadata meta_;
};

struct CircuitStats {
  int width = 0;
  int depth = 0;
  double gate_density = 0.0;
  double measurement_density = 0.0;
  std::size_t gate_count = 0;
  std::size_t two_qubit_count = 0;
  std::size_t measure_count = 0;
};

// Gates are every non-barrier operation; densities are 0 for an empty circuit.
CircuitStats circuit_stats(const Circuit& c);

// Layer order reversed and each gate inverted. Throws on Measure.
Circuit inverse_circuit(const Circuit& c);

}  // namespace qbench
