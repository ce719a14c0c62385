#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "qbench/device.hpp"
#include "qbench/gate.hpp"
#include "qbench/rng.hpp"

namespace qbench {

// Stochastic Pauli noise. A gate with depolarizing probability p is followed,
// with probability p, by a uniformly chosen Pauli on its targets (identity
// included, 4 choices for one qubit and 16 for two), which replaces the state
// of those qubits by the maximally mixed state. Barriers on one or two qubits carry
// the same channel; wider barriers and Pauli layers act per qubit. Readout
// flips each measured bit independently.
struct NoiseModel {
  std::map<GateKind, double> gate_error;
  std::map<std::pair<int, int>, double> edge_error;
  std::vector<double> readout_error;  // per physical qubit; empty means none
  std::optional<DriftSchedule> drift;

  static NoiseModel from_device(const DeviceModel& d);

  // Every gate probability (not readout) multiplied by factor, clamped to [0, 1].
  NoiseModel scaled(double factor) const;

  double gate_rate(const Gate& g) const;
  double readout_rate(int qubit) const;

  bool has_gate_noise() const;
  bool has_readout_noise() const;
  bool is_noiseless() const { return !has_gate_noise() && !has_readout_noise(); }

  void validate() const;
};

struct PauliFault {
  std::uint32_t op;  // index into the gate list the faults were drawn for
  int qubit;
  char letter;       // X, Y or Z
};

// Draws the Pauli faults of one shot for a fixed gate list (measurements
// excluded). Faults come out ordered by op.
class FaultSampler {
 public:
  FaultSampler(const std::vector<Gate>& ops, const NoiseModel& noise);

  // False when no gate can fail, so draw() would always be empty.
  bool active() const { return active_; }

  void draw(std::uint64_t shot_index, Rng& rng, std::vector<PauliFault>& out);

 private:
  enum class Channel : std::uint8_t { One, Two, PerQubit };
  struct Site {
    std::uint32_t op;
    Channel channel;
    std::vector<int> targets;
    double base;
    bool drifts;
  };

  std::vector<Site> sites_;
  std::optional<DriftSchedule> drift_;
  bool active_ = false;
};

}  // namespace qbench
