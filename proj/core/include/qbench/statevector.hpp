#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "qbench/circuit.hpp"
#include "qbench/distributions.hpp"
#include "qbench/linalg.hpp"
#include "qbench/noise.hpp"
#include "qbench/rng.hpp"

namespace qbench {

inline constexpr int kDefaultQubitCap = 24;

// Dense state over n qubits; amplitude index bit k is qubit k.
class StateVector {
 public:
  explicit StateVector(int n_qubits);

  int n_qubits() const { return n_; }
  const std::vector<cplx>& amplitudes() const { return amps_; }
  std::vector<cplx>& amplitudes() { return amps_; }

  void apply_1q(const Mat2& u, int q);
  // u in the |q0 q1> basis with q0 the high bit.
  void apply_2q(const Mat4& u, int q0, int q1);
  void apply_pauli(char letter, int q);
  void apply_cx(int control, int target);
  void apply_cz(int a, int b);
  void apply_swap(int a, int b);

  // Applies a unitary gate; map[circuit qubit] gives the state qubit (empty
  // map means identity). Barriers are ignored; Measure throws.
  void apply(const Gate& g, const std::vector<int>& map = {});

  double norm_squared() const;
  std::vector<double> probabilities() const;

 private:
  int n_;
  std::vector<cplx> amps_;
};

// State after every unitary gate of c on all n_qubits (measurements ignored).
StateVector final_state(const Circuit& c, int cap = kDefaultQubitCap);

// Simulator bound to one circuit. Only qubits acted on by unitary gates are
// simulated, so the cap applies to that count; measured qubits that are never
// touched read 0. The ideal state is computed once and reused across calls.
class Simulator {
 public:
  explicit Simulator(const Circuit& c, int cap = kDefaultQubitCap);
  ~Simulator();
  Simulator(Simulator&&) noexcept;
  Simulator& operator=(Simulator&&) noexcept;

  int n_clbits() const;
  int active_qubits() const;

  // Exact distribution over the classical register.
  ProbDist ideal() const;

  // Shot index i (offset by first_shot) selects the drift offset of that shot.
  SampleSet sample(std::uint64_t shots, const NoiseModel& noise, Rng& rng,
                   std::uint64_t first_shot = 0) const;
  SampleSet sample(std::uint64_t shots, Rng& rng) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

ProbDist ideal_distribution(const Circuit& c, int cap = kDefaultQubitCap);
SampleSet sample_counts(const Circuit& c, std::uint64_t shots, const NoiseModel& noise, Rng& rng,
                        int cap = kDefaultQubitCap);
SampleSet sample_counts(const Circuit& c, std::uint64_t shots, Rng& rng, int cap = kDefaultQubitCap);

// Independent draws from an explicit distribution.
SampleSet sample_distribution(const ProbDist& p, std::uint64_t shots, Rng& rng);

}  // namespace qbench
