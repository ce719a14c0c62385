#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qbench/circuit.hpp"
#include "qbench/distributions.hpp"
#include "qbench/noise.hpp"
#include "qbench/pauli.hpp"
#include "qbench/rng.hpp"

namespace qbench {

inline constexpr int kStabilizerCap = 1000;

// Outcome of a measurement as an affine function over GF(2) of the random
// bits introduced by earlier non-deterministic measurements: the value is
// constant XOR parity(mask & vars).
struct AffineBit {
  bool constant = false;
  std::vector<std::uint64_t> mask;

  bool deterministic() const;
  bool evaluate(const std::vector<std::uint64_t>& vars) const;
};

// Aaronson-Gottesman tableau: rows 0..n-1 are destabilizers, n..2n-1
// stabilizers. Phases are stored as affine functions so one measurement pass
// describes every possible outcome.
class StabilizerTableau {
 public:
  explicit StabilizerTableau(int n_qubits);

  int n_qubits() const { return n_; }
  int random_bits() const { return n_vars_; }

  void h(int q);
  void s(int q);
  void x(int q);
  void y(int q);
  void z(int q);
  void cx(int control, int target);
  void cz(int a, int b);
  void swap(int a, int b);

  // Clifford gate; throws UnsupportedError for anything else.
  void apply(const Gate& g);

  AffineBit measure(int q);

  // Stabilizer generator i (0..n-1) with its sign; requires no random bits yet.
  PauliString stabilizer(int i) const;

  // Destabilizer/stabilizer rows satisfy the symplectic commutation relations.
  bool is_symplectic() const;

 private:
  bool xbit(int row, int q) const { return (x_[idx(row, q)] >> (q & 63)) & 1U; }
  bool zbit(int row, int q) const { return (z_[idx(row, q)] >> (q & 63)) & 1U; }
  std::size_t idx(int row, int q) const {
    return static_cast<std::size_t>(row) * words_ + static_cast<std::size_t>(q >> 6);
  }
  void flip_phase_const(int row) { r_[static_cast<std::size_t>(row) * pwords_] ^= 1U; }
  void rowsum(int h, int i);
  void rowcopy(int dst, int src);

  int n_;
  std::size_t words_;
  std::size_t pwords_;
  int n_vars_ = 0;
  std::vector<std::uint64_t> x_, z_, r_;  // 2n+1 rows; the last row is scratch
};

// Samples a Clifford circuit. Gate and readout noise follow the same channels
// as the statevector sampler and are tracked as a Pauli frame.
SampleSet stabilizer_sample(const Circuit& c, std::uint64_t shots, Rng& rng,
                            int cap = kStabilizerCap);
SampleSet stabilizer_sample(const Circuit& c, std::uint64_t shots, const NoiseModel& noise,
                            Rng& rng, int cap = kStabilizerCap, std::uint64_t first_shot = 0);

// Noiseless outcome of a Clifford circuit whose measurement result is
// deterministic; throws PreconditionError when it is not.
std::string deterministic_outcome(const Circuit& c, int cap = kStabilizerCap);

bool is_clifford_circuit(const Circuit& c);

}  // namespace qbench
