#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qbench/linalg.hpp"

namespace qbench {

enum class GateKind : std::uint8_t {
  H,
  X,
  Y,
  Z,
  S,
  Sdg,
  T,
  Tdg,
  Rx,
  Ry,
  Rz,
  CX,
  CZ,
  SWAP,
  U2Q,
  PauliLayer,
  Measure,
  Barrier,
};

inline constexpr GateKind kAllGateKinds[] = {
    GateKind::H,    GateKind::X,   GateKind::Y,         GateKind::Z,       GateKind::S,
    GateKind::Sdg,  GateKind::T,   GateKind::Tdg,       GateKind::Rx,      GateKind::Ry,
    GateKind::Rz,   GateKind::CX,  GateKind::CZ,        GateKind::SWAP,    GateKind::U2Q,
    GateKind::PauliLayer, GateKind::Measure, GateKind::Barrier,
};

std::string_view gate_name(GateKind kind);
std::optional<GateKind> gate_kind_from_name(std::string_view name);

// Number of targets a kind requires; nullopt for variadic kinds (PauliLayer, Barrier).
std::optional<int> gate_arity(GateKind kind);

bool is_parameterized(GateKind kind);
bool is_single_qubit_unitary(GateKind kind);
bool is_two_qubit_unitary(GateKind kind);

// One operation of a circuit. Value type; the U2Q payload is immutable and shared.
struct Gate {
  GateKind kind = GateKind::Barrier;
  std::vector<int> targets;
  double angle = 0.0;                    // Rx, Ry, Rz
  int cbit = -1;                         // Measure: classical bit written
  std::shared_ptr<const Mat4> unitary;   // U2Q, basis |t0 t1> with targets[0] the high bit
  std::string paulis;                    // PauliLayer: one of IXYZ per target

  // Throws PreconditionError when arity, angle, payload or unitarity constraints fail.
  void validate() const;

  bool is_unitary() const { return kind != GateKind::Measure && kind != GateKind::Barrier; }

  friend bool operator==(const Gate& a, const Gate& b);
};

namespace gates {
Gate h(int q);
Gate x(int q);
Gate y(int q);
Gate z(int q);
Gate s(int q);
Gate sdg(int q);
Gate t(int q);
Gate tdg(int q);
Gate rx(int q, double angle);
Gate ry(int q, double angle);
Gate rz(int q, double angle);
Gate cx(int control, int target);
Gate cz(int a, int b);
Gate swap(int a, int b);
Gate u2q(int a, int b, const Mat4& u);
Gate pauli_layer(std::vector<int> targets, std::string letters);
Gate measure(int q, int cbit);
Gate barrier(std::vector<int> targets);
Gate single(GateKind kind, int q, double angle = 0.0);
}  // namespace gates

// 2x2 matrix of a single-qubit unitary gate.
Mat2 single_qubit_matrix(GateKind kind, double angle = 0.0);
Mat2 pauli_matrix(char letter);

// 4x4 matrix in the |targets[0] targets[1]> basis.
Mat4 two_qubit_matrix(const Gate& g);

// Inverse gate; throws PreconditionError for Measure.
Gate inverse(const Gate& g);

// Clifford membership by kind, with Rx/Ry/Rz accepted at multiples of pi/2.
bool is_clifford(const Gate& g);

// Quarter turns k in {0,1,2,3} when angle == k*pi/2 (mod 2pi) within 1e-9.
std::optional<int> quarter_turns(double angle);

}  // namespace qbench
