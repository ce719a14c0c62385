#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qbench/circuit.hpp"
#include "qbench/linalg.hpp"
#include "qbench/pauli.hpp"
#include "qbench/rng.hpp"

namespace qbench {

// Haar-random unitary via QR of a complex Ginibre matrix with the diagonal
// phases of R folded back into Q. dim must be 2, 4, 8 or 16.
MatX haar_unitary(int dim, Rng& rng);

// Square model circuit of the quantum-volume protocol: each layer is a
// uniformly random pairing of the qubits with an independent Haar two-qubit
// unitary per pair. With odd width one qubit idles in each layer.
Circuit qv_model_circuit(int width, Rng& rng);

// Same layer construction with an independent depth.
Circuit qv_layers_circuit(int width, int depth, Rng& rng);

// Random layered circuit over {H, S, Sdg, X, Y, Z, CX, CZ, SWAP}; every qubit
// receives exactly one gate per layer.
Circuit random_clifford_circuit(int n, int depth, Rng& rng);

// Uniformly random element of the 1- or 2-qubit Clifford group as its canonical
// gate sequence on qubits 0..n-1.
Circuit sample_clifford_element(int n, Rng& rng);
std::size_t sample_clifford_index(int n, Rng& rng);

// H on qubit 0 followed by a CX ladder; measurement-free.
Circuit ghz_circuit(int n);

enum class PrepBasis : std::uint8_t { Z, X, Y };

struct MirrorSpec {
  Circuit base;
  Circuit full;                   // prep . C . Q . C^-1 . unprep . measure
  std::vector<PrepBasis> prep_basis;
  std::vector<std::uint8_t> prep_flip;  // X applied before the basis change
  PauliString central;            // Q
  std::string expected;           // bitstring, cbit n-1 first
};

// Mirror circuit with a classically known single-bitstring outcome. The base
// must be Clifford and measurement-free.
MirrorSpec make_mirror_circuit(const Circuit& base, Rng& rng);

enum class VolumetricShape : std::uint8_t { Square, Shallow, Deep, AQ };

std::string shape_name(VolumetricShape s);
VolumetricShape shape_from_name(const std::string& name);
int volumetric_depth(VolumetricShape shape, int width);

struct VolumetricCircuit {
  int width = 0;
  int depth = 0;
  Circuit circuit;
};

// One circuit per width built from model-circuit layers. Depth is width
// (square), ceil(log2 width)+1 (shallow), 4*width (deep) or width^2 (aq).
std::vector<VolumetricCircuit> volumetric_family(VolumetricShape shape,
                                                 const std::vector<int>& widths, Rng& rng);

}  // namespace qbench
