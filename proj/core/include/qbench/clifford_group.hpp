#pragma once

#include <cstddef>
#include <string>
#include <unordered_map>
#include <vector>

#include "qbench/circuit.hpp"
#include "qbench/linalg.hpp"

namespace qbench {

// Enumerated one- or two-qubit Clifford group. Each element carries the
// shortest word over the generators {H, S} (one qubit) or {H0, H1, S0, S1, CX01}
// (two qubits) as its canonical gate sequence.
class CliffordGroup {
 public:
  static const CliffordGroup& one_qubit();  // 24 elements
  static const CliffordGroup& two_qubit();  // 11520 elements

  int n_qubits() const { return n_; }
  std::size_t size() const { return elements_.size(); }

  // Gates on local qubits 0..n-1.
  const std::vector<Gate>& sequence(std::size_t index) const { return elements_[index].gates; }
  const MatX& matrix(std::size_t index) const { return elements_[index].matrix; }

  // Index of the element equal to u up to global phase; throws if u is not in the group.
  std::size_t index_of(const MatX& u) const;
  std::size_t inverse_index(std::size_t index) const;
  std::size_t compose(std::size_t first, std::size_t then) const;

  // Canonical gates relabeled onto the given device qubits.
  std::vector<Gate> instantiate(std::size_t index, const std::vector<int>& qubits) const;

 private:
  struct Element {
    MatX matrix;
    std::vector<Gate> gates;
  };

  explicit CliffordGroup(int n);
  static std::string key(const MatX& u);

  int n_;
  std::vector<Element> elements_;
  std::unordered_map<std::string, std::size_t> lookup_;
};

// Unitary of a gate sequence on local qubits 0..n-1 (qubit 0 is the high tensor factor).
MatX sequence_unitary(const std::vector<Gate>& gates, int n);

}  // namespace qbench
