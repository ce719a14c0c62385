#pragma once

#include <string>
#include <string_view>

namespace qbench {

// Signed Pauli string. letters[i] acts on qubit i; text form is "+XIZ" / "-ZZ"
// with qubit 0 leftmost.
class PauliString {
 public:
  PauliString() = default;
  explicit PauliString(int n_qubits) : letters_(static_cast<std::size_t>(n_qubits), 'I') {}
  PauliString(std::string letters, int sign);

  static PauliString parse(std::string_view text);

  int n_qubits() const { return static_cast<int>(letters_.size()); }
  int sign() const { return sign_; }
  char letter(int q) const { return letters_[static_cast<std::size_t>(q)]; }
  const std::string& letters() const { return letters_; }

  void set(int q, char letter);
  void set_sign(int sign);

  // Number of non-identity letters.
  int weight() const;

  std::string str() const;

  friend bool operator==(const PauliString& a, const PauliString& b) = default;

 private:
  std::string letters_;
  int sign_ = 1;
};

}  // namespace qbench
