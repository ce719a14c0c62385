#include "qbench/pauli.hpp"

#include <algorithm>

#include "qbench/error.hpp"

namespace qbench {

namespace {
void check_letter(char c) {
  if (c != 'I' && c != 'X' && c != 'Y' && c != 'Z')
    throw PreconditionError(std::string("invalid Pauli letter '") + c + "'");
}
}  // namespace

PauliString::PauliString(std::string letters, int sign) : letters_(std::move(letters)) {
  for (char c : letters_) check_letter(c);
  set_sign(sign);
}

PauliString PauliString::parse(std::string_view text) {
  int sign = 1;
  if (!text.empty() && (text.front() == '+' || text.front() == '-')) {
    sign = text.front() == '-' ? -1 : 1;
    text.remove_prefix(1);
  }
  std::string letters(text);
  std::replace(letters.begin(), letters.end(), '_', 'I');
  return PauliString(std::move(letters), sign);
}

void PauliString::set(int q, char letter) {
  check_letter(letter);
  letters_.at(static_cast<std::size_t>(q)) = letter;
}

void PauliString::set_sign(int sign) {
  if (sign != 1 && sign != -1) throw PreconditionError("Pauli sign must be +1 or -1");
  sign_ = sign;
}

int PauliString::weight() const {
  return static_cast<int>(std::count_if(letters_.begin(), letters_.end(),
                                        [](char c) { return c != 'I'; }));
}

std::string PauliString::str() const { return (sign_ < 0 ? "-" : "+") + letters_; }

}  // namespace qbench
