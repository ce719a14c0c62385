#pragma once

#include <string>
#include <string_view>

#include "qbench/circuit.hpp"

namespace qbench {

// OpenQASM 2.0 subset: one qreg, at most one creg of the same size, the gates
// h x y z s sdg t tdg rx ry rz cx cz swap, measure and barrier. Angles accept
// arithmetic over numbers and pi. Gates are layered as soon as possible in
// program order.
//
// Throws ParseError (with line and column) on syntax errors, unsupported gate
// names, register size mismatches and out-of-range indices.
Circuit parse_qasm(std::string_view text);

// Deterministic OpenQASM text. PauliLayer expands to x/y/z gates; U2Q throws
// UnsupportedError.
std::string emit_qasm(const Circuit& c);

}  // namespace qbench
