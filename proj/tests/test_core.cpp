#include <gtest/gtest.h>

#include <cmath>
#include <set>
#include <string>

#include "qbench/circuit.hpp"
#include "qbench/device.hpp"
#include "qbench/error.hpp"
#include "qbench/gate.hpp"
#include "qbench/pauli.hpp"
#include "qbench/qasm.hpp"
#include "qbench/rng.hpp"
#include "qbench/serialize.hpp"
#include "qbench/statevector.hpp"
#include "test_util.hpp"

namespace qbench {
namespace {

using testing::dense_unitary;
using testing::random_program;

// ---- gates ----

TEST(Gate, MatricesMatchTextbookForms) {
  const double r = 1.0 / std::sqrt(2.0);
  Mat2 h;
  h << r, r, r, -r;
  EXPECT_LT((single_qubit_matrix(GateKind::H) - h).cwiseAbs().maxCoeff(), 1e-15);
  Mat2 s;
  s << 1, 0, 0, cplx(0, 1);
  EXPECT_LT((single_qubit_matrix(GateKind::S) - s).cwiseAbs().maxCoeff(), 1e-15);
  Mat2 rz = single_qubit_matrix(GateKind::Rz, kPi / 2);
  EXPECT_TRUE(equal_up_to_phase(rz, s, 1e-12));

  Mat4 cx = Mat4::Zero();
  cx(0, 0) = cx(1, 1) = cx(2, 3) = cx(3, 2) = 1.0;
  EXPECT_LT((two_qubit_matrix(gates::cx(0, 1)) - cx).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Gate, EveryKindIsUnitaryAndInverts) {
  for (GateKind k : kAllGateKinds) {
    if (!is_single_qubit_unitary(k)) continue;
    const Gate g = gates::single(k, 0, 0.37);
    const Mat2 u = single_qubit_matrix(g.kind, g.angle);
    EXPECT_LT(unitarity_error(u), 1e-12) << gate_name(k);
    const Gate inv = inverse(g);
    const Mat2 prod = single_qubit_matrix(inv.kind, inv.angle) * u;
    EXPECT_TRUE(equal_up_to_phase(prod, Mat2::Identity(), 1e-12)) << gate_name(k);
  }
}

TEST(Gate, ValidationRejectsBadShapes) {
  Gate g = gates::cx(0, 1);
  g.targets = {0};
  EXPECT_THROW(g.validate(), PreconditionError);
  EXPECT_THROW(gates::rz(0, std::nan("")).validate(), PreconditionError);
  Mat4 bad = Mat4::Identity();
  bad(0, 0) = 2.0;
  EXPECT_THROW(gates::u2q(0, 1, bad).validate(), PreconditionError);
  EXPECT_NO_THROW(gates::u2q(0, 1, Mat4::Identity()).validate());
  EXPECT_THROW(gates::cx(1, 1).validate(), PreconditionError);
}

TEST(Gate, NameLookupRoundTrips) {
  for (GateKind k : kAllGateKinds) {
    auto back = gate_kind_from_name(gate_name(k));
    ASSERT_TRUE(back.has_value());
    EXPECT_EQ(*back, k);
  }
  EXPECT_FALSE(gate_kind_from_name("toffoli").has_value());
}

TEST(Gate, CliffordClassification) {
  EXPECT_TRUE(is_clifford(gates::h(0)));
  EXPECT_TRUE(is_clifford(gates::rz(0, kPi / 2)));
  EXPECT_TRUE(is_clifford(gates::rx(0, -kPi)));
  EXPECT_FALSE(is_clifford(gates::t(0)));
  EXPECT_FALSE(is_clifford(gates::rz(0, 0.1)));
  EXPECT_EQ(quarter_turns(3 * kPi / 2), 3);
  EXPECT_EQ(quarter_turns(-kPi / 2), 3);
  EXPECT_FALSE(quarter_turns(1.0).has_value());
}

// ---- circuits ----

TEST(Circuit, AppendLayersGreedily) {
  Circuit c(3);
  c.append(gates::h(0));
  c.append(gates::h(1));
  c.append(gates::cx(0, 1));
  c.append(gates::x(2));
  ASSERT_EQ(c.depth(), 2u);
  EXPECT_EQ(c.layers()[0].size(), 3u);
  EXPECT_EQ(c.layers()[1].size(), 1u);
  EXPECT_EQ(c.gate_count(), 4u);
  EXPECT_EQ(c.count(GateKind::H), 2u);
}

TEST(Circuit, RejectsInvalidLayers) {
  Circuit c(2);
  EXPECT_THROW(c.add_layer({gates::h(0), gates::x(0)}), PreconditionError);
  EXPECT_THROW(c.append(gates::h(2)), PreconditionError);
}

TEST(Circuit, MeasurementsCollectInFinalLayer) {
  Circuit c(2);
  c.append(gates::h(0));
  c.append(gates::measure(0, 0));
  c.append(gates::x(1));
  c.append(gates::measure(1, 1));
  EXPECT_TRUE(c.has_measurements());
  const auto& last = c.layers().back();
  for (const Gate& g : last) EXPECT_EQ(g.kind, GateKind::Measure);
  EXPECT_NO_THROW(c.validate());
  EXPECT_EQ(c.measurement_map().size(), 2u);
}

TEST(Circuit, ImplicitMeasurementMapIsIdentity) {
  Circuit c(3);
  c.append(gates::h(1));
  auto m = c.measurement_map();
  ASSERT_EQ(m.size(), 3u);
  for (int i = 0; i < 3; ++i) EXPECT_EQ(m[static_cast<std::size_t>(i)], std::make_pair(i, i));
}

TEST(CircuitStats, HandCountedExample) {
  Circuit c(2);
  c.add_layer({gates::h(0), gates::h(1)});
  c.add_layer({gates::cx(0, 1)});
  const CircuitStats s = circuit_stats(c);
  EXPECT_EQ(s.width, 2);
  EXPECT_EQ(s.depth, 2);
  EXPECT_DOUBLE_EQ(s.gate_density, 3.0 / 4.0);
  EXPECT_EQ(s.two_qubit_count, 1u);
  EXPECT_DOUBLE_EQ(s.measurement_density, 0.0);
}

TEST(CircuitStats, EmptyCircuitHasZeroDensities) {
  const CircuitStats s = circuit_stats(Circuit(4));
  EXPECT_EQ(s.width, 4);
  EXPECT_EQ(s.depth, 0);
  EXPECT_EQ(s.gate_density, 0.0);
  EXPECT_EQ(s.measurement_density, 0.0);
}

TEST(CircuitStats, DepthIsLayerCountAndDensitiesBounded) {
  Rng rng(11);
  for (int i = 0; i < 30; ++i) {
    Circuit c = random_program(1 + static_cast<int>(rng.below(6)), static_cast<int>(rng.below(40)), rng);
    if (rng.bernoulli(0.5)) {
      for (int q = 0; q < c.n_qubits(); ++q) c.append(gates::measure(q, q));
    }
    const CircuitStats s = circuit_stats(c);
    EXPECT_EQ(s.depth, static_cast<int>(c.depth()));
    EXPECT_EQ(s.width, c.n_qubits());
    EXPECT_GE(s.gate_density, 0.0);
    EXPECT_LE(s.gate_density, 1.0);
    EXPECT_GE(s.measurement_density, 0.0);
    EXPECT_LE(s.measurement_density, 1.0);
  }
}

TEST(InverseCircuit, SelfInverseAndAdjointGates) {
  Circuit h(1);
  h.append(gates::h(0));
  EXPECT_EQ(inverse_circuit(h), h);
  Circuit s(1);
  s.append(gates::s(0));
  Circuit sdg(1);
  sdg.append(gates::sdg(0));
  EXPECT_EQ(inverse_circuit(s), sdg);
}

TEST(InverseCircuit, ComposesToIdentityOnRandomCliffords) {
  Rng rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    Circuit c = random_program(4, 40, rng, true);
    Circuit both = c;
    both.extend(inverse_circuit(c));
    const StateVector sv = final_state(both);
    const auto& amps = sv.amplitudes();
    EXPECT_NEAR(std::abs(amps[0]), 1.0, 1e-10);
    for (std::size_t i = 1; i < amps.size(); ++i) EXPECT_LT(std::abs(amps[i]), 1e-10);
  }
}

TEST(InverseCircuit, IsAnInvolution) {
  Rng rng(6);
  for (int trial = 0; trial < 20; ++trial) {
    Circuit c = random_program(3, 25, rng);
    EXPECT_EQ(inverse_circuit(inverse_circuit(c)), c);
  }
}

TEST(InverseCircuit, RejectsMeasurement) {
  Circuit c(1);
  c.append(gates::measure(0, 0));
  EXPECT_THROW(inverse_circuit(c), PreconditionError);
}

// ---- Pauli strings ----

TEST(PauliString, ParseAndPrint) {
  PauliString p = PauliString::parse("-XIZ");
  EXPECT_EQ(p.n_qubits(), 3);
  EXPECT_EQ(p.sign(), -1);
  EXPECT_EQ(p.letter(0), 'X');
  EXPECT_EQ(p.letter(2), 'Z');
  EXPECT_EQ(p.weight(), 2);
  EXPECT_EQ(p.str(), "-XIZ");
  EXPECT_EQ(PauliString::parse("ZZ").str(), "+ZZ");
  EXPECT_THROW(PauliString::parse("XQ"), PreconditionError);
  EXPECT_EQ(PauliString(4).weight(), 0);
}

// ---- devices ----

TEST(Device, LineValidatesAndConnects) {
  DeviceModel d = devices::line(3);
  EXPECT_NO_THROW(d.validate());
  EXPECT_TRUE(d.coupled(0, 1));
  EXPECT_TRUE(d.coupled(1, 0));
  EXPECT_FALSE(d.coupled(0, 2));
  EXPECT_EQ(d.largest_component().size(), 3u);
}

TEST(Device, InvariantViolationsThrow) {
  DeviceModel d = devices::line(2);
  d.t1 = {1e-4, 1e-4};
  d.t2 = {3e-4, 1e-4};
  EXPECT_THROW(d.validate(), PreconditionError);
  d.t2 = {1e-4, 1e-4};
  d.readout_error = {0.1, 1.5};
  EXPECT_THROW(d.validate(), PreconditionError);
  d.readout_error = {};
  d.edges[0].strength = 2.0;
  EXPECT_THROW(d.validate(), PreconditionError);
}

TEST(ValidateAgainstDevice, ConformantCircuitHasNoViolations) {
  Circuit c(2);
  c.append(gates::cx(0, 1));
  EXPECT_TRUE(validate_against_device(c, devices::line(2)).empty());
}

TEST(ValidateAgainstDevice, ConnectivityViolation) {
  Circuit c(3);
  c.append(gates::cx(0, 2));
  auto v = validate_against_device(c, devices::line(3));
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v[0].type, Violation::Type::Connectivity);
}

TEST(ValidateAgainstDevice, GateSetViolation) {
  Circuit c(2);
  c.append(gates::rz(0, 0.3));
  auto v = validate_against_device(c, devices::line(2, {GateKind::CX, GateKind::H, GateKind::Rx}));
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v[0].type, Violation::Type::GateSet);
}

TEST(ValidateAgainstDevice, DeadQubitViolation) {
  DeviceModel d = devices::line(3);
  d.working[1] = false;
  Circuit c(3);
  c.append(gates::h(1));
  auto v = validate_against_device(c, d);
  ASSERT_FALSE(v.empty());
  EXPECT_EQ(v[0].type, Violation::Type::DeadQubit);
}

TEST(Device, JsonRoundTrip) {
  DeviceModel d = devices::grid(2, 3);
  d.name = "grid23";
  d.gate_error[GateKind::CX] = 0.01;
  d.edge_error[{0, 1}] = 0.02;
  d.gate_duration[GateKind::CX] = 3e-7;
  d.t1.assign(6, 1e-4);
  d.t2.assign(6, 8e-5);
  d.readout_error.assign(6, 0.02);
  d.working[5] = false;
  DriftSchedule drift;
  drift.cycle = {0.0, 0.01};
  drift.noise_std = 0.001;
  drift.seed = 9;
  d.drift = drift;
  const Json j = to_json(d);
  EXPECT_EQ(j.at("schema"), kDeviceSchema);
  const DeviceModel back = device_from_json(parse_json(canonical_json(j)));
  EXPECT_EQ(canonical_json(to_json(back)), canonical_json(j));
}

TEST(Device, JsonRejectsWrongSchema) {
  Json j = to_json(devices::line(2));
  j["schema"] = "devmodel/9";
  EXPECT_THROW(device_from_json(j), Error);
}

// ---- rng ----

TEST(Rng, IdenticalSeedAndStreamReproduce) {
  Rng a(42, 7), b(42, 7), c(42, 8);
  bool differs = false;
  for (int i = 0; i < 100; ++i) {
    const auto x = a.next();
    EXPECT_EQ(x, b.next());
    differs |= x != c.next();
  }
  EXPECT_TRUE(differs);
  Rng s1 = Rng(1).substream(3), s2 = Rng(1).substream(3);
  EXPECT_EQ(s1.seed(), s2.seed());
  EXPECT_EQ(s1.stream(), s2.stream());
  EXPECT_EQ(s1.next(), s2.next());
  EXPECT_EQ(Rng(s1.seed(), s1.stream()).next(), Rng(1).substream(3).next());
}

TEST(Rng, Fnv1aReferenceVectors) {
  EXPECT_EQ(fnv1a64(""), 0xcbf29ce484222325ULL);
  EXPECT_EQ(fnv1a64("a"), 0xaf63dc4c8601ec8cULL);
  EXPECT_EQ(fnv1a64("foobar"), 0x85944171f73967e8ULL);
}

TEST(Rng, UniformAndBelowStayInRange) {
  Rng r(3);
  double sum = 0.0;
  for (int i = 0; i < 20000; ++i) {
    const double u = r.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    sum += u;
    ASSERT_LT(r.below(7), 7u);
  }
  EXPECT_NEAR(sum / 20000, 0.5, 3 * std::sqrt(1.0 / 12 / 20000));
}

// ---- OpenQASM ----

TEST(Qasm, SingleGateProgram) {
  Circuit c = parse_qasm("qreg q[1]; h q[0];");
  EXPECT_EQ(c.n_qubits(), 1);
  ASSERT_EQ(c.depth(), 1u);
  ASSERT_EQ(c.layers()[0].size(), 1u);
  EXPECT_EQ(c.layers()[0][0], gates::h(0));
}

TEST(Qasm, FullProgramWithHeaderAndAngles) {
  const char* text = R"(OPENQASM 2.0;
include "qelib1.inc";
qreg q[3];
creg c[3];
h q[0];
rz(pi/4) q[1];
rx(-2*pi/3) q[2];
cx q[0], q[1];
barrier q[0], q[1], q[2];
measure q[0] -> c[0];
measure q[1] -> c[1];
)";
  Circuit c = parse_qasm(text);
  EXPECT_EQ(c.n_qubits(), 3);
  EXPECT_EQ(c.count(GateKind::Measure), 2u);
  bool found = false;
  c.for_each_gate([&](const Gate& g) {
    if (g.kind == GateKind::Rx) {
      found = true;
      EXPECT_NEAR(g.angle, -2 * kPi / 3, 1e-15);
    }
  });
  EXPECT_TRUE(found);
}

TEST(Qasm, OutOfRangeIndexIsAnError) {
  EXPECT_THROW(parse_qasm("qreg q[4]; cx q[0], q[5];"), ParseError);
}

TEST(Qasm, ErrorsCarryLineAndColumn) {
  try {
    parse_qasm("qreg q[2];\nh q[0];\nfoo q[1];\n");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3);
    EXPECT_EQ(e.column(), 1);
    EXPECT_NE(std::string(e.what()).find("foo"), std::string::npos);
  }
  EXPECT_THROW(parse_qasm("qreg q[2];\nh q[0]"), ParseError);
  EXPECT_THROW(parse_qasm("qreg q[2]; creg c[3];"), ParseError);
}

TEST(Qasm, EmitSingleGate) {
  Circuit c(1);
  c.append(gates::h(0));
  const std::string text = emit_qasm(c);
  std::size_t count = 0;
  for (std::size_t pos = text.find("h q[0];"); pos != std::string::npos; pos = text.find("h q[0];", pos + 1)) ++count;
  EXPECT_EQ(count, 1u);
}

TEST(Qasm, EmitEmptyCircuitIsHeaderOnly) {
  const std::string text = emit_qasm(Circuit(2));
  const Circuit back = parse_qasm(text);
  EXPECT_EQ(back.n_qubits(), 2);
  EXPECT_EQ(back.gate_count(), 0u);
  EXPECT_EQ(text.find("h "), std::string::npos);
}

TEST(Qasm, EmitRejectsU2Q) {
  Circuit c(2);
  c.append(gates::u2q(0, 1, Mat4::Identity()));
  EXPECT_THROW(emit_qasm(c), UnsupportedError);
}

TEST(Qasm, EmitIsDeterministic) {
  Rng rng(8);
  Circuit c = random_program(4, 30, rng);
  EXPECT_EQ(emit_qasm(c), emit_qasm(c));
}

// parse . emit . parse is a fixpoint over a generated corpus.
TEST(Qasm, RoundTripFixpointOverRandomPrograms) {
  Rng rng(2024);
  for (int i = 0; i < 150; ++i) {
    const int n = 1 + static_cast<int>(rng.below(6));
    Circuit c = random_program(n, static_cast<int>(rng.below(50)), rng);
    if (rng.bernoulli(0.5)) {
      for (int q = 0; q < n; ++q) c.append(gates::measure(q, q));
    }
    const Circuit parsed = parse_qasm(emit_qasm(c));
    const Circuit reparsed = parse_qasm(emit_qasm(parsed));
    EXPECT_EQ(parsed, reparsed) << "program " << i;
    EXPECT_EQ(parsed, c) << "program " << i;
  }
}

TEST(Qasm, ParsedCircuitMatchesDenseOracle) {
  Rng rng(99);
  for (int i = 0; i < 10; ++i) {
    Circuit c = random_program(3, 20, rng);
    const MatX a = dense_unitary(c);
    const MatX b = dense_unitary(parse_qasm(emit_qasm(c)));
    EXPECT_LT((a - b).cwiseAbs().maxCoeff(), 1e-12);
  }
}

// ---- circuit JSON ----

TEST(CircuitJson, RoundTripsEveryKind) {
  Rng rng(4);
  Circuit c(3);
  c.metadata().name = "mix";
  c.metadata().seed = 17;
  c.metadata().stream = 2;
  c.metadata().has_seed = true;
  c.append(gates::h(0));
  c.append(gates::rz(1, 0.25));
  c.append(gates::u2q(1, 2, Mat4::Identity()));
  c.append(gates::pauli_layer({0, 2}, "XZ"));
  c.append(gates::barrier({0, 1, 2}));
  c.append(gates::measure(0, 0));
  const Json j = to_json(c);
  EXPECT_EQ(j.at("schema"), kCircuitSchema);
  const Circuit back = circuit_from_json(parse_json(canonical_json(j)));
  EXPECT_EQ(back, c);
  EXPECT_EQ(back.metadata().seed, 17u);
  EXPECT_EQ(canonical_json(to_json(back)), canonical_json(j));
}

TEST(CanonicalJson, StableUnderReparse) {
  Json j = {{"b", 1.0 / 3.0}, {"a", {1, 2, 3}}, {"c", {{"z", -0.0}, {"y", nullptr}}}};
  const std::string once = canonical_json(j);
  EXPECT_EQ(canonical_json(parse_json(once)), once);
  EXPECT_LT(once.find("\"a\""), once.find("\"b\""));
}

TEST(CanonicalJson, ParseErrorsHaveLocation) {
  try {
    parse_json("{\n  \"a\": 1,\n  oops\n}");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3);
  }
}

}  // namespace
}  // namespace qbench
