#include <gtest/gtest.h>

#include <cmath>
#include <string>

#include "qbench/error.hpp"
#include "qbench/metrics.hpp"
#include "qbench/randgen.hpp"
#include "qbench/serialize.hpp"
#include "qbench/stabilizer.hpp"
#include "qbench/statevector.hpp"
#include "test_util.hpp"

namespace qbench {
namespace {

using testing::dense_probabilities;
using testing::random_program;
using testing::tvd;
using testing::tvd_sampling_bound;

Circuit bell() {
  Circuit c(2);
  c.append(gates::h(0));
  c.append(gates::cx(0, 1));
  return c;
}

std::vector<double> empirical(const SampleSet& s) { return s.empirical().probs(); }

// ---- ideal distributions ----

TEST(IdealDistribution, Hadamard) {
  Circuit c(1);
  c.append(gates::h(0));
  const ProbDist p = ideal_distribution(c);
  EXPECT_NEAR(p[0], 0.5, 1e-15);
  EXPECT_NEAR(p[1], 0.5, 1e-15);
}

TEST(IdealDistribution, BellState) {
  const ProbDist p = ideal_distribution(bell());
  EXPECT_NEAR(p[0], 0.5, 1e-15);
  EXPECT_NEAR(p[1], 0.0, 1e-15);
  EXPECT_NEAR(p[2], 0.0, 1e-15);
  EXPECT_NEAR(p[3], 0.5, 1e-15);
}

TEST(IdealDistribution, MatchesDenseMatrixOracle) {
  Rng rng(1);
  for (int trial = 0; trial < 20; ++trial) {
    const Circuit c = random_program(3, 30, rng);
    const auto want = dense_probabilities(c);
    const ProbDist got = ideal_distribution(c);
    for (std::size_t i = 0; i < want.size(); ++i) EXPECT_NEAR(got[i], want[i], 1e-10);
  }
}

TEST(IdealDistribution, HaarLayersMatchDenseMatrixOracle) {
  Rng rng(2);
  for (int width = 2; width <= 5; ++width) {
    const Circuit c = qv_model_circuit(width, rng);
    const auto want = dense_probabilities(c);
    const ProbDist got = ideal_distribution(c);
    for (std::size_t i = 0; i < want.size(); ++i) EXPECT_NEAR(got[i], want[i], 1e-10);
  }
}

TEST(IdealDistribution, MeasurementRelabelsClassicalBits) {
  Circuit c(2);
  c.append(gates::x(0));
  c.append(gates::measure(0, 1));
  c.append(gates::measure(1, 0));
  const ProbDist p = ideal_distribution(c);
  EXPECT_NEAR(p[bitstring_to_index("10")], 1.0, 1e-15);
}

TEST(IdealDistribution, CircuitTimesInverseIsPointMass) {
  Rng rng(3);
  for (int trial = 0; trial < 10; ++trial) {
    Circuit c = random_program(4, 40, rng);
    c.extend(inverse_circuit(c));
    EXPECT_NEAR(ideal_distribution(c)[0], 1.0, 1e-10);
  }
}

TEST(IdealDistribution, CapExceededNamesTheCap) {
  Circuit c(6);
  for (int q = 0; q < 6; ++q) c.append(gates::h(q));
  try {
    ideal_distribution(c, 4);
    FAIL() << "expected CapacityError";
  } catch (const CapacityError& e) {
    EXPECT_EQ(e.cap(), 4);
    EXPECT_NE(std::string(e.what()).find("not practical"), std::string::npos);
  }
}

TEST(StateVector, NormPreservedOverTenThousandGates) {
  Rng rng(4);
  const Circuit c = random_program(6, 10000, rng);
  EXPECT_NEAR(final_state(c).norm_squared(), 1.0, 1e-9);
}

// ---- sampling ----

TEST(SampleCounts, NoiselessBellIsCloseToIdeal) {
  Rng rng(5);
  const SampleSet s = sample_counts(bell(), 100000, rng);
  EXPECT_EQ(s.shots(), 100000u);
  EXPECT_LT(hellinger_distance(s.empirical(), ideal_distribution(bell())), 0.02);
  EXPECT_EQ(s.count("01"), 0u);
  EXPECT_EQ(s.count("10"), 0u);
}

TEST(SampleCounts, FullDepolarizationIsUniform) {
  Circuit c(1);
  c.append(gates::h(0));
  NoiseModel noise;
  noise.gate_error[GateKind::H] = 1.0;
  Rng rng(6);
  const std::uint64_t m = 20000;
  const SampleSet s = sample_counts(c, m, noise, rng);
  EXPECT_NEAR(static_cast<double>(s.count("0")) / m, 0.5, 3 * std::sqrt(0.25 / m));

  // |1> fully depolarized is uniform as well.
  Circuit x(1);
  x.append(gates::x(0));
  noise.gate_error[GateKind::X] = 1.0;
  const SampleSet sx = sample_counts(x, m, noise, rng);
  EXPECT_NEAR(static_cast<double>(sx.count("0")) / m, 0.5, 3 * std::sqrt(0.25 / m));
}

TEST(SampleCounts, FixedSeedIsDeterministic) {
  NoiseModel noise;
  noise.gate_error[GateKind::CX] = 0.1;
  noise.readout_error = {0.05, 0.02};
  Rng a(7), b(7);
  EXPECT_EQ(sample_counts(bell(), 5000, noise, a), sample_counts(bell(), 5000, noise, b));
}

TEST(SampleCounts, ZeroShotsIsAnError) {
  Rng rng(8);
  EXPECT_THROW(sample_counts(bell(), 0, rng), PreconditionError);
}

TEST(SampleCounts, ReadoutFlipRate) {
  Circuit c(1);
  c.append(gates::x(0));
  NoiseModel noise;
  noise.readout_error = {0.2};
  Rng rng(9);
  const std::uint64_t m = 20000;
  const SampleSet s = sample_counts(c, m, noise, rng);
  EXPECT_NEAR(static_cast<double>(s.count("0")) / m, 0.2, 3 * std::sqrt(0.16 / m));
}

// 16 equally likely Paulis: only {I,Z}x{I,Z} leave |00> on 00.
TEST(SampleCounts, TwoQubitChannelOnBasisState) {
  Circuit c(2);
  c.append(gates::cx(0, 1));
  NoiseModel noise;
  const double p = 0.4;
  noise.gate_error[GateKind::CX] = p;
  Rng rng(10);
  const std::uint64_t m = 40000;
  const SampleSet s = sample_counts(c, m, noise, rng);
  const double want = 1.0 - 0.75 * p;
  EXPECT_NEAR(static_cast<double>(s.count("00")) / m, want, 3 * std::sqrt(want * (1 - want) / m));
}

// Density-matrix evolution of one qubit under Z gates followed by the
// depolarizing channel (1 - 3p/4) rho + (p/4)(X rho X + Y rho Y + Z rho Z).
double density_matrix_z_expectation(double p, int k) {
  Mat2 rho = Mat2::Zero();
  rho(0, 0) = 1.0;
  const Mat2 x = pauli_matrix('X'), y = pauli_matrix('Y'), z = pauli_matrix('Z');
  for (int i = 0; i < k; ++i) {
    rho = z * rho * z.adjoint();
    rho = (1.0 - 0.75 * p) * rho + 0.25 * p * (x * rho * x + y * rho * y + z * rho * z);
  }
  return (rho(0, 0) - rho(1, 1)).real();
}

TEST(NoiseSanity, RepeatedDepolarizingMatchesDensityMatrixOracle) {
  for (const auto& [p, k] : {std::pair{0.05, 5}, std::pair{0.1, 10}, std::pair{0.02, 30}}) {
    Circuit c(1);
    for (int i = 0; i < k; ++i) c.add_layer({gates::z(0)});
    NoiseModel noise;
    noise.gate_error[GateKind::Z] = p;
    Rng rng(11);
    const std::uint64_t m = 40000;
    const SampleSet s = sample_counts(c, m, noise, rng);
    const double z_emp = (static_cast<double>(s.count("0")) - static_cast<double>(s.count("1"))) / m;
    const double z_oracle = density_matrix_z_expectation(p, k);
    EXPECT_NEAR(z_oracle, std::pow(1.0 - p, k), 1e-12);
    EXPECT_NEAR(z_emp, z_oracle, 3 * std::sqrt((1 - z_oracle * z_oracle) / m)) << "p=" << p << " k=" << k;
  }
}

TEST(NoiseModel, ScaledClampsToUnitInterval) {
  NoiseModel n;
  n.gate_error[GateKind::CX] = 0.3;
  n.readout_error = {0.1};
  const NoiseModel s = n.scaled(5.0);
  EXPECT_EQ(s.gate_error.at(GateKind::CX), 1.0);
  EXPECT_EQ(s.readout_error[0], 0.1);
  EXPECT_THROW(n.scaled(-1.0), PreconditionError);
}

TEST(NoiseModel, EdgeOverrideTakesPrecedence) {
  NoiseModel n;
  n.gate_error[GateKind::CX] = 0.01;
  n.edge_error[{1, 2}] = 0.2;
  EXPECT_EQ(n.gate_rate(gates::cx(2, 1)), 0.2);
  EXPECT_EQ(n.gate_rate(gates::cx(0, 1)), 0.01);
}

// ---- drift ----

TEST(Drift, ZeroScheduleKeepsBaseRate) {
  DriftSchedule s;
  s.cycle = {0.0};
  for (std::uint64_t i = 0; i < 10; ++i) EXPECT_EQ(drift_rate_at(s, 0.1, i), 0.1);
}

TEST(Drift, PeriodicOffsetsAlternate) {
  DriftSchedule s;
  s.cycle = {0.0, 0.5};
  for (std::uint64_t i = 0; i < 6; ++i) EXPECT_DOUBLE_EQ(drift_rate_at(s, 0.1, i), i % 2 ? 0.6 : 0.1);
}

TEST(Drift, RateIsClamped) {
  DriftSchedule s;
  s.cycle = {0.5};
  EXPECT_EQ(drift_rate_at(s, 0.9, 0), 1.0);
  s.cycle = {-0.5};
  EXPECT_EQ(drift_rate_at(s, 0.1, 3), 0.0);
}

TEST(Drift, NoiseTermIsReproduciblePerShot) {
  DriftSchedule s;
  s.cycle = {0.0};
  s.noise_std = 0.01;
  s.seed = 5;
  EXPECT_EQ(drift_rate_at(s, 0.5, 17), drift_rate_at(s, 0.5, 17));
  EXPECT_NE(drift_rate_at(s, 0.5, 17), drift_rate_at(s, 0.5, 18));
  double sum = 0.0, sq = 0.0;
  for (std::uint64_t i = 0; i < 10000; ++i) {
    const double d = drift_rate_at(s, 0.5, i) - 0.5;
    sum += d;
    sq += d * d;
  }
  EXPECT_NEAR(sum / 10000, 0.0, 3 * 0.01 / 100);
  EXPECT_NEAR(std::sqrt(sq / 10000), 0.01, 0.0005);
}

TEST(Drift, InvalidScheduleRejected) {
  DriftSchedule s;
  EXPECT_THROW(s.validate(), PreconditionError);
}

// Even shots are noiseless, odd shots fully depolarized: P(1) = 1/2 + 1/4.
TEST(Drift, SamplingFollowsTheSchedule) {
  Circuit c(1);
  c.append(gates::x(0));
  NoiseModel noise;
  DriftSchedule s;
  s.cycle = {0.0, 1.0};
  noise.drift = s;
  Rng rng(12);
  const std::uint64_t m = 20000;
  const SampleSet out = sample_counts(c, m, noise, rng);
  EXPECT_NEAR(static_cast<double>(out.count("1")) / m, 0.75, 3 * std::sqrt(0.75 * 0.25 / m));
}

// ---- stabilizer ----

TEST(Stabilizer, GhzOnlyProducesAllEqualStrings) {
  Circuit c = ghz_circuit(3);
  Rng rng(13);
  const SampleSet s = stabilizer_sample(c, 2000, rng);
  EXPECT_EQ(s.count("000") + s.count("111"), 2000u);
  EXPECT_NEAR(static_cast<double>(s.count("000")) / 2000, 0.5, 3 * std::sqrt(0.25 / 2000));
}

TEST(Stabilizer, RejectsNonClifford) {
  Circuit c(1);
  c.append(gates::t(0));
  Rng rng(14);
  EXPECT_THROW(stabilizer_sample(c, 10, rng), UnsupportedError);
  EXPECT_FALSE(is_clifford_circuit(c));
}

TEST(Stabilizer, SixQubitCircuitAgreesWithStatevector) {
  Rng rng(15);
  const Circuit c = random_clifford_circuit(6, 12, rng);
  Rng shots(16);
  const SampleSet s = stabilizer_sample(c, 100000, shots);
  EXPECT_LT(total_variation_distance(s.empirical(), ideal_distribution(c)), 0.02);
}

TEST(Stabilizer, FiftyRandomCircuitsMatchStatevectorDistributions) {
  Rng rng(17);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 1 + trial % 8;
    const Circuit c = random_clifford_circuit(n, 4 + trial % 10, rng);
    const auto ideal = ideal_distribution(c).probs();
    const std::uint64_t m = 20000;
    Rng a(100 + trial);
    const auto stab = empirical(stabilizer_sample(c, m, a));
    EXPECT_LT(tvd(stab, ideal), tvd_sampling_bound(ideal, m)) << "circuit " << trial;
  }
}

TEST(Stabilizer, NoisyChannelsMatchStatevectorSampler) {
  Rng rng(18);
  const Circuit c = random_clifford_circuit(4, 6, rng);
  NoiseModel noise;
  noise.gate_error[GateKind::CX] = 0.1;
  noise.gate_error[GateKind::CZ] = 0.1;
  noise.gate_error[GateKind::H] = 0.05;
  noise.readout_error = {0.02, 0.05, 0.0, 0.1};
  const std::uint64_t m = 40000;
  Rng a(19), b(20);
  const auto stab = empirical(stabilizer_sample(c, m, noise, a));
  const auto sv = empirical(sample_counts(c, m, noise, b));
  // Two independent empirical distributions: the bound doubles.
  EXPECT_LT(tvd(stab, sv), 2 * tvd_sampling_bound(sv, m));
}

TEST(Stabilizer, TableauStaysSymplecticAndReportsStabilizers) {
  StabilizerTableau t(3);
  t.h(0);
  t.cx(0, 1);
  t.cx(1, 2);
  EXPECT_TRUE(t.is_symplectic());
  // GHZ stabilizers: XXX and pairwise ZZ products.
  bool has_xxx = false;
  for (int i = 0; i < 3; ++i) has_xxx |= t.stabilizer(i).str() == "+XXX";
  EXPECT_TRUE(has_xxx);
  Rng rng(21);
  const Circuit c = random_clifford_circuit(10, 30, rng);
  StabilizerTableau big(10);
  for (const Gate& g : c.flatten()) big.apply(g);
  EXPECT_TRUE(big.is_symplectic());
}

TEST(Stabilizer, DeterministicOutcomeOfMirror) {
  Circuit c(3);
  c.append(gates::x(2));
  c.append(gates::h(0));
  c.append(gates::h(0));
  EXPECT_EQ(deterministic_outcome(c), "100");
  EXPECT_THROW(deterministic_outcome(ghz_circuit(2)), PreconditionError);
}

TEST(Stabilizer, HandlesOneThousandQubits) {
  Circuit c = ghz_circuit(1000);
  Rng rng(22);
  const SampleSet s = stabilizer_sample(c, 4, rng);
  for (const auto& [bits, count] : s.counts()) {
    EXPECT_TRUE(bits == std::string(1000, '0') || bits == std::string(1000, '1'));
  }
}

// ---- sample sets ----

TEST(SampleSet, MergeIsAssociativeAndCommutative) {
  SampleSet a(2), b(2), c(2);
  a.add("00", 3);
  a.add("11");
  b.add("01", 2);
  c.add("00");
  c.add("10", 4);
  SampleSet ab = a;
  ab.merge(b);
  SampleSet ab_c = ab;
  ab_c.merge(c);
  SampleSet bc = b;
  bc.merge(c);
  SampleSet a_bc = a;
  a_bc.merge(bc);
  EXPECT_EQ(ab_c, a_bc);
  SampleSet ba = b;
  ba.merge(a);
  EXPECT_EQ(ab, ba);
  EXPECT_EQ(ab_c.shots(), 11u);
  EXPECT_EQ(ab_c.count("00"), 4u);
}

TEST(SampleSet, EmpiricalAndJson) {
  SampleSet s(2);
  s.add_index(3, 3);
  s.add("00");
  const ProbDist p = s.empirical();
  EXPECT_DOUBLE_EQ(p[3], 0.75);
  EXPECT_EQ(index_to_bitstring(6, 3), "110");
  EXPECT_EQ(bitstring_to_index("110"), 6u);
  EXPECT_EQ(samples_from_json(to_json(s), 2), s);
  EXPECT_THROW(s.add("0"), PreconditionError);
}

TEST(ProbDist, ConstructorsAndChecks) {
  EXPECT_NO_THROW(ProbDist::uniform(3).check());
  EXPECT_EQ(ProbDist::point_mass(2, 1)[1], 1.0);
  EXPECT_THROW(ProbDist(1, {0.7, 0.7}).check(), PreconditionError);
  EXPECT_EQ(probdist_from_json(to_json(ProbDist::uniform(2))).probs(), ProbDist::uniform(2).probs());
}

}  // namespace
}  // namespace qbench
