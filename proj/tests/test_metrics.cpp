#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "qbench/device.hpp"
#include "qbench/error.hpp"
#include "qbench/metrics.hpp"
#include "qbench/randgen.hpp"
#include "qbench/statevector.hpp"

namespace qbench {
namespace {

ProbDist random_dist(int n, Rng& rng) {
  std::vector<double> p(std::size_t{1} << n);
  for (double& x : p) x = -std::log(1.0 - rng.uniform());
  const double s = std::accumulate(p.begin(), p.end(), 0.0);
  for (double& x : p) x /= s;
  return ProbDist(n, std::move(p));
}

ProbDist permuted(const ProbDist& p, const std::vector<std::size_t>& perm) {
  std::vector<double> out(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) out[perm[i]] = p[i];
  return ProbDist(p.n_bits(), std::move(out));
}

// ---- descriptors ----

TEST(MetricDescriptors, FourteenEntriesMatchTheCatalogue) {
  // practical, repeatable, reliable, linear, consistent as y / n / -.
  const std::vector<std::pair<std::string, std::string>> want = {
      {"qubits", "yyyyy"},      {"connectivity", "yynny"}, {"gate_fidelity", "yyn-n"},
      {"decoherence", "yyn-n"}, {"gate_speed", "yynyn"},   {"qv", "nnnny"},
      {"qscore", "ynnny"},      {"clops", "nnynn"},        {"aq", "nynny"},
      {"xeb", "nyy-y"},         {"hellinger", "nyy-y"},    {"hog", "nyy-y"},
      {"l1", "nyy-y"},          {"collision_volume", "nyy-y"},
  };
  const auto& table = metric_descriptors();
  ASSERT_EQ(table.size(), 14u);
  auto code = [](Attribute a) { return a == Attribute::Yes ? 'y' : a == Attribute::No ? 'n' : '-'; };
  for (std::size_t i = 0; i < want.size(); ++i) {
    const MetricDescriptor& d = table[i];
    EXPECT_EQ(d.key, want[i].first);
    const std::string got{code(d.practical), code(d.repeatable), code(d.reliable), code(d.linear),
                          code(d.consistent)};
    EXPECT_EQ(got, want[i].second) << d.key;
  }
  EXPECT_EQ(metric_descriptor("QV").key, "qv");
  EXPECT_EQ(metric_descriptor("Hellinger distance").key, "hellinger");
  EXPECT_THROW(metric_descriptor("mips"), PreconditionError);
}

// ---- heavy output generation ----

TEST(HeavySet, HandComputedExamples) {
  const ProbDist p(2, {0.4, 0.3, 0.2, 0.1});
  EXPECT_DOUBLE_EQ(median_probability(p), 0.25);
  EXPECT_EQ(heavy_set(p), (std::vector<std::uint64_t>{0, 1}));
  EXPECT_TRUE(heavy_set(ProbDist::uniform(3)).empty());
  EXPECT_EQ(heavy_set(ProbDist(1, {1.0, 0.0})), (std::vector<std::uint64_t>{0}));
}

TEST(HeavySet, MatchesBruteForceSortOracle) {
  Rng rng(1);
  for (int trial = 0; trial < 20; ++trial) {
    const ProbDist p = random_dist(1 + trial % 6, rng);
    std::vector<double> sorted = p.probs();
    std::sort(sorted.begin(), sorted.end());
    const std::size_t n = sorted.size();
    const double med = n % 2 ? sorted[n / 2] : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
    std::vector<std::uint64_t> want;
    for (std::size_t i = 0; i < n; ++i)
      if (p[i] > med) want.push_back(i);
    EXPECT_EQ(heavy_set(p), want);
  }
}

TEST(Hog, HandComputedAndSampleForms) {
  const ProbDist p(2, {0.4, 0.3, 0.2, 0.1});
  EXPECT_NEAR(hog_probability(p, p), 0.7, 1e-15);
  SampleSet s(2);
  s.add("00", 3);
  s.add("11", 1);
  EXPECT_DOUBLE_EQ(hog_probability(s, p), 0.75);
  EXPECT_EQ(heavy_count(s, p), 3u);
  EXPECT_EQ(hog_probability(ProbDist::uniform(2), ProbDist::uniform(2)), 0.0);
  EXPECT_THROW(hog_probability(ProbDist::uniform(3), p), PreconditionError);
}

TEST(Hog, IdealDominatesUniformForNonUniformIdeal) {
  Rng rng(2);
  for (int trial = 0; trial < 50; ++trial) {
    const ProbDist p = random_dist(1 + trial % 7, rng);
    EXPECT_GE(hog_probability(p, p), hog_probability(ProbDist::uniform(p.n_bits()), p));
  }
}

TEST(Hog, QvCircuitsApproachKnownConstants) {
  Rng rng(3);
  double ideal = 0.0, uniform = 0.0;
  const int circuits = 60;
  for (int i = 0; i < circuits; ++i) {
    const ProbDist p = ideal_distribution(qv_model_circuit(6, rng));
    ideal += hog_probability(p, p);
    uniform += hog_probability(ProbDist::uniform(6), p);
  }
  EXPECT_NEAR(ideal / circuits, (1.0 + std::log(2.0)) / 2.0, 0.03);
  EXPECT_NEAR(uniform / circuits, 0.5, 1e-12);
}

// ---- distances ----

TEST(Hellinger, Examples) {
  const ProbDist p(1, {1.0, 0.0});
  EXPECT_EQ(hellinger_distance(p, p), 0.0);
  EXPECT_NEAR(hellinger_distance(p, ProbDist(1, {0.0, 1.0})), 1.0, 1e-15);
  EXPECT_NEAR(hellinger_distance(p, ProbDist::uniform(1)), std::sqrt(1.0 - std::sqrt(0.5)), 1e-12);
  EXPECT_NEAR(hellinger_distance(p, ProbDist::uniform(1)), 0.5412, 1e-4);
}

TEST(L1, Examples) {
  const ProbDist p = ProbDist::point_mass(2, 0);
  EXPECT_EQ(l1_distance(p, p), 0.0);
  EXPECT_DOUBLE_EQ(l1_distance(p, ProbDist::point_mass(2, 3)), 2.0);
  EXPECT_DOUBLE_EQ(l1_distance(p, ProbDist::uniform(2)), 1.5);
  EXPECT_DOUBLE_EQ(total_variation_distance(p, ProbDist::uniform(2)), 0.75);
}

TEST(Distances, SymmetryAndTriangleInequality) {
  Rng rng(4);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 1 + trial % 5;
    const ProbDist a = random_dist(n, rng), b = random_dist(n, rng), c = random_dist(n, rng);
    for (auto d : {&hellinger_distance, &l1_distance, &total_variation_distance}) {
      EXPECT_NEAR(d(a, b), d(b, a), 1e-15);
      EXPECT_LE(d(a, c), d(a, b) + d(b, c) + 1e-12);
      EXPECT_GE(d(a, b), 0.0);
    }
    EXPECT_LE(hellinger_distance(a, b), 1.0);
    EXPECT_LE(l1_distance(a, b), 2.0);
  }
}

TEST(Distances, PermutationEquivariance) {
  Rng rng(5);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 2 + trial % 4;
    const ProbDist a = random_dist(n, rng), b = random_dist(n, rng);
    std::vector<std::size_t> perm(a.size());
    std::iota(perm.begin(), perm.end(), 0);
    for (std::size_t i = perm.size(); i > 1; --i) std::swap(perm[i - 1], perm[rng.below(i)]);
    const ProbDist pa = permuted(a, perm), pb = permuted(b, perm);
    EXPECT_NEAR(hellinger_distance(a, b), hellinger_distance(pa, pb), 1e-12);
    EXPECT_NEAR(l1_distance(a, b), l1_distance(pa, pb), 1e-12);
    EXPECT_NEAR(hog_probability(a, b), hog_probability(pa, pb), 1e-12);
    EXPECT_NEAR(xeb_expected_ideal(a), xeb_expected_ideal(pa), 1e-12);
  }
}

// ---- cross entropy ----

TEST(Xeb, UniformCrossEntropyAndExpectation) {
  const ProbDist p(1, {0.25, 0.75});
  EXPECT_NEAR(uniform_cross_entropy(p), -(std::log(0.25) + std::log(0.75)) / 2, 1e-15);
  EXPECT_NEAR(xeb_expected_ideal(p), (0.25 - 0.5) * std::log(0.25) + (0.75 - 0.5) * std::log(0.75), 1e-15);
  EXPECT_NEAR(xeb_expected_ideal(ProbDist::uniform(4)), 0.0, 1e-15);
}

TEST(Xeb, HandComputedAlpha) {
  const ProbDist p(1, {0.25, 0.75});
  SampleSet s(1);
  s.add("1", 3);
  s.add("0", 1);
  const XebResult r = xeb_alpha(s, p);
  const double h = -(std::log(0.25) + std::log(0.75)) / 2;
  const double mean_surprisal = (3 * -std::log(0.75) + -std::log(0.25)) / 4;
  EXPECT_NEAR(r.alpha, h - mean_surprisal, 1e-15);
  EXPECT_DOUBLE_EQ(r.std_error, 0.5);
  EXPECT_EQ(r.shots, 4u);
}

TEST(Xeb, ZeroProbabilityIsRejected) {
  SampleSet s(1);
  s.add("0", 10);
  EXPECT_THROW(xeb_alpha(s, ProbDist::point_mass(1, 0)), InfiniteSurprisalError);
  EXPECT_THROW(uniform_cross_entropy(ProbDist::point_mass(1, 0)), InfiniteSurprisalError);
}

TEST(Xeb, UniformSamplesGiveZero) {
  Rng rng(6);
  const ProbDist p = ideal_distribution(qv_model_circuit(8, rng));
  const std::uint64_t m = 100000;
  const SampleSet s = sample_distribution(ProbDist::uniform(8), m, rng);
  EXPECT_NEAR(xeb_alpha(s, p).alpha, 0.0, 3.0 / std::sqrt(static_cast<double>(m)));
}

TEST(Xeb, LinearInFidelity) {
  Rng rng(7);
  const ProbDist p = ideal_distribution(qv_model_circuit(8, rng));
  const std::uint64_t half = 50000;
  SampleSet ideal = sample_distribution(p, half, rng);
  const SampleSet uniform = sample_distribution(ProbDist::uniform(8), half, rng);
  ideal.merge(uniform);
  const XebResult mix = xeb_alpha(ideal, p);
  EXPECT_NEAR(mix.alpha, 0.5 * xeb_expected_ideal(p), 3 * mix.std_error);
}

// ---- collision volume ----

TEST(Collision, HandPluggedFormula) {
  SampleSet s(2);
  s.add("00", 2);
  const CollisionStats c = collision_volume(s);
  EXPECT_EQ(c.shots, 2u);
  EXPECT_EQ(c.distinct, 1u);
  EXPECT_EQ(c.collisions, 1u);
  EXPECT_EQ(c.outcomes, 4.0);
  const double e = std::exp(-0.5);
  const double want = (1.0 - 2.0 + 4.0 * (1.0 - e)) / (16.0 / 6.0 - 4.0 * e);
  EXPECT_NEAR(c.volume, want, 1e-14);
  EXPECT_EQ(c.distinct + c.collisions, c.shots);
}

TEST(Collision, RejectsSingleShot) {
  SampleSet s(2);
  s.add("01");
  EXPECT_THROW(collision_volume(s), PreconditionError);
  EXPECT_THROW(collision_volume(1, 1, 4), PreconditionError);
}

TEST(Collision, ShotRule) {
  EXPECT_EQ(collision_shots(14), 4096u);
  EXPECT_EQ(collision_shots(10), 1024u);
  EXPECT_EQ(collision_shots(3), static_cast<std::uint64_t>(std::ceil(std::pow(2.0, 6.5))));
}

// Monte Carlo calibration with Porter-Thomas weights drawn directly.
TEST(Collision, CalibratedToZeroAndOne) {
  Rng rng(8);
  const int n = 10, runs = 40;
  const std::uint64_t m = collision_shots(n);
  double uniform = 0.0, pt = 0.0;
  for (int r = 0; r < runs; ++r) {
    uniform += collision_volume(sample_distribution(ProbDist::uniform(n), m, rng)).volume;
    pt += collision_volume(sample_distribution(random_dist(n, rng), m, rng)).volume;
  }
  EXPECT_NEAR(uniform / runs, 0.0, 0.15);
  EXPECT_NEAR(pt / runs, 1.0, 0.2);
}

TEST(Collision, DistinctBoundedByShotsAndOutcomes) {
  Rng rng(9);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 1 + trial % 6;
    const std::uint64_t m = 2 + rng.below(200);
    const CollisionStats c = collision_volume(sample_distribution(random_dist(n, rng), m, rng));
    EXPECT_LE(c.distinct, std::min<std::uint64_t>(m, std::uint64_t{1} << n));
    EXPECT_EQ(c.distinct + c.collisions, m);
  }
}

// ---- EPLG ----

TEST(Eplg, Examples) {
  EXPECT_EQ(eplg(1.0, 4), 0.0);
  EXPECT_NEAR(eplg(std::pow(0.99, 10), 10), 0.01, 1e-14);
  EXPECT_THROW(eplg(0.0, 3), PreconditionError);
  EXPECT_THROW(eplg(0.5, 0), PreconditionError);
  const double v = eplg(0.3, 7);
  EXPECT_GE(v, 0.0);
  EXPECT_LT(v, 1.0);
}

// ---- static metrics ----

TEST(StaticMetrics, FiveQubitLine) {
  const StaticMetrics m = static_device_metrics(devices::line(5));
  EXPECT_EQ(m.working_connected_qubits, 5);
  EXPECT_DOUBLE_EQ(m.degree.mean, 1.6);
  EXPECT_EQ(m.degree.min, 1.0);
  EXPECT_EQ(m.degree.max, 2.0);
  // Path graph adjacency: largest eigenvalue 2 cos(pi / 6).
  EXPECT_NEAR(m.coupling_spectral_norm, std::sqrt(3.0), 1e-10);
}

TEST(StaticMetrics, DeadQubitSplitsTheLine) {
  DeviceModel d = devices::line(5);
  d.working[2] = false;
  EXPECT_EQ(static_device_metrics(d).working_connected_qubits, 2);
  EXPECT_EQ(static_device_metrics(d).working_qubits, 4);
}

TEST(StaticMetrics, ZeroCouplings) {
  DeviceModel d = devices::line(4);
  for (auto& e : d.edges) e.strength = 0.0;
  const StaticMetrics m = static_device_metrics(d);
  EXPECT_EQ(m.coupling_spectral_norm, 0.0);
  EXPECT_EQ(m.working_connected_qubits, 1);
}

TEST(StaticMetrics, FidelitiesAndTimes) {
  DeviceModel d = devices::line(2);
  d.gate_error[GateKind::H] = 0.001;
  d.gate_error[GateKind::X] = 0.003;
  d.gate_error[GateKind::CX] = 0.02;
  d.t1 = {100e-6, 50e-6};
  d.t2 = {80e-6, 60e-6};
  d.readout_error = {0.01, 0.03};
  const StaticMetrics m = static_device_metrics(d);
  EXPECT_NEAR(m.gate_fidelity_2q.mean, 0.98, 1e-12);
  EXPECT_NEAR(m.gate_fidelity_1q.min, 0.997, 1e-12);
  EXPECT_NEAR(m.t1.mean, 75e-6, 1e-15);
  EXPECT_NEAR(m.t2.min, 60e-6, 1e-15);
  EXPECT_NEAR(m.readout_fidelity.mean, 0.98, 1e-12);
}

// ---- shot budgeting ----

TEST(ShotsForPrecision, Examples) {
  EXPECT_EQ(shots_for_precision(0.5, 0.005).shots, 10000u);
  EXPECT_EQ(shots_for_precision(0.5, 0.5).shots, 1u);
  EXPECT_EQ(shots_for_precision(0.1, 0.01).shots, 900u);
  EXPECT_THROW(shots_for_precision(0.0, 0.01), PreconditionError);
  EXPECT_THROW(shots_for_precision(1.0, 0.01), PreconditionError);
  EXPECT_THROW(shots_for_precision(0.5, 0.0), PreconditionError);
}

TEST(ShotsForPrecision, BinomialMonteCarloMeetsTarget) {
  const ShotPlan plan = shots_for_precision(0.3, 0.01);
  Rng rng(10);
  std::vector<double> est;
  for (int rep = 0; rep < 200; ++rep) {
    std::uint64_t hits = 0;
    for (std::uint64_t i = 0; i < plan.shots; ++i) hits += rng.bernoulli(0.3) ? 1 : 0;
    est.push_back(static_cast<double>(hits) / static_cast<double>(plan.shots));
  }
  const double mean = std::accumulate(est.begin(), est.end(), 0.0) / est.size();
  double var = 0.0;
  for (double e : est) var += (e - mean) * (e - mean);
  var /= static_cast<double>(est.size() - 1);
  EXPECT_LE(std::sqrt(var), 1.1 * plan.delta_p);
}

TEST(Summarize, MinMeanMax) {
  const SummaryStats s = summarize({3.0, 1.0, 2.0});
  EXPECT_EQ(s.min, 1.0);
  EXPECT_EQ(s.max, 3.0);
  EXPECT_DOUBLE_EQ(s.mean, 2.0);
  EXPECT_EQ(s.count, 3u);
  EXPECT_EQ(summarize({}).count, 0u);
}

}  // namespace
}  // namespace qbench
