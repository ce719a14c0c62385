#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qbench/circuit.hpp"
#include "qbench/device.hpp"
#include "qbench/distributions.hpp"
#include "qbench/metrics.hpp"
#include "qbench/noise.hpp"
#include "qbench/pauli.hpp"
#include "qbench/randgen.hpp"
#include "qbench/rng.hpp"
#include "qbench/statevector.hpp"
#include "qbench/transpile.hpp"

namespace qbench {

// Every protocol draws work item i from rng.substream(i); the item generator
// builds its circuit from item.substream(0) and samples from item.substream(1),
// so any single item can be re-executed from its recorded (seed, stream).
struct ItemSeed {
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
};

ItemSeed item_seed(const Rng& protocol_rng, std::uint64_t index);

// Transpiles with cfg and samples the result: Clifford circuits run on the
// stabilizer simulator, everything else on the statevector simulator.
SampleSet execute_circuit(const Circuit& c, const DeviceModel& d, const NoiseModel& noise,
                          const TranspileConfig& cfg, std::uint64_t shots, Rng& rng,
                          std::uint64_t first_shot = 0, int cap = kDefaultQubitCap,
                          PassLog* log = nullptr);

// ---- quantum volume ----

inline constexpr double kQvThreshold = 2.0 / 3.0;
inline constexpr double kQvZ = 1.959963984540054;
inline constexpr int kQvStrictCircuits = 100;
inline constexpr const char* kQvRule = "qv-lcb97.5-v1";

// mean - z * sqrt(mean (1 - mean) / n_circuits)
double qv_lower_bound(double mean_hog, std::size_t n_circuits);

struct QvCircuitRecord {
  ItemSeed seed;
  std::uint64_t shots = 0;
  std::uint64_t heavy = 0;
  double hog = 0.0;
};

struct QvWidthRecord {
  int width = 0;
  std::size_t circuits = 0;
  double mean_hog = 0.0;
  double lower_bound = 0.0;
  bool pass = false;
  std::vector<QvCircuitRecord> items;
};

struct QvOptions {
  int min_width = 2;
  int max_width = 4;
  int circuits_per_width = kQvStrictCircuits;
  std::uint64_t shots = 1000;
  bool strict = true;
  int cap = kDefaultQubitCap;
  TranspileConfig transpile;
};

struct QvResult {
  std::vector<QvWidthRecord> widths;
  int D = 0;               // 0 when width 2 already fails
  std::uint64_t qv = 1;    // 2^D
  bool achieved = false;   // at least one width passed
  bool conformant = true;  // false when fewer than kQvStrictCircuits per width
  std::string rule = kQvRule;
  PassLog pass_log;  // first circuit of the run
};

// D from the pass flags of consecutive widths starting at min_width.
int qv_depth_from_passes(const std::vector<QvWidthRecord>& widths);

QvResult run_quantum_volume(const DeviceModel& d, const NoiseModel& noise, const QvOptions& opt, Rng& rng);

// ---- volumetric grid ----

enum class VolumetricMetric : std::uint8_t { Hog, Hellinger, L1, Xeb };
std::string volumetric_metric_name(VolumetricMetric m);
VolumetricMetric volumetric_metric_from_name(const std::string& s);

struct VolumetricItem {
  ItemSeed seed;
  std::uint64_t shots = 0;
  double value = 0.0;
};

struct VolumetricRow {
  int width = 0;
  int depth = 0;
  std::string metric;
  double value = 0.0;  // mean over items
  bool has_pass = false;
  bool pass = false;   // HOG rows only: value > 2/3
  std::vector<VolumetricItem> items;
};

struct VolumetricOptions {
  VolumetricShape shape = VolumetricShape::Square;
  std::vector<int> widths = {2, 3, 4};
  std::vector<int> depths;  // when set, rows are widths x depths instead of the shape depth
  VolumetricMetric metric = VolumetricMetric::Hog;
  int circuits_per_point = 1;
  std::uint64_t shots = 1000;
  int cap = kDefaultQubitCap;
  TranspileConfig transpile;
};

struct VolumetricTable {
  std::string shape;
  std::string metric;
  std::vector<VolumetricRow> rows;
  PassLog pass_log;  // first circuit of the run
};

VolumetricTable run_volumetric(const DeviceModel& d, const NoiseModel& noise, const VolumetricOptions& opt,
                               Rng& rng);

// ---- randomized benchmarking ----

struct DecayFit {
  double A = 0.0;
  double B = 0.0;
  double p = 0.0;
  double residual = 0.0;  // sum of squared residuals
  bool converged = true;
};

// Least-squares fit of y = A p^x + B with p in [0, 1]. For fixed p the model
// is linear, so p is found by a scan plus golden-section refinement and A, B
// are solved exactly; among equally good p the largest wins.
DecayFit fit_exponential_decay(const std::vector<double>& x, const std::vector<double>& y);

// (2^n - 1)(1 - p) / 2^n
double rb_error_per_clifford(double p, int n_qubits);

struct RbSequenceRecord {
  int length = 0;
  ItemSeed seed;
  std::uint64_t shots = 0;
  std::uint64_t survivors = 0;
};

struct RbOptions {
  int n_qubits = 1;
  std::vector<int> lengths = {2, 4, 8, 16, 32, 64, 128};
  int sequences_per_length = 30;
  std::uint64_t shots = 200;
  TranspileConfig transpile;
};

struct RbResult {
  int n_qubits = 1;
  std::vector<int> lengths;
  std::vector<double> survival;
  DecayFit fit;
  double error_per_clifford = 0.0;
  std::vector<RbSequenceRecord> items;
  PassLog pass_log;  // first circuit of the run
};

// Survival means per length from the sequence records, in order of lengths.
std::vector<double> rb_survival_means(const std::vector<int>& lengths, const std::vector<RbSequenceRecord>& items);

// m random Clifford elements plus the inverting element on qubits 0..n-1, a
// barrier after every element, then measurement.
Circuit rb_sequence(int n_qubits, int length, Rng& rng);

RbResult run_rb(const DeviceModel& d, const NoiseModel& noise, const RbOptions& opt, Rng& rng);

// ---- layer fidelity / EPLG ----

struct LayerFidelityOptions {
  int chain = 3;  // qubits 0..chain-1, two-qubit gates on every neighbour pair
  std::vector<int> lengths = {1, 2, 4, 8, 16, 32};
  int sequences_per_length = 20;
  std::uint64_t shots = 200;
  TranspileConfig transpile;
};

// Identifies how layer fidelity is derived; the report also carries its hash.
inline constexpr const char* kLayerFidelityProcedure =
    "lf-pair-decay-v1: survival of forward+inverse layer pairs fitted to A p^m + B; "
    "LF = sqrt(1 - (d^2 - 1)/d^2 (1 - p)) with d = 2^chain; EPLG = 1 - LF^(1/n_2q)";

struct LayerFidelityResult {
  std::string procedure = kLayerFidelityProcedure;
  int chain = 3;
  int two_qubit_gates = 2;
  std::vector<int> lengths;
  std::vector<double> survival;
  DecayFit fit;
  double layer_fidelity = 0.0;
  double eplg = 0.0;
  std::vector<RbSequenceRecord> items;
  PassLog pass_log;  // first circuit of the run
};

// Process fidelity of one layer from the decay of a forward-and-inverse pair
// of layers on n qubits.
double layer_fidelity_from_decay(double pair_decay, int n_qubits);

// length layers of (random 1q Cliffords, CX on even pairs, random 1q
// Cliffords, CX on odd pairs), then the inverse of the whole sequence.
Circuit layer_fidelity_sequence(int chain, int length, Rng& rng);

LayerFidelityResult run_layer_fidelity(const DeviceModel& d, const NoiseModel& noise,
                                       const LayerFidelityOptions& opt, Rng& rng);

// ---- mirror circuits ----

struct MirrorCircuitRecord {
  int width = 0;
  int depth = 0;
  ItemSeed seed;
  std::string expected;
  std::uint64_t shots = 0;
  std::uint64_t successes = 0;
};

struct MirrorPoint {
  int width = 0;
  int depth = 0;
  double success = 0.0;
  double polarization = 0.0;
};

struct MirrorOptions {
  std::vector<int> widths = {4};
  std::vector<int> depths = {4};
  int randomizations = 5;
  std::uint64_t shots = 100;
  TranspileConfig transpile;
};

struct MirrorResult {
  std::vector<MirrorPoint> points;
  double mean_success = 0.0;
  double polarization = 0.0;
  std::vector<MirrorCircuitRecord> items;
  PassLog pass_log;  // first circuit of the run
};

// (s - 2^-n) / (1 - 2^-n)
double mirror_polarization(double success, int width);

MirrorResult run_mirror_benchmark(const DeviceModel& d, const NoiseModel& noise, const MirrorOptions& opt,
                                  Rng& rng);

// ---- CLOPS ----

struct ClopsOptions {
  int width = 4;
  int layers_total = 100;
  int batch = 10;
  std::uint64_t shots = 100;
  TranspileConfig transpile;
};

struct ClopsResult {
  int width = 0;
  std::uint64_t circuits = 0;
  std::uint64_t layers = 0;
  std::uint64_t gates = 0;  // native gates executed per shot, summed over circuits
  std::uint64_t shots = 0;
  double elapsed_seconds = 0.0;
  double layers_per_second = 0.0;
  bool host_relative = true;
  PassLog pass_log;  // first circuit of the run
};

ClopsResult run_clops(const DeviceModel& d, const NoiseModel& noise, const ClopsOptions& opt, Rng& rng);

// ---- classical shadows ----

struct ShadowSnapshot {
  std::vector<std::uint8_t> cliffords;  // one-qubit Clifford group index per qubit
  std::string outcome;                  // bitstring, qubit n-1 first
};

struct ShadowEstimate {
  PauliString observable;
  int weight = 0;
  double estimate = 0.0;
  double variance_bound = 0.0;  // 3^k / snapshots
  std::uint64_t snapshots = 0;
};

struct ShadowResult {
  ItemSeed seed;
  std::vector<ShadowEstimate> estimates;
  std::vector<ShadowSnapshot> snapshots;
};

// Single-snapshot estimator: product of 3 <b|U P U^dag|b> over non-identity letters.
double shadow_snapshot_value(const ShadowSnapshot& s, const PauliString& observable);

std::vector<ShadowEstimate> shadow_estimates_from(const std::vector<ShadowSnapshot>& snapshots,
                                                  const std::vector<PauliString>& observables);

ShadowResult shadow_estimate(const Circuit& prep, const std::vector<PauliString>& observables,
                             std::uint64_t snapshots, Rng& rng, const NoiseModel& noise = {});

// ---- collision test ----

struct CollisionTestResult {
  int n = 0;
  ItemSeed seed;
  CollisionStats stats;
  bool pass = false;
  PassLog pass_log;  // first circuit of the run
};

CollisionTestResult run_collision_test(const DeviceModel& d, const NoiseModel& noise, int n, Rng& rng,
                                       const TranspileConfig& cfg = {}, int cap = kDefaultQubitCap);

// ---- device verification ----

inline constexpr double kXebVerifyThreshold = 0.9;

struct XebCircuitRecord {
  ItemSeed seed;
  std::uint64_t shots = 0;
  double alpha = 0.0;
  double ideal = 0.0;  // exact expectation of alpha for this circuit
};

struct XebVerifyOptions {
  int n = 6;
  int depth = 0;  // 0 means max(n, 8)
  int circuits = 10;
  std::uint64_t shots = 2000;
  double threshold = kXebVerifyThreshold;
  TranspileConfig transpile;
};

struct XebVerification {
  int n = 0;
  int depth = 0;
  double alpha_mean = 0.0;
  double std_error = 0.0;
  double fidelity = 0.0;  // mean of alpha / ideal over circuits
  double threshold = kXebVerifyThreshold;
  bool verified = false;
  std::vector<XebCircuitRecord> items;
  PassLog pass_log;  // first circuit of the run
};

// Random model-circuit layers on n qubits, redrawn until every qubit is acted on.
Circuit xeb_circuit(int n, int depth, Rng& rng);

XebVerification xeb_verify_device(const DeviceModel& d, const NoiseModel& noise, const XebVerifyOptions& opt,
                                  Rng& rng);

}  // namespace qbench
