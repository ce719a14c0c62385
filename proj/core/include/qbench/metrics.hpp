#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qbench/device.hpp"
#include "qbench/distributions.hpp"

namespace qbench {

enum class Attribute : std::uint8_t { No, Yes, Undetermined };

enum class PerformanceClass : std::uint8_t { Scalability, Quality, Speed };

std::string attribute_symbol(Attribute a);  // "yes", "no", "-"
std::string performance_class_name(PerformanceClass c);

struct MetricDescriptor {
  std::string key;  // short identifier used in reports
  std::string name;
  Attribute practical = Attribute::Undetermined;
  Attribute repeatable = Attribute::Undetermined;
  Attribute reliable = Attribute::Undetermined;
  Attribute linear = Attribute::Undetermined;
  Attribute consistent = Attribute::Undetermined;
  std::vector<PerformanceClass> classes;
};

// The fourteen catalogued metrics with their attribute assessment.
const std::vector<MetricDescriptor>& metric_descriptors();
// Lookup by key or name (case-insensitive); throws PreconditionError for unknown names.
const MetricDescriptor& metric_descriptor(const std::string& name);

// Outcome indices whose ideal probability is strictly above the median
// (mean of the two central values when the count is even).
std::vector<std::uint64_t> heavy_set(const ProbDist& ideal);
double median_probability(const ProbDist& ideal);

double hog_probability(const ProbDist& exp, const ProbDist& ideal);
double hog_probability(const SampleSet& samples, const ProbDist& ideal);
std::uint64_t heavy_count(const SampleSet& samples, const ProbDist& ideal);

double hellinger_distance(const ProbDist& p, const ProbDist& q);
double l1_distance(const ProbDist& p, const ProbDist& q);
double total_variation_distance(const ProbDist& p, const ProbDist& q);

struct XebResult {
  double alpha = 0.0;
  double std_error = 0.0;  // 1/sqrt(m)
  std::uint64_t shots = 0;
};

// -(1/N) sum_i ln p(i); throws InfiniteSurprisalError on a zero entry.
double uniform_cross_entropy(const ProbDist& ideal);

// Cross-entropy difference with natural logarithms. Throws
// InfiniteSurprisalError when the ideal distribution has a zero entry.
XebResult xeb_alpha(const SampleSet& samples, const ProbDist& ideal);

// Exact expectation of xeb_alpha for samples drawn from p: sum_i (p_i - 1/N) ln p_i.
double xeb_expected_ideal(const ProbDist& p);

struct CollisionStats {
  std::uint64_t shots = 0;
  double outcomes = 0.0;  // N = 2^n
  std::uint64_t distinct = 0;
  std::uint64_t collisions = 0;
  double volume = 0.0;
};

// Normalized collision statistic: 0 in expectation for a uniform sampler and
// 1 for sampling a Porter-Thomas distribution.
CollisionStats collision_volume(const SampleSet& samples);
CollisionStats collision_volume(std::uint64_t shots, std::uint64_t distinct, int n_bits);

// Pass threshold for the collision test.
inline constexpr double kCollisionThreshold = 0.5;

// Shot count used by the collision test at width n: ceil(2^(n/2 + 5)).
std::uint64_t collision_shots(int n_bits);

double eplg(double layer_fidelity, int n_two_qubit);

struct SummaryStats {
  double min = 0.0;
  double mean = 0.0;
  double max = 0.0;
  std::size_t count = 0;
};

SummaryStats summarize(const std::vector<double>& values);

struct StaticMetrics {
  int n_qubits = 0;
  int working_qubits = 0;
  int working_connected_qubits = 0;
  SummaryStats degree;
  double coupling_spectral_norm = 0.0;
  SummaryStats gate_fidelity_1q;
  SummaryStats gate_fidelity_2q;
  SummaryStats readout_fidelity;
  SummaryStats t1;
  SummaryStats t2;
  SummaryStats gate_duration;
};

StaticMetrics static_device_metrics(const DeviceModel& d);

struct ShotPlan {
  double p = 0.0;
  double delta_p = 0.0;
  std::uint64_t shots = 0;
};

// Binomial Cramer-Rao bound: m = ceil(p(1-p) / delta_p^2).
ShotPlan shots_for_precision(double p, double delta_p);

}  // namespace qbench
