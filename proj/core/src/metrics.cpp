#include "qbench/metrics.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numeric>

#include <Eigen/Eigenvalues>

#include "qbench/error.hpp"

namespace qbench {

std::string attribute_symbol(Attribute a) {
  switch (a) {
    case Attribute::Yes: return "yes";
    case Attribute::No: return "no";
    case Attribute::Undetermined: return "-";
  }
  return "-";
}

std::string performance_class_name(PerformanceClass c) {
  switch (c) {
    case PerformanceClass::Scalability: return "scalability";
    case PerformanceClass::Quality: return "quality";
    case PerformanceClass::Speed: return "speed";
  }
  return "quality";
}

const std::vector<MetricDescriptor>& metric_descriptors() {
  using A = Attribute;
  using P = PerformanceClass;
  constexpr A Y = A::Yes, N = A::No, U = A::Undetermined;
  static const std::vector<MetricDescriptor> table = {
      {"qubits", "Number of working connected qubits", Y, Y, Y, Y, Y, {P::Scalability}},
      {"connectivity", "Connectivity", Y, Y, N, N, Y, {P::Scalability, P::Speed}},
      {"gate_fidelity", "Gate fidelity", Y, Y, N, U, N, {P::Quality}},
      {"decoherence", "Decoherence", Y, Y, N, U, N, {P::Quality}},
      {"gate_speed", "Gate speed", Y, Y, N, Y, N, {P::Speed}},
      {"qv", "Quantum volume", N, N, N, N, Y, {P::Scalability, P::Quality}},
      {"qscore", "Q-Score", Y, N, N, N, Y, {P::Scalability, P::Quality}},
      {"clops", "CLOPS", N, N, Y, N, N, {P::Speed}},
      {"aq", "Algorithmic qubits", N, Y, N, N, Y, {P::Scalability, P::Quality}},
      {"xeb", "Cross-entropy benchmarking", N, Y, Y, U, Y, {P::Quality}},
      {"hellinger", "Hellinger distance", N, Y, Y, U, Y, {P::Quality}},
      {"hog", "Heavy output generation", N, Y, Y, U, Y, {P::Quality}},
      {"l1", "l1-norm distance", N, Y, Y, U, Y, {P::Quality}},
      {"collision_volume", "Collision volume", N, Y, Y, U, Y, {P::Quality}},
  };
  return table;
}

const MetricDescriptor& metric_descriptor(const std::string& name) {
  auto lower = [](std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
    return s;
  };
  std::string want = lower(name);
  for (const auto& d : metric_descriptors())
    if (d.key == want || lower(d.name) == want) return d;
  throw PreconditionError("unknown metric '" + name + "'");
}

namespace {

void check_widths(const ProbDist& p, const ProbDist& q) {
  if (p.n_bits() != q.n_bits() || p.size() != q.size())
    throw PreconditionError("distribution widths differ: " + std::to_string(p.n_bits()) + " vs " +
                            std::to_string(q.n_bits()));
}

void check_widths(const SampleSet& s, const ProbDist& q) {
  if (s.n_bits() != q.n_bits())
    throw PreconditionError("sample width " + std::to_string(s.n_bits()) +
                            " differs from distribution width " + std::to_string(q.n_bits()));
}

}  // namespace

double median_probability(const ProbDist& ideal) {
  std::vector<double> v = ideal.probs();
  if (v.empty()) throw PreconditionError("empty distribution");
  std::size_t n = v.size();
  std::size_t mid = n / 2;
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
  double upper = v[mid];
  if (n % 2 == 1) return upper;
  double lower = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid));
  return 0.5 * (lower + upper);
}

std::vector<std::uint64_t> heavy_set(const ProbDist& ideal) {
  double med = median_probability(ideal);
  std::vector<std::uint64_t> out;
  for (std::size_t i = 0; i < ideal.size(); ++i)
    if (ideal[i] > med) out.push_back(i);
  return out;
}

double hog_probability(const ProbDist& exp, const ProbDist& ideal) {
  check_widths(exp, ideal);
  double total = 0.0;
  for (std::uint64_t i : heavy_set(ideal)) total += exp[i];
  return total;
}

std::uint64_t heavy_count(const SampleSet& samples, const ProbDist& ideal) {
  check_widths(samples, ideal);
  double med = median_probability(ideal);
  std::uint64_t heavy = 0;
  for (const auto& [bits, count] : samples.counts())
    if (ideal[bitstring_to_index(bits)] > med) heavy += count;
  return heavy;
}

double hog_probability(const SampleSet& samples, const ProbDist& ideal) {
  if (samples.shots() == 0) throw PreconditionError("empty sample set");
  return static_cast<double>(heavy_count(samples, ideal)) / static_cast<double>(samples.shots());
}

double hellinger_distance(const ProbDist& p, const ProbDist& q) {
  check_widths(p, q);
  double bc = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) bc += std::sqrt(std::max(p[i], 0.0) * std::max(q[i], 0.0));
  return std::sqrt(std::clamp(1.0 - bc, 0.0, 1.0));
}

double l1_distance(const ProbDist& p, const ProbDist& q) {
  check_widths(p, q);
  double d = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) d += std::abs(p[i] - q[i]);
  return d;
}

double total_variation_distance(const ProbDist& p, const ProbDist& q) { return 0.5 * l1_distance(p, q); }

double uniform_cross_entropy(const ProbDist& ideal) {
  double sum = 0.0;
  for (std::size_t i = 0; i < ideal.size(); ++i) {
    if (!(ideal[i] > 0.0))
      throw InfiniteSurprisalError("ideal distribution has zero probability at " +
                                   index_to_bitstring(i, ideal.n_bits()) +
                                   "; the cross entropy against it is infinite");
    sum += std::log(ideal[i]);
  }
  return -sum / static_cast<double>(ideal.size());
}

XebResult xeb_alpha(const SampleSet& samples, const ProbDist& ideal) {
  check_widths(samples, ideal);
  if (samples.shots() == 0) throw PreconditionError("empty sample set");
  double surprisal = 0.0;
  for (const auto& [bits, count] : samples.counts()) {
    double p = ideal[bitstring_to_index(bits)];
    if (!(p > 0.0))
      throw InfiniteSurprisalError("sampled bitstring " + bits + " has zero ideal probability");
    surprisal -= static_cast<double>(count) * std::log(p);
  }
  XebResult r;
  r.shots = samples.shots();
  double m = static_cast<double>(r.shots);
  r.alpha = uniform_cross_entropy(ideal) - surprisal / m;
  r.std_error = 1.0 / std::sqrt(m);
  return r;
}

double xeb_expected_ideal(const ProbDist& p) {
  double inv_n = 1.0 / static_cast<double>(p.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (!(p[i] > 0.0)) throw InfiniteSurprisalError("ideal distribution has a zero entry");
    acc += (p[i] - inv_n) * std::log(p[i]);
  }
  return acc;
}

CollisionStats collision_volume(std::uint64_t shots, std::uint64_t distinct, int n_bits) {
  if (shots < 2) throw PreconditionError("collision volume needs at least 2 shots");
  if (n_bits < 1 || n_bits > 1000) throw PreconditionError("collision volume width out of range");
  if (distinct == 0 || distinct > shots) throw PreconditionError("distinct count inconsistent with shots");
  CollisionStats s;
  s.shots = shots;
  s.distinct = distinct;
  s.collisions = shots - distinct;
  s.outcomes = std::ldexp(1.0, n_bits);
  const double n = s.outcomes;
  const double m = static_cast<double>(shots);
  const double x = m / n;
  // E[distinct] is N(1 - e^{-x}) for a uniform sampler and N x / (1 + x) for
  // Porter-Thomas; the statistic is affine in the observed distinct count.
  const double uniform_distinct = -n * std::expm1(-x);
  double gap;
  if (x < 1e-4)
    gap = n * x * x * (0.5 - x * (5.0 / 6.0) + x * x * (23.0 / 24.0));
  else
    gap = uniform_distinct - n * x / (1.0 + x);
  s.volume = (uniform_distinct - static_cast<double>(distinct)) / gap;
  return s;
}

CollisionStats collision_volume(const SampleSet& samples) {
  return collision_volume(samples.shots(), samples.distinct(), samples.n_bits());
}

std::uint64_t collision_shots(int n_bits) {
  if (n_bits < 1) throw PreconditionError("width must be positive");
  return static_cast<std::uint64_t>(std::ceil(std::ldexp(1.0, 5) * std::pow(2.0, n_bits / 2.0) - 1e-9));
}

double eplg(double layer_fidelity, int n_two_qubit) {
  if (!(layer_fidelity > 0.0) || layer_fidelity > 1.0)
    throw PreconditionError("layer fidelity must lie in (0, 1]");
  if (n_two_qubit < 1) throw PreconditionError("EPLG needs at least one two-qubit gate per layer");
  return 1.0 - std::pow(layer_fidelity, 1.0 / n_two_qubit);
}

SummaryStats summarize(const std::vector<double>& values) {
  SummaryStats s;
  s.count = values.size();
  if (values.empty()) return s;
  auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  s.min = *lo;
  s.max = *hi;
  s.mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
  return s;
}

StaticMetrics static_device_metrics(const DeviceModel& d) {
  d.validate();
  StaticMetrics m;
  m.n_qubits = d.n_qubits;
  m.working_qubits = static_cast<int>(d.working_count());
  m.working_connected_qubits = static_cast<int>(d.largest_component().size());

  auto adj = d.adjacency();
  std::vector<double> degrees;
  for (int q = 0; q < d.n_qubits; ++q)
    if (d.is_working(q)) degrees.push_back(static_cast<double>(adj[static_cast<std::size_t>(q)].size()));
  m.degree = summarize(degrees);

  if (d.n_qubits > 0) {
    Eigen::MatrixXd c = Eigen::MatrixXd::Zero(d.n_qubits, d.n_qubits);
    for (const auto& e : d.edges) {
      if (!d.is_working(e.a) || !d.is_working(e.b)) continue;
      c(e.a, e.b) = std::max(c(e.a, e.b), e.strength);
      c(e.b, e.a) = c(e.a, e.b);
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(c, Eigen::EigenvaluesOnly);
    m.coupling_spectral_norm = es.eigenvalues().cwiseAbs().maxCoeff();
  }

  std::vector<double> f1, f2;
  for (const auto& [kind, err] : d.gate_error) {
    if (is_single_qubit_unitary(kind)) f1.push_back(1.0 - err);
    if (is_two_qubit_unitary(kind)) f2.push_back(1.0 - err);
  }
  for (const auto& [edge, err] : d.edge_error) f2.push_back(1.0 - err);
  m.gate_fidelity_1q = summarize(f1);
  m.gate_fidelity_2q = summarize(f2);

  std::vector<double> ro, t1, t2;
  for (int q = 0; q < d.n_qubits; ++q) {
    if (!d.is_working(q)) continue;
    auto i = static_cast<std::size_t>(q);
    if (i < d.readout_error.size()) ro.push_back(1.0 - d.readout_error[i]);
    if (i < d.t1.size()) t1.push_back(d.t1[i]);
    if (i < d.t2.size()) t2.push_back(d.t2[i]);
  }
  m.readout_fidelity = summarize(ro);
  m.t1 = summarize(t1);
  m.t2 = summarize(t2);

  std::vector<double> dur;
  for (const auto& [kind, t] : d.gate_duration) dur.push_back(t);
  m.gate_duration = summarize(dur);
  return m;
}

ShotPlan shots_for_precision(double p, double delta_p) {
  if (!(p > 0.0 && p < 1.0))
    throw PreconditionError("probability estimate must lie strictly between 0 and 1 (binomial variance degenerates)");
  if (!(delta_p > 0.0)) throw PreconditionError("target precision must be positive");
  double x = p * (1.0 - p) / (delta_p * delta_p);
  double r = std::round(x);
  double m = std::abs(x - r) <= 1e-9 * std::max(1.0, x) ? r : std::ceil(x);
  ShotPlan plan;
  plan.p = p;
  plan.delta_p = delta_p;
  plan.shots = static_cast<std::uint64_t>(std::max(1.0, m));
  return plan;
}

}  // namespace qbench
