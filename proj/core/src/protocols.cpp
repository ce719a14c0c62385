#include "qbench/protocols.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <limits>
#include <optional>

#include "qbench/clifford_group.hpp"
#include "qbench/error.hpp"
#include "qbench/randgen.hpp"
#include "qbench/stabilizer.hpp"

namespace qbench {

namespace {

std::vector<int> iota_qubits(int n) {
  std::vector<int> q(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) q[static_cast<std::size_t>(i)] = i;
  return q;
}

void require_shots(std::uint64_t shots) {
  if (shots < 1) throw PreconditionError("shots must be at least 1");
}

double mean_of(const std::vector<double>& v) {
  if (v.empty()) return 0.0;
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

std::uint64_t all_zero_count(const SampleSet& s) { return s.count(std::string(static_cast<std::size_t>(s.n_bits()), '0')); }

}  // namespace

ItemSeed item_seed(const Rng& protocol_rng, std::uint64_t index) {
  Rng item = protocol_rng.substream(index);
  return {item.seed(), item.stream()};
}

SampleSet execute_circuit(const Circuit& c, const DeviceModel& d, const NoiseModel& noise,
                          const TranspileConfig& cfg, std::uint64_t shots, Rng& rng, std::uint64_t first_shot,
                          int cap, PassLog* log) {
  TranspileResult t = run_pipeline(c, d, cfg);
  if (log) *log = t.log;
  if (is_clifford_circuit(t.circuit))
    return stabilizer_sample(t.circuit, shots, noise, rng, kStabilizerCap, first_shot);
  Simulator sim(t.circuit, cap);
  return sim.sample(shots, noise, rng, first_shot);
}

// ---- quantum volume ----

double qv_lower_bound(double mean_hog, std::size_t n_circuits) {
  if (n_circuits == 0) throw PreconditionError("lower bound needs at least one circuit");
  double var = std::max(0.0, mean_hog * (1.0 - mean_hog));
  return mean_hog - kQvZ * std::sqrt(var / static_cast<double>(n_circuits));
}

int qv_depth_from_passes(const std::vector<QvWidthRecord>& widths) {
  int d = 0;
  for (const auto& w : widths) {
    if (!w.pass) break;
    d = w.width;
  }
  return d;
}

QvResult run_quantum_volume(const DeviceModel& d, const NoiseModel& noise, const QvOptions& opt, Rng& rng) {
  if (opt.min_width < 2) throw PreconditionError("quantum volume starts at width 2 or more");
  if (opt.max_width < opt.min_width) throw PreconditionError("max_width is below min_width");
  if (opt.max_width > opt.cap) throw CapacityError(opt.max_width, opt.cap);
  if (opt.circuits_per_width < 1) throw PreconditionError("circuits_per_width must be positive");
  require_shots(opt.shots);
  QvResult r;
  if (opt.circuits_per_width < kQvStrictCircuits) {
    if (opt.strict)
      throw PreconditionError("quantum volume needs at least " + std::to_string(kQvStrictCircuits) +
                              " circuits per width; relax strict mode to run a non-conformant measurement");
    r.conformant = false;
  }
  std::uint64_t index = 0;
  for (int m = opt.min_width; m <= opt.max_width; ++m) {
    QvWidthRecord w;
    w.width = m;
    double sum = 0.0;
    for (int i = 0; i < opt.circuits_per_width; ++i, ++index) {
      Rng item = rng.substream(index);
      Rng gen = item.substream(0);
      Rng run = item.substream(1);
      Circuit c = qv_model_circuit(m, gen);
      ProbDist ideal = ideal_distribution(c, opt.cap);
      SampleSet s = execute_circuit(c, d, noise, opt.transpile, opt.shots, run, index * opt.shots, opt.cap,
                                    index == 0 ? &r.pass_log : nullptr);
      QvCircuitRecord rec;
      rec.seed = {item.seed(), item.stream()};
      rec.shots = s.shots();
      rec.heavy = heavy_count(s, ideal);
      rec.hog = static_cast<double>(rec.heavy) / static_cast<double>(rec.shots);
      sum += rec.hog;
      w.items.push_back(rec);
    }
    w.circuits = w.items.size();
    w.mean_hog = sum / static_cast<double>(w.circuits);
    w.lower_bound = qv_lower_bound(w.mean_hog, w.circuits);
    w.pass = w.lower_bound > kQvThreshold;
    r.widths.push_back(std::move(w));
  }
  r.D = qv_depth_from_passes(r.widths);
  r.achieved = r.D > 0;
  r.qv = std::uint64_t{1} << r.D;
  return r;
}

// ---- volumetric grid ----

std::string volumetric_metric_name(VolumetricMetric m) {
  switch (m) {
    case VolumetricMetric::Hog: return "hog";
    case VolumetricMetric::Hellinger: return "hellinger";
    case VolumetricMetric::L1: return "l1";
    case VolumetricMetric::Xeb: return "xeb";
  }
  return "hog";
}

VolumetricMetric volumetric_metric_from_name(const std::string& s) {
  if (s == "hog") return VolumetricMetric::Hog;
  if (s == "hellinger") return VolumetricMetric::Hellinger;
  if (s == "l1") return VolumetricMetric::L1;
  if (s == "xeb") return VolumetricMetric::Xeb;
  throw PreconditionError("unknown volumetric metric '" + s + "' (expected hog, hellinger, l1 or xeb)");
}

VolumetricTable run_volumetric(const DeviceModel& d, const NoiseModel& noise, const VolumetricOptions& opt,
                               Rng& rng) {
  if (opt.widths.empty()) throw PreconditionError("volumetric run needs at least one width");
  if (opt.circuits_per_point < 1) throw PreconditionError("circuits_per_point must be positive");
  require_shots(opt.shots);
  for (int w : opt.widths) {
    if (w < 2) throw PreconditionError("volumetric widths must be at least 2");
    if (w > opt.cap) throw CapacityError(w, opt.cap);
  }
  for (int dd : opt.depths)
    if (dd < 1) throw PreconditionError("volumetric depths must be positive");

  VolumetricTable t;
  t.shape = opt.depths.empty() ? shape_name(opt.shape) : "custom";
  t.metric = volumetric_metric_name(opt.metric);
  std::vector<std::pair<int, int>> grid;
  for (int w : opt.widths) {
    if (opt.depths.empty()) {
      grid.emplace_back(w, volumetric_depth(opt.shape, w));
    } else {
      for (int dd : opt.depths) grid.emplace_back(w, dd);
    }
  }
  std::uint64_t index = 0;
  for (auto [w, depth] : grid) {
    VolumetricRow row;
    row.width = w;
    row.depth = depth;
    row.metric = t.metric;
    std::vector<double> values;
    for (int i = 0; i < opt.circuits_per_point; ++i, ++index) {
      Rng item = rng.substream(index);
      Rng gen = item.substream(0);
      Rng run = item.substream(1);
      Circuit c = opt.metric == VolumetricMetric::Xeb ? xeb_circuit(w, depth, gen) : qv_layers_circuit(w, depth, gen);
      ProbDist ideal = ideal_distribution(c, opt.cap);
      SampleSet s = execute_circuit(c, d, noise, opt.transpile, opt.shots, run, index * opt.shots, opt.cap,
                                    index == 0 ? &t.pass_log : nullptr);
      double v = 0.0;
      switch (opt.metric) {
        case VolumetricMetric::Hog: v = hog_probability(s, ideal); break;
        case VolumetricMetric::Hellinger: v = hellinger_distance(s.empirical(), ideal); break;
        case VolumetricMetric::L1: v = l1_distance(s.empirical(), ideal); break;
        case VolumetricMetric::Xeb: v = xeb_alpha(s, ideal).alpha; break;
      }
      row.items.push_back({{item.seed(), item.stream()}, s.shots(), v});
      values.push_back(v);
    }
    row.value = mean_of(values);
    if (opt.metric == VolumetricMetric::Hog) {
      row.has_pass = true;
      row.pass = row.value > kQvThreshold;
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

// ---- randomized benchmarking ----

namespace {

double decay_sse(const std::vector<double>& x, const std::vector<double>& y, double p, double& a, double& b) {
  const double n = static_cast<double>(x.size());
  double sf = 0.0, sff = 0.0, sy = 0.0, sfy = 0.0;
  std::vector<double> f(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    f[i] = std::pow(p, x[i]);
    sf += f[i];
    sff += f[i] * f[i];
    sy += y[i];
    sfy += f[i] * y[i];
  }
  double det = sff * n - sf * sf;
  if (std::abs(det) <= 1e-12 * std::max(1.0, sff * n)) {
    a = 0.0;
    b = sy / n;
  } else {
    a = (n * sfy - sf * sy) / det;
    b = (sff * sy - sf * sfy) / det;
  }
  double sse = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    double r = y[i] - (a * f[i] + b);
    sse += r * r;
  }
  return sse;
}

}  // namespace

DecayFit fit_exponential_decay(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw PreconditionError("decay fit needs matching x and y");
  std::vector<double> distinct = x;
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  if (distinct.size() < 2) throw PreconditionError("decay fit needs at least two distinct lengths");

  constexpr int kSteps = 2000;
  std::vector<double> sse(kSteps + 1);
  double best = std::numeric_limits<double>::infinity();
  for (int k = 0; k <= kSteps; ++k) {
    double a, b;
    sse[static_cast<std::size_t>(k)] = decay_sse(x, y, static_cast<double>(k) / kSteps, a, b);
    best = std::min(best, sse[static_cast<std::size_t>(k)]);
  }
  const double tie = best * (1.0 + 1e-9) + 1e-15;
  int k = kSteps;
  while (k > 0 && sse[static_cast<std::size_t>(k)] > tie) --k;

  DecayFit fit;
  double p = static_cast<double>(k) / kSteps;
  double p_sse = sse[static_cast<std::size_t>(k)];
  double lo = std::max(0.0, p - 1.0 / kSteps), hi = std::min(1.0, p + 1.0 / kSteps);
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = hi - g * (hi - lo), dpt = lo + g * (hi - lo), a, b;
  double fc = decay_sse(x, y, c, a, b), fd = decay_sse(x, y, dpt, a, b);
  for (int it = 0; it < 80 && hi - lo > 1e-13; ++it) {
    if (fc < fd) {
      hi = dpt;
      dpt = c;
      fd = fc;
      c = hi - g * (hi - lo);
      fc = decay_sse(x, y, c, a, b);
    } else {
      lo = c;
      c = dpt;
      fc = fd;
      dpt = lo + g * (hi - lo);
      fd = decay_sse(x, y, dpt, a, b);
    }
  }
  double refined = 0.5 * (lo + hi);
  double r_sse = decay_sse(x, y, refined, a, b);
  if (r_sse < p_sse - 1e-15) p = refined;
  fit.p = p;
  fit.residual = decay_sse(x, y, p, fit.A, fit.B);
  fit.converged = std::isfinite(fit.A) && std::isfinite(fit.B) && std::isfinite(fit.residual);
  return fit;
}

double rb_error_per_clifford(double p, int n_qubits) {
  double d = std::ldexp(1.0, n_qubits);
  return (d - 1.0) * (1.0 - p) / d;
}

std::vector<double> rb_survival_means(const std::vector<int>& lengths, const std::vector<RbSequenceRecord>& items) {
  std::vector<double> out;
  for (int m : lengths) {
    double sum = 0.0;
    std::size_t count = 0;
    for (const auto& it : items) {
      if (it.length != m || it.shots == 0) continue;
      sum += static_cast<double>(it.survivors) / static_cast<double>(it.shots);
      ++count;
    }
    out.push_back(count ? sum / static_cast<double>(count) : 0.0);
  }
  return out;
}

Circuit rb_sequence(int n_qubits, int length, Rng& rng) {
  if (n_qubits != 1 && n_qubits != 2) throw PreconditionError("RB supports 1 or 2 qubits");
  if (length < 1) throw PreconditionError("RB sequence length must be positive");
  const CliffordGroup& group = n_qubits == 1 ? CliffordGroup::one_qubit() : CliffordGroup::two_qubit();
  const std::vector<int> qubits = iota_qubits(n_qubits);
  Circuit c(n_qubits);
  c.metadata().name = "rb_" + std::to_string(n_qubits) + "q_m" + std::to_string(length);
  c.metadata().seed = rng.seed();
  c.metadata().stream = rng.stream();
  c.metadata().has_seed = true;
  std::size_t acc = 0;
  for (int i = 0; i < length; ++i) {
    std::size_t idx = sample_clifford_index(n_qubits, rng);
    acc = i == 0 ? idx : group.compose(acc, idx);
    c.append(group.instantiate(idx, qubits));
    c.append(gates::barrier(qubits));
  }
  c.append(group.instantiate(group.inverse_index(acc), qubits));
  c.append(gates::barrier(qubits));
  for (int q : qubits) c.append(gates::measure(q, q));
  return c;
}

RbResult run_rb(const DeviceModel& d, const NoiseModel& noise, const RbOptions& opt, Rng& rng) {
  if (opt.n_qubits != 1 && opt.n_qubits != 2) throw PreconditionError("RB supports 1 or 2 qubits");
  std::vector<int> sorted = opt.lengths;
  std::sort(sorted.begin(), sorted.end());
  if (std::unique(sorted.begin(), sorted.end()) - sorted.begin() < 2)
    throw PreconditionError("RB needs at least two distinct sequence lengths");
  if (opt.sequences_per_length < 1) throw PreconditionError("sequences_per_length must be positive");
  require_shots(opt.shots);

  RbResult r;
  r.n_qubits = opt.n_qubits;
  r.lengths = opt.lengths;
  std::uint64_t index = 0;
  for (int m : opt.lengths) {
    for (int j = 0; j < opt.sequences_per_length; ++j, ++index) {
      Rng item = rng.substream(index);
      Rng gen = item.substream(0);
      Rng run = item.substream(1);
      Circuit c = rb_sequence(opt.n_qubits, m, gen);
      SampleSet s = execute_circuit(c, d, noise, opt.transpile, opt.shots, run, index * opt.shots,
                                    kDefaultQubitCap, index == 0 ? &r.pass_log : nullptr);
      r.items.push_back({m, {item.seed(), item.stream()}, s.shots(), all_zero_count(s)});
    }
  }
  r.survival = rb_survival_means(r.lengths, r.items);
  std::vector<double> x(r.lengths.begin(), r.lengths.end());
  r.fit = fit_exponential_decay(x, r.survival);
  r.error_per_clifford = rb_error_per_clifford(r.fit.p, r.n_qubits);
  return r;
}

// ---- layer fidelity / EPLG ----

double layer_fidelity_from_decay(double pair_decay, int n_qubits) {
  double d2 = std::ldexp(1.0, 2 * n_qubits);
  double pair = 1.0 - (d2 - 1.0) / d2 * (1.0 - pair_decay);
  return std::sqrt(std::clamp(pair, 0.0, 1.0));
}

Circuit layer_fidelity_sequence(int chain, int length, Rng& rng) {
  if (chain < 2) throw PreconditionError("layer fidelity needs a chain of at least 2 qubits");
  if (length < 1) throw PreconditionError("layer fidelity length must be positive");
  const CliffordGroup& group = CliffordGroup::one_qubit();
  Circuit fwd(chain);
  auto dress = [&] {
    for (int q = 0; q < chain; ++q) fwd.append(group.instantiate(sample_clifford_index(1, rng), {q}));
  };
  for (int l = 0; l < length; ++l) {
    dress();
    for (int q = 0; q + 1 < chain; q += 2) fwd.append(gates::cx(q, q + 1));
    dress();
    for (int q = 1; q + 1 < chain; q += 2) fwd.append(gates::cx(q, q + 1));
  }
  Circuit c(chain);
  c.metadata().name = "layer_fidelity_" + std::to_string(chain) + "q_m" + std::to_string(length);
  c.metadata().seed = rng.seed();
  c.metadata().stream = rng.stream();
  c.metadata().has_seed = true;
  c.extend(fwd);
  c.append(gates::barrier(iota_qubits(chain)));
  c.extend(inverse_circuit(fwd));
  for (int q = 0; q < chain; ++q) c.append(gates::measure(q, q));
  return c;
}

LayerFidelityResult run_layer_fidelity(const DeviceModel& d, const NoiseModel& noise,
                                       const LayerFidelityOptions& opt, Rng& rng) {
  if (opt.chain < 2) throw PreconditionError("layer fidelity needs a chain of at least 2 qubits");
  std::vector<int> sorted = opt.lengths;
  std::sort(sorted.begin(), sorted.end());
  if (std::unique(sorted.begin(), sorted.end()) - sorted.begin() < 2)
    throw PreconditionError("layer fidelity needs at least two distinct lengths");
  if (opt.sequences_per_length < 1) throw PreconditionError("sequences_per_length must be positive");
  require_shots(opt.shots);

  LayerFidelityResult r;
  r.chain = opt.chain;
  r.two_qubit_gates = opt.chain - 1;
  r.lengths = opt.lengths;
  std::uint64_t index = 0;
  for (int m : opt.lengths) {
    for (int j = 0; j < opt.sequences_per_length; ++j, ++index) {
      Rng item = rng.substream(index);
      Rng gen = item.substream(0);
      Rng run = item.substream(1);
      Circuit c = layer_fidelity_sequence(opt.chain, m, gen);
      SampleSet s = execute_circuit(c, d, noise, opt.transpile, opt.shots, run, index * opt.shots,
                                    kDefaultQubitCap, index == 0 ? &r.pass_log : nullptr);
      r.items.push_back({m, {item.seed(), item.stream()}, s.shots(), all_zero_count(s)});
    }
  }
  r.survival = rb_survival_means(r.lengths, r.items);
  std::vector<double> x(r.lengths.begin(), r.lengths.end());
  r.fit = fit_exponential_decay(x, r.survival);
  r.layer_fidelity = layer_fidelity_from_decay(r.fit.p, r.chain);
  r.eplg = eplg(r.layer_fidelity, r.two_qubit_gates);
  return r;
}

// ---- mirror circuits ----

double mirror_polarization(double success, int width) {
  double floor = std::ldexp(1.0, -width);
  return (success - floor) / (1.0 - floor);
}

MirrorResult run_mirror_benchmark(const DeviceModel& d, const NoiseModel& noise, const MirrorOptions& opt,
                                  Rng& rng) {
  if (opt.widths.empty() || opt.depths.empty()) throw PreconditionError("mirror benchmark needs widths and depths");
  if (opt.randomizations < 1) throw PreconditionError("randomizations must be positive");
  require_shots(opt.shots);
  for (int w : opt.widths)
    if (w < 1 || w > kStabilizerCap) throw CapacityError(w, kStabilizerCap);
  for (int dd : opt.depths)
    if (dd < 1) throw PreconditionError("mirror depths must be positive");

  MirrorResult r;
  std::uint64_t index = 0;
  std::vector<double> all, pols;
  for (int w : opt.widths) {
    for (int dd : opt.depths) {
      std::vector<double> succ;
      for (int j = 0; j < opt.randomizations; ++j, ++index) {
        Rng item = rng.substream(index);
        Rng gen = item.substream(0);
        Rng run = item.substream(1);
        Circuit base = random_clifford_circuit(w, dd, gen);
        MirrorSpec spec = make_mirror_circuit(base, gen);
        SampleSet s = execute_circuit(spec.full, d, noise, opt.transpile, opt.shots, run, index * opt.shots,
                                      kDefaultQubitCap, index == 0 ? &r.pass_log : nullptr);
        MirrorCircuitRecord rec;
        rec.width = w;
        rec.depth = dd;
        rec.seed = {item.seed(), item.stream()};
        rec.expected = spec.expected;
        rec.shots = s.shots();
        rec.successes = s.count(spec.expected);
        double v = static_cast<double>(rec.successes) / static_cast<double>(rec.shots);
        succ.push_back(v);
        all.push_back(v);
        r.items.push_back(std::move(rec));
      }
      MirrorPoint p;
      p.width = w;
      p.depth = dd;
      p.success = mean_of(succ);
      p.polarization = mirror_polarization(p.success, w);
      pols.push_back(p.polarization);
      r.points.push_back(p);
    }
  }
  r.mean_success = mean_of(all);
  r.polarization = mean_of(pols);
  return r;
}

// ---- CLOPS ----

ClopsResult run_clops(const DeviceModel& d, const NoiseModel& noise, const ClopsOptions& opt, Rng& rng) {
  if (opt.width < 2) throw PreconditionError("CLOPS width must be at least 2");
  if (opt.width > kDefaultQubitCap) throw CapacityError(opt.width, kDefaultQubitCap);
  if (opt.layers_total < 1) throw PreconditionError("layers_total must be positive");
  if (opt.batch < 1) throw PreconditionError("batch must be positive");
  require_shots(opt.shots);

  ClopsResult r;
  r.width = opt.width;
  std::vector<int> depths;
  for (int left = opt.layers_total; left > 0; left -= opt.width) depths.push_back(std::min(left, opt.width));

  auto start = std::chrono::steady_clock::now();
  std::uint64_t index = 0;
  for (std::size_t first = 0; first < depths.size(); first += static_cast<std::size_t>(opt.batch)) {
    std::size_t last = std::min(depths.size(), first + static_cast<std::size_t>(opt.batch));
    std::vector<Circuit> batch;
    for (std::size_t i = first; i < last; ++i) {
      Rng gen = rng.substream(index + (i - first)).substream(0);
      batch.push_back(qv_layers_circuit(opt.width, depths[i], gen));
    }
    for (std::size_t i = 0; i < batch.size(); ++i, ++index) {
      TranspileResult t = run_pipeline(batch[i], d, opt.transpile);
      if (index == 0) r.pass_log = t.log;
      Rng run = rng.substream(index).substream(1);
      Simulator sim(t.circuit);
      SampleSet s = sim.sample(opt.shots, noise, run, index * opt.shots);
      r.gates += t.circuit.gate_count();
      r.shots += s.shots();
      r.layers += static_cast<std::uint64_t>(depths[first + i]);
      ++r.circuits;
    }
  }
  r.elapsed_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  r.elapsed_seconds = std::max(r.elapsed_seconds, 1e-9);
  r.layers_per_second = static_cast<double>(r.layers) / r.elapsed_seconds;
  return r;
}

// ---- classical shadows ----

namespace {

// table[c][letter][b] = <b| U_c P U_c^dag |b> for letters X, Y, Z.
const std::vector<std::array<std::array<double, 2>, 3>>& shadow_table() {
  static const auto table = [] {
    const CliffordGroup& g = CliffordGroup::one_qubit();
    std::vector<std::array<std::array<double, 2>, 3>> t(g.size());
    const char letters[] = {'X', 'Y', 'Z'};
    for (std::size_t c = 0; c < g.size(); ++c) {
      Mat2 u = g.matrix(c);
      for (int l = 0; l < 3; ++l) {
        Mat2 m = u * pauli_matrix(letters[l]) * u.adjoint();
        t[c][static_cast<std::size_t>(l)] = {std::round(m(0, 0).real()), std::round(m(1, 1).real())};
      }
    }
    return t;
  }();
  return table;
}

int letter_slot(char l) {
  switch (l) {
    case 'X': return 0;
    case 'Y': return 1;
    case 'Z': return 2;
    default: return -1;
  }
}

}  // namespace

double shadow_snapshot_value(const ShadowSnapshot& s, const PauliString& observable) {
  const int n = observable.n_qubits();
  if (static_cast<int>(s.cliffords.size()) != n || static_cast<int>(s.outcome.size()) != n)
    throw PreconditionError("snapshot and observable widths differ");
  const auto& table = shadow_table();
  double v = observable.sign();
  for (int q = 0; q < n; ++q) {
    int slot = letter_slot(observable.letter(q));
    if (slot < 0) continue;
    int bit = s.outcome[static_cast<std::size_t>(n - 1 - q)] == '1' ? 1 : 0;
    v *= 3.0 * table[s.cliffords[static_cast<std::size_t>(q)]][static_cast<std::size_t>(slot)]
                    [static_cast<std::size_t>(bit)];
    if (v == 0.0) return 0.0;
  }
  return v;
}

std::vector<ShadowEstimate> shadow_estimates_from(const std::vector<ShadowSnapshot>& snapshots,
                                                  const std::vector<PauliString>& observables) {
  if (snapshots.empty()) throw PreconditionError("shadow estimation needs at least one snapshot");
  std::vector<ShadowEstimate> out;
  const double m = static_cast<double>(snapshots.size());
  for (const PauliString& o : observables) {
    ShadowEstimate e;
    e.observable = o;
    e.weight = o.weight();
    e.snapshots = snapshots.size();
    double sum = 0.0;
    for (const auto& s : snapshots) sum += shadow_snapshot_value(s, o);
    e.estimate = sum / m;
    e.variance_bound = std::pow(3.0, e.weight) / m;
    out.push_back(std::move(e));
  }
  return out;
}

ShadowResult shadow_estimate(const Circuit& prep, const std::vector<PauliString>& observables,
                             std::uint64_t snapshots, Rng& rng, const NoiseModel& noise) {
  if (snapshots < 1) throw PreconditionError("shadow estimation needs at least one snapshot");
  if (prep.has_measurements()) throw PreconditionError("shadow preparation circuit must be measurement-free");
  const int n = prep.n_qubits();
  for (const auto& o : observables)
    if (o.n_qubits() != n)
      throw PreconditionError("observable " + o.str() + " does not match the " + std::to_string(n) + "-qubit state");

  ShadowResult r;
  Rng item = rng.substream(0);
  r.seed = {item.seed(), item.stream()};
  const CliffordGroup& group = CliffordGroup::one_qubit();
  r.snapshots.reserve(static_cast<std::size_t>(snapshots));

  const bool fast = noise.is_noiseless() && n <= kDefaultQubitCap;
  std::optional<StateVector> psi;
  if (fast) psi = final_state(prep);
  for (std::uint64_t k = 0; k < snapshots; ++k) {
    ShadowSnapshot s;
    s.cliffords.resize(static_cast<std::size_t>(n));
    for (int q = 0; q < n; ++q) s.cliffords[static_cast<std::size_t>(q)] = static_cast<std::uint8_t>(item.below(group.size()));
    if (fast) {
      StateVector v = *psi;
      for (int q = 0; q < n; ++q) v.apply_1q(group.matrix(s.cliffords[static_cast<std::size_t>(q)]), q);
      const auto& amps = v.amplitudes();
      double u = item.uniform(), acc = 0.0;
      std::size_t pick = amps.size() - 1;
      for (std::size_t i = 0; i < amps.size(); ++i) {
        acc += std::norm(amps[i]);
        if (u < acc) {
          pick = i;
          break;
        }
      }
      s.outcome = index_to_bitstring(pick, n);
    } else {
      Circuit c = prep;
      for (int q = 0; q < n; ++q)
        c.append(group.instantiate(s.cliffords[static_cast<std::size_t>(q)], {q}));
      for (int q = 0; q < n; ++q) c.append(gates::measure(q, q));
      SampleSet one = is_clifford_circuit(c) ? stabilizer_sample(c, 1, noise, item, kStabilizerCap, k)
                                             : Simulator(c).sample(1, noise, item, k);
      s.outcome = one.counts().begin()->first;
    }
    r.snapshots.push_back(std::move(s));
  }
  r.estimates = shadow_estimates_from(r.snapshots, observables);
  return r;
}

// ---- collision test ----

CollisionTestResult run_collision_test(const DeviceModel& d, const NoiseModel& noise, int n, Rng& rng,
                                       const TranspileConfig& cfg, int cap) {
  if (n < 2) throw PreconditionError("collision test needs n >= 2");
  if (n > cap) throw CapacityError(n, cap);
  CollisionTestResult r;
  r.n = n;
  Rng item = rng.substream(0);
  r.seed = {item.seed(), item.stream()};
  Rng gen = item.substream(0);
  Rng run = item.substream(1);
  Circuit c = qv_model_circuit(n, gen);
  SampleSet s = execute_circuit(c, d, noise, cfg, collision_shots(n), run, 0, cap, &r.pass_log);
  r.stats = collision_volume(s);
  r.pass = r.stats.volume >= kCollisionThreshold;
  return r;
}

// ---- device verification ----

Circuit xeb_circuit(int n, int depth, Rng& rng) {
  for (int attempt = 0; attempt < 1000; ++attempt) {
    Circuit c = qv_layers_circuit(n, depth, rng);
    std::vector<bool> touched(static_cast<std::size_t>(n), false);
    c.for_each_gate([&](const Gate& g) {
      for (int t : g.targets) touched[static_cast<std::size_t>(t)] = true;
    });
    if (std::all_of(touched.begin(), touched.end(), [](bool b) { return b; })) return c;
  }
  throw PreconditionError("could not draw a circuit touching every qubit at width " + std::to_string(n) +
                          " and depth " + std::to_string(depth));
}

XebVerification xeb_verify_device(const DeviceModel& d, const NoiseModel& noise, const XebVerifyOptions& opt,
                                  Rng& rng) {
  if (opt.n < 2) throw PreconditionError("XEB verification needs n >= 2");
  if (opt.n > kDefaultQubitCap) throw CapacityError(opt.n, kDefaultQubitCap);
  if (opt.circuits < 1) throw PreconditionError("XEB verification needs at least one circuit");
  require_shots(opt.shots);
  XebVerification r;
  r.n = opt.n;
  r.depth = opt.depth > 0 ? opt.depth : std::max(opt.n, 8);
  r.threshold = opt.threshold;
  std::vector<double> alphas, ratios;
  std::uint64_t total = 0;
  for (int i = 0; i < opt.circuits; ++i) {
    Rng item = rng.substream(static_cast<std::uint64_t>(i));
    Rng gen = item.substream(0);
    Rng run = item.substream(1);
    Circuit c = xeb_circuit(opt.n, r.depth, gen);
    ProbDist ideal = ideal_distribution(c);
    SampleSet s = execute_circuit(c, d, noise, opt.transpile, opt.shots, run,
                                  static_cast<std::uint64_t>(i) * opt.shots, kDefaultQubitCap,
                                  i == 0 ? &r.pass_log : nullptr);
    XebCircuitRecord rec;
    rec.seed = {item.seed(), item.stream()};
    rec.shots = s.shots();
    rec.alpha = xeb_alpha(s, ideal).alpha;
    rec.ideal = xeb_expected_ideal(ideal);
    alphas.push_back(rec.alpha);
    ratios.push_back(rec.alpha / rec.ideal);
    total += rec.shots;
    r.items.push_back(rec);
  }
  r.alpha_mean = mean_of(alphas);
  r.std_error = 1.0 / std::sqrt(static_cast<double>(total));
  r.fidelity = mean_of(ratios);
  r.verified = r.fidelity >= r.threshold;
  return r;
}

}  // namespace qbench
