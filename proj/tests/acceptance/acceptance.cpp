// Acceptance suite: each criterion prints one PASS/FAIL line; any failure
// makes the process exit nonzero.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "qbench/linalg.hpp"
#include "qbench/metrics.hpp"
#include "qbench/protocols.hpp"
#include "qbench/randgen.hpp"
#include "qbench/report.hpp"
#include "qbench/serialize.hpp"
#include "qbench/stabilizer.hpp"
#include "qbench/statevector.hpp"
#include "qbench/transpile.hpp"
#include "test_util.hpp"

using namespace qbench;

namespace {

struct Verdict {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << "[violated: " << what << "] ";
    }
  }
};

double mean_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double sample_std(const std::vector<double>& v) {
  const double m = mean_of(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return std::sqrt(s / static_cast<double>(v.size() - 1));
}

std::vector<double> empirical_vector(const SampleSet& s) {
  return s.empirical().probs();
}

// 1. HOG constants at n = 6.
void hog_constants(Verdict& v) {
  const int circuits = 300;
  const std::uint64_t shots = 1000;
  Rng rng(101);
  std::vector<double> ideal_hog, uniform_hog;
  const ProbDist flat = ProbDist::uniform(6);
  for (int i = 0; i < circuits; ++i) {
    Rng item = rng.substream(static_cast<std::uint64_t>(i));
    Rng gen = item.substream(0), run = item.substream(1), unif = item.substream(2);
    const ProbDist p = ideal_distribution(qv_model_circuit(6, gen));
    ideal_hog.push_back(hog_probability(sample_distribution(p, shots, run), p));
    uniform_hog.push_back(hog_probability(sample_distribution(flat, shots, unif), p));
  }
  const double hi = mean_of(ideal_hog), hu = mean_of(uniform_hog);
  v.detail << "circuits=" << circuits << " ideal=" << hi << " uniform=" << hu << " ";
  v.require(hi >= 0.826 && hi <= 0.866, "ideal HOG in [0.826, 0.866]");
  v.require(hu >= 0.49 && hu <= 0.51, "uniform HOG in [0.49, 0.51]");
}

// 2. Quantum volume end to end on a 5-qubit line.
void quantum_volume(Verdict& v) {
  const DeviceModel d = devices::line(5);
  QvOptions opt;
  opt.min_width = 2;
  opt.max_width = 5;
  opt.circuits_per_width = 100;
  opt.shots = 1000;
  opt.strict = true;
  Rng clean_rng(202);
  const QvResult clean = run_quantum_volume(d, NoiseModel{}, opt, clean_rng);
  NoiseModel noisy_model;
  noisy_model.gate_error[GateKind::CX] = 0.05;
  Rng noisy_rng(202);
  const QvResult noisy = run_quantum_volume(d, noisy_model, opt, noisy_rng);

  v.detail << "noiseless QV=" << clean.qv << " noisy QV=" << noisy.qv << " ";
  v.require(clean.qv == 32 && clean.conformant, "noiseless QV = 32");
  for (const auto& w : clean.widths) v.require(w.pass, "noiseless width " + std::to_string(w.width) + " passes");
  v.require(noisy.qv < clean.qv, "QV strictly lower under 2q depolarizing 0.05");

  // The drop must be resolved statistically: at the first width the noisy run
  // fails, its mean HOG sits more than 3 sigma below the noiseless one.
  for (std::size_t i = 0; i < noisy.widths.size(); ++i) {
    if (noisy.widths[i].pass) continue;
    std::vector<double> a, b;
    for (const auto& it : clean.widths[i].items) a.push_back(it.hog);
    for (const auto& it : noisy.widths[i].items) b.push_back(it.hog);
    const double gap = mean_of(a) - mean_of(b);
    const double sigma = std::hypot(sample_std(a), sample_std(b)) / std::sqrt(static_cast<double>(a.size()));
    v.detail << "width " << noisy.widths[i].width << " HOG gap=" << gap << " (" << gap / sigma << " sigma) ";
    v.require(gap > 3.0 * sigma, "HOG drop exceeds 3 sigma");
    break;
  }
}

// 3. XEB calibration at n = 8 with 1e5 samples.
void xeb_calibration(Verdict& v) {
  const std::uint64_t m = 100000;
  Rng rng(303);
  Rng gen = rng.substream(0), run = rng.substream(1), unif = rng.substream(2);
  const ProbDist p = ideal_distribution(xeb_circuit(8, 8, gen));
  const double expected = xeb_expected_ideal(p);
  const double ideal = xeb_alpha(sample_distribution(p, m, run), p).alpha;
  const double uniform = xeb_alpha(sample_distribution(ProbDist::uniform(8), m, unif), p).alpha;
  const double band = 3.0 / std::sqrt(static_cast<double>(m));
  v.detail << "expected=" << expected << " ideal=" << ideal << " uniform=" << uniform << " band=" << band << " ";
  v.require(std::abs(ideal - expected) <= band, "ideal alpha within 3/sqrt(m) of the exact constant");
  v.require(std::abs(uniform) <= band, "uniform alpha within 0 +/- 3/sqrt(m)");
}

// 4. Collision volume at n = 14.
void collision(Verdict& v) {
  const int n = 14, runs = 50;
  const DeviceModel d = devices::all_to_all(n);
  NoiseModel flat;
  flat.readout_error.assign(static_cast<std::size_t>(n), 0.5);
  std::vector<double> ideal, uniform;
  int ideal_pass = 0, uniform_pass = 0;
  std::uint64_t shots = 0;
  for (int r = 0; r < runs; ++r) {
    Rng a(404, static_cast<std::uint64_t>(r)), b(405, static_cast<std::uint64_t>(r));
    const CollisionTestResult ri = run_collision_test(d, NoiseModel{}, n, a);
    const CollisionTestResult ru = run_collision_test(d, flat, n, b);
    ideal.push_back(ri.stats.volume);
    uniform.push_back(ru.stats.volume);
    ideal_pass += ri.pass ? 1 : 0;
    uniform_pass += ru.pass ? 1 : 0;
    shots = ri.stats.shots;
  }
  const double mi = mean_of(ideal), mu = mean_of(uniform);
  v.detail << "m=" << shots << " ideal=" << mi << " (sd " << sample_std(ideal) << ", pass " << ideal_pass << "/"
           << runs << ") uniform=" << mu << " (sd " << sample_std(uniform) << ", pass " << uniform_pass << "/" << runs
           << ") ";
  v.require(shots == 4096, "m = 4096");
  v.require(mi >= 0.8 && mi <= 1.2, "ideal mean in [0.8, 1.2]");
  v.require(mu >= -0.2 && mu <= 0.2, "uniform mean in [-0.2, 0.2]");
  v.require(ideal_pass == runs, "every ideal run passes");
  v.require(uniform_pass == 0, "every uniform run fails");
}

// 5. Noiseless mirror circuits succeed with certainty.
void mirror_ceiling(Verdict& v) {
  MirrorOptions opt;
  opt.widths = {6, 20, 50};
  opt.depths = {4};
  opt.randomizations = 20;
  opt.shots = 100;
  Rng rng(505);
  const MirrorResult r = run_mirror_benchmark(devices::line(50), NoiseModel{}, opt, rng);
  std::size_t perfect = 0;
  for (const auto& it : r.items) perfect += it.successes == it.shots ? 1 : 0;
  v.detail << "circuits=" << r.items.size() << " perfect=" << perfect << " ";
  v.require(r.items.size() == 60, "20 bases per width");
  v.require(perfect == r.items.size(), "success = 1.0 for every circuit");
  for (const auto& pt : r.points) v.require(pt.success == 1.0, "width " + std::to_string(pt.width) + " success 1.0");
}

// Error per Clifford of the one-qubit Pauli channel with total probability p
// (identity included), computed on a density matrix.
double rb_oracle(double p) {
  const Mat2 paulis[4] = {Mat2::Identity(), single_qubit_matrix(GateKind::X),
                          single_qubit_matrix(GateKind::Y), single_qubit_matrix(GateKind::Z)};
  const Mat2& z = paulis[3];
  Mat2 out = (1.0 - p) * z;
  for (const auto& q : paulis) out += (p / 4.0) * q * z * q.adjoint();
  const double lambda = (z * out).trace().real() / 2.0;
  return (1.0 - lambda) / 2.0;
}

// 6. RB recovers an injected per-Clifford depolarizing rate.
void rb_recovery(Verdict& v) {
  const double p = 0.01;
  NoiseModel noise;
  noise.gate_error[GateKind::Barrier] = p;
  RbOptions opt;
  opt.lengths = {2, 4, 8, 16, 32, 64, 128};
  opt.sequences_per_length = 30;
  opt.shots = 200;
  Rng rng(606);
  const RbResult r = run_rb(devices::line(1), noise, opt, rng);
  const double oracle = rb_oracle(p);
  v.detail << "r=" << r.error_per_clifford << " oracle=" << oracle << " ";
  v.require(std::abs(r.error_per_clifford - oracle) <= 0.2 * oracle, "r within 20% of the oracle");
}

// 7. Stabilizer against statevector, and transpiled against original.
void simulator_cross_oracle(Verdict& v) {
  const std::uint64_t shots = 4000;
  Rng rng(707);
  int agree = 0;
  double worst = 0.0;
  for (int i = 0; i < 50; ++i) {
    Rng item = rng.substream(static_cast<std::uint64_t>(i));
    const int n = 2 + static_cast<int>(item.below(7));
    Rng gen = item.substream(0), a = item.substream(1), b = item.substream(2);
    const Circuit c = qbench::testing::random_program(n, 12 * n, gen, true);
    const auto stab = empirical_vector(stabilizer_sample(c, shots, a));
    const auto sv = empirical_vector(sample_counts(c, shots, b));
    const auto exact = ideal_distribution(c).probs();
    // Each empirical distribution obeys the per-sample bound; the two together
    // obey twice that.
    const double bound = 2.0 * qbench::testing::tvd_sampling_bound(exact, shots);
    const double d = qbench::testing::tvd(stab, sv);
    worst = std::max(worst, d / bound);
    agree += d <= bound ? 1 : 0;
  }
  v.detail << "clifford agree=" << agree << "/50 worst tvd/bound=" << worst << " ";
  v.require(agree == 50, "stabilizer and statevector samples agree");

  double max_diff = 0.0;
  int checked = 0;
  for (int n = 2; n <= 6; ++n) {
    const DeviceModel d = devices::line(n);
    for (int k = 0; k < 10; ++k) {
      Rng gen = rng.substream(1000 + static_cast<std::uint64_t>(10 * n + k));
      const Circuit c = qbench::testing::random_program(n, 10 * n, gen);
      const TranspileResult t = run_pipeline(c, d, TranspileConfig{});
      const auto a = ideal_distribution(c).probs();
      const auto b = ideal_distribution(t.circuit).probs();
      for (std::size_t i = 0; i < a.size(); ++i) max_diff = std::max(max_diff, std::abs(a[i] - b[i]));
      ++checked;
    }
  }
  v.detail << "transpiled=" << checked << " max |dp|=" << max_diff << " ";
  v.require(max_diff <= 1e-8, "transpiled ideal distributions within 1e-8");
}

// 8. Classical shadows on GHZ(3).
void shadows(Verdict& v) {
  const std::uint64_t snapshots = 10000;
  Rng rng(808);
  const ShadowResult r =
      shadow_estimate(ghz_circuit(3), {PauliString::parse("+ZZI"), PauliString::parse("+ZII")}, snapshots, rng);
  const double truth[2] = {1.0, 0.0};
  for (std::size_t i = 0; i < 2; ++i) {
    const auto& e = r.estimates[i];
    const double bound = std::pow(3.0, e.weight) / static_cast<double>(snapshots);
    v.detail << e.observable.letters() << "=" << e.estimate << " ";
    v.require(std::abs(e.estimate - truth[i]) <= 3.0 * std::sqrt(bound), e.observable.letters() + " within 3 sqrt(3^k/N)");
    v.require(e.variance_bound == bound, e.observable.letters() + " variance bound equals 3^k/N");
  }
}

// 9. Reproducibility and perturbation detection.
void reproducibility(Verdict& v) {
  const RunConfig cfg = load_run_config(qbench::testing::data_path("suite_small.json"));
  const Json a = to_json(run_benchmark_suite(cfg));
  const Json b = to_json(run_benchmark_suite(cfg));
  const bool same = canonical_json(strip_timing_fields(a)) == canonical_json(strip_timing_fields(b));
  v.require(same, "identical reports modulo timing");
  const SelfVerifyResult clean = self_verify_report(a);
  v.require(clean.ok(), "unmodified report verifies");

  Json tampered = a;
  Json& hog = tampered["base"][0]["repetitions"][0]["aggregate"]["widths"][0]["mean_hog"];
  hog = hog.get<double>() + 1e-3;
  const SelfVerifyResult bad = self_verify_report(tampered);
  v.detail << "identical=" << (same ? "yes" : "no") << " clean=" << verify_status_name(clean.status)
           << " perturbed=" << verify_status_name(bad.status) << " ";
  v.require(bad.status == VerifyStatus::Discrepancies, "1e-3 perturbation detected");
}

// 10. Shot plan from the binomial Cramer-Rao bound.
void shot_plan(Verdict& v) {
  const ShotPlan plan = shots_for_precision(0.5, 0.005);
  Circuit c(1);
  c.append(gates::single(GateKind::H, 0));
  std::vector<double> estimates;
  Rng rng(1010);
  for (int t = 0; t < 1000; ++t) {
    Rng trial = rng.substream(static_cast<std::uint64_t>(t));
    const SampleSet s = sample_counts(c, plan.shots, trial);
    estimates.push_back(static_cast<double>(s.count("1")) / static_cast<double>(plan.shots));
  }
  const double sd = sample_std(estimates);
  v.detail << "m=" << plan.shots << " mc std=" << sd << " ";
  v.require(plan.shots == 10000, "m = 10000");
  v.require(sd <= 0.0055, "Monte Carlo std <= 0.0055");
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<void(Verdict&)>>> criteria = {
      {"HOG constants", hog_constants},
      {"quantum volume end to end", quantum_volume},
      {"XEB calibration", xeb_calibration},
      {"collision volume", collision},
      {"mirror ceiling", mirror_ceiling},
      {"RB recovery", rb_recovery},
      {"simulator cross-oracle", simulator_cross_oracle},
      {"classical shadows", shadows},
      {"reproducibility and self-verification", reproducibility},
      {"shot plan", shot_plan},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Verdict v;
    const auto start = std::chrono::steady_clock::now();
    try {
      criteria[i].second(v);
    } catch (const std::exception& e) {
      v.pass = false;
      v.detail << "exception: " << e.what() << " ";
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("[%s] criterion %zu %s: %s(%.1fs)\n", v.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                v.detail.str().c_str(), secs);
    std::fflush(stdout);
    failures += v.pass ? 0 : 1;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
