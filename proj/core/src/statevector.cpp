#include "qbench/statevector.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "qbench/error.hpp"

namespace qbench {

namespace {

// Index with zero bits inserted at positions lo < hi.
inline std::size_t insert_two_zeros(std::size_t k, int lo, int hi) {
  std::size_t low_mask = (std::size_t{1} << lo) - 1;
  std::size_t i = (k & low_mask) | ((k & ~low_mask) << 1);
  std::size_t hi_mask = (std::size_t{1} << hi) - 1;
  return (i & hi_mask) | ((i & ~hi_mask) << 1);
}

bool is_diagonal(const Mat2& u) { return std::abs(u(0, 1)) == 0.0 && std::abs(u(1, 0)) == 0.0; }

void check_final_measurements(const Circuit& c) {
  const auto& layers = c.layers();
  for (std::size_t l = 0; l + 1 < layers.size(); ++l)
    for (const auto& g : layers[l])
      if (g.kind == GateKind::Measure)
        throw UnsupportedError("mid-circuit measurement is not supported by the simulators");
}

}  // namespace

StateVector::StateVector(int n_qubits) : n_(n_qubits) {
  if (n_qubits < 0 || n_qubits > 30) throw CapacityError(n_qubits, 30);
  amps_.assign(std::size_t{1} << n_qubits, cplx(0.0, 0.0));
  amps_[0] = 1.0;
}

void StateVector::apply_1q(const Mat2& u, int q) {
  const std::size_t stride = std::size_t{1} << q;
  const std::size_t n = amps_.size();
  cplx* a = amps_.data();
  if (is_diagonal(u)) {
    const cplx d0 = u(0, 0), d1 = u(1, 1);
    for (std::size_t i = 0; i < n; ++i) a[i] *= (i & stride) ? d1 : d0;
    return;
  }
  const cplx u00 = u(0, 0), u01 = u(0, 1), u10 = u(1, 0), u11 = u(1, 1);
  for (std::size_t base = 0; base < n; base += 2 * stride) {
    for (std::size_t j = base; j < base + stride; ++j) {
      cplx x0 = a[j], x1 = a[j + stride];
      a[j] = u00 * x0 + u01 * x1;
      a[j + stride] = u10 * x0 + u11 * x1;
    }
  }
}

void StateVector::apply_2q(const Mat4& u, int q0, int q1) {
  if (q0 == q1) throw PreconditionError("two-qubit gate on a repeated qubit");
  const std::size_t m0 = std::size_t{1} << q0, m1 = std::size_t{1} << q1;
  const int lo = std::min(q0, q1), hi = std::max(q0, q1);
  const std::size_t quarter = amps_.size() >> 2;
  cplx* a = amps_.data();
  cplx m[4][4];
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) m[r][c] = u(r, c);
  for (std::size_t k = 0; k < quarter; ++k) {
    std::size_t i = insert_two_zeros(k, lo, hi);
    std::size_t idx[4] = {i, i | m1, i | m0, i | m0 | m1};
    cplx x[4] = {a[idx[0]], a[idx[1]], a[idx[2]], a[idx[3]]};
    for (int r = 0; r < 4; ++r)
      a[idx[r]] = m[r][0] * x[0] + m[r][1] * x[1] + m[r][2] * x[2] + m[r][3] * x[3];
  }
}

void StateVector::apply_pauli(char letter, int q) {
  const std::size_t mask = std::size_t{1} << q;
  const std::size_t n = amps_.size();
  cplx* a = amps_.data();
  switch (letter) {
    case 'I':
      return;
    case 'X':
      for (std::size_t i = 0; i < n; ++i)
        if (!(i & mask)) std::swap(a[i], a[i | mask]);
      return;
    case 'Z':
      for (std::size_t i = 0; i < n; ++i)
        if (i & mask) a[i] = -a[i];
      return;
    case 'Y': {
      const cplx I(0.0, 1.0);
      for (std::size_t i = 0; i < n; ++i) {
        if (i & mask) continue;
        cplx x0 = a[i], x1 = a[i | mask];
        a[i] = -I * x1;
        a[i | mask] = I * x0;
      }
      return;
    }
    default:
      throw PreconditionError("unknown Pauli letter '" + std::string(1, letter) + "'");
  }
}

void StateVector::apply_cx(int control, int target) {
  const std::size_t mc = std::size_t{1} << control, mt = std::size_t{1} << target;
  const std::size_t n = amps_.size();
  for (std::size_t i = 0; i < n; ++i)
    if ((i & mc) && !(i & mt)) std::swap(amps_[i], amps_[i | mt]);
}

void StateVector::apply_cz(int a, int b) {
  const std::size_t m = (std::size_t{1} << a) | (std::size_t{1} << b);
  const std::size_t n = amps_.size();
  for (std::size_t i = 0; i < n; ++i)
    if ((i & m) == m) amps_[i] = -amps_[i];
}

void StateVector::apply_swap(int a, int b) {
  const std::size_t ma = std::size_t{1} << a, mb = std::size_t{1} << b;
  const std::size_t n = amps_.size();
  for (std::size_t i = 0; i < n; ++i)
    if ((i & ma) && !(i & mb)) std::swap(amps_[i], amps_[(i & ~ma) | mb]);
}

void StateVector::apply(const Gate& g, const std::vector<int>& map) {
  auto q = [&](int t) {
    int s = map.empty() ? t : map.at(static_cast<std::size_t>(t));
    if (s < 0 || s >= n_) throw PreconditionError("gate target outside the simulated register");
    return s;
  };
  switch (g.kind) {
    case GateKind::Barrier:
      return;
    case GateKind::Measure:
      throw PreconditionError("measurement cannot be applied to a state vector");
    case GateKind::CX:
      apply_cx(q(g.targets[0]), q(g.targets[1]));
      return;
    case GateKind::CZ:
      apply_cz(q(g.targets[0]), q(g.targets[1]));
      return;
    case GateKind::SWAP:
      apply_swap(q(g.targets[0]), q(g.targets[1]));
      return;
    case GateKind::U2Q:
      apply_2q(*g.unitary, q(g.targets[0]), q(g.targets[1]));
      return;
    case GateKind::PauliLayer:
      for (std::size_t i = 0; i < g.targets.size(); ++i) apply_pauli(g.paulis[i], q(g.targets[i]));
      return;
    default:
      apply_1q(single_qubit_matrix(g.kind, g.angle), q(g.targets[0]));
  }
}

double StateVector::norm_squared() const {
  double s = 0.0;
  for (const auto& a : amps_) s += std::norm(a);
  return s;
}

std::vector<double> StateVector::probabilities() const {
  std::vector<double> p(amps_.size());
  for (std::size_t i = 0; i < amps_.size(); ++i) p[i] = std::norm(amps_[i]);
  return p;
}

StateVector final_state(const Circuit& c, int cap) {
  if (c.n_qubits() > cap) throw CapacityError(c.n_qubits(), cap);
  StateVector sv(c.n_qubits());
  c.for_each_gate([&](const Gate& g) {
    if (g.kind != GateKind::Measure) sv.apply(g);
  });
  return sv;
}

// ---------------------------------------------------------------------------

namespace {

struct Op {
  Gate physical;
  Gate gate;  // targets mapped to state qubits, -1 when inactive
  bool unitary = false;
};

struct Readout {
  int cbit;
  double rate;
};

constexpr std::size_t kCheckpointBudget = std::size_t{64} << 20;

}  // namespace

struct Simulator::Impl {
  int n_clbits = 0;
  int cap = kDefaultQubitCap;
  int active = 0;
  std::vector<int> map;  // circuit qubit -> state qubit or -1
  std::vector<Op> ops;
  std::vector<std::pair<int, int>> measured;  // (circuit qubit, cbit)
  std::vector<StateVector> checkpoints;       // state before op k*stride, k >= 1
  std::size_t stride = 1;
  std::vector<double> cdf;                    // over state indices of the ideal state

  std::uint64_t outcome_of(std::size_t s) const {
    std::uint64_t out = 0;
    for (const auto& [q, cb] : measured) {
      int sq = map[static_cast<std::size_t>(q)];
      if (sq >= 0 && ((s >> sq) & 1U)) out |= std::uint64_t{1} << cb;
    }
    return out;
  }

  void apply_op(StateVector& sv, const Op& op) const {
    if (!op.unitary) return;
    sv.apply(op.gate);
  }
};

Simulator::Simulator(const Circuit& c, int cap) : impl_(std::make_unique<Impl>()) {
  c.validate();
  check_final_measurements(c);
  Impl& im = *impl_;
  im.n_clbits = c.n_clbits();
  im.cap = cap;
  im.map.assign(static_cast<std::size_t>(c.n_qubits()), -1);

  std::vector<bool> touched(static_cast<std::size_t>(c.n_qubits()), false);
  c.for_each_gate([&](const Gate& g) {
    if (g.is_unitary())
      for (int t : g.targets) touched[static_cast<std::size_t>(t)] = true;
  });
  for (int q = 0; q < c.n_qubits(); ++q)
    if (touched[static_cast<std::size_t>(q)]) im.map[static_cast<std::size_t>(q)] = im.active++;
  if (im.active > cap) throw CapacityError(im.active, cap);

  im.measured = c.measurement_map();
  if (im.n_clbits > 62) throw CapacityError(im.n_clbits, 62);

  c.for_each_gate([&](const Gate& g) {
    if (g.kind == GateKind::Measure) return;
    Op op;
    op.physical = g;
    op.gate = g;
    for (int& t : op.gate.targets) t = im.map[static_cast<std::size_t>(t)];
    op.unitary = g.is_unitary();
    if (g.kind == GateKind::Barrier && std::none_of(op.gate.targets.begin(), op.gate.targets.end(),
                                                    [](int t) { return t >= 0; }))
      return;
    im.ops.push_back(std::move(op));
  });

  StateVector sv(im.active);
  std::size_t bytes = sizeof(cplx) << im.active;
  std::size_t max_ckpt = std::max<std::size_t>(1, kCheckpointBudget / bytes);
  im.stride = std::max<std::size_t>(1, (im.ops.size() + max_ckpt - 1) / max_ckpt);
  for (std::size_t i = 0; i < im.ops.size(); ++i) {
    if (i > 0 && i % im.stride == 0 && im.checkpoints.size() + 1 < max_ckpt) im.checkpoints.push_back(sv);
    im.apply_op(sv, im.ops[i]);
  }
  im.cdf.resize(sv.amplitudes().size());
  double acc = 0.0;
  for (std::size_t i = 0; i < im.cdf.size(); ++i) {
    acc += std::norm(sv.amplitudes()[i]);
    im.cdf[i] = acc;
  }
}

Simulator::~Simulator() = default;
Simulator::Simulator(Simulator&&) noexcept = default;
Simulator& Simulator::operator=(Simulator&&) noexcept = default;

int Simulator::n_clbits() const { return impl_->n_clbits; }
int Simulator::active_qubits() const { return impl_->active; }

ProbDist Simulator::ideal() const {
  const Impl& im = *impl_;
  if (im.n_clbits > im.cap) throw CapacityError(im.n_clbits, im.cap);
  std::vector<double> p(std::size_t{1} << im.n_clbits, 0.0);
  double prev = 0.0;
  for (std::size_t s = 0; s < im.cdf.size(); ++s) {
    double ps = im.cdf[s] - prev;
    prev = im.cdf[s];
    if (ps != 0.0) p[im.outcome_of(s)] += std::max(ps, 0.0);
  }
  double total = im.cdf.empty() ? 1.0 : im.cdf.back();
  for (double& v : p) v /= total;
  return ProbDist(im.n_clbits, std::move(p));
}

SampleSet Simulator::sample(std::uint64_t shots, Rng& rng) const {
  return sample(shots, NoiseModel{}, rng);
}

SampleSet Simulator::sample(std::uint64_t shots, const NoiseModel& noise, Rng& rng,
                            std::uint64_t first_shot) const {
  if (shots == 0) throw PreconditionError("shot count must be positive");
  const Impl& im = *impl_;
  std::vector<Gate> physical;
  physical.reserve(im.ops.size());
  for (const Op& op : im.ops) physical.push_back(op.physical);
  FaultSampler faults(physical, noise);

  std::vector<Readout> readouts;
  for (const auto& [q, cb] : im.measured) {
    double r = noise.readout_rate(q);
    if (r > 0.0) readouts.push_back({cb, r});
  }

  std::unordered_map<std::uint64_t, std::uint64_t> counts;
  std::vector<PauliFault> flips;
  for (std::uint64_t shot = 0; shot < shots; ++shot) {
    flips.clear();
    if (faults.active()) {
      faults.draw(first_shot + shot, rng, flips);
      std::erase_if(flips, [&](const PauliFault& f) { return im.map[static_cast<std::size_t>(f.qubit)] < 0; });
    }
    std::uint64_t outcome = 0;
    if (flips.empty()) {
      double u = rng.uniform() * im.cdf.back();
      auto it = std::upper_bound(im.cdf.begin(), im.cdf.end(), u);
      std::size_t s = std::min<std::size_t>(static_cast<std::size_t>(it - im.cdf.begin()), im.cdf.size() - 1);
      outcome = im.outcome_of(s);
    } else {
      std::size_t start_ckpt = std::min<std::size_t>(flips.front().op / im.stride, im.checkpoints.size());
      StateVector sv = start_ckpt == 0 ? StateVector(im.active) : im.checkpoints[start_ckpt - 1];
      std::size_t f = 0;
      for (std::size_t k = start_ckpt * im.stride; k < im.ops.size(); ++k) {
        im.apply_op(sv, im.ops[k]);
        for (; f < flips.size() && flips[f].op == k; ++f)
          sv.apply_pauli(flips[f].letter, im.map[static_cast<std::size_t>(flips[f].qubit)]);
      }
      double u = rng.uniform() * sv.norm_squared();
      const auto& a = sv.amplitudes();
      double acc = 0.0;
      std::size_t s = a.size() - 1;
      for (std::size_t i = 0; i < a.size(); ++i) {
        acc += std::norm(a[i]);
        if (u < acc) {
          s = i;
          break;
        }
      }
      outcome = im.outcome_of(s);
    }
    for (const auto& r : readouts)
      if (rng.uniform() < r.rate) outcome ^= std::uint64_t{1} << r.cbit;
    ++counts[outcome];
  }

  SampleSet out(im.n_clbits);
  for (const auto& [k, v] : counts) out.add_index(k, v);
  return out;
}

ProbDist ideal_distribution(const Circuit& c, int cap) {
  return Simulator(c, cap).ideal();
}

SampleSet sample_counts(const Circuit& c, std::uint64_t shots, const NoiseModel& noise, Rng& rng,
                        int cap) {
  if (shots == 0) throw PreconditionError("shot count must be positive");
  return Simulator(c, cap).sample(shots, noise, rng);
}

SampleSet sample_counts(const Circuit& c, std::uint64_t shots, Rng& rng, int cap) {
  return sample_counts(c, shots, NoiseModel{}, rng, cap);
}

SampleSet sample_distribution(const ProbDist& p, std::uint64_t shots, Rng& rng) {
  if (shots == 0) throw PreconditionError("shot count must be positive");
  std::vector<double> cdf(p.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) cdf[i] = (acc += p[i]);
  std::unordered_map<std::uint64_t, std::uint64_t> counts;
  for (std::uint64_t s = 0; s < shots; ++s) {
    double u = rng.uniform() * acc;
    auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    ++counts[std::min<std::size_t>(static_cast<std::size_t>(it - cdf.begin()), cdf.size() - 1)];
  }
  SampleSet out(p.n_bits());
  for (const auto& [k, v] : counts) out.add_index(k, v);
  return out;
}

}  // namespace qbench
