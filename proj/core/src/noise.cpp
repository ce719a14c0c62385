#include "qbench/noise.hpp"

#include <algorithm>

#include "qbench/error.hpp"

namespace qbench {

NoiseModel NoiseModel::from_device(const DeviceModel& d) {
  NoiseModel n;
  n.gate_error = d.gate_error;
  n.edge_error = d.edge_error;
  n.readout_error = d.readout_error;
  n.drift = d.drift;
  return n;
}

NoiseModel NoiseModel::scaled(double factor) const {
  if (!(factor >= 0.0)) throw PreconditionError("noise scale must be nonnegative");
  NoiseModel out = *this;
  for (auto& [k, p] : out.gate_error) p = std::clamp(p * factor, 0.0, 1.0);
  for (auto& [k, p] : out.edge_error) p = std::clamp(p * factor, 0.0, 1.0);
  return out;
}

double NoiseModel::gate_rate(const Gate& g) const {
  if (g.kind == GateKind::Measure) return 0.0;
  if (is_two_qubit_unitary(g.kind) && !edge_error.empty()) {
    auto key = std::minmax(g.targets[0], g.targets[1]);
    auto it = edge_error.find({key.first, key.second});
    if (it != edge_error.end()) return it->second;
  }
  auto it = gate_error.find(g.kind);
  return it == gate_error.end() ? 0.0 : it->second;
}

double NoiseModel::readout_rate(int qubit) const {
  if (qubit < 0 || static_cast<std::size_t>(qubit) >= readout_error.size()) return 0.0;
  return readout_error[static_cast<std::size_t>(qubit)];
}

bool NoiseModel::has_gate_noise() const {
  auto positive = [](const auto& kv) { return kv.second > 0.0; };
  return std::any_of(gate_error.begin(), gate_error.end(), positive) ||
         std::any_of(edge_error.begin(), edge_error.end(), positive) ||
         (drift && (std::any_of(drift->cycle.begin(), drift->cycle.end(),
                                [](double c) { return c != 0.0; }) ||
                    drift->noise_std > 0.0));
}

bool NoiseModel::has_readout_noise() const {
  return std::any_of(readout_error.begin(), readout_error.end(), [](double p) { return p > 0.0; });
}

void NoiseModel::validate() const {
  auto check = [](double p) {
    if (!(p >= 0.0 && p <= 1.0)) throw PreconditionError("noise probability outside [0, 1]");
  };
  for (const auto& [k, p] : gate_error) check(p);
  for (const auto& [k, p] : edge_error) check(p);
  for (double p : readout_error) check(p);
  if (drift) drift->validate();
}

FaultSampler::FaultSampler(const std::vector<Gate>& ops, const NoiseModel& noise)
    : drift_(noise.drift) {
  noise.validate();
  for (std::size_t i = 0; i < ops.size(); ++i) {
    const Gate& g = ops[i];
    if (g.kind == GateKind::Measure) throw PreconditionError("fault sites exclude measurements");
    Site site;
    site.op = static_cast<std::uint32_t>(i);
    site.targets = g.targets;
    site.base = noise.gate_rate(g);
    site.drifts = drift_.has_value() && (g.is_unitary() || site.base > 0.0);
    if (g.kind == GateKind::PauliLayer || g.targets.size() > 2)
      site.channel = Channel::PerQubit;
    else
      site.channel = g.targets.size() == 2 ? Channel::Two : Channel::One;
    if (site.base <= 0.0 && !site.drifts) continue;
    sites_.push_back(std::move(site));
  }
  active_ = !sites_.empty();
}

void FaultSampler::draw(std::uint64_t shot_index, Rng& rng, std::vector<PauliFault>& out) {
  static constexpr char kLetters[] = "IXYZ";
  out.clear();
  double offset = 0.0;
  if (drift_) {
    offset = drift_->cycle[shot_index % drift_->period()];
    if (drift_->noise_std > 0.0) offset += drift_->noise_std * counter_normal(drift_->seed, shot_index);
  }
  for (const Site& s : sites_) {
    double p = s.drifts ? std::clamp(s.base + offset, 0.0, 1.0) : s.base;
    if (p <= 0.0) continue;
    switch (s.channel) {
      case Channel::One:
        if (rng.uniform() < p) {
          std::uint64_t k = rng.below(4);
          if (k != 0) out.push_back({s.op, s.targets[0], kLetters[k]});
        }
        break;
      case Channel::Two:
        if (rng.uniform() < p) {
          std::uint64_t k = rng.below(16);
          if (k / 4 != 0) out.push_back({s.op, s.targets[0], kLetters[k / 4]});
          if (k % 4 != 0) out.push_back({s.op, s.targets[1], kLetters[k % 4]});
        }
        break;
      case Channel::PerQubit:
        for (int q : s.targets)
          if (rng.uniform() < p) {
            std::uint64_t k = rng.below(4);
            if (k != 0) out.push_back({s.op, q, kLetters[k]});
          }
        break;
    }
  }
}

}  // namespace qbench
