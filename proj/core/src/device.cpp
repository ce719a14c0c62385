#include "qbench/device.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

#include "qbench/error.hpp"
#include "qbench/rng.hpp"

namespace qbench {

void DriftSchedule::validate() const {
  if (cycle.empty()) throw PreconditionError("drift schedule period must be at least 1");
  if (!(noise_std >= 0.0)) throw PreconditionError("drift noise std must be nonnegative");
}

double drift_rate_at(const DriftSchedule& schedule, double base_rate, std::uint64_t shot_index) {
  schedule.validate();
  double c = schedule.cycle[shot_index % schedule.period()];
  double z = 0.0;
  if (schedule.noise_std > 0.0) z = schedule.noise_std * counter_normal(schedule.seed, shot_index);
  return std::clamp(base_rate + c + z, 0.0, 1.0);
}

namespace {

void check_probability(double p, const std::string& what) {
  if (!(p >= 0.0 && p <= 1.0)) throw PreconditionError(what + " must lie in [0, 1]");
}

}  // namespace

void DeviceModel::validate() const {
  if (n_qubits < 0) throw PreconditionError("device qubit count is negative");
  auto n = static_cast<std::size_t>(n_qubits);
  if (working.size() != n) throw PreconditionError("working flags must cover every qubit");
  for (const auto& e : edges) {
    if (e.a < 0 || e.b < 0 || e.a >= n_qubits || e.b >= n_qubits || e.a == e.b)
      throw PreconditionError("coupling (" + std::to_string(e.a) + "," + std::to_string(e.b) +
                              ") is invalid");
    check_probability(e.strength, "coupling strength");
  }
  for (const auto& [k, p] : gate_error) check_probability(p, "gate error");
  for (const auto& [k, p] : edge_error) check_probability(p, "edge error");
  for (const auto& [k, t] : gate_duration)
    if (!(t >= 0.0)) throw PreconditionError("gate duration must be nonnegative");
  if (!t1.empty() && t1.size() != n) throw PreconditionError("T1 must cover every qubit");
  if (!t2.empty() && t2.size() != n) throw PreconditionError("T2 must cover every qubit");
  if (!t1.empty() && !t2.empty())
    for (std::size_t q = 0; q < n; ++q)
      if (t2[q] > 2.0 * t1[q] * (1 + 1e-12))
        throw PreconditionError("qubit " + std::to_string(q) + " violates T2 <= 2 T1");
  if (!readout_error.empty() && readout_error.size() != n)
    throw PreconditionError("readout error must cover every qubit");
  for (double p : readout_error) check_probability(p, "readout error");
  if (drift) drift->validate();
}

bool DeviceModel::coupled(int a, int b) const {
  if (!is_working(a) || !is_working(b)) return false;
  for (const auto& e : edges)
    if (e.strength > 0.0 && ((e.a == a && e.b == b) || (e.a == b && e.b == a))) return true;
  return false;
}

std::vector<std::vector<int>> DeviceModel::adjacency() const {
  std::vector<std::vector<int>> adj(static_cast<std::size_t>(n_qubits));
  for (const auto& e : edges) {
    if (e.strength <= 0.0 || !is_working(e.a) || !is_working(e.b)) continue;
    adj[e.a].push_back(e.b);
    adj[e.b].push_back(e.a);
  }
  for (auto& v : adj) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
  }
  return adj;
}

std::vector<int> DeviceModel::largest_component() const {
  auto adj = adjacency();
  std::vector<int> comp_of(static_cast<std::size_t>(n_qubits), -1);
  std::vector<int> best;
  for (int s = 0; s < n_qubits; ++s) {
    if (!is_working(s) || comp_of[s] >= 0) continue;
    std::vector<int> comp;
    std::queue<int> q;
    q.push(s);
    comp_of[s] = s;
    while (!q.empty()) {
      int u = q.front();
      q.pop();
      comp.push_back(u);
      for (int v : adj[u])
        if (comp_of[v] < 0) {
          comp_of[v] = s;
          q.push(v);
        }
    }
    if (comp.size() > best.size()) best = std::move(comp);
  }
  std::sort(best.begin(), best.end());
  return best;
}

std::size_t DeviceModel::working_count() const {
  return static_cast<std::size_t>(std::count(working.begin(), working.end(), true));
}

namespace devices {

std::set<GateKind> default_natives() {
  return {GateKind::Rz, GateKind::Rx, GateKind::Ry, GateKind::CX, GateKind::H,
          GateKind::X,  GateKind::Y,  GateKind::Z,  GateKind::S,  GateKind::Sdg};
}

namespace {
DeviceModel base(int n, std::set<GateKind> natives, const std::string& name) {
  DeviceModel d;
  d.name = name;
  d.n_qubits = n;
  d.working.assign(static_cast<std::size_t>(n), true);
  d.native_gates = natives.empty() ? default_natives() : std::move(natives);
  return d;
}
}  // namespace

DeviceModel line(int n, std::set<GateKind> natives) {
  DeviceModel d = base(n, std::move(natives), "line" + std::to_string(n));
  for (int q = 0; q + 1 < n; ++q) d.edges.push_back({q, q + 1, 1.0});
  return d;
}

DeviceModel all_to_all(int n, std::set<GateKind> natives) {
  DeviceModel d = base(n, std::move(natives), "full" + std::to_string(n));
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b) d.edges.push_back({a, b, 1.0});
  return d;
}

DeviceModel grid(int rows, int cols, std::set<GateKind> natives) {
  DeviceModel d = base(rows * cols, std::move(natives),
                       "grid" + std::to_string(rows) + "x" + std::to_string(cols));
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) {
      int q = r * cols + c;
      if (c + 1 < cols) d.edges.push_back({q, q + 1, 1.0});
      if (r + 1 < rows) d.edges.push_back({q, q + cols, 1.0});
    }
  return d;
}

}  // namespace devices

std::string violation_type_name(Violation::Type t) {
  switch (t) {
    case Violation::Type::GateSet: return "gate_set";
    case Violation::Type::Connectivity: return "connectivity";
    case Violation::Type::DeadQubit: return "dead_qubit";
    case Violation::Type::OutOfRange: return "out_of_range";
  }
  return "unknown";
}

std::vector<Violation> validate_against_device(const Circuit& c, const DeviceModel& d) {
  std::vector<Violation> out;
  for (std::size_t l = 0; l < c.layers().size(); ++l) {
    const auto& layer = c.layers()[l];
    for (std::size_t i = 0; i < layer.size(); ++i) {
      const Gate& g = layer[i];
      auto add = [&](Violation::Type t, std::string msg) {
        out.push_back({t, l, i, std::move(msg)});
      };
      std::string gname(gate_name(g.kind));
      bool in_range = true;
      for (int t : g.targets) {
        if (t >= d.n_qubits) {
          add(Violation::Type::OutOfRange,
              gname + " targets qubit " + std::to_string(t) + " beyond the device");
          in_range = false;
        } else if (!d.working[t]) {
          add(Violation::Type::DeadQubit, gname + " targets non-working qubit " + std::to_string(t));
        }
      }
      if (g.kind == GateKind::Measure || g.kind == GateKind::Barrier) continue;
      if (!d.native_gates.contains(g.kind))
        add(Violation::Type::GateSet, gname + " is not a native gate");
      if (in_range && is_two_qubit_unitary(g.kind) && !d.coupled(g.targets[0], g.targets[1]))
        add(Violation::Type::Connectivity, gname + " on uncoupled pair (" +
                                               std::to_string(g.targets[0]) + "," +
                                               std::to_string(g.targets[1]) + ")");
    }
  }
  return out;
}

}  // namespace qbench
