#include "qbench/circuit.hpp"

#include <algorithm>
#include <set>

#include "qbench/error.hpp"

namespace qbench {

namespace {

bool is_measure_layer(const std::vector<Gate>& layer) {
  return !layer.empty() && std::all_of(layer.begin(), layer.end(), [](const Gate& g) {
           return g.kind == GateKind::Measure;
         });
}

bool touches(const std::vector<Gate>& layer, int q) {
  for (const auto& g : layer)
    for (int t : g.targets)
      if (t == q) return true;
  return false;
}

}  // namespace

Circuit::Circuit(int n_qubits, int n_clbits)
    : n_qubits_(n_qubits), n_clbits_(n_clbits < 0 ? n_qubits : n_clbits) {
  if (n_qubits < 0) throw PreconditionError("negative qubit count");
}

void Circuit::check_targets(const Gate& g) const {
  g.validate();
  for (int t : g.targets)
    if (t >= n_qubits_)
      throw PreconditionError("qubit index " + std::to_string(t) + " out of range for " +
                              std::to_string(n_qubits_) + "-qubit circuit");
  if (g.kind == GateKind::Measure && g.cbit >= n_clbits_)
    throw PreconditionError("classical bit " + std::to_string(g.cbit) + " out of range");
}

int Circuit::final_measure_layer() const {
  if (meta_.mid_circuit_measure || layers_.empty() || !is_measure_layer(layers_.back())) return -1;
  return static_cast<int>(layers_.size()) - 1;
}

void Circuit::append(const Gate& g) {
  check_targets(g);
  const int meas = final_measure_layer();

  if (g.kind == GateKind::Measure && !meta_.mid_circuit_measure) {
    if (meas >= 0 && !touches(layers_[meas], g.targets[0])) {
      layers_[meas].push_back(g);
    } else {
      layers_.push_back({g});
    }
    return;
  }

  std::vector<int> targets = g.targets;
  if (g.kind == GateKind::Barrier && targets.empty())
    for (int q = 0; q < n_qubits_; ++q) targets.push_back(q);

  // Latest layer touching any target.
  int last = -1;
  for (int l = static_cast<int>(layers_.size()) - 1; l >= 0 && last < 0; --l)
    for (int t : targets)
      if (touches(layers_[l], t)) {
        last = l;
        break;
      }

  if (meas >= 0 && last == meas)
    throw PreconditionError("operation after measurement on qubit; flag the circuit for "
                            "mid-circuit measurement");

  Gate placed = g;
  placed.targets = targets;
  int slot = last + 1;
  if (meas >= 0 && slot >= meas) {
    layers_.insert(layers_.begin() + meas, std::vector<Gate>{placed});
    return;
  }
  if (slot >= static_cast<int>(layers_.size())) {
    layers_.push_back({placed});
  } else {
    layers_[slot].push_back(placed);
  }
}

void Circuit::append(const std::vector<Gate>& gs) {
  for (const auto& g : gs) append(g);
}

void Circuit::add_layer(std::vector<Gate> layer) {
  std::set<int> seen;
  for (const auto& g : layer) {
    check_targets(g);
    for (int t : g.targets)
      if (!seen.insert(t).second)
        throw PreconditionError("qubit " + std::to_string(t) + " touched twice in one layer");
  }
  layers_.push_back(std::move(layer));
}

void Circuit::extend(const Circuit& other) {
  if (other.n_qubits_ > n_qubits_) throw PreconditionError("cannot extend with a wider circuit");
  other.for_each_gate([this](const Gate& g) { append(g); });
}

std::size_t Circuit::gate_count() const {
  std::size_t n = 0;
  for (const auto& layer : layers_)
    for (const auto& g : layer)
      if (g.kind != GateKind::Barrier) ++n;
  return n;
}

std::size_t Circuit::count(GateKind kind) const {
  std::size_t n = 0;
  for (const auto& layer : layers_)
    for (const auto& g : layer)
      if (g.kind == kind) ++n;
  return n;
}

bool Circuit::has_measurements() const { return count(GateKind::Measure) > 0; }

void Circuit::for_each_gate(const std::function<void(const Gate&)>& fn) const {
  for (const auto& layer : layers_)
    for (const auto& g : layer) fn(g);
}

std::vector<Gate> Circuit::flatten() const {
  std::vector<Gate> out;
  for (const auto& layer : layers_) out.insert(out.end(), layer.begin(), layer.end());
  return out;
}

void Circuit::validate() const {
  std::vector<bool> measured(n_qubits_, false);
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    std::set<int> seen;
    for (const auto& g : layers_[l]) {
      check_targets(g);
      for (int t : g.targets) {
        if (!seen.insert(t).second)
          throw PreconditionError("qubit " + std::to_string(t) + " touched twice in layer " +
                                  std::to_string(l));
        if (measured[t] && !meta_.mid_circuit_measure)
          throw PreconditionError("operation after measurement on qubit " + std::to_string(t));
      }
      if (g.kind == GateKind::Measure) measured[g.targets[0]] = true;
    }
  }
  if (!meta_.input_layout.empty()) {
    std::set<int> phys(meta_.input_layout.begin(), meta_.input_layout.end());
    if (phys.size() != meta_.input_layout.size())
      throw PreconditionError("input layout is not injective");
    for (int p : meta_.input_layout)
      if (p < 0 || p >= n_qubits_) throw PreconditionError("input layout out of range");
  }
}

std::vector<std::pair<int, int>> Circuit::measurement_map() const {
  std::vector<std::pair<int, int>> out;
  for_each_gate([&](const Gate& g) {
    if (g.kind == GateKind::Measure) out.emplace_back(g.targets[0], g.cbit);
  });
  if (out.empty()) {
    int n = std::min(n_qubits_, n_clbits_);
    for (int q = 0; q < n; ++q) out.emplace_back(q, q);
  }
  return out;
}

CircuitStats circuit_stats(const Circuit& c) {
  CircuitStats s;
  s.width = c.n_qubits();
  s.depth = static_cast<int>(c.depth());
  c.for_each_gate([&](const Gate& g) {
    if (g.kind == GateKind::Barrier) return;
    ++s.gate_count;
    if (g.kind == GateKind::Measure) ++s.measure_count;
    if (is_two_qubit_unitary(g.kind)) ++s.two_qubit_count;
  });
  if (s.gate_count > 0 && s.width > 0 && s.depth > 0) {
    s.gate_density = static_cast<double>(s.gate_count) / (static_cast<double>(s.width) * s.depth);
    s.measurement_density = static_cast<double>(s.measure_count) / s.gate_count;
  }
  return s;
}

Circuit inverse_circuit(const Circuit& c) {
  Circuit out(c.n_qubits(), c.n_clbits());
  out.metadata() = c.metadata();
  out.metadata().name = c.metadata().name.empty() ? "" : c.metadata().name + "_inv";
  for (auto it = c.layers().rbegin(); it != c.layers().rend(); ++it) {
    std::vector<Gate> layer;
    layer.reserve(it->size());
    for (const auto& g : *it) layer.push_back(inverse(g));
    out.add_layer(std::move(layer));
  }
  return out;
}

}  // namespace qbench
