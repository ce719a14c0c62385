#include "qbench/transpile.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <optional>
#include <queue>
#include <set>

#include "qbench/error.hpp"
#include "qbench/kak.hpp"
#include "qbench/randgen.hpp"
#include "qbench/rng.hpp"
#include "qbench/statevector.hpp"

namespace qbench {

namespace {

std::vector<int> shortest_path(const std::vector<std::vector<int>>& adj, int from, int to) {
  std::vector<int> prev(adj.size(), -2);
  std::queue<int> q;
  q.push(from);
  prev[static_cast<std::size_t>(from)] = -1;
  while (!q.empty()) {
    int u = q.front();
    q.pop();
    if (u == to) break;
    for (int v : adj[static_cast<std::size_t>(u)])
      if (prev[static_cast<std::size_t>(v)] == -2) {
        prev[static_cast<std::size_t>(v)] = u;
        q.push(v);
      }
  }
  if (prev[static_cast<std::size_t>(to)] == -2) return {};
  std::vector<int> path;
  for (int v = to; v != -1; v = prev[static_cast<std::size_t>(v)]) path.push_back(v);
  std::reverse(path.begin(), path.end());
  return path;
}

std::vector<int> bfs_order(const std::vector<std::vector<int>>& adj, int start) {
  std::vector<int> order;
  std::vector<bool> seen(adj.size(), false);
  std::queue<int> q;
  q.push(start);
  seen[static_cast<std::size_t>(start)] = true;
  while (!q.empty()) {
    int u = q.front();
    q.pop();
    order.push_back(u);
    for (int v : adj[static_cast<std::size_t>(u)])
      if (!seen[static_cast<std::size_t>(v)]) {
        seen[static_cast<std::size_t>(v)] = true;
        q.push(v);
      }
  }
  return order;
}

Gate relabel(const Gate& g, const std::vector<int>& phys_of) {
  Gate out = g;
  for (int& t : out.targets) t = phys_of[static_cast<std::size_t>(t)];
  return out;
}

Circuit rebuild(const Circuit& like, int n_qubits, const std::vector<Gate>& gs) {
  Circuit out(n_qubits, like.n_clbits());
  out.metadata() = like.metadata();
  for (const auto& g : gs) out.append(g);
  return out;
}

}  // namespace

Circuit route_swaps(const Circuit& c, const DeviceModel& d) {
  c.validate();
  d.validate();
  const int w = c.n_qubits();
  if (w > d.n_qubits)
    throw PreconditionError("circuit width " + std::to_string(w) + " exceeds the device's " +
                            std::to_string(d.n_qubits) + " qubits");

  std::vector<bool> used(static_cast<std::size_t>(w), false);
  c.for_each_gate([&](const Gate& g) {
    if (g.kind == GateKind::Barrier) return;
    for (int t : g.targets) used[static_cast<std::size_t>(t)] = true;
  });
  if (!c.has_measurements())
    for (int q = 0; q < std::min(w, c.n_clbits()); ++q) used[static_cast<std::size_t>(q)] = true;
  std::vector<int> used_list;
  for (int q = 0; q < w; ++q)
    if (used[static_cast<std::size_t>(q)]) used_list.push_back(q);

  std::vector<int> comp = d.largest_component();
  std::set<int> comp_set(comp.begin(), comp.end());
  if (used_list.size() > comp.size())
    throw PreconditionError("circuit uses " + std::to_string(used_list.size()) +
                            " qubits but the largest connected group of working qubits has " +
                            std::to_string(comp.size()));

  std::vector<int> layout(static_cast<std::size_t>(w));
  for (int q = 0; q < w; ++q) layout[static_cast<std::size_t>(q)] = q;
  bool identity = std::all_of(used_list.begin(), used_list.end(), [&](int q) { return comp_set.contains(q); });
  if (!identity) {
    auto adj = d.adjacency();
    std::vector<int> order = bfs_order(adj, comp.front());
    std::vector<bool> taken(static_cast<std::size_t>(d.n_qubits), false);
    for (std::size_t i = 0; i < used_list.size(); ++i) {
      layout[static_cast<std::size_t>(used_list[i])] = order[i];
      taken[static_cast<std::size_t>(order[i])] = true;
    }
    // Idle logical qubits take the remaining qubits, component first.
    std::vector<int> spare;
    for (std::size_t i = used_list.size(); i < order.size(); ++i) spare.push_back(order[i]);
    for (int p = 0; p < d.n_qubits; ++p)
      if (!taken[static_cast<std::size_t>(p)] && !comp_set.contains(p)) spare.push_back(p);
    std::size_t next = 0;
    for (int q = 0; q < w; ++q)
      if (!used[static_cast<std::size_t>(q)]) layout[static_cast<std::size_t>(q)] = spare.at(next++);
  }

  auto adj = d.adjacency();
  std::vector<int> phys_of = layout;
  std::vector<int> log_of(static_cast<std::size_t>(d.n_qubits), -1);
  for (int q = 0; q < w; ++q) log_of[static_cast<std::size_t>(phys_of[static_cast<std::size_t>(q)])] = q;

  std::vector<Gate> out;
  std::size_t swaps = 0;
  for (const Gate& g : c.flatten()) {
    if (is_two_qubit_unitary(g.kind)) {
      int pa = phys_of[static_cast<std::size_t>(g.targets[0])];
      int pb = phys_of[static_cast<std::size_t>(g.targets[1])];
      if (!d.coupled(pa, pb)) {
        std::vector<int> path = shortest_path(adj, pa, pb);
        if (path.size() < 2)
          throw PreconditionError("qubits " + std::to_string(pa) + " and " + std::to_string(pb) +
                                  " are not connected on the device");
        for (std::size_t i = 0; i + 2 < path.size(); ++i) {
          int u = path[i], v = path[i + 1];
          out.push_back(gates::swap(u, v));
          ++swaps;
          int lu = log_of[static_cast<std::size_t>(u)], lv = log_of[static_cast<std::size_t>(v)];
          std::swap(log_of[static_cast<std::size_t>(u)], log_of[static_cast<std::size_t>(v)]);
          if (lu >= 0) phys_of[static_cast<std::size_t>(lu)] = v;
          if (lv >= 0) phys_of[static_cast<std::size_t>(lv)] = u;
        }
      }
    }
    out.push_back(relabel(g, phys_of));
  }

  if (identity && swaps == 0) return c;

  Circuit routed(d.n_qubits, c.n_clbits());
  routed.metadata() = c.metadata();
  std::vector<int> composed = layout;
  if (!c.metadata().input_layout.empty()) {
    composed.clear();
    for (int p : c.metadata().input_layout) composed.push_back(layout.at(static_cast<std::size_t>(p)));
  }
  routed.metadata().input_layout = composed;
  for (const auto& g : out) routed.append(g);
  if (!c.has_measurements()) {
    int n = std::min(w, c.n_clbits());
    for (int q = 0; q < n; ++q) routed.append(gates::measure(phys_of[static_cast<std::size_t>(q)], q));
  }
  return routed;
}

Circuit decompose_to_native(const Circuit& c, const DeviceModel& d) {
  c.validate();
  auto violations = validate_against_device(c, d);
  if (std::none_of(violations.begin(), violations.end(),
                   [](const Violation& v) { return v.type == Violation::Type::GateSet; }))
    return c;

  const std::set<GateKind>& nat = d.native_gates;
  const bool cx_native = nat.contains(GateKind::CX), cz_native = nat.contains(GateKind::CZ);
  if (!has_universal_1q_family(nat))
    throw UnsupportedError("native gate set is not universal: no single-qubit rotation family");
  bool needs_2q = false;
  c.for_each_gate([&](const Gate& g) {
    if (is_two_qubit_unitary(g.kind) && !nat.contains(g.kind)) needs_2q = true;
  });
  if (needs_2q && !cx_native && !cz_native)
    throw UnsupportedError("native gate set is not universal: needs CX or CZ");

  const auto n = static_cast<std::size_t>(c.n_qubits());
  std::vector<std::optional<Mat2>> pending(n);
  std::vector<Gate> out;
  const Mat2 hmat = single_qubit_matrix(GateKind::H);

  auto one = [&](int q, const Mat2& u) {
    auto& p = pending[static_cast<std::size_t>(q)];
    p = p ? Mat2(u * *p) : u;
  };
  auto flush = [&](int q) {
    auto& p = pending[static_cast<std::size_t>(q)];
    if (!p) return;
    for (auto& g : synthesize_1q(*p, q, nat)) out.push_back(std::move(g));
    p.reset();
  };
  auto emit2 = [&](const Gate& g) {
    flush(g.targets[0]);
    flush(g.targets[1]);
    out.push_back(g);
  };
  auto cx = [&](int a, int b) {
    if (cx_native) {
      emit2(gates::cx(a, b));
    } else {
      one(b, hmat);
      emit2(gates::cz(a, b));
      one(b, hmat);
    }
  };
  auto cz = [&](int a, int b) {
    if (cz_native) {
      emit2(gates::cz(a, b));
    } else {
      one(b, hmat);
      emit2(gates::cx(a, b));
      one(b, hmat);
    }
  };

  for (const Gate& g : c.flatten()) {
    const auto& t = g.targets;
    switch (g.kind) {
      case GateKind::Measure:
        flush(t[0]);
        out.push_back(g);
        break;
      case GateKind::Barrier:
        for (int q : t) flush(q);
        out.push_back(g);
        break;
      case GateKind::PauliLayer:
        if (nat.contains(GateKind::PauliLayer)) {
          for (int q : t) flush(q);
          out.push_back(g);
        } else {
          for (std::size_t i = 0; i < t.size(); ++i) one(t[i], pauli_matrix(g.paulis[i]));
        }
        break;
      case GateKind::CX:
        cx(t[0], t[1]);
        break;
      case GateKind::CZ:
        cz(t[0], t[1]);
        break;
      case GateKind::SWAP:
        if (nat.contains(GateKind::SWAP)) {
          emit2(g);
        } else {
          cx(t[0], t[1]);
          cx(t[1], t[0]);
          cx(t[0], t[1]);
        }
        break;
      case GateKind::U2Q:
        if (nat.contains(GateKind::U2Q)) {
          emit2(g);
        } else {
          for (const auto& step : synthesize_three_cx(*g.unitary, t[0], t[1])) {
            if (step.is_cx)
              cx(step.control, step.target);
            else
              one(step.op.qubit, step.op.u);
          }
        }
        break;
      default:
        one(t[0], single_qubit_matrix(g.kind, g.angle));
        break;
    }
  }
  for (std::size_t q = 0; q < n; ++q) flush(static_cast<int>(q));
  return rebuild(c, c.n_qubits(), out);
}

namespace {

// True when b undoes a; two-qubit targets may be listed in either order.
bool is_inverse_pair(const Gate& a, const Gate& b) {
  if (!a.is_unitary() || !b.is_unitary() || a.kind == GateKind::PauliLayer || b.kind == GateKind::PauliLayer)
    return false;
  if (a.targets.size() != b.targets.size()) return false;
  if (a.targets.size() == 1) {
    if (a.targets[0] != b.targets[0]) return false;
    Mat2 p = single_qubit_matrix(b.kind, b.angle) * single_qubit_matrix(a.kind, a.angle);
    return equal_up_to_phase(p, Mat2::Identity(), 1e-9);
  }
  Mat4 mb = two_qubit_matrix(b);
  if (a.targets[0] == b.targets[1] && a.targets[1] == b.targets[0]) {
    Mat4 sw = two_qubit_matrix(gates::swap(0, 1));
    mb = sw * mb * sw;
  } else if (a.targets != b.targets) {
    return false;
  }
  return equal_up_to_phase(mb * two_qubit_matrix(a), Mat4::Identity(), 1e-9);
}

double wrap(double t) {
  double w = std::remainder(t, 2.0 * kPi);
  if (w <= -kPi) w += 2.0 * kPi;
  return w;
}

}  // namespace

Circuit cancel_inverses(const Circuit& c) {
  c.validate();
  std::vector<Gate> out;
  std::vector<bool> live;
  std::vector<std::vector<std::size_t>> stack(static_cast<std::size_t>(c.n_qubits()));
  for (const Gate& g : c.flatten()) {
    if (g.is_unitary() && !g.targets.empty()) {
      auto& s0 = stack[static_cast<std::size_t>(g.targets[0])];
      if (!s0.empty()) {
        std::size_t idx = s0.back();
        bool top_everywhere = std::all_of(g.targets.begin(), g.targets.end(), [&](int t) {
          const auto& s = stack[static_cast<std::size_t>(t)];
          return !s.empty() && s.back() == idx;
        });
        if (top_everywhere && out[idx].targets.size() == g.targets.size() && is_inverse_pair(out[idx], g)) {
          live[idx] = false;
          for (int t : g.targets) stack[static_cast<std::size_t>(t)].pop_back();
          continue;
        }
      }
    }
    for (int t : g.targets) stack[static_cast<std::size_t>(t)].push_back(out.size());
    out.push_back(g);
    live.push_back(true);
  }
  std::vector<Gate> kept;
  for (std::size_t i = 0; i < out.size(); ++i)
    if (live[i]) kept.push_back(out[i]);
  return rebuild(c, c.n_qubits(), kept);
}

Circuit merge_rotations(const Circuit& c) {
  c.validate();
  std::vector<Gate> out;
  std::vector<bool> live;
  std::vector<std::vector<std::size_t>> stack(static_cast<std::size_t>(c.n_qubits()));
  auto is_rot = [](GateKind k) { return k == GateKind::Rx || k == GateKind::Ry || k == GateKind::Rz; };
  for (const Gate& g : c.flatten()) {
    if (is_rot(g.kind)) {
      auto& s = stack[static_cast<std::size_t>(g.targets[0])];
      if (!s.empty() && out[s.back()].kind == g.kind) {
        Gate& prev = out[s.back()];
        prev.angle = wrap(prev.angle + g.angle);
        if (std::abs(prev.angle) < 1e-12) {
          live[s.back()] = false;
          s.pop_back();
        }
        continue;
      }
      if (std::abs(wrap(g.angle)) < 1e-12) continue;
    }
    for (int t : g.targets) stack[static_cast<std::size_t>(t)].push_back(out.size());
    out.push_back(g);
    live.push_back(true);
  }
  std::vector<Gate> kept;
  for (std::size_t i = 0; i < out.size(); ++i)
    if (live[i]) kept.push_back(out[i]);
  return rebuild(c, c.n_qubits(), kept);
}

std::string mode_name(TranspileMode m) { return m == TranspileMode::Base ? "base" : "peak"; }

TranspileMode mode_from_name(const std::string& s) {
  if (s == "base") return TranspileMode::Base;
  if (s == "peak") return TranspileMode::Peak;
  throw PreconditionError("unknown transpile mode '" + s + "' (expected base or peak)");
}

const std::vector<std::string>& base_pipeline() {
  static const std::vector<std::string> p = {"validate", "route_swaps", "decompose_to_native", "validate"};
  return p;
}

const std::vector<std::string>& available_passes() {
  static const std::vector<std::string> p = {"validate", "route_swaps", "decompose_to_native", "cancel_inverses",
                                             "merge_rotations"};
  return p;
}

void TranspileConfig::validate() const {
  if (mode == TranspileMode::Base) {
    if (!passes.empty() && passes != base_pipeline())
      throw PreconditionError("the base pipeline is fixed; its pass list cannot be overridden");
    return;
  }
  if (passes.empty()) throw PreconditionError("peak configuration needs a pass list");
  for (const auto& p : passes)
    if (std::find(available_passes().begin(), available_passes().end(), p) == available_passes().end())
      throw PreconditionError("unknown transpiler pass '" + p + "'");
}

TranspileResult run_pipeline(const Circuit& c, const DeviceModel& d, const TranspileConfig& cfg) {
  cfg.validate();
  d.validate();
  c.validate();
  const auto& passes = cfg.mode == TranspileMode::Base ? base_pipeline() : cfg.passes;
  TranspileResult r;
  r.log.mode = mode_name(cfg.mode);
  r.log.pipeline_version = cfg.mode == TranspileMode::Base ? kBasePipelineVersion : "peak";
  r.circuit = c;
  for (const auto& name : passes) {
    PassRecord rec;
    rec.name = name;
    rec.gates_in = r.circuit.gate_count();
    std::size_t swaps_in = r.circuit.count(GateKind::SWAP);
    auto t0 = std::chrono::steady_clock::now();
    if (name == "route_swaps")
      r.circuit = route_swaps(r.circuit, d);
    else if (name == "decompose_to_native")
      r.circuit = decompose_to_native(r.circuit, d);
    else if (name == "cancel_inverses")
      r.circuit = cancel_inverses(r.circuit);
    else if (name == "merge_rotations")
      r.circuit = merge_rotations(r.circuit);
    rec.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    rec.gates_out = r.circuit.gate_count();
    if (name == "route_swaps") {
      std::size_t swaps_out = r.circuit.count(GateKind::SWAP);
      rec.swaps_added = swaps_out > swaps_in ? swaps_out - swaps_in : 0;
    }
    rec.violations = validate_against_device(r.circuit, d).size();
    r.log.entries.push_back(rec);
  }
  auto violations = validate_against_device(r.circuit, d);
  if (!violations.empty())
    throw PreconditionError("pipeline output violates the device (" + std::to_string(violations.size()) +
                            " violations; first: " + violations.front().message + ")");
  if (cfg.mode == TranspileMode::Peak) {
    ProbeResult probe = probe_equivalence(c, r.circuit, cfg.seed);
    if (probe.ran && !probe.equivalent)
      throw Error("peak pipeline changed the circuit's behavior (probe fidelity " +
                  std::to_string(probe.min_fidelity) + ")");
    r.log.equivalence = probe.ran ? "passed" : "skipped: " + probe.reason;
  } else {
    r.log.equivalence = "not-required";
  }
  return r;
}

namespace {

struct ProbeSide {
  std::vector<int> compact;   // circuit qubit -> compact index or -1
  int width = 0;
  std::map<int, int> cbit_of;  // circuit qubit -> cbit
};

std::optional<ProbeSide> probe_side(const Circuit& c, const std::vector<int>& prep_qubits, std::string& why) {
  ProbeSide s;
  s.compact.assign(static_cast<std::size_t>(c.n_qubits()), -1);
  for (const auto& [q, cb] : c.measurement_map()) s.cbit_of[q] = cb;
  std::set<int> keep(prep_qubits.begin(), prep_qubits.end());
  for (const auto& [q, cb] : s.cbit_of) keep.insert(q);
  c.for_each_gate([&](const Gate& g) {
    if (g.is_unitary())
      for (int t : g.targets) keep.insert(t);
  });
  for (int q : keep) s.compact[static_cast<std::size_t>(q)] = s.width++;
  std::set<int> cbits;
  for (const auto& [q, cb] : s.cbit_of)
    if (!cbits.insert(cb).second) {
      why = "two qubits share a classical bit";
      return std::nullopt;
    }
  return s;
}

}  // namespace

ProbeResult probe_equivalence(const Circuit& reference, const Circuit& candidate, std::uint64_t seed, int trials,
                              int max_width) {
  ProbeResult res;
  if (!reference.metadata().input_layout.empty()) {
    res.reason = "reference circuit already carries a layout";
    return res;
  }
  std::vector<int> layout = candidate.metadata().input_layout;
  if (layout.empty())
    for (int q = 0; q < reference.n_qubits(); ++q) layout.push_back(q);
  if (static_cast<int>(layout.size()) != reference.n_qubits()) {
    res.reason = "layout width does not match the reference";
    return res;
  }

  std::vector<int> ref_prep;
  for (const auto& [q, cb] : reference.measurement_map()) ref_prep.push_back(q);
  std::vector<int> cand_prep;
  for (int q : ref_prep) cand_prep.push_back(layout[static_cast<std::size_t>(q)]);

  auto ref = probe_side(reference, ref_prep, res.reason);
  if (!ref) return res;
  auto cand = probe_side(candidate, cand_prep, res.reason);
  if (!cand) return res;

  for (int q = 0; q < reference.n_qubits(); ++q)
    if (ref->compact[static_cast<std::size_t>(q)] >= 0 && !ref->cbit_of.contains(q)) {
      res.reason = "reference leaves active qubit " + std::to_string(q) + " unmeasured";
      return res;
    }
  if (ref->width > max_width || cand->width > max_width) {
    res.reason = "active width " + std::to_string(std::max(ref->width, cand->width)) + " above probe limit " +
                 std::to_string(max_width);
    return res;
  }
  std::set<int> ref_cbits, cand_cbits;
  for (const auto& [q, cb] : ref->cbit_of) ref_cbits.insert(cb);
  for (const auto& [q, cb] : cand->cbit_of) cand_cbits.insert(cb);
  res.ran = true;
  if (ref_cbits != cand_cbits) {
    res.equivalent = false;
    res.min_fidelity = 0.0;
    return res;
  }
  std::map<int, int> cbit_pos;
  for (int cb : ref_cbits) cbit_pos.emplace(cb, static_cast<int>(cbit_pos.size()));
  const std::size_t reg = std::size_t{1} << cbit_pos.size();

  auto run = [&](const Circuit& c, const ProbeSide& side, const std::vector<int>& prep,
                 const std::vector<Mat2>& states) {
    StateVector sv(side.width);
    for (std::size_t i = 0; i < prep.size(); ++i)
      sv.apply_1q(states[i], side.compact[static_cast<std::size_t>(prep[i])]);
    c.for_each_gate([&](const Gate& g) {
      if (g.is_unitary()) sv.apply(g, side.compact);
    });
    std::vector<int> bitpos(static_cast<std::size_t>(side.width), -1);
    for (const auto& [q, cb] : side.cbit_of)
      if (side.compact[static_cast<std::size_t>(q)] >= 0)
        bitpos[static_cast<std::size_t>(side.compact[static_cast<std::size_t>(q)])] = cbit_pos.at(cb);
    std::vector<cplx> v(reg, cplx(0.0, 0.0));
    const auto& a = sv.amplitudes();
    for (std::size_t s = 0; s < a.size(); ++s) {
      std::size_t idx = 0;
      bool ancilla_zero = true;
      for (int k = 0; k < side.width; ++k) {
        if (!((s >> k) & 1U)) continue;
        if (bitpos[static_cast<std::size_t>(k)] < 0) {
          ancilla_zero = false;
          break;
        }
        idx |= std::size_t{1} << bitpos[static_cast<std::size_t>(k)];
      }
      if (ancilla_zero) v[idx] += a[s];
    }
    return v;
  };

  Rng rng(seed, 0x70726f6265ULL);
  res.min_fidelity = 1.0;
  for (int t = 0; t < trials; ++t) {
    std::vector<Mat2> states;
    for (std::size_t i = 0; i < ref_prep.size(); ++i) states.push_back(haar_unitary(2, rng));
    auto a = run(reference, *ref, ref_prep, states);
    auto b = run(candidate, *cand, cand_prep, states);
    cplx ov(0.0, 0.0);
    for (std::size_t i = 0; i < reg; ++i) ov += std::conj(a[i]) * b[i];
    res.min_fidelity = std::min(res.min_fidelity, std::norm(ov));
  }
  res.equivalent = res.min_fidelity >= 1.0 - 1e-8;
  return res;
}

}  // namespace qbench
