#include "qbench/stabilizer.hpp"

#include <algorithm>
#include <bit>
#include <unordered_map>

#include "qbench/error.hpp"

namespace qbench {

bool AffineBit::deterministic() const {
  return std::all_of(mask.begin(), mask.end(), [](std::uint64_t w) { return w == 0; });
}

bool AffineBit::evaluate(const std::vector<std::uint64_t>& vars) const {
  std::uint64_t acc = constant ? 1U : 0U;
  for (std::size_t w = 0; w < mask.size() && w < vars.size(); ++w)
    acc ^= static_cast<std::uint64_t>(std::popcount(mask[w] & vars[w]) & 1);
  return acc & 1U;
}

StabilizerTableau::StabilizerTableau(int n_qubits) : n_(n_qubits) {
  if (n_qubits < 1) throw PreconditionError("tableau needs at least one qubit");
  words_ = static_cast<std::size_t>((n_qubits + 63) / 64);
  pwords_ = static_cast<std::size_t>((n_qubits + 1 + 63) / 64);
  std::size_t rows = 2 * static_cast<std::size_t>(n_qubits) + 1;
  x_.assign(rows * words_, 0);
  z_.assign(rows * words_, 0);
  r_.assign(rows * pwords_, 0);
  for (int q = 0; q < n_; ++q) {
    x_[idx(q, q)] |= std::uint64_t{1} << (q & 63);
    z_[idx(n_ + q, q)] |= std::uint64_t{1} << (q & 63);
  }
}

void StabilizerTableau::h(int q) {
  const std::uint64_t bit = std::uint64_t{1} << (q & 63);
  for (int row = 0; row < 2 * n_; ++row) {
    std::uint64_t& xw = x_[idx(row, q)];
    std::uint64_t& zw = z_[idx(row, q)];
    bool xb = xw & bit, zb = zw & bit;
    if (xb && zb) flip_phase_const(row);
    if (xb != zb) {
      xw ^= bit;
      zw ^= bit;
    }
  }
}

void StabilizerTableau::s(int q) {
  const std::uint64_t bit = std::uint64_t{1} << (q & 63);
  for (int row = 0; row < 2 * n_; ++row) {
    bool xb = x_[idx(row, q)] & bit;
    if (!xb) continue;
    if (z_[idx(row, q)] & bit) flip_phase_const(row);
    z_[idx(row, q)] ^= bit;
  }
}

void StabilizerTableau::x(int q) {
  for (int row = 0; row < 2 * n_; ++row)
    if (zbit(row, q)) flip_phase_const(row);
}

void StabilizerTableau::z(int q) {
  for (int row = 0; row < 2 * n_; ++row)
    if (xbit(row, q)) flip_phase_const(row);
}

void StabilizerTableau::y(int q) {
  for (int row = 0; row < 2 * n_; ++row)
    if (xbit(row, q) != zbit(row, q)) flip_phase_const(row);
}

void StabilizerTableau::cx(int a, int b) {
  if (a == b) throw PreconditionError("CX on a repeated qubit");
  const std::uint64_t ba = std::uint64_t{1} << (a & 63), bb = std::uint64_t{1} << (b & 63);
  for (int row = 0; row < 2 * n_; ++row) {
    bool xa = x_[idx(row, a)] & ba, za = z_[idx(row, a)] & ba;
    bool xb = x_[idx(row, b)] & bb, zb = z_[idx(row, b)] & bb;
    if (xa && zb && (xb == za)) flip_phase_const(row);
    if (xa) x_[idx(row, b)] ^= bb;
    if (zb) z_[idx(row, a)] ^= ba;
  }
}

void StabilizerTableau::cz(int a, int b) {
  h(b);
  cx(a, b);
  h(b);
}

void StabilizerTableau::swap(int a, int b) {
  if (a == b) return;
  for (int row = 0; row < 2 * n_; ++row) {
    bool xa = xbit(row, a), xb = xbit(row, b), za = zbit(row, a), zb = zbit(row, b);
    if (xa != xb) {
      x_[idx(row, a)] ^= std::uint64_t{1} << (a & 63);
      x_[idx(row, b)] ^= std::uint64_t{1} << (b & 63);
    }
    if (za != zb) {
      z_[idx(row, a)] ^= std::uint64_t{1} << (a & 63);
      z_[idx(row, b)] ^= std::uint64_t{1} << (b & 63);
    }
  }
}

void StabilizerTableau::apply(const Gate& g) {
  auto repeat = [](int k, auto&& fn) {
    for (int i = 0; i < k; ++i) fn();
  };
  auto turns = [&]() {
    auto k = quarter_turns(g.angle);
    if (!k) throw UnsupportedError(std::string(gate_name(g.kind)) + " angle is not a multiple of pi/2");
    return *k;
  };
  const auto& t = g.targets;
  switch (g.kind) {
    case GateKind::H: h(t[0]); return;
    case GateKind::X: x(t[0]); return;
    case GateKind::Y: y(t[0]); return;
    case GateKind::Z: z(t[0]); return;
    case GateKind::S: s(t[0]); return;
    case GateKind::Sdg: repeat(3, [&] { s(t[0]); }); return;
    case GateKind::Rz: repeat(turns(), [&] { s(t[0]); }); return;
    case GateKind::Rx: {
      int k = turns();
      h(t[0]);
      repeat(k, [&] { s(t[0]); });
      h(t[0]);
      return;
    }
    case GateKind::Ry:
      // Ry(pi/2) equals H.Z up to phase.
      repeat(turns(), [&] {
        z(t[0]);
        h(t[0]);
      });
      return;
    case GateKind::CX: cx(t[0], t[1]); return;
    case GateKind::CZ: cz(t[0], t[1]); return;
    case GateKind::SWAP: swap(t[0], t[1]); return;
    case GateKind::PauliLayer:
      for (std::size_t i = 0; i < t.size(); ++i) {
        switch (g.paulis[i]) {
          case 'X': x(t[i]); break;
          case 'Y': y(t[i]); break;
          case 'Z': z(t[i]); break;
          default: break;
        }
      }
      return;
    case GateKind::Barrier: return;
    default:
      throw UnsupportedError("gate " + std::string(gate_name(g.kind)) + " is not a Clifford gate");
  }
}

void StabilizerTableau::rowsum(int h, int i) {
  int sum = 0;
  for (std::size_t w = 0; w < words_; ++w) {
    std::uint64_t x1 = x_[static_cast<std::size_t>(i) * words_ + w];
    std::uint64_t z1 = z_[static_cast<std::size_t>(i) * words_ + w];
    std::uint64_t x2 = x_[static_cast<std::size_t>(h) * words_ + w];
    std::uint64_t z2 = z_[static_cast<std::size_t>(h) * words_ + w];
    std::uint64_t y1 = x1 & z1, xo = x1 & ~z1, zo = ~x1 & z1;
    std::uint64_t plus = (y1 & z2 & ~x2) | (xo & z2 & x2) | (zo & x2 & ~z2);
    std::uint64_t minus = (y1 & x2 & ~z2) | (xo & z2 & ~x2) | (zo & x2 & z2);
    sum += std::popcount(plus) - std::popcount(minus);
    x_[static_cast<std::size_t>(h) * words_ + w] = x1 ^ x2;
    z_[static_cast<std::size_t>(h) * words_ + w] = z1 ^ z2;
  }
  for (std::size_t w = 0; w < pwords_; ++w)
    r_[static_cast<std::size_t>(h) * pwords_ + w] ^= r_[static_cast<std::size_t>(i) * pwords_ + w];
  if (((sum % 4) + 4) % 4 == 2) flip_phase_const(h);
}

void StabilizerTableau::rowcopy(int dst, int src) {
  std::copy_n(x_.begin() + static_cast<std::ptrdiff_t>(static_cast<std::size_t>(src) * words_), words_,
              x_.begin() + static_cast<std::ptrdiff_t>(static_cast<std::size_t>(dst) * words_));
  std::copy_n(z_.begin() + static_cast<std::ptrdiff_t>(static_cast<std::size_t>(src) * words_), words_,
              z_.begin() + static_cast<std::ptrdiff_t>(static_cast<std::size_t>(dst) * words_));
  std::copy_n(r_.begin() + static_cast<std::ptrdiff_t>(static_cast<std::size_t>(src) * pwords_), pwords_,
              r_.begin() + static_cast<std::ptrdiff_t>(static_cast<std::size_t>(dst) * pwords_));
}

AffineBit StabilizerTableau::measure(int q) {
  if (q < 0 || q >= n_) throw PreconditionError("measured qubit out of range");
  int p = -1;
  for (int row = n_; row < 2 * n_; ++row)
    if (xbit(row, q)) {
      p = row;
      break;
    }
  std::size_t scratch = 2 * static_cast<std::size_t>(n_);
  if (p >= 0) {
    for (int row = 0; row < 2 * n_; ++row)
      if (row != p && row != p - n_ && xbit(row, q)) rowsum(row, p);
    rowcopy(p - n_, p);
    std::fill_n(x_.begin() + static_cast<std::ptrdiff_t>(static_cast<std::size_t>(p) * words_), words_, 0);
    std::fill_n(z_.begin() + static_cast<std::ptrdiff_t>(static_cast<std::size_t>(p) * words_), words_, 0);
    std::fill_n(r_.begin() + static_cast<std::ptrdiff_t>(static_cast<std::size_t>(p) * pwords_), pwords_, 0);
    z_[idx(p, q)] |= std::uint64_t{1} << (q & 63);
    int var = n_vars_++;
    // Phase bit 0 is the constant term, bit j+1 is random variable j.
    r_[static_cast<std::size_t>(p) * pwords_ + static_cast<std::size_t>((var + 1) / 64)] |=
        std::uint64_t{1} << ((var + 1) & 63);
  } else {
    std::fill_n(x_.begin() + static_cast<std::ptrdiff_t>(scratch * words_), words_, 0);
    std::fill_n(z_.begin() + static_cast<std::ptrdiff_t>(scratch * words_), words_, 0);
    std::fill_n(r_.begin() + static_cast<std::ptrdiff_t>(scratch * pwords_), pwords_, 0);
    for (int i = 0; i < n_; ++i)
      if (xbit(i, q)) rowsum(static_cast<int>(scratch), i + n_);
  }
  std::size_t row = p >= 0 ? static_cast<std::size_t>(p) : scratch;
  AffineBit out;
  out.constant = r_[row * pwords_] & 1U;
  out.mask.assign(pwords_, 0);
  for (std::size_t w = 0; w < pwords_; ++w) {
    std::uint64_t cur = r_[row * pwords_ + w];
    std::uint64_t next = w + 1 < pwords_ ? r_[row * pwords_ + w + 1] : 0;
    out.mask[w] = (cur >> 1) | (next << 63);
  }
  return out;
}

PauliString StabilizerTableau::stabilizer(int i) const {
  if (i < 0 || i >= n_) throw PreconditionError("stabilizer index out of range");
  PauliString p(n_);
  int row = n_ + i;
  for (int q = 0; q < n_; ++q) {
    bool xb = xbit(row, q), zb = zbit(row, q);
    p.set(q, xb ? (zb ? 'Y' : 'X') : (zb ? 'Z' : 'I'));
  }
  p.set_sign((r_[static_cast<std::size_t>(row) * pwords_] & 1U) ? -1 : 1);
  return p;
}

bool StabilizerTableau::is_symplectic() const {
  auto anticommute = [&](int a, int b) {
    int parity = 0;
    for (std::size_t w = 0; w < words_; ++w) {
      std::uint64_t v = (x_[static_cast<std::size_t>(a) * words_ + w] & z_[static_cast<std::size_t>(b) * words_ + w]) ^
                        (z_[static_cast<std::size_t>(a) * words_ + w] & x_[static_cast<std::size_t>(b) * words_ + w]);
      parity ^= std::popcount(v) & 1;
    }
    return parity == 1;
  };
  for (int a = 0; a < 2 * n_; ++a)
    for (int b = a + 1; b < 2 * n_; ++b)
      if (anticommute(a, b) != (b == a + n_)) return false;
  return true;
}

// ---------------------------------------------------------------------------

bool is_clifford_circuit(const Circuit& c) {
  bool ok = true;
  c.for_each_gate([&](const Gate& g) {
    if (g.kind == GateKind::Measure || g.kind == GateKind::Barrier || g.kind == GateKind::PauliLayer) return;
    if (!is_clifford(g)) ok = false;
  });
  return ok;
}

namespace {

struct Prepared {
  std::vector<Gate> ops;
  std::vector<std::pair<int, int>> measured;
  std::vector<AffineBit> outcomes;
  int n_vars = 0;
};

Prepared prepare(const Circuit& c, int cap) {
  c.validate();
  if (c.n_qubits() > cap) throw CapacityError(c.n_qubits(), cap);
  const auto& layers = c.layers();
  for (std::size_t l = 0; l + 1 < layers.size(); ++l)
    for (const auto& g : layers[l])
      if (g.kind == GateKind::Measure)
        throw UnsupportedError("mid-circuit measurement is not supported by the simulators");
  Prepared p;
  c.for_each_gate([&](const Gate& g) {
    if (g.kind == GateKind::Measure) return;
    if (g.kind != GateKind::Barrier && g.kind != GateKind::PauliLayer && !is_clifford(g))
      throw UnsupportedError("gate " + std::string(gate_name(g.kind)) +
                             " is not a Clifford gate; the stabilizer simulator cannot run it");
    p.ops.push_back(g);
  });
  p.measured = c.measurement_map();
  if (c.n_qubits() == 0) return p;
  StabilizerTableau t(c.n_qubits());
  for (const auto& g : p.ops) t.apply(g);
  for (const auto& [q, cb] : p.measured) p.outcomes.push_back(t.measure(q));
  p.n_vars = t.random_bits();
  return p;
}

// Conjugates the frame by a Clifford gate (signs are irrelevant for a frame).
void propagate(const Gate& g, std::vector<std::uint8_t>& fx, std::vector<std::uint8_t>& fz) {
  const auto& t = g.targets;
  auto at = [](std::vector<std::uint8_t>& v, int q) -> std::uint8_t& { return v[static_cast<std::size_t>(q)]; };
  switch (g.kind) {
    case GateKind::H:
      std::swap(at(fx, t[0]), at(fz, t[0]));
      return;
    case GateKind::S:
    case GateKind::Sdg:
      at(fz, t[0]) ^= at(fx, t[0]);
      return;
    case GateKind::Rz:
      if (*quarter_turns(g.angle) % 2) at(fz, t[0]) ^= at(fx, t[0]);
      return;
    case GateKind::Rx:
      if (*quarter_turns(g.angle) % 2) at(fx, t[0]) ^= at(fz, t[0]);
      return;
    case GateKind::Ry:
      if (*quarter_turns(g.angle) % 2) std::swap(at(fx, t[0]), at(fz, t[0]));
      return;
    case GateKind::CX:
      at(fx, t[1]) ^= at(fx, t[0]);
      at(fz, t[0]) ^= at(fz, t[1]);
      return;
    case GateKind::CZ:
      at(fz, t[0]) ^= at(fx, t[1]);
      at(fz, t[1]) ^= at(fx, t[0]);
      return;
    case GateKind::SWAP:
      std::swap(at(fx, t[0]), at(fx, t[1]));
      std::swap(at(fz, t[0]), at(fz, t[1]));
      return;
    default:
      return;
  }
}

}  // namespace

SampleSet stabilizer_sample(const Circuit& c, std::uint64_t shots, Rng& rng, int cap) {
  return stabilizer_sample(c, shots, NoiseModel{}, rng, cap);
}

SampleSet stabilizer_sample(const Circuit& c, std::uint64_t shots, const NoiseModel& noise, Rng& rng,
                            int cap, std::uint64_t first_shot) {
  if (shots == 0) throw PreconditionError("shot count must be positive");
  Prepared p = prepare(c, cap);
  FaultSampler faults(p.ops, noise);
  std::vector<std::pair<std::size_t, double>> readouts;  // index into measured, rate
  for (std::size_t i = 0; i < p.measured.size(); ++i) {
    double r = noise.readout_rate(p.measured[i].first);
    if (r > 0.0) readouts.emplace_back(i, r);
  }

  const auto n = static_cast<std::size_t>(c.n_qubits());
  const auto n_cl = static_cast<std::size_t>(c.n_clbits());
  std::vector<std::uint64_t> vars(static_cast<std::size_t>((p.n_vars + 63) / 64) + 1, 0);
  std::vector<std::uint8_t> fx(n), fz(n);
  std::vector<PauliFault> flips;
  std::unordered_map<std::string, std::uint64_t> counts;
  std::string bits(n_cl, '0');

  for (std::uint64_t shot = 0; shot < shots; ++shot) {
    for (int v = 0; v < p.n_vars; v += 64) {
      std::uint64_t word = rng.next();
      int rem = p.n_vars - v;
      if (rem < 64) word &= (std::uint64_t{1} << rem) - 1;
      vars[static_cast<std::size_t>(v / 64)] = word;
    }
    std::fill(bits.begin(), bits.end(), '0');
    std::vector<bool> flip_out(p.measured.size(), false);
    if (faults.active()) {
      faults.draw(first_shot + shot, rng, flips);
      if (!flips.empty()) {
        std::fill(fx.begin(), fx.end(), 0);
        std::fill(fz.begin(), fz.end(), 0);
        std::size_t f = 0;
        for (std::size_t k = flips.front().op; k < p.ops.size(); ++k) {
          propagate(p.ops[k], fx, fz);
          for (; f < flips.size() && flips[f].op == k; ++f) {
            auto q = static_cast<std::size_t>(flips[f].qubit);
            char l = flips[f].letter;
            if (l == 'X' || l == 'Y') fx[q] ^= 1;
            if (l == 'Z' || l == 'Y') fz[q] ^= 1;
          }
        }
        for (std::size_t i = 0; i < p.measured.size(); ++i)
          flip_out[i] = fx[static_cast<std::size_t>(p.measured[i].first)];
      }
    }
    for (const auto& [i, r] : readouts)
      if (rng.uniform() < r) flip_out[i] = !flip_out[i];
    for (std::size_t i = 0; i < p.measured.size(); ++i) {
      bool b = p.outcomes[i].evaluate(vars) != flip_out[i];
      if (b) bits[n_cl - 1 - static_cast<std::size_t>(p.measured[i].second)] = '1';
    }
    ++counts[bits];
  }
  SampleSet out(c.n_clbits());
  for (const auto& [k, v] : counts) out.add(k, v);
  return out;
}

std::string deterministic_outcome(const Circuit& c, int cap) {
  Prepared p = prepare(c, cap);
  const auto n_cl = static_cast<std::size_t>(c.n_clbits());
  std::string bits(n_cl, '0');
  for (std::size_t i = 0; i < p.measured.size(); ++i) {
    if (!p.outcomes[i].deterministic())
      throw PreconditionError("circuit outcome is not deterministic on qubit " +
                              std::to_string(p.measured[i].first));
    if (p.outcomes[i].constant) bits[n_cl - 1 - static_cast<std::size_t>(p.measured[i].second)] = '1';
  }
  return bits;
}

}  // namespace qbench
