#include "qbench/randgen.hpp"

#include <cmath>

#include "qbench/clifford_group.hpp"
#include "qbench/error.hpp"
#include "qbench/stabilizer.hpp"

namespace qbench {

namespace {

void stamp(Circuit& c, const std::string& name, const Rng& rng) {
  c.metadata().name = name;
  c.metadata().seed = rng.seed();
  c.metadata().stream = rng.stream();
  c.metadata().has_seed = true;
}

std::vector<int> random_permutation(int n, Rng& rng) {
  std::vector<int> p(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) p[static_cast<std::size_t>(i)] = i;
  for (int i = n - 1; i > 0; --i)
    std::swap(p[static_cast<std::size_t>(i)], p[rng.below(static_cast<std::uint64_t>(i) + 1)]);
  return p;
}

}  // namespace

MatX haar_unitary(int dim, Rng& rng) {
  if (dim != 2 && dim != 4 && dim != 8 && dim != 16)
    throw PreconditionError("Haar sampling supports dimensions 2, 4, 8 and 16, got " + std::to_string(dim));
  MatX g(dim, dim);
  const double scale = 1.0 / std::sqrt(2.0);
  for (int c = 0; c < dim; ++c)
    for (int r = 0; r < dim; ++r) {
      double re = rng.normal();
      double im = rng.normal();
      g(r, c) = cplx(re * scale, im * scale);
    }
  Eigen::HouseholderQR<MatX> qr(g);
  MatX q = qr.householderQ();
  const MatX& rmat = qr.matrixQR();
  for (int i = 0; i < dim; ++i) {
    cplx d = rmat(i, i);
    double mag = std::abs(d);
    q.col(i) *= mag > 0.0 ? d / mag : cplx(1.0, 0.0);
  }
  return q;
}

Circuit ghz_circuit(int n) {
  if (n < 1) throw PreconditionError("GHZ state needs at least one qubit");
  Circuit c(n);
  c.metadata().name = "ghz_" + std::to_string(n);
  c.append(gates::h(0));
  for (int q = 0; q + 1 < n; ++q) c.append(gates::cx(q, q + 1));
  return c;
}

Circuit qv_layers_circuit(int width, int depth, Rng& rng) {
  if (width < 2) throw PreconditionError("model circuits need width >= 2");
  if (depth < 1) throw PreconditionError("model circuits need depth >= 1");
  Circuit c(width);
  stamp(c, "qv_" + std::to_string(width) + "x" + std::to_string(depth), rng);
  for (int d = 0; d < depth; ++d) {
    std::vector<int> perm = random_permutation(width, rng);
    std::vector<Gate> layer;
    for (int k = 0; k + 1 < width; k += 2) {
      Mat4 u = haar_unitary(4, rng);
      layer.push_back(gates::u2q(perm[static_cast<std::size_t>(k)], perm[static_cast<std::size_t>(k + 1)], u));
    }
    c.add_layer(std::move(layer));
  }
  return c;
}

Circuit qv_model_circuit(int width, Rng& rng) { return qv_layers_circuit(width, width, rng); }

Circuit random_clifford_circuit(int n, int depth, Rng& rng) {
  if (n < 1) throw PreconditionError("random Clifford circuit needs n >= 1");
  if (depth < 1) throw PreconditionError("random Clifford circuit needs depth >= 1");
  static constexpr GateKind kOne[] = {GateKind::H, GateKind::S, GateKind::Sdg,
                                      GateKind::X, GateKind::Y, GateKind::Z};
  static constexpr GateKind kTwo[] = {GateKind::CX, GateKind::CZ, GateKind::SWAP};
  Circuit c(n);
  stamp(c, "clifford_" + std::to_string(n) + "x" + std::to_string(depth), rng);
  for (int d = 0; d < depth; ++d) {
    std::vector<int> perm = random_permutation(n, rng);
    std::vector<Gate> layer;
    std::size_t i = 0;
    while (i < perm.size()) {
      if (i + 1 < perm.size() && rng.below(2) == 0) {
        GateKind k = kTwo[rng.below(3)];
        int a = perm[i], b = perm[i + 1];
        layer.push_back(k == GateKind::CX ? gates::cx(a, b) : k == GateKind::CZ ? gates::cz(a, b) : gates::swap(a, b));
        i += 2;
      } else {
        layer.push_back(gates::single(kOne[rng.below(6)], perm[i]));
        i += 1;
      }
    }
    c.add_layer(std::move(layer));
  }
  return c;
}

std::size_t sample_clifford_index(int n, Rng& rng) {
  if (n == 1) return static_cast<std::size_t>(rng.below(CliffordGroup::one_qubit().size()));
  if (n == 2) return static_cast<std::size_t>(rng.below(CliffordGroup::two_qubit().size()));
  throw PreconditionError("Clifford elements are sampled for 1 or 2 qubits only, got " + std::to_string(n));
}

Circuit sample_clifford_element(int n, Rng& rng) {
  Rng origin = rng;
  std::size_t idx = sample_clifford_index(n, rng);
  const CliffordGroup& group = n == 1 ? CliffordGroup::one_qubit() : CliffordGroup::two_qubit();
  Circuit c(n);
  stamp(c, "clifford_element_" + std::to_string(idx), origin);
  std::vector<int> qubits;
  for (int q = 0; q < n; ++q) qubits.push_back(q);
  c.append(group.instantiate(idx, qubits));
  return c;
}

MirrorSpec make_mirror_circuit(const Circuit& base, Rng& rng) {
  if (base.has_measurements()) throw PreconditionError("mirror base must be measurement-free");
  base.for_each_gate([](const Gate& g) {
    if (g.kind == GateKind::Barrier) return;
    if (!is_clifford(g))
      throw PreconditionError("mirror base must be Clifford-only; found " + std::string(gate_name(g.kind)));
  });
  const int n = base.n_qubits();
  if (n < 1) throw PreconditionError("mirror base has no qubits");

  MirrorSpec spec;
  spec.base = base;
  spec.prep_basis.resize(static_cast<std::size_t>(n));
  spec.prep_flip.resize(static_cast<std::size_t>(n));
  std::string letters;
  for (int q = 0; q < n; ++q) {
    spec.prep_basis[static_cast<std::size_t>(q)] = static_cast<PrepBasis>(rng.below(3));
    spec.prep_flip[static_cast<std::size_t>(q)] = static_cast<std::uint8_t>(rng.below(2));
  }
  for (int q = 0; q < n; ++q) letters += "IXYZ"[rng.below(4)];
  spec.central = PauliString(letters, 1);

  Circuit full(n);
  full.metadata() = base.metadata();
  full.metadata().input_layout.clear();
  full.metadata().name = base.metadata().name.empty() ? "mirror" : "mirror_" + base.metadata().name;
  full.metadata().seed = rng.seed();
  full.metadata().stream = rng.stream();
  full.metadata().has_seed = true;
  for (int q = 0; q < n; ++q) {
    if (spec.prep_flip[static_cast<std::size_t>(q)]) full.append(gates::x(q));
    switch (spec.prep_basis[static_cast<std::size_t>(q)]) {
      case PrepBasis::Z: break;
      case PrepBasis::X: full.append(gates::h(q)); break;
      case PrepBasis::Y:
        full.append(gates::h(q));
        full.append(gates::s(q));
        break;
    }
  }
  full.extend(base);
  std::vector<int> all;
  for (int q = 0; q < n; ++q) all.push_back(q);
  full.append(gates::pauli_layer(all, letters));
  full.extend(inverse_circuit(base));
  for (int q = 0; q < n; ++q) {
    switch (spec.prep_basis[static_cast<std::size_t>(q)]) {
      case PrepBasis::Z: break;
      case PrepBasis::X: full.append(gates::h(q)); break;
      case PrepBasis::Y:
        full.append(gates::sdg(q));
        full.append(gates::h(q));
        break;
    }
  }
  for (int q = 0; q < n; ++q) full.append(gates::measure(q, q));
  spec.expected = deterministic_outcome(full);
  spec.full = std::move(full);
  return spec;
}

std::string shape_name(VolumetricShape s) {
  switch (s) {
    case VolumetricShape::Square: return "square";
    case VolumetricShape::Shallow: return "shallow";
    case VolumetricShape::Deep: return "deep";
    case VolumetricShape::AQ: return "aq";
  }
  return "square";
}

VolumetricShape shape_from_name(const std::string& name) {
  if (name == "square") return VolumetricShape::Square;
  if (name == "shallow") return VolumetricShape::Shallow;
  if (name == "deep") return VolumetricShape::Deep;
  if (name == "aq") return VolumetricShape::AQ;
  throw PreconditionError("unknown volumetric shape '" + name + "' (expected square, shallow, deep or aq)");
}

int volumetric_depth(VolumetricShape shape, int width) {
  if (width < 1) throw PreconditionError("width must be positive");
  switch (shape) {
    case VolumetricShape::Square: return width;
    case VolumetricShape::Shallow: {
      int bits = 0;
      while ((1 << bits) < width) ++bits;
      return bits + 1;
    }
    case VolumetricShape::Deep: return 4 * width;
    case VolumetricShape::AQ: return width * width;
  }
  return width;
}

std::vector<VolumetricCircuit> volumetric_family(VolumetricShape shape, const std::vector<int>& widths,
                                                 Rng& rng) {
  if (widths.empty()) throw PreconditionError("volumetric family needs at least one width");
  std::vector<VolumetricCircuit> out;
  for (std::size_t i = 0; i < widths.size(); ++i) {
    int w = widths[i];
    int d = volumetric_depth(shape, w);
    Rng sub = rng.substream(i);
    Circuit c = qv_layers_circuit(w, d, sub);
    c.metadata().name = shape_name(shape) + "_" + std::to_string(w) + "x" + std::to_string(d);
    out.push_back({w, d, std::move(c)});
  }
  return out;
}

}  // namespace qbench
