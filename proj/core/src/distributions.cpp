#include "qbench/distributions.hpp"

#include <cmath>

#include "qbench/error.hpp"

namespace qbench {

std::string index_to_bitstring(std::uint64_t index, int n_bits) {
  std::string s(static_cast<std::size_t>(n_bits), '0');
  for (int b = 0; b < n_bits && b < 64; ++b)
    if ((index >> b) & 1ULL) s[static_cast<std::size_t>(n_bits - 1 - b)] = '1';
  return s;
}

std::uint64_t bitstring_to_index(const std::string& bits) {
  if (bits.size() > 64) throw PreconditionError("bitstring too long for an index");
  std::uint64_t v = 0;
  for (char c : bits) {
    if (c != '0' && c != '1') throw PreconditionError("bitstring contains '" + std::string(1, c) + "'");
    v = (v << 1) | static_cast<std::uint64_t>(c == '1');
  }
  return v;
}

ProbDist::ProbDist(int n_bits, std::vector<double> probs)
    : n_bits_(n_bits), probs_(std::move(probs)) {
  if (n_bits < 0 || n_bits > 62) throw PreconditionError("distribution width out of range");
  if (probs_.size() != (std::size_t{1} << n_bits))
    throw PreconditionError("distribution has " + std::to_string(probs_.size()) +
                            " entries, expected 2^" + std::to_string(n_bits));
}

ProbDist ProbDist::uniform(int n_bits) {
  std::size_t n = std::size_t{1} << n_bits;
  return ProbDist(n_bits, std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

ProbDist ProbDist::point_mass(int n_bits, std::uint64_t index) {
  std::vector<double> p(std::size_t{1} << n_bits, 0.0);
  p.at(index) = 1.0;
  return ProbDist(n_bits, std::move(p));
}

void ProbDist::check(double tol) const {
  double sum = 0.0;
  for (double p : probs_) {
    if (!(p >= -tol)) throw PreconditionError("distribution has a negative entry");
    sum += p;
  }
  if (std::abs(sum - 1.0) > tol) throw PreconditionError("distribution does not sum to 1");
}

void SampleSet::add(const std::string& bits, std::uint64_t count) {
  if (static_cast<int>(bits.size()) != n_bits_)
    throw PreconditionError("bitstring width " + std::to_string(bits.size()) +
                            " does not match sample width " + std::to_string(n_bits_));
  if (count == 0) return;
  counts_[bits] += count;
  shots_ += count;
}

void SampleSet::add_index(std::uint64_t index, std::uint64_t count) {
  add(index_to_bitstring(index, n_bits_), count);
}

std::uint64_t SampleSet::count(const std::string& bits) const {
  auto it = counts_.find(bits);
  return it == counts_.end() ? 0 : it->second;
}

void SampleSet::merge(const SampleSet& other) {
  if (other.n_bits_ != n_bits_) throw PreconditionError("cannot merge samples of different widths");
  for (const auto& [k, v] : other.counts_) counts_[k] += v;
  shots_ += other.shots_;
}

ProbDist SampleSet::empirical() const {
  if (n_bits_ > 30) throw CapacityError(n_bits_, 30);
  std::vector<double> p(std::size_t{1} << n_bits_, 0.0);
  if (shots_ == 0) throw PreconditionError("empty sample set");
  for (const auto& [k, v] : counts_)
    p[bitstring_to_index(k)] = static_cast<double>(v) / static_cast<double>(shots_);
  return ProbDist(n_bits_, std::move(p));
}

}  // namespace qbench
