#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace qbench {

// Bitstring text is classical bit n-1 first, so index i prints as its binary form.
std::string index_to_bitstring(std::uint64_t index, int n_bits);
std::uint64_t bitstring_to_index(const std::string& bits);

// Exact distribution over the 2^n outcomes of n classical bits.
class ProbDist {
 public:
  ProbDist() = default;
  ProbDist(int n_bits, std::vector<double> probs);

  static ProbDist uniform(int n_bits);
  static ProbDist point_mass(int n_bits, std::uint64_t index);

  int n_bits() const { return n_bits_; }
  std::size_t size() const { return probs_.size(); }
  double operator[](std::size_t i) const { return probs_[i]; }
  const std::vector<double>& probs() const { return probs_; }

  // Throws PreconditionError unless entries are nonnegative and sum to 1 within tol.
  void check(double tol = 1e-9) const;

 private:
  int n_bits_ = 0;
  std::vector<double> probs_;
};

// Multiset of measured bitstrings.
class SampleSet {
 public:
  SampleSet() = default;
  explicit SampleSet(int n_bits) : n_bits_(n_bits) {}

  int n_bits() const { return n_bits_; }
  std::uint64_t shots() const { return shots_; }
  const std::map<std::string, std::uint64_t>& counts() const { return counts_; }

  void add(const std::string& bits, std::uint64_t count = 1);
  void add_index(std::uint64_t index, std::uint64_t count = 1);
  std::uint64_t count(const std::string& bits) const;
  std::size_t distinct() const { return counts_.size(); }

  // Associative and commutative.
  void merge(const SampleSet& other);

  // Empirical frequencies as a dense distribution; n_bits must be small.
  ProbDist empirical() const;

  friend bool operator==(const SampleSet&, const SampleSet&) = default;

 private:
  int n_bits_ = 0;
  std::uint64_t shots_ = 0;
  std::map<std::string, std::uint64_t> counts_;
};

}  // namespace qbench
