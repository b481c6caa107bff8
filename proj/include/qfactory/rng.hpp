#pragma once

#include <cstdint>
#include <random>

#include "qfactory/zq.hpp"

namespace qfactory {

// Explicit, single-owner random state. Independent streams are derived from
// (seed, stream index) so parallel loops can give each work item its own
// generator and stay deterministic regardless of thread count.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);
  Rng(std::uint64_t seed, std::uint64_t stream);

  std::uint64_t next_u64() { return engine_(); }
  // Uniform in [0, 1) with 53 random bits.
  double uniform01();
  int bit() { return static_cast<int>(engine_() >> 63); }
  // Uniform in [lo, hi].
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);
  double uniform_real(double lo, double hi);
  // Uniform k-bit value.
  u128 uniform_bits(int k);
  double normal(double sigma);

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

// Mixes a (seed, index) pair into a fresh 64-bit seed, e.g. for per-run seeds.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

// Each entry is an independent continuous N(0, sigma^2) sample rounded to the
// nearest integer.
SignedVector sample_gaussian_vector(std::size_t len, double sigma, Rng& rng);
SignedMatrix sample_gaussian_matrix(std::size_t rows, std::size_t cols,
                                    double sigma, Rng& rng);
ZqVector sample_uniform_vector(std::size_t len, const Modulus& mod, Rng& rng);
ZqMatrix sample_uniform_matrix(std::size_t rows, std::size_t cols,
                               const Modulus& mod, Rng& rng);
// Uniform integers in [-bound, bound].
SignedVector sample_bounded_vector(std::size_t len, std::int64_t bound, Rng& rng);

}  // namespace qfactory
