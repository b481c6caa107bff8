#include "qfactory/rng.hpp"

#include <cmath>

namespace qfactory {

namespace {

std::mt19937_64 seeded(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed),
                    static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream),
                    static_cast<std::uint32_t>(stream >> 32), 0x51f4u};
  return std::mt19937_64(seq);
}

}  // namespace

Rng::Rng(std::uint64_t seed) : engine_(seeded(seed, 0)) {}

Rng::Rng(std::uint64_t seed, std::uint64_t stream)
    : engine_(seeded(seed, stream + 1)) {}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  return Rng(seed, index).next_u64();
}

double Rng::uniform01() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

std::int64_t Rng::uniform_int(std::int64_t lo, std::int64_t hi) {
  return std::uniform_int_distribution<std::int64_t>(lo, hi)(engine_);
}

double Rng::uniform_real(double lo, double hi) {
  return lo + (hi - lo) * uniform01();
}

u128 Rng::uniform_bits(int k) {
  u128 v = engine_();
  if (k > 64) v |= static_cast<u128>(engine_()) << 64;
  if (k >= 128) return v;
  return v & ((u128{1} << k) - 1);
}

double Rng::normal(double sigma) { return sigma * normal_(engine_); }

SignedVector sample_gaussian_vector(std::size_t len, double sigma, Rng& rng) {
  if (!(sigma > 0)) {
    throw Error(ErrorCode::kInvalidArgument, "gaussian sigma must be positive");
  }
  SignedVector v;
  v.entries.resize(len);
  for (auto& e : v.entries) e = std::llround(rng.normal(sigma));
  return v;
}

SignedMatrix sample_gaussian_matrix(std::size_t rows, std::size_t cols,
                                    double sigma, Rng& rng) {
  SignedMatrix m{rows, cols, sample_gaussian_vector(rows * cols, sigma, rng).entries};
  return m;
}

ZqVector sample_uniform_vector(std::size_t len, const Modulus& mod, Rng& rng) {
  ZqVector v(len, mod);
  for (auto& x : v.mutable_values()) x = rng.uniform_bits(mod.bits());
  return v;
}

ZqMatrix sample_uniform_matrix(std::size_t rows, std::size_t cols,
                               const Modulus& mod, Rng& rng) {
  ZqMatrix m(rows, cols, mod);
  for (auto& x : m.mutable_values()) x = rng.uniform_bits(mod.bits());
  return m;
}

SignedVector sample_bounded_vector(std::size_t len, std::int64_t bound, Rng& rng) {
  SignedVector v;
  v.entries.resize(len);
  for (auto& e : v.entries) e = rng.uniform_int(-bound, bound);
  return v;
}

}  // namespace qfactory
