#include "qfactory/kernels.hpp"

#include <cmath>

namespace qfactory::kernels {

namespace {

// Below this many multiply-adds the OpenMP fork costs more than it saves.
constexpr std::size_t kParallelThreshold = 1 << 14;

}  // namespace

Complex octant_phase(int r) {
  static const double h = std::sqrt(0.5);
  static const Complex table[8] = {{1, 0},  {h, h},   {0, 1},  {-h, h},
                                   {-1, 0}, {-h, -h}, {0, -1}, {h, -h}};
  return table[((r % 8) + 8) % 8];
}

void matmul(std::span<const u128> a, std::span<const u128> b, std::span<u128> c,
            std::size_t rows, std::size_t inner, std::size_t cols,
            const Modulus& mod) {
  const u128 mask = mod.mask();
  const auto nrows = static_cast<std::ptrdiff_t>(rows);
#pragma omp parallel for schedule(static) if (rows * inner * cols > kParallelThreshold)
  for (std::ptrdiff_t r = 0; r < nrows; ++r) {
    u128* out = c.data() + r * cols;
    for (std::size_t j = 0; j < cols; ++j) out[j] = 0;
    for (std::size_t k = 0; k < inner; ++k) {
      const u128 arow = a[r * inner + k];
      if (arow == 0) continue;
      const u128* brow = b.data() + k * cols;
      for (std::size_t j = 0; j < cols; ++j) out[j] += arow * brow[j];
    }
    for (std::size_t j = 0; j < cols; ++j) out[j] &= mask;
  }
}

void vecmat(std::span<const u128> v, std::span<const u128> m,
            std::span<u128> out, std::size_t rows, std::size_t cols,
            const Modulus& mod) {
  const u128 mask = mod.mask();
  const auto ncols = static_cast<std::ptrdiff_t>(cols);
#pragma omp parallel for schedule(static) if (rows * cols > kParallelThreshold)
  for (std::ptrdiff_t j = 0; j < ncols; ++j) {
    u128 acc = 0;
    for (std::size_t i = 0; i < rows; ++i) acc += v[i] * m[i * cols + j];
    out[j] = acc & mask;
  }
}

double equatorial_p0(std::span<const Complex> amps, int qubit, int alpha) {
  const std::size_t bit = std::size_t{1} << qubit;
  const Complex w = std::conj(octant_phase(alpha));
  const auto n = static_cast<std::ptrdiff_t>(amps.size());
  double p = 0.0;
#pragma omp parallel for reduction(+ : p) schedule(static) if (amps.size() > kParallelThreshold)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    if (i & bit) continue;
    Complex c = (amps[i] + w * amps[i | bit]);
    p += 0.5 * std::norm(c);
  }
  return p;
}

void equatorial_collapse(std::span<Complex> amps, int qubit, int alpha, int b,
                         double p_b) {
  const std::size_t bit = std::size_t{1} << qubit;
  const Complex phase = octant_phase(alpha + 4 * b);
  const Complex w = std::conj(phase);
  const double scale = 0.5 / std::sqrt(p_b);
  const auto n = static_cast<std::ptrdiff_t>(amps.size());
#pragma omp parallel for schedule(static) if (amps.size() > kParallelThreshold)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    if (i & bit) continue;
    Complex c = (amps[i] + w * amps[i | bit]) * scale;
    amps[i] = c;
    amps[i | bit] = phase * c;
  }
}

namespace serial {

void matmul(std::span<const u128> a, std::span<const u128> b, std::span<u128> c,
            std::size_t rows, std::size_t inner, std::size_t cols,
            const Modulus& mod) {
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t j = 0; j < cols; ++j) {
      u128 acc = 0;
      for (std::size_t k = 0; k < inner; ++k) acc += a[r * inner + k] * b[k * cols + j];
      c[r * cols + j] = mod.reduce(acc);
    }
  }
}

void vecmat(std::span<const u128> v, std::span<const u128> m,
            std::span<u128> out, std::size_t rows, std::size_t cols,
            const Modulus& mod) {
  for (std::size_t j = 0; j < cols; ++j) {
    u128 acc = 0;
    for (std::size_t i = 0; i < rows; ++i) acc += v[i] * m[i * cols + j];
    out[j] = mod.reduce(acc);
  }
}

double equatorial_p0(std::span<const Complex> amps, int qubit, int alpha) {
  const std::size_t bit = std::size_t{1} << qubit;
  const Complex w = std::conj(octant_phase(alpha));
  double p = 0.0;
  for (std::size_t i = 0; i < amps.size(); ++i) {
    if (i & bit) continue;
    p += 0.5 * std::norm(amps[i] + w * amps[i | bit]);
  }
  return p;
}

void equatorial_collapse(std::span<Complex> amps, int qubit, int alpha, int b,
                         double p_b) {
  const std::size_t bit = std::size_t{1} << qubit;
  const Complex phase = octant_phase(alpha + 4 * b);
  const double scale = 0.5 / std::sqrt(p_b);
  for (std::size_t i = 0; i < amps.size(); ++i) {
    if (i & bit) continue;
    Complex c = (amps[i] + std::conj(phase) * amps[i | bit]) * scale;
    amps[i] = c;
    amps[i | bit] = phase * c;
  }
}

}  // namespace serial

}  // namespace qfactory::kernels
