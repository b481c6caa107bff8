#pragma once

// Data-parallel inner loops. Each kernel has an OpenMP version (used by the
// library) and a serial version kept as the reference for tests and benchmarks.
// Both produce bit-identical results for the integer kernels.

#include <complex>
#include <cstddef>
#include <span>

#include "qfactory/zq.hpp"

namespace qfactory::kernels {

using Complex = std::complex<double>;

// c[rows x cols] = a[rows x inner] * b[inner x cols] mod q (row-major).
void matmul(std::span<const u128> a, std::span<const u128> b, std::span<u128> c,
            std::size_t rows, std::size_t inner, std::size_t cols,
            const Modulus& mod);

// out[cols] = v[rows]^T * m[rows x cols] mod q.
void vecmat(std::span<const u128> v, std::span<const u128> m,
            std::span<u128> out, std::size_t rows, std::size_t cols,
            const Modulus& mod);

// Probability of outcome 0 when measuring `qubit` in the basis
// {|0> + (-1)^b e^{i alpha pi/4} |1>}.
double equatorial_p0(std::span<const Complex> amps, int qubit, int alpha);

// Projects onto the outcome-b basis vector and renormalises by 1/sqrt(p_b).
void equatorial_collapse(std::span<Complex> amps, int qubit, int alpha, int b,
                         double p_b);

namespace serial {

void matmul(std::span<const u128> a, std::span<const u128> b, std::span<u128> c,
            std::size_t rows, std::size_t inner, std::size_t cols,
            const Modulus& mod);
void vecmat(std::span<const u128> v, std::span<const u128> m,
            std::span<u128> out, std::size_t rows, std::size_t cols,
            const Modulus& mod);
double equatorial_p0(std::span<const Complex> amps, int qubit, int alpha);
void equatorial_collapse(std::span<Complex> amps, int qubit, int alpha, int b,
                         double p_b);

}  // namespace serial

// e^{i r pi/4} computed from exact octant values.
Complex octant_phase(int r);

}  // namespace qfactory::kernels
