#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "qfactory/error.hpp"

namespace qfactory {

using u128 = unsigned __int128;
using i128 = __int128;

// Power-of-two modulus q = 2^k, 1 <= k <= 127. Arithmetic is done in wrapping
// 128-bit unsigned integers and masked, which is exact because q divides 2^128.
class Modulus {
 public:
  static constexpr int kMaxBits = 127;

  explicit Modulus(int k);

  int bits() const { return bits_; }
  u128 q() const { return u128{1} << bits_; }
  u128 mask() const { return mask_; }
  u128 half() const { return u128{1} << (bits_ - 1); }

  u128 reduce(u128 v) const { return v & mask_; }
  u128 add(u128 a, u128 b) const { return (a + b) & mask_; }
  u128 sub(u128 a, u128 b) const { return (a - b) & mask_; }
  u128 mul(u128 a, u128 b) const { return (a * b) & mask_; }
  u128 from_signed(std::int64_t v) const {
    return static_cast<u128>(static_cast<i128>(v)) & mask_;
  }
  // Representative in (-q/2, q/2].
  i128 lift(u128 v) const;

  bool operator==(const Modulus&) const = default;

 private:
  int bits_;
  u128 mask_;
};

struct ZqScalar {
  u128 value;
  Modulus modulus;
};

class ZqVector {
 public:
  ZqVector(std::size_t size, Modulus modulus);
  ZqVector(std::vector<u128> values, Modulus modulus);

  std::size_t size() const { return data_.size(); }
  const Modulus& modulus() const { return modulus_; }
  u128 operator[](std::size_t i) const { return data_[i]; }
  void set(std::size_t i, u128 v) { data_[i] = modulus_.reduce(v); }
  std::span<const u128> values() const { return data_; }
  std::span<u128> mutable_values() { return data_; }

  ZqVector operator+(const ZqVector& other) const;
  ZqVector operator-(const ZqVector& other) const;
  ZqVector scaled(u128 factor) const;
  bool operator==(const ZqVector&) const = default;

 private:
  std::vector<u128> data_;
  Modulus modulus_;
};

// Row-major dense matrix over Z_q.
class ZqMatrix {
 public:
  ZqMatrix(std::size_t rows, std::size_t cols, Modulus modulus);

  static ZqMatrix identity(std::size_t n, Modulus modulus);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  const Modulus& modulus() const { return modulus_; }
  u128 at(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
  void set(std::size_t r, std::size_t c, u128 v) {
    data_[r * cols_ + c] = modulus_.reduce(v);
  }
  std::span<const u128> values() const { return data_; }
  std::span<u128> mutable_values() { return data_; }

  ZqMatrix operator+(const ZqMatrix& other) const;
  ZqMatrix operator-(const ZqMatrix& other) const;
  ZqMatrix scaled(u128 factor) const;
  ZqMatrix transposed() const;
  // Columns [first, first + count).
  ZqMatrix column_block(std::size_t first, std::size_t count) const;
  static ZqMatrix hconcat(const ZqMatrix& left, const ZqMatrix& right);
  bool operator==(const ZqMatrix&) const = default;

 private:
  std::size_t rows_;
  std::size_t cols_;
  Modulus modulus_;
  std::vector<u128> data_;
};

// Integer vector used for error terms before embedding into Z_q.
struct SignedVector {
  std::vector<std::int64_t> entries;

  std::size_t size() const { return entries.size(); }
  std::int64_t inf_norm() const;
  long double l2_norm() const;
  ZqVector embed(Modulus modulus) const;
  SignedVector operator+(const SignedVector& other) const;
  SignedVector operator-(const SignedVector& other) const;
  bool operator==(const SignedVector&) const = default;
};

struct SignedMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<std::int64_t> entries;  // row-major

  std::int64_t at(std::size_t r, std::size_t c) const {
    return entries[r * cols + c];
  }
  ZqMatrix embed(Modulus modulus) const;
  bool operator==(const SignedMatrix&) const = default;
};

// Sequence of {0,1}; qubit i of the protocol register is bit i.
using BitString = std::vector<std::uint8_t>;

std::string to_string(const BitString& bits);

ZqMatrix zq_matmul(const ZqMatrix& a, const ZqMatrix& b);
// Row vector times matrix: v^T M.
ZqVector zq_vecmat(const ZqVector& v, const ZqMatrix& m);

// Little-endian byte serialization. Matrices: u64 rows, u64 cols, u8 limbs per
// entry (ceil(k/64)), then entries as little-endian u64 limbs. Vectors use the
// same layout as a 1 x len matrix.
void serialize(const ZqMatrix& m, std::vector<std::uint8_t>& out);
void serialize(const ZqVector& v, std::vector<std::uint8_t>& out);
void serialize(const SignedVector& v, std::vector<std::uint8_t>& out);
void serialize(const SignedMatrix& m, std::vector<std::uint8_t>& out);

class ByteReader {
 public:
  explicit ByteReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  std::uint8_t u8();
  std::uint16_t u16();
  std::uint32_t u32();
  std::uint64_t u64();
  std::int64_t i64() { return static_cast<std::int64_t>(u64()); }
  std::span<const std::uint8_t> take(std::size_t n);
  std::size_t remaining() const { return bytes_.size() - pos_; }
  bool done() const { return remaining() == 0; }

  ZqMatrix zq_matrix(Modulus modulus);
  ZqVector zq_vector(Modulus modulus);
  SignedVector signed_vector();
  SignedMatrix signed_matrix();

 private:
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

void put_u8(std::vector<std::uint8_t>& out, std::uint8_t v);
void put_u16(std::vector<std::uint8_t>& out, std::uint16_t v);
void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v);
void put_u64(std::vector<std::uint8_t>& out, std::uint64_t v);

}  // namespace qfactory
