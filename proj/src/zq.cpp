#include "qfactory/zq.hpp"

#include <cmath>
#include <cstdlib>

#include "qfactory/kernels.hpp"

namespace qfactory {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kDimensionMismatch: return "dimension mismatch";
    case ErrorCode::kInvalidArgument: return "invalid argument";
    case ErrorCode::kNormViolation: return "norm violation";
    case ErrorCode::kInvalidParams: return "invalid parameters";
    case ErrorCode::kSizeLimit: return "size limit";
    case ErrorCode::kParse: return "parse error";
    case ErrorCode::kProtocol: return "protocol error";
  }
  return "error";
}

Modulus::Modulus(int k) : bits_(k) {
  if (k < 1 || k > kMaxBits) {
    throw Error(ErrorCode::kInvalidParams,
                "modulus log must be in [1, 127], got " + std::to_string(k));
  }
  mask_ = (u128{1} << k) - 1;
}

i128 Modulus::lift(u128 v) const {
  v = reduce(v);
  if (v > half()) return static_cast<i128>(v) - static_cast<i128>(q());
  return static_cast<i128>(v);
}

ZqVector::ZqVector(std::size_t size, Modulus modulus)
    : data_(size, 0), modulus_(modulus) {}

ZqVector::ZqVector(std::vector<u128> values, Modulus modulus)
    : data_(std::move(values)), modulus_(modulus) {
  for (auto& v : data_) v = modulus_.reduce(v);
}

namespace {

void require_same(const Modulus& a, const Modulus& b) {
  if (!(a == b)) {
    throw Error(ErrorCode::kDimensionMismatch, "operands use different moduli");
  }
}

}  // namespace

ZqVector ZqVector::operator+(const ZqVector& other) const {
  require_same(modulus_, other.modulus_);
  if (size() != other.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "vector lengths differ");
  }
  ZqVector out(size(), modulus_);
  for (std::size_t i = 0; i < size(); ++i) {
    out.data_[i] = modulus_.add(data_[i], other.data_[i]);
  }
  return out;
}

ZqVector ZqVector::operator-(const ZqVector& other) const {
  require_same(modulus_, other.modulus_);
  if (size() != other.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "vector lengths differ");
  }
  ZqVector out(size(), modulus_);
  for (std::size_t i = 0; i < size(); ++i) {
    out.data_[i] = modulus_.sub(data_[i], other.data_[i]);
  }
  return out;
}

ZqVector ZqVector::scaled(u128 factor) const {
  ZqVector out(size(), modulus_);
  for (std::size_t i = 0; i < size(); ++i) {
    out.data_[i] = modulus_.mul(data_[i], factor);
  }
  return out;
}

ZqMatrix::ZqMatrix(std::size_t rows, std::size_t cols, Modulus modulus)
    : rows_(rows), cols_(cols), modulus_(modulus), data_(rows * cols, 0) {}

ZqMatrix ZqMatrix::identity(std::size_t n, Modulus modulus) {
  ZqMatrix out(n, n, modulus);
  for (std::size_t i = 0; i < n; ++i) out.data_[i * n + i] = 1;
  return out;
}

ZqMatrix ZqMatrix::operator+(const ZqMatrix& other) const {
  require_same(modulus_, other.modulus_);
  if (rows_ != other.rows_ || cols_ != other.cols_) {
    throw Error(ErrorCode::kDimensionMismatch, "matrix shapes differ");
  }
  ZqMatrix out(rows_, cols_, modulus_);
  for (std::size_t i = 0; i < data_.size(); ++i) {
    out.data_[i] = modulus_.add(data_[i], other.data_[i]);
  }
  return out;
}

ZqMatrix ZqMatrix::operator-(const ZqMatrix& other) const {
  require_same(modulus_, other.modulus_);
  if (rows_ != other.rows_ || cols_ != other.cols_) {
    throw Error(ErrorCode::kDimensionMismatch, "matrix shapes differ");
  }
  ZqMatrix out(rows_, cols_, modulus_);
  for (std::size_t i = 0; i < data_.size(); ++i) {
    out.data_[i] = modulus_.sub(data_[i], other.data_[i]);
  }
  return out;
}

ZqMatrix ZqMatrix::scaled(u128 factor) const {
  ZqMatrix out(rows_, cols_, modulus_);
  for (std::size_t i = 0; i < data_.size(); ++i) {
    out.data_[i] = modulus_.mul(data_[i], factor);
  }
  return out;
}

ZqMatrix ZqMatrix::transposed() const {
  ZqMatrix out(cols_, rows_, modulus_);
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t c = 0; c < cols_; ++c) {
      out.data_[c * rows_ + r] = data_[r * cols_ + c];
    }
  }
  return out;
}

ZqMatrix ZqMatrix::column_block(std::size_t first, std::size_t count) const {
  if (first + count > cols_) {
    throw Error(ErrorCode::kDimensionMismatch, "column block out of range");
  }
  ZqMatrix out(rows_, count, modulus_);
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t c = 0; c < count; ++c) {
      out.data_[r * count + c] = data_[r * cols_ + first + c];
    }
  }
  return out;
}

ZqMatrix ZqMatrix::hconcat(const ZqMatrix& left, const ZqMatrix& right) {
  require_same(left.modulus_, right.modulus_);
  if (left.rows_ != right.rows_) {
    throw Error(ErrorCode::kDimensionMismatch, "hconcat row counts differ");
  }
  ZqMatrix out(left.rows_, left.cols_ + right.cols_, left.modulus_);
  for (std::size_t r = 0; r < left.rows_; ++r) {
    for (std::size_t c = 0; c < left.cols_; ++c) {
      out.data_[r * out.cols_ + c] = left.at(r, c);
    }
    for (std::size_t c = 0; c < right.cols_; ++c) {
      out.data_[r * out.cols_ + left.cols_ + c] = right.at(r, c);
    }
  }
  return out;
}

std::int64_t SignedVector::inf_norm() const {
  std::int64_t best = 0;
  for (auto v : entries) {
    // |INT64_MIN| is not representable; saturate.
    std::int64_t a = v == INT64_MIN ? INT64_MAX : std::llabs(v);
    if (a > best) best = a;
  }
  return best;
}

long double SignedVector::l2_norm() const {
  long double acc = 0;
  for (auto v : entries) {
    long double x = static_cast<long double>(v);
    acc += x * x;
  }
  return std::sqrt(acc);
}

ZqVector SignedVector::embed(Modulus modulus) const {
  ZqVector out(entries.size(), modulus);
  auto vals = out.mutable_values();
  for (std::size_t i = 0; i < entries.size(); ++i) {
    vals[i] = modulus.from_signed(entries[i]);
  }
  return out;
}

SignedVector SignedVector::operator+(const SignedVector& other) const {
  if (size() != other.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "signed vector lengths differ");
  }
  SignedVector out{entries};
  for (std::size_t i = 0; i < size(); ++i) out.entries[i] += other.entries[i];
  return out;
}

SignedVector SignedVector::operator-(const SignedVector& other) const {
  if (size() != other.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "signed vector lengths differ");
  }
  SignedVector out{entries};
  for (std::size_t i = 0; i < size(); ++i) out.entries[i] -= other.entries[i];
  return out;
}

ZqMatrix SignedMatrix::embed(Modulus modulus) const {
  ZqMatrix out(rows, cols, modulus);
  auto vals = out.mutable_values();
  for (std::size_t i = 0; i < entries.size(); ++i) {
    vals[i] = modulus.from_signed(entries[i]);
  }
  return out;
}

std::string to_string(const BitString& bits) {
  std::string s;
  s.reserve(bits.size());
  for (auto b : bits) s.push_back(b ? '1' : '0');
  return s;
}

ZqMatrix zq_matmul(const ZqMatrix& a, const ZqMatrix& b) {
  require_same(a.modulus(), b.modulus());
  if (a.cols() != b.rows()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "matmul inner dimensions " + std::to_string(a.cols()) + " and " +
                    std::to_string(b.rows()));
  }
  ZqMatrix c(a.rows(), b.cols(), a.modulus());
  kernels::matmul(a.values(), b.values(), c.mutable_values(), a.rows(), a.cols(),
                  b.cols(), a.modulus());
  return c;
}

ZqVector zq_vecmat(const ZqVector& v, const ZqMatrix& m) {
  require_same(v.modulus(), m.modulus());
  if (v.size() != m.rows()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "vecmat length " + std::to_string(v.size()) + " vs rows " +
                    std::to_string(m.rows()));
  }
  ZqVector out(m.cols(), m.modulus());
  kernels::vecmat(v.values(), m.values(), out.mutable_values(), m.rows(),
                  m.cols(), m.modulus());
  return out;
}

// ---- serialization ----

void put_u8(std::vector<std::uint8_t>& out, std::uint8_t v) { out.push_back(v); }

void put_u16(std::vector<std::uint8_t>& out, std::uint16_t v) {
  out.push_back(static_cast<std::uint8_t>(v));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
}

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void put_u64(std::vector<std::uint8_t>& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

namespace {

int limbs_for(const Modulus& mod) { return (mod.bits() + 63) / 64; }

void put_entries(std::span<const u128> vals, const Modulus& mod,
                 std::vector<std::uint8_t>& out) {
  int limbs = limbs_for(mod);
  put_u8(out, static_cast<std::uint8_t>(limbs));
  for (auto v : vals) {
    put_u64(out, static_cast<std::uint64_t>(v));
    if (limbs == 2) put_u64(out, static_cast<std::uint64_t>(v >> 64));
  }
}

}  // namespace

void serialize(const ZqMatrix& m, std::vector<std::uint8_t>& out) {
  put_u64(out, m.rows());
  put_u64(out, m.cols());
  put_entries(m.values(), m.modulus(), out);
}

void serialize(const ZqVector& v, std::vector<std::uint8_t>& out) {
  put_u64(out, 1);
  put_u64(out, v.size());
  put_entries(v.values(), v.modulus(), out);
}

void serialize(const SignedVector& v, std::vector<std::uint8_t>& out) {
  put_u64(out, 1);
  put_u64(out, v.size());
  for (auto e : v.entries) put_u64(out, static_cast<std::uint64_t>(e));
}

void serialize(const SignedMatrix& m, std::vector<std::uint8_t>& out) {
  put_u64(out, m.rows);
  put_u64(out, m.cols);
  for (auto e : m.entries) put_u64(out, static_cast<std::uint64_t>(e));
}

std::span<const std::uint8_t> ByteReader::take(std::size_t n) {
  if (n > remaining()) {
    throw Error(ErrorCode::kParse, "unexpected end of data");
  }
  auto s = bytes_.subspan(pos_, n);
  pos_ += n;
  return s;
}

std::uint8_t ByteReader::u8() { return take(1)[0]; }

std::uint16_t ByteReader::u16() {
  auto s = take(2);
  return static_cast<std::uint16_t>(s[0] | (s[1] << 8));
}

std::uint32_t ByteReader::u32() {
  auto s = take(4);
  std::uint32_t v = 0;
  for (int i = 3; i >= 0; --i) v = (v << 8) | s[i];
  return v;
}

std::uint64_t ByteReader::u64() {
  auto s = take(8);
  std::uint64_t v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | s[i];
  return v;
}

namespace {

constexpr std::uint64_t kMaxElements = std::uint64_t{1} << 28;

std::pair<std::size_t, std::size_t> read_dims(ByteReader& r) {
  std::uint64_t rows = r.u64();
  std::uint64_t cols = r.u64();
  if (rows != 0 && cols > kMaxElements / rows) {
    throw Error(ErrorCode::kParse, "matrix dimensions too large");
  }
  return {rows, cols};
}

}  // namespace

ZqMatrix ByteReader::zq_matrix(Modulus modulus) {
  auto [rows, cols] = read_dims(*this);
  int limbs = u8();
  if (limbs != limbs_for(modulus)) {
    throw Error(ErrorCode::kParse, "limb count does not match modulus");
  }
  ZqMatrix m(rows, cols, modulus);
  auto vals = m.mutable_values();
  for (auto& v : vals) {
    u128 x = u64();
    if (limbs == 2) x |= static_cast<u128>(u64()) << 64;
    if (x > modulus.mask()) throw Error(ErrorCode::kParse, "entry not reduced mod q");
    v = x;
  }
  return m;
}

ZqVector ByteReader::zq_vector(Modulus modulus) {
  ZqMatrix m = zq_matrix(modulus);
  if (m.rows() != 1) throw Error(ErrorCode::kParse, "expected a row vector");
  return ZqVector(std::vector<u128>(m.values().begin(), m.values().end()), modulus);
}

SignedVector ByteReader::signed_vector() {
  auto [rows, cols] = read_dims(*this);
  if (rows != 1) throw Error(ErrorCode::kParse, "expected a row vector");
  SignedVector v;
  v.entries.resize(cols);
  for (auto& e : v.entries) e = i64();
  return v;
}

SignedMatrix ByteReader::signed_matrix() {
  auto [rows, cols] = read_dims(*this);
  SignedMatrix m{rows, cols, std::vector<std::int64_t>(rows * cols)};
  for (auto& e : m.entries) e = i64();
  return m;
}

}  // namespace qfactory
