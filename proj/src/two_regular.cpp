#include "qfactory/two_regular.hpp"

#include <algorithm>
#include <numeric>

namespace qfactory {

namespace {

void check_dim(int dim, int max_dim, const char* family) {
  if (dim < 1 || dim > max_dim) {
    throw Error(ErrorCode::kSizeLimit, std::string(family) + " dimension must be in [1, " +
                                           std::to_string(max_dim) + "]");
  }
}

// Inverts a GF(2) matrix given by columns; nullopt if singular.
std::optional<std::vector<std::uint32_t>> invert_gf2(const std::vector<std::uint32_t>& cols,
                                                     int dim) {
  // Work on rows: row i has bit j set iff M[i][j] = 1. Augment with identity.
  std::vector<std::uint64_t> rows(dim, 0);
  for (int j = 0; j < dim; ++j) {
    for (int i = 0; i < dim; ++i) {
      if ((cols[j] >> i) & 1u) rows[i] |= std::uint64_t{1} << j;
    }
  }
  for (int i = 0; i < dim; ++i) rows[i] |= std::uint64_t{1} << (dim + i);
  for (int col = 0; col < dim; ++col) {
    int pivot = -1;
    for (int r = col; r < dim; ++r) {
      if ((rows[r] >> col) & 1u) {
        pivot = r;
        break;
      }
    }
    if (pivot < 0) return std::nullopt;
    std::swap(rows[col], rows[pivot]);
    for (int r = 0; r < dim; ++r) {
      if (r != col && ((rows[r] >> col) & 1u)) rows[r] ^= rows[col];
    }
  }
  // Row i of the inverse sits in the high half of rows[i].
  std::vector<std::uint32_t> inv_cols(dim, 0);
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) {
      if ((rows[i] >> (dim + j)) & 1u) inv_cols[j] |= 1u << i;
    }
  }
  return inv_cols;
}

std::uint32_t apply_columns(const std::vector<std::uint32_t>& cols, std::uint32_t x) {
  std::uint32_t y = 0;
  for (std::size_t j = 0; j < cols.size(); ++j) {
    if ((x >> j) & 1u) y ^= cols[j];
  }
  return y;
}

std::uint32_t domain_mask(int dim) {
  return dim >= 32 ? ~0u : ((1u << dim) - 1u);
}

}  // namespace

std::pair<ToyLinear::Index, ToyLinear::Trapdoor> ToyLinear::gen(int dim, Rng& rng) {
  check_dim(dim, kMaxDim, "toy-linear");
  const std::uint32_t mask = domain_mask(dim);
  for (;;) {
    std::vector<std::uint32_t> cols(dim);
    for (auto& c : cols) c = static_cast<std::uint32_t>(rng.next_u64()) & mask;
    if (auto inv = invert_gf2(cols, dim)) {
      return {Index{dim, std::move(cols)}, Trapdoor{std::move(*inv)}};
    }
  }
}

ToyLinear::Range ToyLinear::eval(const Index& k, Domain x) {
  if (x > domain_mask(k.dim)) throw Error(ErrorCode::kInvalidArgument, "toy-linear input out of range");
  return apply_columns(k.columns, x);
}

std::optional<ToyLinear::Domain> ToyLinear::invert(const Index& k, const Trapdoor& t, Range y) {
  if (y > domain_mask(k.dim)) return std::nullopt;
  Domain x = apply_columns(t.inverse_columns, y);
  if (eval(k, x) != y) return std::nullopt;
  return x;
}

ToyLinear::Domain ToyLinear::sample_domain(const Index& k, Rng& rng) {
  return static_cast<Domain>(rng.next_u64()) & domain_mask(k.dim);
}

std::pair<ToyPermutation::Index, ToyPermutation::Trapdoor> ToyPermutation::gen(int dim, Rng& rng) {
  check_dim(dim, kMaxDim, "toy-perm");
  std::vector<std::uint32_t> table(std::size_t{1} << dim);
  std::iota(table.begin(), table.end(), 0u);
  // Fisher-Yates with the explicit stream; std::shuffle's draw pattern is
  // implementation-defined.
  for (std::size_t i = table.size() - 1; i > 0; --i) {
    auto j = static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(i)));
    std::swap(table[i], table[j]);
  }
  std::vector<std::uint32_t> inverse(table.size());
  for (std::size_t i = 0; i < table.size(); ++i) inverse[table[i]] = static_cast<std::uint32_t>(i);
  return {Index{dim, std::move(table)}, Trapdoor{std::move(inverse)}};
}

std::pair<ToyPermutation::Index, ToyPermutation::Trapdoor> ToyPermutation::identity_permutation(int dim) {
  check_dim(dim, kMaxDim, "toy-perm");
  std::vector<std::uint32_t> table(std::size_t{1} << dim);
  std::iota(table.begin(), table.end(), 0u);
  return {Index{dim, table}, Trapdoor{table}};
}

std::optional<ToyPermutation::Domain> ToyPermutation::invert(const Index& k, const Trapdoor& t,
                                                             Range y) {
  if (y >= t.inverse.size()) return std::nullopt;
  Domain x = t.inverse[y];
  if (k.table[x] != y) return std::nullopt;
  return x;
}

ToyPermutation::Domain ToyPermutation::sample_domain(const Index& k, Rng& rng) {
  return static_cast<Domain>(rng.next_u64()) & domain_mask(k.dim);
}

}  // namespace qfactory
