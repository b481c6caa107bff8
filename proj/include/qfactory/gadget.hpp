#pragma once

#include <optional>

#include "qfactory/zq.hpp"

namespace qfactory {

// G = I_n (x) (1, 2, 4, ..., 2^{k-1}); dims n x nk over Z_{2^k}.
ZqMatrix gadget_matrix(std::size_t n, int k);

// Recovers s from b^T = s^T G + e^T when every |e_j| < q/4. Each coordinate
// of s is decoded one bit at a time, least-significant bit first, starting
// from the 2^{k-1} column. Returns nullopt if any residual b - s^T G lands
// outside the correctable band (-q/4, q/4).
std::optional<ZqVector> gadget_invert(const ZqVector& b, std::size_t n, int k);

}  // namespace qfactory
