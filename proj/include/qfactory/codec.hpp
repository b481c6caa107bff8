#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace qfactory {

std::array<std::uint8_t, 32> sha256(std::span<const std::uint8_t> data);
std::array<std::uint8_t, 32> sha256(const std::string& text);
std::string to_hex(std::span<const std::uint8_t> data);

std::string base64_encode(std::span<const std::uint8_t> data);
// Throws kParse on invalid input.
std::vector<std::uint8_t> base64_decode(const std::string& text);

}  // namespace qfactory
