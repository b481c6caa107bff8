#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "qfactory/mp12.hpp"
#include "qfactory/reg2.hpp"

namespace qfactory {

// Binary key files: header {magic "QFMP", version u16, n, k, m_bar, omega, mu
// as u64 little-endian}, then tagged sections {u8 tag, serialized matrix}.
//   public key : 'A' (n x m), optional 'b' (b0)
//   trapdoor   : 'R' (m_bar x omega, signed), optional 's' (s0), 'e' (e0)
inline constexpr std::uint16_t kKeyFileVersion = 1;

std::vector<std::uint8_t> write_key(const Mp12Key& key);
std::vector<std::uint8_t> write_key(const Reg2Key& key);
std::vector<std::uint8_t> write_trapdoor(const LweParams& params, const Mp12Trapdoor& td);
std::vector<std::uint8_t> write_trapdoor(const LweParams& params, const Reg2Trapdoor& td);

Mp12Key read_mp12_key(std::span<const std::uint8_t> bytes);
Reg2Key read_reg2_key(std::span<const std::uint8_t> bytes);
std::pair<LweParams, Reg2Trapdoor> read_reg2_trapdoor(std::span<const std::uint8_t> bytes);

nlohmann::json to_json(const LweParams& p);
nlohmann::json to_json(const Reg2Key& key);
nlohmann::json to_json(const Reg2Trapdoor& td);

std::string u128_to_string(u128 v);

}  // namespace qfactory
