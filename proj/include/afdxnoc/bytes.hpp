#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace afdxnoc {

// All multi-byte protocol fields are big-endian (network order).

inline void put_be16(std::span<std::uint8_t> buf, std::size_t at, std::uint16_t v) {
    buf[at] = std::uint8_t(v >> 8);
    buf[at + 1] = std::uint8_t(v & 0xFF);
}

inline void put_be32(std::span<std::uint8_t> buf, std::size_t at, std::uint32_t v) {
    buf[at] = std::uint8_t(v >> 24);
    buf[at + 1] = std::uint8_t((v >> 16) & 0xFF);
    buf[at + 2] = std::uint8_t((v >> 8) & 0xFF);
    buf[at + 3] = std::uint8_t(v & 0xFF);
}

inline std::uint16_t get_be16(std::span<const std::uint8_t> buf, std::size_t at) {
    return std::uint16_t((std::uint16_t(buf[at]) << 8) | buf[at + 1]);
}

inline std::uint32_t get_be32(std::span<const std::uint8_t> buf, std::size_t at) {
    return (std::uint32_t(buf[at]) << 24) | (std::uint32_t(buf[at + 1]) << 16) |
           (std::uint32_t(buf[at + 2]) << 8) | std::uint32_t(buf[at + 3]);
}

std::string to_hex(std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> from_hex(const std::string& hex);

}  // namespace afdxnoc
