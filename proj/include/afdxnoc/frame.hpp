#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "afdxnoc/errors.hpp"

namespace afdxnoc {

// Wire layout (all sizes in bytes):
//   preamble(7) | SFD(1) | dst MAC(6) | src MAC(6) | EtherType(2) |
//   IPv4 header(20) | UDP header(8) | UDP payload (+ zero padding) |
//   seq(1) | FCS(4)
//
// "Ethernet size" excludes the preamble and SFD and is bounded to
// [64, 1518]; the full wire image is therefore at most 1526 bytes.

inline constexpr std::size_t kPreambleBytes = 7;
inline constexpr std::uint8_t kPreambleByte = 0x55;
inline constexpr std::uint8_t kSfdByte = 0xD5;
inline constexpr std::size_t kPhyOverheadBytes = kPreambleBytes + 1;  // + SFD

inline constexpr std::size_t kEthHeaderBytes = 14;
inline constexpr std::size_t kIpHeaderBytes = 20;
inline constexpr std::size_t kUdpHeaderBytes = 8;
inline constexpr std::size_t kSeqTrailerBytes = 1;
inline constexpr std::size_t kFcsBytes = 4;

// Header + trailer bytes around the UDP payload: 14 + 20 + 8 + 1 + 4.
inline constexpr std::size_t kFrameOverheadBytes =
    kEthHeaderBytes + kIpHeaderBytes + kUdpHeaderBytes + kSeqTrailerBytes + kFcsBytes;

inline constexpr std::size_t kMinEthernetBytes = 64;
inline constexpr std::size_t kMaxEthernetBytes = 1518;
inline constexpr std::size_t kMaxWireBytes = kMaxEthernetBytes + kPhyOverheadBytes;
inline constexpr std::size_t kMaxPayloadBytes = kMaxEthernetBytes - kFrameOverheadBytes;

inline constexpr std::uint16_t kEtherTypeIpv4 = 0x0800;

// Logical frame, before encapsulation. The VLID is the frame's destination
// address; the source End System id rides in the source-address field.
struct Frame {
    std::uint16_t vlid = 0;
    std::uint16_t src_es = 0;
    std::uint16_t udp_src_port = 0;
    std::uint16_t udp_dst_port = 0;
    std::vector<std::uint8_t> payload;
    std::uint8_t seq = 0;

    bool operator==(const Frame&) const = default;
};

// Bit-exact wire image, preamble and SFD included.
struct WireFrame {
    std::vector<std::uint8_t> bytes;

    std::size_t wire_size() const { return bytes.size(); }
    std::size_t ethernet_size() const {
        return bytes.size() >= kPhyOverheadBytes ? bytes.size() - kPhyOverheadBytes : 0;
    }
    std::span<const std::uint8_t> ethernet() const {
        return std::span<const std::uint8_t>(bytes).subspan(kPhyOverheadBytes);
    }
    // Bytes the FCS protects: dst MAC through the seq byte.
    std::span<const std::uint8_t> fcs_covered() const {
        return std::span<const std::uint8_t>(bytes).subspan(kPhyOverheadBytes,
                                                            ethernet_size() - kFcsBytes);
    }
    std::uint32_t stored_fcs() const;

    bool operator==(const WireFrame&) const = default;
};

// Per-VL sequence bookkeeping. A value of 0 goes out exactly once, for the
// first frame after a reset; the counter then runs 1..255 and wraps to 1.
struct SeqState {
    std::optional<std::uint8_t> last_sent;       // sender side
    std::optional<std::uint8_t> expected_next;   // receiver side
};

// IEEE 802.3 CRC-32: reflected, polynomial 0x04C11DB7, init all-ones, final
// complement.
std::uint32_t crc32(std::span<const std::uint8_t> data);

// Internet checksum over exactly 20 header bytes; the caller zeroes the
// checksum field positions first.
std::uint16_t ip_header_checksum(std::span<const std::uint8_t> header);

// Successor in the 0..255 sequence space; wraps 255 -> 1, never returns 0.
std::uint8_t next_seq(std::uint8_t current);

// Ethernet-level size a payload of the given length encodes to, padding
// included.
std::size_t encoded_ethernet_size(std::size_t payload_len);

// Throws OversizeMessage when the payload cannot fit the 1518-byte envelope.
WireFrame encode(const Frame& frame);

// Inverse of encode. Does not validate the FCS. Throws MalformedFrame on
// structural problems (bad preamble/SFD, truncation, inconsistent headers).
Frame decode(const WireFrame& wire);

}  // namespace afdxnoc
