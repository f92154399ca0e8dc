#include "afdxnoc/frame.hpp"

#include <array>
#include <string>

#include "afdxnoc/bytes.hpp"

namespace afdxnoc {
namespace {

// Byte offsets inside the Ethernet frame (0 = first dst MAC byte).
constexpr std::size_t kDstMacOff = 0;
constexpr std::size_t kSrcMacOff = 6;
constexpr std::size_t kEtherTypeOff = 12;
constexpr std::size_t kIpOff = 14;
constexpr std::size_t kUdpOff = kIpOff + kIpHeaderBytes;
constexpr std::size_t kPayloadOff = kUdpOff + kUdpHeaderBytes;

constexpr std::uint32_t kCrcPolyReflected = 0xEDB88320u;  // 0x04C11DB7 reflected

std::array<std::uint32_t, 256> make_crc_table() {
    std::array<std::uint32_t, 256> table{};
    for (std::uint32_t n = 0; n < 256; ++n) {
        std::uint32_t c = n;
        for (int k = 0; k < 8; ++k)
            c = (c & 1u) ? (c >> 1) ^ kCrcPolyReflected : c >> 1;
        table[n] = c;
    }
    return table;
}

const std::array<std::uint32_t, 256> kCrcTable = make_crc_table();

}  // namespace

std::uint32_t crc32(std::span<const std::uint8_t> data) {
    std::uint32_t crc = 0xFFFFFFFFu;
    for (std::uint8_t byte : data)
        crc = kCrcTable[(crc ^ byte) & 0xFF] ^ (crc >> 8);
    return ~crc;
}

std::uint16_t ip_header_checksum(std::span<const std::uint8_t> header) {
    std::uint32_t sum = 0;
    for (std::size_t i = 0; i + 1 < header.size(); i += 2) {
        sum += get_be16(header, i);
        sum = (sum & 0xFFFF) + (sum >> 16);
    }
    return std::uint16_t(~sum) & 0xFFFF;
}

std::uint8_t next_seq(std::uint8_t current) {
    return current == 255 ? std::uint8_t(1) : std::uint8_t(current + 1);
}

std::size_t encoded_ethernet_size(std::size_t payload_len) {
    std::size_t unpadded = kFrameOverheadBytes + payload_len;
    return unpadded < kMinEthernetBytes ? kMinEthernetBytes : unpadded;
}

std::uint32_t WireFrame::stored_fcs() const {
    return get_be32(bytes, bytes.size() - kFcsBytes);
}

WireFrame encode(const Frame& frame) {
    if (frame.payload.size() > kMaxPayloadBytes)
        throw OversizeMessage("payload of " + std::to_string(frame.payload.size()) +
                              " bytes exceeds the " + std::to_string(kMaxPayloadBytes) +
                              "-byte envelope");

    const std::size_t eth_size = encoded_ethernet_size(frame.payload.size());
    const std::uint16_t ip_total = std::uint16_t(kIpHeaderBytes + kUdpHeaderBytes +
                                                 frame.payload.size());
    const std::uint16_t udp_len = std::uint16_t(kUdpHeaderBytes + frame.payload.size());

    WireFrame out;
    out.bytes.assign(kPhyOverheadBytes + eth_size, 0x00);
    auto wire = std::span<std::uint8_t>(out.bytes);

    for (std::size_t i = 0; i < kPreambleBytes; ++i) wire[i] = kPreambleByte;
    wire[kPreambleBytes] = kSfdByte;

    auto eth = wire.subspan(kPhyOverheadBytes);

    // Destination MAC embeds the VLID, source MAC the End System id.
    eth[kDstMacOff] = 0x03;
    put_be16(eth, kDstMacOff + 4, frame.vlid);
    eth[kSrcMacOff] = 0x02;
    put_be16(eth, kSrcMacOff + 4, frame.src_es);
    put_be16(eth, kEtherTypeOff, kEtherTypeIpv4);

    auto ip = eth.subspan(kIpOff, kIpHeaderBytes);
    ip[0] = 0x45;  // version 4, IHL 5
    put_be16(ip, 2, ip_total);
    ip[8] = 1;     // TTL
    ip[9] = 17;    // UDP
    ip[12] = 10;
    ip[14] = std::uint8_t(frame.src_es >> 8);
    ip[15] = std::uint8_t(frame.src_es & 0xFF);
    ip[16] = 10;
    ip[18] = std::uint8_t(frame.vlid >> 8);
    ip[19] = std::uint8_t(frame.vlid & 0xFF);
    put_be16(ip, 10, ip_header_checksum(ip));

    auto udp = eth.subspan(kUdpOff, kUdpHeaderBytes);
    put_be16(udp, 0, frame.udp_src_port);
    put_be16(udp, 2, frame.udp_dst_port);
    put_be16(udp, 4, udp_len);
    // UDP checksum stays 0 (not computed).

    std::copy(frame.payload.begin(), frame.payload.end(), eth.begin() + kPayloadOff);
    // Zero padding, already in place from the fill above.

    eth[eth_size - kFcsBytes - 1] = frame.seq;
    put_be32(eth, eth_size - kFcsBytes, crc32(eth.first(eth_size - kFcsBytes)));
    return out;
}

Frame decode(const WireFrame& wire) {
    const auto& b = wire.bytes;
    if (b.size() < kPhyOverheadBytes + kMinEthernetBytes)
        throw MalformedFrame("wire image of " + std::to_string(b.size()) +
                             " bytes is below the 72-byte minimum");
    for (std::size_t i = 0; i < kPreambleBytes; ++i)
        if (b[i] != kPreambleByte)
            throw MalformedFrame("preamble byte " + std::to_string(i) + " is not 0x55");
    if (b[kPreambleBytes] != kSfdByte)
        throw MalformedFrame("SFD byte is not 0xD5");

    auto eth = wire.ethernet();
    const std::size_t eth_size = eth.size();
    if (eth_size > kMaxEthernetBytes)
        throw MalformedFrame("Ethernet frame of " + std::to_string(eth_size) +
                             " bytes exceeds 1518");

    if (eth[kDstMacOff] != 0x03 || eth[kSrcMacOff] != 0x02)
        throw MalformedFrame("unexpected MAC address prefix");
    if (get_be16(eth, kEtherTypeOff) != kEtherTypeIpv4)
        throw MalformedFrame("EtherType is not IPv4");
    if (eth[kIpOff] != 0x45)
        throw MalformedFrame("IPv4 version/IHL is not 0x45");

    const std::uint16_t ip_total = get_be16(eth, kIpOff + 2);
    if (ip_total < kIpHeaderBytes + kUdpHeaderBytes)
        throw MalformedFrame("IP total length shorter than its headers");
    const std::size_t payload_len = ip_total - kIpHeaderBytes - kUdpHeaderBytes;
    // The payload plus padding must fit between the UDP header and the seq
    // byte.
    if (kPayloadOff + payload_len + kSeqTrailerBytes + kFcsBytes > eth_size)
        throw MalformedFrame("IP total length inconsistent with frame size");
    const std::uint16_t udp_len = get_be16(eth, kUdpOff + 4);
    if (udp_len != kUdpHeaderBytes + payload_len)
        throw MalformedFrame("UDP length inconsistent with IP total length");

    Frame out;
    out.vlid = get_be16(eth, kDstMacOff + 4);
    out.src_es = get_be16(eth, kSrcMacOff + 4);
    out.udp_src_port = get_be16(eth, kUdpOff);
    out.udp_dst_port = get_be16(eth, kUdpOff + 2);
    out.payload.assign(eth.begin() + kPayloadOff, eth.begin() + kPayloadOff + payload_len);
    out.seq = eth[eth_size - kFcsBytes - 1];
    return out;
}

}  // namespace afdxnoc
