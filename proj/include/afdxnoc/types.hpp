#pragma once

#include <cstdint>
#include <vector>

namespace afdxnoc {

// Global simulation time unit. The network is clocked; one byte crosses a
// link per cycle.
using Cycle = std::uint64_t;

// Bookkeeping that rides alongside a frame inside the simulator. Never
// consulted by switching logic, which sees only the wire bytes.
struct FrameMeta {
    std::uint64_t uid = 0;       // unique per emission; copies share it
    std::uint16_t vlid = 0;
    std::uint8_t seq = 0;
    Cycle injected_at = 0;
    int origin_node = -1;

    bool operator==(const FrameMeta&) const = default;
};

// A fully received wire image plus its simulator-side metadata.
struct StoredFrame {
    std::vector<std::uint8_t> wire;
    FrameMeta meta;

    std::size_t size_bytes() const { return wire.size(); }
};

}  // namespace afdxnoc
