#pragma once

#include <array>
#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <vector>

#include "afdxnoc/frame.hpp"
#include "afdxnoc/types.hpp"

namespace afdxnoc {

// Per-port storage: one maximum frame (1526 wire bytes) fits, two do not.
inline constexpr std::size_t kPortBufferBytes = 1600;

enum class DropReason : std::uint8_t {
    BadLength,
    BadFcs,
    UnknownAddress,
    BufferOverflow,
};
inline constexpr std::size_t kDropReasonCount = 4;

const char* to_string(DropReason reason);
std::optional<DropReason> drop_reason_from_string(const std::string& name);

// Per-RX-port controller states, in pipeline order. Drop and Forward both
// return to Idle.
enum class ControllerState : std::uint8_t {
    Idle,
    Receiving,
    CheckLength,
    CheckFcs,
    Lookup,
    Forward,
    Drop,
};

const char* to_string(ControllerState state);

// Flags raised by the test unit, CRC module, and addresses table.
struct ControllerInputs {
    bool frame_detected = false;
    bool reception_complete = false;
    bool length_ok = false;
    bool fcs_ok = false;
    bool address_found = false;
    bool forward_done = false;
};

// Advances exactly one transition of the controller state machine.
ControllerState step_controller(ControllerState state, const ControllerInputs& in);

// Static forwarding table: VLID -> set of TX port indices.
class AddressTable {
public:
    AddressTable() = default;

    // Entry sets must be non-empty; port indices are validated by the owning
    // switch configuration.
    void add(std::uint16_t vlid, std::set<int> tx_ports);
    std::optional<std::set<int>> lookup(std::uint16_t vlid) const;
    const std::map<std::uint16_t, std::set<int>>& entries() const { return entries_; }
    bool empty() const { return entries_.empty(); }

private:
    std::map<std::uint16_t, std::set<int>> entries_;
};

// FIFO frame store with a 1600-byte capacity, used on both the RX and the
// TX side of every port.
class PortBuffer {
public:
    explicit PortBuffer(std::size_t capacity_bytes = kPortBufferBytes)
        : capacity_(capacity_bytes) {}

    // Drop-newest policy: returns false and leaves the buffer untouched when
    // the frame does not fit.
    bool try_enqueue(StoredFrame frame);
    std::optional<StoredFrame> dequeue();
    const StoredFrame* front() const;

    std::size_t capacity_bytes() const { return capacity_; }
    std::size_t occupancy_bytes() const { return occupancy_; }
    std::size_t peak_occupancy_bytes() const { return peak_; }
    std::size_t frame_count() const { return fifo_.size(); }
    bool empty() const { return fifo_.empty(); }
    const std::deque<StoredFrame>& frames() const { return fifo_; }

private:
    std::size_t capacity_;
    std::deque<StoredFrame> fifo_;
    std::size_t occupancy_ = 0;
    std::size_t peak_ = 0;
};

struct SwitchConfig {
    int port_count = 0;
    bool broadcast = false;
    // Alternative reading of "all transmitting ports": leave out the TX port
    // paired with the ingress RX port.
    bool broadcast_excludes_ingress = false;
    Cycle processing_delay = 4;
    AddressTable table;
};

// Outcome of the filtering pipeline: either a drop with its cause or a
// non-empty set of TX ports.
class ForwardDecision {
public:
    static ForwardDecision drop(DropReason reason);
    static ForwardDecision forward(std::set<int> tx_ports);

    bool is_drop() const { return is_drop_; }
    DropReason reason() const { return reason_; }
    const std::set<int>& ports() const { return ports_; }

    bool operator==(const ForwardDecision&) const = default;

private:
    ForwardDecision() = default;
    bool is_drop_ = false;
    DropReason reason_ = DropReason::BadLength;
    std::set<int> ports_;
};

// Scans for seven 0x55 bytes followed by 0xD5 at or after `offset`; returns
// the index of the first byte past the SFD.
std::optional<std::size_t> detect_frame_start(std::span<const std::uint8_t> stream,
                                              std::size_t offset);

// True iff the Ethernet-level length (wire minus preamble/SFD) is in
// [64, 1518].
bool check_length(std::span<const std::uint8_t> wire);

// True iff the CRC over dst MAC..seq equals the trailing four bytes. The
// frame is never modified; there is no FCS regeneration.
bool check_fcs(std::span<const std::uint8_t> wire);

// The full pipeline in flowchart order: length, then FCS, then destination
// address. First failure wins. In broadcast mode every valid frame goes to
// all TX ports.
ForwardDecision process_frame(std::span<const std::uint8_t> wire, int rx_port,
                              const SwitchConfig& config);

// One switch instance: per-port RX/TX buffers, per-RX-port controller, drop
// statistics. Advanced only by its owning driver.
class Switch {
public:
    explicit Switch(SwitchConfig config);

    const SwitchConfig& config() const { return config_; }
    int port_count() const { return config_.port_count; }

    // Test unit saw a preamble on the port; controller leaves Idle.
    void note_frame_incoming(int rx_port);

    // Store-and-forward admission of a fully received frame into the RX
    // buffer. Returns false (and counts a BufferOverflow) when it does not
    // fit.
    bool admit_rx(int rx_port, StoredFrame frame);

    // Runs the pipeline on the oldest admitted frame of the port and removes
    // it from the RX buffer.
    ForwardDecision decide_next(int rx_port);

    // Appends the unmodified wire bytes to a TX buffer; false on overflow
    // (counted per copy).
    bool enqueue_tx(int tx_port, StoredFrame frame);

    PortBuffer& rx_buffer(int port) { return rx_buffers_[std::size_t(port)]; }
    PortBuffer& tx_buffer(int port) { return tx_buffers_[std::size_t(port)]; }
    const PortBuffer& rx_buffer(int port) const { return rx_buffers_[std::size_t(port)]; }
    const PortBuffer& tx_buffer(int port) const { return tx_buffers_[std::size_t(port)]; }

    ControllerState controller_state(int rx_port) const {
        return controller_[std::size_t(rx_port)];
    }

    std::uint64_t drops(DropReason reason) const {
        return drop_counts_[std::size_t(reason)];
    }
    void count_drop(DropReason reason) { ++drop_counts_[std::size_t(reason)]; }

private:
    SwitchConfig config_;
    std::vector<PortBuffer> rx_buffers_;
    std::vector<PortBuffer> tx_buffers_;
    std::vector<ControllerState> controller_;
    std::array<std::uint64_t, kDropReasonCount> drop_counts_{};
};

}  // namespace afdxnoc
