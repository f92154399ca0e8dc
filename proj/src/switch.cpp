#include "afdxnoc/switch.hpp"

#include <cassert>
#include <stdexcept>
#include <string>

#include "afdxnoc/bytes.hpp"

namespace afdxnoc {

const char* to_string(DropReason reason) {
    switch (reason) {
        case DropReason::BadLength: return "BadLength";
        case DropReason::BadFcs: return "BadFcs";
        case DropReason::UnknownAddress: return "UnknownAddress";
        case DropReason::BufferOverflow: return "BufferOverflow";
    }
    return "?";
}

std::optional<DropReason> drop_reason_from_string(const std::string& name) {
    if (name == "BadLength") return DropReason::BadLength;
    if (name == "BadFcs") return DropReason::BadFcs;
    if (name == "UnknownAddress") return DropReason::UnknownAddress;
    if (name == "BufferOverflow") return DropReason::BufferOverflow;
    return std::nullopt;
}

const char* to_string(ControllerState state) {
    switch (state) {
        case ControllerState::Idle: return "IDLE";
        case ControllerState::Receiving: return "RECEIVING";
        case ControllerState::CheckLength: return "CHECK_LENGTH";
        case ControllerState::CheckFcs: return "CHECK_FCS";
        case ControllerState::Lookup: return "LOOKUP";
        case ControllerState::Forward: return "FORWARD";
        case ControllerState::Drop: return "DROP";
    }
    return "?";
}

ControllerState step_controller(ControllerState state, const ControllerInputs& in) {
    switch (state) {
        case ControllerState::Idle:
            return in.frame_detected ? ControllerState::Receiving : ControllerState::Idle;
        case ControllerState::Receiving:
            return in.reception_complete ? ControllerState::CheckLength
                                         : ControllerState::Receiving;
        case ControllerState::CheckLength:
            return in.length_ok ? ControllerState::CheckFcs : ControllerState::Drop;
        case ControllerState::CheckFcs:
            return in.fcs_ok ? ControllerState::Lookup : ControllerState::Drop;
        case ControllerState::Lookup:
            return in.address_found ? ControllerState::Forward : ControllerState::Drop;
        case ControllerState::Forward:
            return in.forward_done ? ControllerState::Idle : ControllerState::Forward;
        case ControllerState::Drop:
            return ControllerState::Idle;
    }
    return ControllerState::Idle;
}

void AddressTable::add(std::uint16_t vlid, std::set<int> tx_ports) {
    if (tx_ports.empty())
        throw std::invalid_argument("address table entry for VLID " +
                                    std::to_string(vlid) + " has no TX ports");
    entries_[vlid] = std::move(tx_ports);
}

std::optional<std::set<int>> AddressTable::lookup(std::uint16_t vlid) const {
    auto it = entries_.find(vlid);
    if (it == entries_.end()) return std::nullopt;
    return it->second;
}

bool PortBuffer::try_enqueue(StoredFrame frame) {
    if (occupancy_ + frame.size_bytes() > capacity_) return false;
    occupancy_ += frame.size_bytes();
    if (occupancy_ > peak_) peak_ = occupancy_;
    fifo_.push_back(std::move(frame));
    return true;
}

std::optional<StoredFrame> PortBuffer::dequeue() {
    if (fifo_.empty()) return std::nullopt;
    StoredFrame out = std::move(fifo_.front());
    fifo_.pop_front();
    occupancy_ -= out.size_bytes();
    return out;
}

const StoredFrame* PortBuffer::front() const {
    return fifo_.empty() ? nullptr : &fifo_.front();
}

ForwardDecision ForwardDecision::drop(DropReason reason) {
    ForwardDecision d;
    d.is_drop_ = true;
    d.reason_ = reason;
    return d;
}

ForwardDecision ForwardDecision::forward(std::set<int> tx_ports) {
    assert(!tx_ports.empty());
    ForwardDecision d;
    d.is_drop_ = false;
    d.ports_ = std::move(tx_ports);
    return d;
}

std::optional<std::size_t> detect_frame_start(std::span<const std::uint8_t> stream,
                                              std::size_t offset) {
    if (offset > stream.size()) return std::nullopt;
    for (std::size_t i = offset; i + kPhyOverheadBytes <= stream.size(); ++i) {
        bool preamble = true;
        for (std::size_t j = 0; j < kPreambleBytes; ++j) {
            if (stream[i + j] != kPreambleByte) {
                preamble = false;
                break;
            }
        }
        if (preamble && stream[i + kPreambleBytes] == kSfdByte)
            return i + kPhyOverheadBytes;
    }
    return std::nullopt;
}

bool check_length(std::span<const std::uint8_t> wire) {
    if (wire.size() < kPhyOverheadBytes) return false;
    const std::size_t eth = wire.size() - kPhyOverheadBytes;
    return eth >= kMinEthernetBytes && eth <= kMaxEthernetBytes;
}

bool check_fcs(std::span<const std::uint8_t> wire) {
    if (wire.size() < kPhyOverheadBytes + kFcsBytes) return false;
    auto covered = wire.subspan(kPhyOverheadBytes,
                                wire.size() - kPhyOverheadBytes - kFcsBytes);
    return crc32(covered) == get_be32(wire, wire.size() - kFcsBytes);
}

ForwardDecision process_frame(std::span<const std::uint8_t> wire, int rx_port,
                              const SwitchConfig& config) {
    // Strict short-circuit in flowchart order; the FCS is never computed for
    // a bad-length frame.
    if (!check_length(wire)) return ForwardDecision::drop(DropReason::BadLength);
    if (!check_fcs(wire)) return ForwardDecision::drop(DropReason::BadFcs);

    if (config.broadcast) {
        std::set<int> all;
        for (int p = 0; p < config.port_count; ++p) {
            if (config.broadcast_excludes_ingress && p == rx_port) continue;
            all.insert(p);
        }
        if (all.empty()) return ForwardDecision::drop(DropReason::UnknownAddress);
        return ForwardDecision::forward(std::move(all));
    }

    const std::uint16_t vlid = get_be16(wire, kPhyOverheadBytes + 4);
    auto ports = config.table.lookup(vlid);
    if (!ports) return ForwardDecision::drop(DropReason::UnknownAddress);
    return ForwardDecision::forward(std::move(*ports));
}

Switch::Switch(SwitchConfig config) : config_(std::move(config)) {
    if (config_.port_count <= 0)
        throw std::invalid_argument("switch needs at least one port");
    for (const auto& [vlid, ports] : config_.table.entries()) {
        for (int p : ports) {
            if (p < 0 || p >= config_.port_count)
                throw std::invalid_argument("address table entry for VLID " +
                                            std::to_string(vlid) +
                                            " references TX port " + std::to_string(p) +
                                            " outside 0.." +
                                            std::to_string(config_.port_count - 1));
        }
    }
    rx_buffers_.resize(std::size_t(config_.port_count));
    tx_buffers_.resize(std::size_t(config_.port_count));
    controller_.assign(std::size_t(config_.port_count), ControllerState::Idle);
}

void Switch::note_frame_incoming(int rx_port) {
    auto& st = controller_[std::size_t(rx_port)];
    st = step_controller(st, {.frame_detected = true});
}

bool Switch::admit_rx(int rx_port, StoredFrame frame) {
    if (!rx_buffers_[std::size_t(rx_port)].try_enqueue(std::move(frame))) {
        count_drop(DropReason::BufferOverflow);
        controller_[std::size_t(rx_port)] = ControllerState::Idle;
        return false;
    }
    return true;
}

ForwardDecision Switch::decide_next(int rx_port) {
    auto frame = rx_buffers_[std::size_t(rx_port)].dequeue();
    assert(frame && "decide_next called with an empty RX buffer");

    // Walk the controller through the pipeline so its state history matches
    // the decision taken.
    auto& st = controller_[std::size_t(rx_port)];
    if (st == ControllerState::Idle)
        st = step_controller(st, {.frame_detected = true});
    st = step_controller(st, {.reception_complete = true});

    ForwardDecision decision = process_frame(frame->wire, rx_port, config_);

    const bool length_ok = check_length(frame->wire);
    st = step_controller(st, {.length_ok = length_ok});
    if (length_ok) {
        const bool fcs_ok = check_fcs(frame->wire);
        st = step_controller(st, {.fcs_ok = fcs_ok});
        if (fcs_ok) st = step_controller(st, {.address_found = !decision.is_drop()});
    }
    if (decision.is_drop()) {
        count_drop(decision.reason());
        st = step_controller(st, {});  // DROP -> IDLE
    } else {
        st = step_controller(st, {.forward_done = true});
    }
    return decision;
}

bool Switch::enqueue_tx(int tx_port, StoredFrame frame) {
    if (!tx_buffers_[std::size_t(tx_port)].try_enqueue(std::move(frame))) {
        count_drop(DropReason::BufferOverflow);
        return false;
    }
    return true;
}

}  // namespace afdxnoc
