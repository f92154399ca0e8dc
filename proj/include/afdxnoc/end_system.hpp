#pragma once

#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "afdxnoc/frame.hpp"
#include "afdxnoc/types.hpp"

namespace afdxnoc {

// Unidirectional logical connection from one source End System to one or
// more destinations. BAG is the minimum cycle gap between emission starts;
// Lmax caps the Ethernet frame length.
struct VirtualLink {
    std::uint16_t vlid = 0;
    std::uint32_t bag_cycles = 1;
    std::uint32_t lmax_bytes = kMaxEthernetBytes;
    std::uint32_t priority = 0;  // lower = more urgent
    std::string src_es;
    std::set<std::string> dest_es;
    std::uint16_t udp_src_port = 0;
    std::uint16_t udp_dst_port = 0;

    bool operator==(const VirtualLink&) const = default;
};

enum class RxVerdict : std::uint8_t { InOrder, Reset, Skip, Duplicate };

const char* to_string(RxVerdict verdict);

// What receive_frame hands to the application: the decoded frame plus the
// integrity verdict. Checking is diagnostic; the frame is delivered either
// way.
struct DeliveryRecord {
    Frame frame;
    RxVerdict verdict = RxVerdict::InOrder;
    std::uint8_t skip_gap = 0;  // frames missed, when verdict == Skip
};

// Per-VL receive-side integrity counters.
struct RxIntegrityState {
    std::optional<std::uint8_t> expected_next;
    std::optional<std::uint8_t> last_delivered;
    std::uint64_t skips = 0;       // accumulated gaps (missed frames)
    std::uint64_t duplicates = 0;
    std::uint64_t resets_seen = 0;
};

// A frame ready for emission, as handed to the simulation engine.
struct ScheduledEmission {
    std::uint16_t vlid = 0;
    std::uint8_t seq = 0;
    WireFrame wire;
};

class EndSystem {
public:
    EndSystem(std::string id, std::uint16_t numeric_id,
              std::vector<VirtualLink> owned_vls);

    const std::string& id() const { return id_; }
    std::uint16_t numeric_id() const { return numeric_id_; }

    // Encapsulates the message, stamps the next sequence number, and queues
    // it on the VL. Throws UnknownVl when this ES is not the VL's source and
    // OversizeMessage when the encoded frame would exceed the VL's Lmax.
    // Returns the sequence number assigned.
    std::uint8_t submit_message(std::uint16_t comm_port, std::uint16_t vlid,
                                std::vector<std::uint8_t> payload);

    // Picks the next frame to emit at `now`: among VLs with pending frames
    // and a satisfied BAG, lowest (priority, vlid) wins. Dequeues the frame
    // and records the emission cycle. The caller invokes this only while the
    // TX link is idle.
    std::optional<ScheduledEmission> schedule(Cycle now);

    // Earliest future cycle at which some queued VL becomes BAG-eligible;
    // nullopt when nothing is queued.
    std::optional<Cycle> next_eligible_cycle(Cycle now) const;

    // Receive path: decode, check successiveness against the per-VL expected
    // sequence, deliver regardless of verdict.
    DeliveryRecord receive_frame(const WireFrame& wire);

    // Returns sequence counters to the post-reset state (next emission on
    // each VL uses seq 0).
    void reset();

    bool owns_vl(std::uint16_t vlid) const { return queues_.contains(vlid); }
    const VirtualLink& vl(std::uint16_t vlid) const;
    std::size_t pending_frames() const;
    std::size_t pending_frames(std::uint16_t vlid) const;
    const RxIntegrityState& rx_state(std::uint16_t vlid) const;
    const std::map<std::uint16_t, RxIntegrityState>& rx_states() const {
        return rx_states_;
    }

private:
    struct QueuedFrame {
        std::uint8_t seq;
        WireFrame wire;
    };

    struct VlQueue {
        VirtualLink vl;
        std::deque<QueuedFrame> pending;
        std::optional<Cycle> last_emission_cycle;
        SeqState seq_state;

        bool eligible_at(Cycle now) const {
            return !pending.empty() &&
                   (!last_emission_cycle ||
                    now - *last_emission_cycle >= vl.bag_cycles);
        }
    };

    std::string id_;
    std::uint16_t numeric_id_ = 0;
    std::map<std::uint16_t, VlQueue> queues_;
    std::map<std::uint16_t, RxIntegrityState> rx_states_;
};

}  // namespace afdxnoc
