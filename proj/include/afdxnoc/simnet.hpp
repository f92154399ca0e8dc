#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <queue>
#include <set>
#include <string>
#include <vector>

#include "afdxnoc/end_system.hpp"
#include "afdxnoc/errors.hpp"
#include "afdxnoc/stats.hpp"
#include "afdxnoc/switch.hpp"
#include "afdxnoc/types.hpp"

namespace afdxnoc {

enum class NodeKind { EndSystem, Switch };

struct SwitchParams {
    int ports = 0;
    bool broadcast = false;
    bool broadcast_excludes_ingress = false;
    Cycle processing_delay = 4;
    std::map<std::uint16_t, std::set<int>> address_table;

    bool operator==(const SwitchParams&) const = default;
};

struct NodeDesc {
    std::string id;
    NodeKind kind = NodeKind::EndSystem;
    SwitchParams sw;  // meaningful when kind == Switch

    bool operator==(const NodeDesc&) const = default;
};

// Full-duplex point-to-point connection between (a, a_port) and (b, b_port).
struct LinkDesc {
    std::string a;
    int a_port = 0;
    std::string b;
    int b_port = 0;

    bool operator==(const LinkDesc&) const = default;
};

struct TopologyDesc {
    std::vector<NodeDesc> nodes;
    std::vector<LinkDesc> links;
    std::vector<VirtualLink> virtual_links;

    bool operator==(const TopologyDesc&) const = default;
};

// Engine event kinds; the enum order is the same-cycle processing rank
// (receptions before transmissions).
enum class EventKind : std::uint8_t {
    FrameFullyReceived = 0,
    TxComplete,
    MessageInjection,
    SwitchForward,
    TxStart,
    StatsSample,
};

const char* to_string(EventKind kind);

struct TraceRecord {
    Cycle cycle = 0;
    std::string node;
    int port = -1;  // -1 = no port column
    EventKind kind = EventKind::StatsSample;
    std::optional<std::uint16_t> vlid;
    std::optional<std::uint8_t> seq;
    std::optional<DropReason> reason;
};

std::string trace_header_csv();
std::string to_csv(const TraceRecord& rec);

// One emission, as observed at the source End System.
struct EmissionRecord {
    std::uint64_t uid = 0;
    std::uint16_t vlid = 0;
    std::uint8_t seq = 0;
    Cycle at = 0;
};

// Deterministic discrete-event simulation of the whole network: End Systems
// and switches joined by full-duplex links carrying one byte per cycle.
// Single-owner; advance from one thread only.
class Simulation {
public:
    explicit Simulation(TopologyDesc desc);

    Cycle now() const { return clock_; }

    // Enqueues a MessageInjection. Throws UnknownVl when `es` does not source
    // `vlid`, PastCycle when `at` is behind the clock, OversizeMessage when
    // the payload cannot satisfy the VL's Lmax.
    void inject(Cycle at, const std::string& es, std::uint16_t vlid,
                std::vector<std::uint8_t> payload);

    // Flips one bit of whatever frame occupies the link channel at `at`.
    // `dir` 0 transfers a->b, 1 b->a; `byte_index` counts from the first
    // Ethernet byte (dst MAC). No-op when the channel is idle then.
    void add_bitflip_fault(Cycle at, std::size_t link_index, int dir,
                           std::size_t byte_index, int bit_index);

    // Deletes the nth emission (0-based) of the VL on the wire: it departs
    // the source normally and never arrives anywhere.
    void add_drop_fault(std::uint16_t vlid, std::uint64_t emission_ordinal);

    void set_stats_sample_period(Cycle period) { stats_period_ = period; }

    // Processes every event up to and including `until`, then reports.
    StatsReport run(Cycle until);
    StatsReport stats() const;

    const std::vector<TraceRecord>& trace() const { return trace_; }
    std::string trace_csv() const;

    const std::vector<EmissionRecord>& emissions() const { return emissions_; }
    const std::map<std::uint64_t, std::set<std::string>>& deliveries_by_uid() const {
        return deliveries_by_uid_;
    }

    const Switch& switch_node(const std::string& id) const;
    const EndSystem& end_system(const std::string& id) const;

private:
    struct PortWiring {
        int out_channel = -1;  // channel this port transmits into
        int in_channel = -1;   // channel that feeds this port
        int peer = -1;
        int peer_port = -1;
    };

    struct Node {
        std::string id;
        NodeKind kind = NodeKind::EndSystem;
        std::unique_ptr<Switch> sw;
        std::unique_ptr<EndSystem> es;
        std::vector<PortWiring> ports;
        std::vector<Cycle> ctrl_free;         // switch: per-RX-port controller
        std::optional<Cycle> wake_at;         // ES: pending BAG wake-up
        std::map<std::uint16_t, std::deque<Cycle>> injection_cycles;  // ES
    };

    struct Channel {
        int link_index = -1;
        int dir = 0;  // 0 = a->b, 1 = b->a
        int from = -1, from_port = -1, to = -1, to_port = -1;
        Cycle busy_until = 0;
        std::optional<StoredFrame> in_flight;
        std::optional<FrameMeta> current_meta;
        std::uint64_t busy_cycles = 0;
    };

    struct BitflipFault {
        Cycle at = 0;
        int channel = -1;
        std::size_t byte_index = 0;
        int bit_index = 0;
        bool applied = false;
    };

    struct Event {
        Cycle at = 0;
        EventKind kind = EventKind::StatsSample;
        int node = -1;
        int port = -1;
        std::uint64_t seqno = 0;
        std::uint16_t vlid = 0;                // MessageInjection
        std::vector<std::uint8_t> payload;     // MessageInjection
    };

    struct EventAfter {
        bool operator()(const Event& x, const Event& y) const {
            return std::tuple(x.at, x.kind, x.node, x.port, x.seqno) >
                   std::tuple(y.at, y.kind, y.node, y.port, y.seqno);
        }
    };

    void validate_and_build(TopologyDesc desc);
    void check_vl_reachability(const VirtualLink& vl) const;

    void push_event(Event ev);
    void push(Cycle at, EventKind kind, int node = -1, int port = -1);
    void handle_injection(const Event& ev);
    void handle_tx_start(const Event& ev);
    void handle_tx_complete(const Event& ev);
    void handle_frame_received(const Event& ev);
    void handle_switch_forward(const Event& ev);
    void handle_stats_sample(const Event& ev);

    void start_es_transmission(int node_idx);
    void schedule_es_wake(int node_idx);
    void begin_transfer(int node_idx, int port, StoredFrame frame);
    void emit_trace(TraceRecord rec) { trace_.push_back(std::move(rec)); }

    int node_index(const std::string& id) const;
    VlStats& vl_stats(std::uint16_t vlid) { return vl_stats_[vlid]; }

    Cycle clock_ = 0;
    Cycle run_until_ = 0;
    Cycle stats_period_ = 0;
    std::uint64_t event_seqno_ = 0;
    std::uint64_t next_uid_ = 1;

    std::vector<Node> nodes_;
    std::map<std::string, int> node_by_id_;
    std::vector<LinkDesc> link_descs_;
    std::vector<Channel> channels_;  // 2 per link: [2*i] a->b, [2*i+1] b->a
    std::map<std::uint16_t, VirtualLink> vls_;

    std::priority_queue<Event, std::vector<Event>, EventAfter> events_;
    std::vector<BitflipFault> bitflips_;
    std::map<std::uint16_t, std::set<std::uint64_t>> drop_faults_;
    std::map<std::uint16_t, std::uint64_t> emission_ordinal_;

    std::vector<TraceRecord> trace_;
    std::vector<EmissionRecord> emissions_;
    std::map<std::uint64_t, std::set<std::string>> deliveries_by_uid_;
    std::map<std::uint16_t, VlStats> vl_stats_;
};

}  // namespace afdxnoc
