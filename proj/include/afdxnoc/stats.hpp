#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "afdxnoc/switch.hpp"
#include "afdxnoc/types.hpp"

namespace afdxnoc {

struct IntegrityCounters {
    std::uint64_t skips = 0;
    std::uint64_t duplicates = 0;
    std::uint64_t resets = 0;
};

// Per-VL ledger, in frame copies. One emission creates one copy; a switch
// forwarding to k ports turns one copy into k (spawning k-1); every copy
// ends as delivered, dropped, lost to a fault, or still in flight.
struct VlStats {
    std::uint64_t submitted = 0;
    std::uint64_t emitted = 0;
    std::uint64_t spawned_copies = 0;
    std::uint64_t delivered_total = 0;
    std::uint64_t delivered_malformed = 0;
    std::map<std::string, std::uint64_t> delivered_by_es;
    std::array<std::uint64_t, kDropReasonCount> dropped{};
    std::uint64_t lost_to_fault = 0;
    std::uint64_t in_flight_end = 0;
    std::uint64_t queued_at_source_end = 0;

    std::uint64_t latency_count = 0;
    Cycle latency_min = 0;
    Cycle latency_max = 0;
    std::uint64_t latency_sum = 0;

    std::map<std::string, IntegrityCounters> integrity;  // keyed by receiving ES

    std::uint64_t dropped_total() const {
        std::uint64_t n = 0;
        for (auto d : dropped) n += d;
        return n;
    }
};

struct SwitchStats {
    std::array<std::uint64_t, kDropReasonCount> drops{};
    std::vector<std::uint64_t> peak_rx_occupancy;
    std::vector<std::uint64_t> peak_tx_occupancy;
};

struct LinkStats {
    std::string a, b;
    int a_port = 0, b_port = 0;
    std::uint64_t busy_ab = 0, busy_ba = 0;
    double utilization_ab = 0.0, utilization_ba = 0.0;
};

struct StatsReport {
    Cycle cycles_run = 0;
    std::map<std::uint16_t, VlStats> vls;
    std::map<std::string, SwitchStats> switches;
    std::vector<LinkStats> links;

    // Exact per-copy conservation: emitted + spawned equals delivered (clean
    // and malformed) + dropped + lost + in flight, per VL.
    bool ledger_balanced(std::string* detail = nullptr) const;

    std::string to_json_text() const;
};

}  // namespace afdxnoc
