#include "afdxnoc/trace_check.hpp"

#include <deque>
#include <map>
#include <optional>
#include <sstream>

#include "afdxnoc/frame.hpp"

namespace afdxnoc {
namespace {

struct Emission {
    std::uint8_t seq = 0;
    Cycle tx_start = 0;
    Cycle duration = 0;
    std::optional<Cycle> injected_at;
};

struct OpenTx {
    Cycle start = 0;
    std::optional<std::uint16_t> vlid;
    std::optional<std::uint8_t> seq;
};

}  // namespace

CheckResult check_invariants(const ScenarioConfig& config,
                             const std::vector<TraceRecord>& trace,
                             const StatsReport& stats) {
    CheckResult result;
    auto violate = [&result](const std::string& msg) { result.violations.push_back(msg); };

    std::map<std::string, NodeKind> kinds;
    for (const auto& nd : config.topology.nodes) kinds[nd.id] = nd.kind;
    std::map<std::uint16_t, const VirtualLink*> vls;
    for (const auto& vl : config.topology.virtual_links) vls[vl.vlid] = &vl;

    auto is_es = [&kinds](const std::string& id) {
        auto it = kinds.find(id);
        return it != kinds.end() && it->second == NodeKind::EndSystem;
    };

    // One pass collects per-port transmissions, per-VL emissions at the
    // source, injection cycles, and deliveries at End Systems.
    std::map<std::pair<std::string, int>, OpenTx> open_tx;
    std::map<std::uint16_t, std::deque<Cycle>> injections;
    std::map<std::uint16_t, std::vector<Emission>> emissions;
    std::map<std::pair<std::uint16_t, std::string>, std::vector<std::pair<Cycle, std::uint8_t>>>
        deliveries;

    for (const auto& rec : trace) {
        switch (rec.kind) {
            case EventKind::MessageInjection:
                if (rec.vlid) injections[*rec.vlid].push_back(rec.cycle);
                break;
            case EventKind::TxStart: {
                auto key = std::make_pair(rec.node, rec.port);
                auto [it, fresh] = open_tx.try_emplace(key);
                if (!fresh) {
                    std::ostringstream os;
                    os << "overlapping transmissions on " << rec.node << " port " << rec.port
                       << ": TxStart at cycle " << rec.cycle << " before TxComplete of cycle "
                       << it->second.start;
                    violate(os.str());
                }
                it->second = {rec.cycle, rec.vlid, rec.seq};
                break;
            }
            case EventKind::TxComplete: {
                auto key = std::make_pair(rec.node, rec.port);
                auto it = open_tx.find(key);
                if (it == open_tx.end()) {
                    std::ostringstream os;
                    os << "TxComplete without TxStart on " << rec.node << " port " << rec.port
                       << " at cycle " << rec.cycle;
                    violate(os.str());
                    break;
                }
                OpenTx open = it->second;
                open_tx.erase(it);
                Cycle duration = rec.cycle - open.start;
                if (duration < kMinEthernetBytes + kPhyOverheadBytes ||
                    duration > kMaxWireBytes) {
                    std::ostringstream os;
                    os << "transmission on " << rec.node << " port " << rec.port
                       << " lasted " << duration << " cycles, outside [72, 1526]";
                    violate(os.str());
                }
                if (open.vlid) {
                    auto vit = vls.find(*open.vlid);
                    if (vit != vls.end() &&
                        duration > Cycle(vit->second->lmax_bytes) + kPhyOverheadBytes) {
                        std::ostringstream os;
                        os << "VL " << *open.vlid << " transmission of " << duration
                           << " cycles exceeds Lmax " << vit->second->lmax_bytes << " + 8";
                        violate(os.str());
                    }
                    // Emissions are the transmissions leaving the VL's
                    // source End System.
                    if (vit != vls.end() && rec.node == vit->second->src_es && open.seq)
                        emissions[*open.vlid].push_back(
                            {*open.seq, open.start, duration, std::nullopt});
                }
                break;
            }
            case EventKind::FrameFullyReceived:
                if (is_es(rec.node) && rec.vlid && rec.seq)
                    deliveries[{*rec.vlid, rec.node}].push_back({rec.cycle, *rec.seq});
                break;
            default: break;
        }
    }

    // Match each emission with its injection (per-VL FIFO at the source).
    for (auto& [vlid, ems] : emissions) {
        auto& inj = injections[vlid];
        for (auto& em : ems) {
            if (inj.empty()) {
                std::ostringstream os;
                os << "VL " << vlid << ": emission at cycle " << em.tx_start
                   << " has no matching injection";
                violate(os.str());
                break;
            }
            em.injected_at = inj.front();
            inj.pop_front();
        }
    }

    // BAG law over consecutive emission starts.
    for (const auto& [vlid, ems] : emissions) {
        auto vit = vls.find(vlid);
        if (vit == vls.end()) continue;
        for (std::size_t i = 1; i < ems.size(); ++i) {
            Cycle gap = ems[i].tx_start - ems[i - 1].tx_start;
            if (gap < vit->second->bag_cycles) {
                std::ostringstream os;
                os << "VL " << vlid << ": emissions at cycles " << ems[i - 1].tx_start
                   << " and " << ems[i].tx_start << " violate BAG "
                   << vit->second->bag_cycles;
                violate(os.str());
            }
        }
    }

    // Deliveries must follow emission order (per-VL FIFO network) and honor
    // causality: never before injection + wire length.
    for (const auto& [key, recs] : deliveries) {
        const auto& [vlid, dest] = key;
        auto eit = emissions.find(vlid);
        const std::vector<Emission> none;
        const std::vector<Emission>& ems = eit == emissions.end() ? none : eit->second;
        std::size_t cursor = 0;
        for (const auto& [cycle, seq] : recs) {
            while (cursor < ems.size() &&
                   (ems[cursor].seq != seq || ems[cursor].tx_start > cycle))
                ++cursor;
            if (cursor == ems.size()) {
                std::ostringstream os;
                os << "VL " << vlid << " at " << dest << ": delivery of seq "
                   << unsigned(seq) << " at cycle " << cycle
                   << " does not follow emission order";
                violate(os.str());
                break;
            }
            const Emission& em = ems[cursor];
            Cycle lower = em.tx_start + em.duration;
            if (em.injected_at) lower = std::max(lower, *em.injected_at + em.duration);
            if (cycle < lower) {
                std::ostringstream os;
                os << "VL " << vlid << " at " << dest << ": seq " << unsigned(seq)
                   << " delivered at cycle " << cycle << " before injection + wire length ("
                   << lower << ")";
                violate(os.str());
            }
            ++cursor;
        }
    }

    // Stats-side checks: ledger, trace consistency, capacity, utilization.
    std::string detail;
    if (!stats.ledger_balanced(&detail)) violate("conservation ledger unbalanced: " + detail);

    for (const auto& [vlid, vs] : stats.vls) {
        auto eit = emissions.find(vlid);
        std::uint64_t traced = eit == emissions.end() ? 0 : eit->second.size();
        if (traced != vs.emitted) {
            std::ostringstream os;
            os << "VL " << vlid << ": trace shows " << traced << " emissions but stats count "
               << vs.emitted;
            violate(os.str());
        }
    }

    for (const auto& [id, sw] : stats.switches) {
        for (std::size_t p = 0; p < sw.peak_rx_occupancy.size(); ++p)
            if (sw.peak_rx_occupancy[p] > kPortBufferBytes) {
                std::ostringstream os;
                os << id << " RX port " << p << " peak occupancy " << sw.peak_rx_occupancy[p]
                   << " exceeds " << kPortBufferBytes;
                violate(os.str());
            }
        for (std::size_t p = 0; p < sw.peak_tx_occupancy.size(); ++p)
            if (sw.peak_tx_occupancy[p] > kPortBufferBytes) {
                std::ostringstream os;
                os << id << " TX port " << p << " peak occupancy " << sw.peak_tx_occupancy[p]
                   << " exceeds " << kPortBufferBytes;
                violate(os.str());
            }
    }

    for (const auto& link : stats.links) {
        auto check_util = [&](double u, const char* dir) {
            if (u < 0.0 || u > 1.0) {
                std::ostringstream os;
                os << "link " << link.a << "-" << link.b << " " << dir << " utilization " << u
                   << " outside [0, 1]";
                violate(os.str());
            }
        };
        check_util(link.utilization_ab, "a->b");
        check_util(link.utilization_ba, "b->a");
    }

    return result;
}

}  // namespace afdxnoc
