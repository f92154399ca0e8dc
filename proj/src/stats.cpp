#include "afdxnoc/stats.hpp"

#include <sstream>

#include "json.hpp"

namespace afdxnoc {

bool StatsReport::ledger_balanced(std::string* detail) const {
    bool ok = true;
    std::ostringstream why;
    for (const auto& [vlid, vs] : vls) {
        std::uint64_t sources = vs.emitted + vs.spawned_copies;
        std::uint64_t sinks = vs.delivered_total + vs.delivered_malformed + vs.dropped_total() +
                              vs.lost_to_fault + vs.in_flight_end;
        if (sources != sinks) {
            ok = false;
            why << "VL " << vlid << ": emitted " << vs.emitted << " + spawned "
                << vs.spawned_copies << " = " << sources << " but sinks sum to " << sinks << "; ";
        }
        // Source-side split: losses and drops happen only after emission.
        if (vs.submitted != vs.emitted + vs.queued_at_source_end) {
            ok = false;
            why << "VL " << vlid << ": submitted " << vs.submitted << " != emitted "
                << vs.emitted << " + queued " << vs.queued_at_source_end << "; ";
        }
    }
    if (detail) *detail = why.str();
    return ok;
}

std::string StatsReport::to_json_text() const {
    nlohmann::ordered_json j;
    j["cycles_run"] = cycles_run;

    nlohmann::ordered_json jvls = nlohmann::ordered_json::object();
    for (const auto& [vlid, vs] : vls) {
        nlohmann::ordered_json v;
        v["submitted"] = vs.submitted;
        v["emitted"] = vs.emitted;
        v["spawned_copies"] = vs.spawned_copies;
        v["delivered_total"] = vs.delivered_total;
        v["delivered_malformed"] = vs.delivered_malformed;
        v["delivered_by_es"] = vs.delivered_by_es;
        nlohmann::ordered_json drops;
        for (std::size_t r = 0; r < kDropReasonCount; ++r)
            drops[to_string(DropReason(r))] = vs.dropped[r];
        v["dropped"] = drops;
        v["dropped_total"] = vs.dropped_total();
        v["lost_to_fault"] = vs.lost_to_fault;
        v["in_flight_end"] = vs.in_flight_end;
        v["queued_at_source_end"] = vs.queued_at_source_end;
        nlohmann::ordered_json lat;
        lat["count"] = vs.latency_count;
        if (vs.latency_count > 0) {
            lat["min"] = vs.latency_min;
            lat["max"] = vs.latency_max;
            lat["mean"] = double(vs.latency_sum) / double(vs.latency_count);
        }
        v["latency"] = lat;
        nlohmann::ordered_json integ = nlohmann::ordered_json::object();
        for (const auto& [es, ic] : vs.integrity) {
            integ[es] = {{"skips", ic.skips},
                         {"duplicates", ic.duplicates},
                         {"resets", ic.resets}};
        }
        v["integrity"] = integ;
        jvls[std::to_string(vlid)] = std::move(v);
    }
    j["virtual_links"] = std::move(jvls);

    nlohmann::ordered_json jsw = nlohmann::ordered_json::object();
    for (const auto& [id, ss] : switches) {
        nlohmann::ordered_json s;
        nlohmann::ordered_json drops;
        for (std::size_t r = 0; r < kDropReasonCount; ++r)
            drops[to_string(DropReason(r))] = ss.drops[r];
        s["drops"] = drops;
        s["peak_rx_occupancy_bytes"] = ss.peak_rx_occupancy;
        s["peak_tx_occupancy_bytes"] = ss.peak_tx_occupancy;
        jsw[id] = std::move(s);
    }
    j["switches"] = std::move(jsw);

    nlohmann::ordered_json jlinks = nlohmann::ordered_json::array();
    for (const auto& ls : links) {
        nlohmann::ordered_json l;
        l["a"] = ls.a;
        l["a_port"] = ls.a_port;
        l["b"] = ls.b;
        l["b_port"] = ls.b_port;
        l["busy_cycles_ab"] = ls.busy_ab;
        l["busy_cycles_ba"] = ls.busy_ba;
        l["utilization_ab"] = ls.utilization_ab;
        l["utilization_ba"] = ls.utilization_ba;
        jlinks.push_back(std::move(l));
    }
    j["links"] = std::move(jlinks);

    std::string detail;
    j["ledger_balanced"] = ledger_balanced(&detail);
    if (!detail.empty()) j["ledger_detail"] = detail;

    return j.dump(2) + "\n";
}

}  // namespace afdxnoc
