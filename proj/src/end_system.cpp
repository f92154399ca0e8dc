#include "afdxnoc/end_system.hpp"

#include <algorithm>
#include <stdexcept>

#include "afdxnoc/errors.hpp"

namespace afdxnoc {

const char* to_string(RxVerdict verdict) {
    switch (verdict) {
        case RxVerdict::InOrder: return "InOrder";
        case RxVerdict::Reset: return "Reset";
        case RxVerdict::Skip: return "Skip";
        case RxVerdict::Duplicate: return "Duplicate";
    }
    return "?";
}

EndSystem::EndSystem(std::string id, std::uint16_t numeric_id,
                     std::vector<VirtualLink> owned_vls)
    : id_(std::move(id)), numeric_id_(numeric_id) {
    for (auto& vl : owned_vls) {
        if (vl.src_es != id_)
            throw UnknownVl("VL " + std::to_string(vl.vlid) + " has source '" +
                            vl.src_es + "', not '" + id_ + "'");
        if (queues_.contains(vl.vlid))
            throw std::invalid_argument("duplicate VL " + std::to_string(vl.vlid));
        VlQueue q;
        q.vl = std::move(vl);
        queues_.emplace(q.vl.vlid, std::move(q));
    }
}

std::uint8_t EndSystem::submit_message(std::uint16_t comm_port, std::uint16_t vlid,
                                       std::vector<std::uint8_t> payload) {
    auto it = queues_.find(vlid);
    if (it == queues_.end())
        throw UnknownVl("End System '" + id_ + "' does not source VL " +
                        std::to_string(vlid));
    VlQueue& q = it->second;

    if (encoded_ethernet_size(payload.size()) > q.vl.lmax_bytes)
        throw OversizeMessage("payload of " + std::to_string(payload.size()) +
                              " bytes encodes past Lmax " +
                              std::to_string(q.vl.lmax_bytes) + " on VL " +
                              std::to_string(vlid));

    // 0 goes out once, right after reset; afterwards the counter runs 1..255
    // and wraps to 1.
    std::uint8_t seq = q.seq_state.last_sent ? next_seq(*q.seq_state.last_sent)
                                             : std::uint8_t(0);
    q.seq_state.last_sent = seq;

    Frame f;
    f.vlid = vlid;
    f.src_es = numeric_id_;
    f.udp_src_port = q.vl.udp_src_port ? q.vl.udp_src_port : comm_port;
    f.udp_dst_port = q.vl.udp_dst_port;
    f.payload = std::move(payload);
    f.seq = seq;
    q.pending.push_back({seq, encode(f)});
    return seq;
}

std::optional<ScheduledEmission> EndSystem::schedule(Cycle now) {
    VlQueue* best = nullptr;
    for (auto& [vlid, q] : queues_) {
        if (!q.eligible_at(now)) continue;
        if (!best || q.vl.priority < best->vl.priority ||
            (q.vl.priority == best->vl.priority && vlid < best->vl.vlid))
            best = &q;
    }
    if (!best) return std::nullopt;

    QueuedFrame head = std::move(best->pending.front());
    best->pending.pop_front();
    best->last_emission_cycle = now;
    return ScheduledEmission{best->vl.vlid, head.seq, std::move(head.wire)};
}

std::optional<Cycle> EndSystem::next_eligible_cycle(Cycle now) const {
    std::optional<Cycle> earliest;
    for (const auto& [vlid, q] : queues_) {
        if (q.pending.empty()) continue;
        Cycle at = now;
        if (q.last_emission_cycle && now - *q.last_emission_cycle < q.vl.bag_cycles)
            at = *q.last_emission_cycle + q.vl.bag_cycles;
        if (!earliest || at < *earliest) earliest = at;
    }
    return earliest;
}

DeliveryRecord EndSystem::receive_frame(const WireFrame& wire) {
    DeliveryRecord rec;
    rec.frame = decode(wire);
    RxIntegrityState& st = rx_states_[rec.frame.vlid];
    const std::uint8_t s = rec.frame.seq;

    if (s == 0) {
        rec.verdict = RxVerdict::Reset;
        st.expected_next = 1;
        ++st.resets_seen;
    } else if (st.last_delivered && s == *st.last_delivered) {
        rec.verdict = RxVerdict::Duplicate;
        ++st.duplicates;
    } else {
        // Ring position in the 1..255 cycle; the 0 slot never recurs.
        auto ring = [](std::uint8_t v) { return std::uint32_t(v) - 1; };
        const std::uint8_t expected = st.expected_next.value_or(0);
        if (s == expected) {
            rec.verdict = RxVerdict::InOrder;
        } else {
            rec.verdict = RxVerdict::Skip;
            std::uint32_t gap;
            if (expected == 0) {
                // Nothing seen yet on this VL: the sender starts at 0, so
                // frames 0..s-1 went missing.
                gap = s;
            } else {
                gap = (ring(s) + 255 - ring(expected)) % 255;
            }
            rec.skip_gap = std::uint8_t(gap);
            st.skips += gap;
        }
        st.expected_next = next_seq(s);
    }
    st.last_delivered = s;
    return rec;
}

void EndSystem::reset() {
    for (auto& [vlid, q] : queues_) {
        q.seq_state = SeqState{};
        q.pending.clear();
        q.last_emission_cycle.reset();
    }
}

const VirtualLink& EndSystem::vl(std::uint16_t vlid) const {
    auto it = queues_.find(vlid);
    if (it == queues_.end())
        throw UnknownVl("End System '" + id_ + "' does not source VL " +
                        std::to_string(vlid));
    return it->second.vl;
}

std::size_t EndSystem::pending_frames() const {
    std::size_t n = 0;
    for (const auto& [vlid, q] : queues_) n += q.pending.size();
    return n;
}

std::size_t EndSystem::pending_frames(std::uint16_t vlid) const {
    auto it = queues_.find(vlid);
    return it == queues_.end() ? 0 : it->second.pending.size();
}

const RxIntegrityState& EndSystem::rx_state(std::uint16_t vlid) const {
    static const RxIntegrityState kEmpty{};
    auto it = rx_states_.find(vlid);
    return it == rx_states_.end() ? kEmpty : it->second;
}

}  // namespace afdxnoc
