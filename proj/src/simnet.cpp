#include "afdxnoc/simnet.hpp"

#include "afdxnoc/log.hpp"

#include <algorithm>
#include <cassert>
#include <sstream>
#include <stdexcept>
#include <tuple>

namespace afdxnoc {

const char* to_string(EventKind kind) {
    switch (kind) {
        case EventKind::FrameFullyReceived: return "FrameFullyReceived";
        case EventKind::TxComplete: return "TxComplete";
        case EventKind::MessageInjection: return "MessageInjection";
        case EventKind::SwitchForward: return "SwitchForward";
        case EventKind::TxStart: return "TxStart";
        case EventKind::StatsSample: return "StatsSample";
    }
    return "?";
}

std::string trace_header_csv() { return "cycle,node,port,kind,vlid,seq,reason"; }

std::string to_csv(const TraceRecord& rec) {
    std::ostringstream out;
    out << rec.cycle << ',' << rec.node << ',';
    if (rec.port >= 0) out << rec.port;
    out << ',' << to_string(rec.kind) << ',';
    if (rec.vlid) out << *rec.vlid;
    out << ',';
    if (rec.seq) out << unsigned(*rec.seq);
    out << ',';
    if (rec.reason) out << to_string(*rec.reason);
    return out.str();
}

Simulation::Simulation(TopologyDesc desc) { validate_and_build(std::move(desc)); }

void Simulation::validate_and_build(TopologyDesc desc) {
    // Nodes.
    std::uint16_t es_counter = 0;
    for (auto& nd : desc.nodes) {
        if (nd.id.empty()) throw InvalidTopology("node with empty id");
        if (node_by_id_.contains(nd.id))
            throw InvalidTopology("duplicate node id '" + nd.id + "'");
        Node node;
        node.id = nd.id;
        node.kind = nd.kind;
        if (nd.kind == NodeKind::Switch) {
            SwitchConfig cfg;
            cfg.port_count = nd.sw.ports;
            cfg.broadcast = nd.sw.broadcast;
            cfg.broadcast_excludes_ingress = nd.sw.broadcast_excludes_ingress;
            cfg.processing_delay = nd.sw.processing_delay;
            for (const auto& [vlid, ports] : nd.sw.address_table)
                cfg.table.add(vlid, ports);
            try {
                node.sw = std::make_unique<Switch>(std::move(cfg));
            } catch (const std::invalid_argument& e) {
                throw InvalidTopology("switch '" + nd.id + "': " + e.what());
            }
            node.ports.resize(std::size_t(nd.sw.ports));
            node.ctrl_free.assign(std::size_t(nd.sw.ports), 0);
        } else {
            node.ports.resize(1);  // single full-duplex network port
        }
        node_by_id_[nd.id] = int(nodes_.size());
        nodes_.push_back(std::move(node));
    }

    // Virtual links, grouped by source ES.
    std::map<std::string, std::vector<VirtualLink>> vls_by_src;
    for (const auto& vl : desc.virtual_links) {
        if (vls_.contains(vl.vlid))
            throw InvalidTopology("duplicate VL " + std::to_string(vl.vlid));
        if (vl.bag_cycles < 1)
            throw InvalidTopology("VL " + std::to_string(vl.vlid) + ": bag_cycles must be >= 1");
        if (vl.lmax_bytes < kMinEthernetBytes || vl.lmax_bytes > kMaxEthernetBytes)
            throw InvalidTopology("VL " + std::to_string(vl.vlid) + ": lmax_bytes must be in [" +
                                  std::to_string(kMinEthernetBytes) + ", " +
                                  std::to_string(kMaxEthernetBytes) + "]");
        auto src = node_by_id_.find(vl.src_es);
        if (src == node_by_id_.end() || nodes_[std::size_t(src->second)].kind != NodeKind::EndSystem)
            throw InvalidTopology("VL " + std::to_string(vl.vlid) + ": source '" + vl.src_es +
                                  "' is not an End System");
        if (vl.dest_es.empty())
            throw InvalidTopology("VL " + std::to_string(vl.vlid) + ": empty destination set");
        for (const auto& d : vl.dest_es) {
            auto it = node_by_id_.find(d);
            if (it == node_by_id_.end() ||
                nodes_[std::size_t(it->second)].kind != NodeKind::EndSystem)
                throw InvalidTopology("VL " + std::to_string(vl.vlid) + ": destination '" + d +
                                      "' is not an End System");
        }
        vls_[vl.vlid] = vl;
        vls_by_src[vl.src_es].push_back(vl);
        vl_stats_[vl.vlid];  // ensure a zeroed entry exists
    }
    for (auto& node : nodes_) {
        if (node.kind != NodeKind::EndSystem) continue;
        auto it = vls_by_src.find(node.id);
        std::vector<VirtualLink> owned = it == vls_by_src.end() ? std::vector<VirtualLink>{}
                                                                : it->second;
        node.es = std::make_unique<EndSystem>(node.id, es_counter++, std::move(owned));
    }

    // Links.
    link_descs_ = desc.links;
    std::set<std::pair<int, int>> used_ports;
    for (std::size_t i = 0; i < link_descs_.size(); ++i) {
        const LinkDesc& ld = link_descs_[i];
        auto resolve = [&](const std::string& id, int port) {
            auto it = node_by_id_.find(id);
            if (it == node_by_id_.end())
                throw InvalidTopology("link " + std::to_string(i) + ": unknown node '" + id + "'");
            const Node& n = nodes_[std::size_t(it->second)];
            if (port < 0 || std::size_t(port) >= n.ports.size())
                throw InvalidTopology("link " + std::to_string(i) + ": node '" + id +
                                      "' has no port " + std::to_string(port));
            return it->second;
        };
        int a = resolve(ld.a, ld.a_port);
        int b = resolve(ld.b, ld.b_port);
        if (a == b)
            throw InvalidTopology("link " + std::to_string(i) + ": joins node '" + ld.a +
                                  "' to itself");
        if (nodes_[std::size_t(a)].kind == NodeKind::EndSystem &&
            nodes_[std::size_t(b)].kind == NodeKind::EndSystem)
            throw InvalidTopology("link " + std::to_string(i) +
                                  ": End Systems connect through switches, not directly");
        if (!used_ports.insert({a, ld.a_port}).second)
            throw InvalidTopology("link " + std::to_string(i) + ": port " +
                                  std::to_string(ld.a_port) + " of '" + ld.a +
                                  "' is already linked");
        if (!used_ports.insert({b, ld.b_port}).second)
            throw InvalidTopology("link " + std::to_string(i) + ": port " +
                                  std::to_string(ld.b_port) + " of '" + ld.b +
                                  "' is already linked");

        Channel ab;
        ab.link_index = int(i);
        ab.dir = 0;
        ab.from = a;
        ab.from_port = ld.a_port;
        ab.to = b;
        ab.to_port = ld.b_port;
        Channel ba = ab;
        ba.dir = 1;
        std::swap(ba.from, ba.to);
        std::swap(ba.from_port, ba.to_port);

        int ab_idx = int(channels_.size());
        channels_.push_back(ab);
        channels_.push_back(ba);
        nodes_[std::size_t(a)].ports[std::size_t(ld.a_port)] = {ab_idx, ab_idx + 1, b, ld.b_port};
        nodes_[std::size_t(b)].ports[std::size_t(ld.b_port)] = {ab_idx + 1, ab_idx, a, ld.a_port};
    }

    for (const auto& [vlid, vl] : vls_) check_vl_reachability(vl);
}

void Simulation::check_vl_reachability(const VirtualLink& vl) const {
    const Node& src = nodes_[std::size_t(node_by_id_.at(vl.src_es))];
    const PortWiring& w = src.ports[0];
    if (w.out_channel < 0)
        throw InvalidTopology("VL " + std::to_string(vl.vlid) + ": source '" + vl.src_es +
                              "' is not linked");

    std::set<std::string> reached;
    std::set<std::pair<int, int>> visited;  // (switch, in_port)
    std::deque<std::pair<int, int>> frontier{{w.peer, w.peer_port}};
    while (!frontier.empty()) {
        auto [sw_idx, in_port] = frontier.front();
        frontier.pop_front();
        if (!visited.insert({sw_idx, in_port}).second)
            throw InvalidTopology("VL " + std::to_string(vl.vlid) +
                                  ": forwarding loop through switch '" +
                                  nodes_[std::size_t(sw_idx)].id + "'");
        const Node& sw = nodes_[std::size_t(sw_idx)];
        const SwitchConfig& cfg = sw.sw->config();
        std::set<int> targets;
        if (cfg.broadcast) {
            for (int p = 0; p < cfg.port_count; ++p)
                if (!(cfg.broadcast_excludes_ingress && p == in_port)) targets.insert(p);
        } else if (auto hit = cfg.table.lookup(vl.vlid)) {
            targets = *hit;
        }
        for (int p : targets) {
            const PortWiring& pw = sw.ports[std::size_t(p)];
            if (pw.out_channel < 0) continue;
            const Node& peer = nodes_[std::size_t(pw.peer)];
            if (peer.kind == NodeKind::EndSystem)
                reached.insert(peer.id);
            else
                frontier.push_back({pw.peer, pw.peer_port});
        }
    }
    for (const auto& dest : vl.dest_es)
        if (!reached.contains(dest))
            throw InvalidTopology("VL " + std::to_string(vl.vlid) + ": destination '" + dest +
                                  "' is unreachable through the address tables");
}

int Simulation::node_index(const std::string& id) const {
    auto it = node_by_id_.find(id);
    if (it == node_by_id_.end()) throw std::out_of_range("unknown node '" + id + "'");
    return it->second;
}

const Switch& Simulation::switch_node(const std::string& id) const {
    const Node& n = nodes_[std::size_t(node_index(id))];
    if (n.kind != NodeKind::Switch) throw std::out_of_range("'" + id + "' is not a switch");
    return *n.sw;
}

const EndSystem& Simulation::end_system(const std::string& id) const {
    const Node& n = nodes_[std::size_t(node_index(id))];
    if (n.kind != NodeKind::EndSystem)
        throw std::out_of_range("'" + id + "' is not an End System");
    return *n.es;
}

void Simulation::push_event(Event ev) {
    ev.seqno = event_seqno_++;
    events_.push(std::move(ev));
}

void Simulation::push(Cycle at, EventKind kind, int node, int port) {
    Event ev;
    ev.at = at;
    ev.kind = kind;
    ev.node = node;
    ev.port = port;
    push_event(std::move(ev));
}

void Simulation::inject(Cycle at, const std::string& es, std::uint16_t vlid,
                        std::vector<std::uint8_t> payload) {
    if (at < clock_)
        throw PastCycle("inject at cycle " + std::to_string(at) + " behind clock " +
                        std::to_string(clock_));
    int idx;
    try {
        idx = node_index(es);
    } catch (const std::out_of_range&) {
        throw UnknownVl("unknown End System '" + es + "'");
    }
    const Node& node = nodes_[std::size_t(idx)];
    if (node.kind != NodeKind::EndSystem || !node.es->owns_vl(vlid))
        throw UnknownVl("End System '" + es + "' does not source VL " + std::to_string(vlid));
    if (encoded_ethernet_size(payload.size()) > node.es->vl(vlid).lmax_bytes)
        throw OversizeMessage("payload of " + std::to_string(payload.size()) +
                              " bytes encodes past Lmax on VL " + std::to_string(vlid));
    Event ev;
    ev.at = at;
    ev.kind = EventKind::MessageInjection;
    ev.node = idx;
    ev.port = 0;
    ev.vlid = vlid;
    ev.payload = std::move(payload);
    push_event(std::move(ev));
}

void Simulation::add_bitflip_fault(Cycle at, std::size_t link_index, int dir,
                                   std::size_t byte_index, int bit_index) {
    if (link_index >= link_descs_.size())
        throw ValidationError("fault references link " + std::to_string(link_index) +
                              " but only " + std::to_string(link_descs_.size()) + " exist");
    if (dir != 0 && dir != 1) throw ValidationError("fault dir must be 0 or 1");
    if (bit_index < 0 || bit_index > 7) throw ValidationError("fault bit index must be 0..7");
    if (byte_index >= kMaxEthernetBytes)
        throw ValidationError("fault byte index must be below 1518");
    BitflipFault f;
    f.at = at;
    f.channel = int(2 * link_index + std::size_t(dir));
    f.byte_index = byte_index;
    f.bit_index = bit_index;
    bitflips_.push_back(f);
}

void Simulation::add_drop_fault(std::uint16_t vlid, std::uint64_t emission_ordinal) {
    if (!vls_.contains(vlid))
        throw ValidationError("drop fault references unknown VL " + std::to_string(vlid));
    drop_faults_[vlid].insert(emission_ordinal);
}

StatsReport Simulation::run(Cycle until) {
    if (until < clock_)
        throw PastCycle("run until cycle " + std::to_string(until) + " behind clock " +
                        std::to_string(clock_));
    run_until_ = until;
    if (stats_period_ > 0) {
        Cycle first = clock_ + stats_period_;
        if (first <= until) push(first, EventKind::StatsSample);
    }
    while (!events_.empty() && events_.top().at <= until) {
        Event ev = events_.top();
        events_.pop();
        clock_ = ev.at;
        AFDXNOC_DEBUG("cycle " << ev.at << ' ' << to_string(ev.kind) << " node="
                               << (ev.node >= 0 ? nodes_[std::size_t(ev.node)].id : "-")
                               << " port=" << ev.port);
        switch (ev.kind) {
            case EventKind::MessageInjection: handle_injection(ev); break;
            case EventKind::FrameFullyReceived: handle_frame_received(ev); break;
            case EventKind::SwitchForward: handle_switch_forward(ev); break;
            case EventKind::TxStart: handle_tx_start(ev); break;
            case EventKind::TxComplete: handle_tx_complete(ev); break;
            case EventKind::StatsSample: handle_stats_sample(ev); break;
        }
    }
    clock_ = until;
    return stats();
}

void Simulation::handle_injection(const Event& ev) {
    Node& node = nodes_[std::size_t(ev.node)];
    std::uint8_t seq = node.es->submit_message(0, ev.vlid, ev.payload);
    vl_stats(ev.vlid).submitted++;
    node.injection_cycles[ev.vlid].push_back(ev.at);
    emit_trace({ev.at, node.id, 0, EventKind::MessageInjection, ev.vlid, seq, std::nullopt});
    push(ev.at, EventKind::TxStart, ev.node, 0);
}

void Simulation::start_es_transmission(int node_idx) {
    Node& node = nodes_[std::size_t(node_idx)];
    const PortWiring& w = node.ports[0];
    if (w.out_channel < 0) return;
    Channel& ch = channels_[std::size_t(w.out_channel)];
    if (ch.busy_until > clock_) return;

    auto emission = node.es->schedule(clock_);
    if (!emission) {
        schedule_es_wake(node_idx);
        return;
    }

    auto& pending_cycles = node.injection_cycles[emission->vlid];
    assert(!pending_cycles.empty());
    Cycle injected_at = pending_cycles.front();
    pending_cycles.pop_front();

    StoredFrame frame;
    frame.wire = std::move(emission->wire.bytes);
    frame.meta.uid = next_uid_++;
    frame.meta.vlid = emission->vlid;
    frame.meta.seq = emission->seq;
    frame.meta.injected_at = injected_at;
    frame.meta.origin_node = node_idx;

    VlStats& vs = vl_stats(emission->vlid);
    vs.emitted++;
    emissions_.push_back({frame.meta.uid, emission->vlid, emission->seq, clock_});
    emit_trace({clock_, node.id, 0, EventKind::TxStart, emission->vlid, emission->seq,
                std::nullopt});

    std::uint64_t ordinal = emission_ordinal_[emission->vlid]++;
    auto df = drop_faults_.find(emission->vlid);
    bool lost = df != drop_faults_.end() && df->second.contains(ordinal);
    if (lost) vs.lost_to_fault++;

    const Cycle length = Cycle(frame.wire.size());
    ch.current_meta = frame.meta;
    ch.busy_until = clock_ + length;
    ch.busy_cycles += length;
    push(ch.busy_until, EventKind::TxComplete, node_idx, 0);
    if (!lost) {
        // Apply any wire faults that trigger while this frame occupies the
        // channel.
        for (auto& f : bitflips_) {
            if (f.applied || f.channel != w.out_channel) continue;
            if (f.at < clock_ || f.at >= ch.busy_until) continue;
            std::size_t at_byte = kPhyOverheadBytes + f.byte_index;
            if (at_byte < frame.wire.size())
                frame.wire[at_byte] ^= std::uint8_t(1u << f.bit_index);
            f.applied = true;
        }
        if (nodes_[std::size_t(ch.to)].kind == NodeKind::Switch)
            nodes_[std::size_t(ch.to)].sw->note_frame_incoming(ch.to_port);
        ch.in_flight = std::move(frame);
        push(ch.busy_until, EventKind::FrameFullyReceived, ch.to, ch.to_port);
    }

    // More frames may be waiting behind this one; the TxComplete chain picks
    // them up.
}

void Simulation::schedule_es_wake(int node_idx) {
    Node& node = nodes_[std::size_t(node_idx)];
    auto t = node.es->next_eligible_cycle(clock_);
    if (!t || *t <= clock_) return;
    if (node.wake_at && *node.wake_at > clock_ && *node.wake_at <= *t) return;
    node.wake_at = *t;
    push(*t, EventKind::TxStart, node_idx, 0);
}

void Simulation::handle_tx_start(const Event& ev) {
    Node& node = nodes_[std::size_t(ev.node)];
    if (node.kind == NodeKind::EndSystem) {
        if (node.wake_at && *node.wake_at == clock_) node.wake_at.reset();
        start_es_transmission(ev.node);
        return;
    }

    const PortWiring& w = node.ports[std::size_t(ev.port)];
    if (w.out_channel < 0) return;
    Channel& ch = channels_[std::size_t(w.out_channel)];
    if (ch.busy_until > clock_) return;
    const StoredFrame* head = node.sw->tx_buffer(ev.port).front();
    if (!head) return;

    StoredFrame frame = *head;  // the buffer holds its copy until TxComplete
    emit_trace({clock_, node.id, ev.port, EventKind::TxStart, frame.meta.vlid, frame.meta.seq,
                std::nullopt});
    begin_transfer(ev.node, ev.port, std::move(frame));
}

void Simulation::begin_transfer(int node_idx, int port, StoredFrame frame) {
    Node& node = nodes_[std::size_t(node_idx)];
    const PortWiring& w = node.ports[std::size_t(port)];
    Channel& ch = channels_[std::size_t(w.out_channel)];
    const Cycle length = Cycle(frame.wire.size());

    for (auto& f : bitflips_) {
        if (f.applied || f.channel != w.out_channel) continue;
        if (f.at < clock_ || f.at >= clock_ + length) continue;
        std::size_t at_byte = kPhyOverheadBytes + f.byte_index;
        if (at_byte < frame.wire.size())
            frame.wire[at_byte] ^= std::uint8_t(1u << f.bit_index);
        f.applied = true;
    }

    ch.current_meta = frame.meta;
    ch.busy_until = clock_ + length;
    ch.busy_cycles += length;
    if (nodes_[std::size_t(ch.to)].kind == NodeKind::Switch)
        nodes_[std::size_t(ch.to)].sw->note_frame_incoming(ch.to_port);
    ch.in_flight = std::move(frame);
    push(ch.busy_until, EventKind::TxComplete, node_idx, port);
    push(ch.busy_until, EventKind::FrameFullyReceived, ch.to, ch.to_port);
}

void Simulation::handle_tx_complete(const Event& ev) {
    Node& node = nodes_[std::size_t(ev.node)];
    const PortWiring& w = node.ports[std::size_t(ev.port)];
    Channel& ch = channels_[std::size_t(w.out_channel)];

    std::optional<std::uint16_t> vlid;
    std::optional<std::uint8_t> seq;
    if (ch.current_meta) {
        vlid = ch.current_meta->vlid;
        seq = ch.current_meta->seq;
        ch.current_meta.reset();
    }
    emit_trace({clock_, node.id, ev.port, EventKind::TxComplete, vlid, seq, std::nullopt});

    if (node.kind == NodeKind::Switch) {
        node.sw->tx_buffer(ev.port).dequeue();
        if (!node.sw->tx_buffer(ev.port).empty())
            push(clock_, EventKind::TxStart, ev.node, ev.port);
    } else {
        push(clock_, EventKind::TxStart, ev.node, 0);
    }
}

void Simulation::handle_frame_received(const Event& ev) {
    Node& node = nodes_[std::size_t(ev.node)];
    const PortWiring& w = node.ports[std::size_t(ev.port)];
    Channel& ch = channels_[std::size_t(w.in_channel)];
    assert(ch.in_flight);
    StoredFrame frame = std::move(*ch.in_flight);
    ch.in_flight.reset();

    if (node.kind == NodeKind::EndSystem) {
        emit_trace({clock_, node.id, ev.port, EventKind::FrameFullyReceived, frame.meta.vlid,
                    frame.meta.seq, std::nullopt});
        VlStats& vs = vl_stats(frame.meta.vlid);
        try {
            node.es->receive_frame(WireFrame{std::move(frame.wire)});
            vs.delivered_total++;
            vs.delivered_by_es[node.id]++;
            deliveries_by_uid_[frame.meta.uid].insert(node.id);
            Cycle latency = clock_ - frame.meta.injected_at;
            if (vs.latency_count == 0 || latency < vs.latency_min) vs.latency_min = latency;
            if (vs.latency_count == 0 || latency > vs.latency_max) vs.latency_max = latency;
            vs.latency_sum += latency;
            vs.latency_count++;
        } catch (const MalformedFrame&) {
            vs.delivered_malformed++;
        }
        return;
    }

    // Switch: store-and-forward admission, then the controller pipeline.
    FrameMeta meta = frame.meta;
    bool admitted = node.sw->admit_rx(ev.port, std::move(frame));
    emit_trace({clock_, node.id, ev.port, EventKind::FrameFullyReceived, meta.vlid, meta.seq,
                admitted ? std::optional<DropReason>{}
                         : std::optional<DropReason>{DropReason::BufferOverflow}});
    if (!admitted) {
        vl_stats(meta.vlid).dropped[std::size_t(DropReason::BufferOverflow)]++;
        return;
    }
    Cycle start = std::max(clock_, node.ctrl_free[std::size_t(ev.port)]);
    Cycle decide_at = start + node.sw->config().processing_delay;
    node.ctrl_free[std::size_t(ev.port)] = decide_at;
    push(decide_at, EventKind::SwitchForward, ev.node, ev.port);
}

void Simulation::handle_switch_forward(const Event& ev) {
    Node& node = nodes_[std::size_t(ev.node)];
    const StoredFrame* head = node.sw->rx_buffer(ev.port).front();
    assert(head);
    StoredFrame frame = *head;
    ForwardDecision decision = node.sw->decide_next(ev.port);

    VlStats& vs = vl_stats(frame.meta.vlid);
    if (decision.is_drop()) {
        vs.dropped[std::size_t(decision.reason())]++;
        emit_trace({clock_, node.id, ev.port, EventKind::SwitchForward, frame.meta.vlid,
                    frame.meta.seq, decision.reason()});
        return;
    }

    vs.spawned_copies += decision.ports().size() - 1;
    for (int tx_port : decision.ports()) {
        bool accepted = node.sw->enqueue_tx(tx_port, frame);
        emit_trace({clock_, node.id, tx_port, EventKind::SwitchForward, frame.meta.vlid,
                    frame.meta.seq,
                    accepted ? std::optional<DropReason>{}
                             : std::optional<DropReason>{DropReason::BufferOverflow}});
        if (accepted)
            push(clock_, EventKind::TxStart, ev.node, tx_port);
        else
            vs.dropped[std::size_t(DropReason::BufferOverflow)]++;
    }
}

void Simulation::handle_stats_sample(const Event& ev) {
    emit_trace({clock_, "", -1, EventKind::StatsSample, std::nullopt, std::nullopt, std::nullopt});
    if (stats_period_ > 0 && clock_ + stats_period_ <= run_until_)
        push(clock_ + stats_period_, EventKind::StatsSample);
    (void)ev;
}

StatsReport Simulation::stats() const {
    StatsReport report;
    report.cycles_run = clock_;
    report.vls = vl_stats_;
    for (auto& [vlid, vs] : report.vls) {
        vs.in_flight_end = 0;
        vs.queued_at_source_end = 0;
        vs.integrity.clear();
    }
    auto in_flight = [&report](std::uint16_t vlid) -> std::uint64_t& {
        return report.vls[vlid].in_flight_end;
    };

    for (const auto& ch : channels_)
        if (ch.in_flight) in_flight(ch.in_flight->meta.vlid)++;

    for (const auto& node : nodes_) {
        if (node.kind == NodeKind::Switch) {
            SwitchStats ss;
            for (std::size_t r = 0; r < kDropReasonCount; ++r)
                ss.drops[r] = node.sw->drops(DropReason(r));
            for (int p = 0; p < node.sw->port_count(); ++p) {
                ss.peak_rx_occupancy.push_back(node.sw->rx_buffer(p).peak_occupancy_bytes());
                ss.peak_tx_occupancy.push_back(node.sw->tx_buffer(p).peak_occupancy_bytes());
                for (const auto& f : node.sw->rx_buffer(p).frames())
                    in_flight(f.meta.vlid)++;
                // The TX head stays buffered while its copy rides the wire;
                // the channel walk above already counted that frame.
                const PortWiring& w = node.ports[std::size_t(p)];
                bool head_on_wire =
                    w.out_channel >= 0 && channels_[std::size_t(w.out_channel)].in_flight &&
                    !node.sw->tx_buffer(p).empty() &&
                    channels_[std::size_t(w.out_channel)].in_flight->meta.uid ==
                        node.sw->tx_buffer(p).front()->meta.uid;
                bool first = true;
                for (const auto& f : node.sw->tx_buffer(p).frames()) {
                    if (!(first && head_on_wire)) in_flight(f.meta.vlid)++;
                    first = false;
                }
            }
            report.switches[node.id] = std::move(ss);
        } else {
            for (const auto& [vlid, vl] : vls_)
                if (vl.src_es == node.id)
                    report.vls[vlid].queued_at_source_end += node.es->pending_frames(vlid);
            for (const auto& [vlid, rx] : node.es->rx_states()) {
                IntegrityCounters ic;
                ic.skips = rx.skips;
                ic.duplicates = rx.duplicates;
                ic.resets = rx.resets_seen;
                report.vls[vlid].integrity[node.id] = ic;
            }
        }
    }

    for (std::size_t i = 0; i < link_descs_.size(); ++i) {
        LinkStats ls;
        ls.a = link_descs_[i].a;
        ls.a_port = link_descs_[i].a_port;
        ls.b = link_descs_[i].b;
        ls.b_port = link_descs_[i].b_port;
        auto effective = [this](const Channel& ch) {
            std::uint64_t over = ch.busy_until > clock_ ? ch.busy_until - clock_ : 0;
            return ch.busy_cycles - over;
        };
        ls.busy_ab = effective(channels_[2 * i]);
        ls.busy_ba = effective(channels_[2 * i + 1]);
        if (clock_ > 0) {
            ls.utilization_ab = double(ls.busy_ab) / double(clock_);
            ls.utilization_ba = double(ls.busy_ba) / double(clock_);
        }
        report.links.push_back(std::move(ls));
    }
    return report;
}

std::string Simulation::trace_csv() const {
    std::ostringstream out;
    out << trace_header_csv() << '\n';
    for (const auto& rec : trace_) out << to_csv(rec) << '\n';
    return out.str();
}

}  // namespace afdxnoc
