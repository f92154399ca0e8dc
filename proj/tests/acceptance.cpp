// Acceptance gate: nine checks printed one line each; exit status 0 only
// when all of them pass. Each check states its own tolerance (all exact).
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <deque>
#include <fstream>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "afdxnoc/config.hpp"
#include "afdxnoc/end_system.hpp"
#include "afdxnoc/frame.hpp"
#include "afdxnoc/simnet.hpp"
#include "afdxnoc/switch.hpp"
#include "support/oracles.hpp"

using namespace afdxnoc;

namespace {

// nullopt = pass; a string = the first failure, for the report line.
using Outcome = std::optional<std::string>;

NodeDesc es_node(std::string id) {
    NodeDesc nd;
    nd.id = std::move(id);
    return nd;
}

TopologyDesc line_topology(std::uint32_t bag, Cycle processing_delay) {
    TopologyDesc t;
    NodeDesc sw;
    sw.id = "sw";
    sw.kind = NodeKind::Switch;
    sw.sw.ports = 2;
    sw.sw.processing_delay = processing_delay;
    sw.sw.address_table = {{5, {1}}};
    t.nodes = {es_node("a"), es_node("b"), sw};
    t.links = {{"a", 0, "sw", 0}, {"b", 0, "sw", 1}};
    VirtualLink vl;
    vl.vlid = 5;
    vl.bag_cycles = bag;
    vl.lmax_bytes = kMaxEthernetBytes;
    vl.src_es = "a";
    vl.dest_es = {"b"};
    t.virtual_links = {vl};
    return t;
}

std::string read_config(const std::string& name) {
    std::ifstream in(std::string(AFDXNOC_CONFIG_DIR) + "/" + name);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::uint8_t> delivered_seqs(const Simulation& sim, const std::string& es) {
    std::vector<std::uint8_t> seqs;
    for (const auto& rec : sim.trace())
        if (rec.node == es && rec.kind == EventKind::FrameFullyReceived && rec.seq)
            seqs.push_back(*rec.seq);
    return seqs;
}

// --- 1: buffer sizing -------------------------------------------------------

Outcome criterion_buffer_sizing() {
    Frame f;
    f.vlid = 1;
    f.payload.assign(kMaxPayloadBytes, 0xAA);
    WireFrame max_frame = encode(f);
    if (max_frame.wire_size() != 1526)
        return "maximum frame encodes to " + std::to_string(max_frame.wire_size()) +
               " wire bytes, not 1526";

    PortBuffer buf;
    if (buf.capacity_bytes() != 1600)
        return "port buffer capacity is " + std::to_string(buf.capacity_bytes());
    StoredFrame stored;
    stored.wire = max_frame.bytes;
    if (!buf.try_enqueue(stored)) return "a single maximum frame did not fit";
    if (buf.try_enqueue(stored)) return "two maximum frames fit concurrently";
    buf.dequeue();
    if (!buf.try_enqueue(stored)) return "the buffer did not free its space on dequeue";
    return std::nullopt;
}

// --- 2: CRC-32 --------------------------------------------------------------

Outcome criterion_crc() {
    auto as_bytes = [](const char* s) {
        return std::vector<std::uint8_t>(s, s + std::strlen(s));
    };
    auto check = std::vector<std::uint8_t>(as_bytes("123456789"));
    if (crc32(check) != 0xCBF43926u) return "crc32(\"123456789\") != 0xCBF43926";
    if (oracles::crc32_bitwise(check) != 0xCBF43926u)
        return "oracle disagrees on the check vector";
    if (crc32({}) != 0x00000000u) return "crc32(\"\") != 0";
    if (oracles::crc32_bitwise({}) != 0x00000000u) return "oracle crc32(\"\") != 0";

    std::mt19937_64 rng(0xC2C2C2C2ull);
    for (int i = 0; i < 1200; ++i) {
        std::vector<std::uint8_t> data(rng() % 301);
        for (auto& b : data) b = std::uint8_t(rng());
        if (crc32(data) != oracles::crc32_bitwise(data))
            return "mismatch against the bit-level oracle on random input " + std::to_string(i);
    }
    return std::nullopt;
}

// --- 3: filtering pipeline --------------------------------------------------

Outcome criterion_filtering() {
    std::mt19937_64 rng(0xF117E200ull);
    SwitchConfig cfg;
    cfg.port_count = 8;
    cfg.table.add(10, {1});
    cfg.table.add(11, {2, 3});
    cfg.table.add(12, {7});
    Switch sw(cfg);
    const std::uint16_t known_vlids[] = {10, 11, 12};

    std::uint64_t forwarded = 0, bad_length = 0, bad_fcs = 0, unknown = 0;
    for (int i = 0; i < 10000; ++i) {
        const int shape = int(rng() % 6);
        std::uint16_t vlid = known_vlids[rng() % 3];
        std::size_t eth_size = 0;  // natural
        auto fcs_mode = oracles::FcsMode::Valid;
        bool flip_bit = false;

        switch (shape) {
            case 0: break;  // clean, known address
            case 1:         // unknown address, FCS possibly broken too
                vlid = std::uint16_t(200 + rng() % 1000);
                if (rng() % 2) fcs_mode = oracles::FcsMode::Corrupted;
                break;
            case 2:  // undersize, FCS state irrelevant
                eth_size = 48 + rng() % 16;
                if (rng() % 2) fcs_mode = oracles::FcsMode::Corrupted;
                break;
            case 3:  // oversize
                eth_size = 1519 + rng() % 40;
                if (rng() % 2) fcs_mode = oracles::FcsMode::Corrupted;
                break;
            case 4:  // stored FCS corrupted outright
                fcs_mode = oracles::FcsMode::Corrupted;
                break;
            case 5:  // single-bit corruption in the payload/FCS region
                flip_bit = true;
                break;
        }

        std::size_t max_payload = kMaxPayloadBytes;
        if (eth_size != 0 && eth_size - 47 < max_payload) max_payload = eth_size - 47;
        std::vector<std::uint8_t> payload(rng() % (max_payload + 1));
        for (auto& b : payload) b = std::uint8_t(rng());

        std::vector<std::uint8_t> wire =
            oracles::build_wire(vlid, std::uint16_t(rng() % 100), 1000, 2000, payload,
                                std::uint8_t(rng()), eth_size, fcs_mode);
        const std::size_t eth = wire.size() - 8;
        if (flip_bit) {
            std::size_t at = 8 + 42 + rng() % (eth - 42);
            wire[at] ^= std::uint8_t(1u << (rng() % 8));
        }

        // Expectation from construction, in flowchart order.
        std::optional<DropReason> want_drop;
        if (eth < 64 || eth > 1518)
            want_drop = DropReason::BadLength;
        else if (fcs_mode == oracles::FcsMode::Corrupted || flip_bit)
            want_drop = DropReason::BadFcs;
        else if (!cfg.table.lookup(vlid))
            want_drop = DropReason::UnknownAddress;

        const int rx = int(rng() % 8);
        StoredFrame in;
        in.wire = wire;
        sw.note_frame_incoming(rx);
        if (!sw.admit_rx(rx, std::move(in)))
            return "frame " + std::to_string(i) + " did not fit an empty RX buffer";
        ForwardDecision d = sw.decide_next(rx);

        if (want_drop) {
            if (!d.is_drop())
                return "frame " + std::to_string(i) + " should drop " +
                       to_string(*want_drop) + " but was forwarded";
            if (d.reason() != *want_drop)
                return "frame " + std::to_string(i) + " dropped " + to_string(d.reason()) +
                       " instead of " + to_string(*want_drop);
            switch (*want_drop) {
                case DropReason::BadLength: ++bad_length; break;
                case DropReason::BadFcs: ++bad_fcs; break;
                default: ++unknown; break;
            }
        } else {
            if (d.is_drop())
                return "clean frame " + std::to_string(i) + " dropped " +
                       to_string(d.reason());
            if (d.ports() != *cfg.table.lookup(vlid))
                return "clean frame " + std::to_string(i) + " forwarded to the wrong ports";
            for (int port : d.ports()) {
                StoredFrame copy;
                copy.wire = wire;
                if (!sw.enqueue_tx(port, std::move(copy)))
                    return "TX enqueue failed on frame " + std::to_string(i);
                const StoredFrame* head = sw.tx_buffer(port).front();
                if (!head || head->wire != wire)
                    return "frame " + std::to_string(i) +
                           " was not forwarded byte-identical";
                sw.tx_buffer(port).dequeue();
            }
            ++forwarded;
        }
    }
    if (forwarded == 0 || bad_length == 0 || bad_fcs == 0 || unknown == 0)
        return "shape generator failed to cover every outcome";
    return std::nullopt;
}

// --- 4: forwarding oracle equivalence ---------------------------------------

Outcome criterion_forwarding_oracle() {
    std::mt19937_64 rng(0x04AC1E50ull);
    for (int t = 0; t < 100; ++t) {
        const int S = 1 + int(rng() % 4);
        const int E = 2 + int(rng() % 7);
        const std::size_t Su = std::size_t(S), Eu = std::size_t(E);
        std::vector<int> next_port(Su, 0);
        // Per switch: (peer switch, my port toward it).
        std::vector<std::vector<std::pair<int, int>>> sw_adj(Su);
        TopologyDesc topo;

        for (int s = 1; s < S; ++s) {
            int p = int(rng() % std::uint64_t(s));
            int pp = next_port[std::size_t(p)]++;
            int sp = next_port[std::size_t(s)]++;
            sw_adj[std::size_t(p)].push_back({s, pp});
            sw_adj[std::size_t(s)].push_back({p, sp});
            topo.links.push_back(
                {"s" + std::to_string(p), pp, "s" + std::to_string(s), sp});
        }
        std::vector<int> es_sw(Eu);
        std::vector<int> es_port(Eu);
        for (int e = 0; e < E; ++e) {
            int k = int(rng() % std::uint64_t(S));
            es_sw[std::size_t(e)] = k;
            es_port[std::size_t(e)] = next_port[std::size_t(k)]++;
            topo.links.push_back(
                {"e" + std::to_string(e), 0, "s" + std::to_string(k), es_port[std::size_t(e)]});
        }

        const int V = 1 + int(rng() % 4);
        std::map<int, std::map<std::uint16_t, std::set<int>>> tables;
        for (int v = 0; v < V; ++v) {
            const std::uint16_t vlid = std::uint16_t(10 + v);
            const int src = int(rng() % std::uint64_t(E));
            std::set<int> dest_idx;
            const int want = 1 + int(rng() % 3);
            for (int tries = 0; int(dest_idx.size()) < want && tries < 32; ++tries) {
                int d = int(rng() % std::uint64_t(E));
                if (d != src) dest_idx.insert(d);
            }
            if (dest_idx.empty()) dest_idx.insert((src + 1) % E);

            VirtualLink vl;
            vl.vlid = vlid;
            vl.bag_cycles = 1;
            vl.lmax_bytes = kMaxEthernetBytes;
            vl.src_es = "e" + std::to_string(src);
            for (int d : dest_idx) {
                vl.dest_es.insert("e" + std::to_string(d));
                // Program the tables along the unique tree path.
                const int from = es_sw[std::size_t(src)];
                const int to = es_sw[std::size_t(d)];
                std::vector<int> parent(std::size_t(S), -1), via(std::size_t(S), -1);
                std::vector<char> seen(std::size_t(S), 0);
                std::deque<int> q{from};
                seen[std::size_t(from)] = 1;
                while (!q.empty()) {
                    int u = q.front();
                    q.pop_front();
                    for (auto [w, port] : sw_adj[std::size_t(u)]) {
                        if (seen[std::size_t(w)]) continue;
                        seen[std::size_t(w)] = 1;
                        parent[std::size_t(w)] = u;
                        via[std::size_t(w)] = port;
                        q.push_back(w);
                    }
                }
                for (int u = to; u != from; u = parent[std::size_t(u)])
                    tables[parent[std::size_t(u)]][vlid].insert(via[std::size_t(u)]);
                tables[to][vlid].insert(es_port[std::size_t(d)]);
            }
            topo.virtual_links.push_back(std::move(vl));
        }

        for (int e = 0; e < E; ++e) topo.nodes.push_back(es_node("e" + std::to_string(e)));
        for (int s = 0; s < S; ++s) {
            NodeDesc nd;
            nd.id = "s" + std::to_string(s);
            nd.kind = NodeKind::Switch;
            nd.sw.ports = std::max(1, next_port[std::size_t(s)]);
            nd.sw.address_table = tables[s];
            topo.nodes.push_back(std::move(nd));
        }

        Simulation sim(topo);
        // One emission per private 8000-cycle slot: the longest path (five
        // hops of at most 1526 cycles plus switch delays) settles within it.
        Cycle slot = 0;
        std::size_t injected = 0;
        for (const auto& vl : topo.virtual_links) {
            const int n = 1 + int(rng() % 3);
            for (int k = 0; k < n; ++k) {
                std::vector<std::uint8_t> payload(rng() % (kMaxPayloadBytes + 1));
                for (auto& b : payload) b = std::uint8_t(rng());
                sim.inject(slot, vl.src_es, vl.vlid, std::move(payload));
                slot += 8000;
                ++injected;
            }
        }
        sim.run(slot + 8000);

        if (sim.emissions().size() != injected)
            return "topology " + std::to_string(t) + ": " + std::to_string(injected) +
                   " injections but " + std::to_string(sim.emissions().size()) + " emissions";
        std::map<std::uint16_t, std::string> src_of;
        for (const auto& vl : topo.virtual_links) src_of[vl.vlid] = vl.src_es;
        for (const auto& em : sim.emissions()) {
            std::set<std::string> want =
                oracles::propagate(topo, em.vlid, src_of.at(em.vlid));
            auto it = sim.deliveries_by_uid().find(em.uid);
            std::set<std::string> got =
                it == sim.deliveries_by_uid().end() ? std::set<std::string>{} : it->second;
            if (got != want)
                return "topology " + std::to_string(t) + ": VL " + std::to_string(em.vlid) +
                       " delivered to " + std::to_string(got.size()) +
                       " End Systems, oracle says " + std::to_string(want.size());
        }
    }
    return std::nullopt;
}

// --- 5: latency model -------------------------------------------------------

Outcome criterion_latency() {
    struct Shape {
        std::size_t payload;
        Cycle wire;
    };
    const Shape shapes[] = {{17, 72}, {145, 200}, {1471, 1526}};
    for (Cycle delay : {Cycle(4), Cycle(16)}) {
        for (const Shape& s : shapes) {
            Simulation sim(line_topology(1, delay));
            sim.inject(1000, "a", 5, std::vector<std::uint8_t>(s.payload, 0x5A));
            StatsReport report = sim.run(1000 + 2 * s.wire + delay + 100);

            const Cycle want = 1000 + oracles::store_and_forward_latency(s.wire, delay);
            std::vector<Cycle> arrivals;
            for (const auto& rec : sim.trace())
                if (rec.node == "b" && rec.kind == EventKind::FrameFullyReceived)
                    arrivals.push_back(rec.cycle);
            if (arrivals.size() != 1)
                return "L=" + std::to_string(s.wire) + " P=" + std::to_string(delay) + ": " +
                       std::to_string(arrivals.size()) + " deliveries";
            if (arrivals[0] != want)
                return "L=" + std::to_string(s.wire) + " P=" + std::to_string(delay) +
                       ": delivered at " + std::to_string(arrivals[0]) + ", expected " +
                       std::to_string(want);
            if (report.vls.at(5).latency_min != want - 1000)
                return "stats latency disagrees with the trace";
        }
    }
    return std::nullopt;
}

// --- 6: sequence integrity --------------------------------------------------

Outcome criterion_sequence_integrity() {
    const int kFrames = 350;

    // Loss-free run: no Skip, no Duplicate, one Reset, wrap at 255 -> 1.
    {
        Simulation sim(line_topology(80, 4));
        for (int n = 0; n < kFrames; ++n)
            sim.inject(Cycle(n) * 80, "a", 5, std::vector<std::uint8_t>(17, std::uint8_t(n)));
        StatsReport report = sim.run(Cycle(kFrames) * 80 + 1000);

        const VlStats& vs = report.vls.at(5);
        if (vs.delivered_total != kFrames)
            return "loss-free run delivered " + std::to_string(vs.delivered_total) + "/350";
        const IntegrityCounters& ic = vs.integrity.at("b");
        if (ic.skips != 0 || ic.duplicates != 0 || ic.resets != 1)
            return "loss-free run saw skips=" + std::to_string(ic.skips) +
                   " duplicates=" + std::to_string(ic.duplicates) +
                   " resets=" + std::to_string(ic.resets);

        std::vector<std::uint8_t> seqs = delivered_seqs(sim, "b");
        if (seqs.size() != kFrames) return "trace lost delivery records";
        for (int n = 0; n < kFrames; ++n) {
            std::uint8_t want = n == 0 ? 0 : std::uint8_t((n - 1) % 255 + 1);
            if (seqs[std::size_t(n)] != want)
                return "frame " + std::to_string(n) + " carried seq " +
                       std::to_string(seqs[std::size_t(n)]) + ", expected " +
                       std::to_string(want);
        }
        if (seqs[255] != 255 || seqs[256] != 1) return "wrap did not go 255 -> 1";
    }

    // Deleting exactly k frames yields exactly k receiver skips.
    {
        const std::uint64_t deleted[] = {50, 120, 121};
        Simulation sim(line_topology(80, 4));
        for (int n = 0; n < kFrames; ++n)
            sim.inject(Cycle(n) * 80, "a", 5, std::vector<std::uint8_t>(17, std::uint8_t(n)));
        for (std::uint64_t ordinal : deleted) sim.add_drop_fault(5, ordinal);
        StatsReport report = sim.run(Cycle(kFrames) * 80 + 1000);

        const VlStats& vs = report.vls.at(5);
        if (vs.lost_to_fault != 3) return "faults removed " + std::to_string(vs.lost_to_fault);
        if (vs.delivered_total != kFrames - 3)
            return "faulted run delivered " + std::to_string(vs.delivered_total) + "/347";
        const IntegrityCounters& ic = vs.integrity.at("b");
        if (ic.skips != 3)
            return "3 deletions but " + std::to_string(ic.skips) + " receiver skips";
        if (ic.duplicates != 0) return "faulted run saw duplicates";
    }
    return std::nullopt;
}

// --- 7: BAG law -------------------------------------------------------------

Outcome criterion_bag_law() {
    TopologyDesc t;
    NodeDesc sw;
    sw.id = "sw";
    sw.kind = NodeKind::Switch;
    sw.sw.ports = 3;
    sw.sw.address_table = {{5, {1}}, {6, {1}}, {7, {1}}};
    t.nodes = {es_node("a"), es_node("b"), es_node("c"), sw};
    t.links = {{"a", 0, "sw", 0}, {"b", 0, "sw", 1}, {"c", 0, "sw", 2}};
    auto vl = [](std::uint16_t vlid, std::uint32_t bag, std::uint32_t prio,
                 std::string src) {
        VirtualLink v;
        v.vlid = vlid;
        v.bag_cycles = bag;
        v.lmax_bytes = kMaxEthernetBytes;
        v.priority = prio;
        v.src_es = std::move(src);
        v.dest_es = {"b"};
        return v;
    };
    t.virtual_links = {vl(5, 50, 1, "a"), vl(6, 130, 0, "a"), vl(7, 333, 0, "c")};

    Simulation sim(t);
    std::mt19937_64 rng(0xBA61A000ull);
    std::map<std::uint16_t, std::string> src_of = {{5, "a"}, {6, "a"}, {7, "c"}};
    for (int i = 0; i < 300; ++i) {
        std::uint16_t vlid = std::uint16_t(5 + rng() % 3);
        Cycle at = rng() % 120000;
        std::vector<std::uint8_t> payload(rng() % 200);
        for (auto& b : payload) b = std::uint8_t(rng());
        sim.inject(at, src_of.at(vlid), vlid, std::move(payload));
    }
    sim.run(400000);

    std::map<std::uint16_t, std::uint32_t> bag = {{5, 50}, {6, 130}, {7, 333}};
    std::map<std::uint16_t, Cycle> last;
    std::map<std::uint16_t, std::uint64_t> count;
    std::uint64_t violations = 0;
    for (const auto& em : sim.emissions()) {
        auto it = last.find(em.vlid);
        if (it != last.end() && em.at - it->second < bag.at(em.vlid)) ++violations;
        last[em.vlid] = em.at;
        ++count[em.vlid];
    }
    if (violations != 0) return std::to_string(violations) + " BAG violations";
    for (const auto& [vlid, n] : count)
        if (n < 20)
            return "VL " + std::to_string(vlid) + " emitted only " + std::to_string(n) +
                   " frames; the schedule is not exercising the law";
    return std::nullopt;
}

// --- 8: determinism ---------------------------------------------------------

Outcome criterion_determinism() {
    for (const char* name :
         {"two_es_one_switch.json", "bitflip_fault.json", "broadcast_demo.json"}) {
        std::string text = read_config(name);
        if (text.empty()) return std::string("could not read ") + name;
        ScenarioConfig cfg = parse_config(text);

        auto run_once = [&cfg]() {
            Simulation sim = build_simulation(cfg, cfg.run.seed);
            StatsReport report = sim.run(cfg.run.cycles);
            return std::pair<std::string, std::string>(sim.trace_csv(),
                                                       report.to_json_text());
        };
        auto first = run_once();
        auto second = run_once();
        if (first.first != second.first)
            return std::string(name) + ": trace files differ between equal-seed runs";
        if (first.second != second.second)
            return std::string(name) + ": stats reports differ between equal-seed runs";
    }
    return std::nullopt;
}

// --- 9: broadcast mode ------------------------------------------------------

Outcome criterion_broadcast() {
    // Decision level: every TX port, or every TX port but the ingress.
    SwitchConfig cfg;
    cfg.port_count = 6;
    cfg.broadcast = true;
    Frame f;
    f.vlid = 99;
    f.payload.assign(20, 0x11);
    WireFrame wire = encode(f);

    ForwardDecision all = process_frame(wire.bytes, 2, cfg);
    if (all.is_drop()) return "broadcast dropped a valid frame";
    if (int(all.ports().size()) != cfg.port_count)
        return "broadcast produced " + std::to_string(all.ports().size()) +
               " copies, expected " + std::to_string(cfg.port_count);
    cfg.broadcast_excludes_ingress = true;
    ForwardDecision rest = process_frame(wire.bytes, 2, cfg);
    if (int(rest.ports().size()) != cfg.port_count - 1 || rest.ports().contains(2))
        return "ingress exclusion did not leave out exactly the ingress port";

    // System level: one injected frame fans out through a broadcast switch.
    auto fan_out = [](bool exclude) {
        TopologyDesc t;
        NodeDesc hub;
        hub.id = "hub";
        hub.kind = NodeKind::Switch;
        hub.sw.ports = 4;
        hub.sw.broadcast = true;
        hub.sw.broadcast_excludes_ingress = exclude;
        t.nodes = {es_node("e0"), es_node("e1"), es_node("e2"), es_node("e3"), hub};
        t.links = {{"e0", 0, "hub", 0},
                   {"e1", 0, "hub", 1},
                   {"e2", 0, "hub", 2},
                   {"e3", 0, "hub", 3}};
        VirtualLink vl;
        vl.vlid = 9;
        vl.bag_cycles = 1;
        vl.lmax_bytes = kMaxEthernetBytes;
        vl.src_es = "e0";
        vl.dest_es = {"e1", "e2", "e3"};
        t.virtual_links = {vl};
        Simulation sim(t);
        sim.inject(0, "e0", 9, std::vector<std::uint8_t>(17, 0x42));
        sim.run(5000);
        std::uint64_t enqueued = 0;
        for (const auto& rec : sim.trace())
            if (rec.node == "hub" && rec.kind == EventKind::SwitchForward && !rec.reason)
                ++enqueued;
        return std::pair<std::uint64_t, StatsReport>(enqueued, sim.stats());
    };

    auto [copies_all, stats_all] = fan_out(false);
    if (copies_all != 4)
        return "without exclusion, " + std::to_string(copies_all) +
               " copies were enqueued, expected the port count (4)";
    if (stats_all.vls.at(9).delivered_total != 4)
        return "without exclusion the mirror copy was not delivered back";

    auto [copies_rest, stats_rest] = fan_out(true);
    if (copies_rest != 3)
        return "with exclusion, " + std::to_string(copies_rest) +
               " copies were enqueued, expected port count - 1 (3)";
    if (stats_rest.vls.at(9).delivered_total != 3 ||
        stats_rest.vls.at(9).delivered_by_es.count("e0") != 0)
        return "with exclusion the ingress still received a copy";
    if (!stats_rest.ledger_balanced()) return "broadcast run unbalanced the ledger";
    return std::nullopt;
}

struct Criterion {
    const char* title;
    Outcome (*run)();
};

}  // namespace

int main() {
    const Criterion criteria[] = {
        {"buffer sizing: one 1526-byte maximum frame fits the 1600-byte port buffer, "
         "a second concurrent one does not (exact)",
         criterion_buffer_sizing},
        {"CRC-32: known vectors and 1200 random inputs equal the independent bit-level "
         "oracle (exact)",
         criterion_crc},
        {"filter pipeline: 10000 randomized frames drop in length -> FCS -> address "
         "order and clean frames forward byte-identical (zero tolerance)",
         criterion_filtering},
        {"forwarding equivalence: per-frame delivery sets equal the untimed graph "
         "oracle on 100 random topologies (exact set equality)",
         criterion_forwarding_oracle},
        {"latency model: delivery = injection + 2L + P for L in {72, 200, 1526} and "
         "P in {4, 16} (exact)",
         criterion_latency},
        {"sequence integrity: loss-free runs are clean, 3 deletions give exactly 3 "
         "skips, wrap goes 255 -> 1 over 350 frames (exact)",
         criterion_sequence_integrity},
        {"BAG law: consecutive emissions per VL stay >= bag_cycles apart under a "
         "randomized schedule (0 violations)",
         criterion_bag_law},
        {"determinism: equal-seed runs of every shipped scenario are byte-identical "
         "in trace and stats",
         criterion_determinism},
        {"broadcast: copies equal the port count, or port count - 1 with ingress "
         "exclusion",
         criterion_broadcast},
    };

    int failed = 0;
    int index = 0;
    for (const Criterion& c : criteria) {
        ++index;
        Outcome outcome;
        try {
            outcome = c.run();
        } catch (const std::exception& e) {
            outcome = std::string("unexpected exception: ") + e.what();
        }
        if (outcome) {
            ++failed;
            std::printf("criterion %d/9: FAIL %s [%s]\n", index, c.title, outcome->c_str());
        } else {
            std::printf("criterion %d/9: PASS %s\n", index, c.title);
        }
    }
    if (failed == 0) {
        std::printf("acceptance: all 9 criteria passed\n");
        return 0;
    }
    std::printf("acceptance: %d of 9 criteria FAILED\n", failed);
    return 1;
}
