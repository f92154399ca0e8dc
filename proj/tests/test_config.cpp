#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"

#include "afdxnoc/config.hpp"
#include "afdxnoc/errors.hpp"
#include "afdxnoc/trace_check.hpp"

using namespace afdxnoc;

namespace {

std::string read_config(const std::string& name) {
    std::ifstream in(std::string(AFDXNOC_CONFIG_DIR) + "/" + name);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Minimal valid scenario the error tests mutate.
const char* kBase = R"({
  "topology": {
    "nodes": [
      {"id": "a", "kind": "end_system"},
      {"id": "b", "kind": "end_system"},
      {"id": "sw", "kind": "switch", "ports": 2, "address_table": {"5": [1]}}
    ],
    "links": [
      {"a": "a", "a_port": 0, "b": "sw", "b_port": 0},
      {"a": "b", "a_port": 0, "b": "sw", "b_port": 1}
    ]
  },
  "virtual_links": [
    {"vlid": 5, "bag_cycles": 10, "lmax_bytes": 200, "src": "a", "dests": ["b"]}
  ],
  "traffic": [
    {"type": "at", "es": "a", "vlid": 5, "cycle": 0, "payload_bytes": 17}
  ],
  "run": {"cycles": 1000, "seed": 1}
})";

std::string with_replacement(const std::string& from, const std::string& to) {
    std::string text = kBase;
    auto pos = text.find(from);
    REQUIRE(pos != std::string::npos);
    text.replace(pos, from.size(), to);
    return text;
}

}  // namespace

TEST_CASE("the shipped scenarios parse") {
    for (const char* name :
         {"two_es_one_switch.json", "bitflip_fault.json", "broadcast_demo.json"}) {
        CAPTURE(name);
        std::string text = read_config(name);
        REQUIRE_FALSE(text.empty());
        ScenarioConfig cfg = parse_config(text);
        CHECK_FALSE(cfg.topology.nodes.empty());
        CHECK_FALSE(cfg.topology.virtual_links.empty());
        CHECK_FALSE(cfg.traffic.empty());
        CHECK(cfg.run.cycles > 0);
    }
}

TEST_CASE("the two-ES scenario carries its stated fields") {
    ScenarioConfig cfg = parse_config(read_config("two_es_one_switch.json"));
    REQUIRE(cfg.topology.nodes.size() == 3);
    CHECK(cfg.topology.nodes[2].sw.ports == 4);
    CHECK(cfg.topology.nodes[2].sw.address_table.at(5) == std::set<int>{1});
    REQUIRE(cfg.topology.virtual_links.size() == 1);
    CHECK(cfg.topology.virtual_links[0].bag_cycles == 400);
    CHECK(cfg.topology.virtual_links[0].dest_es == std::set<std::string>{"es2"});
    CHECK(cfg.run.cycles == 10000);
    CHECK(cfg.run.seed == 42);
    CHECK(cfg.run.stats_sample_period == 1000);
}

TEST_CASE("syntax problems raise ParseError, not ValidationError") {
    CHECK_THROWS_AS(parse_config("{"), ParseError);
    CHECK_THROWS_AS(parse_config("{\"topology\": }"), ParseError);
    CHECK_THROWS_AS(parse_config(""), ParseError);
    CHECK_THROWS_AS(parse_config("{} trailing"), ParseError);
}

TEST_CASE("semantic problems raise ValidationError naming the field") {
    SUBCASE("missing topology") {
        CHECK_THROWS_WITH_AS(parse_config("{}"),
                             "config.topology: missing required field", ValidationError);
    }
    SUBCASE("top level must be an object") {
        CHECK_THROWS_AS(parse_config("[1, 2]"), ValidationError);
    }
    SUBCASE("unknown node kind") {
        std::string text = with_replacement("\"kind\": \"switch\"", "\"kind\": \"router\"");
        CHECK_THROWS_WITH_AS(parse_config(text),
                             "topology.nodes[2].kind: expected \"end_system\" or \"switch\"",
                             ValidationError);
    }
    SUBCASE("BAG of zero names the offending field") {
        std::string text = with_replacement("\"bag_cycles\": 10", "\"bag_cycles\": 0");
        CHECK_THROWS_WITH_AS(parse_config(text),
                             "virtual_links[0].bag_cycles: must be >= 1", ValidationError);
    }
    SUBCASE("Lmax outside the envelope") {
        std::string text = with_replacement("\"lmax_bytes\": 200", "\"lmax_bytes\": 1519");
        CHECK_THROWS_WITH_AS(parse_config(text),
                             "virtual_links[0].lmax_bytes: must be in [64, 1518]",
                             ValidationError);
    }
    SUBCASE("a destination missing from the topology") {
        std::string text = with_replacement("\"dests\": [\"b\"]", "\"dests\": [\"ghost\"]");
        CHECK_THROWS_WITH_AS(parse_config(text),
                             "virtual_links[0].dests: 'ghost' is not a topology node",
                             ValidationError);
    }
    SUBCASE("a destination that is a switch") {
        std::string text = with_replacement("\"dests\": [\"b\"]", "\"dests\": [\"sw\"]");
        CHECK_THROWS_WITH_AS(parse_config(text),
                             "virtual_links[0].dests: 'sw' is not an End System",
                             ValidationError);
    }
    SUBCASE("traffic on a VL the End System does not source") {
        std::string text = with_replacement("\"es\": \"a\", \"vlid\": 5",
                                            "\"es\": \"b\", \"vlid\": 5");
        CHECK_THROWS_WITH_AS(parse_config(text),
                             "traffic[0].vlid: VL 5 is not sourced by 'b'", ValidationError);
    }
    SUBCASE("traffic payload past the VL's Lmax") {
        std::string text = with_replacement("\"payload_bytes\": 17", "\"payload_bytes\": 154");
        CHECK_THROWS_WITH_AS(parse_config(text),
                             "traffic[0].payload_bytes: payload encodes past Lmax of VL 5",
                             ValidationError);
    }
    SUBCASE("negative numbers are rejected where counts are expected") {
        std::string text = with_replacement("\"cycle\": 0", "\"cycle\": -3");
        CHECK_THROWS_WITH_AS(parse_config(text),
                             "traffic[0].cycle: expected a non-negative integer",
                             ValidationError);
    }
    SUBCASE("address table keyed by something that is not a VLID") {
        std::string text = with_replacement("\"address_table\": {\"5\": [1]}",
                                            "\"address_table\": {\"five\": [1]}");
        CHECK_THROWS_WITH_AS(
            parse_config(text),
            "topology.nodes[2].address_table.five: key is not a VLID", ValidationError);
    }
    SUBCASE("fault on a link that does not exist") {
        std::string text = with_replacement(
            "\"run\"",
            "\"faults\": [{\"type\": \"bitflip\", \"cycle\": 1, \"link\": 9, "
            "\"byte_index\": 0, \"bit_index\": 0}], \"run\"");
        CHECK_THROWS_WITH_AS(parse_config(text), "faults[0].link: no link with index 9",
                             ValidationError);
    }
    SUBCASE("drop fault on an unconfigured VL") {
        std::string text = with_replacement(
            "\"run\"",
            "\"faults\": [{\"type\": \"drop\", \"vlid\": 99, \"emission_index\": 0}], "
            "\"run\"");
        CHECK_THROWS_WITH_AS(parse_config(text),
                             "faults[0].vlid: VL 99 is not configured", ValidationError);
    }
}

TEST_CASE("serialize is the inverse of parse up to formatting") {
    for (const char* name :
         {"two_es_one_switch.json", "bitflip_fault.json", "broadcast_demo.json"}) {
        CAPTURE(name);
        ScenarioConfig once = parse_config(read_config(name));
        ScenarioConfig twice = parse_config(serialize_config(once));
        CHECK(once == twice);
        // A second round adds nothing: serialization is stable.
        CHECK(serialize_config(once) == serialize_config(twice));
    }
    ScenarioConfig base = parse_config(kBase);
    CHECK(base == parse_config(serialize_config(base)));
}

TEST_CASE("traffic expansion: fixed specs expand exactly") {
    ScenarioConfig cfg = parse_config(kBase);
    PeriodicInjection p;
    p.es = "a";
    p.vlid = 5;
    p.start = 100;
    p.period = 50;
    p.count = 4;
    p.payload_bytes = 20;
    cfg.traffic.emplace_back(p);

    auto injections = expand_traffic(cfg, 0);
    REQUIRE(injections.size() == 5);  // 1 at + 4 periodic
    CHECK(injections[0].at == 0);
    CHECK(injections[0].payload.size() == 17);
    for (int k = 0; k < 4; ++k) {
        CHECK(injections[std::size_t(1 + k)].at == Cycle(100 + 50 * k));
        CHECK(injections[std::size_t(1 + k)].payload.size() == 20);
    }
    // Deterministic pattern payload: byte i is (vlid + i) mod 256.
    CHECK(injections[0].payload[0] == 5);
    CHECK(injections[0].payload[1] == 6);
    CHECK(injections[0].payload[16] == 21);
}

TEST_CASE("traffic expansion: random specs are seed-deterministic") {
    ScenarioConfig cfg = parse_config(kBase);
    cfg.traffic.clear();
    RandomInjection r;
    r.es = "a";
    r.vlid = 5;
    r.start = 0;
    r.end = 5000;
    r.gap_min = 10;
    r.gap_max = 200;
    r.payload_min = 1;
    r.payload_max = 120;
    cfg.traffic.emplace_back(r);

    auto first = expand_traffic(cfg, 1234);
    auto second = expand_traffic(cfg, 1234);
    REQUIRE(first.size() == second.size());
    REQUIRE(first.size() > 10);
    for (std::size_t i = 0; i < first.size(); ++i) {
        CHECK(first[i].at == second[i].at);
        CHECK(first[i].payload == second[i].payload);
    }
    for (std::size_t i = 1; i < first.size(); ++i) {
        CHECK(first[i].at - first[i - 1].at >= 10);
        CHECK(first[i].at - first[i - 1].at <= 200);
    }
    for (const auto& inj : first) {
        CHECK(inj.payload.size() >= 1);
        CHECK(inj.payload.size() <= 120);
    }

    auto other_seed = expand_traffic(cfg, 99);
    bool differs = other_seed.size() != first.size();
    for (std::size_t i = 0; !differs && i < first.size(); ++i)
        differs = other_seed[i].at != first[i].at || other_seed[i].payload != first[i].payload;
    CHECK(differs);
}

TEST_CASE("expanded traffic is sorted by cycle") {
    ScenarioConfig cfg = parse_config(kBase);
    AtInjection late;
    late.es = "a";
    late.vlid = 5;
    late.cycle = 5;
    late.payload_bytes = 3;
    AtInjection early;
    early.es = "a";
    early.vlid = 5;
    early.cycle = 1;
    early.payload_bytes = 3;
    cfg.traffic.emplace_back(late);
    cfg.traffic.emplace_back(early);

    auto injections = expand_traffic(cfg, 0);
    for (std::size_t i = 1; i < injections.size(); ++i)
        CHECK(injections[i - 1].at <= injections[i].at);
}

TEST_CASE("a parsed scenario drives a full run end to end") {
    ScenarioConfig cfg = parse_config(read_config("two_es_one_switch.json"));
    Simulation sim = build_simulation(cfg, cfg.run.seed);
    StatsReport report = sim.run(cfg.run.cycles);

    const VlStats& vs = report.vls.at(5);
    CHECK(vs.submitted == 20);
    CHECK(vs.emitted == 20);
    CHECK(vs.delivered_total == 20);
    CHECK(vs.integrity.at("es2").skips == 0);
    CHECK(vs.integrity.at("es2").duplicates == 0);
    CHECK(report.ledger_balanced());

    CheckResult res = check_invariants(cfg, sim.trace(), report);
    std::string first = res.violations.empty() ? std::string() : res.violations.front();
    CHECK_MESSAGE(res.ok(), first);
}

TEST_CASE("the bitflip scenario loses exactly its one corrupted frame") {
    ScenarioConfig cfg = parse_config(read_config("bitflip_fault.json"));
    Simulation sim = build_simulation(cfg, cfg.run.seed);
    StatsReport report = sim.run(cfg.run.cycles);

    const VlStats& vs = report.vls.at(5);
    CHECK(vs.emitted == 2);
    CHECK(vs.dropped[std::size_t(DropReason::BadFcs)] == 1);
    CHECK(vs.delivered_total == 1);
    CHECK(report.ledger_balanced());
}

TEST_CASE("stats reports serialize to parseable JSON with the headline fields") {
    ScenarioConfig cfg = parse_config(read_config("two_es_one_switch.json"));
    Simulation sim = build_simulation(cfg, cfg.run.seed);
    StatsReport report = sim.run(cfg.run.cycles);

    std::string text = report.to_json_text();
    CHECK(text.find("\"cycles_run\": 10000") != std::string::npos);
    CHECK(text.find("\"virtual_links\"") != std::string::npos);
    CHECK(text.find("\"ledger_balanced\": true") != std::string::npos);
    CHECK(text.find("\"delivered_total\": 20") != std::string::npos);
}
