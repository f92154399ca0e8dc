#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "afdxnoc/simnet.hpp"
#include "afdxnoc/types.hpp"

namespace afdxnoc {

// One message handed to an End System at a fixed cycle.
struct AtInjection {
    std::string es;
    std::uint16_t vlid = 0;
    Cycle cycle = 0;
    std::size_t payload_bytes = 1;

    bool operator==(const AtInjection&) const = default;
};

// `count` messages, `period` cycles apart, starting at `start`.
struct PeriodicInjection {
    std::string es;
    std::uint16_t vlid = 0;
    Cycle start = 0;
    Cycle period = 1;
    std::uint64_t count = 1;
    std::size_t payload_bytes = 1;

    bool operator==(const PeriodicInjection&) const = default;
};

// Seeded generator: injections spaced by uniform gaps in [gap_min, gap_max]
// with payload sizes uniform in [payload_min, payload_max], from `start`
// until past `end`.
struct RandomInjection {
    std::string es;
    std::uint16_t vlid = 0;
    Cycle start = 0;
    Cycle end = 0;
    Cycle gap_min = 1;
    Cycle gap_max = 1;
    std::size_t payload_min = 1;
    std::size_t payload_max = 1;

    bool operator==(const RandomInjection&) const = default;
};

using TrafficSpec = std::variant<AtInjection, PeriodicInjection, RandomInjection>;

struct BitflipFaultSpec {
    Cycle cycle = 0;
    std::size_t link = 0;
    int dir = 0;  // 0: a->b, 1: b->a
    std::size_t byte_index = 0;
    int bit_index = 0;

    bool operator==(const BitflipFaultSpec&) const = default;
};

// Removes the nth emission (0-based) of the VL while on the wire.
struct DropFaultSpec {
    std::uint16_t vlid = 0;
    std::uint64_t emission_index = 0;

    bool operator==(const DropFaultSpec&) const = default;
};

using FaultSpec = std::variant<BitflipFaultSpec, DropFaultSpec>;

struct RunSection {
    Cycle cycles = 0;
    std::uint64_t seed = 0;
    std::string stats_path;
    std::string trace_path;
    Cycle stats_sample_period = 0;

    bool operator==(const RunSection&) const = default;
};

struct ScenarioConfig {
    TopologyDesc topology;
    std::vector<TrafficSpec> traffic;
    std::vector<FaultSpec> faults;
    RunSection run;

    bool operator==(const ScenarioConfig&) const = default;
};

// Parses and validates scenario text (JSON). Throws ParseError on syntax
// problems and ValidationError naming the first offending field otherwise.
ScenarioConfig parse_config(const std::string& text);

// Inverse of parse_config up to formatting: parse(serialize(parse(t))) is
// structurally identical to parse(t).
std::string serialize_config(const ScenarioConfig& config);

// A concrete injection after traffic expansion.
struct Injection {
    Cycle at = 0;
    std::string es;
    std::uint16_t vlid = 0;
    std::vector<std::uint8_t> payload;
};

// Expands every traffic spec into concrete injections, sorted by (cycle,
// es, vlid). Random generators draw from a deterministic stream derived
// from `seed` and the spec's position in the list; fixed specs never touch
// the RNG.
std::vector<Injection> expand_traffic(const ScenarioConfig& config, std::uint64_t seed);

// Builds the simulation, queues expanded traffic, and registers faults.
Simulation build_simulation(const ScenarioConfig& config, std::uint64_t seed);

}  // namespace afdxnoc
