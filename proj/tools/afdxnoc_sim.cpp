// Command-line front end: load a scenario, run it, emit stats/trace, and
// optionally audit the trace against the model invariants.
//
// Exit codes: 0 success, 1 invariant violations (--check), 2 configuration
// errors, 3 I/O errors.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "afdxnoc/bytes.hpp"
#include "afdxnoc/config.hpp"
#include "afdxnoc/errors.hpp"
#include "afdxnoc/frame.hpp"
#include "afdxnoc/log.hpp"
#include "afdxnoc/simnet.hpp"
#include "afdxnoc/trace_check.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitConfigError = 2;
constexpr int kExitIoError = 3;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    out << text;
    if (!out) throw std::runtime_error("short write to '" + path + "'");
}

struct RunOptions {
    std::string config_path;
    std::optional<std::uint64_t> cycles;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> stats_path;
    std::optional<std::string> trace_path;
    bool check = false;
};

int do_run(const RunOptions& opt) {
    std::string text;
    try {
        text = read_file(opt.config_path);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitIoError;
    }

    afdxnoc::ScenarioConfig cfg;
    try {
        cfg = afdxnoc::parse_config(text);
    } catch (const afdxnoc::ParseError& e) {
        std::cerr << "parse error: " << e.what() << '\n';
        return kExitConfigError;
    } catch (const afdxnoc::ValidationError& e) {
        std::cerr << "validation error: " << e.what() << '\n';
        return kExitConfigError;
    }

    std::uint64_t seed = opt.seed.value_or(cfg.run.seed);
    std::uint64_t cycles = opt.cycles.value_or(cfg.run.cycles);
    if (cycles == 0) {
        std::cerr << "error: no cycle count (set run.cycles or pass --cycles)\n";
        return kExitConfigError;
    }
    std::string stats_path = opt.stats_path.value_or(cfg.run.stats_path);
    std::string trace_path = opt.trace_path.value_or(cfg.run.trace_path);

    AFDXNOC_INFO("running '" << opt.config_path << "' for " << cycles << " cycles, seed "
                             << seed);

    try {
        afdxnoc::Simulation sim = afdxnoc::build_simulation(cfg, seed);
        afdxnoc::StatsReport report = sim.run(cycles);

        std::string stats_text = report.to_json_text();
        if (stats_path.empty())
            std::cout << stats_text;
        else
            write_file(stats_path, stats_text);
        if (!trace_path.empty()) write_file(trace_path, sim.trace_csv());

        if (opt.check) {
            afdxnoc::CheckResult check = afdxnoc::check_invariants(cfg, sim.trace(), report);
            if (!check.ok()) {
                for (const auto& v : check.violations)
                    std::cerr << "invariant violation: " << v << '\n';
                return kExitCheckFailed;
            }
            AFDXNOC_INFO("all trace invariants held");
        }
    } catch (const afdxnoc::InvalidTopology& e) {
        std::cerr << "validation error: " << e.what() << '\n';
        return kExitConfigError;
    } catch (const afdxnoc::ValidationError& e) {
        std::cerr << "validation error: " << e.what() << '\n';
        return kExitConfigError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitIoError;
    }
    return kExitOk;
}

int do_validate(const std::string& config_path) {
    std::string text;
    try {
        text = read_file(config_path);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitIoError;
    }
    try {
        afdxnoc::ScenarioConfig cfg = afdxnoc::parse_config(text);
        afdxnoc::Simulation sim(cfg.topology);  // full topology semantics
        std::cout << "valid: " << cfg.topology.nodes.size() << " nodes, "
                  << cfg.topology.links.size() << " links, "
                  << cfg.topology.virtual_links.size() << " virtual links, "
                  << cfg.traffic.size() << " traffic specs, " << cfg.faults.size()
                  << " faults\n";
    } catch (const afdxnoc::ParseError& e) {
        std::cerr << "parse error: " << e.what() << '\n';
        return kExitConfigError;
    } catch (const std::exception& e) {
        std::cerr << "validation error: " << e.what() << '\n';
        return kExitConfigError;
    }
    return kExitOk;
}

int do_vectors() {
    using afdxnoc::to_hex;
    nlohmann::ordered_json j;

    nlohmann::ordered_json crcs = nlohmann::ordered_json::array();
    const std::vector<std::string> inputs = {
        "", "123456789", "a", "abc", "message digest",
        "The quick brown fox jumps over the lazy dog",
    };
    for (const auto& s : inputs) {
        std::vector<std::uint8_t> bytes(s.begin(), s.end());
        char buf[11];
        std::snprintf(buf, sizeof buf, "0x%08X", afdxnoc::crc32(bytes));
        crcs.push_back({{"ascii", s}, {"input_hex", to_hex(bytes)}, {"crc32", buf}});
    }
    j["crc32"] = std::move(crcs);

    nlohmann::ordered_json frames = nlohmann::ordered_json::array();
    struct Sample {
        std::uint16_t vlid, src_es, sport, dport;
        std::uint8_t seq;
        std::size_t payload_len;
    };
    for (const Sample& s : {Sample{1, 0, 1000, 2000, 0, 0},
                            Sample{100, 2, 5000, 6000, 1, 17},
                            Sample{0xABCD, 7, 1, 65535, 255, 100}}) {
        afdxnoc::Frame f;
        f.vlid = s.vlid;
        f.src_es = s.src_es;
        f.udp_src_port = s.sport;
        f.udp_dst_port = s.dport;
        f.seq = s.seq;
        f.payload.resize(s.payload_len);
        for (std::size_t i = 0; i < s.payload_len; ++i)
            f.payload[i] = std::uint8_t(i & 0xFF);
        afdxnoc::WireFrame wire = afdxnoc::encode(f);
        nlohmann::ordered_json e;
        e["vlid"] = f.vlid;
        e["src_es"] = f.src_es;
        e["udp_src_port"] = f.udp_src_port;
        e["udp_dst_port"] = f.udp_dst_port;
        e["seq"] = f.seq;
        e["payload_hex"] = to_hex(f.payload);
        e["ethernet_size"] = wire.ethernet_size();
        e["wire_hex"] = to_hex(wire.bytes);
        frames.push_back(std::move(e));
    }
    j["frames"] = std::move(frames);

    std::cout << j.dump(2) << '\n';
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Deterministic AFDX-style network-on-chip simulator"};
    app.require_subcommand(1);

    RunOptions run_opt;
    CLI::App* run = app.add_subcommand("run", "Run a scenario and emit stats/trace");
    run->add_option("--config", run_opt.config_path, "Scenario file (JSON)")->required();
    run->add_option("--cycles", run_opt.cycles, "Cycles to simulate (overrides run.cycles)");
    run->add_option("--seed", run_opt.seed, "Generator seed (overrides run.seed)");
    run->add_option("--stats", run_opt.stats_path,
                    "Stats output path (overrides run.stats_path; default stdout)");
    run->add_option("--trace", run_opt.trace_path,
                    "Trace CSV output path (overrides run.trace_path)");
    run->add_flag("--check", run_opt.check, "Audit the trace against model invariants");

    std::string validate_path;
    CLI::App* validate = app.add_subcommand("validate", "Parse and validate a scenario only");
    validate->add_option("--config", validate_path, "Scenario file (JSON)")->required();

    CLI::App* vectors =
        app.add_subcommand("vectors", "Emit CRC and frame-codec test vectors as JSON");

    CLI11_PARSE(app, argc, argv);

    if (run->parsed()) return do_run(run_opt);
    if (validate->parsed()) return do_validate(validate_path);
    if (vectors->parsed()) return do_vectors();
    return kExitConfigError;
}
