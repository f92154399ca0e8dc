#pragma once

#include <stdexcept>
#include <string>

namespace afdxnoc {

// Payload too large to fit the 1518-byte Ethernet envelope (or a VL's Lmax).
struct OversizeMessage : std::runtime_error {
    explicit OversizeMessage(const std::string& what) : std::runtime_error(what) {}
};

// Wire bytes that cannot be parsed back into a frame.
struct MalformedFrame : std::runtime_error {
    explicit MalformedFrame(const std::string& what) : std::runtime_error(what) {}
};

// Virtual link not configured, or not owned by the addressed End System.
struct UnknownVl : std::runtime_error {
    explicit UnknownVl(const std::string& what) : std::runtime_error(what) {}
};

// Injection requested before the current simulation clock.
struct PastCycle : std::runtime_error {
    explicit PastCycle(const std::string& what) : std::runtime_error(what) {}
};

// Topology description violating a structural constraint. The message names
// the first violated constraint.
struct InvalidTopology : std::runtime_error {
    explicit InvalidTopology(const std::string& what) : std::runtime_error(what) {}
};

// Scenario file is not syntactically valid.
struct ParseError : std::runtime_error {
    explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

// Scenario file parsed but a field is semantically invalid.
struct ValidationError : std::runtime_error {
    explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace afdxnoc
