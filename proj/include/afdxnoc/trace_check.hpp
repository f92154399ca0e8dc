#pragma once

#include <string>
#include <vector>

#include "afdxnoc/config.hpp"
#include "afdxnoc/simnet.hpp"
#include "afdxnoc/stats.hpp"

namespace afdxnoc {

struct CheckResult {
    std::vector<std::string> violations;

    bool ok() const { return violations.empty(); }
};

// Audits a finished run against the model's invariants, using only the
// event trace, the final stats, and the scenario they came from:
//   - BAG law: consecutive emissions of a VL start >= bag_cycles apart.
//   - Wire occupancy: every transmission lasts its frame length, one frame
//     per channel at a time, lengths within [72, 1526] and the VL's Lmax.
//   - Causality: no delivery before injection + wire length.
//   - Per-VL FIFO: no destination observes frames out of emission order.
//   - Conservation: the per-copy ledger balances exactly.
//   - Capacity: buffer peaks within 1600 bytes; utilization within [0, 1].
CheckResult check_invariants(const ScenarioConfig& config,
                             const std::vector<TraceRecord>& trace,
                             const StatsReport& stats);

}  // namespace afdxnoc
