#pragma once
#include <stdexcept>
#include <string>
#include <vector>

#include "rfvlc/allocation.hpp"
#include "rfvlc/channel.hpp"
#include "rfvlc/config.hpp"
#include "rfvlc/matching.hpp"
#include "rfvlc/power.hpp"
#include "rfvlc/rate.hpp"
#include "rfvlc/subchannel.hpp"

namespace rfvlc {

enum class SchemeId {
    ProposedIterative,
    ProposedOneshot,
    ScgScgEpa,
    BaselineApprox,
    HybridIterative,
    ExhaustiveOracle,
};

std::string to_string(SchemeId id);
SchemeId scheme_from_string(const std::string& name);
AssignmentMode scheme_mode(SchemeId id);

// Raised when an instance is too large for the exhaustive oracle.
class OracleRefusal : public std::runtime_error {
public:
    explicit OracleRefusal(const std::string& why) : std::runtime_error(why) {}
};

struct RunResult {
    SchemeId scheme = SchemeId::ProposedOneshot;
    std::uint64_t seed = 0;
    Allocation allocation;
    EvaluatedAllocation evaluated;
    int outage_count = 0;
    int iterations_used = 1;
    double wall_time = 0;                // seconds
    std::vector<double> ee_trace;        // incumbent EE per outer iteration
    // Solver byproducts for the dump interfaces.
    PreferenceTables prefs;
    MatchingState matching;
    ParetoResult pareto;
};

// Single pass matching -> subchannels -> power (Fig.-style successive solve).
RunResult run_oneshot(const ScenarioConfig& config, const ChannelState& channel);

// Alternates the three stages, feeding optimized per-user powers back into
// the preference construction; keeps the best allocation seen.
RunResult run_alternating(const ScenarioConfig& config, const ChannelState& channel);

// Strongest-gain AP pick, strongest-gain subchannels, equal power split.
RunResult run_scg_scg_epa(const ScenarioConfig& config, const ChannelState& channel);

// Strongest-gain AP pick, QoS-first subchannels, optimized power.
RunResult run_baseline_approx(const ScenarioConfig& config, const ChannelState& channel);

// One AP total per user, otherwise the iterative pipeline.
RunResult run_hybrid(const ScenarioConfig& config, const ChannelState& channel);

// Full enumeration over assignments, grants and quantized power levels.
// Only desk-scale instances are accepted; larger ones raise OracleRefusal.
RunResult run_exhaustive(const ScenarioConfig& config, const ChannelState& channel,
                         int power_levels);

RunResult run_scheme(SchemeId id, const ScenarioConfig& config, const ChannelState& channel,
                     int power_levels = 5);

} // namespace rfvlc
