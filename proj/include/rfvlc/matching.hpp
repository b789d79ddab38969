#pragma once
#include <optional>
#include <utility>
#include <vector>

#include "rfvlc/channel.hpp"
#include "rfvlc/config.hpp"
#include "rfvlc/grid.hpp"

namespace rfvlc {

// Provisional per-(AP, user) transmit powers. The first assignment pass uses
// budget / subchannel_count everywhere; later passes of the alternating
// solver substitute each user's optimized average power.
struct PowerProfile {
    Mat pbar_rf;   // [rf ap][user], row 0 = macro
    Mat pbar_vlc;  // [vlc ap][user]

    static PowerProfile defaults(const ScenarioConfig& config);
};

// Potential energy efficiency of every (AP, user) pair under worst-case
// co-tier interference, plus the preference orders derived from it.
struct PreferenceTables {
    Mat ee_rf;    // bit/J
    Mat ee_vlc;
    std::vector<std::vector<int>> rf_ap_pref;    // users, descending EE
    std::vector<std::vector<int>> vlc_ap_pref;
    std::vector<std::vector<int>> user_rf_pref;  // APs, descending EE
    std::vector<std::vector<int>> user_vlc_pref;
};

PreferenceTables build_preferences(const ChannelState& channel, const ScenarioConfig& config,
                                   const PowerProfile& profile);

// One side of the assignment problem as a quota-constrained matching game.
// Zero-metric pairs are unacceptable and appear in no preference list.
struct MatchingGame {
    Mat metric;                 // [ap][user]
    Mat cost;                   // [ap][user] provisional power when admitted
    std::vector<double> quota;  // per ap, watts
    std::vector<std::vector<int>> ap_pref;
    std::vector<std::vector<int>> user_pref;

    int aps() const { return static_cast<int>(metric.rows()); }
    int users() const { return static_cast<int>(metric.cols()); }
};

MatchingGame make_rf_game(const PreferenceTables& prefs, const ScenarioConfig& config,
                          const PowerProfile& profile);
MatchingGame make_vlc_game(const PreferenceTables& prefs, const ScenarioConfig& config,
                           const PowerProfile& profile);
// All APs in one game; used by the hybrid configuration where a user may
// hold a single AP across both tiers. RF AP indices precede VLC ones.
MatchingGame make_hybrid_game(const PreferenceTables& prefs, const ScenarioConfig& config,
                              const PowerProfile& profile);

struct GameResult {
    std::vector<int> user_match;              // ap index or -1
    std::vector<std::vector<int>> waitlists;  // per ap, in AP preference order
    std::vector<double> quota_used;
    long proposals = 0;
    int rounds = 0;
};

// Round-based deferred acceptance: unmatched users propose down their lists,
// APs keep the best applicants that fit the power quota.
GameResult deferred_acceptance(const MatchingGame& game);

struct MatchingState {
    GameResult rf;
    GameResult vlc;
};

MatchingState run_matching(const PreferenceTables& prefs, const ScenarioConfig& config,
                           const PowerProfile& profile);

// x matrices from the final matching. Users rejected by every RF AP fall
// back to the macro AP (blanket coverage) with no reserved quota.
std::pair<BinMat, BinMat> extract_assignment(const MatchingState& state,
                                             const ScenarioConfig& config);

struct BlockingPair {
    int user;
    int ap;
};

struct StabilityReport {
    bool stable = true;
    std::optional<BlockingPair> witness;
};

// Exhaustive blocking-pair scan. A pair blocks when both sides strictly
// prefer each other (by metric) and the AP has quota slack for the user or
// could free it by dropping a lower-ranked incumbent.
StabilityReport certify_stability(const GameResult& result, const MatchingGame& game);

} // namespace rfvlc
