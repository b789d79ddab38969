#pragma once
#include <vector>

#include "rfvlc/allocation.hpp"
#include "rfvlc/channel.hpp"
#include "rfvlc/config.hpp"
#include "rfvlc/grid.hpp"

namespace rfvlc {

struct SaResult {
    BinMat s_macro;   // [user][n]
    BinTen3 s_pico;   // [pico][user][m]
    BinTen3 s_vlc;    // [vlc][user][q]
    std::vector<std::uint8_t> a;  // 1 iff the user holds at least one grant
};

// Strongest-channel-gain rule: every subchannel of every AP goes to the
// assigned user with the highest gain on it (ties to the lower index).
SaResult allocate_scg(const BinMat& x_rf, const BinMat& x_vlc, const ChannelState& channel,
                      const ScenarioConfig& config);

// QoS-first baseline: serve users in ascending estimated-rate order until
// everyone reaches r_min or channels run out, then hand leftovers to the
// SCG rule. Estimates use an equal power split and no interference.
SaResult allocate_qos_first(const BinMat& x_rf, const BinMat& x_vlc, const ChannelState& channel,
                            const ScenarioConfig& config);

// Asserts C1, C4 and C5 for a subchannel solution; throws ConstraintError.
void validate_sa(const SaResult& sa, const BinMat& x_rf, const BinMat& x_vlc,
                 const ScenarioConfig& config);

} // namespace rfvlc
