#pragma once
#include <stdexcept>
#include <string>
#include <vector>

#include "rfvlc/config.hpp"
#include "rfvlc/grid.hpp"

namespace rfvlc {

// Thrown when an allocation breaks a structural constraint; carries the
// constraint name (C1..C12) and the offending indices in what().
class ConstraintError : public std::runtime_error {
public:
    ConstraintError(std::string constraint, const std::string& detail)
        : std::runtime_error(constraint + ": " + detail), constraint_(std::move(constraint)) {}
    const std::string& constraint() const { return constraint_; }

private:
    std::string constraint_;
};

// Aggregated: every user holds exactly one RF AP (C6). Hybrid: exactly one
// AP in total across both tiers.
enum class AssignmentMode { Aggregated, Hybrid };

// Full decision state: AP assignment x, subchannel grants s, transmit
// powers p and outage flags a.
struct Allocation {
    BinMat x_rf;     // [rf ap][user], row 0 is the macro AP
    BinMat x_vlc;    // [vlc ap][user]
    BinMat s_macro;  // [user][n]
    BinTen3 s_pico;  // [pico][user][m]
    BinTen3 s_vlc;   // [vlc ap][user][q]
    Mat p_macro;     // watts, same shapes as the s grids
    Ten3 p_pico;
    Ten3 p_vlc;
    std::vector<std::uint8_t> a;  // outage flags, a[j] = 0 means no subchannels

    static Allocation zeros(const ScenarioConfig& config);

    int users() const { return static_cast<int>(a.size()); }
    int subchannel_count(int j) const;  // grants held by user j across all tiers
    double user_power(int j) const;     // total watts allocated to user j
};

// Checks C1-C7 and C9-C12 (C8 is rate-dependent and lives in rate.hpp).
// Throws ConstraintError on the first violation.
void validate_structure(const Allocation& alloc, const ScenarioConfig& config,
                        AssignmentMode mode = AssignmentMode::Aggregated);

} // namespace rfvlc
