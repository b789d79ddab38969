#pragma once
#include <span>
#include <vector>

#include "rfvlc/allocation.hpp"
#include "rfvlc/channel.hpp"
#include "rfvlc/config.hpp"

namespace rfvlc {

// One co-channel transmission seen at the receiver: the interfering AP's
// transmit power and its raw channel gain towards *this* user.
struct Interferer {
    double power;
    double gain;
};

// Shannon rate on a macro subchannel; the stored power gain enters squared.
double rate_macro(double p, double gain, const ScenarioConfig& config);

// Pico rate with co-tier interference (the macro tier uses disjoint bands).
double rate_pico(double p, double gain, std::span<const Interferer> interferers,
                 const ScenarioConfig& config);

// Optical lower-bound rate: exp(1)/2pi SNR prefactor, responsivity-scaled
// gains, and the LoS probability scaling the spectral efficiency.
double rate_vlc(double p, double gain, double rho, std::span<const Interferer> interferers,
                const ScenarioConfig& config);

struct EvaluatedAllocation {
    std::vector<double> per_user_rate;  // bit/s
    double sum_rate = 0;                // bit/s
    double total_power = 0;             // W, circuit floor included
    double ee = 0;                      // bit/J
};

// Validates the structural constraints, then computes per-user aggregate
// rates, total consumed power and the energy-efficiency ratio.
EvaluatedAllocation evaluate(const Allocation& alloc, const ChannelState& channel,
                             const ScenarioConfig& config,
                             AssignmentMode mode = AssignmentMode::Aggregated);

// Per-user QoS check: passes iff rate >= r_min * a_j (vacuous in outage).
std::vector<std::uint8_t> check_qos(const EvaluatedAllocation& evaluated,
                                    const Allocation& alloc, const ScenarioConfig& config);

namespace serial {
EvaluatedAllocation evaluate(const Allocation& alloc, const ChannelState& channel,
                             const ScenarioConfig& config,
                             AssignmentMode mode = AssignmentMode::Aggregated);
}

} // namespace rfvlc
