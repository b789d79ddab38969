#pragma once
#include "rfvlc/config.hpp"
#include "rfvlc/grid.hpp"
#include "rfvlc/rng.hpp"
#include "rfvlc/topology.hpp"

namespace rfvlc {

enum class RfApKind { Macro, Pico };

// Channel power gains for every (AP, user, subchannel) triple, plus the
// line-of-sight availability probabilities for the optical links.
struct ChannelState {
    int users = 0;
    int subchannels = 0;
    Mat g_macro;   // [user][n]
    Ten3 g_pico;   // [pico][user][m]
    Ten3 g_vlc;    // [vlc ap][user][q]
    Ten3 rho;      // [vlc ap][user][q]

    // Arithmetic means over the subchannel axis (matching-stage inputs).
    double mean_gain_macro(int j) const;
    double mean_gain_pico(int k, int j) const;   // k is the pico index (0-based)
    double mean_gain_vlc(int v, int j) const;
    double mean_rho(int v, int j) const;

    bool operator==(const ChannelState&) const = default;
};

// Distance-dependent pathloss in dB; distance in km, must be positive.
double rf_pathloss_macro_db(double distance_km);
double rf_pathloss_pico_db(double distance_km);

// Linear gain from explicit dB terms: 10^(-(L + pen + fade + shadow)/10).
double rf_gain_from_terms(RfApKind kind, double distance_km, double penetration_db,
                          double fading_db, double shadowing_db);

// Draws penetration (indoor only), shadowing and one fading value from rng.
double rf_gain(RfApKind kind, double distance_km, bool indoor, Rng& rng,
               const ScenarioConfig& config);

// Lambertian LoS gain scaled by the LoS probability; zero outside the
// photodetector field of view.
double vlc_gain(const Vec3& ap_pos, const Vec3& user_pos, double rho,
                const ScenarioConfig& config);

double lambertian_order(double semi_angle_half_power_deg);
double concentrator_gain(double incidence_rad, const ScenarioConfig& config);

// Fills all tensors using streams keyed on config.seed. Identical output
// for the serial and OpenMP drivers.
ChannelState build_channel_state(const Topology& topology, const ScenarioConfig& config);

namespace serial {
// Reference single-thread driver kept for kernel testing and benchmarks.
ChannelState build_channel_state(const Topology& topology, const ScenarioConfig& config);
}

} // namespace rfvlc
