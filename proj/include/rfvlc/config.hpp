#pragma once
#include <cstdint>
#include <string>

namespace rfvlc {

// Every static parameter of a simulated network. Defaults give the small
// CI-friendly scenario: 1 macro + 2 picos + 2 rooms with 2 LED arrays each,
// desk-scale geometry and circuit draw. scenarios/table1.json carries the
// full-scale values (500 m cell, 50 subchannels, 10 dB shadowing).
struct ScenarioConfig {
    std::uint64_t seed = 1;

    // geometry
    double macro_radius = 8.0;    // m
    int pico_count = 2;
    double pico_radius = 3.0;     // m
    int room_count = 2;
    double room_side = 5.0;       // m
    int vlc_aps_per_room = 2;
    double vlc_ap_height = 2.15;  // m
    double receiver_height = 0.85; // m (desk height)
    int user_count = 20;

    // spectrum
    int subchannels_per_ap = 10;  // |N| = |M| = |Q|
    double bandwidth_rf = 10e6;   // Hz per subchannel
    double bandwidth_vlc = 20e6;  // Hz per subchannel

    // power
    double p_macro_budget = 39.810717055349734; // W (46 dBm)
    double p_pico_budget = 1.0;   // W (30 dBm)
    double p_vlc_budget = 1.0;    // W (30 dBm)
    double circuit_macro = 40.0;  // W
    double circuit_pico = 2.5;    // W
    double circuit_vlc = 1.5;     // W

    // noise
    double noise_psd_rf = 3.9810717055349695e-21;  // W/Hz (-174 dBm/Hz)
    double noise_psd_vlc = 1e-21;                  // A^2/Hz

    // service
    double r_min = 50e6;          // bit/s

    // photodetector / LED
    double pd_area = 1e-4;        // m^2
    double semi_angle_half_power = 60.0; // deg
    double optical_filter_gain = 1.0;
    double refractive_index = 1.5;
    double pd_fov = 70.0;         // deg
    double pd_responsivity = 0.53; // A/W

    // random effects
    // The stored gains enter the rate formulas squared, which doubles any
    // dB-scale spread; 4 dB here plays the role of ~8 dB of shadowing.
    double shadowing_sigma = 4.0; // dB
    double los_prob_low = 0.5;
    double los_prob_high = 0.8;

    // solver
    double lambda_step = 0.1;
    double solver_tolerance = 1e-4;
    int max_outer_iterations = 10;

    int rf_ap_count() const { return 1 + pico_count; }
    int vlc_ap_count() const { return room_count * vlc_aps_per_room; }
    double total_circuit_power() const {
        return circuit_macro + pico_count * circuit_pico + vlc_ap_count() * circuit_vlc;
    }
    double rf_noise_power() const { return noise_psd_rf * bandwidth_rf; }
    double vlc_noise_power() const { return noise_psd_vlc * bandwidth_vlc; }

    // Throws std::invalid_argument naming the first violated field.
    void validate() const;
};

// Flat JSON document whose keys mirror the field names; los_prob_range is
// a two-element [low, high] array.
ScenarioConfig load_scenario(const std::string& path);
void save_scenario(const ScenarioConfig& cfg, const std::string& path);
std::string scenario_to_json(const ScenarioConfig& cfg);
ScenarioConfig scenario_from_json(const std::string& text);

} // namespace rfvlc
