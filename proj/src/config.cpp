#include "rfvlc/config.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace rfvlc {

namespace {

void require(bool ok, const char* what) {
    if (!ok) throw std::invalid_argument(std::string("scenario config: ") + what);
}

} // namespace

void ScenarioConfig::validate() const {
    require(macro_radius > 0, "macro_radius must be positive");
    require(pico_count >= 0, "pico_count must be nonnegative");
    require(pico_radius > 0, "pico_radius must be positive");
    require(room_count >= 0, "room_count must be nonnegative");
    require(room_side > 0, "room_side must be positive");
    require(vlc_aps_per_room > 0, "vlc_aps_per_room must be positive");
    require(vlc_ap_height > receiver_height, "vlc_ap_height must exceed receiver_height");
    require(receiver_height >= 0, "receiver_height must be nonnegative");
    require(user_count >= 0, "user_count must be nonnegative");
    require(subchannels_per_ap > 0, "subchannels_per_ap must be positive");
    require(bandwidth_rf > 0, "bandwidth_rf must be positive");
    require(bandwidth_vlc > 0, "bandwidth_vlc must be positive");
    require(p_macro_budget > 0, "p_macro_budget must be positive");
    require(p_pico_budget > 0, "p_pico_budget must be positive");
    require(p_vlc_budget > 0, "p_vlc_budget must be positive");
    require(circuit_macro > 0, "circuit_macro must be positive");
    require(circuit_pico > 0, "circuit_pico must be positive");
    require(circuit_vlc > 0, "circuit_vlc must be positive");
    require(noise_psd_rf > 0, "noise_psd_rf must be positive");
    require(noise_psd_vlc > 0, "noise_psd_vlc must be positive");
    require(r_min >= 0, "r_min must be nonnegative");
    require(pd_area > 0, "pd_area must be positive");
    require(semi_angle_half_power > 0 && semi_angle_half_power < 90,
            "semi_angle_half_power must lie in (0, 90) degrees");
    require(optical_filter_gain > 0, "optical_filter_gain must be positive");
    require(refractive_index > 0, "refractive_index must be positive");
    require(pd_fov > 0 && pd_fov <= 90, "pd_fov must lie in (0, 90] degrees");
    require(pd_responsivity > 0, "pd_responsivity must be positive");
    require(shadowing_sigma >= 0, "shadowing_sigma must be nonnegative");
    require(los_prob_low >= 0 && los_prob_low <= 1, "los_prob_range low must lie in [0,1]");
    require(los_prob_high >= 0 && los_prob_high <= 1, "los_prob_range high must lie in [0,1]");
    require(los_prob_low <= los_prob_high, "los_prob_range low must not exceed high");
    require(lambda_step > 0 && lambda_step <= 1, "lambda_step must lie in (0,1]");
    require(solver_tolerance > 0, "solver_tolerance must be positive");
    require(max_outer_iterations > 0, "max_outer_iterations must be positive");
}

std::string scenario_to_json(const ScenarioConfig& c) {
    nlohmann::ordered_json j;
    j["seed"] = c.seed;
    j["macro_radius"] = c.macro_radius;
    j["pico_count"] = c.pico_count;
    j["pico_radius"] = c.pico_radius;
    j["room_count"] = c.room_count;
    j["room_side"] = c.room_side;
    j["vlc_aps_per_room"] = c.vlc_aps_per_room;
    j["vlc_ap_height"] = c.vlc_ap_height;
    j["receiver_height"] = c.receiver_height;
    j["user_count"] = c.user_count;
    j["subchannels_per_ap"] = c.subchannels_per_ap;
    j["bandwidth_rf"] = c.bandwidth_rf;
    j["bandwidth_vlc"] = c.bandwidth_vlc;
    j["p_macro_budget"] = c.p_macro_budget;
    j["p_pico_budget"] = c.p_pico_budget;
    j["p_vlc_budget"] = c.p_vlc_budget;
    j["circuit_macro"] = c.circuit_macro;
    j["circuit_pico"] = c.circuit_pico;
    j["circuit_vlc"] = c.circuit_vlc;
    j["noise_psd_rf"] = c.noise_psd_rf;
    j["noise_psd_vlc"] = c.noise_psd_vlc;
    j["r_min"] = c.r_min;
    j["pd_area"] = c.pd_area;
    j["semi_angle_half_power"] = c.semi_angle_half_power;
    j["optical_filter_gain"] = c.optical_filter_gain;
    j["refractive_index"] = c.refractive_index;
    j["pd_fov"] = c.pd_fov;
    j["pd_responsivity"] = c.pd_responsivity;
    j["shadowing_sigma"] = c.shadowing_sigma;
    j["los_prob_range"] = {c.los_prob_low, c.los_prob_high};
    j["lambda_step"] = c.lambda_step;
    j["solver_tolerance"] = c.solver_tolerance;
    j["max_outer_iterations"] = c.max_outer_iterations;
    return j.dump(2);
}

ScenarioConfig scenario_from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    ScenarioConfig c;
    auto get = [&](const char* key, auto& field) {
        if (j.contains(key)) field = j.at(key).get<std::remove_reference_t<decltype(field)>>();
    };
    get("seed", c.seed);
    get("macro_radius", c.macro_radius);
    get("pico_count", c.pico_count);
    get("pico_radius", c.pico_radius);
    get("room_count", c.room_count);
    get("room_side", c.room_side);
    get("vlc_aps_per_room", c.vlc_aps_per_room);
    get("vlc_ap_height", c.vlc_ap_height);
    get("receiver_height", c.receiver_height);
    get("user_count", c.user_count);
    get("subchannels_per_ap", c.subchannels_per_ap);
    get("bandwidth_rf", c.bandwidth_rf);
    get("bandwidth_vlc", c.bandwidth_vlc);
    get("p_macro_budget", c.p_macro_budget);
    get("p_pico_budget", c.p_pico_budget);
    get("p_vlc_budget", c.p_vlc_budget);
    get("circuit_macro", c.circuit_macro);
    get("circuit_pico", c.circuit_pico);
    get("circuit_vlc", c.circuit_vlc);
    get("noise_psd_rf", c.noise_psd_rf);
    get("noise_psd_vlc", c.noise_psd_vlc);
    get("r_min", c.r_min);
    get("pd_area", c.pd_area);
    get("semi_angle_half_power", c.semi_angle_half_power);
    get("optical_filter_gain", c.optical_filter_gain);
    get("refractive_index", c.refractive_index);
    get("pd_fov", c.pd_fov);
    get("pd_responsivity", c.pd_responsivity);
    get("shadowing_sigma", c.shadowing_sigma);
    if (j.contains("los_prob_range")) {
        auto arr = j.at("los_prob_range");
        if (!arr.is_array() || arr.size() != 2)
            throw std::invalid_argument("scenario config: los_prob_range must be [low, high]");
        c.los_prob_low = arr[0].get<double>();
        c.los_prob_high = arr[1].get<double>();
    }
    get("lambda_step", c.lambda_step);
    get("solver_tolerance", c.solver_tolerance);
    get("max_outer_iterations", c.max_outer_iterations);
    c.validate();
    return c;
}

ScenarioConfig load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open scenario file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return scenario_from_json(ss.str());
}

void save_scenario(const ScenarioConfig& cfg, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write scenario file: " + path);
    out << scenario_to_json(cfg) << "\n";
}

} // namespace rfvlc
