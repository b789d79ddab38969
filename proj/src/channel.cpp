#include "rfvlc/channel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "rfvlc/units.hpp"

namespace rfvlc {

double rf_pathloss_macro_db(double distance_km) {
    if (distance_km <= 0) throw std::domain_error("rf_pathloss_macro_db: distance must be positive");
    return 128.1 + 37.6 * std::log10(distance_km);
}

double rf_pathloss_pico_db(double distance_km) {
    if (distance_km <= 0) throw std::domain_error("rf_pathloss_pico_db: distance must be positive");
    return 140.7 + 36.7 * std::log10(distance_km);
}

double rf_gain_from_terms(RfApKind kind, double distance_km, double penetration_db,
                          double fading_db, double shadowing_db) {
    double pl = kind == RfApKind::Macro ? rf_pathloss_macro_db(distance_km)
                                        : rf_pathloss_pico_db(distance_km);
    return db_to_linear(-(pl + penetration_db + fading_db + shadowing_db));
}

namespace {

// Indoor wall loss: 20 dB (macro) / 23 dB (pico) plus 0.5 dB per meter of an
// in-building distance drawn from U[0, min(25, ground distance in m)].
double draw_penetration_db(RfApKind kind, double ground_distance_m, Rng& rng) {
    double d = rng.uniform(0.0, std::min(25.0, ground_distance_m));
    return (kind == RfApKind::Macro ? 20.0 : 23.0) + 0.5 * d;
}

// Rayleigh envelope: unit-mean exponential power fade expressed in dB.
double draw_fading_db(Rng& rng) { return -10.0 * std::log10(rng.exponential()); }

} // namespace

double rf_gain(RfApKind kind, double distance_km, bool indoor, Rng& rng,
               const ScenarioConfig& config) {
    if (distance_km <= 0) throw std::domain_error("rf_gain: distance must be positive");
    double shadow = rng.normal(0.0, config.shadowing_sigma);
    double pen = indoor ? draw_penetration_db(kind, distance_km * 1000.0, rng) : 0.0;
    double fade = draw_fading_db(rng);
    return rf_gain_from_terms(kind, distance_km, pen, fade, shadow);
}

double lambertian_order(double semi_angle_half_power_deg) {
    return -1.0 / std::log2(std::cos(deg_to_rad(semi_angle_half_power_deg)));
}

double concentrator_gain(double incidence_rad, const ScenarioConfig& config) {
    double fov = deg_to_rad(config.pd_fov);
    if (incidence_rad > fov) return 0.0;
    double s = std::sin(fov);
    return config.refractive_index * config.refractive_index / (s * s);
}

double vlc_gain(const Vec3& ap_pos, const Vec3& user_pos, double rho,
                const ScenarioConfig& config) {
    double d = dist3d(ap_pos, user_pos);
    if (d <= 0) throw std::domain_error("vlc_gain: positions must be distinct");
    // LED points straight down, photodetector straight up: the irradiance and
    // incidence angles coincide and cos = vertical drop / distance.
    double dz = ap_pos.z - user_pos.z;
    double cos_angle = std::clamp(dz / d, -1.0, 1.0);
    double angle = std::acos(cos_angle);
    if (angle > deg_to_rad(config.pd_fov) || cos_angle <= 0) return 0.0;
    double m1 = lambertian_order(config.semi_angle_half_power);
    double geom = config.pd_area * (m1 + 1.0) / (2.0 * kPi * d * d);
    return rho * geom * std::pow(cos_angle, m1) * config.optical_filter_gain *
           concentrator_gain(angle, config) * cos_angle;
}

namespace {

constexpr double kMinGroundDistanceM = 1.0; // pathloss models are far-field

void fill_rf_user(const Topology& topo, const ScenarioConfig& cfg, RfApKind kind, int ap,
                  int j, ChannelState& cs) {
    const Vec3& u = topo.user_positions[j];
    Vec2 ap_pos = kind == RfApKind::Macro ? topo.macro_position : topo.pico_positions[ap];
    double dist_m = std::max(dist2d(ap_pos, u), kMinGroundDistanceM);
    double dist_km = dist_m / 1000.0;
    bool indoor = topo.user_is_indoor(j);

    std::uint64_t kind_id = kind == RfApKind::Macro ? 0 : 1;
    Rng large_scale = Rng::keyed(cfg.seed, kTagRfLargeScale, kind_id, ap, j);
    double shadow = large_scale.normal(0.0, cfg.shadowing_sigma);
    double pen = indoor ? draw_penetration_db(kind, dist_m, large_scale) : 0.0;

    for (int s = 0; s < cfg.subchannels_per_ap; ++s) {
        Rng fade_rng = Rng::keyed(cfg.seed, kTagRfFading, kind_id, ap, j, s);
        double fade = draw_fading_db(fade_rng);
        double g = rf_gain_from_terms(kind, dist_km, pen, fade, shadow);
        if (kind == RfApKind::Macro)
            cs.g_macro(j, s) = g;
        else
            cs.g_pico(ap, j, s) = g;
    }
}

void fill_vlc_user(const Topology& topo, const ScenarioConfig& cfg, int v, int j,
                   ChannelState& cs) {
    bool same_room = topo.user_is_indoor(j) &&
                     topo.user_room[j] == topo.vlc_room_of(v, cfg.vlc_aps_per_room);
    Vec3 ap_pos = topo.vlc_ap_position(v, cfg.vlc_aps_per_room);
    for (int q = 0; q < cfg.subchannels_per_ap; ++q) {
        Rng rho_rng = Rng::keyed(cfg.seed, kTagLosProb, v, j, q);
        double rho = rho_rng.uniform(cfg.los_prob_low, cfg.los_prob_high);
        cs.rho(v, j, q) = rho;
        // Light does not cross walls: only the user's own room sees a gain.
        cs.g_vlc(v, j, q) = same_room ? vlc_gain(ap_pos, topo.user_positions[j], rho, cfg) : 0.0;
    }
}

ChannelState fill_channel_state(const Topology& topo, const ScenarioConfig& cfg, bool parallel) {
    ChannelState cs;
    cs.users = static_cast<int>(topo.user_positions.size());
    cs.subchannels = cfg.subchannels_per_ap;
    const int picos = static_cast<int>(topo.pico_positions.size());
    const int vlcs = static_cast<int>(topo.rooms.size()) * cfg.vlc_aps_per_room;
    cs.g_macro = Mat(cs.users, cs.subchannels);
    cs.g_pico = Ten3(picos, cs.users, cs.subchannels);
    cs.g_vlc = Ten3(vlcs, cs.users, cs.subchannels);
    cs.rho = Ten3(vlcs, cs.users, cs.subchannels);

    const int total = (1 + picos + vlcs) * cs.users;
#pragma omp parallel for schedule(static) if (parallel)
    for (int idx = 0; idx < total; ++idx) {
        int ap_slot = idx / std::max(cs.users, 1);
        int j = idx % std::max(cs.users, 1);
        if (ap_slot == 0)
            fill_rf_user(topo, cfg, RfApKind::Macro, 0, j, cs);
        else if (ap_slot <= picos)
            fill_rf_user(topo, cfg, RfApKind::Pico, ap_slot - 1, j, cs);
        else
            fill_vlc_user(topo, cfg, ap_slot - 1 - picos, j, cs);
    }
    return cs;
}

} // namespace

ChannelState build_channel_state(const Topology& topology, const ScenarioConfig& config) {
    return fill_channel_state(topology, config, true);
}

namespace serial {
ChannelState build_channel_state(const Topology& topology, const ScenarioConfig& config) {
    return fill_channel_state(topology, config, false);
}
}

double ChannelState::mean_gain_macro(int j) const {
    double sum = 0;
    for (int s = 0; s < subchannels; ++s) sum += g_macro(j, s);
    return sum / subchannels;
}

double ChannelState::mean_gain_pico(int k, int j) const {
    double sum = 0;
    for (int s = 0; s < subchannels; ++s) sum += g_pico(k, j, s);
    return sum / subchannels;
}

double ChannelState::mean_gain_vlc(int v, int j) const {
    double sum = 0;
    for (int s = 0; s < subchannels; ++s) sum += g_vlc(v, j, s);
    return sum / subchannels;
}

double ChannelState::mean_rho(int v, int j) const {
    double sum = 0;
    for (int s = 0; s < subchannels; ++s) sum += rho(v, j, s);
    return sum / subchannels;
}

} // namespace rfvlc
