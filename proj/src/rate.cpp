#include "rfvlc/rate.hpp"

#include <cmath>

#include "rfvlc/units.hpp"

namespace rfvlc {

namespace {

double log2_1p(double x) { return std::log2(1.0 + x); }

} // namespace

double rate_macro(double p, double gain, const ScenarioConfig& cfg) {
    double g2 = gain * gain;
    return cfg.bandwidth_rf * log2_1p(p * g2 / cfg.rf_noise_power());
}

double rate_pico(double p, double gain, std::span<const Interferer> interferers,
                 const ScenarioConfig& cfg) {
    double g2 = gain * gain;
    double denom = cfg.rf_noise_power();
    for (const auto& it : interferers) denom += it.power * it.gain * it.gain;
    return cfg.bandwidth_rf * log2_1p(p * g2 / denom);
}

double rate_vlc(double p, double gain, double rho, std::span<const Interferer> interferers,
                const ScenarioConfig& cfg) {
    double rg = cfg.pd_responsivity * gain;
    double denom = cfg.vlc_noise_power();
    for (const auto& it : interferers) {
        double rgi = cfg.pd_responsivity * it.gain;
        denom += it.power * rgi * rgi;
    }
    return rho * cfg.bandwidth_vlc * log2_1p(kVlcSnrPrefactor * p * rg * rg / denom);
}

namespace {

// Per-(AP, subchannel) occupancy: the single user granted it, or -1.
struct Occupancy {
    Grid2<int> pico;  // [pico][m]
    Grid2<int> vlc;   // [vlc][q]
};

Occupancy build_occupancy(const Allocation& al, const ScenarioConfig& cfg) {
    const int J = cfg.user_count;
    const int S = cfg.subchannels_per_ap;
    Occupancy occ;
    occ.pico = Grid2<int>(cfg.pico_count, S, -1);
    occ.vlc = Grid2<int>(cfg.vlc_ap_count(), S, -1);
    for (int k = 0; k < cfg.pico_count; ++k)
        for (int j = 0; j < J; ++j)
            for (int s = 0; s < S; ++s)
                if (al.s_pico(k, j, s)) occ.pico(k, s) = j;
    for (int v = 0; v < cfg.vlc_ap_count(); ++v)
        for (int j = 0; j < J; ++j)
            for (int s = 0; s < S; ++s)
                if (al.s_vlc(v, j, s)) occ.vlc(v, s) = j;
    return occ;
}

double user_rate(int j, const Allocation& al, const Occupancy& occ, const ChannelState& cs,
                 const ScenarioConfig& cfg) {
    const int S = cfg.subchannels_per_ap;
    double rate = 0;
    for (int s = 0; s < S; ++s)
        if (al.s_macro(j, s)) rate += rate_macro(al.p_macro(j, s), cs.g_macro(j, s), cfg);

    std::vector<Interferer> inter;
    for (int k = 0; k < cfg.pico_count; ++k) {
        for (int s = 0; s < S; ++s) {
            if (!al.s_pico(k, j, s)) continue;
            inter.clear();
            for (int k2 = 0; k2 < cfg.pico_count; ++k2) {
                if (k2 == k) continue;
                int j2 = occ.pico(k2, s);
                if (j2 >= 0)
                    inter.push_back({al.p_pico(k2, j2, s), cs.g_pico(k2, j, s)});
            }
            rate += rate_pico(al.p_pico(k, j, s), cs.g_pico(k, j, s), inter, cfg);
        }
    }
    for (int v = 0; v < cfg.vlc_ap_count(); ++v) {
        for (int s = 0; s < S; ++s) {
            if (!al.s_vlc(v, j, s)) continue;
            inter.clear();
            for (int v2 = 0; v2 < cfg.vlc_ap_count(); ++v2) {
                if (v2 == v) continue;
                int j2 = occ.vlc(v2, s);
                if (j2 >= 0)
                    inter.push_back({al.p_vlc(v2, j2, s), cs.g_vlc(v2, j, s)});
            }
            rate += rate_vlc(al.p_vlc(v, j, s), cs.g_vlc(v, j, s), cs.rho(v, j, s), inter, cfg);
        }
    }
    return rate;
}

EvaluatedAllocation evaluate_impl(const Allocation& al, const ChannelState& cs,
                                  const ScenarioConfig& cfg, AssignmentMode mode, bool parallel) {
    validate_structure(al, cfg, mode);
    const int J = cfg.user_count;
    Occupancy occ = build_occupancy(al, cfg);

    EvaluatedAllocation ev;
    ev.per_user_rate.assign(J, 0.0);
#pragma omp parallel for schedule(static) if (parallel)
    for (int j = 0; j < J; ++j) ev.per_user_rate[j] = user_rate(j, al, occ, cs, cfg);

    // Ordered reductions keep results identical across thread counts.
    for (int j = 0; j < J; ++j) ev.sum_rate += ev.per_user_rate[j];
    double tx = 0;
    for (int j = 0; j < J; ++j) tx += al.user_power(j);
    ev.total_power = cfg.total_circuit_power() + tx;
    ev.ee = ev.sum_rate / ev.total_power;  // circuit floor keeps this finite
    return ev;
}

} // namespace

EvaluatedAllocation evaluate(const Allocation& alloc, const ChannelState& channel,
                             const ScenarioConfig& config, AssignmentMode mode) {
    return evaluate_impl(alloc, channel, config, mode, true);
}

namespace serial {
EvaluatedAllocation evaluate(const Allocation& alloc, const ChannelState& channel,
                             const ScenarioConfig& config, AssignmentMode mode) {
    return evaluate_impl(alloc, channel, config, mode, false);
}
}

std::vector<std::uint8_t> check_qos(const EvaluatedAllocation& evaluated, const Allocation& alloc,
                                    const ScenarioConfig& config) {
    std::vector<std::uint8_t> ok(alloc.a.size(), 1);
    for (std::size_t j = 0; j < alloc.a.size(); ++j)
        ok[j] = evaluated.per_user_rate[j] >= config.r_min * alloc.a[j] ? 1 : 0;
    return ok;
}

} // namespace rfvlc
