#include "rfvlc/subchannel.hpp"

#include <algorithm>

#include "rfvlc/rate.hpp"

namespace rfvlc {

namespace {

struct ApRef {
    // tier: 0 macro, 1 pico, 2 vlc; idx within the tier
    int tier;
    int idx;
};

// All deployed APs in a fixed order (macro, picos, vlc APs).
std::vector<ApRef> all_aps(const ScenarioConfig& cfg) {
    std::vector<ApRef> aps;
    aps.push_back({0, 0});
    for (int k = 0; k < cfg.pico_count; ++k) aps.push_back({1, k});
    for (int v = 0; v < cfg.vlc_ap_count(); ++v) aps.push_back({2, v});
    return aps;
}

double gain_of(const ApRef& ap, int j, int s, const ChannelState& cs) {
    switch (ap.tier) {
        case 0: return cs.g_macro(j, s);
        case 1: return cs.g_pico(ap.idx, j, s);
        default: return cs.g_vlc(ap.idx, j, s);
    }
}

bool assigned_to(const ApRef& ap, int j, const BinMat& x_rf, const BinMat& x_vlc) {
    switch (ap.tier) {
        case 0: return x_rf(0, j) != 0;
        case 1: return x_rf(1 + ap.idx, j) != 0;
        default: return x_vlc(ap.idx, j) != 0;
    }
}

void grant(SaResult& sa, const ApRef& ap, int j, int s) {
    switch (ap.tier) {
        case 0: sa.s_macro(j, s) = 1; break;
        case 1: sa.s_pico(ap.idx, j, s) = 1; break;
        default: sa.s_vlc(ap.idx, j, s) = 1; break;
    }
}

bool taken(const SaResult& sa, const ApRef& ap, int s, const ScenarioConfig& cfg) {
    for (int j = 0; j < cfg.user_count; ++j) {
        bool held = ap.tier == 0   ? sa.s_macro(j, s) != 0
                    : ap.tier == 1 ? sa.s_pico(ap.idx, j, s) != 0
                                   : sa.s_vlc(ap.idx, j, s) != 0;
        if (held) return true;
    }
    return false;
}

SaResult empty_sa(const ScenarioConfig& cfg) {
    SaResult sa;
    sa.s_macro = BinMat(cfg.user_count, cfg.subchannels_per_ap);
    sa.s_pico = BinTen3(cfg.pico_count, cfg.user_count, cfg.subchannels_per_ap);
    sa.s_vlc = BinTen3(cfg.vlc_ap_count(), cfg.user_count, cfg.subchannels_per_ap);
    sa.a.assign(cfg.user_count, 0);
    return sa;
}

void set_outage_flags(SaResult& sa, const ScenarioConfig& cfg) {
    for (int j = 0; j < cfg.user_count; ++j) {
        int grants = 0;
        for (int s = 0; s < cfg.subchannels_per_ap; ++s) grants += sa.s_macro(j, s);
        for (int k = 0; k < cfg.pico_count; ++k)
            for (int s = 0; s < cfg.subchannels_per_ap; ++s) grants += sa.s_pico(k, j, s);
        for (int v = 0; v < cfg.vlc_ap_count(); ++v)
            for (int s = 0; s < cfg.subchannels_per_ap; ++s) grants += sa.s_vlc(v, j, s);
        sa.a[j] = grants > 0 ? 1 : 0;
    }
}

// Free subchannels of one AP go to its assigned user with the highest gain.
void scg_fill(SaResult& sa, const ApRef& ap, const BinMat& x_rf, const BinMat& x_vlc,
              const ChannelState& cs, const ScenarioConfig& cfg) {
    std::vector<int> assigned;
    for (int j = 0; j < cfg.user_count; ++j)
        if (assigned_to(ap, j, x_rf, x_vlc)) assigned.push_back(j);
    if (assigned.empty()) return;
    for (int s = 0; s < cfg.subchannels_per_ap; ++s) {
        if (taken(sa, ap, s, cfg)) continue;
        int best = -1;
        double best_gain = -1;
        for (int j : assigned) {
            double g = gain_of(ap, j, s, cs);
            if (g > best_gain) {
                best_gain = g;
                best = j;
            }
        }
        if (best >= 0) grant(sa, ap, best, s);
    }
}

// Equal-power-split, interference-free rate of one (AP, subchannel, user).
double estimated_rate(const ApRef& ap, int j, int s, const ChannelState& cs,
                      const ScenarioConfig& cfg) {
    double g = gain_of(ap, j, s, cs);
    switch (ap.tier) {
        case 0: return rate_macro(cfg.p_macro_budget / cfg.subchannels_per_ap, g, cfg);
        case 1: return rate_pico(cfg.p_pico_budget / cfg.subchannels_per_ap, g, {}, cfg);
        default:
            return rate_vlc(cfg.p_vlc_budget / cfg.subchannels_per_ap, g, cs.rho(ap.idx, j, s),
                            {}, cfg);
    }
}

} // namespace

SaResult allocate_scg(const BinMat& x_rf, const BinMat& x_vlc, const ChannelState& cs,
                      const ScenarioConfig& cfg) {
    SaResult sa = empty_sa(cfg);
    for (const ApRef& ap : all_aps(cfg)) scg_fill(sa, ap, x_rf, x_vlc, cs, cfg);
    set_outage_flags(sa, cfg);
    return sa;
}

SaResult allocate_qos_first(const BinMat& x_rf, const BinMat& x_vlc, const ChannelState& cs,
                            const ScenarioConfig& cfg) {
    SaResult sa = empty_sa(cfg);
    const auto aps = all_aps(cfg);

    std::vector<double> est_rate(cfg.user_count, 0.0);
    std::vector<std::uint8_t> saturated(cfg.user_count, 0);

    while (true) {
        // Neediest unsatisfied user goes first; ties to the lower index.
        int user = -1;
        for (int j = 0; j < cfg.user_count; ++j) {
            if (saturated[j] || est_rate[j] >= cfg.r_min) continue;
            if (user < 0 || est_rate[j] < est_rate[user]) user = j;
        }
        if (user < 0) break;

        int best_ap = -1, best_s = -1;
        double best_rate = -1;
        for (std::size_t ai = 0; ai < aps.size(); ++ai) {
            if (!assigned_to(aps[ai], user, x_rf, x_vlc)) continue;
            for (int s = 0; s < cfg.subchannels_per_ap; ++s) {
                if (taken(sa, aps[ai], s, cfg)) continue;
                double r = estimated_rate(aps[ai], user, s, cs, cfg);
                if (r > best_rate) {
                    best_rate = r;
                    best_ap = static_cast<int>(ai);
                    best_s = s;
                }
            }
        }
        if (best_ap < 0) {
            saturated[user] = 1;  // nothing left to grant this user
            continue;
        }
        grant(sa, aps[best_ap], user, best_s);
        est_rate[user] += best_rate;
    }

    // Whatever remains follows the channel-quality rule.
    for (const ApRef& ap : aps) scg_fill(sa, ap, x_rf, x_vlc, cs, cfg);
    set_outage_flags(sa, cfg);
    return sa;
}

void validate_sa(const SaResult& sa, const BinMat& x_rf, const BinMat& x_vlc,
                 const ScenarioConfig& cfg) {
    Allocation al = Allocation::zeros(cfg);
    al.x_rf = x_rf;
    al.x_vlc = x_vlc;
    al.s_macro = sa.s_macro;
    al.s_pico = sa.s_pico;
    al.s_vlc = sa.s_vlc;
    al.a = sa.a;
    // Reuses the structural checker; powers are all zero so only the
    // assignment-consistency constraints C1/C4/C5 can fire.
    const int J = cfg.user_count;
    const int S = cfg.subchannels_per_ap;
    for (int j = 0; j < J; ++j)
        for (int s = 0; s < S; ++s)
            if (al.s_macro(j, s) && !al.x_rf(0, j))
                throw ConstraintError("C1", "macro grant without assignment");
    for (int k = 0; k < cfg.pico_count; ++k)
        for (int j = 0; j < J; ++j)
            for (int s = 0; s < S; ++s)
                if (al.s_pico(k, j, s) && !al.x_rf(1 + k, j))
                    throw ConstraintError("C1", "pico grant without assignment");
    for (int v = 0; v < cfg.vlc_ap_count(); ++v)
        for (int j = 0; j < J; ++j)
            for (int s = 0; s < S; ++s)
                if (al.s_vlc(v, j, s) && !al.x_vlc(v, j))
                    throw ConstraintError("C1", "vlc grant without assignment");
    for (int s = 0; s < S; ++s) {
        int n = 0;
        for (int j = 0; j < J; ++j) n += al.s_macro(j, s);
        if (n > 1) throw ConstraintError("C4", "macro subchannel " + std::to_string(s) + " shared");
    }
    for (int k = 0; k < cfg.pico_count; ++k)
        for (int s = 0; s < S; ++s) {
            int n = 0;
            for (int j = 0; j < J; ++j) n += al.s_pico(k, j, s);
            if (n > 1) throw ConstraintError("C4", "pico subchannel shared");
        }
    for (int v = 0; v < cfg.vlc_ap_count(); ++v)
        for (int s = 0; s < S; ++s) {
            int n = 0;
            for (int j = 0; j < J; ++j) n += al.s_vlc(v, j, s);
            if (n > 1) throw ConstraintError("C4", "vlc subchannel shared");
        }
    for (int j = 0; j < J; ++j) {
        int grants = al.subchannel_count(j);
        if (sa.a[j] == 0 && grants > 0) throw ConstraintError("C5", "outage user holds grants");
        if (sa.a[j] == 1 && grants == 0) throw ConstraintError("C5", "active user without grants");
    }
}

} // namespace rfvlc
