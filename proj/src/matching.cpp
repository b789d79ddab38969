#include "rfvlc/matching.hpp"

#include <algorithm>
#include <limits>

#include "rfvlc/rate.hpp"

namespace rfvlc {

namespace {

constexpr double kQuotaSlack = 1e-9;

// Descending value, ties to the lower index.
std::vector<int> sorted_desc(const std::vector<std::pair<double, int>>& vals) {
    std::vector<std::pair<double, int>> v = vals;
    std::stable_sort(v.begin(), v.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first > b.first;
        return a.second < b.second;
    });
    std::vector<int> order;
    order.reserve(v.size());
    for (const auto& [val, idx] : v)
        if (val > 0) order.push_back(idx);
    return order;
}

} // namespace

PowerProfile PowerProfile::defaults(const ScenarioConfig& cfg) {
    PowerProfile pp;
    const int J = cfg.user_count;
    const double s = cfg.subchannels_per_ap;
    pp.pbar_rf = Mat(cfg.rf_ap_count(), J);
    pp.pbar_vlc = Mat(cfg.vlc_ap_count(), J);
    for (int j = 0; j < J; ++j) {
        pp.pbar_rf(0, j) = cfg.p_macro_budget / s;
        for (int k = 0; k < cfg.pico_count; ++k) pp.pbar_rf(1 + k, j) = cfg.p_pico_budget / s;
        for (int v = 0; v < cfg.vlc_ap_count(); ++v) pp.pbar_vlc(v, j) = cfg.p_vlc_budget / s;
    }
    return pp;
}

PreferenceTables build_preferences(const ChannelState& cs, const ScenarioConfig& cfg,
                                   const PowerProfile& profile) {
    const int J = cs.users;
    const int R = cfg.rf_ap_count();
    const int V = cfg.vlc_ap_count();
    PreferenceTables pt;
    pt.ee_rf = Mat(R, J);
    pt.ee_vlc = Mat(V, J);

    std::vector<Interferer> inter;
    for (int j = 0; j < J; ++j) {
        // Macro branch: dedicated band, no interference.
        double r0 = rate_macro(profile.pbar_rf(0, j), cs.mean_gain_macro(j), cfg);
        pt.ee_rf(0, j) = r0 / (cfg.circuit_macro + cfg.p_macro_budget);
        // Pico branch: every other pico transmits at its provisional power.
        for (int k = 0; k < cfg.pico_count; ++k) {
            inter.clear();
            for (int k2 = 0; k2 < cfg.pico_count; ++k2)
                if (k2 != k)
                    inter.push_back({profile.pbar_rf(1 + k2, j), cs.mean_gain_pico(k2, j)});
            double r = rate_pico(profile.pbar_rf(1 + k, j), cs.mean_gain_pico(k, j), inter, cfg);
            pt.ee_rf(1 + k, j) = r / (cfg.circuit_pico + cfg.p_pico_budget);
        }
        for (int v = 0; v < V; ++v) {
            inter.clear();
            for (int v2 = 0; v2 < V; ++v2)
                if (v2 != v) inter.push_back({profile.pbar_vlc(v2, j), cs.mean_gain_vlc(v2, j)});
            double r = rate_vlc(profile.pbar_vlc(v, j), cs.mean_gain_vlc(v, j), cs.mean_rho(v, j),
                                inter, cfg);
            pt.ee_vlc(v, j) = r / (cfg.circuit_vlc + cfg.p_vlc_budget);
        }
    }

    pt.rf_ap_pref.resize(R);
    for (int k = 0; k < R; ++k) {
        std::vector<std::pair<double, int>> vals;
        for (int j = 0; j < J; ++j) vals.push_back({pt.ee_rf(k, j), j});
        pt.rf_ap_pref[k] = sorted_desc(vals);
    }
    pt.vlc_ap_pref.resize(V);
    for (int v = 0; v < V; ++v) {
        std::vector<std::pair<double, int>> vals;
        for (int j = 0; j < J; ++j) vals.push_back({pt.ee_vlc(v, j), j});
        pt.vlc_ap_pref[v] = sorted_desc(vals);
    }
    pt.user_rf_pref.resize(J);
    pt.user_vlc_pref.resize(J);
    for (int j = 0; j < J; ++j) {
        std::vector<std::pair<double, int>> rf_vals, vlc_vals;
        for (int k = 0; k < R; ++k) rf_vals.push_back({pt.ee_rf(k, j), k});
        for (int v = 0; v < V; ++v) vlc_vals.push_back({pt.ee_vlc(v, j), v});
        pt.user_rf_pref[j] = sorted_desc(rf_vals);
        pt.user_vlc_pref[j] = sorted_desc(vlc_vals);
    }
    return pt;
}

MatchingGame make_rf_game(const PreferenceTables& prefs, const ScenarioConfig& cfg,
                          const PowerProfile& profile) {
    MatchingGame g;
    g.metric = prefs.ee_rf;
    g.cost = profile.pbar_rf;
    g.quota.assign(cfg.rf_ap_count(), cfg.p_pico_budget);
    g.quota[0] = cfg.p_macro_budget;
    g.ap_pref = prefs.rf_ap_pref;
    g.user_pref = prefs.user_rf_pref;
    return g;
}

MatchingGame make_vlc_game(const PreferenceTables& prefs, const ScenarioConfig& cfg,
                           const PowerProfile& profile) {
    MatchingGame g;
    g.metric = prefs.ee_vlc;
    g.cost = profile.pbar_vlc;
    g.quota.assign(cfg.vlc_ap_count(), cfg.p_vlc_budget);
    g.ap_pref = prefs.vlc_ap_pref;
    g.user_pref = prefs.user_vlc_pref;
    return g;
}

MatchingGame make_hybrid_game(const PreferenceTables& prefs, const ScenarioConfig& cfg,
                              const PowerProfile& profile) {
    const int R = cfg.rf_ap_count();
    const int V = cfg.vlc_ap_count();
    const int J = cfg.user_count;
    MatchingGame g;
    g.metric = Mat(R + V, J);
    g.cost = Mat(R + V, J);
    for (int j = 0; j < J; ++j) {
        for (int k = 0; k < R; ++k) {
            g.metric(k, j) = prefs.ee_rf(k, j);
            g.cost(k, j) = profile.pbar_rf(k, j);
        }
        for (int v = 0; v < V; ++v) {
            g.metric(R + v, j) = prefs.ee_vlc(v, j);
            g.cost(R + v, j) = profile.pbar_vlc(v, j);
        }
    }
    g.quota.assign(R + V, cfg.p_pico_budget);
    g.quota[0] = cfg.p_macro_budget;
    for (int v = 0; v < V; ++v) g.quota[R + v] = cfg.p_vlc_budget;
    g.ap_pref = prefs.rf_ap_pref;
    g.ap_pref.insert(g.ap_pref.end(), prefs.vlc_ap_pref.begin(), prefs.vlc_ap_pref.end());
    g.user_pref.resize(J);
    for (int j = 0; j < J; ++j) {
        std::vector<std::pair<double, int>> vals;
        for (int a = 0; a < R + V; ++a) vals.push_back({g.metric(a, j), a});
        g.user_pref[j] = sorted_desc(vals);
    }
    return g;
}

GameResult deferred_acceptance(const MatchingGame& game) {
    const int A = game.aps();
    const int J = game.users();
    GameResult res;
    res.user_match.assign(J, -1);
    res.waitlists.resize(A);
    res.quota_used.assign(A, 0.0);

    // rank[ap][u]: position of u in ap's list; unranked users never apply.
    Grid2<int> rank(A, J, std::numeric_limits<int>::max());
    for (int a = 0; a < A; ++a)
        for (std::size_t i = 0; i < game.ap_pref[a].size(); ++i)
            rank(a, game.ap_pref[a][i]) = static_cast<int>(i);

    std::vector<int> next_choice(J, 0);
    std::vector<std::vector<int>> applicants(A);
    while (true) {
        bool any = false;
        for (auto& ap : applicants) ap.clear();
        for (int j = 0; j < J; ++j) {
            if (res.user_match[j] >= 0) continue;
            if (next_choice[j] >= static_cast<int>(game.user_pref[j].size())) continue;
            int ap = game.user_pref[j][next_choice[j]++];
            applicants[ap].push_back(j);
            ++res.proposals;
            any = true;
        }
        if (!any) break;
        ++res.rounds;

        for (int a = 0; a < A; ++a) {
            if (applicants[a].empty()) continue;
            std::vector<int> pool = res.waitlists[a];
            pool.insert(pool.end(), applicants[a].begin(), applicants[a].end());
            std::sort(pool.begin(), pool.end(),
                      [&](int u1, int u2) { return rank(a, u1) < rank(a, u2); });

            std::vector<int> admitted;
            double used = 0;
            for (int u : pool) {
                double c = game.cost(a, u);
                if (used + c <= game.quota[a] * (1.0 + kQuotaSlack)) {
                    admitted.push_back(u);
                    used += c;
                } else if (res.user_match[u] == a) {
                    res.user_match[u] = -1;  // evicted incumbent resumes proposing
                }
            }
            for (int u : admitted) res.user_match[u] = a;
            res.waitlists[a] = std::move(admitted);
            res.quota_used[a] = used;
        }
    }
    return res;
}

MatchingState run_matching(const PreferenceTables& prefs, const ScenarioConfig& cfg,
                           const PowerProfile& profile) {
    MatchingState st;
    st.rf = deferred_acceptance(make_rf_game(prefs, cfg, profile));
    st.vlc = deferred_acceptance(make_vlc_game(prefs, cfg, profile));
    return st;
}

std::pair<BinMat, BinMat> extract_assignment(const MatchingState& state,
                                             const ScenarioConfig& cfg) {
    const int J = cfg.user_count;
    BinMat x_rf(cfg.rf_ap_count(), J);
    BinMat x_vlc(cfg.vlc_ap_count(), J);
    for (int j = 0; j < J; ++j) {
        int k = state.rf.user_match[j];
        x_rf(k >= 0 ? k : 0, j) = 1;  // macro fallback keeps C6 intact
        int v = state.vlc.user_match[j];
        if (v >= 0) x_vlc(v, j) = 1;
    }
    return {std::move(x_rf), std::move(x_vlc)};
}

StabilityReport certify_stability(const GameResult& result, const MatchingGame& game) {
    const int J = game.users();
    for (int j = 0; j < J; ++j) {
        int current = result.user_match[j];
        double current_metric = current >= 0 ? game.metric(current, j) : 0.0;
        for (int a : game.user_pref[j]) {
            if (a == current) continue;
            bool user_prefers = current < 0 || game.metric(a, j) > current_metric;
            if (!user_prefers) continue;

            double slack = game.quota[a] - result.quota_used[a];
            double need = game.cost(a, j);
            bool ap_can_take = slack + need * kQuotaSlack >= need;
            if (!ap_can_take) {
                for (int incumbent : result.waitlists[a]) {
                    if (game.metric(a, j) > game.metric(a, incumbent) &&
                        slack + game.cost(a, incumbent) + need * kQuotaSlack >= need) {
                        ap_can_take = true;
                        break;
                    }
                }
            }
            if (ap_can_take) return {false, BlockingPair{j, a}};
        }
    }
    return {true, std::nullopt};
}

} // namespace rfvlc
