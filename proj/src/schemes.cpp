#include "rfvlc/schemes.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <omp.h>

#include "rfvlc/units.hpp"

namespace rfvlc {

std::string to_string(SchemeId id) {
    switch (id) {
        case SchemeId::ProposedIterative: return "proposed-iterative";
        case SchemeId::ProposedOneshot: return "proposed-oneshot";
        case SchemeId::ScgScgEpa: return "scg-scg-epa";
        case SchemeId::BaselineApprox: return "baseline-approx";
        case SchemeId::HybridIterative: return "hybrid-iterative";
        case SchemeId::ExhaustiveOracle: return "exhaustive-oracle";
    }
    return "unknown";
}

SchemeId scheme_from_string(const std::string& name) {
    if (name == "proposed-iterative") return SchemeId::ProposedIterative;
    if (name == "proposed-oneshot") return SchemeId::ProposedOneshot;
    if (name == "scg-scg-epa") return SchemeId::ScgScgEpa;
    if (name == "baseline-approx") return SchemeId::BaselineApprox;
    if (name == "hybrid-iterative") return SchemeId::HybridIterative;
    if (name == "exhaustive-oracle") return SchemeId::ExhaustiveOracle;
    throw std::invalid_argument("unknown scheme: " + name);
}

AssignmentMode scheme_mode(SchemeId id) {
    return id == SchemeId::HybridIterative ? AssignmentMode::Hybrid : AssignmentMode::Aggregated;
}

namespace {

int count_outage(const std::vector<std::uint8_t>& a) {
    int n = 0;
    for (auto f : a) n += f == 0;
    return n;
}

struct PassOutput {
    PreferenceTables prefs;
    MatchingState matching;
    BinMat x_rf, x_vlc;
    SaResult sa;
    LinkSystem sys;
    ParetoResult pareto;
    Allocation alloc;
    EvaluatedAllocation ev;
};

// A user whose granted channels cannot reach r_min even at full per-link
// budget and no interference cannot be served at its QoS; it goes to outage
// and its grants are released (idle, pending admission control).
SaResult drop_unservable_users(SaResult sa, const ChannelState& cs, const ScenarioConfig& cfg) {
    if (cfg.r_min <= 0) return sa;
    LinkSystem sys = build_link_system(sa, cs, cfg);
    QosPlan plan = plan_qos(sys, cfg);
    for (int j : plan.dropped) {
        for (int s = 0; s < cfg.subchannels_per_ap; ++s) sa.s_macro(j, s) = 0;
        for (int k = 0; k < cfg.pico_count; ++k)
            for (int s = 0; s < cfg.subchannels_per_ap; ++s) sa.s_pico(k, j, s) = 0;
        for (int v = 0; v < cfg.vlc_ap_count(); ++v)
            for (int s = 0; s < cfg.subchannels_per_ap; ++s) sa.s_vlc(v, j, s) = 0;
        sa.a[j] = 0;
    }
    return sa;
}

Allocation assemble(const BinMat& x_rf, const BinMat& x_vlc, const SaResult& sa,
                    const ScenarioConfig& cfg) {
    Allocation al = Allocation::zeros(cfg);
    al.x_rf = x_rf;
    al.x_vlc = x_vlc;
    al.s_macro = sa.s_macro;
    al.s_pico = sa.s_pico;
    al.s_vlc = sa.s_vlc;
    al.a = sa.a;
    return al;
}

PassOutput pipeline_pass(const ScenarioConfig& cfg, const ChannelState& cs,
                         const PowerProfile& profile, bool hybrid, bool qos_first_sa) {
    PassOutput out;
    out.prefs = build_preferences(cs, cfg, profile);
    if (!hybrid) {
        out.matching = run_matching(out.prefs, cfg, profile);
        auto [x_rf, x_vlc] = extract_assignment(out.matching, cfg);
        out.x_rf = std::move(x_rf);
        out.x_vlc = std::move(x_vlc);
    } else {
        MatchingGame game = make_hybrid_game(out.prefs, cfg, profile);
        out.matching.rf = deferred_acceptance(game);
        const int R = cfg.rf_ap_count();
        out.x_rf = BinMat(R, cfg.user_count);
        out.x_vlc = BinMat(cfg.vlc_ap_count(), cfg.user_count);
        for (int j = 0; j < cfg.user_count; ++j) {
            int a = out.matching.rf.user_match[j];
            if (a < 0)
                out.x_rf(0, j) = 1;  // macro fallback
            else if (a < R)
                out.x_rf(a, j) = 1;
            else
                out.x_vlc(a - R, j) = 1;
        }
    }
    out.sa = qos_first_sa ? allocate_qos_first(out.x_rf, out.x_vlc, cs, cfg)
                          : allocate_scg(out.x_rf, out.x_vlc, cs, cfg);
    out.sa = drop_unservable_users(std::move(out.sa), cs, cfg);
    out.sys = build_link_system(out.sa, cs, cfg);
    out.pareto = sweep_pareto(out.sys, cfg);
    out.alloc = assemble(out.x_rf, out.x_vlc, out.sa, cfg);
    if (out.pareto.best_index >= 0)
        apply_powers(out.sys, out.pareto.entries[out.pareto.best_index].p, out.alloc);
    out.ev = evaluate(out.alloc, cs, cfg,
                      hybrid ? AssignmentMode::Hybrid : AssignmentMode::Aggregated);
    return out;
}

// Next-pass provisional powers: each user's mean optimized per-subchannel
// power at the APs that actually served it, defaults elsewhere.
PowerProfile feedback_profile(const LinkSystem& sys, std::span<const double> p,
                              const ScenarioConfig& cfg) {
    PowerProfile pp = PowerProfile::defaults(cfg);
    const int P = cfg.pico_count;
    Mat sums(sys.group_budget.size(), cfg.user_count);
    Grid2<int> counts(sys.group_budget.size(), cfg.user_count);
    for (std::size_t l = 0; l < sys.size(); ++l) {
        const Link& lk = sys.links[l];
        sums(lk.group, lk.user) += p[l];
        counts(lk.group, lk.user) += 1;
    }
    for (std::size_t g = 0; g < sys.group_budget.size(); ++g)
        for (int j = 0; j < cfg.user_count; ++j) {
            if (counts(g, j) == 0) continue;
            double avg = sums(g, j) / counts(g, j);
            if (g < static_cast<std::size_t>(1 + P))
                pp.pbar_rf(g, j) = avg;
            else
                pp.pbar_vlc(g - 1 - P, j) = avg;
        }
    return pp;
}

void fill_result(RunResult& res, PassOutput&& out) {
    res.allocation = std::move(out.alloc);
    res.evaluated = std::move(out.ev);
    res.outage_count = count_outage(res.allocation.a);
    res.prefs = std::move(out.prefs);
    res.matching = std::move(out.matching);
    res.pareto = std::move(out.pareto);
}

RunResult run_iterative_pipeline(SchemeId scheme, const ScenarioConfig& cfg,
                                 const ChannelState& cs, bool hybrid) {
    double t0 = omp_get_wtime();
    RunResult res;
    res.scheme = scheme;
    res.seed = cfg.seed;

    PowerProfile profile = PowerProfile::defaults(cfg);
    PassOutput best;
    double best_ee = -1.0;
    double prev_ee = -std::numeric_limits<double>::infinity();
    int iterations = 0;

    for (int it = 1; it <= cfg.max_outer_iterations; ++it) {
        PassOutput out = pipeline_pass(cfg, cs, profile, hybrid, false);
        iterations = it;
        double ee = out.ev.ee;
        bool improved = ee > best_ee;
        if (improved) {
            best = std::move(out);
            best_ee = ee;
        }
        res.ee_trace.push_back(best_ee);
        if (!improved) break;  // keep the incumbent
        if (it > 1 && ee - prev_ee <= 1e-3 * std::max(std::abs(prev_ee), 1e-12)) break;
        prev_ee = ee;
        if (it < cfg.max_outer_iterations && best.pareto.best_index >= 0)
            profile = feedback_profile(best.sys,
                                       best.pareto.entries[best.pareto.best_index].p, cfg);
    }

    res.iterations_used = iterations;
    fill_result(res, std::move(best));
    res.wall_time = omp_get_wtime() - t0;
    return res;
}

// Strongest mean channel gain picks the AP; used by both benchmark schemes.
std::pair<BinMat, BinMat> scg_assignment(const ScenarioConfig& cfg, const ChannelState& cs) {
    BinMat x_rf(cfg.rf_ap_count(), cfg.user_count);
    BinMat x_vlc(cfg.vlc_ap_count(), cfg.user_count);
    for (int j = 0; j < cfg.user_count; ++j) {
        int best_k = 0;
        double best_g = cs.mean_gain_macro(j);
        for (int k = 0; k < cfg.pico_count; ++k)
            if (cs.mean_gain_pico(k, j) > best_g) {
                best_g = cs.mean_gain_pico(k, j);
                best_k = 1 + k;
            }
        x_rf(best_k, j) = 1;
        int best_v = -1;
        double best_vg = 0;
        for (int v = 0; v < cfg.vlc_ap_count(); ++v)
            if (cs.mean_gain_vlc(v, j) > best_vg) {
                best_vg = cs.mean_gain_vlc(v, j);
                best_v = v;
            }
        if (best_v >= 0) x_vlc(best_v, j) = 1;
    }
    return {std::move(x_rf), std::move(x_vlc)};
}

} // namespace

RunResult run_oneshot(const ScenarioConfig& cfg, const ChannelState& cs) {
    double t0 = omp_get_wtime();
    RunResult res;
    res.scheme = SchemeId::ProposedOneshot;
    res.seed = cfg.seed;
    PassOutput out = pipeline_pass(cfg, cs, PowerProfile::defaults(cfg), false, false);
    res.ee_trace.push_back(out.ev.ee);
    res.iterations_used = 1;
    fill_result(res, std::move(out));
    res.wall_time = omp_get_wtime() - t0;
    return res;
}

RunResult run_alternating(const ScenarioConfig& cfg, const ChannelState& cs) {
    return run_iterative_pipeline(SchemeId::ProposedIterative, cfg, cs, false);
}

RunResult run_hybrid(const ScenarioConfig& cfg, const ChannelState& cs) {
    return run_iterative_pipeline(SchemeId::HybridIterative, cfg, cs, true);
}

RunResult run_scg_scg_epa(const ScenarioConfig& cfg, const ChannelState& cs) {
    double t0 = omp_get_wtime();
    RunResult res;
    res.scheme = SchemeId::ScgScgEpa;
    res.seed = cfg.seed;
    auto [x_rf, x_vlc] = scg_assignment(cfg, cs);
    SaResult sa = allocate_scg(x_rf, x_vlc, cs, cfg);
    Allocation al = assemble(x_rf, x_vlc, sa, cfg);
    const double s = cfg.subchannels_per_ap;
    for (int j = 0; j < cfg.user_count; ++j)
        for (int n = 0; n < cfg.subchannels_per_ap; ++n)
            if (al.s_macro(j, n)) al.p_macro(j, n) = cfg.p_macro_budget / s;
    for (int k = 0; k < cfg.pico_count; ++k)
        for (int j = 0; j < cfg.user_count; ++j)
            for (int m = 0; m < cfg.subchannels_per_ap; ++m)
                if (al.s_pico(k, j, m)) al.p_pico(k, j, m) = cfg.p_pico_budget / s;
    for (int v = 0; v < cfg.vlc_ap_count(); ++v)
        for (int j = 0; j < cfg.user_count; ++j)
            for (int q = 0; q < cfg.subchannels_per_ap; ++q)
                if (al.s_vlc(v, j, q)) al.p_vlc(v, j, q) = cfg.p_vlc_budget / s;
    res.evaluated = evaluate(al, cs, cfg);
    res.allocation = std::move(al);
    res.outage_count = count_outage(res.allocation.a);
    res.ee_trace.push_back(res.evaluated.ee);
    res.wall_time = omp_get_wtime() - t0;
    return res;
}

RunResult run_baseline_approx(const ScenarioConfig& cfg, const ChannelState& cs) {
    double t0 = omp_get_wtime();
    RunResult res;
    res.scheme = SchemeId::BaselineApprox;
    res.seed = cfg.seed;
    auto [x_rf, x_vlc] = scg_assignment(cfg, cs);
    SaResult sa = drop_unservable_users(allocate_qos_first(x_rf, x_vlc, cs, cfg), cs, cfg);
    LinkSystem sys = build_link_system(sa, cs, cfg);
    ParetoResult pareto = sweep_pareto(sys, cfg);
    Allocation al = assemble(x_rf, x_vlc, sa, cfg);
    if (pareto.best_index >= 0) apply_powers(sys, pareto.entries[pareto.best_index].p, al);
    res.evaluated = evaluate(al, cs, cfg);
    res.allocation = std::move(al);
    res.outage_count = count_outage(res.allocation.a);
    res.ee_trace.push_back(res.evaluated.ee);
    res.pareto = std::move(pareto);
    res.wall_time = omp_get_wtime() - t0;
    return res;
}

// ---------------------------------------------------------------------------
// exhaustive oracle
// ---------------------------------------------------------------------------

namespace {

struct OracleSlot {
    int tier;  // 0 macro, 1 pico, 2 vlc
    int ap;    // tier-local
    int subch;
    int ap_flat;  // 0..K+V-1
};

} // namespace

RunResult run_exhaustive(const ScenarioConfig& cfg, const ChannelState& cs, int power_levels) {
    const int J = cfg.user_count;
    const int S = cfg.subchannels_per_ap;
    const int K = cfg.rf_ap_count();
    const int V = cfg.vlc_ap_count();
    if (J > 4) throw OracleRefusal("exhaustive oracle limited to 4 users");
    if (K + V > 3) throw OracleRefusal("exhaustive oracle limited to 3 APs");
    if (S > 3) throw OracleRefusal("exhaustive oracle limited to 3 subchannels per AP");
    if (power_levels < 2) throw OracleRefusal("exhaustive oracle needs at least 2 power levels");
    {
        // conservative combination count; refuse what cannot finish
        double est = 1;
        for (int j = 0; j < J; ++j) est *= K * (V + 1);
        for (int i = 0; i < (K + V) * S; ++i) est *= (J + 1) * power_levels;
        if (est > 5e8)
            throw OracleRefusal("exhaustive oracle instance too large (" + std::to_string(est) +
                                " combinations)");
    }

    double t0 = omp_get_wtime();

    std::vector<OracleSlot> slots;
    for (int s = 0; s < S; ++s) slots.push_back({0, 0, s, 0});
    for (int k = 0; k < cfg.pico_count; ++k)
        for (int s = 0; s < S; ++s) slots.push_back({1, k, s, 1 + k});
    for (int v = 0; v < V; ++v)
        for (int s = 0; s < S; ++s) slots.push_back({2, v, s, 1 + cfg.pico_count + v});
    const int n_slots = static_cast<int>(slots.size());

    std::vector<double> ap_budget(K + V, cfg.p_pico_budget);
    ap_budget[0] = cfg.p_macro_budget;
    for (int v = 0; v < V; ++v) ap_budget[K + v] = cfg.p_vlc_budget;

    // direct[slot][user]: squared effective gain; cross terms share it.
    Mat direct(n_slots, std::max(J, 1));
    for (int i = 0; i < n_slots; ++i)
        for (int j = 0; j < J; ++j) {
            const auto& sl = slots[i];
            double g = sl.tier == 0   ? cs.g_macro(j, sl.subch)
                       : sl.tier == 1 ? cs.g_pico(sl.ap, j, sl.subch)
                                      : cfg.pd_responsivity * cs.g_vlc(sl.ap, j, sl.subch);
            direct(i, j) = g * g;
        }
    // co-channel interferer slots (same tier, same subchannel, other AP)
    std::vector<std::vector<int>> co(n_slots);
    for (int i = 0; i < n_slots; ++i)
        for (int i2 = 0; i2 < n_slots; ++i2)
            if (i2 != i && slots[i].tier == slots[i2].tier && slots[i].tier != 0 &&
                slots[i].subch == slots[i2].subch && slots[i].ap != slots[i2].ap)
                co[i].push_back(i2);

    const int user_options = K * (V + 1);
    long x_combos = 1;
    for (int j = 0; j < J; ++j) x_combos *= user_options;

    double best_ee = -1.0;
    std::vector<int> best_rf, best_vlc, best_occ;
    std::vector<double> best_pw;

    std::vector<int> rf_of(J), vlc_of(J), occupant(n_slots, -1), level(n_slots, 0);
    std::vector<double> pw(n_slots, 0.0), user_rate(J, 0.0);

    for (long xc = 0; xc < std::max(x_combos, 1L); ++xc) {
        long rem = xc;
        for (int j = 0; j < J; ++j) {
            int opt = static_cast<int>(rem % user_options);
            rem /= user_options;
            rf_of[j] = opt % K;
            vlc_of[j] = opt / K - 1;  // -1 means no VLC AP
        }

        // candidate users per slot under C1
        std::vector<std::vector<int>> cands(n_slots);
        for (int i = 0; i < n_slots; ++i) {
            cands[i].push_back(-1);
            for (int j = 0; j < J; ++j) {
                bool ok = slots[i].tier == 0   ? rf_of[j] == 0
                          : slots[i].tier == 1 ? rf_of[j] == 1 + slots[i].ap
                                               : vlc_of[j] == slots[i].ap;
                if (ok) cands[i].push_back(j);
            }
        }

        // odometer over slot occupants
        std::vector<int> si(n_slots, 0);
        while (true) {
            int granted = 0;
            for (int i = 0; i < n_slots; ++i) {
                occupant[i] = cands[i][si[i]];
                granted += occupant[i] >= 0;
            }

            // odometer over power levels of the granted slots
            std::vector<int> gslots;
            for (int i = 0; i < n_slots; ++i)
                if (occupant[i] >= 0) gslots.push_back(i);
            std::fill(level.begin(), level.end(), 0);
            while (true) {
                double total_p = 0;
                bool budget_ok = true;
                std::vector<double> ap_p(K + V, 0.0);
                for (int i : gslots) {
                    pw[i] = ap_budget[slots[i].ap_flat] * level[i] / (power_levels - 1);
                    ap_p[slots[i].ap_flat] += pw[i];
                    total_p += pw[i];
                }
                for (int a = 0; a < K + V; ++a)
                    if (ap_p[a] > ap_budget[a] * (1 + 1e-12)) budget_ok = false;

                if (budget_ok) {
                    std::fill(user_rate.begin(), user_rate.end(), 0.0);
                    double sum_rate = 0;
                    for (int i : gslots) {
                        int j = occupant[i];
                        double denom = slots[i].tier == 0 || slots[i].tier == 1
                                           ? cfg.rf_noise_power()
                                           : cfg.vlc_noise_power();
                        for (int i2 : co[i])
                            if (occupant[i2] >= 0) denom += pw[i2] * direct(i2, j);
                        double ratio = pw[i] * direct(i, j) / denom;
                        double r = 0;
                        if (slots[i].tier == 2)
                            r = cs.rho(slots[i].ap, j, slots[i].subch) * cfg.bandwidth_vlc *
                                std::log2(1.0 + kVlcSnrPrefactor * ratio);
                        else
                            r = cfg.bandwidth_rf * std::log2(1.0 + ratio);
                        user_rate[j] += r;
                        sum_rate += r;
                    }
                    bool qos_ok = true;
                    for (int j = 0; j < J && qos_ok; ++j) {
                        bool has_grant = false;
                        for (int i : gslots)
                            if (occupant[i] == j) has_grant = true;
                        if (has_grant && user_rate[j] < cfg.r_min) qos_ok = false;
                    }
                    if (qos_ok) {
                        double ee = sum_rate / (cfg.total_circuit_power() + total_p);
                        if (ee > best_ee) {
                            best_ee = ee;
                            best_rf = rf_of;
                            best_vlc = vlc_of;
                            best_occ.assign(occupant.begin(), occupant.end());
                            best_pw.assign(n_slots, 0.0);
                            for (int i : gslots) best_pw[i] = pw[i];
                        }
                    }
                }

                // advance power odometer
                int pos = 0;
                while (pos < static_cast<int>(gslots.size())) {
                    if (++level[gslots[pos]] < power_levels) break;
                    level[gslots[pos]] = 0;
                    ++pos;
                }
                if (pos >= static_cast<int>(gslots.size())) break;
                if (gslots.empty()) break;
            }

            // advance occupant odometer
            int pos = 0;
            while (pos < n_slots) {
                if (++si[pos] < static_cast<int>(cands[pos].size())) break;
                si[pos] = 0;
                ++pos;
            }
            if (pos >= n_slots) break;
        }
    }

    RunResult res;
    res.scheme = SchemeId::ExhaustiveOracle;
    res.seed = cfg.seed;
    Allocation al = Allocation::zeros(cfg);
    if (best_ee >= 0) {
        for (int j = 0; j < J; ++j) {
            al.x_rf(best_rf[j], j) = 1;
            if (best_vlc[j] >= 0) al.x_vlc(best_vlc[j], j) = 1;
        }
        for (int i = 0; i < n_slots; ++i) {
            int j = best_occ[i];
            if (j < 0) continue;
            const auto& sl = slots[i];
            if (sl.tier == 0) {
                al.s_macro(j, sl.subch) = 1;
                al.p_macro(j, sl.subch) = best_pw[i];
            } else if (sl.tier == 1) {
                al.s_pico(sl.ap, j, sl.subch) = 1;
                al.p_pico(sl.ap, j, sl.subch) = best_pw[i];
            } else {
                al.s_vlc(sl.ap, j, sl.subch) = 1;
                al.p_vlc(sl.ap, j, sl.subch) = best_pw[i];
            }
            al.a[j] = 1;
        }
    } else {
        for (int j = 0; j < J; ++j) al.x_rf(0, j) = 1;
    }
    res.evaluated = evaluate(al, cs, cfg);
    res.allocation = std::move(al);
    res.outage_count = count_outage(res.allocation.a);
    res.ee_trace.push_back(res.evaluated.ee);
    res.wall_time = omp_get_wtime() - t0;
    return res;
}

RunResult run_scheme(SchemeId id, const ScenarioConfig& cfg, const ChannelState& cs,
                     int power_levels) {
    switch (id) {
        case SchemeId::ProposedIterative: return run_alternating(cfg, cs);
        case SchemeId::ProposedOneshot: return run_oneshot(cfg, cs);
        case SchemeId::ScgScgEpa: return run_scg_scg_epa(cfg, cs);
        case SchemeId::BaselineApprox: return run_baseline_approx(cfg, cs);
        case SchemeId::HybridIterative: return run_hybrid(cfg, cs);
        case SchemeId::ExhaustiveOracle: return run_exhaustive(cfg, cs, power_levels);
    }
    throw std::invalid_argument("unknown scheme id");
}

} // namespace rfvlc
