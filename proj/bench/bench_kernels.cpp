// Compares the OpenMP kernels against their serial reference
// implementations: wall time, speedup, and output equality.

#include <cstdio>
#include <omp.h>

#include "rfvlc/experiment.hpp"
#include "rfvlc/schemes.hpp"
#include "rfvlc/topology.hpp"

using namespace rfvlc;

namespace {

template <typename F>
double best_of(int reps, F&& fn) {
    double best = 1e300;
    for (int r = 0; r < reps; ++r) {
        double t0 = omp_get_wtime();
        fn();
        best = std::min(best, omp_get_wtime() - t0);
    }
    return best;
}

void report(const char* name, double serial_s, double parallel_s, bool identical) {
    printf("%-22s serial %8.2f ms   omp %8.2f ms   speedup %.2fx   identical %s\n", name,
           serial_s * 1e3, parallel_s * 1e3, serial_s / parallel_s, identical ? "yes" : "NO");
}

} // namespace

int main() {
    printf("threads: %d\n", omp_get_max_threads());

    // full-scale channel construction
    {
        ScenarioConfig cfg;
        cfg.user_count = 180;
        cfg.subchannels_per_ap = 50;
        cfg.pico_count = 4;
        cfg.room_count = 6;
        cfg.macro_radius = 500.0;
        cfg.pico_radius = 100.0;
        cfg.seed = 7;
        Topology topo = generate_topology(cfg);
        ChannelState ser, par;
        double ts = best_of(3, [&] { ser = serial::build_channel_state(topo, cfg); });
        double tp = best_of(3, [&] { par = build_channel_state(topo, cfg); });
        report("channel build", ts, tp, ser == par);
    }

    // full-scale rate evaluation
    {
        ScenarioConfig cfg;
        cfg.user_count = 180;
        cfg.subchannels_per_ap = 50;
        cfg.pico_count = 4;
        cfg.room_count = 6;
        cfg.macro_radius = 20.0;
        cfg.pico_radius = 6.0;
        cfg.seed = 7;
        Topology topo = generate_topology(cfg);
        ChannelState cs = build_channel_state(topo, cfg);
        RunResult epa = run_scg_scg_epa(cfg, cs);
        EvaluatedAllocation ser, par;
        double ts = best_of(5, [&] { ser = serial::evaluate(epa.allocation, cs, cfg); });
        double tp = best_of(5, [&] { par = evaluate(epa.allocation, cs, cfg); });
        report("rate evaluation", ts, tp,
               ser.sum_rate == par.sum_rate && ser.per_user_rate == par.per_user_rate);
    }

    // desk-scale epsilon sweep (ten independent subproblems)
    {
        ScenarioConfig cfg;
        cfg.seed = 7;
        Topology topo = generate_topology(cfg);
        ChannelState cs = build_channel_state(topo, cfg);
        PowerProfile pp = PowerProfile::defaults(cfg);
        auto prefs = build_preferences(cs, cfg, pp);
        auto st = run_matching(prefs, cfg, pp);
        auto [x_rf, x_vlc] = extract_assignment(st, cfg);
        SaResult sa = allocate_scg(x_rf, x_vlc, cs, cfg);
        LinkSystem sys = build_link_system(sa, cs, cfg);
        ParetoResult ser, par;
        double ts = best_of(3, [&] { ser = serial::sweep_pareto(sys, cfg); });
        double tp = best_of(3, [&] { par = sweep_pareto(sys, cfg); });
        bool same = ser.r_max == par.r_max && ser.entries.size() == par.entries.size();
        for (std::size_t i = 0; same && i < ser.entries.size(); ++i)
            same = ser.entries[i].ee == par.entries[i].ee;
        report("pareto sweep", ts, tp, same);
    }

    // seed batch through the whole one-shot pipeline
    {
        ScenarioConfig cfg;
        cfg.user_count = 12;
        cfg.subchannels_per_ap = 6;
        SweepSpec spec{"none", {0.0}, {SchemeId::ProposedOneshot}, {0, 1, 2, 3, 4, 5, 6, 7}, 5};
        int saved = omp_get_max_threads();
        ExperimentTable ser, par;
        omp_set_num_threads(1);
        double ts = best_of(1, [&] { ser = run_experiment(cfg, spec); });
        omp_set_num_threads(saved);
        double tp = best_of(1, [&] { par = run_experiment(cfg, spec); });
        bool same = ser.rows.size() == par.rows.size();
        for (std::size_t i = 0; same && i < ser.rows.size(); ++i)
            same = ser.rows[i].ee == par.rows[i].ee;
        report("seed batch (8 runs)", ts, tp, same);
    }
    return 0;
}
