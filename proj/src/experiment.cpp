#include "rfvlc/experiment.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "rfvlc/topology.hpp"

namespace rfvlc {

ScenarioConfig apply_sweep_value(const ScenarioConfig& base, const std::string& param,
                                 double value) {
    ScenarioConfig cfg = base;
    if (param == "users") {
        cfg.user_count = static_cast<int>(value);
    } else if (param == "rmin") {
        cfg.r_min = value;
    } else if (param == "los") {
        static constexpr double bands[4][2] = {{0.0, 0.3}, {0.3, 0.5}, {0.5, 0.8}, {0.8, 1.0}};
        int band = static_cast<int>(value);
        if (band < 0 || band > 3)
            throw std::invalid_argument("los band index must be 0..3 (very low .. high)");
        cfg.los_prob_low = bands[band][0];
        cfg.los_prob_high = bands[band][1];
    } else if (param == "circuit") {
        cfg.circuit_macro = base.circuit_macro * value;
        cfg.circuit_pico = base.circuit_pico * value;
        cfg.circuit_vlc = base.circuit_vlc * value;
    } else if (param != "none") {
        throw std::invalid_argument("unknown sweep parameter: " + param);
    }
    cfg.validate();
    return cfg;
}

MetricRow to_metric_row(const RunResult& r, const std::string& param, double value) {
    MetricRow row;
    row.sweep_param = param;
    row.sweep_value = value;
    row.scheme = r.scheme;
    row.seed = r.seed;
    row.sum_rate_bps = r.evaluated.sum_rate;
    row.total_power_w = r.evaluated.total_power;
    row.ee = r.evaluated.ee;
    row.outage_count = r.outage_count;
    row.iterations = r.iterations_used;
    row.wall_time_s = r.wall_time;
    return row;
}

ExperimentTable run_experiment(const ScenarioConfig& base, const SweepSpec& spec) {
    ExperimentTable table;
    const int nv = static_cast<int>(spec.values.size());
    const int ns = static_cast<int>(spec.schemes.size());
    const int nr = static_cast<int>(spec.seeds.size());
    const int total = nv * ns * nr;
    if (total == 0) return table;

    table.rows.resize(total);
#pragma omp parallel for schedule(dynamic)
    for (int idx = 0; idx < total; ++idx) {
        int vi = idx / (ns * nr);
        int si = (idx / nr) % ns;
        int ri = idx % nr;
        ScenarioConfig cfg = apply_sweep_value(base, spec.param, spec.values[vi]);
        cfg.seed = spec.seeds[ri];
        Topology topo = generate_topology(cfg);
        ChannelState cs = build_channel_state(topo, cfg);
        RunResult result = run_scheme(spec.schemes[si], cfg, cs, spec.oracle_levels);
        table.rows[idx] = to_metric_row(result, spec.param, spec.values[vi]);
    }

    for (int vi = 0; vi < nv; ++vi)
        for (int si = 0; si < ns; ++si) {
            CellStats cell;
            cell.sweep_value = spec.values[vi];
            cell.scheme = spec.schemes[si];
            double sum_ee = 0, sum_ee2 = 0;
            for (int ri = 0; ri < nr; ++ri) {
                const MetricRow& row = table.rows[(vi * ns + si) * nr + ri];
                sum_ee += row.ee;
                sum_ee2 += row.ee * row.ee;
                cell.mean_sum_rate += row.sum_rate_bps;
                cell.mean_total_power += row.total_power_w;
                cell.mean_outage += row.outage_count;
            }
            cell.n = nr;
            cell.mean_ee = sum_ee / nr;
            cell.mean_sum_rate /= nr;
            cell.mean_total_power /= nr;
            cell.mean_outage /= nr;
            if (nr > 1) {
                double var = (sum_ee2 - nr * cell.mean_ee * cell.mean_ee) / (nr - 1);
                cell.stderr_ee = std::sqrt(std::max(var, 0.0) / nr);
            }
            table.cells.push_back(cell);
        }
    return table;
}

std::string metric_csv_header() {
    return "sweep_param,sweep_value,scheme,seed,sum_rate_bps,total_power_w,ee,outage_count,"
           "iterations,wall_time_s";
}

std::string metric_csv_row(const MetricRow& row) {
    std::ostringstream ss;
    ss.precision(17);
    ss << row.sweep_param << ',' << row.sweep_value << ',' << to_string(row.scheme) << ','
       << row.seed << ',' << row.sum_rate_bps << ',' << row.total_power_w << ',' << row.ee << ','
       << row.outage_count << ',' << row.iterations << ',' << row.wall_time_s;
    return ss.str();
}

void write_metric_csv(const ExperimentTable& table, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write csv: " + path);
    out << metric_csv_header() << "\n";
    for (const auto& row : table.rows) out << metric_csv_row(row) << "\n";
}

void dump_channels_csv(const ChannelState& cs, const ScenarioConfig& cfg,
                       const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write csv: " + path);
    out.precision(17);
    out << "ap_kind,ap_idx,user_idx,subch_idx,gain,rho\n";
    for (int j = 0; j < cs.users; ++j)
        for (int s = 0; s < cs.subchannels; ++s)
            out << "macro,0," << j << ',' << s << ',' << cs.g_macro(j, s) << ",1\n";
    for (int k = 0; k < cfg.pico_count; ++k)
        for (int j = 0; j < cs.users; ++j)
            for (int s = 0; s < cs.subchannels; ++s)
                out << "pico," << k << ',' << j << ',' << s << ',' << cs.g_pico(k, j, s) << ",1\n";
    for (int v = 0; v < cfg.vlc_ap_count(); ++v)
        for (int j = 0; j < cs.users; ++j)
            for (int s = 0; s < cs.subchannels; ++s)
                out << "vlc," << v << ',' << j << ',' << s << ',' << cs.g_vlc(v, j, s) << ','
                    << cs.rho(v, j, s) << "\n";
}

void dump_matching_csv(const RunResult& result, const ScenarioConfig& cfg,
                       const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write csv: " + path);
    out.precision(17);
    out << "user,rf_ap,vlc_ap_or_none,ee_rf_metric,ee_vlc_metric\n";
    for (int j = 0; j < cfg.user_count; ++j) {
        int rf = -1, vlc = -1;
        for (int k = 0; k < cfg.rf_ap_count(); ++k)
            if (result.allocation.x_rf(k, j)) rf = k;
        for (int v = 0; v < cfg.vlc_ap_count(); ++v)
            if (result.allocation.x_vlc(v, j)) vlc = v;
        double ee_rf = rf >= 0 && result.prefs.ee_rf.size() ? result.prefs.ee_rf(rf, j) : 0.0;
        double ee_vlc = vlc >= 0 && result.prefs.ee_vlc.size() ? result.prefs.ee_vlc(vlc, j) : 0.0;
        out << j << ',' << rf << ',' << (vlc >= 0 ? std::to_string(vlc) : std::string("none"))
            << ',' << ee_rf << ',' << ee_vlc << "\n";
    }
}

void dump_pareto_csv(const ParetoResult& pareto, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write csv: " + path);
    out.precision(17);
    out << "lambda,epsilon_bps,sum_rate_bps,total_power_w,ee\n";
    for (const auto& e : pareto.entries)
        out << e.lambda << ',' << e.epsilon << ',' << e.sum_rate << ',' << e.total_power << ','
            << e.ee << "\n";
}

} // namespace rfvlc
