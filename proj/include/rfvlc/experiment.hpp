#pragma once
#include <string>
#include <vector>

#include "rfvlc/config.hpp"
#include "rfvlc/schemes.hpp"

namespace rfvlc {

struct MetricRow {
    std::string sweep_param;
    double sweep_value = 0;
    SchemeId scheme = SchemeId::ProposedOneshot;
    std::uint64_t seed = 0;
    double sum_rate_bps = 0;
    double total_power_w = 0;
    double ee = 0;
    int outage_count = 0;
    int iterations = 0;
    double wall_time_s = 0;
};

struct SweepSpec {
    std::string param;             // users | rmin | los | circuit | none
    std::vector<double> values;    // sweep points (band index 0..3 for los)
    std::vector<SchemeId> schemes;
    std::vector<std::uint64_t> seeds;
    int oracle_levels = 5;
};

// Seed-averaged statistics of one (sweep value, scheme) cell.
struct CellStats {
    double sweep_value = 0;
    SchemeId scheme = SchemeId::ProposedOneshot;
    int n = 0;
    double mean_ee = 0, stderr_ee = 0;
    double mean_sum_rate = 0;
    double mean_total_power = 0;
    double mean_outage = 0;
};

struct ExperimentTable {
    std::vector<MetricRow> rows;  // deterministic (value, scheme, seed) order
    std::vector<CellStats> cells;
};

// Applies one sweep point to a base configuration. "los" maps band index
// 0..3 to the [0,0.3], [0.3,0.5], [0.5,0.8], [0.8,1] probability ranges;
// "circuit" scales all three circuit powers.
ScenarioConfig apply_sweep_value(const ScenarioConfig& base, const std::string& param,
                                 double value);

// Cartesian product of (value, scheme, seed); cells run in parallel and the
// row order never depends on the thread count.
ExperimentTable run_experiment(const ScenarioConfig& base, const SweepSpec& spec);

std::string metric_csv_header();
std::string metric_csv_row(const MetricRow& row);
void write_metric_csv(const ExperimentTable& table, const std::string& path);

MetricRow to_metric_row(const RunResult& result, const std::string& param, double value);

// Dump helpers backing the CLI's --dump-* flags.
void dump_channels_csv(const ChannelState& cs, const ScenarioConfig& cfg,
                       const std::string& path);
void dump_matching_csv(const RunResult& result, const ScenarioConfig& cfg,
                       const std::string& path);
void dump_pareto_csv(const ParetoResult& pareto, const std::string& path);

} // namespace rfvlc
