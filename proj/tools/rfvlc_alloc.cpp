// rfvlc-alloc: scenario runner for the aggregated RF/VLC resource
// allocation engine. Subcommands: run, sweep, oracle.

#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rfvlc/allocation.hpp"
#include "rfvlc/config.hpp"
#include "rfvlc/experiment.hpp"
#include "rfvlc/schemes.hpp"
#include "rfvlc/topology.hpp"

namespace {

// "0-19" or "3,7,11"
std::vector<std::uint64_t> parse_seed_range(const std::string& text) {
    std::vector<std::uint64_t> seeds;
    auto dash = text.find('-');
    if (dash != std::string::npos) {
        std::uint64_t lo = std::stoull(text.substr(0, dash));
        std::uint64_t hi = std::stoull(text.substr(dash + 1));
        for (std::uint64_t s = lo; s <= hi; ++s) seeds.push_back(s);
        return seeds;
    }
    std::size_t pos = 0;
    while (pos < text.size()) {
        auto comma = text.find(',', pos);
        if (comma == std::string::npos) comma = text.size();
        seeds.push_back(std::stoull(text.substr(pos, comma - pos)));
        pos = comma + 1;
    }
    return seeds;
}

std::vector<double> parse_double_list(const std::string& text) {
    std::vector<double> vals;
    std::size_t pos = 0;
    while (pos < text.size()) {
        auto comma = text.find(',', pos);
        if (comma == std::string::npos) comma = text.size();
        vals.push_back(std::stod(text.substr(pos, comma - pos)));
        pos = comma + 1;
    }
    return vals;
}

std::vector<rfvlc::SchemeId> parse_scheme_list(const std::string& text) {
    std::vector<rfvlc::SchemeId> ids;
    std::size_t pos = 0;
    while (pos < text.size()) {
        auto comma = text.find(',', pos);
        if (comma == std::string::npos) comma = text.size();
        ids.push_back(rfvlc::scheme_from_string(text.substr(pos, comma - pos)));
        pos = comma + 1;
    }
    return ids;
}

rfvlc::ScenarioConfig load_config(const std::string& scenario_path, std::int64_t seed_override) {
    rfvlc::ScenarioConfig cfg;
    if (!scenario_path.empty()) cfg = rfvlc::load_scenario(scenario_path);
    if (seed_override >= 0) cfg.seed = static_cast<std::uint64_t>(seed_override);
    cfg.validate();
    return cfg;
}

void print_run_result(const rfvlc::RunResult& r, const rfvlc::ScenarioConfig& cfg) {
    std::cout << "scheme,seed,users,sum_rate_bps,total_power_w,ee_bit_per_joule,outage_count\n";
    std::cout.precision(17);
    std::cout << rfvlc::to_string(r.scheme) << ',' << r.seed << ',' << cfg.user_count << ','
              << r.evaluated.sum_rate << ',' << r.evaluated.total_power << ',' << r.evaluated.ee
              << ',' << r.outage_count << "\n";
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Energy-efficient resource allocation for aggregated RF/VLC networks"};
    app.require_subcommand(1);

    std::string scenario_path;
    std::int64_t seed_override = -1;

    auto* run_cmd = app.add_subcommand("run", "Run one scheme on one scenario");
    std::string scheme_name = "proposed-iterative";
    std::string dump_channels, dump_matching, dump_pareto;
    run_cmd->add_option("--scenario", scenario_path, "Scenario JSON file");
    run_cmd->add_option("--scheme", scheme_name, "Scheme id");
    run_cmd->add_option("--seed", seed_override, "Seed override");
    run_cmd->add_option("--dump-channels", dump_channels, "Write channel gain CSV");
    run_cmd->add_option("--dump-matching", dump_matching, "Write AP assignment CSV");
    run_cmd->add_option("--dump-pareto", dump_pareto, "Write Pareto frontier CSV");

    auto* sweep_cmd = app.add_subcommand("sweep", "Parameter sweep over schemes and seeds");
    std::string param = "users", values_text, schemes_text, seeds_text = "0", out_path;
    sweep_cmd->add_option("--scenario", scenario_path, "Scenario JSON file");
    sweep_cmd->add_option("--param", param, "users | rmin | los | circuit");
    sweep_cmd->add_option("--values", values_text, "Comma-separated sweep values")->required();
    sweep_cmd->add_option("--schemes", schemes_text, "Comma-separated scheme ids")->required();
    sweep_cmd->add_option("--seeds", seeds_text, "Seed range: lo-hi or comma list");
    sweep_cmd->add_option("--out", out_path, "Output CSV path")->required();

    auto* oracle_cmd = app.add_subcommand("oracle", "Exhaustive search on a tiny instance");
    int levels = 5;
    oracle_cmd->add_option("--scenario", scenario_path, "Scenario JSON file");
    oracle_cmd->add_option("--seed", seed_override, "Seed override");
    oracle_cmd->add_option("--levels", levels, "Quantized power levels (including zero)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run_cmd->parsed()) {
            rfvlc::ScenarioConfig cfg = load_config(scenario_path, seed_override);
            rfvlc::Topology topo = rfvlc::generate_topology(cfg);
            rfvlc::ChannelState cs = rfvlc::build_channel_state(topo, cfg);
            rfvlc::RunResult result =
                rfvlc::run_scheme(rfvlc::scheme_from_string(scheme_name), cfg, cs, levels);
            print_run_result(result, cfg);
            if (!dump_channels.empty()) rfvlc::dump_channels_csv(cs, cfg, dump_channels);
            if (!dump_matching.empty()) rfvlc::dump_matching_csv(result, cfg, dump_matching);
            if (!dump_pareto.empty()) rfvlc::dump_pareto_csv(result.pareto, dump_pareto);
        } else if (sweep_cmd->parsed()) {
            rfvlc::ScenarioConfig cfg = load_config(scenario_path, -1);
            rfvlc::SweepSpec spec;
            spec.param = param;
            spec.values = parse_double_list(values_text);
            spec.schemes = parse_scheme_list(schemes_text);
            spec.seeds = parse_seed_range(seeds_text);
            rfvlc::ExperimentTable table = rfvlc::run_experiment(cfg, spec);
            rfvlc::write_metric_csv(table, out_path);
            std::cout << "wrote " << table.rows.size() << " rows to " << out_path << "\n";
            std::cout << "cell means (value, scheme, mean_ee, stderr_ee, mean_outage):\n";
            for (const auto& c : table.cells)
                std::cout << "  " << c.sweep_value << ", " << rfvlc::to_string(c.scheme) << ", "
                          << c.mean_ee << ", " << c.stderr_ee << ", " << c.mean_outage << "\n";
        } else if (oracle_cmd->parsed()) {
            rfvlc::ScenarioConfig cfg = load_config(scenario_path, seed_override);
            rfvlc::Topology topo = rfvlc::generate_topology(cfg);
            rfvlc::ChannelState cs = rfvlc::build_channel_state(topo, cfg);
            rfvlc::RunResult result = rfvlc::run_exhaustive(cfg, cs, levels);
            print_run_result(result, cfg);
        }
    } catch (const rfvlc::OracleRefusal& e) {
        std::cerr << "refused: " << e.what() << "\n";
        return 3;
    } catch (const rfvlc::ConstraintError& e) {
        std::cerr << "constraint violation: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
