#pragma once
#include <functional>
#include <span>
#include <vector>

#include "rfvlc/allocation.hpp"
#include "rfvlc/channel.hpp"
#include "rfvlc/config.hpp"
#include "rfvlc/subchannel.hpp"

namespace rfvlc {

enum class Tier { Macro, Pico, Vlc };

// One active (AP, user, subchannel) transmission with its effective squared
// gain and the cross-gains of every co-channel transmission that disturbs it.
struct Link {
    Tier tier;
    int ap;      // tier-local index
    int user;
    int subch;
    double direct;      // g^2 (RF) or (R_PD g)^2 (VLC) towards the served user
    double noise;       // noise power in the subchannel
    double bandwidth;   // Hz
    double prefactor;   // SNR multiplier inside the log (1 or e/2pi)
    double rate_scale;  // multiplier outside the log (1 or rho)
    double cap;         // per-subchannel power cap (= AP budget)
    int group;          // budget group, one per transmitting AP
};

struct LinkSystem {
    std::vector<Link> links;
    std::vector<double> group_budget;
    std::vector<std::vector<int>> group_links;
    // Incoming: for link l, pairs (source link, squared cross gain into l).
    std::vector<std::vector<std::pair<int, double>>> in_interference;
    // Outgoing transpose, used by the gradient.
    std::vector<std::vector<std::pair<int, double>>> out_interference;
    std::vector<std::vector<int>> user_links;
    int users = 0;

    std::size_t size() const { return links.size(); }
    std::vector<double> epa_start(const ScenarioConfig& config) const;
};

LinkSystem build_link_system(const SaResult& sa, const ChannelState& channel,
                             const ScenarioConfig& config);

// --- quadratic transform -------------------------------------------------

// 2y*sqrt(p*direct) - y^2*(interference + noise). Tight at y = optimal_y.
double quad_sinr(double p, double direct, double interference, double noise, double y);

// Closed-form stationary point sqrt(p*direct) / (interference + noise).
double optimal_y(double p, double direct, double interference, double noise);

// Vector form over all links at the given power vector.
void optimal_y(const LinkSystem& sys, std::span<const double> p, std::vector<double>& y);

// True SINR ratio of one link (used by tests and the evaluation path).
double sinr_ratio(double p, double direct, double interference, double noise);

// Transformed per-link rates at fixed y. Returns false when some log
// argument is nonpositive (caller treats the objective as unbounded-bad).
// When grad is nonnull it receives d(sum_l w_l r_l)/dp with w = link_weight
// (all ones when empty).
bool transformed_rates(const LinkSystem& sys, std::span<const double> p,
                       std::span<const double> y, std::vector<double>& link_rate,
                       std::span<const double> link_weight, std::vector<double>* grad);

double transformed_sum_rate(const LinkSystem& sys, std::span<const double> p,
                            std::span<const double> y);

// Actual achievable sum rate (no transform); also fills per-user rates.
double true_sum_rate(const LinkSystem& sys, std::span<const double> p,
                     std::vector<double>* per_user = nullptr);

// --- generic concave maximizer -------------------------------------------

// Product of per-group capped simplices {0 <= x <= cap, sum_group <= budget}.
struct Polytope {
    std::vector<double> cap;
    std::vector<std::vector<int>> groups;
    std::vector<double> budget;

    void project(std::vector<double>& x) const;  // exact Euclidean projection
};

struct PgOptions {
    double tol = 1e-8;       // projected-gradient residual, relative to cap scale
    int max_iterations = 400;
};

struct PgResult {
    std::vector<double> x;
    double value = 0;
    int iterations = 0;
    bool converged = false;  // false = degraded accuracy (hit the iteration cap)
};

using Objective = std::function<double(std::span<const double>)>;
using Gradient = std::function<void(std::span<const double>, std::vector<double>&)>;

// Projected-gradient ascent with Armijo backtracking and an adaptive step.
PgResult maximize_concave(const Objective& f, const Gradient& grad, const Polytope& poly,
                          std::vector<double> start, const PgOptions& opts = {});

// --- solvers ---------------------------------------------------------------

struct QosPlan {
    std::vector<int> enforced;  // users whose rate floor is active
    std::vector<int> dropped;   // users whose floor is unattainable (warned)
};

// Users holding links whose optimistic rate bound misses r_min get their
// floor dropped up front; the rest are enforced.
QosPlan plan_qos(const LinkSystem& sys, const ScenarioConfig& config);

struct RmaxResult {
    double r_max = 0;
    std::vector<double> p;
    std::vector<double> y;
    std::vector<double> trace;  // sum rate after each alternation
    int iterations = 0;
    std::vector<int> dropped_qos;
    bool degraded = false;
};

RmaxResult solve_rmax(const LinkSystem& sys, const ScenarioConfig& config);

struct MinPowerResult {
    bool feasible = false;
    std::vector<double> p;
    std::vector<double> y;
    double sum_rate = 0;
    double total_power = 0;     // circuit floor included
    std::vector<double> trace;  // total power after each alternation
    int iterations = 0;
};

MinPowerResult solve_min_power(double epsilon, const LinkSystem& sys,
                               const ScenarioConfig& config, const QosPlan& qos,
                               std::span<const double> warm_start = {});

struct ParetoEntry {
    double lambda = 0;
    double epsilon = 0;      // bit/s
    double sum_rate = 0;     // bit/s
    double total_power = 0;  // W
    double ee = 0;           // bit/J
    std::vector<double> p;
    std::vector<double> y;
};

struct ParetoResult {
    std::vector<ParetoEntry> entries;  // ascending lambda
    int best_index = -1;               // max EE entry
    double r_max = 0;
    std::vector<double> skipped_lambdas;
    std::vector<int> dropped_qos;
};

// lambda = min(i*step, 1) for i = 1..ceil(1/step); every feasible subproblem
// contributes one frontier entry; the best-EE entry is selected.
ParetoResult sweep_pareto(const LinkSystem& sys, const ScenarioConfig& config);

namespace serial {
ParetoResult sweep_pareto(const LinkSystem& sys, const ScenarioConfig& config);
}

// Writes a link-indexed power vector back into the allocation grids.
void apply_powers(const LinkSystem& sys, std::span<const double> p, Allocation& alloc);

} // namespace rfvlc
