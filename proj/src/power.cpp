#include "rfvlc/power.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "rfvlc/units.hpp"

namespace rfvlc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kLn2 = 0.6931471805599453;

} // namespace

// ---------------------------------------------------------------------------
// link system
// ---------------------------------------------------------------------------

std::vector<double> LinkSystem::epa_start(const ScenarioConfig& config) const {
    std::vector<double> p(links.size());
    for (std::size_t l = 0; l < links.size(); ++l)
        p[l] = group_budget[links[l].group] / config.subchannels_per_ap;
    return p;
}

LinkSystem build_link_system(const SaResult& sa, const ChannelState& cs,
                             const ScenarioConfig& cfg) {
    LinkSystem sys;
    const int J = cfg.user_count;
    const int S = cfg.subchannels_per_ap;
    const int P = cfg.pico_count;
    const int V = cfg.vlc_ap_count();
    sys.users = J;
    sys.user_links.resize(J);

    sys.group_budget.assign(1 + P + V, cfg.p_pico_budget);
    sys.group_budget[0] = cfg.p_macro_budget;
    for (int v = 0; v < V; ++v) sys.group_budget[1 + P + v] = cfg.p_vlc_budget;
    sys.group_links.resize(sys.group_budget.size());

    Grid2<int> pico_link(P, S, -1);
    Grid2<int> vlc_link(V, S, -1);

    auto add_link = [&](Link lk) {
        int idx = static_cast<int>(sys.links.size());
        sys.user_links[lk.user].push_back(idx);
        sys.group_links[lk.group].push_back(idx);
        sys.links.push_back(lk);
        return idx;
    };

    for (int j = 0; j < J; ++j)
        for (int s = 0; s < S; ++s)
            if (sa.s_macro(j, s)) {
                double g = cs.g_macro(j, s);
                add_link({Tier::Macro, 0, j, s, g * g, cfg.rf_noise_power(), cfg.bandwidth_rf,
                          1.0, 1.0, cfg.p_macro_budget, 0});
            }
    for (int k = 0; k < P; ++k)
        for (int j = 0; j < J; ++j)
            for (int s = 0; s < S; ++s)
                if (sa.s_pico(k, j, s)) {
                    double g = cs.g_pico(k, j, s);
                    pico_link(k, s) = add_link({Tier::Pico, k, j, s, g * g, cfg.rf_noise_power(),
                                                cfg.bandwidth_rf, 1.0, 1.0, cfg.p_pico_budget,
                                                1 + k});
                }
    for (int v = 0; v < V; ++v)
        for (int j = 0; j < J; ++j)
            for (int s = 0; s < S; ++s)
                if (sa.s_vlc(v, j, s)) {
                    double rg = cfg.pd_responsivity * cs.g_vlc(v, j, s);
                    vlc_link(v, s) = add_link({Tier::Vlc, v, j, s, rg * rg, cfg.vlc_noise_power(),
                                               cfg.bandwidth_vlc, kVlcSnrPrefactor,
                                               cs.rho(v, j, s), cfg.p_vlc_budget, 1 + P + v});
                }

    const std::size_t n = sys.links.size();
    sys.in_interference.resize(n);
    sys.out_interference.resize(n);
    for (std::size_t l = 0; l < n; ++l) {
        const Link& lk = sys.links[l];
        if (lk.tier == Tier::Pico) {
            for (int k2 = 0; k2 < P; ++k2) {
                if (k2 == lk.ap) continue;
                int src = pico_link(k2, lk.subch);
                if (src < 0) continue;
                double g = cs.g_pico(k2, lk.user, lk.subch);
                sys.in_interference[l].push_back({src, g * g});
                sys.out_interference[src].push_back({static_cast<int>(l), g * g});
            }
        } else if (lk.tier == Tier::Vlc) {
            for (int v2 = 0; v2 < V; ++v2) {
                if (v2 == lk.ap) continue;
                int src = vlc_link(v2, lk.subch);
                if (src < 0) continue;
                double rg = cfg.pd_responsivity * cs.g_vlc(v2, lk.user, lk.subch);
                sys.in_interference[l].push_back({src, rg * rg});
                sys.out_interference[src].push_back({static_cast<int>(l), rg * rg});
            }
        }
    }
    return sys;
}

// ---------------------------------------------------------------------------
// quadratic transform
// ---------------------------------------------------------------------------

double quad_sinr(double p, double direct, double interference, double noise, double y) {
    return 2.0 * y * std::sqrt(p * direct) - y * y * (interference + noise);
}

double optimal_y(double p, double direct, double interference, double noise) {
    return std::sqrt(p * direct) / (interference + noise);
}

double sinr_ratio(double p, double direct, double interference, double noise) {
    return p * direct / (interference + noise);
}

namespace {

double link_interference(const LinkSystem& sys, std::span<const double> p, std::size_t l) {
    double sum = 0;
    for (const auto& [src, cross] : sys.in_interference[l]) sum += p[src] * cross;
    return sum;
}

} // namespace

void optimal_y(const LinkSystem& sys, std::span<const double> p, std::vector<double>& y) {
    y.resize(sys.size());
    for (std::size_t l = 0; l < sys.size(); ++l) {
        const Link& lk = sys.links[l];
        y[l] = optimal_y(std::max(p[l], 0.0), lk.direct, link_interference(sys, p, l), lk.noise);
    }
}

bool transformed_rates(const LinkSystem& sys, std::span<const double> p,
                       std::span<const double> y, std::vector<double>& link_rate,
                       std::span<const double> link_weight, std::vector<double>* grad) {
    const std::size_t n = sys.size();
    link_rate.assign(n, 0.0);
    static thread_local std::vector<double> drdq_store;
    std::vector<double>& drdq = drdq_store;
    if (grad) drdq.assign(n, 0.0);

    bool ok = true;
    for (std::size_t l = 0; l < n; ++l) {
        const Link& lk = sys.links[l];
        double q = quad_sinr(std::max(p[l], 0.0), lk.direct, link_interference(sys, p, l),
                             lk.noise, y[l]);
        double arg = 1.0 + lk.prefactor * q;
        if (arg <= 1e-300) {
            ok = false;
            break;
        }
        link_rate[l] = lk.rate_scale * lk.bandwidth * std::log2(arg);
        if (grad) {
            double w = link_weight.empty() ? 1.0 : link_weight[l];
            drdq[l] = w * lk.rate_scale * lk.bandwidth * lk.prefactor / (kLn2 * arg);
        }
    }
    if (!ok) return false;

    if (grad) {
        grad->assign(n, 0.0);
        for (std::size_t l = 0; l < n; ++l) {
            const Link& lk = sys.links[l];
            // d(2y sqrt(p*direct))/dp, with a floor so idle links stay finite.
            double pf = std::max(p[l], 1e-14 * lk.cap + 1e-300);
            (*grad)[l] += drdq[l] * y[l] * std::sqrt(lk.direct / pf);
            for (const auto& [tgt, cross] : sys.out_interference[l])
                (*grad)[l] -= drdq[tgt] * y[tgt] * y[tgt] * cross;
        }
    }
    return true;
}

double transformed_sum_rate(const LinkSystem& sys, std::span<const double> p,
                            std::span<const double> y) {
    std::vector<double> rates;
    if (!transformed_rates(sys, p, y, rates, {}, nullptr)) return -kInf;
    double sum = 0;
    for (double r : rates) sum += r;
    return sum;
}

double true_sum_rate(const LinkSystem& sys, std::span<const double> p,
                     std::vector<double>* per_user) {
    if (per_user) per_user->assign(sys.users, 0.0);
    double sum = 0;
    for (std::size_t l = 0; l < sys.size(); ++l) {
        const Link& lk = sys.links[l];
        double ratio = sinr_ratio(std::max(p[l], 0.0), lk.direct,
                                  link_interference(sys, p, l), lk.noise);
        double r = lk.rate_scale * lk.bandwidth * std::log2(1.0 + lk.prefactor * ratio);
        sum += r;
        if (per_user) (*per_user)[lk.user] += r;
    }
    return sum;
}

// ---------------------------------------------------------------------------
// polytope projection and projected gradient
// ---------------------------------------------------------------------------

void Polytope::project(std::vector<double>& x) const {
    for (std::size_t g = 0; g < groups.size(); ++g) {
        const auto& idx = groups[g];
        if (idx.empty()) continue;
        double sum = 0, vmax = 0;
        for (int i : idx) {
            double c = std::clamp(x[i], 0.0, cap[i]);
            sum += c;
            vmax = std::max(vmax, x[i]);
        }
        if (sum <= budget[g]) {
            for (int i : idx) x[i] = std::clamp(x[i], 0.0, cap[i]);
            continue;
        }
        // Euclidean projection: x_i = clamp(v_i - tau, 0, cap_i) with the
        // shift tau solving sum = budget; the sum is monotone in tau.
        double lo = 0.0, hi = vmax;
        for (int it = 0; it < 100; ++it) {
            double tau = 0.5 * (lo + hi);
            double s = 0;
            for (int i : idx) s += std::clamp(x[i] - tau, 0.0, cap[i]);
            if (s > budget[g])
                lo = tau;
            else
                hi = tau;
        }
        for (int i : idx) x[i] = std::clamp(x[i] - hi, 0.0, cap[i]);
    }
}

PgResult maximize_concave(const Objective& f, const Gradient& grad, const Polytope& poly,
                          std::vector<double> start, const PgOptions& opts) {
    PgResult res;
    poly.project(start);
    std::vector<double> x = std::move(start);
    double fx = f(x);
    const std::size_t n = x.size();
    if (n == 0) {
        res.converged = true;
        res.value = fx;
        return res;
    }

    double cap_scale = 0;
    for (double c : poly.cap) cap_scale = std::max(cap_scale, c);
    const double res_tol = opts.tol * (1.0 + cap_scale);

    std::vector<double> g(n), trial(n), gnew(n);
    grad(x, g);

    auto residual = [&]() {
        trial = x;
        for (std::size_t i = 0; i < n; ++i) trial[i] += g[i];
        poly.project(trial);
        double r = 0;
        for (std::size_t i = 0; i < n; ++i) r = std::max(r, std::abs(trial[i] - x[i]));
        return r;
    };

    double gnorm = 0;
    for (double v : g) gnorm = std::max(gnorm, std::abs(v));
    double alpha = (1.0 + cap_scale) / (1.0 + gnorm);

    for (int iter = 0; iter < opts.max_iterations; ++iter) {
        if (residual() <= res_tol) {
            res.converged = true;
            res.iterations = iter;
            break;
        }
        // Armijo backtracking on the projected step.
        bool accepted = false;
        for (int bt = 0; bt < 60; ++bt) {
            trial = x;
            for (std::size_t i = 0; i < n; ++i) trial[i] += alpha * g[i];
            poly.project(trial);
            double inner = 0, step_norm = 0;
            for (std::size_t i = 0; i < n; ++i) {
                double d = trial[i] - x[i];
                inner += g[i] * d;
                step_norm = std::max(step_norm, std::abs(d));
            }
            if (step_norm == 0) break;
            double ft = f(trial);
            if (ft >= fx + 1e-4 * inner && ft > -kInf) {
                grad(trial, gnew);
                // Barzilai-Borwein step for the next iterate.
                double ss = 0, sy = 0;
                for (std::size_t i = 0; i < n; ++i) {
                    double s = trial[i] - x[i];
                    ss += s * s;
                    sy += s * (gnew[i] - g[i]);
                }
                if (sy < 0) alpha = std::clamp(ss / -sy, 1e-14 * (1 + cap_scale), 1e14);
                x.swap(trial);
                fx = ft;
                g.swap(gnew);
                accepted = true;
                break;
            }
            alpha *= 0.5;
        }
        res.iterations = iter + 1;
        if (!accepted) {
            res.converged = residual() <= res_tol * 10;
            break;
        }
    }
    res.x = std::move(x);
    res.value = fx;
    return res;
}

// ---------------------------------------------------------------------------
// QoS planning and augmented-Lagrangian machinery
// ---------------------------------------------------------------------------

QosPlan plan_qos(const LinkSystem& sys, const ScenarioConfig& cfg) {
    QosPlan plan;
    if (cfg.r_min <= 0) return plan;
    for (int j = 0; j < sys.users; ++j) {
        if (sys.user_links[j].empty()) continue;
        // Optimistic bound: full cap on every own link, no interference.
        double bound = 0;
        for (int l : sys.user_links[j]) {
            const Link& lk = sys.links[l];
            bound += lk.rate_scale * lk.bandwidth *
                     std::log2(1.0 + lk.prefactor * lk.cap * lk.direct / lk.noise);
        }
        if (bound < cfg.r_min)
            plan.dropped.push_back(j);
        else
            plan.enforced.push_back(j);
    }
    return plan;
}

namespace {

// Powell-Hestenes-Rockafellar penalty for an inequality c <= 0.
double phr_value(double lambda, double rho, double c) {
    double m = std::max(0.0, lambda + rho * c);
    return (m * m - lambda * lambda) / (2.0 * rho);
}

double phr_slope(double lambda, double rho, double c) {
    return std::max(0.0, lambda + rho * c);
}

Polytope make_polytope(const LinkSystem& sys) {
    Polytope poly;
    poly.cap.resize(sys.size());
    for (std::size_t l = 0; l < sys.size(); ++l) poly.cap[l] = sys.links[l].cap;
    poly.groups = sys.group_links;
    poly.budget = sys.group_budget;
    return poly;
}

std::vector<double> per_user_rates(const LinkSystem& sys, const std::vector<double>& link_rate) {
    std::vector<double> ur(sys.users, 0.0);
    for (std::size_t l = 0; l < link_rate.size(); ++l) ur[sys.links[l].user] += link_rate[l];
    return ur;
}

} // namespace

// ---------------------------------------------------------------------------
// R_max (alternating quadratic transform, sum-rate maximization)
// ---------------------------------------------------------------------------

namespace {

struct RmaxAttempt {
    std::vector<double> p, y, trace;
    double r_max = 0;
    double worst_violation = 0;  // normalized
    int worst_user = -1;
    int iterations = 0;
    bool degraded = false;
};

RmaxAttempt run_rmax_attempt(const LinkSystem& sys, const ScenarioConfig& cfg,
                             const std::vector<int>& enforced) {
    RmaxAttempt at;
    const std::size_t n = sys.size();
    at.p = sys.epa_start(cfg);
    optimal_y(sys, at.p, at.y);

    Polytope poly = make_polytope(sys);
    const double rate_norm = std::max({cfg.r_min, 1.0});
    double f_scale = std::max(1.0, transformed_sum_rate(sys, at.p, at.y));

    std::vector<double> lambda(sys.users, 0.0);
    double rho = 1.0;
    double prev_viol = kInf;
    double r_prev = -kInf;

    std::vector<double> weights(n), rates_buf;
    const int max_alt = 50;
    for (int c = 0; c < max_alt; ++c) {
        const std::vector<double>& y = at.y;
        auto objective = [&](std::span<const double> p) -> double {
            std::vector<double> lr;
            if (!transformed_rates(sys, p, y, lr, {}, nullptr)) return -kInf;
            double val = 0;
            for (double r : lr) val += r;
            if (!enforced.empty()) {
                auto ur = per_user_rates(sys, lr);
                for (int j : enforced)
                    val -= phr_value(lambda[j], rho, (cfg.r_min - ur[j]) / rate_norm);
            }
            return val / f_scale;
        };
        auto gradient = [&](std::span<const double> p, std::vector<double>& g) {
            std::vector<double> lr;
            transformed_rates(sys, p, y, lr, {}, nullptr);
            auto ur = per_user_rates(sys, lr);
            std::vector<double> mult(sys.users, 0.0);
            for (int j : enforced)
                mult[j] = phr_slope(lambda[j], rho, (cfg.r_min - ur[j]) / rate_norm) / rate_norm;
            for (std::size_t l = 0; l < n; ++l)
                weights[l] = 1.0 + mult[sys.links[l].user];
            transformed_rates(sys, p, y, lr, weights, &g);
            for (double& v : g) v /= f_scale;
        };

        PgResult pg = maximize_concave(objective, gradient, poly, at.p,
                                       {1e-9, 400});
        at.p = pg.x;
        if (!pg.converged) at.degraded = true;

        optimal_y(sys, at.p, at.y);
        std::vector<double> ur;
        double r_now = true_sum_rate(sys, at.p, &ur);
        at.trace.push_back(r_now);
        at.iterations = c + 1;

        at.worst_violation = 0;
        at.worst_user = -1;
        for (int j : enforced) {
            double v = (cfg.r_min - ur[j]) / rate_norm;
            if (v > at.worst_violation) {
                at.worst_violation = v;
                at.worst_user = j;
            }
        }

        bool rate_settled = std::abs(r_now - r_prev) <= cfg.solver_tolerance * std::max(1.0, std::abs(r_prev));
        if (rate_settled && at.worst_violation <= 1e-6) break;
        r_prev = r_now;

        if (!enforced.empty()) {
            std::vector<double> lr;
            transformed_rates(sys, at.p, at.y, lr, {}, nullptr);
            auto tur = per_user_rates(sys, lr);
            for (int j : enforced)
                lambda[j] = std::max(0.0, lambda[j] + rho * (cfg.r_min - tur[j]) / rate_norm);
            if (at.worst_violation > 0.25 * prev_viol) rho = std::min(rho * 4.0, 1e10);
            prev_viol = std::max(at.worst_violation, 1e-300);
        }
    }
    at.r_max = at.trace.empty() ? 0.0 : at.trace.back();
    return at;
}

} // namespace

RmaxResult solve_rmax(const LinkSystem& sys, const ScenarioConfig& cfg) {
    RmaxResult res;
    if (sys.size() == 0) {
        res.y.clear();
        res.trace.push_back(0.0);
        return res;
    }
    QosPlan plan = plan_qos(sys, cfg);
    res.dropped_qos = plan.dropped;
    std::vector<int> enforced = plan.enforced;

    while (true) {
        RmaxAttempt at = run_rmax_attempt(sys, cfg, enforced);
        if (at.worst_violation <= 1e-3 || enforced.empty() || at.worst_user < 0) {
            res.r_max = at.r_max;
            res.p = std::move(at.p);
            res.y = std::move(at.y);
            res.trace = std::move(at.trace);
            res.iterations = at.iterations;
            res.degraded = at.degraded || at.worst_violation > 1e-3;
            return res;
        }
        // Jointly unattainable floor: drop the worst violator and retry.
        res.dropped_qos.push_back(at.worst_user);
        std::erase(enforced, at.worst_user);
    }
}

// ---------------------------------------------------------------------------
// epsilon-constrained power minimization
// ---------------------------------------------------------------------------

namespace {

// True-rate feasibility of the scaled vector t*p against the rate floors.
bool radial_feasible(const LinkSystem& sys, const std::vector<double>& p, double t,
                     double epsilon, const std::vector<int>& enforced, double r_min) {
    static thread_local std::vector<double> scaled;
    scaled.assign(p.begin(), p.end());
    for (double& v : scaled) v *= t;
    std::vector<double> ur;
    double sum = true_sum_rate(sys, scaled, &ur);
    const double slack = 1e-12;
    if (sum < epsilon * (1.0 - slack)) return false;
    for (int j : enforced)
        if (ur[j] < r_min * (1.0 - slack)) return false;
    return true;
}

bool rates_feasible(const LinkSystem& sys, const std::vector<double>& p, double epsilon,
                    const std::vector<int>& enforced, double r_min) {
    std::vector<double> ur;
    double sum = true_sum_rate(sys, p, &ur);
    const double slack = 1e-12;
    if (sum < epsilon * (1.0 - slack)) return false;
    for (int j : enforced)
        if (ur[j] < r_min * (1.0 - slack)) return false;
    return true;
}

// Bisects every link down toward its individual minimum given the others.
// Each accepted point is checked feasible, so the trim can only reduce
// power while every rate floor keeps holding.
std::vector<double> coordinate_trim(const LinkSystem& sys, std::vector<double> p, double epsilon,
                                    const std::vector<int>& enforced, double r_min) {
    if (!rates_feasible(sys, p, epsilon, enforced, r_min)) return p;
    double scale = 0;
    for (double v : p) scale += v;
    for (int pass = 0; pass < 3; ++pass) {
        double trimmed = 0;
        for (std::size_t l = 0; l < sys.size(); ++l) {
            if (p[l] <= 0) continue;
            double orig = p[l];
            p[l] = 0;
            if (rates_feasible(sys, p, epsilon, enforced, r_min)) {
                trimmed += orig;
                continue;
            }
            double lo = 0.0, hi = 1.0;
            for (int it = 0; it < 60; ++it) {
                double mid = 0.5 * (lo + hi);
                p[l] = mid * orig;
                if (rates_feasible(sys, p, epsilon, enforced, r_min))
                    hi = mid;
                else
                    lo = mid;
            }
            p[l] = hi * orig;
            trimmed += orig - p[l];
        }
        if (trimmed <= 1e-12 * (1.0 + scale)) break;
    }
    return p;
}

// Scales p to the cheapest point on its ray that meets every rate floor
// (rates grow monotonically with the scale). Empty result: ray infeasible.
std::vector<double> restore_on_ray(const LinkSystem& sys, std::vector<double> p, double epsilon,
                                   const std::vector<int>& enforced, double r_min) {
    double norm = 0;
    for (double v : p) norm = std::max(norm, v);
    if (norm == 0) {
        if (epsilon <= 0 && enforced.empty()) return p;
        return {};
    }
    double t_max = kInf;
    for (std::size_t g = 0; g < sys.group_links.size(); ++g) {
        double s = 0;
        for (int l : sys.group_links[g]) s += p[l];
        if (s > 0) t_max = std::min(t_max, sys.group_budget[g] / s);
    }
    for (std::size_t l = 0; l < sys.size(); ++l)
        if (p[l] > 0) t_max = std::min(t_max, sys.links[l].cap / p[l]);
    if (t_max == kInf) t_max = 1.0;

    if (!radial_feasible(sys, p, t_max, epsilon, enforced, r_min)) return {};
    double hi = t_max;
    if (radial_feasible(sys, p, 0.0, epsilon, enforced, r_min)) {
        hi = 0.0;
    } else {
        double lo = 0.0;
        for (int it = 0; it < 200; ++it) {
            double mid = 0.5 * (lo + hi);
            if (radial_feasible(sys, p, mid, epsilon, enforced, r_min))
                hi = mid;
            else
                lo = mid;
        }
    }
    for (double& v : p) v *= hi;
    return p;
}

} // namespace

MinPowerResult solve_min_power(double epsilon, const LinkSystem& sys, const ScenarioConfig& cfg,
                               const QosPlan& qos, std::span<const double> warm_start) {
    MinPowerResult res;
    const std::size_t n = sys.size();
    if (n == 0) {
        res.feasible = epsilon <= 0;
        res.total_power = cfg.total_circuit_power();
        return res;
    }

    const std::vector<int>& enforced = qos.enforced;
    Polytope poly = make_polytope(sys);
    // Separate scales so subproblems whose sum-rate bound is slack follow
    // identical trajectories regardless of epsilon.
    const double norm_qos = std::max(cfg.r_min, 1.0);
    const double norm_sum = std::max(epsilon, 1.0);
    double pow_scale = 0;
    for (double b : sys.group_budget) pow_scale += b;
    pow_scale = std::max(pow_scale, 1e-12);

    std::vector<double> p = sys.epa_start(cfg);
    poly.project(p);

    auto vec_sum = [](const std::vector<double>& v) {
        double s = 0;
        for (double x : v) s += x;
        return s;
    };

    // Incumbent: cheapest feasible point seen, kept exactly feasible by the
    // radial polish (true rates are monotone along a ray).
    std::vector<double> best_p;
    double best_power = kInf;
    auto consider = [&](const std::vector<double>& cand) {
        std::vector<double> restored = restore_on_ray(sys, cand, epsilon, enforced, cfg.r_min);
        if (restored.empty()) return;
        double pw = vec_sum(restored);
        if (pw < best_power) {
            best_power = pw;
            best_p = std::move(restored);
        }
    };
    consider(p);
    if (!warm_start.empty()) {
        // e.g. the R_max vector: the only ray that reaches the largest bounds
        std::vector<double> ws(warm_start.begin(), warm_start.end());
        poly.project(ws);
        consider(ws);
    }
    if (!best_p.empty()) p = best_p;  // feasible start when a ray allows it

    std::vector<double> y;
    std::vector<double> lambda(sys.users, 0.0);
    double lambda13 = 0.0;
    double rho = 1.0;
    std::vector<double> weights(n);

    auto constraint_viol = [&](const std::vector<double>& ur, double sum) {
        double v = (epsilon - sum) / norm_sum;
        for (int j : enforced) v = std::max(v, (cfg.r_min - ur[j]) / norm_qos);
        return v;
    };

    double gamma_prev = kInf;
    double last_viol = kInf;
    const int max_alt = 50;
    for (int c = 0; c < max_alt; ++c) {
        optimal_y(sys, p, y);

        double round_viol = kInf;
        for (int round = 0; round < 12; ++round) {
            auto objective = [&](std::span<const double> pv) -> double {
                std::vector<double> lr;
                if (!transformed_rates(sys, pv, y, lr, {}, nullptr)) return -kInf;
                auto ur = per_user_rates(sys, lr);
                double sum = 0;
                for (double r : lr) sum += r;
                double obj = 0;
                for (double v : pv) obj += v;
                obj /= pow_scale;
                obj += phr_value(lambda13, rho, (epsilon - sum) / norm_sum);
                for (int j : enforced)
                    obj += phr_value(lambda[j], rho, (cfg.r_min - ur[j]) / norm_qos);
                return -obj;
            };
            auto gradient = [&](std::span<const double> pv, std::vector<double>& g) {
                std::vector<double> lr;
                transformed_rates(sys, pv, y, lr, {}, nullptr);
                auto ur = per_user_rates(sys, lr);
                double sum = 0;
                for (double r : lr) sum += r;
                double m13 = phr_slope(lambda13, rho, (epsilon - sum) / norm_sum) / norm_sum;
                std::vector<double> mult(sys.users, 0.0);
                for (int j : enforced)
                    mult[j] = phr_slope(lambda[j], rho, (cfg.r_min - ur[j]) / norm_qos) / norm_qos;
                for (std::size_t l = 0; l < n; ++l)
                    weights[l] = m13 + mult[sys.links[l].user];
                transformed_rates(sys, pv, y, lr, weights, &g);
                for (double& v : g) v -= 1.0 / pow_scale;
            };

            PgResult pg = maximize_concave(objective, gradient, poly, p, {1e-9, 400});
            p = pg.x;

            std::vector<double> lr;
            transformed_rates(sys, p, y, lr, {}, nullptr);
            auto ur = per_user_rates(sys, lr);
            double sum = 0;
            for (double r : lr) sum += r;
            double viol = constraint_viol(ur, sum);
            lambda13 = std::max(0.0, lambda13 + rho * (epsilon - sum) / norm_sum);
            for (int j : enforced)
                lambda[j] = std::max(0.0, lambda[j] + rho * (cfg.r_min - ur[j]) / norm_qos);
            last_viol = viol;
            if (viol <= 1e-8) break;
            if (viol > 0.25 * round_viol) rho = std::min(rho * 4.0, 1e10);
            round_viol = viol;
        }

        consider(p);

        // Algorithm-3 style convergence on the trajectory objective; the
        // reported trace follows the incumbent and never increases.
        double gamma = vec_sum(p);
        res.trace.push_back(cfg.total_circuit_power() +
                            (best_power < kInf ? best_power : gamma));
        res.iterations = c + 1;
        if (c >= 1 && last_viol <= 1e-6 &&
            std::abs(gamma - gamma_prev) <=
                cfg.solver_tolerance * std::max(pow_scale * 1e-6, gamma))
            break;
        gamma_prev = gamma;
    }

    if (best_power == kInf) {
        res.feasible = false;
        return res;
    }

    best_p = coordinate_trim(sys, std::move(best_p), epsilon, enforced, cfg.r_min);
    best_power = vec_sum(best_p);

    optimal_y(sys, best_p, y);
    res.p = std::move(best_p);
    res.y = std::move(y);
    res.sum_rate = true_sum_rate(sys, res.p, nullptr);
    res.total_power = cfg.total_circuit_power() + best_power;
    res.feasible = true;
    return res;
}

// ---------------------------------------------------------------------------
// epsilon sweep / Pareto frontier
// ---------------------------------------------------------------------------

namespace {

ParetoResult sweep_impl(const LinkSystem& sys, const ScenarioConfig& cfg, bool parallel) {
    ParetoResult res;
    RmaxResult rm = solve_rmax(sys, cfg);
    res.r_max = rm.r_max;
    res.dropped_qos = rm.dropped_qos;

    QosPlan plan = plan_qos(sys, cfg);
    // Keep only floors that survived the R_max stage.
    std::vector<int> enforced;
    for (int j : plan.enforced)
        if (std::find(rm.dropped_qos.begin(), rm.dropped_qos.end(), j) == rm.dropped_qos.end())
            enforced.push_back(j);
    QosPlan final_plan{enforced, rm.dropped_qos};

    const int steps = static_cast<int>(std::ceil(1.0 / cfg.lambda_step - 1e-12));
    std::vector<MinPowerResult> results(steps);
    std::vector<double> lambdas(steps);

#pragma omp parallel for schedule(dynamic) if (parallel)
    for (int i = 0; i < steps; ++i) {
        double lam = std::min((i + 1) * cfg.lambda_step, 1.0);
        lambdas[i] = lam;
        double eps = lam * rm.r_max;
        results[i] = solve_min_power(eps, sys, cfg, final_plan, rm.p);
    }

    for (int i = 0; i < steps; ++i) {
        if (!results[i].feasible) {
            res.skipped_lambdas.push_back(lambdas[i]);
            continue;
        }
        ParetoEntry e;
        e.lambda = lambdas[i];
        e.epsilon = lambdas[i] * rm.r_max;
        e.sum_rate = results[i].sum_rate;
        e.total_power = results[i].total_power;
        e.ee = e.total_power > 0 ? e.sum_rate / e.total_power : 0.0;
        e.p = std::move(results[i].p);
        e.y = std::move(results[i].y);
        res.entries.push_back(std::move(e));
    }
    for (std::size_t i = 0; i < res.entries.size(); ++i)
        if (res.best_index < 0 || res.entries[i].ee > res.entries[res.best_index].ee)
            res.best_index = static_cast<int>(i);
    return res;
}

} // namespace

ParetoResult sweep_pareto(const LinkSystem& sys, const ScenarioConfig& cfg) {
    return sweep_impl(sys, cfg, true);
}

namespace serial {
ParetoResult sweep_pareto(const LinkSystem& sys, const ScenarioConfig& cfg) {
    return sweep_impl(sys, cfg, false);
}
}

void apply_powers(const LinkSystem& sys, std::span<const double> p, Allocation& alloc) {
    for (std::size_t l = 0; l < sys.size(); ++l) {
        const Link& lk = sys.links[l];
        double v = l < p.size() ? std::max(p[l], 0.0) : 0.0;
        switch (lk.tier) {
            case Tier::Macro: alloc.p_macro(lk.user, lk.subch) = v; break;
            case Tier::Pico: alloc.p_pico(lk.ap, lk.user, lk.subch) = v; break;
            case Tier::Vlc: alloc.p_vlc(lk.ap, lk.user, lk.subch) = v; break;
        }
    }
}

} // namespace rfvlc
