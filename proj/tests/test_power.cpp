#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "rfvlc/power.hpp"
#include "rfvlc/rng.hpp"
#include "rfvlc/topology.hpp"

using namespace rfvlc;

namespace {

ChannelState make_channel(const ScenarioConfig& cfg, double fill = 0.0) {
    ChannelState cs;
    cs.users = cfg.user_count;
    cs.subchannels = cfg.subchannels_per_ap;
    cs.g_macro = Mat(cfg.user_count, cfg.subchannels_per_ap, fill);
    cs.g_pico = Ten3(cfg.pico_count, cfg.user_count, cfg.subchannels_per_ap, fill);
    cs.g_vlc = Ten3(cfg.vlc_ap_count(), cfg.user_count, cfg.subchannels_per_ap, fill);
    cs.rho = Ten3(cfg.vlc_ap_count(), cfg.user_count, cfg.subchannels_per_ap, 1.0);
    return cs;
}

SaResult empty_sa(const ScenarioConfig& cfg) {
    SaResult sa;
    sa.s_macro = BinMat(cfg.user_count, cfg.subchannels_per_ap);
    sa.s_pico = BinTen3(cfg.pico_count, cfg.user_count, cfg.subchannels_per_ap);
    sa.s_vlc = BinTen3(cfg.vlc_ap_count(), cfg.user_count, cfg.subchannels_per_ap);
    sa.a.assign(cfg.user_count, 0);
    return sa;
}

// Unit-scale single macro link: bandwidth 1, noise 0.5, budget 1, gain 1.
struct SingleLink {
    ScenarioConfig cfg;
    ChannelState cs;
    SaResult sa;
    LinkSystem sys;
};

SingleLink single_link(double gain = 1.0, double budget = 1.0) {
    SingleLink s;
    s.cfg.user_count = 1;
    s.cfg.pico_count = 0;
    s.cfg.room_count = 0;
    s.cfg.subchannels_per_ap = 1;
    s.cfg.bandwidth_rf = 1.0;
    s.cfg.noise_psd_rf = 0.5;
    s.cfg.p_macro_budget = budget;
    s.cfg.r_min = 0.0;
    s.cfg.solver_tolerance = 1e-9;
    s.cs = make_channel(s.cfg);
    s.cs.g_macro(0, 0) = gain;
    s.sa = empty_sa(s.cfg);
    s.sa.s_macro(0, 0) = 1;
    s.sa.a[0] = 1;
    s.sys = build_link_system(s.sa, s.cs, s.cfg);
    return s;
}

// Two mutually interfering pico links on one shared subchannel.
struct TwoLink {
    ScenarioConfig cfg;
    ChannelState cs;
    SaResult sa;
    LinkSystem sys;
};

TwoLink two_link(double cross12, double cross21) {
    TwoLink t;
    t.cfg.user_count = 2;
    t.cfg.pico_count = 2;
    t.cfg.room_count = 0;
    t.cfg.subchannels_per_ap = 1;
    t.cfg.bandwidth_rf = 1.0;
    t.cfg.noise_psd_rf = 0.5;
    t.cfg.p_pico_budget = 1.0;
    t.cfg.r_min = 0.0;
    t.cfg.solver_tolerance = 1e-9;
    t.cs = make_channel(t.cfg);
    t.cs.g_pico(0, 0, 0) = 1.0;      // pico 0 -> user 0
    t.cs.g_pico(1, 1, 0) = 1.0;      // pico 1 -> user 1
    t.cs.g_pico(1, 0, 0) = cross21;  // pico 1 heard by user 0
    t.cs.g_pico(0, 1, 0) = cross12;  // pico 0 heard by user 1
    t.sa = empty_sa(t.cfg);
    t.sa.s_pico(0, 0, 0) = 1;
    t.sa.s_pico(1, 1, 0) = 1;
    t.sa.a[0] = t.sa.a[1] = 1;
    t.sys = build_link_system(t.sa, t.cs, t.cfg);
    return t;
}

// Random well-scaled multi-link instance with genuine interference.
LinkSystem random_system(Rng& rng, ScenarioConfig& cfg) {
    cfg = ScenarioConfig{};
    cfg.user_count = 2 + static_cast<int>(rng.uniform() * 3);
    cfg.pico_count = 2;
    cfg.room_count = 1;
    cfg.vlc_aps_per_room = 2;
    cfg.subchannels_per_ap = 2;
    cfg.bandwidth_rf = 1.0;
    cfg.bandwidth_vlc = 2.0;
    cfg.noise_psd_rf = 0.3;
    cfg.noise_psd_vlc = 0.2;
    cfg.p_macro_budget = 2.0;
    cfg.p_pico_budget = 1.0;
    cfg.p_vlc_budget = 1.0;
    cfg.pd_responsivity = 1.0;
    cfg.r_min = 0.0;
    cfg.solver_tolerance = 1e-9;

    ChannelState cs = make_channel(cfg);
    for (auto& g : cs.g_macro.data()) g = rng.uniform(0.2, 2.0);
    for (auto& g : cs.g_pico.data()) g = rng.uniform(0.05, 1.5);
    for (auto& g : cs.g_vlc.data()) g = rng.uniform(0.05, 1.5);
    for (auto& r : cs.rho.data()) r = rng.uniform(0.3, 1.0);

    SaResult sa = empty_sa(cfg);
    // every subchannel of every AP granted to a random user
    for (int s = 0; s < cfg.subchannels_per_ap; ++s) {
        sa.s_macro(static_cast<int>(rng.uniform() * cfg.user_count), s) = 1;
        for (int k = 0; k < cfg.pico_count; ++k)
            sa.s_pico(k, static_cast<int>(rng.uniform() * cfg.user_count), s) = 1;
        for (int v = 0; v < cfg.vlc_ap_count(); ++v)
            sa.s_vlc(v, static_cast<int>(rng.uniform() * cfg.user_count), s) = 1;
    }
    for (int j = 0; j < cfg.user_count; ++j) sa.a[j] = 1;
    return build_link_system(sa, cs, cfg);
}

} // namespace

TEST_CASE("quadratic transform basics") {
    CHECK(quad_sinr(0.7, 2.0, 0.3, 0.5, 0.0) == 0.0);
    CHECK(quad_sinr(0.0, 2.0, 0.3, 0.5, 0.4) == doctest::Approx(-0.16 * 0.8).epsilon(1e-12));
    CHECK(optimal_y(0.0, 2.0, 0.3, 0.5) == 0.0);
    CHECK(optimal_y(1.0, 4.0, 0.0, 0.5) == doctest::Approx(4.0));  // sqrt(4)/0.5
}

TEST_CASE("transform is tight at the closed-form stationary point") {
    Rng rng(42);
    double worst = 0;
    for (int i = 0; i < 1000; ++i) {
        double p = rng.uniform(1e-3, 10.0);
        double direct = rng.uniform(1e-3, 10.0);
        double inter = rng.uniform(0.0, 5.0);
        double noise = rng.uniform(1e-3, 2.0);
        double y = optimal_y(p, direct, inter, noise);
        double ratio = sinr_ratio(p, direct, inter, noise);
        double rel = std::abs(quad_sinr(p, direct, inter, noise, y) - ratio) / ratio;
        worst = std::max(worst, rel);
    }
    CHECK(worst <= 1e-9);
}

TEST_CASE("stationarity of the auxiliary variable") {
    Rng rng(7);
    for (int i = 0; i < 50; ++i) {
        double p = rng.uniform(0.01, 5.0);
        double direct = rng.uniform(0.01, 5.0);
        double inter = rng.uniform(0.0, 3.0);
        double noise = rng.uniform(0.01, 1.0);
        double y = optimal_y(p, direct, inter, noise);
        double h = 1e-6 * (1.0 + y);
        double d = (quad_sinr(p, direct, inter, noise, y + h) -
                    quad_sinr(p, direct, inter, noise, y - h)) /
                   (2 * h);
        CHECK(std::abs(d) <= 1e-9 * (1.0 + std::abs(quad_sinr(p, direct, inter, noise, y))));
    }
}

TEST_CASE("analytic gradient of the transformed sum rate matches finite differences") {
    Rng rng(2024);
    for (int trial = 0; trial < 20; ++trial) {
        ScenarioConfig cfg;
        LinkSystem sys = random_system(rng, cfg);
        const std::size_t n = sys.size();
        REQUIRE(n > 0);

        std::vector<double> p(n), y;
        for (auto& v : p) v = rng.uniform(0.05, 0.9);
        optimal_y(sys, p, y);
        // perturb y away from the stationary point to keep the test general
        for (auto& v : y) v *= rng.uniform(0.8, 1.2);

        std::vector<double> rates, grad;
        REQUIRE(transformed_rates(sys, p, y, rates, {}, &grad));

        double scale = 0;
        for (double g : grad) scale = std::max(scale, std::abs(g));
        for (std::size_t i = 0; i < n; ++i) {
            double h = 1e-5 * (1.0 + p[i]);
            std::vector<double> pp = p, pm = p;
            pp[i] += h;
            pm[i] -= h;
            double fd = (transformed_sum_rate(sys, pp, y) - transformed_sum_rate(sys, pm, y)) /
                        (2 * h);
            CHECK(std::abs(fd - grad[i]) <= 1e-5 * std::max(scale, 1.0));
        }
    }
}

TEST_CASE("projection lands exactly on the capped simplex") {
    Polytope poly;
    poly.cap = {0.6, 0.6, 0.6};
    poly.groups = {{0, 1, 2}};
    poly.budget = {1.0};

    std::vector<double> x{2.0, 0.1, 0.5};
    poly.project(x);
    double sum = x[0] + x[1] + x[2];
    CHECK(sum <= 1.0 + 1e-12);
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
    for (double v : x) {
        CHECK(v >= 0.0);
        CHECK(v <= 0.6 + 1e-12);
    }

    std::vector<double> inside{0.1, 0.2, 0.3};
    poly.project(inside);
    CHECK(inside[0] == doctest::Approx(0.1));
    CHECK(inside[2] == doctest::Approx(0.3));

    std::vector<double> neg{-1.0, -0.5, 2.0};
    poly.project(neg);
    CHECK(neg[0] == 0.0);
    CHECK(neg[1] == 0.0);
    CHECK(neg[2] == doctest::Approx(0.6));
}

TEST_CASE("concave maximizer finds the interior optimum of a quadratic bowl") {
    Polytope poly;
    poly.cap = {10.0, 10.0, 10.0, 10.0};
    poly.groups = {{0, 1, 2, 3}};
    poly.budget = {40.0};
    std::vector<double> c{1.0, 2.5, 0.3, 4.0};

    auto f = [&](std::span<const double> x) {
        double v = 0;
        for (std::size_t i = 0; i < x.size(); ++i) v -= (x[i] - c[i]) * (x[i] - c[i]);
        return v;
    };
    auto grad = [&](std::span<const double> x, std::vector<double>& g) {
        g.resize(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) g[i] = -2.0 * (x[i] - c[i]);
    };

    PgResult r = maximize_concave(f, grad, poly, {0.0, 0.0, 0.0, 0.0}, {1e-9, 2000});
    CHECK(r.converged);
    for (std::size_t i = 0; i < c.size(); ++i)
        CHECK(std::abs(r.x[i] - c[i]) <= 1e-6);

    // restart at the optimum: nothing to do
    PgResult r2 = maximize_concave(f, grad, poly, r.x, {1e-9, 2000});
    CHECK(r2.iterations == 0);
    CHECK(r2.converged);
}

TEST_CASE("optimum on the budget face saturates the budget") {
    Polytope poly;
    poly.cap = {10.0, 10.0, 10.0};
    poly.groups = {{0, 1, 2}};
    poly.budget = {1.0};
    auto f = [&](std::span<const double> x) {
        double v = 0;
        for (double xi : x) v += std::log1p(std::max(xi, 0.0));
        return v;
    };
    auto grad = [&](std::span<const double> x, std::vector<double>& g) {
        g.resize(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) g[i] = 1.0 / (1.0 + std::max(x[i], 0.0));
    };
    PgResult r = maximize_concave(f, grad, poly, {0.0, 0.0, 0.0}, {1e-10, 4000});
    double sum = r.x[0] + r.x[1] + r.x[2];
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
    // symmetric problem: the multiplier balances all coordinates
    for (double v : r.x) CHECK(v == doctest::Approx(1.0 / 3.0).epsilon(1e-5));
}

TEST_CASE("single link sum-rate maximization puts the full budget on it") {
    SingleLink s = single_link(1.0, 1.0);
    RmaxResult rm = solve_rmax(s.sys, s.cfg);
    // analytic: rate increasing in p, cap = budget = 1
    double expect = std::log2(1.0 + 1.0 * 1.0 / 0.5);
    CHECK(rm.p[0] == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(rm.r_max == doctest::Approx(expect).epsilon(1e-9));
    // trace never decreases
    for (std::size_t i = 1; i < rm.trace.size(); ++i)
        CHECK(rm.trace[i] >= rm.trace[i - 1] - 1e-12);
}

TEST_CASE("zero-gain system reports zero rate and keeps the EPA start") {
    SingleLink s = single_link(0.0, 1.0);
    RmaxResult rm = solve_rmax(s.sys, s.cfg);
    CHECK(rm.r_max == 0.0);
    CHECK(rm.p[0] == doctest::Approx(s.sys.epa_start(s.cfg)[0]));
}

TEST_CASE("two interfering links match a brute-force grid search") {
    for (auto [c12, c21] : std::vector<std::pair<double, double>>{
             {0.3, 0.25}, {0.1, 0.4}, {0.05, 0.05}}) {
        TwoLink t = two_link(c12, c21);
        RmaxResult rm = solve_rmax(t.sys, t.cfg);

        double best = 0;
        const int grid = 100;
        for (int i = 0; i <= grid; ++i)
            for (int j = 0; j <= grid; ++j) {
                std::vector<double> p{i / double(grid), j / double(grid)};
                best = std::max(best, true_sum_rate(t.sys, p, nullptr));
            }
        CHECK(rm.r_max >= best * 0.99);
        CHECK(rm.r_max <= best * 1.01);
    }
}

TEST_CASE("minimum power for a target rate matches the closed form") {
    SingleLink s = single_link(1.0, 1.0);
    RmaxResult rm = solve_rmax(s.sys, s.cfg);
    QosPlan plan = plan_qos(s.sys, s.cfg);
    for (double lam : {0.25, 0.5, 0.8}) {
        double eps = lam * rm.r_max;
        MinPowerResult mp = solve_min_power(eps, s.sys, s.cfg, plan);
        REQUIRE(mp.feasible);
        // invert rate = B log2(1 + p g^2 / N): p = (2^(eps/B)-1) N / g^2
        double analytic = (std::pow(2.0, eps) - 1.0) * 0.5;
        CHECK(std::abs(mp.p[0] - analytic) / analytic <= 1e-3);
        CHECK(mp.sum_rate == doctest::Approx(eps).epsilon(1e-9));
    }
}

TEST_CASE("vanishing rate floor sends transmit power to zero") {
    TwoLink t = two_link(0.2, 0.3);
    QosPlan plan = plan_qos(t.sys, t.cfg);
    MinPowerResult mp = solve_min_power(1e-9, t.sys, t.cfg, plan);
    REQUIRE(mp.feasible);
    double ptot = mp.p[0] + mp.p[1];
    CHECK(ptot <= 1e-6);
    CHECK(mp.total_power == doctest::Approx(t.cfg.total_circuit_power()).epsilon(1e-6));
}

TEST_CASE("epsilon at R_max recovers the sum-rate solution") {
    TwoLink t = two_link(0.15, 0.2);
    RmaxResult rm = solve_rmax(t.sys, t.cfg);
    QosPlan plan = plan_qos(t.sys, t.cfg);
    MinPowerResult mp = solve_min_power(rm.r_max, t.sys, t.cfg, plan, rm.p);
    REQUIRE(mp.feasible);
    CHECK(mp.sum_rate >= rm.r_max * (1.0 - 1e-9));
    CHECK(mp.sum_rate <= rm.r_max * 1.02);
}

TEST_CASE("pareto sweep produces the full, sorted, non-dominated frontier") {
    Rng rng(555);
    ScenarioConfig cfg;
    LinkSystem sys = random_system(rng, cfg);
    cfg.lambda_step = 0.1;
    ParetoResult res = sweep_pareto(sys, cfg);

    CHECK(res.entries.size() == 10);
    CHECK(res.skipped_lambdas.empty());
    CHECK(res.entries.back().lambda == doctest::Approx(1.0));
    for (std::size_t i = 1; i < res.entries.size(); ++i) {
        CHECK(res.entries[i].lambda > res.entries[i - 1].lambda);
        CHECK(res.entries[i].sum_rate >=
              res.entries[i - 1].sum_rate * (1.0 - 1e-9));
        CHECK(res.entries[i].total_power >=
              res.entries[i - 1].total_power * (1.0 - 1e-9));
    }
    // pairwise non-domination (tolerance at solver accuracy)
    for (std::size_t i = 0; i < res.entries.size(); ++i)
        for (std::size_t k = 0; k < res.entries.size(); ++k) {
            if (i == k) continue;
            const auto& a = res.entries[i];
            const auto& b = res.entries[k];
            double rate_tol = 1e-9 * std::max(1.0, b.sum_rate);
            double pow_tol = 1e-9 * std::max(1.0, b.total_power);
            bool dominates = a.sum_rate >= b.sum_rate - rate_tol &&
                             a.total_power <= b.total_power + pow_tol &&
                             (a.sum_rate > b.sum_rate + rate_tol ||
                              a.total_power < b.total_power - pow_tol);
            CHECK_FALSE(dominates);
        }
    // best EE beats both endpoints
    REQUIRE(res.best_index >= 0);
    double best = res.entries[res.best_index].ee;
    CHECK(best >= res.entries.front().ee - 1e-15);
    CHECK(best >= res.entries.back().ee - 1e-15);
    // auxiliary variables are nonnegative
    for (const auto& e : res.entries)
        for (double yv : e.y) CHECK(yv >= 0.0);
}

TEST_CASE("lambda grid size follows ceil(1/step) with a clipped endpoint") {
    Rng rng(556);
    ScenarioConfig cfg;
    LinkSystem sys = random_system(rng, cfg);
    cfg.lambda_step = 0.3;
    ParetoResult res = sweep_pareto(sys, cfg);
    REQUIRE(res.entries.size() == 4);
    CHECK(res.entries[0].lambda == doctest::Approx(0.3));
    CHECK(res.entries[3].lambda == doctest::Approx(1.0));
}

TEST_CASE("min-power alternation trace is non-increasing") {
    Rng rng(31);
    for (int trial = 0; trial < 5; ++trial) {
        ScenarioConfig cfg;
        LinkSystem sys = random_system(rng, cfg);
        RmaxResult rm = solve_rmax(sys, cfg);
        QosPlan plan = plan_qos(sys, cfg);
        MinPowerResult mp = solve_min_power(0.6 * rm.r_max, sys, cfg, plan);
        REQUIRE(mp.feasible);
        for (std::size_t i = 1; i < mp.trace.size(); ++i)
            CHECK(mp.trace[i] <= mp.trace[i - 1] + 1e-6 * std::max(1.0, mp.trace[i - 1]));
    }
}

TEST_CASE("rmax trace is non-decreasing on random instances") {
    Rng rng(32);
    for (int trial = 0; trial < 5; ++trial) {
        ScenarioConfig cfg;
        LinkSystem sys = random_system(rng, cfg);
        RmaxResult rm = solve_rmax(sys, cfg);
        for (std::size_t i = 1; i < rm.trace.size(); ++i)
            CHECK(rm.trace[i] >= rm.trace[i - 1] - 1e-9 * std::max(1.0, rm.trace[i - 1]));
        // budgets hold exactly
        for (std::size_t g = 0; g < sys.group_links.size(); ++g) {
            double sum = 0;
            for (int l : sys.group_links[g]) sum += rm.p[l];
            CHECK(sum <= sys.group_budget[g] * (1 + 1e-9));
        }
        for (std::size_t l = 0; l < sys.size(); ++l) {
            CHECK(rm.p[l] >= 0.0);
            CHECK(rm.p[l] <= sys.links[l].cap * (1 + 1e-12));
        }
    }
}

TEST_CASE("unattainable rate floors are dropped with a warning record") {
    SingleLink s = single_link(1.0, 1.0);
    s.cfg.r_min = 100.0;  // far beyond the capacity of one unit-scale link
    QosPlan plan = plan_qos(s.sys, s.cfg);
    CHECK(plan.enforced.empty());
    REQUIRE(plan.dropped.size() == 1);
    CHECK(plan.dropped[0] == 0);
    RmaxResult rm = solve_rmax(s.sys, s.cfg);
    CHECK(rm.dropped_qos == plan.dropped);
    CHECK(rm.r_max > 0.0);  // still solves the unconstrained problem
}

TEST_CASE("feasible rate floors are honored by the power minimizer") {
    TwoLink t = two_link(0.1, 0.1);
    t.cfg.r_min = 0.5;  // each link can deliver this
    QosPlan plan = plan_qos(t.sys, t.cfg);
    CHECK(plan.enforced.size() == 2);
    RmaxResult rm = solve_rmax(t.sys, t.cfg);
    MinPowerResult mp = solve_min_power(0.3 * rm.r_max, t.sys, t.cfg, plan);
    REQUIRE(mp.feasible);
    std::vector<double> ur;
    true_sum_rate(t.sys, mp.p, &ur);
    CHECK(ur[0] >= t.cfg.r_min * (1 - 1e-9));
    CHECK(ur[1] >= t.cfg.r_min * (1 - 1e-9));
}
