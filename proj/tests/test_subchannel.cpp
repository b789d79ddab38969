#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <vector>

#include "rfvlc/rng.hpp"
#include "rfvlc/subchannel.hpp"

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

int total_grants(const SaResult& sa, int j, const ScenarioConfig& cfg) {
    int n = 0;
    for (int s = 0; s < cfg.subchannels_per_ap; ++s) n += sa.s_macro(j, s);
    for (int k = 0; k < cfg.pico_count; ++k)
        for (int s = 0; s < cfg.subchannels_per_ap; ++s) n += sa.s_pico(k, j, s);
    for (int v = 0; v < cfg.vlc_ap_count(); ++v)
        for (int s = 0; s < cfg.subchannels_per_ap; ++s) n += sa.s_vlc(v, j, s);
    return n;
}

} // namespace

TEST_CASE("sole assigned user receives every subchannel of its APs") {
    ScenarioConfig cfg;
    cfg.user_count = 2;
    cfg.pico_count = 1;
    cfg.room_count = 1;
    cfg.vlc_aps_per_room = 1;
    cfg.subchannels_per_ap = 4;
    ChannelState cs = make_channel(cfg, 1e-7);

    BinMat x_rf(2, 2);
    BinMat x_vlc(1, 2);
    x_rf(0, 0) = 1;  // user 0 on the macro AP
    x_rf(1, 1) = 1;  // user 1 on the pico
    x_vlc(0, 1) = 1; // and on the VLC AP

    SaResult sa = allocate_scg(x_rf, x_vlc, cs, cfg);
    validate_sa(sa, x_rf, x_vlc, cfg);
    for (int s = 0; s < 4; ++s) {
        CHECK(sa.s_macro(0, s) == 1);
        CHECK(sa.s_pico(0, 1, s) == 1);
        CHECK(sa.s_vlc(0, 1, s) == 1);
    }
    CHECK(sa.a[0] == 1);
    CHECK(sa.a[1] == 1);
}

TEST_CASE("per-subchannel argmax against a brute-force oracle") {
    ScenarioConfig cfg;
    cfg.user_count = 3;
    cfg.pico_count = 0;
    cfg.room_count = 0;
    cfg.subchannels_per_ap = 4;
    ChannelState cs = make_channel(cfg);
    Rng rng(5);
    for (int j = 0; j < 3; ++j)
        for (int s = 0; s < 4; ++s) cs.g_macro(j, s) = rng.uniform(1e-9, 1e-6);

    BinMat x_rf(1, 3);
    for (int j = 0; j < 3; ++j) x_rf(0, j) = 1;
    BinMat x_vlc(0, 3);

    SaResult sa = allocate_scg(x_rf, x_vlc, cs, cfg);
    validate_sa(sa, x_rf, x_vlc, cfg);
    double granted_gain = 0;
    for (int s = 0; s < 4; ++s) {
        int winner = -1;
        double best = -1;
        for (int j = 0; j < 3; ++j)
            if (cs.g_macro(j, s) > best) {
                best = cs.g_macro(j, s);
                winner = j;
            }
        CHECK(sa.s_macro(winner, s) == 1);
        granted_gain += best;
    }

    // enumeration over every single-user-per-subchannel assignment
    double best_total = 0;
    for (int c = 0; c < 4 * 4 * 4 * 4; ++c) {
        int rem = c;
        double total = 0;
        for (int s = 0; s < 4; ++s) {
            int pick = rem % 4;
            rem /= 4;
            if (pick < 3) total += cs.g_macro(pick, s);
        }
        best_total = std::max(best_total, total);
    }
    CHECK(granted_gain == doctest::Approx(best_total).epsilon(1e-12));
}

TEST_CASE("tiers are independent: zero optical gain keeps macro grants") {
    ScenarioConfig cfg;
    cfg.user_count = 1;
    cfg.pico_count = 0;
    cfg.room_count = 1;
    cfg.vlc_aps_per_room = 1;
    cfg.subchannels_per_ap = 3;
    ChannelState cs = make_channel(cfg);
    for (int s = 0; s < 3; ++s) cs.g_macro(0, s) = 1e-7;
    // optical tensors stay zero

    BinMat x_rf(1, 1);
    x_rf(0, 0) = 1;
    BinMat x_vlc(1, 1);
    x_vlc(0, 0) = 1;
    SaResult sa = allocate_scg(x_rf, x_vlc, cs, cfg);
    for (int s = 0; s < 3; ++s) CHECK(sa.s_macro(0, s) == 1);
    CHECK(sa.a[0] == 1);
}

TEST_CASE("ties break to the lower user index") {
    ScenarioConfig cfg;
    cfg.user_count = 2;
    cfg.pico_count = 0;
    cfg.room_count = 0;
    cfg.subchannels_per_ap = 2;
    ChannelState cs = make_channel(cfg, 5e-8);  // identical gains

    BinMat x_rf(1, 2);
    x_rf(0, 0) = x_rf(0, 1) = 1;
    BinMat x_vlc(0, 2);
    SaResult sa = allocate_scg(x_rf, x_vlc, cs, cfg);
    CHECK(sa.s_macro(0, 0) == 1);
    CHECK(sa.s_macro(0, 1) == 1);
    CHECK(sa.a[1] == 0);
}

TEST_CASE("qos-first serves the weaker user before seconds are handed out") {
    ScenarioConfig cfg;
    cfg.user_count = 2;
    cfg.pico_count = 0;
    cfg.room_count = 0;
    cfg.subchannels_per_ap = 2;
    cfg.r_min = 1e12;  // unreachable: both users stay hungry
    ChannelState cs = make_channel(cfg);
    cs.g_macro(0, 0) = 1e-6;
    cs.g_macro(0, 1) = 9e-7;
    cs.g_macro(1, 0) = 5e-7;
    cs.g_macro(1, 1) = 4e-7;

    BinMat x_rf(1, 2);
    x_rf(0, 0) = x_rf(0, 1) = 1;
    BinMat x_vlc(0, 2);

    // the channel-quality rule starves user 1
    SaResult scg = allocate_scg(x_rf, x_vlc, cs, cfg);
    CHECK(total_grants(scg, 1, cfg) == 0);

    // the QoS-first rule gives one subchannel to each
    SaResult sa = allocate_qos_first(x_rf, x_vlc, cs, cfg);
    validate_sa(sa, x_rf, x_vlc, cfg);
    CHECK(total_grants(sa, 0, cfg) == 1);
    CHECK(total_grants(sa, 1, cfg) == 1);
    // user 0 grabbed its better subchannel first
    CHECK(sa.s_macro(0, 0) == 1);
    CHECK(sa.s_macro(1, 1) == 1);
    CHECK(sa.a[0] == 1);
    CHECK(sa.a[1] == 1);
}

TEST_CASE("qos-first with r_min zero reduces to the channel-quality rule") {
    ScenarioConfig cfg;
    cfg.user_count = 4;
    cfg.pico_count = 1;
    cfg.room_count = 0;
    cfg.subchannels_per_ap = 3;
    cfg.r_min = 0.0;
    ChannelState cs = make_channel(cfg);
    Rng rng(8);
    for (int j = 0; j < 4; ++j)
        for (int s = 0; s < 3; ++s) {
            cs.g_macro(j, s) = rng.uniform(1e-9, 1e-6);
            cs.g_pico(0, j, s) = rng.uniform(1e-9, 1e-6);
        }
    BinMat x_rf(2, 4);
    x_rf(0, 0) = x_rf(0, 1) = 1;
    x_rf(1, 2) = x_rf(1, 3) = 1;
    BinMat x_vlc(0, 4);

    SaResult qos = allocate_qos_first(x_rf, x_vlc, cs, cfg);
    SaResult scg = allocate_scg(x_rf, x_vlc, cs, cfg);
    CHECK(qos.s_macro == scg.s_macro);
    CHECK(qos.s_pico == scg.s_pico);
    CHECK(qos.a == scg.a);
}

TEST_CASE("qos-first exhausts channels when the floor is unreachable") {
    ScenarioConfig cfg;
    cfg.user_count = 3;
    cfg.pico_count = 0;
    cfg.room_count = 0;
    cfg.subchannels_per_ap = 4;
    cfg.r_min = 1e15;
    ChannelState cs = make_channel(cfg, 1e-7);
    BinMat x_rf(1, 3);
    for (int j = 0; j < 3; ++j) x_rf(0, j) = 1;
    BinMat x_vlc(0, 3);

    SaResult sa = allocate_qos_first(x_rf, x_vlc, cs, cfg);
    int granted = 0;
    for (int j = 0; j < 3; ++j) granted += total_grants(sa, j, cfg);
    CHECK(granted == 4);  // every macro subchannel spent
}

TEST_CASE("validate_sa names the violated constraint") {
    ScenarioConfig cfg;
    cfg.user_count = 2;
    cfg.pico_count = 0;
    cfg.room_count = 0;
    cfg.subchannels_per_ap = 2;
    ChannelState cs = make_channel(cfg, 1e-7);
    BinMat x_rf(1, 2);
    x_rf(0, 0) = 1;  // user 1 not assigned
    BinMat x_vlc(0, 2);
    SaResult sa = allocate_scg(x_rf, x_vlc, cs, cfg);
    CHECK_NOTHROW(validate_sa(sa, x_rf, x_vlc, cfg));

    SUBCASE("duplicated grant violates C4") {
        BinMat x2 = x_rf;
        x2(0, 1) = 1;  // both users assigned, so only the sharing is illegal
        SaResult bad = sa;
        bad.s_macro(0, 0) = 1;
        bad.s_macro(1, 0) = 1;
        bad.a[1] = 1;
        CHECK_THROWS_WITH_AS(validate_sa(bad, x2, x_vlc, cfg), doctest::Contains("C4"),
                             ConstraintError);
    }
    SUBCASE("grant to an unassigned user violates C1") {
        SaResult bad = sa;
        bad.s_macro(0, 0) = 0;
        bad.s_macro(1, 0) = 1;
        bad.a[1] = 1;
        CHECK_THROWS_WITH_AS(validate_sa(bad, x_rf, x_vlc, cfg), doctest::Contains("C1"),
                             ConstraintError);
    }
    SUBCASE("outage flag out of sync violates C5") {
        SaResult bad = sa;
        bad.a[0] = 0;
        CHECK_THROWS_WITH_AS(validate_sa(bad, x_rf, x_vlc, cfg), doctest::Contains("C5"),
                             ConstraintError);
    }
}

TEST_CASE("outage flags match grant counts on random instances") {
    Rng rng(13);
    for (int trial = 0; trial < 20; ++trial) {
        ScenarioConfig cfg;
        cfg.user_count = 1 + static_cast<int>(rng.uniform() * 6);
        cfg.pico_count = static_cast<int>(rng.uniform() * 3);
        cfg.room_count = static_cast<int>(rng.uniform() * 2);
        cfg.subchannels_per_ap = 1 + static_cast<int>(rng.uniform() * 4);
        ChannelState cs = make_channel(cfg);
        for (auto& g : cs.g_macro.data()) g = rng.uniform(0, 1e-6);
        for (auto& g : cs.g_pico.data()) g = rng.uniform(0, 1e-6);
        for (auto& g : cs.g_vlc.data()) g = rng.uniform(0, 1e-5);

        BinMat x_rf(cfg.rf_ap_count(), cfg.user_count);
        BinMat x_vlc(cfg.vlc_ap_count(), cfg.user_count);
        for (int j = 0; j < cfg.user_count; ++j) {
            x_rf(static_cast<int>(rng.uniform() * cfg.rf_ap_count()), j) = 1;
            if (cfg.vlc_ap_count() > 0 && rng.uniform() < 0.5)
                x_vlc(static_cast<int>(rng.uniform() * cfg.vlc_ap_count()), j) = 1;
        }
        SaResult sa = allocate_scg(x_rf, x_vlc, cs, cfg);
        validate_sa(sa, x_rf, x_vlc, cfg);
        for (int j = 0; j < cfg.user_count; ++j)
            CHECK((sa.a[j] == 1) == (total_grants(sa, j, cfg) > 0));
    }
}
