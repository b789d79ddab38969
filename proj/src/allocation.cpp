#include "rfvlc/allocation.hpp"

#include <cmath>
#include <sstream>

namespace rfvlc {

namespace {

std::string idx2(int a, int b) {
    std::ostringstream ss;
    ss << "(" << a << "," << b << ")";
    return ss.str();
}

std::string idx3(int a, int b, int c) {
    std::ostringstream ss;
    ss << "(" << a << "," << b << "," << c << ")";
    return ss.str();
}

constexpr double kBudgetSlack = 1e-9; // relative slack for floating-point sums

} // namespace

Allocation Allocation::zeros(const ScenarioConfig& config) {
    Allocation al;
    const int J = config.user_count;
    const int S = config.subchannels_per_ap;
    const int P = config.pico_count;
    const int V = config.vlc_ap_count();
    al.x_rf = BinMat(1 + P, J);
    al.x_vlc = BinMat(V, J);
    al.s_macro = BinMat(J, S);
    al.s_pico = BinTen3(P, J, S);
    al.s_vlc = BinTen3(V, J, S);
    al.p_macro = Mat(J, S);
    al.p_pico = Ten3(P, J, S);
    al.p_vlc = Ten3(V, J, S);
    al.a.assign(J, 0);
    return al;
}

int Allocation::subchannel_count(int j) const {
    int n = 0;
    for (std::size_t s = 0; s < s_macro.cols(); ++s) n += s_macro(j, s);
    for (std::size_t k = 0; k < s_pico.dim0(); ++k)
        for (std::size_t s = 0; s < s_pico.dim2(); ++s) n += s_pico(k, j, s);
    for (std::size_t v = 0; v < s_vlc.dim0(); ++v)
        for (std::size_t s = 0; s < s_vlc.dim2(); ++s) n += s_vlc(v, j, s);
    return n;
}

double Allocation::user_power(int j) const {
    double p = 0;
    for (std::size_t s = 0; s < p_macro.cols(); ++s) p += p_macro(j, s);
    for (std::size_t k = 0; k < p_pico.dim0(); ++k)
        for (std::size_t s = 0; s < p_pico.dim2(); ++s) p += p_pico(k, j, s);
    for (std::size_t v = 0; v < p_vlc.dim0(); ++v)
        for (std::size_t s = 0; s < p_vlc.dim2(); ++s) p += p_vlc(v, j, s);
    return p;
}

void validate_structure(const Allocation& al, const ScenarioConfig& cfg, AssignmentMode mode) {
    const int J = cfg.user_count;
    const int S = cfg.subchannels_per_ap;
    const int P = cfg.pico_count;
    const int V = cfg.vlc_ap_count();

    // C1: a subchannel grant requires the AP assignment.
    for (int j = 0; j < J; ++j)
        for (int s = 0; s < S; ++s)
            if (al.s_macro(j, s) && !al.x_rf(0, j))
                throw ConstraintError("C1", "macro subchannel granted to unassigned user " + idx2(j, s));
    for (int k = 0; k < P; ++k)
        for (int j = 0; j < J; ++j)
            for (int s = 0; s < S; ++s)
                if (al.s_pico(k, j, s) && !al.x_rf(1 + k, j))
                    throw ConstraintError("C1", "pico grant without assignment " + idx3(k, j, s));
    for (int v = 0; v < V; ++v)
        for (int j = 0; j < J; ++j)
            for (int s = 0; s < S; ++s)
                if (al.s_vlc(v, j, s) && !al.x_vlc(v, j))
                    throw ConstraintError("C1", "vlc grant without assignment " + idx3(v, j, s));

    // C2/C9: 0 <= p <= s * budget, per subchannel. Index strings are built
    // only on failure; this runs over every tensor entry.
    auto check_power = [](double p, int granted, double cap, const char* where,
                          const std::string& idx) {
        if (p < 0) throw ConstraintError("C9", std::string(where) + " negative power " + idx);
        if (p > granted * cap * (1.0 + kBudgetSlack))
            throw ConstraintError("C2", std::string(where) + " power above cap " + idx);
    };
    for (int j = 0; j < J; ++j)
        for (int s = 0; s < S; ++s) {
            double p = al.p_macro(j, s);
            if (p < 0 || p > al.s_macro(j, s) * cfg.p_macro_budget * (1.0 + kBudgetSlack))
                check_power(p, al.s_macro(j, s), cfg.p_macro_budget, "macro", idx2(j, s));
        }
    for (int k = 0; k < P; ++k)
        for (int j = 0; j < J; ++j)
            for (int s = 0; s < S; ++s) {
                double p = al.p_pico(k, j, s);
                if (p < 0 || p > al.s_pico(k, j, s) * cfg.p_pico_budget * (1.0 + kBudgetSlack))
                    check_power(p, al.s_pico(k, j, s), cfg.p_pico_budget, "pico", idx3(k, j, s));
            }
    for (int v = 0; v < V; ++v)
        for (int j = 0; j < J; ++j)
            for (int s = 0; s < S; ++s) {
                double p = al.p_vlc(v, j, s);
                if (p < 0 || p > al.s_vlc(v, j, s) * cfg.p_vlc_budget * (1.0 + kBudgetSlack))
                    check_power(p, al.s_vlc(v, j, s), cfg.p_vlc_budget, "vlc", idx3(v, j, s));
            }

    // C3: per-AP power budget.
    double macro_sum = 0;
    for (int j = 0; j < J; ++j)
        for (int s = 0; s < S; ++s) macro_sum += al.p_macro(j, s);
    if (macro_sum > cfg.p_macro_budget * (1.0 + kBudgetSlack))
        throw ConstraintError("C3", "macro budget exceeded");
    for (int k = 0; k < P; ++k) {
        double sum = 0;
        for (int j = 0; j < J; ++j)
            for (int s = 0; s < S; ++s) sum += al.p_pico(k, j, s);
        if (sum > cfg.p_pico_budget * (1.0 + kBudgetSlack))
            throw ConstraintError("C3", "pico budget exceeded at ap " + std::to_string(k));
    }
    for (int v = 0; v < V; ++v) {
        double sum = 0;
        for (int j = 0; j < J; ++j)
            for (int s = 0; s < S; ++s) sum += al.p_vlc(v, j, s);
        if (sum > cfg.p_vlc_budget * (1.0 + kBudgetSlack))
            throw ConstraintError("C3", "vlc budget exceeded at ap " + std::to_string(v));
    }

    // C4: at most one user per (AP, subchannel).
    for (int s = 0; s < S; ++s) {
        int n = 0;
        for (int j = 0; j < J; ++j) n += al.s_macro(j, s);
        if (n > 1) throw ConstraintError("C4", "macro subchannel " + std::to_string(s) + " shared");
    }
    for (int k = 0; k < P; ++k)
        for (int s = 0; s < S; ++s) {
            int n = 0;
            for (int j = 0; j < J; ++j) n += al.s_pico(k, j, s);
            if (n > 1) throw ConstraintError("C4", "pico subchannel shared " + idx2(k, s));
        }
    for (int v = 0; v < V; ++v)
        for (int s = 0; s < S; ++s) {
            int n = 0;
            for (int j = 0; j < J; ++j) n += al.s_vlc(v, j, s);
            if (n > 1) throw ConstraintError("C4", "vlc subchannel shared " + idx2(v, s));
        }

    // C5/C12: outage flags match the grant counts.
    for (int j = 0; j < J; ++j) {
        int grants = al.subchannel_count(j);
        if (al.a[j] == 0 && grants > 0)
            throw ConstraintError("C5", "user " + std::to_string(j) + " flagged out but holds grants");
        if (al.a[j] == 1 && grants == 0)
            throw ConstraintError("C5", "user " + std::to_string(j) + " active without grants");
        if (al.a[j] > 1) throw ConstraintError("C12", "outage flag not binary");
    }

    // C6/C7 (or the hybrid single-AP rule).
    for (int j = 0; j < J; ++j) {
        int rf = 0, vlc = 0;
        for (int k = 0; k < 1 + P; ++k) rf += al.x_rf(k, j);
        for (int v = 0; v < V; ++v) vlc += al.x_vlc(v, j);
        if (mode == AssignmentMode::Aggregated) {
            if (rf != 1)
                throw ConstraintError("C6", "user " + std::to_string(j) + " holds " +
                                                std::to_string(rf) + " RF APs");
            if (vlc > 1)
                throw ConstraintError("C7", "user " + std::to_string(j) + " holds " +
                                                std::to_string(vlc) + " VLC APs");
        } else {
            if (rf + vlc != 1)
                throw ConstraintError("C6", "hybrid user " + std::to_string(j) + " holds " +
                                                std::to_string(rf + vlc) + " APs");
        }
    }
}

} // namespace rfvlc
