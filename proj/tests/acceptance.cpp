// End-to-end acceptance checks. Each check prints one PASS/FAIL line; the
// process exits nonzero if any check fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "sepm/attacks.hpp"
#include "sepm/fock.hpp"
#include "sepm/keyrate.hpp"
#include "sepm/montecarlo.hpp"
#include "sepm/protocol.hpp"

#include "circuits.hpp"
#include "keyrate_oracle.hpp"

namespace {

int g_failures = 0;

void report(const std::string& name, bool ok, double seconds) {
    std::printf("%s %-42s (%.2f s)\n", ok ? "PASS" : "FAIL", name.c_str(), seconds);
    if (!ok) ++g_failures;
}

void run_check(const std::string& name, double budget_s,
               const std::function<bool()>& body) {
    const auto t0 = std::chrono::steady_clock::now();
    bool ok = false;
    try {
        ok = body();
    } catch (const std::exception& e) {
        std::printf("     %s threw: %s\n", name.c_str(), e.what());
        ok = false;
    }
    const double dt =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (dt > budget_s) {
        std::printf("     %s exceeded the %.0f s budget\n", name.c_str(), budget_s);
        ok = false;
    }
    report(name, ok, dt);
}

bool bell_formula() {
    using namespace sepm;
    for (double e : {0.0, 0.05, 0.1, 0.2}) {
        const double s = chsh_value(collective_attack_state(e).rho_ab());
        if (std::abs(s - 2.0 * std::sqrt(2.0) * (1.0 - 2.0 * e)) > 1e-10) return false;
    }
    double lo = 0.0, hi = 0.5;
    for (int it = 0; it < 50; ++it) {
        const double mid = 0.5 * (lo + hi);
        (chsh_value(collective_attack_state(mid).rho_ab()) > 2.0 ? lo : hi) = mid;
    }
    return std::abs(lo - 0.1464) <= 5e-4;
}

bool coincidence_oracle() {
    using namespace sepm;
    for (double eta : {0.1, 0.5, 0.9}) {
        for (double gamma : {0.01, 0.1}) {
            for (double pa : kPhaseSet) {
                for (double pb : kPhaseSet) {
                    const FockState state = circuits::coincidence_circuit(gamma, eta, pa, pb);
                    const auto table =
                        coincidence_distribution(gamma, eta, Settings{pa, pb, 0, 0});
                    int slot = 0;
                    for (int i = 1; i <= 2; ++i) {
                        for (int j = 1; j <= 2; ++j, ++slot) {
                            const double got = circuits::coincidence_mass(state, i, j);
                            const double expected = table.joint[slot];
                            if (std::abs(got - expected) > 1e-10 * expected) return false;
                        }
                    }
                }
            }
        }
    }
    return true;
}

bool bs_oracle() {
    using namespace sepm;
    for (double eta : {0.1, 0.5, 0.9}) {
        for (double gamma : {0.01, 0.1}) {
            for (double theta : {0.0, kPi}) {
                const FockState state =
                    circuits::bs_attack_circuit(gamma, eta, theta, theta, 0.0, 0.0);
                for (int det = 1; det <= 2; ++det) {
                    const double expected = bs_joint_prob(eta, gamma, theta, det);
                    const double got = circuits::bs_event_mass(state, det);
                    if (std::abs(got - expected) > 1e-10 * expected) return false;
                }
            }
        }
    }
    for (double gamma : {0.001, 0.01, 0.1}) {
        if (bs_guess_probability(1.0, gamma) != 0.5) return false;
        if (std::abs(holevo_bs(1.0, gamma)) > 1e-15) return false;
    }
    return true;
}

bool rate_reproduction() {
    using namespace sepm;
    ProtocolParams params;  // the simulation defaults are the reference set
    const oracle::Params ref;

    const double r0 = key_rate(params, 0.0).rate;
    const double r0_ref = oracle::key_rate(ref, 0.0);
    if (std::abs(r0 - r0_ref) > 0.05 * r0_ref) return false;
    if (std::abs(r0 - 8.8e-9) > 0.05 * 8.8e-9) return false;

    const auto points = sweep(params, distance_grid(0.0, 400.0, 1.0));
    for (size_t i = 1; i < points.size(); ++i)
        if (points[i].rate > points[i - 1].rate + 1e-30) return false;
    for (const auto& p : points) {
        const double ref_rate = oracle::key_rate(ref, p.x_km);
        const double scale = std::max(ref_rate, 1e-30);
        if (std::abs(p.rate - ref_rate) > 0.05 * scale + 1e-30) return false;
    }

    // Weaker oscillators reach farther through the gamma^4 interference
    // background. At the default dark rate the dark-count floor masks this
    // between 0.001 and 0.002 (it penalizes the weaker oscillator more), so
    // the pairing is checked with the background mechanism isolated and the
    // default-parameter trend is checked where it dominates.
    ProtocolParams no_dark = params;
    no_dark.p_dark = 0.0;
    ProtocolParams no_dark_wide = no_dark;
    no_dark_wide.gamma = 0.002;
    if (cutoff_distance(no_dark) <= cutoff_distance(no_dark_wide)) return false;
    ProtocolParams wide = params;
    wide.gamma = 0.002;
    ProtocolParams wider = params;
    wider.gamma = 0.004;
    if (cutoff_distance(wide) <= cutoff_distance(wider)) return false;

    ProtocolParams off = params;
    off.include_bs_attack = false;
    const auto free_points = sweep(off, distance_grid(0.0, 400.0, 1.0));
    for (size_t i = 0; i < points.size(); ++i)
        if (free_points[i].rate < points[i].rate - 1e-30) return false;
    return true;
}

bool loss_scaling() {
    using namespace sepm;
    ProtocolParams params;
    // least-squares slope of log10 r against total distance over 50-150 km
    std::vector<double> xs, ys;
    for (double x = 50.0; x <= 150.0; x += 5.0) {
        xs.push_back(2.0 * x);
        ys.push_back(std::log10(key_rate(params, x).rate));
    }
    double mx = 0.0, my = 0.0;
    for (size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= xs.size();
    my /= ys.size();
    double num = 0.0, den = 0.0;
    for (size_t i = 0; i < xs.size(); ++i) {
        num += (xs[i] - mx) * (ys[i] - my);
        den += (xs[i] - mx) * (xs[i] - mx);
    }
    const double slope = num / den;
    const double expected = -params.beta_l / 20.0;
    return std::abs(slope - expected) <= 0.02 * std::abs(expected);
}

bool sampling_consistency() {
    using namespace sepm;
    McConfig cfg;
    cfg.seed = 1;
    cfg.n_coincidences = 1000000;
    cfg.eta = 0.01;

    const auto serial = run_session(cfg);
    McConfig parallel = cfg;
    parallel.workers = 4;
    const auto threaded = run_session(parallel);
    const auto report = summarize(serial);
    if (report.to_json() != summarize(threaded).to_json()) return false;

    const auto result = compare_to_analytic(report, cfg.params, cfg.eta);
    const double v = cfg.eta / (cfg.eta + cfg.params.gamma * cfg.params.gamma);
    if (std::abs(result.chsh_S.analytic - 2.0 * std::sqrt(2.0) * v) > 1e-12) return false;
    return result.qber.pass && result.chsh_S.pass;
}

bool invariants() {
    using namespace sepm;
    std::mt19937 rng(20260823);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    std::uniform_real_distribution<double> amp(-1.0, 1.0);

    auto random_two_mode = [&](int max_total) {
        FockState s(2, 2);
        AmplitudeVector amps = AmplitudeVector::Zero(s.dim());
        for (Eigen::Index idx = 0; idx < s.dim(); ++idx) {
            const auto occ = s.occupation_of(idx);
            if (occ[0] + occ[1] > max_total) continue;
            amps[idx] = Complex(amp(rng), amp(rng));
        }
        return normalize(FockState::from_amplitudes(2, 2, std::move(amps)));
    };

    for (int trial = 0; trial < 1000; ++trial) {
        // normalization and beam-splitter unitarity
        const FockState a = random_two_mode(2);
        const FockState b = random_two_mode(2);
        if (std::abs(a.squared_norm() - 1.0) > 1e-12) return false;
        const FockState ua = apply_beamsplitter(a, 0, 1);
        const FockState ub = apply_beamsplitter(b, 0, 1);
        if (std::abs(ua.squared_norm() - 1.0) > 1e-12) return false;
        if (std::abs(inner_product(ua, ub) - inner_product(a, b)) > 1e-12) return false;

        // loss composition on click statistics
        const double eta1 = uni(rng), eta2 = uni(rng);
        DetectorConfig det{0.7, 1e-6, {0, 1}};
        const auto once = click_distribution(loss_channel(a, 0, eta1 * eta2), det);
        const auto twice =
            click_distribution(loss_channel(loss_channel(a, 0, eta1), 0, eta2), det);
        for (size_t k = 0; k < once.probs.size(); ++k)
            if (std::abs(once.probs[k] - twice.probs[k]) > 1e-12) return false;
        if (std::abs(once.total() - 1.0) > 1e-12) return false;

        // sift partition: every settings/outcome combination has one class
        std::uniform_int_distribution<int> phase_idx(0, 3);
        std::uniform_int_distribution<int> bit(0, 1);
        const Settings s{kPhaseSet[phase_idx(rng)], kPhaseSet[phase_idx(rng)], bit(rng),
                         bit(rng)};
        const Outcome outcome{true, 1 + bit(rng), 1 + bit(rng)};
        const SiftClass cls = sift(s, outcome, bit(rng) == 1);
        if (cls != SiftClass::kept && cls != SiftClass::check &&
            cls != SiftClass::chsh_sample && cls != SiftClass::discarded)
            return false;
        if (sift(s, Outcome{false, 0, 0}) != SiftClass::discarded) return false;

        // probability-table closure
        const double gamma = 0.2 * uni(rng);
        const double eta = 0.01 + 0.99 * uni(rng);
        const auto table = coincidence_distribution(gamma, eta, s);
        double cond = 0.0, joint = 0.0;
        for (int k = 0; k < 4; ++k) {
            if (table.joint[k] < 0.0 || table.conditional[k] < 0.0) return false;
            cond += table.conditional[k];
            joint += table.joint[k];
        }
        if (std::abs(joint - table.total) > 1e-15) return false;
        if (table.total > 0.0 && std::abs(cond - 1.0) > 1e-12) return false;
    }
    return true;
}

}  // namespace

int main() {
    run_check("bell-function formula and threshold", 1.0, bell_formula);
    run_check("coincidence-circuit oracle equivalence", 10.0, coincidence_oracle);
    run_check("splitting-attack oracle equivalence", 10.0, bs_oracle);
    run_check("rate-curve reproduction vs reference", 5.0, rate_reproduction);
    run_check("loss exponent of the rate curve", 5.0, loss_scaling);
    run_check("sampled session vs closed form", 30.0, sampling_consistency);
    run_check("randomized invariant suite", 60.0, invariants);

    if (g_failures > 0) {
        std::printf("%d acceptance check(s) failed\n", g_failures);
        return 1;
    }
    std::printf("all acceptance checks passed\n");
    return 0;
}
