#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <utility>

#include "sepm/params.hpp"

namespace sepm {

inline constexpr double kPi = 3.141592653589793238462643383279502884;

/// The four announced phases each party draws from.
inline constexpr std::array<double, 4> kPhaseSet = {-kPi / 4, 0.0, kPi / 4, kPi / 2};

struct Settings {
    double phi_a = 0.0;
    double phi_b = 0.0;
    int k_a = 0;  ///< Alice's key bit
    int k_b = 0;  ///< Bob's key bit
};

/// Coincidence outcome: detector ordinals i, j in {1,2}, or no coincidence.
struct Outcome {
    bool coincidence = false;
    int i = 0;
    int j = 0;
};

enum class SiftClass { kept, check, chsh_sample, discarded };

struct RoundRecord {
    Settings settings;
    Outcome outcome;
    SiftClass sift = SiftClass::discarded;
};

/// Probabilities of the four coincidence outcomes for one setting choice:
/// p(i,j) = (gamma^2 eta / 4)[1 + (-1)^{i+j} cos(alpha - beta)] + gamma^4/4
/// with alpha = phi_a + k_a*pi, beta = phi_b + k_b*pi.
struct CoincidenceTable {
    /// joint probabilities in order (1,1), (1,2), (2,1), (2,2)
    std::array<double, 4> joint{};
    /// same outcomes normalized over the four coincidences
    std::array<double, 4> conditional{};
    double total = 0.0;
};

CoincidenceTable coincidence_distribution(double gamma, double eta, const Settings& settings);

/// Sifting rule. Matched phases with a coincidence give a key candidate,
/// split into kept/check by `check_draw`; |phi_a - phi_b| in {pi/4, 3pi/4}
/// gives a Bell-test sample; everything else is discarded.
SiftClass sift(const Settings& settings, const Outcome& outcome, bool check_draw = false);

/// Bob's announced bit after the flip rule: k_b xor (i+j odd).
int bob_bit_after_flip(const Settings& settings, const Outcome& outcome);

/// Disagreement fraction of check bits (bit_a, bit_b), flip rule already
/// applied. Throws on empty input.
double estimate_qber(std::span<const std::pair<int, int>> check_bits);

/// The four setting pairs used for the Bell function, in S-combination order:
/// S = E(0,pi/4) + E(0,-pi/4) + E(pi/2,pi/4) - E(pi/2,-pi/4).
inline constexpr std::array<std::pair<double, double>, 4> kChshPairs = {{
    {0.0, kPi / 4}, {0.0, -kPi / 4}, {kPi / 2, kPi / 4}, {kPi / 2, -kPi / 4}}};

/// Coincidence counts per (setting pair, parity). Parity is the key-adjusted
/// detector parity (i + j + k_a + k_b) mod 2; index 0 counts even events.
struct ChshCounts {
    std::array<std::array<std::int64_t, 2>, 4> counts{};
};

/// E(a,b) = (N_even - N_odd)/(N_even + N_odd) per pair, combined into S.
/// Throws if any pair has zero total counts.
double chsh_from_counts(const ChshCounts& counts);

struct SessionStats {
    std::int64_t sifted_count = 0;
    double qber = 0.0;
    double chsh_S = 0.0;
    double visibility = 0.0;
    std::array<double, 4> correlations{};  ///< E for the four kChshPairs
};

/// Closed-form expectations for the session estimators. The particle-like
/// gamma^4 term dilutes every correlation by V = 1/(1 + gamma^2/eta):
/// E(dphi) = V cos(dphi), QBER = (1-V)/2, S = 2 sqrt(2) V.
SessionStats session_expectations(const ProtocolParams& params, double eta);

}  // namespace sepm
