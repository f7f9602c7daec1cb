#include "sepm/protocol.hpp"

#include <cmath>
#include <stdexcept>

namespace sepm {

namespace {

bool phase_equal(double a, double b) { return std::abs(a - b) < 1e-9; }

}  // namespace

CoincidenceTable coincidence_distribution(double gamma, double eta, const Settings& settings) {
    if (gamma < 0.0)
        throw std::invalid_argument("coincidence_distribution: gamma must be >= 0");
    if (eta < 0.0 || eta > 1.0)
        throw std::invalid_argument("coincidence_distribution: eta must be in [0,1]");
    const double alpha = settings.phi_a + settings.k_a * kPi;
    const double beta = settings.phi_b + settings.k_b * kPi;
    const double wave = gamma * gamma * eta / 4.0;
    const double particle = std::pow(gamma, 4) / 4.0;
    const double c = std::cos(alpha - beta);

    CoincidenceTable t;
    int slot = 0;
    for (int i = 1; i <= 2; ++i) {
        for (int j = 1; j <= 2; ++j) {
            const double sign = ((i + j) % 2 == 0) ? 1.0 : -1.0;
            t.joint[slot++] = wave * (1.0 + sign * c) + particle;
        }
    }
    t.total = t.joint[0] + t.joint[1] + t.joint[2] + t.joint[3];
    for (int k = 0; k < 4; ++k)
        t.conditional[k] = (t.total > 0.0) ? t.joint[k] / t.total : 0.0;
    return t;
}

SiftClass sift(const Settings& settings, const Outcome& outcome, bool check_draw) {
    if (!outcome.coincidence) return SiftClass::discarded;
    if (phase_equal(settings.phi_a, settings.phi_b))
        return check_draw ? SiftClass::check : SiftClass::kept;
    const double diff = std::abs(settings.phi_a - settings.phi_b);
    if (phase_equal(diff, kPi / 4) || phase_equal(diff, 3 * kPi / 4))
        return SiftClass::chsh_sample;
    return SiftClass::discarded;
}

int bob_bit_after_flip(const Settings& settings, const Outcome& outcome) {
    return settings.k_b ^ ((outcome.i + outcome.j) % 2);
}

double estimate_qber(std::span<const std::pair<int, int>> check_bits) {
    if (check_bits.empty())
        throw std::invalid_argument("estimate_qber: no check bits");
    std::int64_t errors = 0;
    for (const auto& [a, b] : check_bits)
        if (a != b) ++errors;
    return static_cast<double>(errors) / static_cast<double>(check_bits.size());
}

double chsh_from_counts(const ChshCounts& counts) {
    std::array<double, 4> corr{};
    for (int p = 0; p < 4; ++p) {
        const std::int64_t even = counts.counts[p][0];
        const std::int64_t odd = counts.counts[p][1];
        if (even + odd == 0)
            throw std::invalid_argument("chsh_from_counts: setting pair has no counts");
        corr[p] = static_cast<double>(even - odd) / static_cast<double>(even + odd);
    }
    return corr[0] + corr[1] + corr[2] - corr[3];
}

SessionStats session_expectations(const ProtocolParams& params, double eta) {
    const double g2 = params.gamma * params.gamma;
    if (eta + g2 <= 0.0)
        throw std::invalid_argument("session_expectations: eta and gamma both zero");
    SessionStats s;
    s.visibility = eta / (eta + g2);
    s.qber = 0.5 * (1.0 - s.visibility);
    s.chsh_S = 2.0 * std::sqrt(2.0) * s.visibility;
    for (int p = 0; p < 4; ++p)
        s.correlations[p] =
            s.visibility * std::cos(kChshPairs[p].first - kChshPairs[p].second);
    return s;
}

}  // namespace sepm
