#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "sepm/params.hpp"
#include "sepm/protocol.hpp"

namespace sepm {

/// Stochastic session sampled conditional-on-coincidence: raw per-pulse rates
/// are ~1e-8 and are handled analytically by the key-rate model, while every
/// distributional claim about the estimators is testable at desk scale.
struct McConfig {
    std::uint64_t seed = 1;
    std::int64_t n_coincidences = 100000;
    ProtocolParams params{};
    double eta = 0.01;
    int workers = 1;
};

struct McReport {
    std::int64_t rounds = 0;
    std::int64_t kept = 0;
    std::int64_t check = 0;
    std::int64_t chsh_samples = 0;
    std::int64_t discarded = 0;
    double qber = 0.0;
    double qber_stderr = 0.0;
    double chsh_S = 0.0;
    double chsh_S_stderr = 0.0;
    std::array<double, 4> correlations{};       ///< E per kChshPairs
    std::array<double, 4> correlation_stderr{};
    std::array<std::int64_t, 4> pair_counts{};
    ChshCounts chsh_counts{};

    std::string to_json() const;
};

/// Exactly n_coincidences records, reproducible from the seed alone; the
/// worker count only partitions index ranges and never changes the output.
std::vector<RoundRecord> run_session(const McConfig& cfg);

McReport summarize(std::span<const RoundRecord> records);

struct StatisticCheck {
    double empirical = 0.0;
    double analytic = 0.0;
    double z = 0.0;
    bool pass = false;
};

struct ComparisonResult {
    StatisticCheck qber;
    StatisticCheck chsh_S;
    std::array<StatisticCheck, 4> correlations;
    bool all_pass = false;
};

/// z-score per statistic against the closed-form session expectations;
/// pass iff |z| <= 3.
ComparisonResult compare_to_analytic(const McReport& report, const ProtocolParams& params,
                                     double eta);

/// Per-round CSV: index, phi_a, k_a, phi_b, k_b, i, j, sift_class.
void write_rounds_csv(std::ostream& os, std::span<const RoundRecord> records);

}  // namespace sepm
