#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include "sepm/params.hpp"

namespace sepm {

/// Error in user-supplied flags or config files; maps to the usage exit code.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class OutputFormat { csv, json };

struct SweepGrid {
    double x_min = 0.0;
    double x_max = 400.0;
    double step = 1.0;
};

struct RunConfig {
    ProtocolParams params{};
    std::uint64_t seed = 1;
    SweepGrid sweep{};
    std::string output;  ///< empty = stdout
    OutputFormat format = OutputFormat::csv;

    void validate() const;  ///< throws UsageError
};

/// Parses a JSON config. Recognized keys: gamma, eta_d, p_dark, e_d, f,
/// beta_db_per_km, dark_mode, include_bs_attack, seed,
/// sweep:{x_min, x_max, step}. Unknown or ill-typed keys raise a UsageError
/// naming the offending key. Missing keys keep the defaults.
RunConfig load_config(const std::string& path);

RunConfig parse_config_json(const std::string& text);

}  // namespace sepm
