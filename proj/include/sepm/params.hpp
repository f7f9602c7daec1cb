#pragma once

#include <string>

namespace sepm {

/// How the denominator of the error-rate/yield formula counts dark events.
/// `quadratic` uses the coincidence rates 4*p_dark^2 (correct + false dark
/// coincidences); `literal` keeps the single-detector rate p_dark as printed
/// in the closed-form expressions.
enum class DarkMode { quadratic, literal };

std::string to_string(DarkMode mode);
DarkMode dark_mode_from_string(const std::string& s);

/// Physical and protocol constants. Defaults are the simulation parameter
/// set: gamma=0.001, eta_d=14.5%, p_dark=8e-8, e_d=1.5%, f=1.2,
/// beta_l=0.2 dB/km.
struct ProtocolParams {
    double gamma = 0.001;    ///< local-oscillator amplitude
    double eta_d = 0.145;    ///< detector efficiency
    double p_dark = 8e-8;    ///< dark count probability per gate
    double e_d = 0.015;      ///< misalignment error fraction
    double f = 1.2;          ///< error-correction inefficiency
    double beta_l = 0.2;     ///< fiber loss, dB/km
    double theta = 0.0;      ///< source phase offset (diagnostic knob)
    DarkMode dark_mode = DarkMode::quadratic;
    bool include_bs_attack = true;
    int cutoff = 2;          ///< photon-number cutoff per mode

    /// Absorption coefficient alpha_f = beta_l * ln(10) / 10, 1/km.
    double alpha_f() const;

    void validate() const;  ///< throws std::invalid_argument on bad fields
};

}  // namespace sepm
