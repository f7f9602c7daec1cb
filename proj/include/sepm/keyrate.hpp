#pragma once

#include <ostream>
#include <span>
#include <vector>

#include "sepm/params.hpp"

namespace sepm {

/// H(p) = -p log2 p - (1-p) log2 (1-p), H(0) = H(1) = 0.
double binary_entropy(double p);

/// Per-arm transmittance eta = 10^(-beta_l x / 10).
double transmittance(double x_km, double beta_l);

struct DetectionRates {
    double p_d;       ///< gamma^2 eta_d^2 eta / 2 (ideal wave-state joint rate)
    double p_hom;     ///< gamma^4 eta_d^2 / 4 (phase-insensitive background)
    double p_r_hom;   ///< gamma^4 eta_d^2 / 8
    double p_e_hom;   ///< gamma^4 eta_d^2 / 8
    double p_r_dark;  ///< 2 p_dark^2
    double p_e_dark;  ///< 2 p_dark^2
    /// denominator / yield Q under the configured dark mode
    double yield;
};

DetectionRates detection_rates(const ProtocolParams& params, double eta);

/// e = (p_e,dark + p_e,HOM + p_d e_d) / Q, clamped to [0, 1/2].
double error_rate(const ProtocolParams& params, double eta);

struct KeyRatePoint {
    double x_km = 0.0;      ///< per-arm distance
    double total_km = 0.0;  ///< end-to-end distance (2x)
    double eta = 0.0;       ///< per-arm transmittance
    double q = 0.0;         ///< coincidence yield per pulse
    double qber = 0.0;
    double chi2_term = 0.0;  ///< the BS-attack bracket term (dimensionless)
    double rate = 0.0;       ///< bits per pulse, clamped at 0
    double plob = 0.0;       ///< -log2(1 - eta^2)
    double srb = 0.0;        ///< -log2(1 - eta), single-repeater bound
};

/// Key-rate lower bound
/// r = Q [1 - f H(e) - 2e - (gamma^2 (1+3eta+2gamma^2)/eta)(1 - H(p(eta,gamma)))],
/// the last term only when include_bs_attack; reference bounds use the
/// end-to-end transmittance eta^2.
KeyRatePoint key_rate(const ProtocolParams& params, double x_km);

std::vector<KeyRatePoint> sweep(const ProtocolParams& params, std::span<const double> x_grid);

std::vector<double> distance_grid(double x_min, double x_max, double step);

/// Largest per-arm distance with positive rate, by bisection to 0.01 km.
double cutoff_distance(const ProtocolParams& params);

double plob_bound(double eta_total);
double single_repeater_bound(double eta_total);

/// CSV: header then one row per point, scientific notation, 10 significant
/// digits, grid order.
void write_csv(std::ostream& os, std::span<const KeyRatePoint> points);

}  // namespace sepm
