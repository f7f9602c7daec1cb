#include "sepm/keyrate.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <stdexcept>

#include "sepm/attacks.hpp"

namespace sepm {

std::string to_string(DarkMode mode) {
    return mode == DarkMode::quadratic ? "quadratic" : "literal";
}

DarkMode dark_mode_from_string(const std::string& s) {
    if (s == "quadratic") return DarkMode::quadratic;
    if (s == "literal") return DarkMode::literal;
    throw std::invalid_argument("dark_mode must be \"quadratic\" or \"literal\", got \"" + s + "\"");
}

double ProtocolParams::alpha_f() const { return beta_l * std::log(10.0) / 10.0; }

void ProtocolParams::validate() const {
    auto prob = [](double v, const char* name) {
        if (v < 0.0 || v > 1.0)
            throw std::invalid_argument(std::string(name) + " must be in [0,1]");
    };
    if (gamma < 0.0) throw std::invalid_argument("gamma must be >= 0");
    prob(eta_d, "eta_d");
    prob(p_dark, "p_dark");
    prob(e_d, "e_d");
    if (f < 1.0) throw std::invalid_argument("f must be >= 1");
    if (beta_l <= 0.0) throw std::invalid_argument("beta_l must be > 0");
    if (cutoff < 1) throw std::invalid_argument("cutoff must be >= 1");
}

double binary_entropy(double p) {
    if (p < 0.0 || p > 1.0)
        throw std::invalid_argument("binary_entropy: p must be in [0,1]");
    if (p == 0.0 || p == 1.0) return 0.0;
    return -p * std::log2(p) - (1.0 - p) * std::log2(1.0 - p);
}

double transmittance(double x_km, double beta_l) {
    if (x_km < 0.0) throw std::invalid_argument("transmittance: distance must be >= 0");
    return std::exp(-beta_l * std::log(10.0) / 10.0 * x_km);
}

DetectionRates detection_rates(const ProtocolParams& params, double eta) {
    DetectionRates r;
    const double g2 = params.gamma * params.gamma;
    const double d2 = params.eta_d * params.eta_d;
    r.p_d = g2 * d2 * eta / 2.0;
    r.p_hom = g2 * g2 * d2 / 4.0;
    r.p_r_hom = r.p_hom / 2.0;
    r.p_e_hom = r.p_hom / 2.0;
    r.p_r_dark = 2.0 * params.p_dark * params.p_dark;
    r.p_e_dark = 2.0 * params.p_dark * params.p_dark;
    const double dark = (params.dark_mode == DarkMode::quadratic)
                            ? r.p_r_dark + r.p_e_dark
                            : params.p_dark;
    r.yield = dark + r.p_hom + r.p_d;
    return r;
}

double error_rate(const ProtocolParams& params, double eta) {
    const DetectionRates r = detection_rates(params, eta);
    if (r.yield <= 0.0)
        throw std::runtime_error("error_rate: zero detection yield");
    const double e = (r.p_e_dark + r.p_e_hom + r.p_d * params.e_d) / r.yield;
    return std::clamp(e, 0.0, 0.5);
}

double plob_bound(double eta_total) {
    return -std::log2(1.0 - eta_total);
}

double single_repeater_bound(double eta_total) {
    return -std::log2(1.0 - std::sqrt(eta_total));
}

KeyRatePoint key_rate(const ProtocolParams& params, double x_km) {
    KeyRatePoint pt;
    pt.x_km = x_km;
    pt.total_km = 2.0 * x_km;
    pt.eta = transmittance(x_km, params.beta_l);

    const DetectionRates rates = detection_rates(params, pt.eta);
    pt.q = rates.yield;
    pt.qber = error_rate(params, pt.eta);

    const double g2 = params.gamma * params.gamma;
    pt.chi2_term = g2 * (1.0 + 3.0 * pt.eta + 2.0 * g2) / pt.eta *
                   (1.0 - binary_entropy(bs_guess_probability(pt.eta, params.gamma)));

    double bracket = 1.0 - params.f * binary_entropy(pt.qber) - 2.0 * pt.qber;
    if (params.include_bs_attack) bracket -= pt.chi2_term;
    pt.rate = std::max(0.0, pt.q * bracket);

    const double eta_total = pt.eta * pt.eta;
    pt.plob = plob_bound(eta_total);
    pt.srb = single_repeater_bound(eta_total);
    return pt;
}

std::vector<KeyRatePoint> sweep(const ProtocolParams& params, std::span<const double> x_grid) {
    if (x_grid.empty()) throw std::invalid_argument("sweep: empty distance grid");
    std::vector<KeyRatePoint> out;
    out.reserve(x_grid.size());
    for (double x : x_grid) out.push_back(key_rate(params, x));
    return out;
}

std::vector<double> distance_grid(double x_min, double x_max, double step) {
    if (x_min > x_max) throw std::invalid_argument("distance grid: x_min > x_max");
    if (step <= 0.0) throw std::invalid_argument("distance grid: step must be > 0");
    std::vector<double> grid;
    const auto n = static_cast<std::size_t>(std::floor((x_max - x_min) / step + 1e-9));
    for (std::size_t i = 0; i <= n; ++i) grid.push_back(x_min + static_cast<double>(i) * step);
    return grid;
}

double cutoff_distance(const ProtocolParams& params) {
    if (key_rate(params, 0.0).rate <= 0.0) return 0.0;
    double lo = 0.0;
    double hi = 100.0;
    while (key_rate(params, hi).rate > 0.0) {
        lo = hi;
        hi *= 2.0;
        if (hi > 1e5)
            throw std::runtime_error("cutoff_distance: rate stays positive past 1e5 km");
    }
    while (hi - lo > 0.01) {
        const double mid = 0.5 * (lo + hi);
        (key_rate(params, mid).rate > 0.0 ? lo : hi) = mid;
    }
    return lo;
}

void write_csv(std::ostream& os, std::span<const KeyRatePoint> points) {
    os << "x_km,total_km,eta,Q,qber,chi2_term,rate,plob,srb\n";
    const auto flags = os.flags();
    os << std::scientific << std::setprecision(9);
    for (const auto& p : points)
        os << p.x_km << ',' << p.total_km << ',' << p.eta << ',' << p.q << ','
           << p.qber << ',' << p.chi2_term << ',' << p.rate << ',' << p.plob << ','
           << p.srb << '\n';
    os.flags(flags);
}

}  // namespace sepm
