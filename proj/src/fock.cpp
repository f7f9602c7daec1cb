#include "sepm/fock.hpp"

#include <cmath>
#include <cstdint>
#include <sstream>
#include <stdexcept>

namespace sepm {

namespace {

Eigen::Index pow_index(int base, int exp) {
    Eigen::Index r = 1;
    for (int i = 0; i < exp; ++i) r *= base;
    return r;
}

double factorial(int n) {
    double r = 1.0;
    for (int k = 2; k <= n; ++k) r *= k;
    return r;
}

double binomial(int n, int k) {
    return factorial(n) / (factorial(k) * factorial(n - k));
}

// i^k for integer k
Complex ipow(int k) {
    switch (((k % 4) + 4) % 4) {
        case 0: return {1.0, 0.0};
        case 1: return {0.0, 1.0};
        case 2: return {-1.0, 0.0};
        default: return {0.0, -1.0};
    }
}

void check_mode(const FockState& s, int mode) {
    if (mode < 0 || mode >= s.mode_count())
        throw std::invalid_argument("mode index out of range");
}

}  // namespace

FockState::FockState(int mode_count, int cutoff)
    : mode_count_(mode_count), cutoff_(cutoff) {
    if (mode_count < 1) throw std::invalid_argument("mode_count must be positive");
    if (cutoff < 1) throw std::invalid_argument("cutoff must be at least 1");
    amps_ = AmplitudeVector::Zero(pow_index(cutoff + 1, mode_count));
    amps_[0] = 1.0;
}

FockState FockState::basis(int mode_count, int cutoff, std::span<const int> occupation) {
    FockState s(mode_count, cutoff);
    s.amps_[0] = 0.0;
    s.amps_[s.index_of(occupation)] = 1.0;
    return s;
}

FockState FockState::from_amplitudes(int mode_count, int cutoff, AmplitudeVector amps) {
    FockState s(mode_count, cutoff);
    if (amps.size() != s.dim())
        throw std::invalid_argument("amplitude vector has wrong dimension");
    s.amps_ = std::move(amps);
    return s;
}

Eigen::Index FockState::index_of(std::span<const int> occupation) const {
    if (static_cast<int>(occupation.size()) != mode_count_)
        throw std::invalid_argument("occupation tuple has wrong length");
    Eigen::Index idx = 0;
    for (int m = 0; m < mode_count_; ++m) {
        int n = occupation[m];
        if (n < 0 || n > cutoff_)
            throw std::invalid_argument("occupation exceeds cutoff");
        idx = idx * (cutoff_ + 1) + n;
    }
    return idx;
}

std::vector<int> FockState::occupation_of(Eigen::Index index) const {
    std::vector<int> occ(mode_count_);
    for (int m = mode_count_ - 1; m >= 0; --m) {
        occ[m] = static_cast<int>(index % (cutoff_ + 1));
        index /= (cutoff_ + 1);
    }
    return occ;
}

Complex FockState::amplitude(std::span<const int> occupation) const {
    return amps_[index_of(occupation)];
}

Complex FockState::amplitude(std::initializer_list<int> occupation) const {
    return amplitude(std::span<const int>(occupation.begin(), occupation.size()));
}

std::string FockState::to_json() const {
    std::ostringstream os;
    os.precision(17);
    os << "{\"mode_count\":" << mode_count_ << ",\"cutoff\":" << cutoff_
       << ",\"amplitudes\":[";
    for (Eigen::Index i = 0; i < amps_.size(); ++i) {
        if (i) os << ",";
        os << "[" << amps_[i].real() << "," << amps_[i].imag() << "]";
    }
    os << "]}";
    return os.str();
}

FockState normalize(const FockState& state) {
    double n = state.amplitudes().norm();
    if (n == 0.0) throw std::invalid_argument("cannot normalize the zero state");
    return FockState::from_amplitudes(state.mode_count(), state.cutoff(),
                                      state.amplitudes() / n);
}

FockState tensor(const FockState& a, const FockState& b) {
    if (a.cutoff() != b.cutoff())
        throw std::invalid_argument("tensor: cutoff mismatch");
    FockState out(a.mode_count() + b.mode_count(), a.cutoff());
    AmplitudeVector amps(a.dim() * b.dim());
    for (Eigen::Index i = 0; i < a.dim(); ++i)
        for (Eigen::Index j = 0; j < b.dim(); ++j)
            amps[i * b.dim() + j] = a.amplitudes()[i] * b.amplitudes()[j];
    return FockState::from_amplitudes(out.mode_count(), out.cutoff(), std::move(amps));
}

Complex inner_product(const FockState& a, const FockState& b) {
    if (a.mode_count() != b.mode_count() || a.cutoff() != b.cutoff())
        throw std::invalid_argument("inner_product: state shapes differ");
    return a.amplitudes().dot(b.amplitudes());  // Eigen conjugates the left side
}

FockState weak_coherent(double gamma, double phase, int cutoff, bool two_term) {
    if (gamma < 0.0) throw std::invalid_argument("weak_coherent: gamma must be >= 0");
    if (cutoff < 1) throw std::invalid_argument("weak_coherent: cutoff must be >= 1");
    AmplitudeVector amps = AmplitudeVector::Zero(cutoff + 1);
    if (two_term) {
        amps[0] = 1.0;
        amps[1] = gamma * std::exp(Complex(0.0, phase));
        return FockState::from_amplitudes(1, cutoff, std::move(amps));
    }
    for (int n = 0; n <= cutoff; ++n)
        amps[n] = std::pow(gamma, n) / std::sqrt(factorial(n)) *
                  std::exp(Complex(0.0, n * phase));
    return normalize(FockState::from_amplitudes(1, cutoff, std::move(amps)));
}

FockState entangled_pair(double theta, int cutoff) {
    FockState s(2, cutoff);
    AmplitudeVector amps = AmplitudeVector::Zero(s.dim());
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    int occ10[] = {1, 0};
    int occ01[] = {0, 1};
    amps[s.index_of(occ10)] = std::exp(Complex(0.0, theta)) * inv_sqrt2;
    amps[s.index_of(occ01)] = inv_sqrt2;
    return FockState::from_amplitudes(2, cutoff, std::move(amps));
}

FockState apply_beamsplitter(const FockState& state, int mode_u, int mode_v) {
    check_mode(state, mode_u);
    check_mode(state, mode_v);
    if (mode_u == mode_v)
        throw std::invalid_argument("apply_beamsplitter: modes must be distinct");

    const int cutoff = state.cutoff();
    AmplitudeVector out = AmplitudeVector::Zero(state.dim());
    for (Eigen::Index idx = 0; idx < state.dim(); ++idx) {
        Complex a = state.amplitudes()[idx];
        if (a == 0.0) continue;
        std::vector<int> occ = state.occupation_of(idx);
        const int m = occ[mode_u];
        const int n = occ[mode_v];
        if (m + n > cutoff)
            throw std::domain_error(
                "apply_beamsplitter: output occupation would exceed cutoff");
        const double scale = std::pow(2.0, -0.5 * (m + n)) /
                             std::sqrt(factorial(m) * factorial(n));
        for (int j = 0; j <= m; ++j) {
            for (int k = 0; k <= n; ++k) {
                const int p = j + k;
                const int q = m + n - p;
                occ[mode_u] = p;
                occ[mode_v] = q;
                Complex coeff = a * scale * ipow(m - j + k) * binomial(m, j) *
                                binomial(n, k) *
                                std::sqrt(factorial(p) * factorial(q));
                out[state.index_of(occ)] += coeff;
            }
        }
    }
    return FockState::from_amplitudes(state.mode_count(), cutoff, std::move(out));
}

FockState loss_channel(const FockState& state, int mode, double eta) {
    check_mode(state, mode);
    if (eta < 0.0 || eta > 1.0)
        throw std::invalid_argument("loss_channel: eta must be in [0,1]");

    const int cutoff = state.cutoff();
    FockState out(state.mode_count() + 1, cutoff);
    AmplitudeVector amps = AmplitudeVector::Zero(out.dim());
    std::vector<int> occ_out(state.mode_count() + 1);
    for (Eigen::Index idx = 0; idx < state.dim(); ++idx) {
        Complex a = state.amplitudes()[idx];
        if (a == 0.0) continue;
        std::vector<int> occ = state.occupation_of(idx);
        const int n = occ[mode];
        for (int m = 0; m < state.mode_count(); ++m) occ_out[m] = occ[m];
        for (int k = 0; k <= n; ++k) {
            occ_out[mode] = n - k;
            occ_out[state.mode_count()] = k;
            double coeff = std::sqrt(binomial(n, k)) *
                           std::pow(eta, 0.5 * (n - k)) *
                           std::pow(1.0 - eta, 0.5 * k);
            amps[out.index_of(occ_out)] += a * coeff;
        }
    }
    return FockState::from_amplitudes(out.mode_count(), cutoff, std::move(amps));
}

WaveCoefficients wave_basis_decompose(const FockState& state, int mode, double alpha) {
    check_mode(state, mode);
    if (state.mode_count() != 1)
        throw std::invalid_argument(
            "wave_basis_decompose: defined for single-mode states");
    const Complex a0 = state.amplitudes()[0];
    const Complex a1 = state.amplitudes()[1];
    const Complex phase = std::exp(Complex(0.0, -alpha));
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    WaveCoefficients w;
    w.plus = (a0 + phase * a1) * inv_sqrt2;
    w.minus = (a0 - phase * a1) * inv_sqrt2;
    w.residual = 0.0;
    for (Eigen::Index n = 2; n < state.dim(); ++n)
        w.residual += std::norm(state.amplitudes()[n]);
    return w;
}

double ClickDistribution::probability(const ClickPattern& pattern) const {
    if (pattern.size() != monitored_modes.size())
        throw std::invalid_argument("click pattern has wrong length");
    std::size_t k = 0;
    for (std::size_t d = 0; d < pattern.size(); ++d)
        if (pattern[d]) k |= (std::size_t{1} << d);
    return probs[k];
}

double ClickDistribution::total() const {
    double t = 0.0;
    for (double p : probs) t += p;
    return t;
}

ClickDistribution click_pattern_mass(const FockState& state, const DetectorConfig& det) {
    if (det.efficiency < 0.0 || det.efficiency > 1.0)
        throw std::invalid_argument("detector efficiency must be in [0,1]");
    if (det.dark_prob < 0.0 || det.dark_prob > 1.0)
        throw std::invalid_argument("dark probability must be in [0,1]");
    for (int m : det.monitored_modes) check_mode(state, m);

    const std::size_t nd = det.monitored_modes.size();
    ClickDistribution dist;
    dist.monitored_modes = det.monitored_modes;
    dist.probs.assign(std::size_t{1} << nd, 0.0);

    std::vector<double> click_p(nd);
    for (Eigen::Index idx = 0; idx < state.dim(); ++idx) {
        const double w = std::norm(state.amplitudes()[idx]);
        if (w == 0.0) continue;
        std::vector<int> occ = state.occupation_of(idx);
        for (std::size_t d = 0; d < nd; ++d) {
            const int n = occ[dist.monitored_modes[d]];
            // loss(eta_d) + threshold, then OR an independent dark click
            const double c = 1.0 - std::pow(1.0 - det.efficiency, n);
            click_p[d] = 1.0 - (1.0 - c) * (1.0 - det.dark_prob);
        }
        for (std::size_t k = 0; k < dist.probs.size(); ++k) {
            double p = w;
            for (std::size_t d = 0; d < nd; ++d)
                p *= ((k >> d) & 1) ? click_p[d] : 1.0 - click_p[d];
            dist.probs[k] += p;
        }
    }
    return dist;
}

ClickDistribution click_distribution(const FockState& state, const DetectorConfig& det) {
    if (std::abs(state.squared_norm() - 1.0) > 1e-9)
        throw std::domain_error("click_distribution: state is not normalized");
    return click_pattern_mass(state, det);
}

}  // namespace sepm
