#pragma once

#include <complex>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace sepm {

using Complex = std::complex<double>;
using AmplitudeVector = Eigen::VectorXcd;

/// Pure state of a few optical modes in the photon-number basis.
///
/// Amplitudes are indexed row-major over occupation tuples: mode 0 is the
/// most significant digit in base (cutoff+1). The index space always has
/// exactly (cutoff+1)^mode_count entries. Values are immutable in practice;
/// every operation below returns a new state.
class FockState {
public:
    FockState(int mode_count, int cutoff);

    static FockState basis(int mode_count, int cutoff, std::span<const int> occupation);
    static FockState from_amplitudes(int mode_count, int cutoff, AmplitudeVector amps);

    int mode_count() const { return mode_count_; }
    int cutoff() const { return cutoff_; }
    Eigen::Index dim() const { return amps_.size(); }

    const AmplitudeVector& amplitudes() const { return amps_; }

    Eigen::Index index_of(std::span<const int> occupation) const;
    std::vector<int> occupation_of(Eigen::Index index) const;

    Complex amplitude(std::span<const int> occupation) const;
    Complex amplitude(std::initializer_list<int> occupation) const;

    double squared_norm() const { return amps_.squaredNorm(); }

    /// {mode_count, cutoff, amplitudes:[[re,im],...]} in index order.
    std::string to_json() const;

private:
    int mode_count_;
    int cutoff_;
    AmplitudeVector amps_;
};

FockState normalize(const FockState& state);
FockState tensor(const FockState& a, const FockState& b);
Complex inner_product(const FockState& a, const FockState& b);

/// Truncated coherent state |gamma e^{i phase}>. The default truncates the
/// exact coherent series at `cutoff` photons and renormalizes. With
/// two_term the state is the unnormalized two-term form
/// |0> + gamma e^{i phase}|1>, which is what the closed-form coincidence and
/// attack expressions are derived from.
FockState weak_coherent(double gamma, double phase, int cutoff, bool two_term = false);

/// Two-mode single-photon entangled state (e^{i theta}|1,0> + |0,1>)/sqrt(2).
FockState entangled_pair(double theta, int cutoff = 2);

/// 50:50 beam splitter on modes (u, v). Convention: u -> (c + i d)/sqrt(2),
/// v -> (i c + d)/sqrt(2), i.e. the reflected port acquires the factor i.
/// Output port c lives at index u, port d at index v. Throws if a nonzero
/// amplitude would need more than `cutoff` photons in an output mode.
FockState apply_beamsplitter(const FockState& state, int mode_u, int mode_v);

/// Beam-splitter purification of loss: appends one environment mode at the
/// end; a photon in `mode` survives with amplitude sqrt(eta) and is routed
/// to the environment with amplitude sqrt(1-eta).
FockState loss_channel(const FockState& state, int mode, double eta);

struct WaveCoefficients {
    Complex plus;     ///< coefficient on |alpha>_w = (|0> + e^{i alpha}|1>)/sqrt(2)
    Complex minus;    ///< coefficient on |alpha+pi>_w = (|0> - e^{i alpha}|1>)/sqrt(2)
    double residual;  ///< squared-amplitude mass in occupations >= 2
};

/// Decomposition of a single-mode state onto the wave basis at phase alpha.
/// plus/minus squared magnitudes plus residual add up to the squared norm.
WaveCoefficients wave_basis_decompose(const FockState& state, int mode, double alpha);

struct DetectorConfig {
    double efficiency = 1.0;  ///< eta_d in [0,1]
    double dark_prob = 0.0;   ///< dark click probability per gate
    std::vector<int> monitored_modes;
};

using ClickPattern = std::vector<bool>;

/// Probability table over click patterns of the monitored detectors.
/// Pattern k's bit for detector d is (k >> d) & 1, with d the position in
/// monitored_modes.
struct ClickDistribution {
    std::vector<int> monitored_modes;
    std::vector<double> probs;

    double probability(const ClickPattern& pattern) const;
    double total() const;
};

/// Raw pattern mass: same detector model as click_distribution but without
/// requiring a normalized state; the table sums to the squared norm. Used to
/// evaluate circuits built from unnormalized two-term oscillators.
ClickDistribution click_pattern_mass(const FockState& state, const DetectorConfig& det);

/// Detector model: loss(eta_d) + threshold click (>= 1 photon) + independent
/// OR'd dark count per monitored mode. Unmonitored modes are traced out.
/// The input must be normalized (contract error otherwise).
ClickDistribution click_distribution(const FockState& state, const DetectorConfig& det);

}  // namespace sepm
