#pragma once

#include <array>
#include <string>
#include <utility>

#include <Eigen/Dense>

#include "sepm/fock.hpp"
#include "sepm/protocol.hpp"

namespace sepm {

/// Eve's optimal collective attack at induced error rate e, represented in
/// the ZY-plane qubit picture (|0>,|1> are the wave basis at alpha = 0).
///
/// The attack state is the balanced family built from
/// sqrt(1-2e)|E0>|Phi->_z + sqrt(2e)|E1>|Phi+>_z and its Z<->Y rotated twin,
/// mixed with equal weight; Eve holds a purification of the mixture. The
/// reduced state has error rate e in both Z and Y and Bell value
/// S = 2 sqrt(2) (1 - 2e).
struct CollectiveAttackModel {
    double e = 0.0;
    /// purification on A (2) x B (2) x Eve (4): A most significant
    Eigen::VectorXcd psi;

    Eigen::Matrix4cd rho_ab() const;
    double qber_z() const;
    double qber_y() const;
    /// Exact Holevo quantity chi(AB:E) of the constructed state, conditioning
    /// on Z-basis outcomes of both parties. Diagnostic only.
    double exact_holevo() const;
};

CollectiveAttackModel collective_attack_state(double e);

/// Bell function of a two-qubit state over ZY-plane measurement angles:
/// sigma(a) = cos(a) sigma_Z + sin(a) sigma_Y.
/// S = E(a1,b1) + E(a2,b2) + E(a3,b3) - E(a4,b4) over `settings`.
/// Throws if rho is not a valid density matrix.
double chsh_value(const Eigen::Matrix4cd& rho,
                  const std::array<std::pair<double, double>, 4>& settings = kChshPairs);

/// Horodecki-style maximum of the Bell function over all ZY-plane angles.
double chsh_max_zy(const Eigen::Matrix4cd& rho);

/// Privacy-amplification charge of the collective attack: chi1 = 2e.
double holevo_collective(double e);

/// Four-mode single-photon W-state formed when Eve stores the channel loss
/// of each arm. Mode order: A, B, E_A, E_B.
FockState bs_attack_state(double eta, int cutoff = 2);

/// Joint detection probability of the beam-splitting attack for key phase
/// theta in {0, pi} and Eve's detector (1 or 2):
/// P(theta, E_A1) = (gamma^4/16)(1 + 3 eta + 4 sqrt(eta(1-eta)) cos(theta)),
/// P(theta, E_A2) = same with the cross term negated.
double bs_joint_prob(double eta, double gamma, double theta, int which_detector);

/// 2x2 probability table between the key phase theta (rows: 0, pi) and Eve's
/// detector outcome (columns: E_A1, E_A2).
struct BsProbabilityMatrix {
    Eigen::Matrix2d joint;        ///< with the gamma^4 (1+3eta+2gamma^2)/8 prefactor
    Eigen::Matrix2d conditional;  ///< rows sum to 1
    Eigen::Matrix2d normalized;   ///< conditional/2; sums to 1 over the table
    double total;                 ///< sum of joint = gamma^4 (1+3eta+2gamma^2)/4
};

BsProbabilityMatrix bs_probability_matrix(double eta, double gamma);

/// p = (1 + 3 eta - 4 sqrt(eta(1-eta)) + 2 gamma^2) / (2 + 6 eta + 4 gamma^2)
double bs_guess_probability(double eta, double gamma);

/// chi2 = (gamma^4 (1 + 3 eta + 2 gamma^2)/4) [1 - H(p(eta,gamma))]
double holevo_bs(double eta, double gamma);

struct AttackReport {
    double chsh_S = 0.0;
    double chi1 = 0.0;     ///< bits per coincidence
    double chi2 = 0.0;     ///< bits per pulse
    double guess_p = 0.0;
    std::string to_json(double e_or_eta, double gamma, bool is_collective) const;
};

AttackReport collective_attack_report(double e);
AttackReport bs_attack_report(double eta, double gamma);

}  // namespace sepm
