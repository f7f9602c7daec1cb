#include "sepm/attacks.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "sepm/keyrate.hpp"

namespace sepm {

namespace {

using Eigen::Matrix2cd;
using Eigen::Matrix4cd;
using Eigen::Vector2cd;
using Eigen::VectorXcd;

const Complex kI{0.0, 1.0};

Matrix2cd sigma_z() {
    Matrix2cd m;
    m << 1, 0, 0, -1;
    return m;
}

Matrix2cd sigma_y() {
    Matrix2cd m;
    m << 0, -kI, kI, 0;
    return m;
}

/// Involutory rotation exchanging Z and Y on the ZY plane: (sZ + sY)/sqrt(2).
Matrix2cd hadamard_zy() {
    return (sigma_z() + sigma_y()) / std::sqrt(2.0);
}

Matrix4cd kron2(const Matrix2cd& a, const Matrix2cd& b) {
    Matrix4cd m;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            m.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
    return m;
}

Matrix2cd zy_observable(double angle) {
    return std::cos(angle) * sigma_z() + std::sin(angle) * sigma_y();
}

void check_density_matrix(const Matrix4cd& rho) {
    if ((rho - rho.adjoint()).norm() > 1e-9)
        throw std::domain_error("chsh_value: density matrix is not Hermitian");
    if (std::abs(rho.trace().real() - 1.0) > 1e-9)
        throw std::domain_error("chsh_value: density matrix trace is not 1");
    Eigen::SelfAdjointEigenSolver<Matrix4cd> es(rho);
    if (es.eigenvalues().minCoeff() < -1e-9)
        throw std::domain_error("chsh_value: density matrix is not positive semidefinite");
}

double von_neumann_entropy(const Eigen::MatrixXcd& rho) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho);
    double s = 0.0;
    for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k) {
        const double p = es.eigenvalues()[k];
        if (p > 1e-15) s -= p * std::log2(p);
    }
    return s;
}

}  // namespace

CollectiveAttackModel collective_attack_state(double e) {
    if (e < 0.0 || e > 0.5)
        throw std::invalid_argument("collective_attack_state: e must be in [0, 1/2]");

    // Branch state on A x B x E2: sqrt(1-2e)|Phi->|E0> + sqrt(2e)|Phi+>|E1>,
    // index layout a*4 + b*2 + eps.
    VectorXcd psi0 = VectorXcd::Zero(8);
    const double c0 = std::sqrt(1.0 - 2.0 * e) / std::sqrt(2.0);
    const double c1 = std::sqrt(2.0 * e) / std::sqrt(2.0);
    psi0[0 * 4 + 0 * 2 + 0] = c0;   // |00>|E0>
    psi0[1 * 4 + 1 * 2 + 0] = -c0;  // -|11>|E0>
    psi0[0 * 4 + 0 * 2 + 1] = c1;   // |00>|E1>
    psi0[1 * 4 + 1 * 2 + 1] = c1;   // |11>|E1>

    // Rotated twin: (H x H) acting on A,B only.
    const Matrix4cd hh = kron2(hadamard_zy(), hadamard_zy());
    VectorXcd psi1 = VectorXcd::Zero(8);
    for (int ab = 0; ab < 4; ++ab)
        for (int abp = 0; abp < 4; ++abp)
            for (int eps = 0; eps < 2; ++eps)
                psi1[ab * 2 + eps] += hh(ab, abp) * psi0[abp * 2 + eps];

    // Purify the equal mixture with a flag qubit on Eve's side:
    // Eve index = flag*2 + eps. Layout: a*8 + b*4 + ev.
    CollectiveAttackModel model;
    model.e = e;
    model.psi = VectorXcd::Zero(16);
    const double w = 1.0 / std::sqrt(2.0);
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
            for (int eps = 0; eps < 2; ++eps) {
                const int ab = a * 2 + b;
                model.psi[a * 8 + b * 4 + 0 * 2 + eps] = w * psi0[ab * 2 + eps];
                model.psi[a * 8 + b * 4 + 1 * 2 + eps] = w * psi1[ab * 2 + eps];
            }
    return model;
}

Matrix4cd CollectiveAttackModel::rho_ab() const {
    Matrix4cd rho = Matrix4cd::Zero();
    for (int ab = 0; ab < 4; ++ab)
        for (int abp = 0; abp < 4; ++abp)
            for (int ev = 0; ev < 4; ++ev)
                rho(ab, abp) += psi[ab * 4 + ev] * std::conj(psi[abp * 4 + ev]);
    return rho;
}

double CollectiveAttackModel::qber_z() const {
    const Matrix4cd rho = rho_ab();
    return rho(1, 1).real() + rho(2, 2).real();
}

double CollectiveAttackModel::qber_y() const {
    // Rotate to the Y eigenbasis: columns |+i>, |-i>.
    Matrix2cd u;
    u << 1, 1, kI, -kI;
    u /= std::sqrt(2.0);
    const Matrix4cd uu = kron2(u, u);
    const Matrix4cd rho = uu.adjoint() * rho_ab() * uu;
    return rho(1, 1).real() + rho(2, 2).real();
}

double CollectiveAttackModel::exact_holevo() const {
    // chi(AB:E) = S(rho_E) - sum_ab p(ab) S(rho_E|ab); conditioning on a full
    // Z-basis outcome leaves Eve pure, so only the first term survives.
    Eigen::MatrixXcd rho_e = Eigen::MatrixXcd::Zero(4, 4);
    for (int ev = 0; ev < 4; ++ev)
        for (int evp = 0; evp < 4; ++evp)
            for (int ab = 0; ab < 4; ++ab)
                rho_e(ev, evp) += psi[ab * 4 + ev] * std::conj(psi[ab * 4 + evp]);
    return von_neumann_entropy(rho_e);
}

double chsh_value(const Matrix4cd& rho,
                  const std::array<std::pair<double, double>, 4>& settings) {
    check_density_matrix(rho);
    std::array<double, 4> corr{};
    for (int p = 0; p < 4; ++p) {
        const Matrix4cd obs =
            kron2(zy_observable(settings[p].first), zy_observable(settings[p].second));
        corr[p] = (rho * obs).trace().real();
    }
    return corr[0] + corr[1] + corr[2] - corr[3];
}

double chsh_max_zy(const Matrix4cd& rho) {
    check_density_matrix(rho);
    const std::array<Matrix2cd, 2> ops = {sigma_z(), sigma_y()};
    Eigen::Matrix2d t;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            t(i, j) = (rho * kron2(ops[i], ops[j])).trace().real();
    Eigen::JacobiSVD<Eigen::Matrix2d> svd(t);
    const auto& s = svd.singularValues();
    return 2.0 * std::sqrt(s[0] * s[0] + s[1] * s[1]);
}

double holevo_collective(double e) {
    if (e < 0.0 || e > 0.5)
        throw std::invalid_argument("holevo_collective: e must be in [0, 1/2]");
    return 2.0 * e;
}

FockState bs_attack_state(double eta, int cutoff) {
    if (eta < 0.0 || eta > 1.0)
        throw std::invalid_argument("bs_attack_state: eta must be in [0,1]");
    FockState pair = entangled_pair(0.0, cutoff);
    FockState with_ea = loss_channel(pair, 0, eta);  // modes A, B, E_A
    return loss_channel(with_ea, 1, eta);            // modes A, B, E_A, E_B
}

double bs_joint_prob(double eta, double gamma, double theta, int which_detector) {
    if (which_detector != 1 && which_detector != 2)
        throw std::invalid_argument("bs_joint_prob: detector must be 1 or 2");
    const double sign = (which_detector == 1) ? 1.0 : -1.0;
    const double cross = 4.0 * std::sqrt(eta * (1.0 - eta)) * std::cos(theta);
    return std::pow(gamma, 4) / 16.0 * (1.0 + 3.0 * eta + sign * cross);
}

BsProbabilityMatrix bs_probability_matrix(double eta, double gamma) {
    const double g2 = gamma * gamma;
    const double denom = 2.0 + 6.0 * eta + 4.0 * g2;
    const double cross = 4.0 * std::sqrt(eta * (1.0 - eta));
    const double same = (1.0 + 3.0 * eta + cross + 2.0 * g2) / denom;
    const double diff = (1.0 + 3.0 * eta - cross + 2.0 * g2) / denom;

    BsProbabilityMatrix m;
    m.conditional << same, diff, diff, same;
    m.normalized = m.conditional / 2.0;
    const double prefactor = std::pow(gamma, 4) * (1.0 + 3.0 * eta + 2.0 * g2) / 8.0;
    m.joint = prefactor * m.conditional;
    m.total = m.joint.sum();
    return m;
}

double bs_guess_probability(double eta, double gamma) {
    const double g2 = gamma * gamma;
    return (1.0 + 3.0 * eta - 4.0 * std::sqrt(eta * (1.0 - eta)) + 2.0 * g2) /
           (2.0 + 6.0 * eta + 4.0 * g2);
}

double holevo_bs(double eta, double gamma) {
    const double g2 = gamma * gamma;
    const double q = std::pow(gamma, 4) * (1.0 + 3.0 * eta + 2.0 * g2) / 4.0;
    return q * (1.0 - binary_entropy(bs_guess_probability(eta, gamma)));
}

std::string AttackReport::to_json(double e_or_eta, double gamma, bool is_collective) const {
    std::ostringstream os;
    os.precision(12);
    os << "{\"" << (is_collective ? "e" : "eta") << "\":" << e_or_eta
       << ",\"gamma\":" << gamma << ",\"S\":" << chsh_S << ",\"chi1\":" << chi1
       << ",\"chi2\":" << chi2 << ",\"guess_p\":" << guess_p << "}";
    return os.str();
}

AttackReport collective_attack_report(double e) {
    AttackReport r;
    r.chsh_S = chsh_value(collective_attack_state(e).rho_ab());
    r.chi1 = holevo_collective(e);
    r.chi2 = 0.0;
    r.guess_p = 0.5;
    return r;
}

AttackReport bs_attack_report(double eta, double gamma) {
    AttackReport r;
    r.chsh_S = 2.0 * std::sqrt(2.0);  // BS attack leaves the Bell test intact
    r.chi1 = 0.0;
    r.chi2 = holevo_bs(eta, gamma);
    r.guess_p = bs_guess_probability(eta, gamma);
    return r;
}

}  // namespace sepm
