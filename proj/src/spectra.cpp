#include "squeezer/spectra.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "squeezer/constants.hpp"
#include "squeezer/error.hpp"

namespace squeezer {

Eigen::Matrix2d squeezed_input_psd(double level_db, double angle) {
    if (!(level_db >= 0.0)) throw ValidationError("squeezing level must be >= 0 dB");
    const double s = std::pow(10.0, -level_db / 10.0);
    Eigen::Matrix2d rot;
    rot << std::cos(angle), -std::sin(angle), std::sin(angle), std::cos(angle);
    const Eigen::Matrix2d diag = Eigen::Vector2d(s, 1.0 / s).asDiagonal();
    return rot * diag * rot.transpose();
}

std::vector<InputSpectrum> vacuum_inputs() {
    std::vector<InputSpectrum> v;
    v.reserve(kAllPorts);
    for (Port p : kPorts) v.push_back({p, Eigen::Matrix2d::Identity(), 0.0});
    return v;
}

CMat4 noise_psd_matrix(const FrequencyResponse& fr, std::span<const InputSpectrum> inputs) {
    std::array<const InputSpectrum*, kAllPorts> by_port{};
    for (const auto& in : inputs) by_port.at(static_cast<std::size_t>(in.port)) = &in;

    CMat4 S = CMat4::Zero();
    for (Port p : kPorts) {
        const auto* in = by_port[static_cast<std::size_t>(p)];
        if (in == nullptr) throw ConsistencyError("no input spectrum for port " + std::string(port_label(p)));
        const CMat42& R = fr.R(p);
        S.noalias() += R * in->psd.cast<Complex>() * R.adjoint();
    }
    // Hermitian by construction; symmetrise away rounding.
    return 0.5 * (S + S.adjoint());
}

double infinite_sensitivity() { return std::numeric_limits<double>::infinity(); }

double sensitivity_fixed(const CMat4& noise, const CVec4& signal_T, Channel channel) {
    const double gain2 = std::norm(signal_T(channel));
    // Channels fed only through rounding are treated as carrying no signal.
    if (!(gain2 > 1e-24 * signal_T.squaredNorm())) return infinite_sensitivity();
    return noise(channel, channel).real() / gain2;
}

Eigen::Matrix2d port_weight(const FrequencyResponse& fr, Port port, const CVec4& readout) {
    const Eigen::Matrix<Complex, 1, 2> row = readout.transpose() * fr.R(port);
    const Eigen::Vector2d re = row.real().transpose();
    const Eigen::Vector2d im = row.imag().transpose();
    return re * re.transpose() + im * im.transpose();
}

double optimal_squeeze_angle(const FrequencyResponse& fr, double level_db, Port port, const CVec4& readout) {
    if (!(level_db > 0.0)) return 0.0;
    const Eigen::Matrix2d M = port_weight(fr, port, readout);
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(M);
    const auto& ev = es.eigenvalues();
    if (!(ev(1) - ev(0) > 1e-14 * std::abs(ev(1)))) return 0.0;
    // Squeezed axis along the eigenvector of the largest weight.
    const Eigen::Vector2d v = es.eigenvectors().col(1);
    double angle = std::atan2(v(1), v(0));
    angle = std::fmod(angle, std::numbers::pi);
    if (angle < 0.0) angle += std::numbers::pi;
    if (angle >= std::numbers::pi) angle -= std::numbers::pi;
    return angle;
}

double sql_overlay(double mirror_mass, double arm_length, double omega) {
    if (!(mirror_mass > 0.0) || !(arm_length > 0.0)) throw InvalidParameter("SQL needs positive mass and arm length");
    if (omega == 0.0) return infinite_sensitivity();
    return 8.0 * kHbar / (mirror_mass * omega * omega * arm_length * arm_length);
}

}  // namespace squeezer
