#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "squeezer/dynamics.hpp"

namespace squeezer {

/// Single-sided quadrature PSD of the field entering one port. Vacuum is the identity.
struct InputSpectrum {
    Port port = Port::BIn;
    Eigen::Matrix2d psd = Eigen::Matrix2d::Identity();
    double squeeze_angle = 0.0;
};

/// R(angle) diag(10^(-dB/10), 10^(dB/10)) R(angle)^T; the squeezed axis is (cos, sin).
Eigen::Matrix2d squeezed_input_psd(double level_db, double angle);

/// Vacuum on every port, in kPorts order.
std::vector<InputSpectrum> vacuum_inputs();

/// S_X = sum_j R_j S_j R_j^dagger. Every port of the response must appear in `inputs`.
CMat4 noise_psd_matrix(const FrequencyResponse& fr, std::span<const InputSpectrum> inputs);

/// Marker returned when a channel carries no signal.
double infinite_sensitivity();

/// Strain PSD of a fixed homodyne channel: S_X[ch,ch] / |T[ch]|^2.
double sensitivity_fixed(const CMat4& noise, const CVec4& signal_T, Channel channel);

/// Real symmetric 2x2 weight M of a port as seen by the readout functional
/// y = readout . X_meas, such that the port's contribution is tr(S_port M).
Eigen::Matrix2d port_weight(const FrequencyResponse& fr, Port port, const CVec4& readout);

/// Squeeze angle in [0, pi) minimising the contribution of `port` to the PSD of
/// y = readout . X_meas. Returns 0 when the contribution does not depend on the angle.
double optimal_squeeze_angle(const FrequencyResponse& fr, double level_db, Port port, const CVec4& readout);

/// Free-mass SQL 8 hbar / (M Omega^2 L^2). Omega = 0 gives infinity.
double sql_overlay(double mirror_mass, double arm_length, double omega);

}  // namespace squeezer
