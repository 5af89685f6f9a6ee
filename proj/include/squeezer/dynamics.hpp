#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <string_view>

#include <Eigen/Dense>

#include "squeezer/params.hpp"

namespace squeezer {

using Complex = std::complex<double>;

using Mat8 = Eigen::Matrix<double, 8, 8>;
using Vec8 = Eigen::Matrix<double, 8, 1>;
using Mat82 = Eigen::Matrix<double, 8, 2>;
using Mat48 = Eigen::Matrix<double, 4, 8>;
using Mat42 = Eigen::Matrix<double, 4, 2>;
using CVec2 = Eigen::Matrix<Complex, 2, 1>;
using CVec4 = Eigen::Matrix<Complex, 4, 1>;
using CMat2 = Eigen::Matrix<Complex, 2, 2>;
using CMat4 = Eigen::Matrix<Complex, 4, 4>;
using CMat42 = Eigen::Matrix<Complex, 4, 2>;

/// State ordering of the quadrature-picture model.
enum State : int { Xa0 = 0, Xa90, Xb0, Xb90, Xc0, Xc90, Pos, Mom };

/// Measured quadrature ordering: (X_B,0, X_B,pi/2, X_C,0, X_C,pi/2).
enum Channel : int { ChB0 = 0, ChB90, ChC0, ChC90 };

/// Vacuum entry points. The two detection-loss ports only exist after the
/// photodetector mixing step.
enum class Port : int { BIn = 0, CIn, Na, Nb, Nc, PdB, PdC };

inline constexpr std::size_t kDynamicPorts = 5;
inline constexpr std::size_t kAllPorts = 7;
inline constexpr std::array<Port, kAllPorts> kPorts = {Port::BIn, Port::CIn, Port::Na, Port::Nb,
                                                       Port::Nc,  Port::PdB, Port::PdC};

std::string_view port_label(Port p);

/**
 * Real LTI model  dX/dt = A X + sum_j B_j X_j + d h,
 * X_out = C X + sum_j D_j X_j  (before detection loss).
 */
struct StateSpaceModel {
    Mat8 drift = Mat8::Zero();
    std::array<Mat82, kDynamicPorts> noise_inputs{};
    Vec8 signal_drive = Vec8::Zero();
    Mat48 output_map = Mat48::Zero();
    std::array<Mat42, kDynamicPorts> feedthrough{};
    DerivedRates rates;

    const Mat82& input(Port p) const { return noise_inputs.at(static_cast<std::size_t>(p)); }
    const Mat42& direct(Port p) const { return feedthrough.at(static_cast<std::size_t>(p)); }

    /// Diagonal similarity that brings the mechanical rows to the scale of the optical rates.
    /// Returns s with A_balanced = S^-1 A S, S = diag(s).
    Vec8 balancing() const;
};

/// Signal and noise transfer at a single angular frequency Omega.
struct FrequencyResponse {
    double omega = 0.0;
    double detection_loss = 0.0;
    double pump_phase = 0.0;
    CVec4 signal_T = CVec4::Zero();
    std::array<CMat42, kAllPorts> noise_R{};

    const CMat42& R(Port p) const { return noise_R.at(static_cast<std::size_t>(p)); }
};

Mat8 build_drift_matrix(const DerivedRates& rates);
StateSpaceModel build_state_space(const DerivedRates& rates);

/// Fourier convention d/dt -> -i Omega. Throws SingularSystem at the free-mass pole.
FrequencyResponse frequency_response(const StateSpaceModel& model, double omega, double detection_loss);

}  // namespace squeezer
