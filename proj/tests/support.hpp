// Shared fixtures and independent oracles for the test and acceptance binaries.
#pragma once

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <Eigen/Dense>

#include "squeezer/dynamics.hpp"
#include "squeezer/params.hpp"
#include "squeezer/readout.hpp"
#include "squeezer/spectra.hpp"

namespace fixtures {

using namespace squeezer;

inline constexpr double kPi = std::numbers::pi;

/// Long-SRC baseline design.
inline PhysicalConfig baseline(double chi_ratio = 0.0) {
    PhysicalConfig c;
    c.drive = SqueezerDrive::ratio(chi_ratio);
    return c;
}

/// Baseline with idler readout opened, as used for the readout comparison.
inline PhysicalConfig open_idler(double chi_ratio = 0.95) {
    PhysicalConfig c = baseline(chi_ratio);
    c.srm_transmission_idler = 1.54e-4;
    return c;
}

/// Baseline with every optical loss and the detection loss removed.
inline PhysicalConfig lossless(double chi_ratio = 0.0) {
    PhysicalConfig c = baseline(chi_ratio);
    c.intracavity_loss_arm = 0.0;
    c.intracavity_loss_signal = 0.0;
    c.intracavity_loss_idler = 0.0;
    c.detection_loss = 0.0;
    return c;
}

/// Voyager-like column: short SRC, small ITM transmission.
inline PhysicalConfig voyager() {
    PhysicalConfig c = baseline();
    c.itm_transmission = 0.002;
    c.src_length = 56.0;
    c.srm_transmission_signal = 0.046;
    return c;
}

/// Random configuration around the baseline. `lossless_only` zeroes every loss.
inline PhysicalConfig random_config(std::mt19937_64& rng, bool lossless_only) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    auto logu = [&](double lo, double hi) { return lo * std::pow(hi / lo, u(rng)); };
    PhysicalConfig c;
    c.itm_transmission = logu(0.005, 0.1);
    c.src_length = logu(50.0, 500.0);
    c.srm_transmission_signal = logu(0.003, 0.05);
    c.srm_transmission_idler = u(rng) < 0.3 ? 0.0 : logu(1e-5, 1e-2);
    c.circulating_power = logu(3e5, 5e6);
    c.mirror_mass = logu(40.0, 200.0);
    c.pump_phase = 2.0 * kPi * u(rng);
    c.drive = SqueezerDrive::ratio(0.9 * u(rng));
    if (lossless_only) {
        c.intracavity_loss_arm = c.intracavity_loss_signal = c.intracavity_loss_idler = 0.0;
        c.detection_loss = 0.0;
    } else {
        c.intracavity_loss_arm = logu(1e-6, 1e-3);
        c.intracavity_loss_signal = logu(1e-5, 1e-2);
        c.intracavity_loss_idler = logu(1e-5, 1e-2);
        c.detection_loss = 0.3 * u(rng);
    }
    return c;
}

/// Rotation mapping (X_0, X_pi/2) onto (X_phi, X_phi+pi/2).
inline Eigen::Matrix2d quadrature_rotation(double phi) {
    Eigen::Matrix2d r;
    r << std::cos(phi), std::sin(phi), -std::sin(phi), std::cos(phi);
    return r;
}

}  // namespace fixtures

namespace oracle {

using namespace squeezer;

/// alpha = sqrt(2 P omega0 hbar / (c L)) with omega0 = 2 pi c / lambda, in 50-digit arithmetic.
inline double alpha_extended(double power, double wavelength, double arm_length) {
    using F = boost::multiprecision::cpp_bin_float_50;
    const F c = 299792458;
    const F hbar("1.054571817e-34");
    const F omega0 = 2 * boost::math::constants::pi<F>() * c / F(wavelength);
    return static_cast<double>(sqrt(2 * F(power) * omega0 * hbar / (c * F(arm_length))));
}

/// Drift matrix and strain drive obtained by writing the Heisenberg-Langevin equations for
/// (a, a+, b, b+, c, c+, x, p) with complex coefficients, then changing basis to
/// X_0 = (o + o+)/sqrt2, X_pi/2 = -i(o - o+)/sqrt2.
struct QuadratureModel {
    Mat8 drift;
    Vec8 drive;
    std::array<Mat82, kDynamicPorts> inputs;
    double max_imag_residue = 0.0;
};

inline QuadratureModel symbolic_transform(const DerivedRates& r) {
    using C = std::complex<double>;
    using CM8 = Eigen::Matrix<C, 8, 8>;
    const C i(0.0, 1.0);
    const double hbar = 1.054571817e-34;
    const C pump = std::exp(i * r.pump_phase);
    enum { a, ad, b, bd, c, cd, x, p };

    CM8 K = CM8::Zero();
    K(a, b) = -r.sloshing;
    K(a, x) = i * r.om_coupling / (std::sqrt(2.0) * hbar);
    K(a, a) = -r.gamma_a;
    K(ad, bd) = -r.sloshing;
    K(ad, x) = -i * r.om_coupling / (std::sqrt(2.0) * hbar);
    K(ad, ad) = -r.gamma_a;
    K(b, a) = r.sloshing;
    K(b, cd) = -i * r.chi * pump;
    K(b, b) = -r.gamma_b_tot;
    K(bd, ad) = r.sloshing;
    K(bd, c) = std::conj(-i * r.chi * pump);
    K(bd, bd) = -r.gamma_b_tot;
    K(c, bd) = -i * r.chi * pump;
    K(c, c) = -r.gamma_c_tot;
    K(cd, b) = std::conj(-i * r.chi * pump);
    K(cd, cd) = -r.gamma_c_tot;
    K(x, p) = 1.0 / r.reduced_mass;
    K(p, a) = r.om_coupling / std::sqrt(2.0);
    K(p, ad) = r.om_coupling / std::sqrt(2.0);

    Eigen::Matrix<C, 8, 1> dv = Eigen::Matrix<C, 8, 1>::Zero();
    dv(a) = -i * r.om_coupling * r.arm_length / (std::sqrt(2.0) * hbar);
    dv(ad) = std::conj(dv(a));

    CM8 Q = CM8::Zero();
    const double s = 1.0 / std::sqrt(2.0);
    for (int m = 0; m < 3; ++m) {
        Q(2 * m, 2 * m) = s;
        Q(2 * m, 2 * m + 1) = s;
        Q(2 * m + 1, 2 * m) = -i * s;
        Q(2 * m + 1, 2 * m + 1) = i * s;
    }
    Q(x, x) = 1.0;
    Q(p, p) = 1.0;
    const CM8 Qinv = Q.inverse();
    const CM8 A = Q * K * Qinv;
    const auto d = (Q * dv).eval();

    QuadratureModel out;
    out.drift = A.real();
    out.drive = d.real();
    out.max_imag_residue = std::max(A.imag().cwiseAbs().maxCoeff(), d.imag().cwiseAbs().maxCoeff());

    // Each input port enters its own mode as sqrt(2 gamma) (o_in, o_in+).
    Eigen::Matrix<C, 2, 2> q2;
    q2 << s, s, -i * s, i * s;
    const Eigen::Matrix<C, 2, 2> q2inv = q2.inverse();
    const std::array<std::pair<int, double>, kDynamicPorts> ports = {
        std::pair{b, r.gamma_b_readout}, {c, r.gamma_c_readout}, {a, r.gamma_a}, {b, r.gamma_b_loss},
        {c, r.gamma_c_loss}};
    for (std::size_t j = 0; j < kDynamicPorts; ++j) {
        Eigen::Matrix<C, 8, 2> Bv = Eigen::Matrix<C, 8, 2>::Zero();
        Bv(ports[j].first, 0) = std::sqrt(2.0 * ports[j].second);
        Bv(ports[j].first + 1, 1) = std::sqrt(2.0 * ports[j].second);
        out.inputs[j] = (Q * Bv * q2inv).real();
    }
    return out;
}

/// Squeeze angle minimising the readout's PSD by scanning `n` angles in [0, pi).
inline double grid_squeeze_angle(const FrequencyResponse& fr, double level_db, Port port, const CVec4& w,
                                 int n = 1800) {
    double best = 0.0;
    double best_psd = std::numeric_limits<double>::infinity();
    for (int k = 0; k < n; ++k) {
        const double angle = std::numbers::pi * k / n;
        auto inputs = vacuum_inputs();
        for (auto& in : inputs)
            if (in.port == port) in.psd = squeezed_input_psd(level_db, angle);
        const CMat4 S = noise_psd_matrix(fr, inputs);
        const double psd = (w.transpose() * S * w.conjugate())(0).real();
        if (psd < best_psd) {
            best_psd = psd;
            best = angle;
        }
    }
    return best;
}

/// Minimum of (g^H N g) / |g^H s|^2 over g = (cos a, sin a e^{ib}), n x n grid.
inline double grid_filter_psd(const CVec2& s, const CMat2& N, int n = 100) {
    double best = std::numeric_limits<double>::infinity();
    for (int ia = 0; ia <= n; ++ia) {
        const double a = 0.5 * std::numbers::pi * ia / n;
        for (int ib = 0; ib < n; ++ib) {
            const double b = 2.0 * std::numbers::pi * ib / n;
            CVec2 g(std::cos(a), std::polar(std::sin(a), b));
            const double noise = (g.adjoint() * N * g)(0).real();
            const double gain = std::norm((g.adjoint() * s)(0));
            if (gain > 0.0) best = std::min(best, noise / gain);
        }
    }
    return best;
}

/// Minimum single-quadrature strain PSD over n homodyne angles; returns (angle, psd).
inline std::pair<double, double> grid_variational(const CVec2& s, const CMat2& N, int n = 10000) {
    std::pair<double, double> best{0.0, std::numeric_limits<double>::infinity()};
    for (int k = 0; k < n; ++k) {
        const double th = std::numbers::pi * k / n;
        const Eigen::Vector2d v(std::cos(th), std::sin(th));
        const double noise = v.dot(N.real() * v);
        const double gain = std::norm(v(0) * s(0) + v(1) * s(1));
        if (gain > 0.0 && noise / gain < best.second) best = {th, noise / gain};
    }
    return best;
}

/// Angular distance modulo pi.
inline double angle_distance_pi(double x, double y) {
    double d = std::fmod(std::abs(x - y), std::numbers::pi);
    return std::min(d, std::numbers::pi - d);
}

}  // namespace oracle
