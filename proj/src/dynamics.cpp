#include "squeezer/dynamics.hpp"

#include <cmath>
#include <sstream>

#include "squeezer/constants.hpp"
#include "squeezer/error.hpp"

namespace squeezer {

std::string_view port_label(Port p) {
    switch (p) {
        case Port::BIn: return "B_in";
        case Port::CIn: return "C_in";
        case Port::Na: return "N_a";
        case Port::Nb: return "N_b";
        case Port::Nc: return "N_c";
        case Port::PdB: return "N_PD,b";
        case Port::PdC: return "N_PD,c";
    }
    return "?";
}

Mat8 build_drift_matrix(const DerivedRates& r) {
    const double ws = r.sloshing;
    const double chi = r.chi;
    const double cphi = std::cos(r.pump_phase);
    const double sphi = std::sin(r.pump_phase);
    const double drive = r.om_coupling / kHbar;

    Mat8 A = Mat8::Zero();

    // Arm mode: sloshing, strain/position drive on the phase quadrature.
    A(Xa0, Xa0) = -r.gamma_a;
    A(Xa0, Xb0) = -ws;
    A(Xa90, Xa90) = -r.gamma_a;
    A(Xa90, Xb90) = -ws;
    A(Xa90, Pos) = drive;

    // Signal mode. -i chi e^{i phi} c^dagger projected on the quadratures.
    A(Xb0, Xb0) = -r.gamma_b_tot;
    A(Xb0, Xa0) = ws;
    A(Xb0, Xc0) = chi * sphi;
    A(Xb0, Xc90) = -chi * cphi;
    A(Xb90, Xb90) = -r.gamma_b_tot;
    A(Xb90, Xa90) = ws;
    A(Xb90, Xc0) = -chi * cphi;
    A(Xb90, Xc90) = -chi * sphi;

    // Idler mode, mirror image of the signal coupling.
    A(Xc0, Xc0) = -r.gamma_c_tot;
    A(Xc0, Xb0) = chi * sphi;
    A(Xc0, Xb90) = -chi * cphi;
    A(Xc90, Xc90) = -r.gamma_c_tot;
    A(Xc90, Xb0) = -chi * cphi;
    A(Xc90, Xb90) = -chi * sphi;

    // Free differential mass.
    A(Pos, Mom) = 1.0 / r.reduced_mass;
    A(Mom, Xa0) = r.om_coupling;
    return A;
}

namespace {

Mat82 port_input(State amplitude_row, double rate) {
    Mat82 B = Mat82::Zero();
    const double k = std::sqrt(2.0 * rate);
    B(amplitude_row, 0) = k;
    B(amplitude_row + 1, 1) = k;
    return B;
}

}  // namespace

StateSpaceModel build_state_space(const DerivedRates& rates) {
    StateSpaceModel m;
    m.rates = rates;
    m.drift = build_drift_matrix(rates);

    m.noise_inputs[static_cast<std::size_t>(Port::BIn)] = port_input(Xb0, rates.gamma_b_readout);
    m.noise_inputs[static_cast<std::size_t>(Port::CIn)] = port_input(Xc0, rates.gamma_c_readout);
    m.noise_inputs[static_cast<std::size_t>(Port::Na)] = port_input(Xa0, rates.gamma_a);
    m.noise_inputs[static_cast<std::size_t>(Port::Nb)] = port_input(Xb0, rates.gamma_b_loss);
    m.noise_inputs[static_cast<std::size_t>(Port::Nc)] = port_input(Xc0, rates.gamma_c_loss);

    m.signal_drive(Xa90) = -rates.om_coupling / kHbar * rates.arm_length;

    // out = -in + sqrt(2 gamma_R) * intracavity, for both readout ports.
    const double kb = std::sqrt(2.0 * rates.gamma_b_readout);
    const double kc = std::sqrt(2.0 * rates.gamma_c_readout);
    m.output_map(ChB0, Xb0) = kb;
    m.output_map(ChB90, Xb90) = kb;
    m.output_map(ChC0, Xc0) = kc;
    m.output_map(ChC90, Xc90) = kc;

    for (auto& D : m.feedthrough) D.setZero();
    auto& db = m.feedthrough[static_cast<std::size_t>(Port::BIn)];
    db(ChB0, 0) = -1.0;
    db(ChB90, 1) = -1.0;
    auto& dc = m.feedthrough[static_cast<std::size_t>(Port::CIn)];
    dc(ChC0, 0) = -1.0;
    dc(ChC90, 1) = -1.0;
    return m;
}

Vec8 StateSpaceModel::balancing() const {
    Vec8 s = Vec8::Ones();
    const double alpha = rates.om_coupling;
    if (alpha > 0.0 && rates.reduced_mass > 0.0) {
        // Equalise the three links of the radiation-pressure loop to kappa = (alpha^2/(hbar mu))^(1/3).
        const double kappa = std::cbrt(alpha * alpha / (kHbar * rates.reduced_mass));
        s(Pos) = kappa * kHbar / alpha;
        s(Mom) = alpha / kappa;
    }
    return s;
}

FrequencyResponse frequency_response(const StateSpaceModel& model, double omega, double detection_loss) {
    using CMat8 = Eigen::Matrix<Complex, 8, 8>;
    using Rhs = Eigen::Matrix<Complex, 8, 2 * kDynamicPorts + 1>;

    if (!(detection_loss >= 0.0 && detection_loss < 1.0))
        throw InvalidParameter("detection loss must satisfy 0 <= R_PD < 1");

    const Vec8 s = model.balancing();
    const Mat8 A = s.cwiseInverse().asDiagonal() * model.drift * s.asDiagonal();

    CMat8 M = -A.cast<Complex>();
    M.diagonal().array() += Complex(0.0, -omega);

    Rhs rhs;
    for (std::size_t j = 0; j < kDynamicPorts; ++j)
        rhs.middleCols<2>(2 * static_cast<Eigen::Index>(j)) =
            (s.cwiseInverse().asDiagonal() * model.noise_inputs[j]).cast<Complex>();
    rhs.col(2 * kDynamicPorts) = (s.cwiseInverse().asDiagonal() * model.signal_drive).cast<Complex>();

    Eigen::PartialPivLU<CMat8> lu(M);
    const double rcond = lu.rcond();
    if (!(rcond > 1e-13)) {
        std::ostringstream os;
        os << "singular system at Omega = " << omega << " rad/s (reciprocal condition " << rcond << ")";
        throw SingularSystem(os.str());
    }
    const Rhs sol = lu.solve(rhs);
    if (!sol.allFinite()) throw SingularSystem("non-finite solution of the frequency-domain system");

    const Eigen::Matrix<Complex, 4, 8> C = (model.output_map * s.asDiagonal()).cast<Complex>();
    const double keep = std::sqrt(1.0 - detection_loss);
    const double lost = std::sqrt(detection_loss);

    FrequencyResponse fr;
    fr.omega = omega;
    fr.detection_loss = detection_loss;
    fr.pump_phase = model.rates.pump_phase;
    fr.signal_T = keep * (C * sol.col(2 * kDynamicPorts));
    for (std::size_t j = 0; j < kDynamicPorts; ++j) {
        const auto block = sol.middleCols<2>(2 * static_cast<Eigen::Index>(j));
        fr.noise_R[j] = keep * (C * block + model.feedthrough[j].cast<Complex>());
    }
    CMat42 pd_b = CMat42::Zero();
    pd_b(ChB0, 0) = lost;
    pd_b(ChB90, 1) = lost;
    CMat42 pd_c = CMat42::Zero();
    pd_c(ChC0, 0) = lost;
    pd_c(ChC90, 1) = lost;
    fr.noise_R[static_cast<std::size_t>(Port::PdB)] = pd_b;
    fr.noise_R[static_cast<std::size_t>(Port::PdC)] = pd_c;
    return fr;
}

}  // namespace squeezer
