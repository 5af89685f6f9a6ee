#include "squeezer/params.hpp"

#include <cmath>
#include <sstream>

#include "squeezer/constants.hpp"
#include "squeezer/error.hpp"
#include "squeezer/stability.hpp"

namespace squeezer {

double PhysicalConfig::carrier_angular_frequency() const { return kTwoPi * kSpeedOfLight / carrier_wavelength; }

double transmission_to_rate(double transmission, double length) {
    if (!(transmission >= 0.0 && transmission < 1.0)) {
        std::ostringstream os;
        os << "invalid transmission " << transmission << ": must satisfy 0 <= T < 1";
        throw InvalidParameter(os.str());
    }
    if (!(length > 0.0)) {
        std::ostringstream os;
        os << "invalid length " << length << ": must be positive";
        throw InvalidParameter(os.str());
    }
    // log1p keeps the small-T regime accurate; -0.0 is folded to +0.0.
    return -kSpeedOfLight / (4.0 * length) * std::log1p(-transmission) + 0.0;
}

double sloshing_frequency(double itm_transmission, double arm_length, double src_length) {
    if (!(arm_length > 0.0) || !(src_length > 0.0)) throw InvalidParameter("invalid length: cavity lengths must be positive");
    if (!(itm_transmission >= 0.0 && itm_transmission < 1.0))
        throw InvalidParameter("invalid transmission: ITM transmission must satisfy 0 <= T < 1");
    return kSpeedOfLight * std::sqrt(itm_transmission / (4.0 * arm_length * src_length));
}

double optomechanical_coupling(double circulating_power, double carrier_angular_frequency, double arm_length) {
    if (!(circulating_power >= 0.0)) throw InvalidParameter("invalid parameter: circulating power must be >= 0");
    if (!(carrier_angular_frequency > 0.0)) throw InvalidParameter("invalid parameter: carrier frequency must be positive");
    if (!(arm_length > 0.0)) throw InvalidParameter("invalid parameter: arm length must be positive");
    return std::sqrt(2.0 * circulating_power * carrier_angular_frequency * kHbar / (kSpeedOfLight * arm_length));
}

namespace {

void require(bool ok, const char* key, const char* invariant, double value) {
    if (ok) return;
    std::ostringstream os;
    os << "invalid value for " << key << " = " << value << ": requires " << invariant;
    throw ValidationError(os.str());
}

}  // namespace

void validate(const PhysicalConfig& c) {
    require(c.carrier_wavelength > 0.0, "carrier_wavelength", "> 0", c.carrier_wavelength);
    require(c.arm_length > 0.0, "arm_length", "> 0", c.arm_length);
    require(c.src_length > 0.0, "src_length", "> 0", c.src_length);
    require(c.circulating_power > 0.0, "circulating_power", "> 0", c.circulating_power);
    require(c.mirror_mass > 0.0, "mirror_mass", "> 0", c.mirror_mass);
    require(c.itm_transmission > 0.0 && c.itm_transmission < 1.0, "itm_transmission", "0 < T < 1",
            c.itm_transmission);
    auto fraction = [](double v) { return v >= 0.0 && v < 1.0; };
    require(fraction(c.srm_transmission_signal), "srm_transmission_signal", "0 <= T < 1", c.srm_transmission_signal);
    require(fraction(c.srm_transmission_idler), "srm_transmission_idler", "0 <= T < 1", c.srm_transmission_idler);
    require(fraction(c.intracavity_loss_arm), "intracavity_loss_arm", "0 <= T < 1", c.intracavity_loss_arm);
    require(fraction(c.intracavity_loss_signal), "intracavity_loss_signal", "0 <= T < 1", c.intracavity_loss_signal);
    require(fraction(c.intracavity_loss_idler), "intracavity_loss_idler", "0 <= T < 1", c.intracavity_loss_idler);
    require(fraction(c.detection_loss), "detection_loss", "0 <= R < 1", c.detection_loss);
    require(c.injected_squeezing_db >= 0.0, "injected_squeezing_db", ">= 0", c.injected_squeezing_db);
    require(std::isfinite(c.pump_phase), "pump_phase", "a finite angle", c.pump_phase);
    require(std::isfinite(c.idler_separation), "idler_separation", "a finite value", c.idler_separation);
    if (c.drive.mode == SqueezerDrive::Mode::ratio)
        require(c.drive.value >= 0.0 && c.drive.value < 1.0, "chi_ratio", "0 <= chi/chi_thr < 1", c.drive.value);
    else
        require(c.drive.value >= 0.0 && std::isfinite(c.drive.value), "chi_abs", ">= 0", c.drive.value);
}

DerivedRates derive_rates_unpumped(const PhysicalConfig& cfg) {
    validate(cfg);
    DerivedRates r;
    r.gamma_a = transmission_to_rate(cfg.intracavity_loss_arm, cfg.arm_length);
    r.gamma_b_readout = transmission_to_rate(cfg.srm_transmission_signal, cfg.src_length);
    r.gamma_c_readout = transmission_to_rate(cfg.srm_transmission_idler, cfg.src_length);
    r.gamma_b_loss = transmission_to_rate(cfg.intracavity_loss_signal, cfg.src_length);
    r.gamma_c_loss = transmission_to_rate(cfg.intracavity_loss_idler, cfg.src_length);
    r.gamma_b_tot = r.gamma_b_readout + r.gamma_b_loss;
    r.gamma_c_tot = r.gamma_c_readout + r.gamma_c_loss;
    r.sloshing = sloshing_frequency(cfg.itm_transmission, cfg.arm_length, cfg.src_length);
    r.om_coupling = optomechanical_coupling(cfg.circulating_power, cfg.carrier_angular_frequency(), cfg.arm_length);
    r.reduced_mass = cfg.mirror_mass / 4.0;
    r.pump_phase = cfg.pump_phase;
    r.arm_length = cfg.arm_length;
    r.chi = 0.0;
    return r;
}

DerivedRates derive_rates(const PhysicalConfig& cfg) {
    DerivedRates r = derive_rates_unpumped(cfg);
    if (cfg.drive.mode == SqueezerDrive::Mode::absolute) {
        r.chi = cfg.drive.value;
    } else if (cfg.drive.value > 0.0) {
        r.chi = cfg.drive.value * threshold_numeric(r);
    }
    return r;
}

}  // namespace squeezer
