#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace squeezer {

/// How the squeezer parameter chi is specified: relative to the threshold or in rad/s.
struct SqueezerDrive {
    enum class Mode { ratio, absolute };
    Mode mode = Mode::ratio;
    double value = 0.0;

    static SqueezerDrive ratio(double r) { return {Mode::ratio, r}; }
    static SqueezerDrive absolute(double chi) { return {Mode::absolute, chi}; }

    bool operator==(const SqueezerDrive&) const = default;
};

/**
 * User-facing interferometer parameters. Lengths in m, power in W, mass in kg,
 * transmissions and losses as power fractions, squeezing in dB, angles in rad.
 *
 * Defaults are the long-SRC baseline design (2 um carrier, 4 km arms, 3 MW).
 */
struct PhysicalConfig {
    double carrier_wavelength = 2e-6;
    double arm_length = 4000.0;
    double src_length = 366.5;
    double circulating_power = 3e6;
    double mirror_mass = 200.0;
    double itm_transmission = 0.0643;
    double srm_transmission_signal = 0.0152;
    double srm_transmission_idler = 0.0;
    double intracavity_loss_arm = 100e-6;
    double intracavity_loss_signal = 1000e-6;
    double intracavity_loss_idler = 1000e-6;
    double detection_loss = 0.1;
    double injected_squeezing_db = 10.0;
    bool squeeze_signal_port = true;
    /// Unset means "scheme dependent": off for signal-mode schemes, on for idler and filter schemes.
    std::optional<bool> squeeze_idler_port;
    double pump_phase = 0.0;
    SqueezerDrive drive = SqueezerDrive::ratio(0.0);
    /// Signal/idler separation Delta in rad/s. Kept for the record; it drops out of the
    /// interaction-frame dynamics.
    double idler_separation = 0.0;

    bool operator==(const PhysicalConfig&) const = default;

    double carrier_angular_frequency() const;
};

/// Internal angular rates (rad/s) and couplings derived from a PhysicalConfig.
struct DerivedRates {
    double gamma_a = 0.0;
    double gamma_b_readout = 0.0;
    double gamma_c_readout = 0.0;
    double gamma_b_loss = 0.0;
    double gamma_c_loss = 0.0;
    double gamma_b_tot = 0.0;
    double gamma_c_tot = 0.0;
    double sloshing = 0.0;
    double om_coupling = 0.0;  ///< alpha
    double reduced_mass = 0.0; ///< mu = M / 4
    double chi = 0.0;
    double pump_phase = 0.0;
    double arm_length = 0.0;   ///< carried along for the strain drive

    bool operator==(const DerivedRates&) const = default;

    /// Copy with a different squeezer parameter.
    DerivedRates with_chi(double new_chi) const {
        DerivedRates r = *this;
        r.chi = new_chi;
        return r;
    }
};

/// Cavity decay rate gamma = -c/(4L) ln(1 - T).
double transmission_to_rate(double transmission, double length);

/// Coupled-cavity sloshing frequency c sqrt(T_ITM / (4 L_arm L_SRC)).
double sloshing_frequency(double itm_transmission, double arm_length, double src_length);

/// Optomechanical coupling alpha = sqrt(2 P omega0 hbar / (c L_arm)).
double optomechanical_coupling(double circulating_power, double carrier_angular_frequency, double arm_length);

/// Throws ValidationError describing the first violated invariant.
void validate(const PhysicalConfig& cfg);

/// All rates with chi left at zero; the drive is not resolved.
DerivedRates derive_rates_unpumped(const PhysicalConfig& cfg);

/// Full derivation. A ratio drive is resolved against the numerically located threshold.
DerivedRates derive_rates(const PhysicalConfig& cfg);

// Configuration documents: one `key = value` per line, `#` starts a comment.
PhysicalConfig parse_config(std::string_view text);
PhysicalConfig load_config(const std::string& path);
std::string serialize_config(const PhysicalConfig& cfg);

/// Applies one `key=value` override on top of an existing config and revalidates.
void apply_override(PhysicalConfig& cfg, std::string_view assignment);

}  // namespace squeezer
