#pragma once

#include <array>
#include <optional>
#include <string_view>

#include "squeezer/dynamics.hpp"
#include "squeezer/params.hpp"

namespace squeezer {

enum class SchemeKind : int {
    signal_fixed = 0,
    idler_fixed,
    signal_variational,
    idler_variational,
    filter_only,
    filter_variational,
};

inline constexpr std::size_t kSchemeCount = 6;
inline constexpr std::array<SchemeKind, kSchemeCount> kSchemes = {
    SchemeKind::signal_fixed,       SchemeKind::idler_fixed, SchemeKind::signal_variational,
    SchemeKind::idler_variational, SchemeKind::filter_only, SchemeKind::filter_variational};

std::string_view scheme_name(SchemeKind kind);
std::optional<SchemeKind> parse_scheme(std::string_view name);
bool uses_idler_channel(SchemeKind kind);

/// External squeezing actually injected for a given scheme.
struct SqueezeSettings {
    double level_db = 0.0;
    bool signal_port = false;
    bool idler_port = false;
};

/// Resolves the config flags; an unset idler flag follows the scheme
/// (off for signal-mode schemes, on for idler and filter schemes).
SqueezeSettings resolve_squeeze(const PhysicalConfig& cfg, SchemeKind kind);

/// Readout of one frequency bin. The measured combination is
/// y = conj(g_b) X_B,theta_b + conj(g_c) X_C,theta_c.
struct FilterSolution {
    double omega = 0.0;
    double theta_b = 0.0;
    double theta_c = 0.0;
    Complex g_b{1.0, 0.0};
    Complex g_c{0.0, 0.0};
    double snr_density = 0.0;   ///< 1 / strain_psd
    double strain_psd = 0.0;    ///< 1/Hz
    double noise_psd = 0.0;     ///< PSD of y, vacuum = 1
    double signal_gain = 0.0;   ///< |response of y to strain|
    double squeeze_angle_b = 0.0;
    double squeeze_angle_c = 0.0;
    bool converged = true;
};

struct ChannelStatistics {
    CVec2 signal;
    CMat2 noise;
};

/// Homodyne projection U = [[cos tb, sin tb, 0, 0], [0, 0, cos tc, sin tc]].
ChannelStatistics channel_statistics(const CMat4& noise, const CVec4& signal_T, double theta_b, double theta_c);

struct FilterResult {
    CVec2 g;           ///< unit norm, g_b real and non-negative when nonzero
    double strain_psd; ///< 1 / (s^H N^-1 s)
};

/// Maximum-SNR combination of two channels. Throws DegenerateNoise if N is not positive definite.
FilterResult optimal_filter(const CVec2& signal, const CMat2& noise);

struct VariationalResult {
    double theta;      ///< [0, pi)
    double strain_psd;
};

/// Best homodyne angle for one mode: maximises |v.t|^2 / v^T Re(N) v over v = (cos, sin).
VariationalResult variational_angle(const CVec2& signal, const CMat2& noise);

/// Readout functional w with y = w^T X_meas.
CVec4 readout_vector(double theta_b, double theta_c, Complex g_b, Complex g_c);

/// Optimises one scheme at the frequency of `fr`, including the injected squeeze angles.
FilterSolution optimize_scheme(const FrequencyResponse& fr, const SqueezeSettings& squeeze, SchemeKind kind);

/// Convenience overload that builds the model for `cfg`.
FilterSolution optimize_scheme(const PhysicalConfig& cfg, SchemeKind kind, double omega);

/// All six schemes at one frequency, each with its own squeeze settings, lower
/// schemes seeding the ones that contain them.
std::array<FilterSolution, kSchemeCount> optimize_all(const FrequencyResponse& fr, const PhysicalConfig& cfg);

}  // namespace squeezer
