#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "squeezer/params.hpp"
#include "squeezer/readout.hpp"

namespace squeezer::cli {

inline constexpr const char* kToolVersion = "1.0.0";
inline constexpr int kCsvSchemaVersion = 1;
inline constexpr double kSingleModeWarningHz = 10e3;

struct GridSpec {
    double fmin_hz = 10.0;
    double fmax_hz = 10e3;
    int points = 1000;
};

/// Output of a command: the primary document (CSV or JSON text) plus the run manifest.
struct CommandResult {
    std::string body;
    nlohmann::json manifest;
    std::vector<std::string> warnings;
};

/// Config file (or defaults) with `key=value` overrides applied in order.
PhysicalConfig resolve_config(const std::optional<std::string>& path, const std::vector<std::string>& overrides);

CommandResult cmd_rates(const PhysicalConfig& cfg);
CommandResult cmd_sensitivity(const PhysicalConfig& cfg, SchemeKind scheme, const GridSpec& grid,
                              const std::optional<std::string>& overlay_path = std::nullopt);
CommandResult cmd_poles(const PhysicalConfig& cfg, const std::vector<double>& chi_grid);
CommandResult cmd_loss_sweep(const PhysicalConfig& cfg, const GridSpec& grid, const std::vector<double>& rpd_grid,
                             double chi_ratio, SchemeKind scheme = SchemeKind::signal_fixed);
CommandResult cmd_compare(const PhysicalConfig& cfg, const GridSpec& grid);

/// Two-column (frequency_hz, strain_asd) curve; comma or whitespace separated, `#` comments.
std::vector<std::pair<double, double>> read_overlay(const std::string& path);

/// Log-log interpolation; NaN outside the curve's range.
double interpolate_overlay(const std::vector<std::pair<double, double>>& curve, double frequency_hz);

/// Parses "0,0.1,0.2" into numbers.
std::vector<double> parse_list(const std::string& text);

}  // namespace squeezer::cli
