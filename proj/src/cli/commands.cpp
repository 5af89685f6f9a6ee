#include "squeezer/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "squeezer/constants.hpp"
#include "squeezer/error.hpp"
#include "squeezer/spectra.hpp"
#include "squeezer/stability.hpp"
#include "squeezer/sweep.hpp"

namespace squeezer::cli {

namespace {

std::string num(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

std::string header(const char* kind) {
    return "# squeezer-budget " + std::string(kind) + " v" + std::to_string(kCsvSchemaVersion) + "\n";
}

nlohmann::json config_json(const PhysicalConfig& c) {
    nlohmann::json j;
    j["carrier_wavelength"] = c.carrier_wavelength;
    j["arm_length"] = c.arm_length;
    j["src_length"] = c.src_length;
    j["circulating_power"] = c.circulating_power;
    j["mirror_mass"] = c.mirror_mass;
    j["itm_transmission"] = c.itm_transmission;
    j["srm_transmission_signal"] = c.srm_transmission_signal;
    j["srm_transmission_idler"] = c.srm_transmission_idler;
    j["intracavity_loss_arm"] = c.intracavity_loss_arm;
    j["intracavity_loss_signal"] = c.intracavity_loss_signal;
    j["intracavity_loss_idler"] = c.intracavity_loss_idler;
    j["detection_loss"] = c.detection_loss;
    j["injected_squeezing_db"] = c.injected_squeezing_db;
    j["squeeze_signal_port"] = c.squeeze_signal_port;
    if (c.squeeze_idler_port)
        j["squeeze_idler_port"] = *c.squeeze_idler_port;
    else
        j["squeeze_idler_port"] = "auto";
    j["pump_phase"] = c.pump_phase;
    if (c.drive.mode == SqueezerDrive::Mode::ratio)
        j["chi_ratio"] = c.drive.value;
    else
        j["chi_abs"] = c.drive.value;
    j["idler_separation"] = c.idler_separation;
    return j;
}

nlohmann::json rates_json(const DerivedRates& r) {
    auto rate = [](double v) { return nlohmann::json{{"rad_s", v}, {"hz", to_hz(v)}}; };
    nlohmann::json j;
    j["gamma_a"] = rate(r.gamma_a);
    j["gamma_b_readout"] = rate(r.gamma_b_readout);
    j["gamma_c_readout"] = rate(r.gamma_c_readout);
    j["gamma_b_loss"] = rate(r.gamma_b_loss);
    j["gamma_c_loss"] = rate(r.gamma_c_loss);
    j["gamma_b_tot"] = rate(r.gamma_b_tot);
    j["gamma_c_tot"] = rate(r.gamma_c_tot);
    j["sloshing"] = rate(r.sloshing);
    j["chi"] = rate(r.chi);
    j["om_coupling"] = r.om_coupling;
    j["reduced_mass"] = r.reduced_mass;
    j["pump_phase"] = r.pump_phase;
    return j;
}

nlohmann::json manifest(const char* command, const PhysicalConfig& cfg, const DerivedRates& rates, double threshold) {
    nlohmann::json m;
    m["command"] = command;
    m["tool"] = "squeezer-budget";
    m["tool_version"] = kToolVersion;
    m["csv_schema_version"] = kCsvSchemaVersion;
    m["config"] = config_json(cfg);
    m["resolved_config_text"] = serialize_config(cfg);
    m["derived_rates"] = rates_json(rates);
    m["chi_threshold_rad_s"] = threshold;
    return m;
}

nlohmann::json grid_json(const GridSpec& g) {
    return {{"spacing", "log"}, {"fmin_hz", g.fmin_hz}, {"fmax_hz", g.fmax_hz}, {"points", g.points}};
}

void check_grid(const GridSpec& g, std::vector<std::string>& warnings) {
    if (g.fmax_hz > kSingleModeWarningHz) {
        warnings.push_back("frequencies above " + num(kSingleModeWarningHz) +
                           " Hz approach the arm free spectral range; the single-mode model is less reliable there");
    }
}

}  // namespace

PhysicalConfig resolve_config(const std::optional<std::string>& path, const std::vector<std::string>& overrides) {
    PhysicalConfig cfg = path ? load_config(*path) : PhysicalConfig{};
    for (const auto& o : overrides) apply_override(cfg, o);
    return cfg;
}

CommandResult cmd_rates(const PhysicalConfig& cfg) {
    const DerivedRates unpumped = derive_rates_unpumped(cfg);
    const double numeric = threshold_numeric(unpumped);
    const double closed = threshold_closed_form(unpumped);
    DerivedRates rates = unpumped;
    rates.chi = cfg.drive.mode == SqueezerDrive::Mode::ratio ? cfg.drive.value * numeric : cfg.drive.value;

    nlohmann::json j;
    j["rates"] = rates_json(rates);
    j["chi_threshold"] = {
        {"numeric_rad_s", numeric},
        {"numeric_hz", to_hz(numeric)},
        {"closed_form_rad_s", closed},
        {"closed_form_hz", to_hz(closed)},
        {"relative_difference", numeric > 0.0 ? (closed - numeric) / numeric : 0.0},
    };
    j["chi_over_threshold"] = numeric > 0.0 ? rates.chi / numeric : 0.0;
    j["below_threshold"] = rates.chi < numeric;

    CommandResult out;
    out.body = j.dump(2) + "\n";
    out.manifest = manifest("rates", cfg, rates, numeric);
    return out;
}

CommandResult cmd_sensitivity(const PhysicalConfig& cfg, SchemeKind scheme, const GridSpec& grid,
                              const std::optional<std::string>& overlay_path) {
    CommandResult out;
    check_grid(grid, out.warnings);
    const OperatingPoint op = prepare(cfg);
    const auto freqs = log_grid(grid.fmin_hz, grid.fmax_hz, grid.points);
    const auto curve = sensitivity_curve(op, scheme, freqs);

    std::vector<std::pair<double, double>> overlay;
    if (overlay_path) overlay = read_overlay(*overlay_path);

    std::ostringstream os;
    os << header("sensitivity");
    os << "frequency_hz,strain_asd,noise_psd,signal_gain,theta_b_rad,theta_c_rad,g_b_re,g_b_im,g_c_re,g_c_im,"
          "sql_strain_asd";
    if (overlay_path) os << ",overlay_strain_asd";
    os << '\n';
    for (std::size_t i = 0; i < freqs.size(); ++i) {
        const auto& s = curve[i];
        os << num(freqs[i]) << ',' << num(std::sqrt(s.strain_psd)) << ',' << num(s.noise_psd) << ','
           << num(s.signal_gain) << ',' << num(s.theta_b) << ',' << num(s.theta_c) << ',' << num(s.g_b.real()) << ','
           << num(s.g_b.imag()) << ',' << num(s.g_c.real()) << ',' << num(s.g_c.imag()) << ','
           << num(std::sqrt(sql_overlay(cfg.mirror_mass, cfg.arm_length, to_angular(freqs[i]))));
        if (overlay_path) os << ',' << num(interpolate_overlay(overlay, freqs[i]));
        os << '\n';
        if (!s.converged)
            out.warnings.push_back("optimizer did not converge at " + num(freqs[i]) + " Hz; best-found value emitted");
    }
    out.body = os.str();
    out.manifest = manifest("sensitivity", cfg, op.rates, op.threshold);
    out.manifest["scheme"] = std::string(scheme_name(scheme));
    out.manifest["grid"] = grid_json(grid);
    const auto sq = resolve_squeeze(cfg, scheme);
    out.manifest["squeezing"] = {
        {"level_db", sq.level_db}, {"signal_port", sq.signal_port}, {"idler_port", sq.idler_port}};
    if (overlay_path) out.manifest["overlay"] = *overlay_path;
    return out;
}

CommandResult cmd_poles(const PhysicalConfig& cfg, const std::vector<double>& chi_grid) {
    const PoleTrajectories tr = pole_trajectories(cfg, chi_grid);
    CommandResult out;
    std::ostringstream os;
    os << header("poles");
    os << "chi_ratio,track_id,re_omega_hz,im_omega_hz,chi_rad_s,re_omega_rad_s,im_omega_rad_s,multiplicity,"
          "ambiguous\n";
    for (const auto& p : tr.points) {
        os << num(p.chi_ratio) << ',' << p.track_id << ',' << num(to_hz(p.pole.real())) << ','
           << num(to_hz(p.pole.imag())) << ',' << num(p.chi) << ',' << num(p.pole.real()) << ','
           << num(p.pole.imag()) << ',' << p.multiplicity << ',' << (p.ambiguous ? 1 : 0) << '\n';
    }
    if (tr.any_ambiguous)
        out.warnings.push_back("pole tracks could not be paired unambiguously at some grid points; see 'ambiguous'");
    out.body = os.str();
    DerivedRates rates = derive_rates_unpumped(cfg);
    out.manifest = manifest("poles", cfg, rates, tr.threshold);
    out.manifest["chi_grid"] = chi_grid;
    return out;
}

CommandResult cmd_loss_sweep(const PhysicalConfig& cfg, const GridSpec& grid, const std::vector<double>& rpd_grid,
                             double chi_ratio, SchemeKind scheme) {
    CommandResult out;
    check_grid(grid, out.warnings);
    for (double r : rpd_grid)
        if (!(r >= 0.0 && r <= 0.5)) throw ValidationError("loss sweep R_PD values must lie in [0, 0.5]");
    if (!(chi_ratio >= 0.0 && chi_ratio < 1.0)) throw ValidationError("chi ratio must satisfy 0 <= chi/chi_thr < 1");

    const auto freqs = log_grid(grid.fmin_hz, grid.fmax_hz, grid.points);
    auto peak_at = [&](double ratio, double rpd) {
        PhysicalConfig c = cfg;
        c.drive = SqueezerDrive::ratio(ratio);
        c.detection_loss = rpd;
        const OperatingPoint op = prepare(c);
        return peak_sensitivity(sensitivity_curve(op, scheme, freqs));
    };

    const Peak ref = peak_at(chi_ratio, 0.0);
    const Peak ref_conv = peak_at(0.0, 0.0);

    std::ostringstream os;
    os << header("loss-sweep");
    os << "r_pd,chi_ratio,normalized_peak,normalized_peak_conventional,peak_strain_asd,peak_frequency_hz,"
          "peak_strain_asd_conventional,peak_frequency_hz_conventional\n";
    for (double r : rpd_grid) {
        const Peak p = r == 0.0 ? ref : peak_at(chi_ratio, r);
        const Peak pc = r == 0.0 ? ref_conv : peak_at(0.0, r);
        os << num(r) << ',' << num(chi_ratio) << ',' << num(p.strain_asd / ref.strain_asd) << ','
           << num(pc.strain_asd / ref_conv.strain_asd) << ',' << num(p.strain_asd) << ',' << num(p.frequency_hz)
           << ',' << num(pc.strain_asd) << ',' << num(pc.frequency_hz) << '\n';
    }
    out.body = os.str();
    PhysicalConfig resolved = cfg;
    resolved.drive = SqueezerDrive::ratio(chi_ratio);
    const OperatingPoint op = prepare(resolved);
    out.manifest = manifest("loss-sweep", resolved, op.rates, op.threshold);
    out.manifest["grid"] = grid_json(grid);
    out.manifest["rpd_grid"] = rpd_grid;
    out.manifest["scheme"] = std::string(scheme_name(scheme));
    return out;
}

CommandResult cmd_compare(const PhysicalConfig& cfg, const GridSpec& grid) {
    CommandResult out;
    check_grid(grid, out.warnings);
    const OperatingPoint op = prepare(cfg);
    const auto freqs = log_grid(grid.fmin_hz, grid.fmax_hz, grid.points);
    const auto curves = compare_curves(op, freqs);

    std::ostringstream os;
    os << header("compare");
    os << "frequency_hz";
    for (SchemeKind k : kSchemes) os << ',' << scheme_name(k) << "_strain_asd";
    os << ",sql_strain_asd\n";
    for (std::size_t i = 0; i < freqs.size(); ++i) {
        os << num(freqs[i]);
        for (std::size_t k = 0; k < kSchemeCount; ++k) {
            os << ',' << num(std::sqrt(curves[k][i].strain_psd));
            if (!curves[k][i].converged)
                out.warnings.push_back(std::string(scheme_name(kSchemes[k])) + ": optimizer did not converge at " +
                                       num(freqs[i]) + " Hz");
        }
        os << ',' << num(std::sqrt(sql_overlay(cfg.mirror_mass, cfg.arm_length, to_angular(freqs[i])))) << '\n';
    }
    out.body = os.str();
    out.manifest = manifest("compare", cfg, op.rates, op.threshold);
    out.manifest["grid"] = grid_json(grid);
    return out;
}

std::vector<std::pair<double, double>> read_overlay(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw SchemaError("cannot read overlay file '" + path + "'");
    std::vector<std::pair<double, double>> curve;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (auto h = line.find('#'); h != std::string::npos) line.resize(h);
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream ls(line);
        double f = 0.0, a = 0.0;
        if (!(ls >> f)) continue;
        if (!(ls >> a)) {
            // A text header row such as "frequency_hz,strain_asd" is skipped.
            continue;
        }
        if (!(f > 0.0) || !(a > 0.0))
            throw SchemaError("overlay line " + std::to_string(line_no) + ": values must be positive");
        curve.emplace_back(f, a);
    }
    std::sort(curve.begin(), curve.end());
    if (curve.empty()) throw SchemaError("overlay file '" + path + "' contains no data");
    return curve;
}

double interpolate_overlay(const std::vector<std::pair<double, double>>& curve, double frequency_hz) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    if (curve.empty() || frequency_hz < curve.front().first || frequency_hz > curve.back().first) return nan;
    auto it = std::lower_bound(curve.begin(), curve.end(), frequency_hz,
                               [](const auto& p, double f) { return p.first < f; });
    if (it->first == frequency_hz) return it->second;
    const auto& hi = *it;
    const auto& lo = *(it - 1);
    const double t = std::log(frequency_hz / lo.first) / std::log(hi.first / lo.first);
    return std::exp(std::log(lo.second) + t * std::log(hi.second / lo.second));
}

std::vector<double> parse_list(const std::string& text) {
    std::vector<double> out;
    std::string item;
    std::istringstream is(text);
    while (std::getline(is, item, ',')) {
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(item, &used);
        } catch (const std::exception&) {
            throw SchemaError("cannot parse list item '" + item + "'");
        }
        if (item.find_first_not_of(" \t", used) != std::string::npos)
            throw SchemaError("cannot parse list item '" + item + "'");
        out.push_back(v);
    }
    return out;
}

}  // namespace squeezer::cli
