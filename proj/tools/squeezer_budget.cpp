// squeezer-budget: quantum-noise budget for an internally squeezed interferometer.
#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"

#include "squeezer/cli.hpp"
#include "squeezer/error.hpp"

namespace sc = squeezer::cli;

namespace {

std::string utc_timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

void emit(const sc::CommandResult& r, const std::string& out_path) {
    for (const auto& w : r.warnings) std::cerr << "warning: " << w << '\n';
    nlohmann::json manifest = r.manifest;
    manifest["timestamp"] = utc_timestamp();
    if (out_path.empty() || out_path == "-") {
        std::cout << r.body;
        std::cerr << manifest.dump(2) << '\n';
        return;
    }
    {
        std::ofstream f(out_path, std::ios::binary);
        if (!f) throw squeezer::Error("cannot write '" + out_path + "'");
        f << r.body;
    }
    manifest["output"] = out_path;
    std::ofstream m(out_path + ".manifest.json", std::ios::binary);
    if (!m) throw squeezer::Error("cannot write '" + out_path + ".manifest.json'");
    m << manifest.dump(2) << '\n';
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Quantum-noise budget for a nondegenerate internal squeezer"};
    app.require_subcommand(1);
    app.set_version_flag("--version", sc::kToolVersion);

    std::string config_path;
    std::vector<std::string> overrides;
    std::string out_path;
    std::string scheme_name = "signal_fixed";
    sc::GridSpec grid;
    std::string overlay;
    std::string chi_grid = "0,0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9,0.95,0.99";
    std::string rpd_grid = "0,0.05,0.1,0.15,0.2,0.25,0.3,0.35,0.4,0.45,0.5";
    double chi_ratio = 0.95;

    auto common = [&](CLI::App* c) {
        c->add_option("--config", config_path, "configuration file (key = value); defaults when omitted")
            ->check(CLI::ExistingFile);
        c->add_option("--set", overrides, "override one key, e.g. --set chi_ratio=0.9")->take_all();
        c->add_option("--out", out_path, "output file; a manifest is written next to it");
    };
    auto gridded = [&](CLI::App* c) {
        c->add_option("--fmin", grid.fmin_hz, "lowest frequency in Hz");
        c->add_option("--fmax", grid.fmax_hz, "highest frequency in Hz");
        c->add_option("--points", grid.points, "number of log-spaced points");
    };

    auto* rates = app.add_subcommand("rates", "derived rates and squeezing threshold (JSON)");
    common(rates);

    auto* sens = app.add_subcommand("sensitivity", "strain sensitivity for one readout scheme (CSV)");
    common(sens);
    gridded(sens);
    sens->add_option("--scheme", scheme_name, "readout scheme");
    sens->add_option("--overlay", overlay, "two-column (frequency_hz, strain_asd) curve to carry along")
        ->check(CLI::ExistingFile);

    auto* poles = app.add_subcommand("poles", "pole trajectories versus chi/chi_thr (CSV)");
    common(poles);
    poles->add_option("--chi-grid", chi_grid, "comma-separated chi/chi_thr values, ascending");

    auto* loss = app.add_subcommand("loss-sweep", "peak sensitivity versus detection loss (CSV)");
    common(loss);
    gridded(loss);
    loss->add_option("--rpd-grid", rpd_grid, "comma-separated detection losses in [0, 0.5]");
    loss->add_option("--chi-ratio", chi_ratio, "chi/chi_thr for the squeezed curve");
    loss->add_option("--scheme", scheme_name, "readout scheme");

    auto* cmp = app.add_subcommand("compare", "all six readout schemes on one grid (CSV)");
    common(cmp);
    gridded(cmp);

    CLI11_PARSE(app, argc, argv);

    try {
        const auto cfg = sc::resolve_config(config_path.empty() ? std::nullopt : std::optional(config_path), overrides);
        const auto parsed = squeezer::parse_scheme(scheme_name);
        if (!parsed) throw squeezer::SchemaError("unknown scheme '" + scheme_name + "'");
        const auto scheme = *parsed;
        sc::CommandResult r;
        if (*rates)
            r = sc::cmd_rates(cfg);
        else if (*sens)
            r = sc::cmd_sensitivity(cfg, scheme, grid, overlay.empty() ? std::nullopt : std::optional(overlay));
        else if (*poles)
            r = sc::cmd_poles(cfg, sc::parse_list(chi_grid));
        else if (*loss)
            r = sc::cmd_loss_sweep(cfg, grid, sc::parse_list(rpd_grid), chi_ratio, scheme);
        else
            r = sc::cmd_compare(cfg, grid);
        emit(r, out_path);
    } catch (const squeezer::AboveThreshold& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    } catch (const squeezer::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
