#include "squeezer/sweep.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "squeezer/constants.hpp"
#include "squeezer/error.hpp"
#include "squeezer/stability.hpp"

namespace squeezer {

OperatingPoint prepare(const PhysicalConfig& cfg) {
    OperatingPoint op;
    op.config = cfg;
    const DerivedRates unpumped = derive_rates_unpumped(cfg);
    op.threshold = threshold_numeric(unpumped);
    op.rates = unpumped;
    op.rates.chi = cfg.drive.mode == SqueezerDrive::Mode::ratio ? cfg.drive.value * op.threshold : cfg.drive.value;
    if (op.rates.chi >= op.threshold) {
        std::ostringstream os;
        os << "chi = " << op.rates.chi << " rad/s is at or above the squeezing threshold chi_thr = " << op.threshold
           << " rad/s; the linear model does not apply there";
        throw AboveThreshold(os.str(), op.rates.chi, op.threshold);
    }
    op.model = build_state_space(op.rates);
    return op;
}

std::vector<double> log_grid(double fmin_hz, double fmax_hz, int n) {
    if (!(fmin_hz > 0.0) || !(fmax_hz >= fmin_hz) || n < 1)
        throw InvalidParameter("frequency grid needs 0 < fmin <= fmax and at least one point");
    std::vector<double> f(static_cast<std::size_t>(n));
    if (n == 1) {
        f[0] = fmin_hz;
        return f;
    }
    const double a = std::log(fmin_hz);
    const double b = std::log(fmax_hz);
    for (int i = 0; i < n; ++i) f[static_cast<std::size_t>(i)] = std::exp(a + (b - a) * i / (n - 1));
    f.front() = fmin_hz;
    f.back() = fmax_hz;
    return f;
}

std::vector<FilterSolution> sensitivity_curve(const OperatingPoint& op, SchemeKind kind,
                                              std::span<const double> freqs_hz) {
    const SqueezeSettings sq = resolve_squeeze(op.config, kind);
    std::vector<FilterSolution> out;
    out.reserve(freqs_hz.size());
    for (double f : freqs_hz) {
        const FrequencyResponse fr = frequency_response(op.model, to_angular(f), op.config.detection_loss);
        out.push_back(optimize_scheme(fr, sq, kind));
    }
    return out;
}

std::array<std::vector<FilterSolution>, kSchemeCount> compare_curves(const OperatingPoint& op,
                                                                     std::span<const double> freqs_hz) {
    std::array<std::vector<FilterSolution>, kSchemeCount> out;
    for (double f : freqs_hz) {
        const FrequencyResponse fr = frequency_response(op.model, to_angular(f), op.config.detection_loss);
        const auto all = optimize_all(fr, op.config);
        for (std::size_t k = 0; k < kSchemeCount; ++k) out[k].push_back(all[k]);
    }
    return out;
}

Peak peak_sensitivity(std::span<const FilterSolution> curve) {
    Peak p{std::numeric_limits<double>::infinity(), 0.0};
    for (const auto& s : curve) {
        const double asd = std::sqrt(s.strain_psd);
        if (asd < p.strain_asd) {
            p.strain_asd = asd;
            p.frequency_hz = to_hz(s.omega);
        }
    }
    return p;
}

}  // namespace squeezer
