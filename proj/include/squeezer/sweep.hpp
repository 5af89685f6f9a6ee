#pragma once

#include <array>
#include <span>
#include <vector>

#include "squeezer/dynamics.hpp"
#include "squeezer/params.hpp"
#include "squeezer/readout.hpp"

namespace squeezer {

/// Resolved configuration ready for frequency sweeps.
struct OperatingPoint {
    PhysicalConfig config;
    DerivedRates rates;
    double threshold = 0.0;
    StateSpaceModel model;
};

/// Derives rates and the threshold; throws AboveThreshold when chi >= chi_thr.
OperatingPoint prepare(const PhysicalConfig& cfg);

/// n log-spaced frequencies in Hz, endpoints included.
std::vector<double> log_grid(double fmin_hz, double fmax_hz, int n);

std::vector<FilterSolution> sensitivity_curve(const OperatingPoint& op, SchemeKind kind,
                                              std::span<const double> freqs_hz);

std::array<std::vector<FilterSolution>, kSchemeCount> compare_curves(const OperatingPoint& op,
                                                                     std::span<const double> freqs_hz);

struct Peak {
    double strain_asd = 0.0;
    double frequency_hz = 0.0;
};

/// Best (minimum) strain ASD over a curve.
Peak peak_sensitivity(std::span<const FilterSolution> curve);

}  // namespace squeezer
