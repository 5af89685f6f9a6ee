#pragma once

#include <complex>
#include <vector>

#include "squeezer/dynamics.hpp"
#include "squeezer/params.hpp"

namespace squeezer {

inline constexpr double kStructuralPoleTolerance = 1e-9;

struct PoleSet {
    std::vector<Complex> poles;       ///< Omega_p = i * eig(A), all eight
    std::vector<bool> structural;     ///< same length as `poles`
    int structural_zero_count = 0;

    std::vector<Complex> dynamic_poles() const;
};

/// Absolute cutoff below which a pole is treated as the free-mass Omega = 0 pole.
double structural_pole_cutoff(const DerivedRates& rates);

PoleSet poles(const StateSpaceModel& model);
/// Plain eigensolve of the whole (balanced) drift matrix, times i. Cross-check only: the
/// free-mass double zero comes back split by roughly sqrt(eps).
std::vector<Complex> drift_eigenvalues_full(const StateSpaceModel& model);
bool is_stable(const PoleSet& p);

/// Largest Im(Omega_p) over non-structural poles; negative means stable.
double max_pole_imag(const DerivedRates& rates);

/// Stability boundary in chi located by scan + bisection on max Im(Omega_p).
double threshold_numeric(const DerivedRates& rates);
double threshold_numeric(const PhysicalConfig& cfg);

/// Closed-form lossy threshold estimate; lossless branch returns omega_s.
double threshold_closed_form(const DerivedRates& rates);

struct PoleTrackPoint {
    double chi_ratio = 0.0;
    double chi = 0.0;
    int track_id = 0;
    Complex pole;
    int multiplicity = 1;
    bool ambiguous = false;
};

struct PoleTrajectories {
    double threshold = 0.0;
    std::vector<PoleTrackPoint> points;
    bool any_ambiguous = false;
};

/// Non-structural pole tracks over an ascending grid of chi / chi_thr.
PoleTrajectories pole_trajectories(const PhysicalConfig& cfg, const std::vector<double>& chi_ratios);

}  // namespace squeezer
