#include "squeezer/stability.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "squeezer/error.hpp"

namespace squeezer {

std::vector<Complex> PoleSet::dynamic_poles() const {
    std::vector<Complex> out;
    for (std::size_t i = 0; i < poles.size(); ++i)
        if (!structural[i]) out.push_back(poles[i]);
    return out;
}

double structural_pole_cutoff(const DerivedRates& r) {
    double scale = std::max(r.sloshing, r.gamma_b_tot);
    if (!(scale > 0.0)) scale = std::max({r.gamma_a, r.gamma_c_tot, r.chi});
    if (!(scale > 0.0)) scale = 1.0;
    return kStructuralPoleTolerance * scale;
}

PoleSet poles(const StateSpaceModel& model) {
    // The free mass is a pure double integrator driven by Xa0 and read into Xa90. In the
    // pump-phase-zero gauge the amplitude and phase blocks of the optics decouple, so the
    // characteristic polynomial factors as s^2 * det(s - A_opt) for every pump phase (the gauge
    // rotation touches only the idler block). Solving the 6x6 optical block keeps the double
    // zero exact instead of letting the Jordan block split by sqrt(eps).
    using Mat6 = Eigen::Matrix<double, 6, 6>;
    const Mat6 A = model.drift.topLeftCorner<6, 6>();
    Eigen::EigenSolver<Mat6> es(A, /*computeEigenvectors=*/false);
    if (es.info() != Eigen::Success) {
        std::ostringstream os;
        os << "eigensolver failed on optical drift block (norm " << A.norm() << ")";
        throw NumericalError(os.str());
    }
    const double cutoff = structural_pole_cutoff(model.rates);
    PoleSet out;
    for (Eigen::Index i = 0; i < 6; ++i) {
        const Complex pole = Complex(0.0, 1.0) * es.eigenvalues()(i);
        const bool structural = std::abs(pole) < cutoff;
        out.poles.push_back(pole);
        out.structural.push_back(structural);
        if (structural) ++out.structural_zero_count;
    }
    for (int i = 0; i < 2; ++i) {
        out.poles.emplace_back(0.0, 0.0);
        out.structural.push_back(true);
        ++out.structural_zero_count;
    }
    return out;
}

std::vector<Complex> drift_eigenvalues_full(const StateSpaceModel& model) {
    const Vec8 s = model.balancing();
    const Mat8 A = s.cwiseInverse().asDiagonal() * model.drift * s.asDiagonal();
    Eigen::EigenSolver<Mat8> es(A, false);
    if (es.info() != Eigen::Success) throw NumericalError("eigensolver failed on drift matrix");
    std::vector<Complex> out;
    for (Eigen::Index i = 0; i < 8; ++i) out.push_back(Complex(0.0, 1.0) * es.eigenvalues()(i));
    return out;
}

bool is_stable(const PoleSet& p) {
    for (std::size_t i = 0; i < p.poles.size(); ++i)
        if (!p.structural[i] && !(p.poles[i].imag() < 0.0)) return false;
    return true;
}

double max_pole_imag(const DerivedRates& rates) {
    const PoleSet p = poles(build_state_space(rates));
    double worst = -std::numeric_limits<double>::infinity();
    for (const Complex& z : p.dynamic_poles()) worst = std::max(worst, z.imag());
    return worst;
}

double threshold_closed_form(const DerivedRates& r) {
    const double gb = r.gamma_b_tot;
    const double gc = r.gamma_c_tot;
    const double ga = r.gamma_a;
    if (!(gb + gc > 0.0)) return r.sloshing;
    return std::sqrt((ga + gb) * (ga + gc + r.sloshing * r.sloshing / (gb + gc)));
}

double threshold_numeric(const DerivedRates& rates) {
    auto f = [&](double chi) { return max_pole_imag(rates.with_chi(chi)); };

    const double f0 = f(0.0);
    if (!(f0 < 0.0)) {
        std::ostringstream os;
        os << "threshold search failed: system is not stable at chi = 0 (max Im = " << f0 << ")";
        throw ThresholdSearchFailure(os.str(), 0.0, 0.0, f0, f0);
    }

    double estimate = threshold_closed_form(rates);
    if (!(estimate > 0.0)) estimate = structural_pole_cutoff(rates) / kStructuralPoleTolerance;

    // Coarse scan so the first crossing is bracketed, not just any crossing.
    constexpr int kScan = 256;
    constexpr int kMaxExpansions = 20;
    double lo = 0.0;
    double hi = 2.0 * estimate;
    double f_hi = 0.0;
    bool bracketed = false;
    for (int expansion = 0; expansion <= kMaxExpansions && !bracketed; ++expansion) {
        const double start = lo;
        for (int i = 1; i <= kScan; ++i) {
            const double chi = start + (hi - start) * i / kScan;
            f_hi = f(chi);
            if (f_hi >= 0.0) {
                hi = chi;
                bracketed = true;
                break;
            }
            lo = chi;
        }
        if (!bracketed) hi *= 2.0;
    }
    if (!bracketed) {
        std::ostringstream os;
        os << "threshold search failed: no instability found up to chi = " << lo << " rad/s";
        throw ThresholdSearchFailure(os.str(), 0.0, lo, f0, f(lo));
    }

    while (hi - lo > 1e-12 * hi) {
        const double mid = 0.5 * (lo + hi);
        if (f(mid) >= 0.0)
            hi = mid;
        else
            lo = mid;
    }
    return lo;
}

double threshold_numeric(const PhysicalConfig& cfg) { return threshold_numeric(derive_rates_unpumped(cfg)); }

namespace {

struct Cluster {
    Complex pole;
    int multiplicity;
};

std::vector<Cluster> cluster_poles(std::vector<Complex> poles, double tol) {
    std::sort(poles.begin(), poles.end(), [](Complex a, Complex b) {
        return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
    });
    std::vector<Cluster> out;
    std::vector<bool> used(poles.size(), false);
    for (std::size_t i = 0; i < poles.size(); ++i) {
        if (used[i]) continue;
        Complex sum = poles[i];
        int n = 1;
        used[i] = true;
        for (std::size_t j = i + 1; j < poles.size(); ++j) {
            if (!used[j] && std::abs(poles[j] - poles[i]) < tol) {
                used[j] = true;
                sum += poles[j];
                ++n;
            }
        }
        out.push_back({sum / static_cast<double>(n), n});
    }
    return out;
}

}  // namespace

PoleTrajectories pole_trajectories(const PhysicalConfig& cfg, const std::vector<double>& chi_ratios) {
    if (!std::is_sorted(chi_ratios.begin(), chi_ratios.end()))
        throw InvalidParameter("chi grid must be sorted ascending");

    const DerivedRates base = derive_rates_unpumped(cfg);
    PoleTrajectories out;
    out.threshold = threshold_numeric(base);

    // Degenerate eigenvalues split by O(sqrt(eps)); they are merged into one track with a multiplicity.
    const double scale = base.sloshing > 0.0 ? base.sloshing : structural_pole_cutoff(base) / kStructuralPoleTolerance;
    const double merge_tol = 1e-6 * scale;

    std::vector<Cluster> previous;
    std::vector<int> previous_ids;
    int next_id = 0;

    for (double ratio : chi_ratios) {
        const double chi = ratio * out.threshold;
        const PoleSet ps = poles(build_state_space(base.with_chi(chi)));
        const std::vector<Cluster> current = cluster_poles(ps.dynamic_poles(), merge_tol);
        std::vector<int> ids(current.size(), -1);
        std::vector<bool> flagged(current.size(), false);

        if (!previous.empty()) {
            const bool count_changed = current.size() != previous.size();
            // Greedy global nearest-neighbour matching.
            struct Pair {
                double d;
                std::size_t cur, prev;
            };
            std::vector<Pair> pairs;
            for (std::size_t c = 0; c < current.size(); ++c)
                for (std::size_t p = 0; p < previous.size(); ++p)
                    pairs.push_back({std::abs(current[c].pole - previous[p].pole), c, p});
            std::sort(pairs.begin(), pairs.end(), [](const Pair& a, const Pair& b) { return a.d < b.d; });
            std::vector<bool> prev_used(previous.size(), false);
            for (const Pair& pr : pairs) {
                if (ids[pr.cur] != -1 || prev_used[pr.prev]) continue;
                // Ambiguous when another unused previous pole is just as close.
                bool ambiguous = count_changed;
                for (std::size_t p = 0; p < previous.size(); ++p) {
                    if (p == pr.prev || prev_used[p]) continue;
                    if (std::abs(std::abs(current[pr.cur].pole - previous[p].pole) - pr.d) < merge_tol)
                        ambiguous = true;
                }
                prev_used[pr.prev] = true;
                if (ambiguous) {
                    flagged[pr.cur] = true;
                    continue;
                }
                ids[pr.cur] = previous_ids[pr.prev];
            }
        }

        for (std::size_t c = 0; c < current.size(); ++c) {
            if (ids[c] == -1) ids[c] = next_id++;
            if (flagged[c]) out.any_ambiguous = true;
            out.points.push_back({ratio, chi, ids[c], current[c].pole, current[c].multiplicity, flagged[c]});
        }
        previous = current;
        previous_ids = ids;
    }
    return out;
}

}  // namespace squeezer
