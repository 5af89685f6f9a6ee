#include "squeezer/readout.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>

#include "squeezer/error.hpp"
#include "squeezer/spectra.hpp"

namespace squeezer {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();

double wrap_pi(double a) {
    a = std::fmod(a, kPi);
    if (a < 0.0) a += kPi;
    if (a >= kPi) a -= kPi;
    return a;
}

}  // namespace

std::string_view scheme_name(SchemeKind kind) {
    switch (kind) {
        case SchemeKind::signal_fixed: return "signal_fixed";
        case SchemeKind::idler_fixed: return "idler_fixed";
        case SchemeKind::signal_variational: return "signal_variational";
        case SchemeKind::idler_variational: return "idler_variational";
        case SchemeKind::filter_only: return "filter_only";
        case SchemeKind::filter_variational: return "filter_variational";
    }
    return "?";
}

std::optional<SchemeKind> parse_scheme(std::string_view name) {
    for (SchemeKind k : kSchemes)
        if (scheme_name(k) == name) return k;
    return std::nullopt;
}

bool uses_idler_channel(SchemeKind kind) {
    return kind != SchemeKind::signal_fixed && kind != SchemeKind::signal_variational;
}

SqueezeSettings resolve_squeeze(const PhysicalConfig& cfg, SchemeKind kind) {
    SqueezeSettings s;
    s.level_db = cfg.injected_squeezing_db;
    s.signal_port = cfg.squeeze_signal_port;
    s.idler_port = cfg.squeeze_idler_port.value_or(uses_idler_channel(kind));
    return s;
}

ChannelStatistics channel_statistics(const CMat4& noise, const CVec4& signal_T, double theta_b, double theta_c) {
    Eigen::Matrix<double, 2, 4> U = Eigen::Matrix<double, 2, 4>::Zero();
    U(0, ChB0) = std::cos(theta_b);
    U(0, ChB90) = std::sin(theta_b);
    U(1, ChC0) = std::cos(theta_c);
    U(1, ChC90) = std::sin(theta_c);
    const auto Uc = U.cast<Complex>();
    ChannelStatistics out;
    out.signal = Uc * signal_T;
    out.noise = Uc * noise * Uc.transpose();
    out.noise = 0.5 * (out.noise + out.noise.adjoint()).eval();
    return out;
}

FilterResult optimal_filter(const CVec2& signal, const CMat2& noise) {
    Eigen::LLT<CMat2> llt(noise);
    if (llt.info() != Eigen::Success || !(noise(0, 0).real() > 0.0) || !(noise(1, 1).real() > 0.0))
        throw DegenerateNoise("channel noise matrix is not positive definite");
    const CVec2 x = llt.solve(signal);
    const double q = (signal.adjoint() * x)(0).real();
    FilterResult out;
    if (!(q > 0.0) || !x.allFinite()) {
        out.g = CVec2(1.0, 0.0);
        out.strain_psd = kInf;
        return out;
    }
    CVec2 g = x / x.norm();
    // Fix the free global phase.
    const std::size_t ref = std::abs(g(0)) > 1e-300 ? 0 : 1;
    g *= std::conj(g(ref)) / std::abs(g(ref));
    g(ref) = std::abs(g(ref));
    out.g = g;
    out.strain_psd = 1.0 / q;
    return out;
}

VariationalResult variational_angle(const CVec2& signal, const CMat2& noise) {
    const Eigen::Matrix2d P = (signal * signal.adjoint()).real();
    Eigen::Matrix2d Q = noise.real();
    Q = 0.5 * (Q + Q.transpose()).eval();
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::Matrix2d> es(P, Q);
    if (es.info() != Eigen::Success) throw DegenerateNoise("quadrature noise matrix is not positive definite");
    const double lambda = es.eigenvalues()(1);
    if (!(lambda > 0.0)) return {0.0, kInf};
    const Eigen::Vector2d v = es.eigenvectors().col(1);
    return {wrap_pi(std::atan2(v(1), v(0))), 1.0 / lambda};
}

CVec4 readout_vector(double theta_b, double theta_c, Complex g_b, Complex g_c) {
    CVec4 w;
    w << std::conj(g_b) * std::cos(theta_b), std::conj(g_b) * std::sin(theta_b), std::conj(g_c) * std::cos(theta_c),
        std::conj(g_c) * std::sin(theta_c);
    return w;
}

namespace {

struct Candidate {
    double theta_b = kPi / 2;
    double theta_c = 0.0;
    Complex g_b{1.0, 0.0};
    Complex g_c{0.0, 0.0};
    double angle_b = 0.0;
    double angle_c = 0.0;
    double psd = kInf;
    double noise = 0.0;
    double gain = 0.0;
    bool converged = true;

    CVec4 readout() const { return readout_vector(theta_b, theta_c, g_b, g_c); }
};

/// One frequency bin of one scheme's optimisation problem.
class Problem {
   public:
    Problem(const FrequencyResponse& fr, const SqueezeSettings& sq) : fr_(fr), sq_(sq), phi_(fr.pump_phase) {}

    double phi() const { return phi_; }

    CMat4 noise_psd(double angle_b, double angle_c) const {
        auto inputs = vacuum_inputs();
        for (auto& in : inputs) {
            if (in.port == Port::BIn && sq_.signal_port && sq_.level_db > 0.0) {
                in.psd = squeezed_input_psd(sq_.level_db, angle_b);
                in.squeeze_angle = angle_b;
            } else if (in.port == Port::CIn && sq_.idler_port && sq_.level_db > 0.0) {
                in.psd = squeezed_input_psd(sq_.level_db, angle_c);
                in.squeeze_angle = angle_c;
            }
        }
        return noise_psd_matrix(fr_, inputs);
    }

    /// Fills psd/noise/gain of a candidate from its readout and angles.
    void evaluate(Candidate& c) const {
        const CMat4 S = noise_psd(c.angle_b, c.angle_c);
        const CVec4 w = c.readout();
        c.noise = (w.transpose() * S * w.conjugate())(0).real();
        const Complex response = (w.transpose() * fr_.signal_T)(0);
        c.gain = std::abs(response);
        const double scale = fr_.signal_T.norm() * w.norm();
        c.psd = c.gain > 1e-12 * scale ? c.noise / (c.gain * c.gain) : kInf;
    }

    /// Closed-form squeeze angles for the current readout.
    void squeeze_for(Candidate& c) const {
        const CVec4 w = c.readout();
        c.angle_b = sq_.signal_port ? optimal_squeeze_angle(fr_, sq_.level_db, Port::BIn, w) : 0.0;
        c.angle_c = sq_.idler_port ? optimal_squeeze_angle(fr_, sq_.level_db, Port::CIn, w) : 0.0;
    }

    double filter_psd(const CMat4& S, double theta_b, double theta_c) const {
        const auto st = channel_statistics(S, fr_.signal_T, theta_b, theta_c);
        try {
            return optimal_filter(st.signal, st.noise).strain_psd;
        } catch (const DegenerateNoise&) {
            return kInf;
        }
    }

    const FrequencyResponse& response() const { return fr_; }

   private:
    const FrequencyResponse& fr_;
    SqueezeSettings sq_;
    double phi_;
};

struct RefineResult {
    double x, y, f;
    bool converged;
};

/// Local minimisation of a pi-periodic function of two angles: 3x3 stencil,
/// quadratic model step, step shrink on failure, down to `tol` rad.
RefineResult refine(const std::function<double(double, double)>& f, double x, double y, double h, double tol) {
    double fc = f(x, y);
    int iterations = 0;
    constexpr int kMaxIterations = 2000;
    while (h > tol && iterations++ < kMaxIterations) {
        const double fxp = f(x + h, y), fxm = f(x - h, y);
        const double fyp = f(x, y + h), fym = f(x, y - h);
        const double fpp = f(x + h, y + h), fpm = f(x + h, y - h);
        const double fmp = f(x - h, y + h), fmm = f(x - h, y - h);

        double bx = x, by = y, bf = fc;
        auto consider = [&](double cx, double cy, double cf) {
            if (cf < bf) {
                bx = cx;
                by = cy;
                bf = cf;
            }
        };
        consider(x + h, y, fxp);
        consider(x - h, y, fxm);
        consider(x, y + h, fyp);
        consider(x, y - h, fym);
        consider(x + h, y + h, fpp);
        consider(x + h, y - h, fpm);
        consider(x - h, y + h, fmp);
        consider(x - h, y - h, fmm);

        if (std::isfinite(fc) && std::isfinite(fxp) && std::isfinite(fxm) && std::isfinite(fyp) &&
            std::isfinite(fym) && std::isfinite(fpp) && std::isfinite(fpm) && std::isfinite(fmp) &&
            std::isfinite(fmm)) {
            const Eigen::Vector2d g((fxp - fxm) / (2 * h), (fyp - fym) / (2 * h));
            Eigen::Matrix2d H;
            H(0, 0) = (fxp - 2 * fc + fxm) / (h * h);
            H(1, 1) = (fyp - 2 * fc + fym) / (h * h);
            H(0, 1) = H(1, 0) = (fpp - fpm - fmp + fmm) / (4 * h * h);
            if (H(0, 0) > 0.0 && H.determinant() > 0.0) {
                Eigen::Vector2d step = -H.ldlt().solve(g);
                if (step.norm() > 2 * h) step *= 2 * h / step.norm();
                consider(x + step(0), y + step(1), f(x + step(0), y + step(1)));
            }
        }

        if (bf < fc) {
            const double moved = std::hypot(bx - x, by - y);
            x = bx;
            y = by;
            fc = bf;
            if (moved < 0.5 * h) h *= 0.5;
        } else {
            h *= 0.25;
        }
    }
    return {x, y, fc, h <= tol};
}

class Optimizer {
   public:
    explicit Optimizer(const Problem& p) : p_(p) {}

    Candidate solve(SchemeKind kind) {
        auto& slot = cache_[static_cast<std::size_t>(kind)];
        if (!slot) slot = compute(kind);
        return *slot;
    }

   private:
    static constexpr int kMaxAlternations = 20000;
    static constexpr int kGrid = 64;
    static constexpr double kAngleTol = 1e-6;

    Candidate fixed(SchemeKind kind) const {
        Candidate c;
        c.theta_b = kPi / 2;
        c.theta_c = p_.phi();
        if (kind == SchemeKind::idler_fixed || kind == SchemeKind::idler_variational) {
            c.g_b = 0.0;
            c.g_c = 1.0;
        }
        return c;
    }

    /// Best readout of the scheme's family for fixed squeeze angles, starting from `c`.
    Candidate readout_step(SchemeKind kind, const Candidate& c) const {
        Candidate n = c;
        const CMat4 S = p_.noise_psd(c.angle_b, c.angle_c);
        const CVec4& T = p_.response().signal_T;
        switch (kind) {
            case SchemeKind::signal_fixed:
            case SchemeKind::idler_fixed:
                break;
            case SchemeKind::signal_variational: {
                const auto v = variational_angle(T.segment<2>(ChB0), S.block<2, 2>(ChB0, ChB0));
                if (std::isfinite(v.strain_psd)) n.theta_b = v.theta;
                break;
            }
            case SchemeKind::idler_variational: {
                const auto v = variational_angle(T.segment<2>(ChC0), S.block<2, 2>(ChC0, ChC0));
                if (std::isfinite(v.strain_psd)) n.theta_c = v.theta;
                break;
            }
            case SchemeKind::filter_only: {
                set_filter(n, S);
                break;
            }
            case SchemeKind::filter_variational: {
                // Search the idler angle relative to the pump phase.
                const double phi = p_.phi();
                auto f = [&](double tb, double psi) { return p_.filter_psd(S, tb, phi + psi); };
                const RefineResult r = refine(f, n.theta_b, n.theta_c - phi, kPi / kGrid, kAngleTol);
                n.theta_b = wrap_pi(r.x);
                n.theta_c = phi + wrap_pi(r.y);
                n.converged = r.converged;
                set_filter(n, S);
                break;
            }
        }
        return n;
    }

    void set_filter(Candidate& n, const CMat4& S) const {
        const auto st = channel_statistics(S, p_.response().signal_T, n.theta_b, n.theta_c);
        try {
            const auto fr = optimal_filter(st.signal, st.noise);
            if (std::isfinite(fr.strain_psd)) {
                n.g_b = fr.g(0);
                n.g_c = fr.g(1);
            }
        } catch (const DegenerateNoise&) {
            n.converged = false;
        }
    }

    /// Alternates readout and squeeze-angle updates; never increases the PSD.
    Candidate alternate(SchemeKind kind, Candidate c) const {
        p_.squeeze_for(c);
        p_.evaluate(c);
        bool converged = false;
        for (int it = 0; it < kMaxAlternations; ++it) {
            Candidate n = readout_step(kind, c);
            p_.evaluate(n);
            if (!(n.psd <= c.psd)) n = c;  // keep the incumbent on numerical ties
            Candidate m = n;
            p_.squeeze_for(m);
            p_.evaluate(m);
            if (!(m.psd <= n.psd)) m = n;
            const bool stalled = !(m.psd < c.psd * (1.0 - 1e-13));
            c = m;
            if (stalled) {
                converged = true;
                break;
            }
        }
        c.converged = c.converged && converged;
        return c;
    }

    Candidate best_of(SchemeKind kind, const std::vector<Candidate>& seeds) const {
        Candidate best;
        bool have = false;
        for (const Candidate& s : seeds) {
            Candidate r = alternate(kind, s);
            if (!have || r.psd < best.psd) {
                best = r;
                have = true;
            }
        }
        return best;
    }

    Candidate grid_seed(const Candidate& incumbent) const {
        const CMat4 S = p_.noise_psd(incumbent.angle_b, incumbent.angle_c);
        const double phi = p_.phi();
        Candidate best = incumbent;
        double best_f = kInf;
        for (int i = 0; i < kGrid; ++i) {
            for (int j = 0; j < kGrid; ++j) {
                const double tb = kPi * i / kGrid;
                const double tc = phi + kPi * j / kGrid;
                const double f = p_.filter_psd(S, tb, tc);
                if (f < best_f) {
                    best_f = f;
                    best.theta_b = tb;
                    best.theta_c = tc;
                }
            }
        }
        set_filter(best, S);
        return best;
    }

    Candidate compute(SchemeKind kind) {
        switch (kind) {
            case SchemeKind::signal_fixed:
            case SchemeKind::idler_fixed:
                return alternate(kind, fixed(kind));
            case SchemeKind::signal_variational:
                return best_of(kind, {solve(SchemeKind::signal_fixed)});
            case SchemeKind::idler_variational:
                return best_of(kind, {solve(SchemeKind::idler_fixed)});
            case SchemeKind::filter_only:
                return best_of(kind, {solve(SchemeKind::signal_fixed), solve(SchemeKind::idler_fixed)});
            case SchemeKind::filter_variational: {
                std::vector<Candidate> seeds = {solve(SchemeKind::filter_only), solve(SchemeKind::signal_variational),
                                                solve(SchemeKind::idler_variational)};
                Candidate best = best_of(kind, seeds);
                const Candidate from_grid = alternate(kind, grid_seed(best));
                if (from_grid.psd < best.psd) best = from_grid;
                return best;
            }
        }
        return {};
    }

    const Problem& p_;
    std::array<std::optional<Candidate>, kSchemeCount> cache_{};
};

FilterSolution to_solution(const Candidate& c, double omega) {
    FilterSolution s;
    s.omega = omega;
    s.theta_b = wrap_pi(c.theta_b);
    s.theta_c = c.theta_c;
    s.g_b = c.g_b;
    s.g_c = c.g_c;
    s.strain_psd = c.psd;
    s.snr_density = std::isfinite(c.psd) && c.psd > 0.0 ? 1.0 / c.psd : 0.0;
    s.noise_psd = c.noise;
    s.signal_gain = c.gain;
    s.squeeze_angle_b = c.angle_b;
    s.squeeze_angle_c = c.angle_c;
    s.converged = c.converged;
    return s;
}

}  // namespace

FilterSolution optimize_scheme(const FrequencyResponse& fr, const SqueezeSettings& squeeze, SchemeKind kind) {
    const Problem problem(fr, squeeze);
    Optimizer opt(problem);
    return to_solution(opt.solve(kind), fr.omega);
}

FilterSolution optimize_scheme(const PhysicalConfig& cfg, SchemeKind kind, double omega) {
    const DerivedRates rates = derive_rates(cfg);
    const StateSpaceModel model = build_state_space(rates);
    const FrequencyResponse fr = frequency_response(model, omega, cfg.detection_loss);
    return optimize_scheme(fr, resolve_squeeze(cfg, kind), kind);
}

std::array<FilterSolution, kSchemeCount> optimize_all(const FrequencyResponse& fr, const PhysicalConfig& cfg) {
    std::array<FilterSolution, kSchemeCount> out;
    // Schemes sharing squeeze settings share one optimiser, so nested schemes reuse the same seeds.
    std::array<std::optional<Problem>, 2> problems;
    std::array<std::optional<Optimizer>, 2> optimizers;
    for (SchemeKind k : kSchemes) {
        const SqueezeSettings sq = resolve_squeeze(cfg, k);
        const std::size_t slot = sq.idler_port ? 1 : 0;
        if (!problems[slot]) {
            problems[slot].emplace(fr, sq);
            optimizers[slot].emplace(*problems[slot]);
        }
        out[static_cast<std::size_t>(k)] = to_solution(optimizers[slot]->solve(k), fr.omega);
    }
    return out;
}

}  // namespace squeezer
