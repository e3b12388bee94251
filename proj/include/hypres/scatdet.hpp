#ifndef HYPRES_SCATDET_HPP
#define HYPRES_SCATDET_HPP

#include <cmath>
#include <stdexcept>
#include <vector>

#include "hypres/domain.hpp"
#include "hypres/modes.hpp"
#include "hypres/quadrature.hpp"
#include "hypres/resonances.hpp"

namespace hypres {

struct DetSample {
    double a, theta, log_abs_tau;
};

struct PhaseSample {
    double xi, sigma;
};

/// Localization windows r_k = base + k*eta used by the singular-value bounds.
struct Window {
    double base = 0.0;
    double eta = 0.5;
    Window() = default;
    Window(double base_, double eta_) : base(base_), eta(eta_) {
        if (!(eta_ > 0.0 && eta_ <= 1.0))
            throw std::domain_error("hypres: window eta in (0, 1]");
    }
    double r(int k) const { return base + k * eta; }
};

/// Mode-sum truncation policy: K(s) = ceil(2 |s-1/2| / rho_min) modes, with the
/// geometric tail monitored against tail_tol.
struct ModeSumPolicy {
    double rho_min = 0.5;
    int k_cap = 4000;
    double tail_tol = 1e-9;
    int k_of(Cplx s) const {
        return int(std::ceil(2.0 * std::abs(s - 0.5) / rho_min)) + 2;
    }
};

inline ModeSumPolicy make_mode_sum_policy(EndModel model, const Funnel& fun) {
    ModeSumPolicy p;
    p.rho_min = detail::rho_min_curve(model, fun);
    return p;
}

/// log |tau(s)| as the exact mode sum log|ratio_0| + 2 sum_{k>=1} log|ratio_k|,
/// ratio_k = [S_model(s)]_k / [S_standard(s)]_k.
inline double log_tau(Cplx s, EndModel model, const Funnel& fun, const ModeSumPolicy& pol,
                      const EvalOptions& opt = EvalOptions{}) {
    double total = 0.0;
    int K = pol.k_of(s);
    double last = 0.0;
    int k = 0;
    for (;; ++k) {
        if (k > pol.k_cap)
            throw convergence_error("hypres: mode sum tail did not settle");
        double lr = detail::mode_ratio(s, k, model, fun, opt).log_abs();
        total += (k == 0 ? 1.0 : 2.0) * lr;
        last = std::abs(lr);
        if (k >= K && last <= pol.tail_tol * 0.1) break;
    }
    return total;
}

namespace detail {

/// per-mode phase of tau(1/2 + i xi) on the critical line; exploits
/// w+-(1-s) = w+-(s) so each mode costs one hypergeometric set
inline double tau_phase_line(double xi, EndModel model, const Funnel& fun,
                             const ModeSumPolicy& pol, const EvalOptions& opt) {
    Cplx s(0.5, xi);
    double om = fun.omega();
    double phase = 0.0;
    int K = pol.k_of(s);
    for (int k = 0; k <= K; ++k) {
        double w = (k == 0) ? 1.0 : 2.0;
        // ratio = (beta(1+s)/beta(2-s)) conj(C)/C on the critical line, C the
        // model's condition function (real-coefficient symmetry)
        HypResult den = (model == EndModel::truncated_funnel)
                            ? res_condition_truncated(s, k, om, fun.r0, opt)
                            : res_condition_extended(s, k, om, std::abs(fun.r0), opt);
        if (den.value.is_zero()) throw near_singularity_error(k);
        Cplx lb = log_beta(1.0 + s, k, om) - log_beta(2.0 - s, k, om);
        phase += w * (lb.imag() - 2.0 * den.value.arg());
    }
    return phase; // = arg tau, mod 2 pi per mode (continuity handled by the march)
}

} // namespace detail

/// Relative scattering phase sigma(xi) = (i/2 pi) log tau(1/2 + i xi) marched
/// continuously from sigma(0) = 0 (step halves whenever |Delta arg tau| > pi/2).
inline std::vector<PhaseSample> sigma_phase(double xi_max, EndModel model, const Funnel& fun,
                                            double out_step = 0.25,
                                            const EvalOptions& opt = EvalOptions{}) {
    if (!(xi_max > 0.0 && xi_max <= 200.0))
        throw std::domain_error("hypres: sigma_phase needs xi_max in (0, 200]");
    ModeSumPolicy pol = make_mode_sum_policy(model, fun);
    std::vector<PhaseSample> out;
    out.push_back({0.0, 0.0});
    double xi = 0.0;
    double cum = 0.0; // continuous arg tau
    double prev_raw = detail::tau_phase_line(0.0, model, fun, pol, opt); // == 0
    double next_out = out_step;
    double step = std::min(0.05, out_step);
    while (xi < xi_max - 1e-12) {
        double target = std::min(xi + step, std::min(next_out, xi_max));
        double raw = detail::tau_phase_line(target, model, fun, pol, opt);
        double d = std::remainder(raw - prev_raw, 2.0 * PI);
        if (std::abs(d) > PI / 2.0 && target - xi > 1e-7) {
            step = 0.5 * (target - xi);
            continue;
        }
        if (target - xi <= 1e-7 && std::abs(d) > PI / 2.0)
            throw convergence_error("hypres: sigma branch tracking step underflow");
        cum += d;
        xi = target;
        prev_raw = raw;
        if (std::abs(d) < 0.15) step *= 1.6;
        if (xi >= next_out - 1e-12) {
            out.push_back({xi, -cum / (2.0 * PI)});
            next_out += out_step;
        }
        step = std::min(step, 0.35);
    }
    return out;
}

/// Singular values of the windowed model operator,
/// lambda_k = |2s-1| [int_{r1}^{r2} |a_k(1-s;r)|^2 cosh r dr]^{1/2}
///                   [int_{r2}^{r3} |a_k(s;r)|^2 cosh r dr]^{1/2}
inline double lambda_k(Cplx s, int k, const Funnel& fun, const Window& win,
                       const EvalOptions& opt = EvalOptions{}) {
    ModeContext cs(s, k), c1(1.0 - s, k);
    auto dens = [&](const ModeContext& c) {
        return [&, c](double r) {
            Cplx a = poisson_coeff_ak(c, fun, r, opt);
            return std::norm(a) * std::cosh(r);
        };
    };
    double i1 = quad::adaptive(dens(c1), win.r(1), win.r(2), 1e-10, 2048);
    double i2 = quad::adaptive(dens(cs), win.r(2), win.r(3), 1e-10, 2048);
    return std::abs(2.0 * s - 1.0) * std::sqrt(i1) * std::sqrt(i2);
}

/// Rank-one cusp singular value via the elementary antiderivative of
/// e^{(2 Re s - 1) r}; continuous across Re s = 1/2.
inline double cusp_mu1(Cplx s, double b, double eta) {
    if (!(eta > 0.0)) throw std::domain_error("hypres: cusp_mu1 needs eta > 0");
    double q = 2.0 * s.real() - 1.0;
    auto seg = [&](double r0, double r1) {
        // int_{r0}^{r1} e^{q r} dr, stable near q = 0
        double d = r1 - r0;
        if (std::abs(q * d) < 1e-12) return d * std::exp(q * r0);
        return std::exp(q * r0) * std::expm1(q * d) / q;
    };
    double i1 = seg(b + eta, b + 2.0 * eta);
    double i2 = seg(b + 2.0 * eta, b + 3.0 * eta);
    return std::sqrt(i1) * std::sqrt(i2) / std::abs(2.0 * s - 1.0);
}

struct CountingIdentityReport {
    double lhs = 0.0;            // Ntilde_P(a) - Ntilde_0(a)
    double rhs = 0.0;            // 4 int sigma/t + (2/pi) int log|tau| dtheta
    double defect = 0.0;         // lhs - rhs, expected O(log a)
    double sigma_integral = 0.0;
    double theta_integral = 0.0;
    double dropped_sigma_bound = 0.0; // |4 int_0^{t0} sigma/t| estimate
    int resonances_used = 0;
};

/// Numerical check of the contour-integration counting identity at radius a.
inline CountingIdentityReport verify_counting_identity(double a, EndModel model,
                                                       const Funnel& fun,
                                                       const ResonanceSet* precomputed = nullptr,
                                                       const EvalOptions& opt = EvalOptions{}) {
    CountingIdentityReport rep;
    ResonanceSet setP = precomputed ? *precomputed : resonance_set(model, fun, a, opt);
    CountingSampler NP(setP);
    NP.set_completeness_radius(std::max(a, 0.0));
    ResonanceSet set0 = background_lattice(BackgroundModel::standard_funnel,
                                           std::max(1.0, a), fun.ell);
    CountingSampler N0(set0);
    N0.set_completeness_radius(std::max(1.0, a));
    rep.resonances_used = int(setP.entries.size());
    rep.lhs = NP.Ntilde(a) - N0.Ntilde(a);

    // 4 int_{t0}^{a} sigma(t)/t dt from the marched samples (trapezoid on the grid)
    const double t0 = 0.1;
    auto samples = sigma_phase(a, model, fun, 0.02, opt);
    double si = 0.0;
    for (size_t i = 0; i + 1 < samples.size(); ++i) {
        double ta = samples[i].xi, tb = samples[i + 1].xi;
        if (tb <= t0) continue;
        double fa = samples[i].sigma / std::max(ta, t0);
        double fb = samples[i + 1].sigma / tb;
        si += 0.5 * (fa + fb) * (tb - std::max(ta, t0));
    }
    rep.sigma_integral = 4.0 * si;
    if (samples.size() > 5) {
        // |sigma| <= C t^2 near 0 with C from the first useful sample
        double c0 = std::abs(samples[5].sigma) / std::max(1e-12, samples[5].xi * samples[5].xi);
        rep.dropped_sigma_bound = 4.0 * c0 * t0 * t0 / 2.0;
    }

    // (2/pi) int_0^{pi/2 - eps a^-2} log|tau(1/2 + a e^{i theta})| dtheta, eps = 1
    ModeSumPolicy pol = make_mode_sum_policy(model, fun);
    double theta_hi = PI / 2.0 - 1.0 / (a * a);
    auto f = [&](double th) {
        return log_tau(0.5 + a * std::exp(Cplx(0.0, th)), model, fun, pol, opt);
    };
    rep.theta_integral = (2.0 / PI) * quad::adaptive(f, 0.0, theta_hi, 1e-5, 512);
    rep.rhs = rep.sigma_integral + rep.theta_integral;
    rep.defect = rep.lhs - rep.rhs;
    return rep;
}

} // namespace hypres

#endif
