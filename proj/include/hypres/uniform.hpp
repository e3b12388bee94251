#ifndef HYPRES_UNIFORM_HPP
#define HYPRES_UNIFORM_HPP

#include <cmath>
#include <stdexcept>
#include <vector>

#include "hypres/domain.hpp"
#include "hypres/modes.hpp"
#include "hypres/phase.hpp"
#include "hypres/specfun.hpp"

namespace hypres {

struct UniformEval {
    Cplx zeta;        // Liouville variable
    Cplx prefactor_f; // f = (w^2 + a^2 cosh^2 r)/cosh^2 r
    Cplx w0_approx;
    Cplx w1_approx;
};

/// Liouville variable zeta with (2/3) zeta^{3/2} = phi(alpha, r).
/// Branch: zeta = |,(3/2) phi|^{2/3} exp(i (2/3) Arg phi) with Arg in [-pi, pi)
/// (negative-real phi maps to arg zeta = -2 pi/3, matching continuity in r from
/// the turning point); principal zeta^{3/2} then recovers phi exactly.
inline Cplx liouville_zeta(Cplx alpha, double omega, double r) {
    Cplx phi = phase_phi_value(alpha, omega, r);
    if (phi == Cplx(0.0, 0.0)) return {0.0, 0.0};
    double A = std::arg(phi);
    if (A > PI - 1e-15) A = -PI;
    double mag = std::pow(1.5 * std::abs(phi), 2.0 / 3.0);
    Cplx zeta = mag * std::exp(Cplx(0.0, 2.0 * A / 3.0));
    double az = std::arg(zeta);
    if (az < -2.0 * PI / 3.0 - 1e-9 || az > 2.0 * PI / 3.0 + 1e-9)
        throw std::domain_error("hypres: liouville_zeta branch left its sector");
    return zeta;
}

/// Airy-type approximate solutions (error term dropped):
///   w_sigma ~ 2 sqrt(pi) e^{i pi sigma/6} k^{1/6} zeta^{1/4}
///             (w^2 + a^2 cosh^2 r)^{-1/4} Ai(k^{2/3} e^{2 pi i sigma/3} zeta)
inline Cplx w_sigma_approx(int sigma, const ModeContext& ctx, const Funnel& fun, double r) {
    if (sigma != 0 && sigma != 1)
        throw std::domain_error("hypres: w_sigma_approx takes sigma in {0, 1}");
    if (ctx.k < 1) throw std::domain_error("hypres: w_sigma_approx needs k >= 1");
    double om = fun.omega();
    double k = double(ctx.k);
    Cplx zeta = liouville_zeta(ctx.alpha, om, r);
    Cplx rad = om * om + ctx.alpha * ctx.alpha * std::cosh(r) * std::cosh(r);
    Cplx rot = std::exp(Cplx(0.0, 2.0 * PI * sigma / 3.0));
    Cplx ai = airy_ai(std::pow(k, 2.0 / 3.0) * rot * zeta);
    Cplx pref = 2.0 * std::sqrt(PI) * std::exp(Cplx(0.0, PI * sigma / 6.0)) *
                std::pow(k, 1.0 / 6.0) * std::pow(zeta, 0.25) * std::pow(rad, -0.25);
    return pref * ai;
}

struct UniformErrorPoint {
    int k;
    Cplx alpha;
    double max_rel_error; // max over the r-grid
};

struct UniformErrorReport {
    std::vector<UniformErrorPoint> points;
    double fitted_slope = 0.0; // log max error vs log |k alpha|
};

/// Reconstruct a_k(1/2 + k alpha; r) from the Airy-type solutions,
///   a_k = (1/(2 k w0(0))) alpha^{-1/2} e^{-k (phi0+gamma)} [w0(0) w1(r) - w1(0) w0(r)],
/// compare against the exact Poisson coefficient, and fit the error decay in |k alpha|.
inline UniformErrorReport uniform_error_report(const Funnel& fun, const std::vector<int>& k_list,
                                               const std::vector<Cplx>& alpha_list,
                                               double r_lo, double r_hi, int n_r = 12,
                                               const EvalOptions& opt = EvalOptions{}) {
    if (k_list.size() != alpha_list.size())
        throw std::invalid_argument("hypres: k_list and alpha_list must pair up");
    double om = fun.omega();
    UniformErrorReport rep;
    for (size_t i = 0; i < k_list.size(); ++i) {
        int k = k_list[i];
        Cplx alpha = alpha_list[i];
        ModeContext ctx = ModeContext::from_alpha(alpha, k);
        Cplx w0_0 = w_sigma_approx(0, ctx, fun, 0.0);
        Cplx w1_0 = w_sigma_approx(1, ctx, fun, 0.0);
        Cplx phi0 = phase_phi0(alpha, om);
        Cplx gam = gamma_factor(alpha, om);
        Cplx pre = std::exp(-double(k) * (phi0 + gam)) /
                   (2.0 * double(k) * w0_0 * std::sqrt(alpha));
        double worst = 0.0;
        for (int j = 0; j < n_r; ++j) {
            double r = r_lo + (r_hi - r_lo) * j / double(n_r - 1);
            Cplx zeta = liouville_zeta(alpha, om, r);
            if (std::abs(zeta) < 0.1) continue; // turning-point neighborhood excluded
            Cplx w0r = w_sigma_approx(0, ctx, fun, r);
            Cplx w1r = w_sigma_approx(1, ctx, fun, r);
            Cplx approx = pre * (w0_0 * w1r - w1_0 * w0r);
            Cplx exact = poisson_coeff_ak(ctx, fun, r, opt);
            double rel = std::abs(approx - exact) / std::abs(exact);
            worst = std::max(worst, rel);
        }
        rep.points.push_back({k, alpha, worst});
    }
    // least-squares slope of log(err) vs log |k alpha|
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (auto& p : rep.points) {
        if (!(p.max_rel_error > 0.0)) continue;
        double x = std::log(std::abs(double(p.k) * p.alpha));
        double y = std::log(p.max_rel_error);
        sx += x; sy += y; sxx += x * x; sxy += x * y;
        ++n;
    }
    if (n >= 2) rep.fitted_slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    return rep;
}

} // namespace hypres

#endif
