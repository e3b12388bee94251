#ifndef HYPRES_MODES_HPP
#define HYPRES_MODES_HPP

#include <array>
#include <cmath>
#include <complex>
#include <stdexcept>

#include <boost/numeric/odeint.hpp>

#include "hypres/domain.hpp"
#include "hypres/scaled.hpp"
#include "hypres/specfun.hpp"

namespace hypres {

/// Values of the even/odd Fourier-mode solutions and their r-derivatives.
struct ModeBasisEval {
    Cplx w_plus, w_minus, dw_plus, dw_minus;
};

struct ScatteringElement {
    Cplx value;
    EndModel model;
};

struct near_singularity_error : std::runtime_error {
    int mode;
    explicit near_singularity_error(int k)
        : std::runtime_error("hypres: evaluation too close to a pole/zero in mode k=" +
                             std::to_string(k)),
          mode(k) {}
};

namespace detail {

// w+ = (cosh r)^{-s} Freg((s+ik w)/2, (s-ik w)/2; 1/2; tanh^2 r)
// (Pfaff form of the defining Freg(.,.;1/2;-sinh^2 r); even in r, k -> -k symmetric)
inline HypResult wplus_scaled(Cplx s, int k, double om, double r, const EvalOptions& opt) {
    Cplx a = (s + Cplx(0.0, om * k)) / 2.0;
    Cplx b = (1.0 - s + Cplx(0.0, om * k)) / 2.0;
    double z = -std::sinh(r) * std::sinh(r);
    HypResult h = hyp2f1_reg_scaled(a, b, Cplx(0.5, 0.0), z, opt);
    h.value = h.value * Scaled::from_log(Cplx(0.0, om * k) * std::log(std::cosh(r)));
    return h;
}

// w- = sinh r (cosh r)^{iwk} Freg((1+s+ik w)/2, (2-s+ik w)/2; 3/2; -sinh^2 r); odd in r
inline HypResult wminus_scaled(Cplx s, int k, double om, double r, const EvalOptions& opt) {
    Cplx a = (1.0 + s + Cplx(0.0, om * k)) / 2.0;
    Cplx b = (2.0 - s + Cplx(0.0, om * k)) / 2.0;
    double z = -std::sinh(r) * std::sinh(r);
    HypResult h = hyp2f1_reg_scaled(a, b, Cplx(1.5, 0.0), z, opt);
    h.value = h.value * Scaled::from_log(Cplx(0.0, om * k) * std::log(std::cosh(r))) *
              Cplx(std::sinh(r), 0.0);
    return h;
}

// d/dz Freg(a,b;c;z) = a b Freg(a+1,b+1;c+1;z)
inline Scaled dwplus_scaled(Cplx s, int k, double om, double r, const EvalOptions& opt) {
    Cplx a = (s + Cplx(0.0, om * k)) / 2.0;
    Cplx b = (1.0 - s + Cplx(0.0, om * k)) / 2.0;
    double z = -std::sinh(r) * std::sinh(r);
    Scaled F = hyp2f1_reg_scaled(a, b, Cplx(0.5, 0.0), z, opt).value;
    Scaled dF = hyp2f1_reg_scaled(a + 1.0, b + 1.0, Cplx(1.5, 0.0), z, opt).value * (a * b);
    Scaled pre = Scaled::from_log(Cplx(0.0, om * k) * std::log(std::cosh(r)));
    Cplx iok(0.0, om * k);
    double t = std::tanh(r), s2 = std::sinh(2.0 * r);
    return pre * (F * (iok * t) + dF * Cplx(-s2, 0.0));
}

inline Scaled dwminus_scaled(Cplx s, int k, double om, double r, const EvalOptions& opt) {
    Cplx a = (1.0 + s + Cplx(0.0, om * k)) / 2.0;
    Cplx b = (2.0 - s + Cplx(0.0, om * k)) / 2.0;
    double z = -std::sinh(r) * std::sinh(r);
    Scaled F = hyp2f1_reg_scaled(a, b, Cplx(1.5, 0.0), z, opt).value;
    Scaled dF = hyp2f1_reg_scaled(a + 1.0, b + 1.0, Cplx(2.5, 0.0), z, opt).value * (a * b);
    Scaled pre = Scaled::from_log(Cplx(0.0, om * k) * std::log(std::cosh(r)));
    Cplx iok(0.0, om * k);
    double sh = std::sinh(r), ch = std::cosh(r), s2 = std::sinh(2.0 * r);
    // d/dr [sinh r * (cosh r)^{iwk} F(-sinh^2 r)]
    return pre * (F * (Cplx(ch, 0.0) + iok * sh * std::tanh(r)) +
                  dF * Cplx(-sh * s2, 0.0));
}

// beta_k(s) = 1 / (Gamma((s+ik w)/2) Gamma((s-ik w)/2)); computed in log space
inline Cplx log_beta(Cplx s, int k, double om) {
    return -log_gamma((s + Cplx(0.0, om * k)) / 2.0) -
           log_gamma((s - Cplx(0.0, om * k)) / 2.0);
}

inline Scaled beta_scaled(Cplx s, int k, double om) {
    return rgamma_scaled((s + Cplx(0.0, om * k)) / 2.0) *
           rgamma_scaled((s - Cplx(0.0, om * k)) / 2.0);
}

/// Pfaff form of the same object (no tanh-power prefactor):
///   Freg((1+s+iwk)/2, (1+s-iwk)/2; 1/2+s; sech^2 r0);
/// manifestly k -> -k symmetric, conj(.)|_{s=1/2+i xi} = value at 1-s.
inline HypResult hyp_pf_scaled(Cplx s, int k, double om, double r0, const EvalOptions& opt) {
    Cplx a = (1.0 + s + Cplx(0.0, om * k)) / 2.0;
    Cplx b = (1.0 + s - Cplx(0.0, om * k)) / 2.0;
    double w = 1.0 / (std::cosh(r0) * std::cosh(r0));
    return (w <= 0.9) ? hyp_series(a, b, 0.5 + s, w, opt)
                      : hyp_connection(a, b, 0.5 + s, w, opt);
}

/// Truncated-funnel mode-k resonance condition in the combination convention
///   T(s) = beta_k(1+s) w+(s;r0) - beta_k(s) w-(s;r0) = f_k(s;r0)/Gamma(s-1/2),
/// entire in s; zeros are exactly the mode-k resonances. Two routes with
/// complementary conditioning are tried: the recessive-adapted single-F form
///   T = (tanh r0 (cosh r0)^{-s}/pi) Freg((1+s+iwk)/2,(1+s-iwk)/2;1/2+s;sech^2 r0)
/// (sharp for Re s >= 1/2 and the resonance arcs) and the direct combination
/// (sharp deep in the left half-plane); the one reporting less cancellation wins.
inline HypResult res_condition_truncated(Cplx s, int k, double om, double r0,
                                         const EvalOptions& opt) {
    HypResult pf = hyp_pf_scaled(s, k, om, r0, opt);
    pf.value = pf.value * Scaled::from_log(-s * std::log(std::cosh(r0)) +
                                           std::log(std::tanh(r0) / PI));
    if (pf.cancellation < 1e9) return pf;
    HypResult wp = wplus_scaled(s, k, om, r0, opt);
    HypResult wm = wminus_scaled(s, k, om, r0, opt);
    Scaled t1 = beta_scaled(1.0 + s, k, om) * wp.value;
    Scaled t2 = beta_scaled(s, k, om) * wm.value;
    HypResult res;
    res.value = t1 - t2;
    res.terms = wp.terms + wm.terms;
    double big = std::max(t1.log_abs(), t2.log_abs()) - res.value.log_abs();
    res.cancellation = std::max(wp.cancellation, wm.cancellation) *
                       (big > 690.0 ? 1e300 : std::exp(std::max(0.0, big)));
    return (res.cancellation < pf.cancellation) ? res : pf;
}

/// Extended funnel mode-k condition, proportional to
///   beta_k(1+s) w+(s;|r0|) + beta_k(s) w-(s;|r0|) = g_k(s;|r0|)/Gamma(s-1/2).
/// Evaluated through the r -> -r continuation of the single-F representation of
/// f_k, which crosses the hypergeometric branch cut once (monodromy factor -2
/// at c-a-b = -1/2), leaving two separately well-conditioned series:
///   g_hat(s) = (cosh r0)^{-s} [ tanh r0 Freg(A,B;1/2+s;sech^2 r0)
///              - 2 pi rg(A) rg(B) Freg((s-iwk)/2,(s+iwk)/2;1/2;tanh^2 r0) ],
/// with A,B = (1+s+-iwk)/2 and g_k = -(Gamma(s-1/2)/pi) g_hat.
inline HypResult res_condition_extended(Cplx s, int k, double om, double r0abs,
                                        const EvalOptions& opt) {
    Cplx A = (1.0 + s + Cplx(0.0, om * k)) / 2.0;
    Cplx B = (1.0 + s - Cplx(0.0, om * k)) / 2.0;
    double th = std::tanh(r0abs);
    double w0 = 1.0 / (std::cosh(r0abs) * std::cosh(r0abs));
    HypResult Fpf = (w0 <= 0.9) ? hyp_series(A, B, 0.5 + s, w0, opt)
                                : hyp_connection(A, B, 0.5 + s, w0, opt);
    Cplx a2 = (s - Cplx(0.0, om * k)) / 2.0, b2 = (s + Cplx(0.0, om * k)) / 2.0;
    HypResult Fwp = (th * th <= 0.9)
                        ? hyp_series(a2, b2, Cplx(0.5, 0.0), th * th, opt)
                        : hyp_connection(a2, b2, Cplx(0.5, 0.0), th * th, opt);
    Scaled t1 = Fpf.value * Cplx(th, 0.0);
    Scaled t2 = rgamma_scaled(A) * rgamma_scaled(B) * Fwp.value * Cplx(2.0 * PI, 0.0);
    HypResult res;
    res.value = (t2 - t1) * Cplx(1.0 / PI, 0.0) *
                Scaled::from_log(-s * std::log(std::cosh(r0abs)));
    res.terms = Fpf.terms + Fwp.terms;
    double big = std::max(t1.log_abs(), t2.log_abs()) - (t1 - t2).log_abs();
    res.cancellation = std::max(Fpf.cancellation, Fwp.cancellation) *
                       (big > 690.0 ? 1e300 : std::exp(std::max(0.0, big)));
    if (res.cancellation < 1e9) return res;
    // deep left half-plane: the direct combination is the sharp route
    HypResult wp = wplus_scaled(s, k, om, r0abs, opt);
    HypResult wm = wminus_scaled(s, k, om, r0abs, opt);
    Scaled u1 = beta_scaled(1.0 + s, k, om) * wp.value;
    Scaled u2 = beta_scaled(s, k, om) * wm.value;
    HypResult alt;
    alt.value = u1 + u2;
    alt.terms = wp.terms + wm.terms;
    double big2 = std::max(u1.log_abs(), u2.log_abs()) - alt.value.log_abs();
    alt.cancellation = std::max(wp.cancellation, wm.cancellation) *
                       (big2 > 690.0 ? 1e300 : std::exp(std::max(0.0, big2)));
    return (alt.cancellation < res.cancellation) ? alt : res;
}

/// log of [S_standard(s)]_k = G(1/2-s) beta_k(2-s) / (G(s-1/2) beta_k(1+s))
inline Cplx log_s_funnel(Cplx s, int k, double om) {
    return log_gamma(0.5 - s) - log_gamma(s - 0.5) + log_beta(2.0 - s, k, om) -
           log_beta(1.0 + s, k, om);
}

/// ratio [S_model(s)]_k / [S_standard(s)]_k as a Scaled value:
///   (beta(1+s)/beta(2-s)) C(1-s)/C(s)
/// with C the model's combination-convention condition function.
inline Scaled mode_ratio(Cplx s, int k, EndModel model, const Funnel& fun,
                         const EvalOptions& opt, double* rel_err = nullptr) {
    double om = fun.omega();
    HypResult C1, C0;
    if (model == EndModel::truncated_funnel) {
        C1 = res_condition_truncated(1.0 - s, k, om, fun.r0, opt);
        C0 = res_condition_truncated(s, k, om, fun.r0, opt);
    } else if (model == EndModel::extended_funnel) {
        C1 = res_condition_extended(1.0 - s, k, om, std::abs(fun.r0), opt);
        C0 = res_condition_extended(s, k, om, std::abs(fun.r0), opt);
    } else {
        throw std::domain_error("hypres: mode_ratio defined for truncated/extended only");
    }
    if (C0.value.is_zero() || C1.value.is_zero()) throw near_singularity_error(k);
    if (rel_err) *rel_err = 1e-16 * (C1.cancellation + C0.cancellation);
    Cplx lb = log_beta(1.0 + s, k, om) - log_beta(2.0 - s, k, om);
    return Scaled::from_log(lb) * (C1.value / C0.value);
}

} // namespace detail

/// Exact even/odd mode solutions w+-(s;r) and their r-derivatives.
inline ModeBasisEval mode_basis(const ModeContext& ctx, const Funnel& fun, double r,
                                const EvalOptions& opt = EvalOptions{}) {
    if (!(std::abs(r) <= 30.0))
        throw std::domain_error("hypres: mode_basis restricted to |r| <= 30");
    double om = fun.omega();
    ModeBasisEval e;
    e.w_plus = detail::wplus_scaled(ctx.s, ctx.k, om, r, opt).value.to_cplx();
    e.w_minus = detail::wminus_scaled(ctx.s, ctx.k, om, r, opt).value.to_cplx();
    e.dw_plus = detail::dwplus_scaled(ctx.s, ctx.k, om, r, opt).to_cplx();
    e.dw_minus = detail::dwminus_scaled(ctx.s, ctx.k, om, r, opt).to_cplx();
    return e;
}

/// f_k(s;r) = Gamma(s-1/2) [beta_k(1+s) w+ - beta_k(s) w-], via log-Gamma differences.
inline Cplx f_k_eval(const ModeContext& ctx, const Funnel& fun, double r,
                     const EvalOptions& opt = EvalOptions{}) {
    double om = fun.omega();
    Cplx L1 = log_gamma(ctx.s - 0.5) + detail::log_beta(1.0 + ctx.s, ctx.k, om);
    Cplx L2 = log_gamma(ctx.s - 0.5) + detail::log_beta(ctx.s, ctx.k, om);
    Scaled v = Scaled::from_log(L1) * detail::wplus_scaled(ctx.s, ctx.k, om, r, opt).value -
               Scaled::from_log(L2) * detail::wminus_scaled(ctx.s, ctx.k, om, r, opt).value;
    return v.to_cplx();
}

/// g_k(s;r) = Gamma(s-1/2) [beta_k(1+s) w+ + beta_k(s) w-]  (= f_k(s;-r))
inline Cplx g_k_eval(const ModeContext& ctx, const Funnel& fun, double r,
                     const EvalOptions& opt = EvalOptions{}) {
    return f_k_eval(ctx, fun, -r, opt);
}

/// Poisson-kernel Fourier coefficient a_k(s;r) = c_k(s) w-_k(s;r), normalized by
/// the defining boundary asymptotic (2s-1) a_k ~ rho^{1-s} + [S]_k rho^s, so
/// c_k(s) = 1 / ((2s-1) Gamma(s-1/2) beta_k(1+s)).
inline Cplx poisson_coeff_ak(const ModeContext& ctx, const Funnel& fun, double r,
                             const EvalOptions& opt = EvalOptions{}) {
    if (r < 0.0) throw std::domain_error("hypres: poisson_coeff_ak needs r >= 0");
    double om = fun.omega();
    Cplx L = log_gamma(ctx.s - 0.5) + detail::log_beta(1.0 + ctx.s, ctx.k, om);
    Scaled v = detail::wminus_scaled(ctx.s, ctx.k, om, r, opt).value *
               Scaled::from_log(-L) * (1.0 / (2.0 * ctx.s - 1.0));
    return v.to_cplx();
}

/// Standard funnel scattering element [S_{F_ell}(s)]_k
inline ScatteringElement s_funnel(Cplx s, int k, double omega) {
    return {std::exp(detail::log_s_funnel(s, k, omega)), EndModel::standard_funnel};
}

/// Truncated funnel element [S_{F_{ell,r0}}(s)]_k = f_k(1-s;r0)/f_k(s;r0), r0 > 0
inline ScatteringElement s_truncated(Cplx s, int k, const Funnel& fun,
                                     const EvalOptions& opt = EvalOptions{}) {
    if (!(fun.r0 > 0.0)) throw std::domain_error("hypres: s_truncated needs r0 > 0");
    Scaled ratio = detail::mode_ratio(s, k, EndModel::truncated_funnel, fun, opt);
    Scaled v = Scaled::from_log(detail::log_s_funnel(s, k, fun.omega())) * ratio;
    return {v.to_cplx(), EndModel::truncated_funnel};
}

/// Extended funnel element, r0 < 0: g_k(1-s;|r0|)/g_k(s;|r0|)
inline ScatteringElement s_extended(Cplx s, int k, const Funnel& fun,
                                    const EvalOptions& opt = EvalOptions{}) {
    if (!(fun.r0 < 0.0)) throw std::domain_error("hypres: s_extended needs r0 < 0");
    Scaled ratio = detail::mode_ratio(s, k, EndModel::extended_funnel, fun, opt);
    Scaled v = Scaled::from_log(detail::log_s_funnel(s, k, fun.omega())) * ratio;
    return {v.to_cplx(), EndModel::extended_funnel};
}

/// Hyperbolic-plane element [S_H(s)]_k = 2^{1-2s} G(1/2-s)/G(s-1/2) G(s+|k|)/G(1-s+|k|)
inline ScatteringElement s_plane(Cplx s, int k) {
    double ak = std::abs(double(k));
    Cplx L = (1.0 - 2.0 * s) * std::log(2.0) + log_gamma(0.5 - s) - log_gamma(s - 0.5) +
             log_gamma(s + ak) - log_gamma(1.0 - s + ak);
    return {std::exp(L), EndModel::hyperbolic_plane};
}

/// High-order adaptive integration of the mode ODE
///   w'' = -tanh r w' + (k^2 w^2 / cosh^2 r - s(1-s)) w
/// from r = 0 with the given initial data; the independent oracle for the
/// hypergeometric route.
inline ModeBasisEval ode_reference(const ModeContext& ctx, const Funnel& fun, double r,
                                   const ModeBasisEval& init) {
    if (!(std::abs(r) <= 10.0))
        throw std::domain_error("hypres: ode_reference restricted to |r| <= 10");
    namespace odeint = boost::numeric::odeint;
    using State = std::array<double, 8>;
    double om = fun.omega();
    Cplx lam = ctx.s * (1.0 - ctx.s);
    double k2o2 = double(ctx.k) * double(ctx.k) * om * om;
    auto rhs = [&](const State& y, State& dy, double t) {
        Cplx wp(y[0], y[1]), dwp(y[2], y[3]), wm(y[4], y[5]), dwm(y[6], y[7]);
        double th = std::tanh(t), c = std::cosh(t);
        Cplx q = k2o2 / (c * c) - lam;
        Cplx ddp = -th * dwp + q * wp;
        Cplx ddm = -th * dwm + q * wm;
        dy = {dwp.real(), dwp.imag(), ddp.real(), ddp.imag(),
              dwm.real(), dwm.imag(), ddm.real(), ddm.imag()};
    };
    State y = {init.w_plus.real(),   init.w_plus.imag(),  init.dw_plus.real(),
               init.dw_plus.imag(),  init.w_minus.real(), init.w_minus.imag(),
               init.dw_minus.real(), init.dw_minus.imag()};
    if (r != 0.0) {
        auto stepper = odeint::make_controlled(1e-12, 1e-12,
                                               odeint::runge_kutta_fehlberg78<State>());
        double dt = r > 0 ? 1e-3 : -1e-3;
        odeint::integrate_adaptive(stepper, rhs, y, 0.0, r, dt);
    }
    return {{y[0], y[1]}, {y[4], y[5]}, {y[2], y[3]}, {y[6], y[7]}};
}

/// Initial data at r = 0 forced by the defining series: w+ = 1/sqrt(pi), w- = 0,
/// dw+ = 0, dw- = 2/sqrt(pi).
inline ModeBasisEval mode_basis_origin() {
    double rp = 1.0 / std::sqrt(PI);
    return {{rp, 0.0}, {0.0, 0.0}, {0.0, 0.0}, {2.0 * rp, 0.0}};
}

} // namespace hypres

#endif
