#ifndef HYPRES_PHASE_HPP
#define HYPRES_PHASE_HPP

#include <cmath>
#include <complex>
#include <stdexcept>

#include "hypres/domain.hpp"
#include "hypres/specfun.hpp"

namespace hypres {

struct PhaseEval {
    Cplx phi;              // phi(alpha, r)
    Cplx phi0;             // phi(alpha, 0) = -(pi/2)(i alpha + omega)
    Cplx gamma;            // gamma(alpha)
    double I_value;        // I(alpha, ell, r) = 2 Re phi
    Cplx turning_radicand; // omega^2 + alpha^2 cosh^2 r
};

struct ObstaclePhaseEval {
    double H_value;
};

namespace detail {

inline void require_sector(Cplx alpha) {
    double a = std::arg(alpha);
    if (alpha == Cplx(0.0, 0.0) || a < -1e-12 || a > PI / 2.0 + 1e-12)
        throw std::domain_error("hypres: phase functions need arg(alpha) in [0, pi/2]");
}

/// log of the unimodular-type ratio (R - i c)/(R + i c); on the sector boundary
/// arg alpha = pi/2 the ratio can land on the negative real axis, where the
/// value continuous from the sector interior is log|.| - i pi.
inline Cplx log_ratio_sector(Cplx num, Cplx den) {
    Cplx u = num / den;
    if (u.real() < 0.0 && std::abs(u.imag()) < 1e-14 * std::abs(u.real()))
        return {std::log(std::abs(u.real())), -PI};
    return std::log(u);
}

} // namespace detail

inline Cplx phase_phi0(Cplx alpha, double omega) {
    return -0.5 * PI * (Cplx(0.0, 1.0) * alpha + omega);
}

/// Turning-point phase phi(alpha, r): principal branches; extends to alpha = i omega
/// by continuity; negative r via the odd parity of phi - phi0.
inline Cplx phase_phi_value(Cplx alpha, double omega, double r) {
    detail::require_sector(alpha);
    if (r < 0.0) return 2.0 * phase_phi0(alpha, omega) - phase_phi_value(alpha, omega, -r);
    if (r == 0.0) return phase_phi0(alpha, omega);
    Cplx io(0.0, omega);
    if (std::abs(alpha - io) < 1e-9) return io * std::log(std::cosh(r));
    double ch = std::cosh(r), sh = std::sinh(r);
    Cplx rad = omega * omega + alpha * alpha * ch * ch;
    Cplx R = std::sqrt(rad);
    Cplx t1 = alpha * std::log((alpha * sh + R) / std::sqrt(omega * omega + alpha * alpha));
    Cplx t2 = 0.5 * io * detail::log_ratio_sector(R - io * sh, R + io * sh);
    return t1 + t2 + phase_phi0(alpha, omega);
}

/// gamma(alpha) = alpha log(2 alpha / sqrt(w^2+a^2)) + (i w/2) log((a-iw)/(a+iw))
inline Cplx gamma_factor(Cplx alpha, double omega) {
    if (alpha.real() < -1e-14)
        throw std::domain_error("hypres: gamma_factor needs Re alpha >= 0");
    Cplx io(0.0, omega);
    if (std::abs(alpha - io) < 1e-12 || std::abs(alpha + io) < 1e-12)
        throw std::domain_error("hypres: gamma_factor branch point at alpha = +-i omega");
    Cplx t1 = alpha * std::log(2.0 * alpha / std::sqrt(omega * omega + alpha * alpha));
    Cplx t2 = 0.5 * io * detail::log_ratio_sector(alpha - io, alpha + io);
    return t1 + t2;
}

inline PhaseEval phase_phi(Cplx alpha, double omega, double r) {
    PhaseEval e;
    e.phi = phase_phi_value(alpha, omega, r);
    e.phi0 = phase_phi0(alpha, omega);
    e.gamma = gamma_factor(alpha, omega);
    e.I_value = 2.0 * e.phi.real();
    e.turning_radicand = omega * omega + alpha * alpha * std::cosh(r) * std::cosh(r);
    return e;
}

/// I(alpha, ell, r) := 2 Re phi(alpha; r) with omega = 2 pi / ell
inline double I_eval(Cplx alpha, double ell, double r) {
    return 2.0 * phase_phi_value(alpha, 2.0 * PI / ell, r).real();
}

/// Obstacle phase H(alpha, r) for the hyperbolic-plane spherical obstacle:
///   Re[2 a log((a cosh r + sqrt(1+a^2 sinh^2 r))/sqrt(a^2-1))]
///   + log|(cosh r - sqrt(1+a^2 sinh^2 r))/(cosh r + sqrt(1+a^2 sinh^2 r))|
inline double H_eval(Cplx alpha, double r) {
    detail::require_sector(alpha);
    if (!(r > 0.0)) throw std::domain_error("hypres: H_eval needs r > 0");
    if (std::abs(alpha - Cplx(1.0, 0.0)) < 1e-8)
        throw std::domain_error("hypres: H_eval branch point at alpha = 1");
    double ch = std::cosh(r), sh = std::sinh(r);
    Cplx Rad = std::sqrt(1.0 + alpha * alpha * sh * sh);
    Cplx t1 = 2.0 * alpha * std::log((alpha * ch + Rad) / std::sqrt(alpha * alpha - 1.0));
    double t2 = std::log(std::abs((ch - Rad) / (ch + Rad)));
    return t1.real() + t2;
}

} // namespace hypres

#endif
