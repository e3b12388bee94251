#ifndef HYPRES_DOMAIN_HPP
#define HYPRES_DOMAIN_HPP

#include <cmath>
#include <complex>
#include <stdexcept>

#include "hypres/scaled.hpp"
#include "hypres/specfun.hpp"

namespace hypres {

/// Model funnel end [r0, inf) x S^1 with metric dr^2 + ell^2 cosh^2 r dtheta^2/(2 pi)^2.
/// r0 > 0 truncated, r0 < 0 extended, r0 = 0 standard (geodesic boundary).
struct Funnel {
    double ell = 2.0 * PI;
    double r0 = 0.0;

    Funnel() = default;
    Funnel(double ell_, double r0_) : ell(ell_), r0(r0_) {
        if (!(ell > 0.0)) throw std::domain_error("hypres: funnel requires ell > 0");
    }
    double omega() const { return 2.0 * PI / ell; }
};

/// Fourier mode k >= 0 with spectral parameter s and alpha = (s - 1/2)/k.
struct ModeContext {
    int k = 0;
    Cplx s{0.5, 0.0};
    Cplx alpha{0.0, 0.0}; // defined for k >= 1 only

    ModeContext() = default;
    ModeContext(Cplx s_, int k_) : k(k_), s(s_) {
        if (k_ < 0) throw std::domain_error("hypres: mode index k must be >= 0");
        if (k_ >= 1) alpha = (s_ - 0.5) / double(k_);
    }
    static ModeContext from_alpha(Cplx alpha_, int k_) {
        if (k_ < 1) throw std::domain_error("hypres: alpha parametrization needs k >= 1");
        ModeContext c;
        c.k = k_;
        c.alpha = alpha_;
        c.s = 0.5 + double(k_) * alpha_;
        return c;
    }
};

enum class EndModel { standard_funnel, truncated_funnel, extended_funnel, hyperbolic_plane };

} // namespace hypres

#endif
