#ifndef HYPRES_CONSTANTS_HPP
#define HYPRES_CONSTANTS_HPP

#include <cmath>
#include <stdexcept>
#include <vector>

#include "hypres/phase.hpp"
#include "hypres/quadrature.hpp"

namespace hypres {

struct EndDescriptor {
    enum class Kind { funnel, planar, cusp };
    Kind kind = Kind::funnel;
    double ell = 2.0 * PI; // funnel only; planar ends use ell = 2 pi by convention
    double b = 0.0;        // boundary location (signed r0 for model funnels)
};

struct SurfaceDescriptor {
    int euler_characteristic = 0;
    double core_volume = 0.0; // vol(X_c, g) >= 0
    std::vector<EndDescriptor> ends;
};

/// kappa(theta, r) = 2 int_0^inf [I(x e^{i theta}, ell, r)]_+ / x^3 dx - (ell/2) sin^2 theta
inline double kappa_eval(double theta, const Funnel& fun, double r,
                         const QuadratureSpec& spec = QuadratureSpec{}) {
    if (theta < 0.0 || theta > PI / 2.0 + 1e-12)
        throw std::domain_error("hypres: kappa_eval needs theta in [0, pi/2]");
    Cplx eith = std::exp(Cplx(0.0, theta));
    double inner = quad_positive_inner(
        [&](double x) { return I_eval(x * eith, fun.ell, r); }, spec);
    double st = std::sin(theta);
    return 2.0 * inner - 0.5 * fun.ell * st * st;
}

/// A(F_{ell,r0}) = -(ell/2 pi) sinh r0 + (4/pi) int int [I(x e^{i theta}, ell, r0)]_+/x^3
/// (valid for both signs of r0)
inline double A_funnel(double ell, double r0, const QuadratureSpec& spec = QuadratureSpec{},
                       double* err_est = nullptr) {
    if (!(ell > 0.0)) throw std::domain_error("hypres: A_funnel needs ell > 0");
    double q = quad_positive_part(
        [&](double x, double th) { return I_eval(x * std::exp(Cplx(0.0, th)), ell, r0); },
        spec, err_est);
    if (err_est) *err_est *= 4.0 / PI;
    return -(ell / (2.0 * PI)) * std::sinh(r0) + (4.0 / PI) * q;
}

/// A(Omega_{r0}) = 2 - cosh r0 + (4/pi) int int [H(x e^{i theta}, r0)]_+/x^3
inline double A_obstacle(double r0, const QuadratureSpec& spec = QuadratureSpec{},
                         double* err_est = nullptr) {
    if (!(r0 > 0.0)) throw std::domain_error("hypres: A_obstacle needs r0 > 0");
    double q = quad_positive_part(
        [&](double x, double th) {
            Cplx a = x * std::exp(Cplx(0.0, th));
            if (std::abs(a - Cplx(1.0, 0.0)) < 1e-8) a += Cplx(2e-8, 0.0);
            return H_eval(a, r0);
        },
        spec, err_est);
    if (err_est) *err_est *= 4.0 / PI;
    return 2.0 - std::cosh(r0) + (4.0 / PI) * q;
}

/// Per-end constant of the scattering-determinant bound:
/// funnel (4/pi) iint [I]_+ - ell/4, planar (4/pi) iint [H]_+; cusps do not contribute.
inline double B_end(const EndDescriptor& end, const QuadratureSpec& spec = QuadratureSpec{}) {
    if (end.kind == EndDescriptor::Kind::cusp)
        throw std::domain_error("hypres: B_end undefined for cusp ends");
    if (end.kind == EndDescriptor::Kind::funnel) {
        double q = quad_positive_part(
            [&](double x, double th) {
                return I_eval(x * std::exp(Cplx(0.0, th)), end.ell, end.b);
            },
            spec);
        return (4.0 / PI) * q - end.ell / 4.0;
    }
    double q = quad_positive_part(
        [&](double x, double th) {
            Cplx a = x * std::exp(Cplx(0.0, th));
            if (std::abs(a - Cplx(1.0, 0.0)) < 1e-8) a += Cplx(2e-8, 0.0);
            return H_eval(a, end.b);
        },
        spec);
    return (4.0 / PI) * q;
}

/// Hadamard-regularized volume: planar -2 pi cosh b, funnel -ell sinh b.
inline double zero_volume(const EndDescriptor& end) {
    switch (end.kind) {
        case EndDescriptor::Kind::planar: return -2.0 * PI * std::cosh(end.b);
        case EndDescriptor::Kind::funnel: return -end.ell * std::sinh(end.b);
        default: throw std::domain_error("hypres: zero_volume undefined for cusp ends");
    }
}

/// Upper-bound constant for the regularized resonance count:
///   vol(X_c)/2 pi + sum_funnel A(F_{ell_j, b_j}) + sum_planar A(Omega_{b_j})
inline double upper_bound_surface(const SurfaceDescriptor& surf,
                                  const QuadratureSpec& spec = QuadratureSpec{}) {
    double total = surf.core_volume / (2.0 * PI);
    bool hyperbolic_special = std::abs(surf.core_volume + 2.0 * PI * surf.euler_characteristic) < 1e-9;
    for (const auto& e : surf.ends) {
        if (e.kind == EndDescriptor::Kind::cusp) continue;
        if (e.kind == EndDescriptor::Kind::funnel) {
            if (hyperbolic_special && e.b == 0.0) total += e.ell / 4.0;
            else total += A_funnel(e.ell, e.b, spec);
        } else {
            total += A_obstacle(e.b, spec);
        }
    }
    return total;
}

} // namespace hypres

#endif
