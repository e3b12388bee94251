#ifndef HYPRES_SPECFUN_HPP
#define HYPRES_SPECFUN_HPP

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_complex.hpp>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

#include "hypres/scaled.hpp"

namespace hypres {

inline constexpr double PI = 3.141592653589793238462643383279503;
inline constexpr double LOG_2PI = 1.837877066409345483560659472811;

struct EvalOptions {
    double abs_tol = 1e-12;
    double rel_tol = 1e-12;
    int max_terms = 200000;
};

struct pole_error : std::domain_error {
    Cplx location;
    explicit pole_error(Cplx z, const std::string& what = "hypres: evaluation at a pole")
        : std::domain_error(what), location(z) {}
};

struct convergence_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace detail {

inline double dist_to_nonpos_int(Cplx z) {
    double r = std::round(z.real());
    if (r > 0.0) return std::abs(z - Cplx(0.0, 0.0)) < 0.5 ? std::abs(z) : 1e9;
    return std::abs(z - Cplx(r, 0.0));
}

// Stirling series, valid Re z >= 10
inline Cplx lgamma_stirling(Cplx z) {
    static const double c[10] = {
        1.0 / 12.0, -1.0 / 360.0, 1.0 / 1260.0, -1.0 / 1680.0, 1.0 / 1188.0,
        -691.0 / 360360.0, 1.0 / 156.0, -3617.0 / 122400.0,
        43867.0 / 244188.0, -174611.0 / 125400.0};
    Cplx w = (z - 0.5) * std::log(z) - z + 0.5 * LOG_2PI;
    Cplx z2 = z * z;
    Cplx zp = z;
    for (int i = 0; i < 10; ++i) {
        w += c[i] / zp;
        zp *= z2;
    }
    return w;
}

// log(1 - e^{2 pi i z}) for Im z >= 0, principal
inline Cplx log1m_exp2pii(Cplx z) {
    Cplx w = std::exp(Cplx(0.0, 2.0 * PI) * z);
    return std::log(1.0 - w);
}

} // namespace detail

/// Principal-branch log Gamma: imaginary part continuous along paths avoiding
/// the poles; agrees with real lgamma on the positive axis.
inline Cplx log_gamma(Cplx z) {
    if (detail::dist_to_nonpos_int(z) < 1e-12)
        throw pole_error(z, "hypres: log_gamma at a pole of Gamma");
    if (z.real() >= 0.5) {
        int n = 0;
        Cplx acc(0.0, 0.0);
        while (z.real() + n < 10.0) {
            acc += std::log(z + double(n));
            ++n;
        }
        return detail::lgamma_stirling(z + double(n)) - acc;
    }
    // reflection; branch of log sin chosen to keep the result continuous
    if (z.imag() >= 0.0) {
        Cplx logsin = Cplx(0.0, -PI) * z + Cplx(-std::log(2.0), PI / 2.0) +
                      detail::log1m_exp2pii(z);
        return std::log(PI) - logsin - log_gamma(1.0 - z);
    }
    return std::conj(log_gamma(std::conj(z)));
}

/// sin(pi z) as a Scaled value (safe for large |Im z|)
inline Scaled sin_pi_scaled(Cplx z) {
    if (std::abs(z.imag()) <= 1.0) return Scaled(std::sin(PI * z));
    if (z.imag() > 0.0) {
        // sin(pi z) = exp(-i pi z) * (i/2) * (1 - e^{2 pi i z})
        Cplx L = Cplx(0.0, -PI) * z + Cplx(-std::log(2.0), PI / 2.0) +
                 detail::log1m_exp2pii(z);
        return Scaled::from_log(L);
    }
    Scaled s = sin_pi_scaled(std::conj(z));
    return Scaled(std::conj(s.mant), s.exp2);
}

/// 1/Gamma(z), entire, as a Scaled value
inline Scaled rgamma_scaled(Cplx z) {
    if (z.real() >= 0.5) return Scaled::from_log(-log_gamma(z));
    // reflection: 1/Gamma(z) = Gamma(1-z) sin(pi z) / pi  (entire form)
    Scaled g = Scaled::from_log(log_gamma(1.0 - z) - std::log(PI));
    return g * sin_pi_scaled(z);
}

inline Cplx rgamma(Cplx z) { return rgamma_scaled(z).to_cplx(); }

// ---------------------------------------------------------------------------
// Gauss hypergeometric, regularized: F(a,b;c;z)/Gamma(c), entire in c.
// Contracted domain: z real <= 0 (arguments are -sinh^2 r and -sinh^{-2} r0).
// ---------------------------------------------------------------------------

struct HypResult {
    Scaled value;
    double cancellation = 1.0; // max |term| / |sum|; rel error ~ eps * cancellation
    int terms = 0;
};

namespace detail {

inline HypResult hyp_series_dd(Cplx a, Cplx b, Cplx c, double w, const EvalOptions& opt);

/// 50-digit rerun for series whose cancellation exceeds the double-double
/// range (deep left half-plane at small k). The 1/Gamma(c) seed is taken at
/// double precision: its relative error scales the whole sum and does not
/// participate in the cancellation.
inline HypResult hyp_series_mp50(Cplx a, Cplx b, Cplx c, double w, const EvalOptions& opt) {
    using C50 = boost::multiprecision::cpp_complex_50;
    using R50 = boost::multiprecision::cpp_bin_float_50;
    C50 A(a.real(), a.imag()), B(b.real(), b.imag()), C(c.real(), c.imag());
    R50 W(w);
    Cplx seed0 = rgamma_scaled(c).to_cplx();
    C50 term(seed0.real(), seed0.imag());
    C50 sum = term;
    R50 mx = abs(sum);
    int quiet = 0;
    for (int n = 0; n < opt.max_terms; ++n) {
        Cplx cn = c + double(n);
        if (std::abs(cn) < 1e-12) {
            C50 pq(1);
            for (int j = 0; j <= n; ++j)
                pq *= (A + j) * (B + j) * W / R50(j + 1);
            Cplx rs = rgamma_scaled(c + double(n + 1)).to_cplx();
            term = pq * C50(rs.real(), rs.imag());
        } else {
            term *= (A + n) * (B + n) / ((C + n) * R50(n + 1)) * W;
        }
        sum += term;
        R50 at = abs(term);
        if (at > mx) mx = at;
        double rat = std::abs((a + double(n + 1)) * (b + double(n + 1)) * w) /
                     std::max(1e-300, std::abs((c + double(n + 1)) * (n + 2.0)));
        if (at < R50("1e-40") * abs(sum) && rat < 1.0) {
            if (++quiet >= 3) break;
        } else {
            quiet = 0;
        }
    }
    HypResult res;
    // scaled conversion via logs keeps huge/tiny magnitudes representable
    R50 asum = abs(sum);
    if (asum == 0) {
        res.value = Scaled(Cplx(0.0, 0.0));
        res.cancellation = 1e300;
        return res;
    }
    double la = log(asum).convert_to<double>();
    double ar = atan2(sum.imag(), sum.real()).convert_to<double>();
    res.value = Scaled::from_log(Cplx(la, ar));
    res.cancellation = std::max(1.0, (mx / asum).convert_to<double>() * 1e-34);
    return res;
}

/// Maclaurin sum of the regularized series at argument w (|w| < 1, real here).
/// Terms evolve as a single scaled product, so transient pole crossings of
/// Gamma(c+n) and huge unregularized prefactors stay representable.
inline HypResult hyp_series(Cplx a, Cplx b, Cplx c, double w, const EvalOptions& opt) {
    HypResult res;
    Scaled term = rgamma_scaled(c);
    if (term.is_zero()) {
        // c at a Gamma pole: leading terms vanish until n passes -c
        int m = int(std::round(-c.real()));
        Scaled pq(Cplx(1.0, 0.0)); // (a)_n (b)_n w^n / n!
        for (int n = 0; n < m + 1; ++n)
            pq = pq * ((a + double(n)) * (b + double(n)) * (w / (n + 1.0)));
        term = pq * rgamma_scaled(c + double(m + 1));
        res.terms = m + 1;
    }
    Scaled sum = term;
    double max_la = term.log_abs();
    int quiet = 0;
    int n = res.terms;
    while (n < opt.max_terms) {
        Cplx cn = c + double(n);
        if (std::abs(cn) < 1e-14) {
            // exact pole crossing mid-series: restart the term beyond it
            Scaled pq(Cplx(1.0, 0.0));
            for (int j = 0; j <= n; ++j)
                pq = pq * ((a + double(j)) * (b + double(j)) * (w / (j + 1.0)));
            term = pq * rgamma_scaled(c + double(n + 1));
        } else {
            term = term * ((a + double(n)) * (b + double(n)) / ((n + 1.0) * cn) * w);
        }
        ++n;
        sum = sum + term;
        max_la = std::max(max_la, term.log_abs());
        double rat = std::abs((a + double(n)) * (b + double(n)) * w) /
                     std::max(1e-300, std::abs((c + double(n)) * (n + 1.0)));
        if (term.log_abs() - sum.log_abs() < std::log(opt.rel_tol * 0.02) && rat < 1.0) {
            if (++quiet >= 3) break;
        } else {
            quiet = 0;
        }
    }
    if (n >= opt.max_terms)
        throw convergence_error("hypres: hypergeometric series did not converge");
    res.value = sum;
    res.terms = n;
    double dl = max_la - sum.log_abs();
    res.cancellation = dl > 700.0 ? 1e300 : std::exp(std::max(0.0, dl));
    if (res.cancellation > 1e19 || (res.cancellation > 1e4 && max_la >= 690.0)) {
        if (res.cancellation > 1e40)
            throw convergence_error("hypres: hypergeometric cancellation beyond range");
        HypResult mp = hyp_series_mp50(a, b, c, w, opt);
        mp.terms = n;
        return mp;
    }
    if (res.cancellation > 1e4) {
        HypResult dd_res = hyp_series_dd(a, b, c, w, opt);
        dd_res.terms = n;
        return dd_res;
    }
    return res;
}

/// double-double rerun of the Maclaurin sum; rescues series whose terms cancel
/// by up to ~1e15 more than plain doubles allow (term magnitudes must stay in
/// double range, which the caller's cancellation estimate certifies)
inline HypResult hyp_series_dd(Cplx a, Cplx b, Cplx c, double w, const EvalOptions& opt) {
    // NOLINTNEXTLINE
    ddc A(a), B(b), C(c), W(Cplx(w, 0.0));
    Cplx seed = rgamma_scaled(c).to_cplx();
    ddc term(seed);
    ddc sum = term;
    double mx = std::abs(seed);
    int quiet = 0;
    for (int n = 0; n < opt.max_terms; ++n) {
        Cplx cn = c + double(n);
        if (std::abs(cn) < 1e-12) {
            // rebuild the term just past an exact Gamma-pole crossing
            ddc pq(Cplx(1.0, 0.0));
            for (int j = 0; j <= n; ++j) {
                pq = ddc_mul(pq, ddc(a + double(j)));
                pq = ddc_mul(pq, ddc(b + double(j)));
                pq = ddc_div_real(pq, (j + 1.0) / w);
            }
            term = ddc_mul(pq, ddc(rgamma_scaled(c + double(n + 1)).to_cplx()));
        } else {
            term = ddc_mul(term, ddc(a + double(n)));
            term = ddc_mul(term, ddc(b + double(n)));
            term = ddc_div(term, ddc_mul(ddc(cn), ddc(Cplx(n + 1.0, 0.0))));
            term = ddc_mul(term, W);
        }
        sum = ddc_add(sum, term);
        double at = ddc_abs(term);
        mx = std::max(mx, at);
        double rat = std::abs((a + double(n + 1)) * (b + double(n + 1)) * w) /
                     std::max(1e-300, std::abs((c + double(n + 1)) * (n + 2.0)));
        if (at <= opt.rel_tol * 2e-4 * ddc_abs(sum) && rat < 1.0) {
            if (++quiet >= 3) break;
        } else {
            quiet = 0;
        }
    }
    HypResult res;
    res.value = Scaled(sum.to_cplx());
    res.cancellation = std::max(1.0, mx / std::max(1e-300, ddc_abs(sum)) * 1e-15);
    return res;
}

/// Connection z -> 1-z for w close to 1 (regularized, non-degenerate c-a-b):
///   F(a,b;c;w) = pi/sin(pi d) [ F(a,b;a+b-c+1;1-w)/(G(c-a)G(c-b))
///                              - (1-w)^d F(c-a,c-b;d+1;1-w)/(G(a)G(b)) ],
/// d = c-a-b   (DLMF 15.8.4 in entire form)
inline HypResult hyp_connection_nondeg(Cplx a, Cplx b, Cplx c, double w,
                                       const EvalOptions& opt) {
    Cplx d = c - a - b;
    double omw = 1.0 - w;
    HypResult f1 = hyp_series(a, b, a + b - c + 1.0, omw, opt);
    HypResult f2 = hyp_series(c - a, c - b, d + 1.0, omw, opt);
    Scaled t1 = f1.value * rgamma_scaled(c - a) * rgamma_scaled(c - b);
    Scaled t2 = f2.value * rgamma_scaled(a) * rgamma_scaled(b) *
                Scaled::from_log(d * std::log(omw));
    Scaled pref = Scaled(Cplx(PI, 0.0)) / sin_pi_scaled(d);
    HypResult res;
    res.value = pref * (t1 - t2);
    res.terms = f1.terms + f2.terms;
    double big = std::max(t1.log_abs(), t2.log_abs()) - res.value.log_abs();
    res.cancellation = std::max(f1.cancellation, f2.cancellation) *
                       (big > 700.0 ? 1e300 : std::exp(std::max(0.0, big)));
    return res;
}

inline HypResult hyp_connection(Cplx a, Cplx b, Cplx c, double w, const EvalOptions& opt) {
    Cplx d = c - a - b;
    double dist = std::abs(d.imag()) < 1.0
                      ? std::abs(d - Cplx(std::round(d.real()), 0.0))
                      : 1.0;
    if (dist > 1e-6) return hyp_connection_nondeg(a, b, c, w, opt);
    // logarithmic case: the regularized function is entire in c, so evaluate
    // at c +- eps, +- 2 eps and extrapolate (4-point Richardson)
    const double eps = 1e-3;
    auto at = [&](double e) {
        return hyp_connection_nondeg(a, b, c + Cplx(e, 0.0), w, opt);
    };
    HypResult p1 = at(eps), m1 = at(-eps), p2 = at(2 * eps), m2 = at(-2 * eps);
    Scaled s1 = (p1.value + m1.value) * Cplx(0.5, 0.0);
    Scaled s2 = (p2.value + m2.value) * Cplx(0.5, 0.0);
    HypResult res;
    res.value = (s1 * Cplx(4.0 / 3.0, 0.0)) - (s2 * Cplx(1.0 / 3.0, 0.0));
    res.terms = p1.terms + m1.terms + p2.terms + m2.terms;
    res.cancellation = std::max(1e6, p1.cancellation); // extrapolation floor ~1e-10
    return res;
}

/// Regularized 2F1 on the contracted domain z <= 0, scaled result.
/// Pfaff maps to w = z/(z-1) in [0,1); the 1-w connection takes over past 0.9.
inline HypResult hyp2f1_reg_scaled(Cplx a, Cplx b, Cplx c, double z,
                                   const EvalOptions& opt) {
    if (z > 0.0)
        throw std::domain_error("hypres: hyp2f1_reg contracted for z <= 0 only");
    double w = z / (z - 1.0);
    Cplx bp = c - b;
    HypResult inner = (w <= 0.9) ? hyp_series(a, bp, c, w, opt)
                                 : hyp_connection(a, bp, c, w, opt);
    inner.value = inner.value * Scaled::from_log(-a * std::log1p(-z));
    return inner;
}

} // namespace detail

/// F(a,b;c;z) / Gamma(c) for real z <= 0. Entire in c.
inline Cplx hyp2f1_reg(Cplx a, Cplx b, Cplx c, Cplx z,
                       const EvalOptions& opt = EvalOptions{}) {
    if (std::abs(z.imag()) > 1e-13 * (1.0 + std::abs(z.real())))
        throw std::domain_error("hypres: hyp2f1_reg contracted for real z <= 0");
    return detail::hyp2f1_reg_scaled(a, b, c, z.real(), opt).value.to_cplx();
}

// ---------------------------------------------------------------------------
// Airy Ai on |z| <= 40, |arg z| <= pi
// ---------------------------------------------------------------------------

namespace detail {

inline Cplx airy_maclaurin(Cplx z) {
    const double c1 = 0.35502805388781723926006318600418; // Ai(0)
    const double c2 = 0.25881940379280679840518356018920; // -Ai'(0)
    Cplx z3 = z * z * z;
    Cplx f(1.0, 0.0), g = z, tf = f, tg = g;
    for (int n = 1; n < 400; ++n) {
        tf *= z3 / double((3 * n) * (3 * n - 1));
        tg *= z3 / double((3 * n) * (3 * n + 1));
        f += tf;
        g += tg;
        if (std::abs(tf) + std::abs(tg) < 1e-20 * (std::abs(f) + std::abs(g))) break;
    }
    return c1 * f - c2 * g;
}

/// Maclaurin in double-double; rescues the cancellation annulus 4 < |z| < 12
/// away from the recessive wedge.
inline Cplx airy_maclaurin_dd(Cplx z) {
    const dd c1(0.35502805388781722, 2.0523363243621199e-17);
    const dd c2(0.25881940379280682, -2.5222431116108321e-17);
    ddc zc(z);
    ddc z3 = ddc_mul(zc, ddc_mul(zc, zc));
    ddc f(Cplx(1.0, 0.0)), g = zc, tf = f, tg = g;
    for (int n = 1; n < 600; ++n) {
        tf = ddc_div_real(ddc_mul(tf, z3), double((3 * n)) * double(3 * n - 1));
        tg = ddc_div_real(ddc_mul(tg, z3), double((3 * n)) * double(3 * n + 1));
        f = ddc_add(f, tf);
        g = ddc_add(g, tg);
        if (ddc_abs(tf) + ddc_abs(tg) < 1e-36 * (ddc_abs(f) + ddc_abs(g))) break;
    }
    ddc r = ddc_add(ddc_mul(ddc(Cplx(c1.hi, 0.0)), f), ddc_mul(ddc(Cplx(-c2.hi, 0.0)), g));
    // low-order constant corrections
    ddc rl = ddc_add(ddc_mul(ddc{dd(c1.lo), dd(0.0)}, f), ddc_mul(ddc{dd(-c2.lo), dd(0.0)}, g));
    return ddc_add(r, rl).to_cplx();
}

inline const double* airy_u_coeffs() {
    static double u[25];
    static bool init = false;
    if (!init) {
        u[0] = 1.0;
        for (int n = 0; n < 24; ++n)
            u[n + 1] = u[n] * (6 * n + 5) * (6 * n + 3) * (6 * n + 1) /
                       (216.0 * (n + 1) * (2 * n + 1));
        init = true;
    }
    return u;
}

/// Ai and Ai' by the large-|z| expansion, |arg z| <= 2pi/3
inline void airy_asym(Cplx z, Cplx* ai, Cplx* aip) {
    const double* u = airy_u_coeffs();
    Cplx sq = std::sqrt(z);
    Cplx zeta = (2.0 / 3.0) * z * sq;
    Cplx invz = -1.0 / zeta;
    Cplx sa(1.0, 0.0), sp(1.0, 0.0), p(1.0, 0.0);
    double best = 1e300;
    for (int n = 1; n < 25; ++n) {
        p *= invz;
        double tu = std::abs(u[n] * p);
        if (tu > best) break;
        best = tu;
        sa += u[n] * p;
        sp += (-u[n] * (6.0 * n + 1.0) / (6.0 * n - 1.0)) * p;
    }
    Cplx pref = std::exp(-zeta) / (2.0 * std::sqrt(PI));
    Cplx q = std::sqrt(sq); // z^{1/4}
    *ai = pref / q * sa;
    if (aip) *aip = -pref * q * sp;
}

/// Taylor-march Ai inward from |z|=12 along the ray (stable in |arg z|<=pi/3,
/// where Ai grows toward the origin)
inline Cplx airy_march(Cplx z) {
    Cplx zr = 12.0 * std::exp(Cplx(0.0, std::arg(z)));
    Cplx w, wp;
    airy_asym(zr, &w, &wp);
    int steps = std::max(4, int(std::abs(z - zr) / 0.22) + 1);
    Cplx z0 = zr;
    Cplx acoef[32];
    for (int j = 1; j <= steps; ++j) {
        Cplx z1 = zr + (z - zr) * (double(j) / steps);
        Cplx h = z1 - z0;
        acoef[0] = w;
        acoef[1] = wp;
        for (int m = 0; m + 2 < 32; ++m) {
            Cplx am1 = (m >= 1) ? acoef[m - 1] : Cplx(0.0, 0.0);
            acoef[m + 2] = (z0 * acoef[m] + am1) / double((m + 1) * (m + 2));
        }
        Cplx v(0.0, 0.0), vp(0.0, 0.0);
        for (int m = 31; m >= 1; --m) {
            v = v * h + acoef[m];
            vp = vp * h + double(m) * acoef[m];
        }
        v = v * h + acoef[0];
        w = v;
        wp = vp;
        z0 = z1;
    }
    return w;
}

inline Cplx airy_ai_impl(Cplx z);

inline Cplx airy_rotate(Cplx z) {
    const Cplx wp = std::exp(Cplx(0.0, 2.0 * PI / 3.0));
    const Cplx wm = std::conj(wp);
    return -(wp * airy_ai_impl(z * wp) + wm * airy_ai_impl(z * wm));
}

inline Cplx airy_ai_impl(Cplx z) {
    double az = std::abs(z);
    double ph = std::abs(std::arg(z));
    if (az <= 4.0) return airy_maclaurin(z);
    if (az < 12.0) {
        if (ph <= PI / 3.0 + 1e-14) return airy_march(z);
        return airy_maclaurin_dd(z);
    }
    if (ph <= 2.0 * PI / 3.0 + 1e-14) {
        Cplx ai;
        airy_asym(z, &ai, nullptr);
        return ai;
    }
    return airy_rotate(z);
}

} // namespace detail

/// Airy Ai(z), |z| <= 40 contracted (larger magnitudes evaluate until the
/// exponential factor overflows, which raises std::overflow_error).
inline Cplx airy_ai(Cplx z) {
    double az = std::abs(z);
    if (az > 4.0 && std::abs(std::arg(z)) < PI / 3.0) {
        // recessive direction: check the exponent is representable
        Cplx zeta = (2.0 / 3.0) * z * std::sqrt(z);
        if (std::abs(zeta.real()) > 700.0)
            throw std::overflow_error("hypres: airy_ai exponential range");
    }
    return detail::airy_ai_impl(z);
}

} // namespace hypres

#endif
