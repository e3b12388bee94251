#ifndef HYPRES_SCALED_HPP
#define HYPRES_SCALED_HPP

#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>

namespace hypres {

using Cplx = std::complex<double>;

/// Complex value with a separate power-of-two exponent: value = mant * 2^exp2.
/// Keeps products of Gamma factors and hypergeometric sums representable far
/// beyond the double range; mantissa magnitude is kept near [2^-60, 2^60].
struct Scaled {
    Cplx mant{0.0, 0.0};
    long exp2 = 0;

    Scaled() = default;
    Scaled(Cplx m, long e) : mant(m), exp2(e) { normalize(); }
    explicit Scaled(Cplx m) : mant(m), exp2(0) { normalize(); }
    explicit Scaled(double m) : mant(m, 0.0), exp2(0) { normalize(); }

    void normalize() {
        double a = std::abs(mant.real()) + std::abs(mant.imag());
        if (a == 0.0) { exp2 = 0; return; }
        if (!(a >= 1e-18 && a <= 1e18)) {
            int k;
            std::frexp(a, &k);
            mant *= std::ldexp(1.0, -k);
            exp2 += k;
        }
    }

    bool is_zero() const { return mant == Cplx(0.0, 0.0); }

    /// natural log of |value|; -inf for zero
    double log_abs() const {
        if (is_zero()) return -std::numeric_limits<double>::infinity();
        return std::log(std::abs(mant)) + double(exp2) * 0.6931471805599453;
    }
    double arg() const { return std::arg(mant); }

    /// value as complex log (log|.| + i arg)
    Cplx clog() const { return {log_abs(), arg()}; }

    Cplx to_cplx() const {
        if (is_zero()) return {0.0, 0.0};
        double la = log_abs();
        if (la > 709.0) throw std::overflow_error("hypres: scaled value overflows double");
        if (la < -745.0) return {0.0, 0.0};
        return mant * std::ldexp(1.0, int(exp2));
    }

    static Scaled from_log(Cplx L) {
        // value = exp(L); exponent carries the bulk of Re L
        double e = std::floor(L.real() / 0.6931471805599453);
        if (std::abs(e) > 2e18) throw std::overflow_error("hypres: from_log exponent range");
        Cplx m = std::exp(Cplx(L.real() - e * 0.6931471805599453, L.imag()));
        return Scaled(m, long(e));
    }

    friend Scaled operator*(const Scaled& a, const Scaled& b) {
        return Scaled(a.mant * b.mant, a.exp2 + b.exp2);
    }
    friend Scaled operator*(const Scaled& a, Cplx c) { return Scaled(a.mant * c, a.exp2); }
    friend Scaled operator*(Cplx c, const Scaled& a) { return a * c; }
    friend Scaled operator/(const Scaled& a, const Scaled& b) {
        if (b.is_zero()) throw std::domain_error("hypres: scaled division by zero");
        return Scaled(a.mant / b.mant, a.exp2 - b.exp2);
    }
    friend Scaled operator+(const Scaled& a, const Scaled& b) {
        if (a.is_zero()) return b;
        if (b.is_zero()) return a;
        long d = b.exp2 - a.exp2;
        if (d > 120) return b;
        if (d < -120) return a;
        if (d >= 0) return Scaled(a.mant * std::ldexp(1.0, int(-d)) + b.mant, b.exp2);
        return Scaled(a.mant + b.mant * std::ldexp(1.0, int(d)), a.exp2);
    }
    friend Scaled operator-(const Scaled& a, const Scaled& b) { return a + (b * Cplx(-1.0, 0.0)); }

    /// |a| / |b| as a double capped to avoid overflow
    static double abs_ratio(const Scaled& a, const Scaled& b) {
        if (b.is_zero()) return std::numeric_limits<double>::infinity();
        if (a.is_zero()) return 0.0;
        double dl = a.log_abs() - b.log_abs();
        if (dl > 700.0) return std::numeric_limits<double>::infinity();
        if (dl < -700.0) return 0.0;
        return std::exp(dl);
    }
};

// ---------------------------------------------------------------------------
// double-double helpers (used by the Airy Maclaurin sum in the cancellation
// annulus; ~31 significant digits)
// ---------------------------------------------------------------------------

struct dd {
    double hi = 0.0, lo = 0.0;
    dd() = default;
    dd(double h) : hi(h), lo(0.0) {}
    dd(double h, double l) : hi(h), lo(l) {}
};

inline dd dd_two_sum(double a, double b) {
    double s = a + b;
    double bb = s - a;
    double err = (a - (s - bb)) + (b - bb);
    return {s, err};
}

inline dd dd_add(dd a, dd b) {
    dd s = dd_two_sum(a.hi, b.hi);
    double lo = s.lo + a.lo + b.lo;
    dd r = dd_two_sum(s.hi, lo);
    return r;
}

inline dd dd_neg(dd a) { return {-a.hi, -a.lo}; }

inline dd dd_mul(dd a, dd b) {
    double p = a.hi * b.hi;
    double e = std::fma(a.hi, b.hi, -p);
    e += a.hi * b.lo + a.lo * b.hi;
    return dd_two_sum(p, e);
}

inline dd dd_div(dd a, dd b) {
    double q1 = a.hi / b.hi;
    dd r = dd_add(a, dd_neg(dd_mul(dd(q1), b)));
    double q2 = r.hi / b.hi;
    dd q = dd_two_sum(q1, q2);
    return q;
}

struct ddc {
    dd re, im;
    ddc() = default;
    ddc(dd r, dd i) : re(r), im(i) {}
    ddc(Cplx z) : re(z.real()), im(z.imag()) {}
    Cplx to_cplx() const { return {re.hi + re.lo, im.hi + im.lo}; }
};

inline ddc ddc_add(ddc a, ddc b) { return {dd_add(a.re, b.re), dd_add(a.im, b.im)}; }
inline ddc ddc_mul(ddc a, ddc b) {
    dd rr = dd_add(dd_mul(a.re, b.re), dd_neg(dd_mul(a.im, b.im)));
    dd ii = dd_add(dd_mul(a.re, b.im), dd_mul(a.im, b.re));
    return {rr, ii};
}
inline ddc ddc_div(ddc a, ddc b) {
    ddc num = ddc_mul(a, {b.re, dd_neg(b.im)});
    dd den = dd_add(dd_mul(b.re, b.re), dd_mul(b.im, b.im));
    return {dd_div(num.re, den), dd_div(num.im, den)};
}
inline ddc ddc_div_real(ddc a, double d) { return {dd_div(a.re, dd(d)), dd_div(a.im, dd(d))}; }
inline double ddc_abs(ddc a) { return std::abs(a.to_cplx()); }

} // namespace hypres

#endif
