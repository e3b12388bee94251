#ifndef HYPRES_RESONANCES_HPP
#define HYPRES_RESONANCES_HPP

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include "hypres/domain.hpp"
#include "hypres/modes.hpp"
#include "hypres/parallel.hpp"
#include "hypres/phase.hpp"

namespace hypres {

struct ResonanceEntry {
    Cplx s;
    int multiplicity = 1;
    int mode = -1; // originating |k|; -1 for aggregated background
};

struct SearchRegion {
    double re_min, re_max, im_min, im_max;
    double grid_step = 0.25;
};

struct ResonanceSet {
    std::vector<ResonanceEntry> entries;
    std::vector<ResonanceEntry> excluded; // near prefactor degeneracies
    int merged = 0;                       // cross-mode coincidences within 1e-8
};

struct contour_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace winding {

using Fn = std::function<Scaled(Cplx)>;

/// phase-marched argument change along the segment [a, b]
inline double edge_arg_change(const Fn& f, Cplx a, Cplx b, Scaled fa, Scaled fb, int depth) {
    double d = fb.arg() - fa.arg();
    while (d > PI) d -= 2.0 * PI;
    while (d < -PI) d += 2.0 * PI;
    double dm = fb.log_abs() - fa.log_abs();
    if (std::abs(d) <= 1.2 && std::abs(dm) <= 1.5) return d;
    if (depth > 48 || std::abs(b - a) < 1e-13 * (1.0 + std::abs(a)))
        throw contour_error("hypres: contour passes too close to a zero near s = " +
                            std::to_string(a.real()) + (a.imag() < 0 ? " - " : " + ") +
                            std::to_string(std::abs(a.imag())) + "i");
    Cplx m = 0.5 * (a + b);
    Scaled fm = f(m);
    if (fm.is_zero()) throw contour_error("hypres: exact zero on contour");
    return edge_arg_change(f, a, m, fa, fm, depth + 1) +
           edge_arg_change(f, m, b, fm, fb, depth + 1);
}

inline int count_zeros(const Fn& f, double x0, double x1, double y0, double y1,
                       double init_step) {
    Cplx corners[5] = {{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}, {x0, y0}};
    double total = 0.0;
    for (int e = 0; e < 4; ++e) {
        Cplx a = corners[e], b = corners[e + 1];
        int nseg = std::max(2, int(std::abs(b - a) / std::max(1e-6, init_step)) + 1);
        Scaled fprev = f(a);
        if (fprev.is_zero()) throw contour_error("hypres: exact zero on contour");
        for (int i = 1; i <= nseg; ++i) {
            Cplx q = a + (b - a) * (double(i) / nseg);
            Scaled fq = f(q);
            if (fq.is_zero()) throw contour_error("hypres: exact zero on contour");
            total += edge_arg_change(f, a + (b - a) * (double(i - 1) / nseg), q, fprev, fq, 0);
            fprev = fq;
        }
    }
    double wn = total / (2.0 * PI);
    int n = int(std::lround(wn));
    if (std::abs(wn - n) > 0.25 || n < 0)
        throw contour_error("hypres: winding number not integral");
    return n;
}

/// count_zeros with perturb-and-retry on contour failures (edges move outward)
inline int count_zeros_robust(const Fn& f, double& x0, double& x1, double& y0, double& y1,
                              double step) {
    for (int attempt = 0; attempt < 6; ++attempt) {
        try {
            return count_zeros(f, x0, x1, y0, y1, step);
        } catch (const contour_error&) {
            double d = (attempt + 1) * step * 0.1 * 0.61803398875;
            x0 -= d;
            x1 += 1.070116 * d;
            y0 -= 0.93311 * d;
            y1 += 1.133711 * d;
        }
    }
    throw contour_error("hypres: persistent zero-on-contour after retries");
}

struct Zero {
    Cplx z;
    int mult;
    bool refined;
};

/// Newton refinement; derivative by central difference with one Richardson level
inline bool newton_refine(const Fn& f, Cplx& z, double scale) {
    for (int it = 0; it < 60; ++it) {
        double h = 1e-6 * std::max(1.0, std::abs(z));
        Scaled fz = f(z);
        if (fz.is_zero()) return true;
        Scaled d1 = (f(z + Cplx(h, 0.0)) - f(z - Cplx(h, 0.0))) * Cplx(0.5 / h, 0.0);
        Scaled d2 = (f(z + Cplx(2 * h, 0.0)) - f(z - Cplx(2 * h, 0.0))) * Cplx(0.25 / h, 0.0);
        Scaled der = d1 * Cplx(4.0 / 3.0, 0.0) - d2 * Cplx(1.0 / 3.0, 0.0);
        if (der.is_zero()) return false;
        Cplx step;
        try {
            step = (fz / der).to_cplx();
        } catch (const std::overflow_error&) {
            return false;
        }
        if (!(std::abs(step) < 4.0 * scale) || !std::isfinite(std::abs(step))) return false;
        z -= step;
        if (std::abs(step) < 1e-11 * std::max(1.0, std::abs(z))) return true;
    }
    return false;
}

inline void subdivide(const Fn& f, double x0, double x1, double y0, double y1, int count,
                      double step, std::vector<Zero>& out, int depth) {
    if (count == 0) return;
    double diam = std::hypot(x1 - x0, y1 - y0);
    if ((count == 1 && diam <= 0.35) || diam < 1e-7 || depth > 42) {
        Cplx z(0.5 * (x0 + x1), 0.5 * (y0 + y1));
        bool ok = newton_refine(f, z, std::max(diam, 1e-6));
        // accept only a zero that stayed inside its certified box (a polish
        // that slides into a neighboring box would double-count that zero)
        double mx = 0.02 * (x1 - x0) + 1e-10, my = 0.02 * (y1 - y0) + 1e-10;
        if (ok && z.real() > x0 - mx && z.real() < x1 + mx && z.imag() > y0 - my &&
            z.imag() < y1 + my) {
            out.push_back({z, count, true});
            return;
        }
        if (diam < 1e-7 || depth > 42) {
            out.push_back({z, count, false});
            return;
        }
    }
    bool vertical = (x1 - x0) >= (y1 - y0);
    for (int attempt = 0;; ++attempt) {
        if (attempt >= 6) throw contour_error("hypres: subdivision split kept hitting zeros");
        double frac = 0.5 + 0.13 * ((attempt + 1) / 2) * (attempt % 2 ? -1 : 1);
        try {
            std::vector<Zero> sub;
            int c1, c2;
            if (vertical) {
                double xm = x0 + (x1 - x0) * frac;
                double a0 = x0, a1 = xm, b0 = y0, b1 = y1;
                c1 = count_zeros(f, a0, a1, b0, b1, step);
                double m0 = xm, m1 = x1, n0 = y0, n1 = y1;
                c2 = count_zeros(f, m0, m1, n0, n1, step);
                if (c1 + c2 != count) throw contour_error("hypres: split count mismatch");
                subdivide(f, a0, a1, b0, b1, c1, step, sub, depth + 1);
                subdivide(f, m0, m1, n0, n1, c2, step, sub, depth + 1);
            } else {
                double ym = y0 + (y1 - y0) * frac;
                c1 = count_zeros(f, x0, x1, y0, ym, step);
                c2 = count_zeros(f, x0, x1, ym, y1, step);
                if (c1 + c2 != count) throw contour_error("hypres: split count mismatch");
                subdivide(f, x0, x1, y0, ym, c1, step, sub, depth + 1);
                subdivide(f, x0, x1, ym, y1, c2, step, sub, depth + 1);
            }
            out.insert(out.end(), sub.begin(), sub.end());
            return;
        } catch (const contour_error&) {
            if (attempt >= 5) throw;
        }
    }
}

/// all zeros of f in the rectangle, winding-certified: the number of refined
/// zeros (with multiplicity) always equals the outer winding total
inline std::vector<Zero> find_all(const Fn& f, double x0, double x1, double y0, double y1,
                                  double step) {
    double a0 = x0, a1 = x1, b0 = y0, b1 = y1;
    int total = count_zeros_robust(f, a0, a1, b0, b1, step);
    std::vector<Zero> out;
    subdivide(f, a0, a1, b0, b1, total, step, out, 0);
    int sum = 0;
    for (auto& z : out) sum += z.mult;
    if (sum != total) throw contour_error("hypres: zero count mismatch after refinement");
    return out;
}

} // namespace winding

/// Background resonance lattices from the Gamma poles of the explicit elements.
enum class BackgroundModel { standard_funnel, hyperbolic_plane };

inline ResonanceSet background_lattice(BackgroundModel model, double radius,
                                       double ell = 2.0 * PI) {
    if (!(radius >= 1.0)) throw std::domain_error("hypres: background radius >= 1");
    ResonanceSet set;
    if (model == BackgroundModel::hyperbolic_plane) {
        for (int n = 0;; ++n) {
            Cplx s(-double(n), 0.0);
            if (std::abs(s - 0.5) > radius) break;
            set.entries.push_back({s, 2 * n + 1, -1});
        }
        return set;
    }
    double om = 2.0 * PI / ell;
    for (int n = 0;; ++n) {
        double re = -1.0 - 2.0 * n;
        if (std::abs(re - 0.5) > radius) break;
        for (int k = 0;; ++k) {
            Cplx s(re, om * k);
            if (std::abs(s - 0.5) > radius) break;
            set.entries.push_back({s, 2, k});
            if (k > 0) set.entries.push_back({std::conj(s), 2, k});
        }
    }
    return set;
}

namespace detail {

inline winding::Fn make_condition(EndModel model, int k, const Funnel& fun,
                                  const EvalOptions& opt) {
    double om = fun.omega();
    if (model == EndModel::truncated_funnel) {
        double r0 = fun.r0;
        return [k, om, r0, opt](Cplx s) {
            return res_condition_truncated(s, k, om, r0, opt).value;
        };
    }
    double r0 = std::abs(fun.r0);
    return [k, om, r0, opt](Cplx s) {
        return res_condition_extended(s, k, om, r0, opt).value;
    };
}

inline double dist_to_half_integers(Cplx s) {
    double h = std::round(2.0 * s.real()) / 2.0;
    return std::abs(s - Cplx(h, 0.0));
}

/// smallest |alpha| on the mode-zero localization curve (Re phi = 0 for the
/// truncated funnel, Re(phi - 2 phi0) = 0 for the extended one), by
/// golden-section over theta of the per-theta bisection root
inline double rho_min_curve(EndModel model, const Funnel& fun) {
    double om = fun.omega();
    double r0 = std::abs(fun.r0);
    auto level = [&](double th) {
        Cplx ei = std::exp(Cplx(0.0, th));
        auto G = [&](double x) {
            Cplx ph = phase_phi_value(x * ei, om, r0);
            if (model == EndModel::extended_funnel)
                return 2.0 * phase_phi0(x * ei, om).real() - ph.real();
            return ph.real();
        };
        double lo = 1e-6, hi = 1.0;
        if (G(lo) > 0.0) return lo;
        while (G(hi) <= 0.0) {
            hi *= 2.0;
            if (hi > 1e8) return 1e18;
        }
        for (int i = 0; i < 100; ++i) {
            double m = 0.5 * (lo + hi);
            (G(m) <= 0.0 ? lo : hi) = m;
        }
        return 0.5 * (lo + hi);
    };
    // golden-section minimize over theta in (0, pi/2]
    const double gr = 0.61803398875;
    double a = 1e-3, b = PI / 2.0;
    double c = b - gr * (b - a), d = a + gr * (b - a);
    double fc = level(c), fd = level(d);
    for (int i = 0; i < 60; ++i) {
        if (fc < fd) {
            b = d; d = c; fd = fc;
            c = b - gr * (b - a);
            fc = level(c);
        } else {
            a = c; c = d; fc = fd;
            d = a + gr * (b - a);
            fd = level(d);
        }
    }
    return std::min({fc, fd, level(PI / 2.0)});
}

} // namespace detail

/// All zeros of the mode-k resonance condition inside the region (winding-
/// certified, Newton-refined). Multiplicity is the winding of the isolating box.
inline std::vector<ResonanceEntry> find_mode_zeros(EndModel model, int k, const Funnel& fun,
                                                   const SearchRegion& region,
                                                   std::vector<ResonanceEntry>* excluded = nullptr,
                                                   const EvalOptions& opt = EvalOptions{}) {
    if (model != EndModel::truncated_funnel && model != EndModel::extended_funnel)
        throw std::domain_error("hypres: find_mode_zeros for truncated/extended models");
    if (k < 0) throw std::domain_error("hypres: mode index k >= 0");
    auto f = detail::make_condition(model, k, fun, opt);
    auto zeros = winding::find_all(f, region.re_min, region.re_max, region.im_min,
                                   region.im_max, region.grid_step);
    std::vector<ResonanceEntry> out;
    for (auto& z : zeros) {
        ResonanceEntry e{z.z, z.mult, k};
        // The entire single-F condition stays well conditioned at half-integer s
        // (deep real-axis resonances approach those points exponentially and are
        // genuine), so only the numerically unresolvable neighborhood is set aside.
        if (detail::dist_to_half_integers(z.z) < 1e-12) {
            if (excluded) excluded->push_back(e);
            continue;
        }
        bool dup = false;
        for (auto& p : out)
            if (std::abs(p.s - e.s) < 1e-8) {
                p.multiplicity += e.multiplicity;
                dup = true;
                break;
            }
        if (!dup) out.push_back(e);
    }
    std::sort(out.begin(), out.end(), [](const ResonanceEntry& a, const ResonanceEntry& b) {
        return a.s.imag() < b.s.imag() || (a.s.imag() == b.s.imag() && a.s.real() < b.s.real());
    });
    return out;
}

/// Full resonance set of the model end out to |s - 1/2| <= radius.
/// Mode k >= 1 zeros carry multiplicity 2 (the +-k pair); conjugates are added;
/// coincidences within 1e-8 are merged.
inline ResonanceSet resonance_set(EndModel model, const Funnel& fun, double radius,
                                  const EvalOptions& opt = EvalOptions{}) {
    if (!(radius > 0.0 && radius <= 60.0))
        throw std::domain_error("hypres: resonance_set radius in (0, 60]");
    double rho_min = detail::rho_min_curve(model, fun);
    int k_max = int(std::ceil(radius / rho_min));
    std::vector<std::vector<ResonanceEntry>> per_k(k_max + 1);
    std::vector<std::vector<ResonanceEntry>> per_k_excl(k_max + 1);
    parallel_for(k_max + 1, [&](int k) {
        SearchRegion reg{0.5 - radius - 0.6, 0.5 + 0.01, -1e-4, radius + 0.5, 0.25};
        per_k[k] = find_mode_zeros(model, k, fun, reg, &per_k_excl[k], opt);
    });
    ResonanceSet set;
    for (int k = 0; k <= k_max; ++k) {
        int factor = (k >= 1) ? 2 : 1;
        for (auto e : per_k[k]) {
            if (std::abs(e.s - 0.5) > radius) continue;
            if (e.s.imag() < -1e-9) continue; // mirror of an in-box near-real partner
            e.multiplicity *= factor;
            set.entries.push_back(e);
            if (e.s.imag() > 1e-9) {
                ResonanceEntry c = e;
                c.s = std::conj(e.s);
                set.entries.push_back(c);
            }
        }
        for (auto e : per_k_excl[k]) {
            e.multiplicity *= factor;
            set.excluded.push_back(e);
        }
    }
    // deterministic order, then merge coincidences within 1e-8
    std::sort(set.entries.begin(), set.entries.end(),
              [](const ResonanceEntry& a, const ResonanceEntry& b) {
                  if (a.s.real() != b.s.real()) return a.s.real() < b.s.real();
                  if (a.s.imag() != b.s.imag()) return a.s.imag() < b.s.imag();
                  return a.mode < b.mode;
              });
    std::vector<ResonanceEntry> merged;
    for (auto& e : set.entries) {
        if (!merged.empty() && std::abs(merged.back().s - e.s) < 1e-8) {
            merged.back().multiplicity += e.multiplicity;
            ++set.merged;
        } else {
            merged.push_back(e);
        }
    }
    set.entries = std::move(merged);
    return set;
}

/// Staircase counting functions N(t) and the regularized
/// Ntilde(a) = int_0^a 2 N(t)/t^2 dt = sum_{r_j <= a} 2 m_j (1/r_j - 1/a),
/// integrated exactly jump by jump.
class CountingSampler {
  public:
    explicit CountingSampler(const ResonanceSet& set) {
        for (const auto& e : set.entries)
            jumps_.push_back({std::abs(e.s - 0.5), e.multiplicity});
        std::sort(jumps_.begin(), jumps_.end());
        radius_ = 0.0;
        for (auto& j : jumps_) radius_ = std::max(radius_, j.first);
    }
    void set_completeness_radius(double r) { radius_ = r; }

    int N(double t) const {
        check(t);
        int n = 0;
        for (auto& j : jumps_) {
            if (j.first > t) break;
            n += j.second;
        }
        return n;
    }
    double Ntilde(double a) const {
        check(a);
        double s = 0.0;
        for (auto& j : jumps_) {
            if (j.first > a) break;
            s += 2.0 * j.second * (1.0 / j.first - 1.0 / a);
        }
        return s;
    }

  private:
    void check(double t) const {
        if (t > radius_ + 1e-12)
            throw std::out_of_range("hypres: counting query beyond the built radius");
    }
    std::vector<std::pair<double, int>> jumps_;
    double radius_ = 0.0;
};

} // namespace hypres

#endif
