#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "eval.hpp"
#include "gamma.hpp"
#include "highprec.hpp"

namespace critline {

// Positive definite integer binary quadratic form a n^2 + b n m + c m^2.
struct QuadraticForm {
    long long a = 1;
    long long b = 0;
    long long c = 1;
    long long delta = 4; // 4ac - b^2

    QuadraticForm(long long a_, long long b_, long long c_) : a(a_), b(b_), c(c_) {
        if (a <= 0 || c <= 0)
            throw precondition_error("QuadraticForm: leading coefficients must be positive");
        delta = 4 * a * c - b * b;
        if (delta <= 0)
            throw precondition_error("QuadraticForm: discriminant 4ac - b^2 must be positive");
    }

    double value(long long n, long long m) const {
        return static_cast<double>(a) * n * n + static_cast<double>(b) * n * m +
               static_cast<double>(c) * m * m;
    }

    // Adjoint form from the theta inversion; represents the same values via
    // (n, m) -> (m, -n).
    QuadraticForm adjoint() const { return QuadraticForm(c, -b, a); }

    // Smallest eigenvalue of the Gram matrix; Q(v) >= min_eigenvalue * |v|^2.
    double min_eigenvalue() const {
        double tr = static_cast<double>(a + c);
        double gap = std::hypot(static_cast<double>(a - c), static_cast<double>(b));
        return 0.5 * (tr - gap);
    }
};

struct RectangleRegion {
    double sigma_lo, sigma_hi, t_lo, t_hi;

    RectangleRegion(double slo, double shi, double tlo, double thi)
        : sigma_lo(slo), sigma_hi(shi), t_lo(tlo), t_hi(thi) {
        if (!(sigma_lo < sigma_hi) || !(t_lo < t_hi))
            throw precondition_error("RectangleRegion: bounds must satisfy lo < hi");
    }

    double width() const { return sigma_hi - sigma_lo; }
    double height() const { return t_hi - t_lo; }
    bool contains(const cplx& s, double slack = 0.0) const {
        return s.real() >= sigma_lo - slack && s.real() <= sigma_hi + slack &&
               s.imag() >= t_lo - slack && s.imag() <= t_hi + slack;
    }
};

namespace detail {

// Upper incomplete gamma for complex s and real x > 0, split into three
// regimes: Lentz continued fraction where x dominates |s|, the lower-series
// complement elsewhere, and direct quadrature of the defining integral when
// s sits near a pole of Gamma(s) (where the series split cancels badly).

inline cplx upper_gamma_cf(const cplx& s, double x) {
    cplx b = x + 1.0 - s;
    cplx c(1e300, 0.0);
    cplx d = 1.0 / b;
    cplx h = d;
    for (int i = 1; i <= 500; ++i) {
        cplx an = -static_cast<double>(i) * (static_cast<double>(i) - s);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < 1e-290) d = cplx(1e-290, 0.0);
        c = b + an / c;
        if (std::abs(c) < 1e-290) c = cplx(1e-290, 0.0);
        d = 1.0 / d;
        cplx del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < 3e-16)
            return std::exp(-x + s * std::log(x)) * h;
    }
    throw evaluation_error("upper_gamma: continued fraction failed to converge");
}

inline cplx upper_gamma_series(const cplx& s, double x) {
    cplx term = 1.0 / s;
    cplx sum = term;
    for (int k = 1; k <= 4000; ++k) {
        term *= x / (s + static_cast<double>(k));
        sum += term;
        if (std::abs(term) < 1e-18 * std::abs(sum)) break;
    }
    return complex_gamma(s).value - std::exp(s * std::log(x) - x) * sum;
}

inline cplx upper_gamma_quad(const cplx& s, double x) {
    static const double gl_x[8] = {0.0950125098376374, 0.2816035507792589,
                                   0.4580167776572274, 0.6178762444026438,
                                   0.7554044083550030, 0.8656312023878318,
                                   0.9445750230732326, 0.9894009349916499};
    static const double gl_w[8] = {0.1894506104550685, 0.1826034150449236,
                                   0.1691565193950025, 0.1495959888165767,
                                   0.1246289712555339, 0.0951585116824928,
                                   0.0622535239386479, 0.0271524594117541};
    // Panel widths grow geometrically away from the endpoint so the
    // integrand's singularity at u = 0 stays outside each panel's
    // convergence ellipse; e^{-u} decay truncates the upper limit.
    cplx acc(0.0, 0.0);
    double lo = x;
    const double hi_end = x + 75.0;
    while (lo < hi_end) {
        double hi = std::min(lo + std::min(lo, 5.0), hi_end);
        double mid = 0.5 * (lo + hi);
        double half = 0.5 * (hi - lo);
        for (int k = 0; k < 8; ++k) {
            double u1 = mid - half * gl_x[k];
            double u2 = mid + half * gl_x[k];
            acc += gl_w[k] * half *
                   (std::exp((s - 1.0) * std::log(u1) - u1) +
                    std::exp((s - 1.0) * std::log(u2) - u2));
        }
        lo = hi;
    }
    return acc;
}

inline cplx upper_gamma(const cplx& s, double x) {
    if (!(x > 0.0))
        throw precondition_error("upper_gamma: requires x > 0");
    if (x >= std::abs(s) + 4.0) return upper_gamma_cf(s, x);
    double k = std::round(s.real());
    if (k <= 0.0 && std::abs(s - cplx(k, 0.0)) <= 0.25) return upper_gamma_quad(s, x);
    return upper_gamma_series(s, x);
}

// 1/Gamma(s), entire: reflection keeps the Lanczos kernel in its valid
// half-plane, so neither gamma poles nor division by zero appear.
inline cplx recip_gamma(const cplx& s) {
    if (s.real() >= 0.5) return 1.0 / gamma_right_half(s);
    return std::sin(pi * s) * gamma_right_half(1.0 - s) / pi;
}

// Quad-precision twins of the three incomplete-gamma regimes. Same branch
// geometry as the double versions; only the convergence thresholds and the
// quadrature order change with the tighter target.

inline hp::qcplx upper_gamma_cf_hp(const hp::qcplx& s, hp::qreal x) {
    hp::qcplx b = hp::qcplx(x + 1.0) - s;
    hp::qcplx c(hp::qreal(1e300));
    hp::qcplx d = hp::qcplx(hp::qreal(1.0)) / b;
    hp::qcplx h = d;
    for (int i = 1; i <= 3000; ++i) {
        hp::qcplx an = -hp::qreal(i) * (hp::qcplx(hp::qreal(i)) - s);
        b += hp::qcplx(hp::qreal(2.0));
        d = an * d + b;
        if (hp::abs(d) < hp::qreal(1e-320)) d = hp::qcplx(hp::qreal(1e-320));
        c = b + an / c;
        if (hp::abs(c) < hp::qreal(1e-320)) c = hp::qcplx(hp::qreal(1e-320));
        d = hp::qcplx(hp::qreal(1.0)) / d;
        hp::qcplx del = d * c;
        h *= del;
        if (hp::abs(del - hp::qcplx(hp::qreal(1.0))) < hp::qreal(3e-34))
            return hp::exp(hp::qcplx(-x) + s * hp::qcplx(logq(x))) * h;
    }
    throw evaluation_error("upper_gamma: continued fraction failed to converge");
}

inline hp::qcplx upper_gamma_series_hp(const hp::qcplx& s, hp::qreal x) {
    hp::qcplx term = hp::qcplx(hp::qreal(1.0)) / s;
    hp::qcplx sum = term;
    for (int k = 1; k <= 30000; ++k) {
        term *= hp::qcplx(x) / (s + hp::qcplx(hp::qreal(k)));
        sum += term;
        if (hp::abs(term) < hp::qreal(1e-37) * hp::abs(sum)) break;
    }
    return hp::gamma(s) - hp::exp(s * hp::qcplx(logq(x)) - hp::qcplx(x)) * sum;
}

inline hp::qcplx upper_gamma_quad_hp(const hp::qcplx& s, hp::qreal x) {
    const auto& gl = hp::gl32();
    hp::qcplx acc;
    hp::qcplx sm1 = s - hp::qcplx(hp::qreal(1.0));
    hp::qreal lo = x;
    const hp::qreal hi_end = x + 120.0;
    while (lo < hi_end) {
        hp::qreal w = lo;
        if (w > 2.5) w = 2.5;
        hp::qreal hi = lo + w;
        if (hi > hi_end) hi = hi_end;
        hp::qreal mid = 0.5 * (lo + hi);
        hp::qreal half = 0.5 * (hi - lo);
        for (int k = 0; k < 32; ++k) {
            hp::qreal u = mid + half * gl.x[k];
            acc += (gl.w[k] * half) * hp::exp(sm1 * hp::qcplx(logq(u)) - hp::qcplx(u));
        }
        lo = hi;
    }
    return acc;
}

inline hp::qcplx upper_gamma_hp(const hp::qcplx& s, hp::qreal x) {
    if (!(x > 0.0))
        throw precondition_error("upper_gamma: requires x > 0");
    if (x >= hp::abs(s) + 4.0) return upper_gamma_cf_hp(s, x);
    double k = std::round(static_cast<double>(s.re));
    if (k <= 0.0 && hp::abs(s - hp::qcplx(hp::qreal(k))) <= 0.25) return upper_gamma_quad_hp(s, x);
    return upper_gamma_series_hp(s, x);
}

struct ThetaSplitHP {
    hp::qcplx lambda;
    double abs_err = 0.0;
};

// Quad-precision theta-split evaluation of the completed form. Structure
// mirrors lambda_epstein; the noise and shell-stop constants scale with the
// 113-bit significand instead of the 53-bit one.
inline ThetaSplitHP lambda_theta_hp(const cplx& s_in, const QuadraticForm& q) {
    const hp::qreal tstar = 2.0 * hp::qpi / sqrtq(hp::qreal(q.delta));
    const QuadraticForm dual = q.adjoint();
    const hp::qcplx s(s_in);
    const hp::qcplx one_minus_s = hp::qcplx(hp::qreal(1.0)) - s;

    hp::qcplx sum;
    hp::qreal mag = 0.0;
    hp::qreal noise = 0.0;
    hp::qreal last_shell = 0.0;
    int quiet = 0;

    for (int r = 1; r <= 96; ++r) {
        hp::qreal shell_mag = 0.0;
        auto visit = [&](long long n, long long m) {
            hp::qreal x1 = tstar * hp::qreal(q.value(n, m));
            hp::qreal x2 = tstar * hp::qreal(dual.value(n, m));
            hp::qcplx t1 = hp::exp(-(s * hp::qcplx(logq(x1)))) * upper_gamma_hp(s, x1);
            hp::qcplx t2 = hp::exp((s - hp::qcplx(hp::qreal(1.0))) * hp::qcplx(logq(x2))) *
                           upper_gamma_hp(one_minus_s, x2);
            sum += t1 + t2;
            shell_mag += hp::abs(t1) + hp::abs(t2);
        };
        for (long long n = -r; n <= r; ++n) {
            visit(n, -r);
            visit(n, r);
        }
        for (long long m = -r + 1; m <= r - 1; ++m) {
            visit(-r, m);
            visit(r, m);
        }
        mag += shell_mag;
        last_shell = shell_mag;
        if (r >= 3 && shell_mag <= hp::qreal(1e-35) * (1.0 + mag)) {
            if (++quiet >= 2) break;
        } else {
            quiet = 0;
        }
    }
    noise = hp::qreal(2e-34) * mag;

    hp::qcplx pref = s * (s - hp::qcplx(hp::qreal(1.0)));
    hp::qcplx v = hp::qcplx(hp::qreal(1.0)) + pref * sum;
    double err = static_cast<double>(hp::abs(pref) * (noise + 4.0 * last_shell) +
                                     hp::qreal(2e-34) * (1.0 + hp::abs(v)));
    return {v, err};
}

// |Z(s)| recovered from the quad-precision completed form; the winding
// refinement certifies zeros against this value, whose floor sits far below
// 1e-9 at every height the search can reach.
inline double z_magnitude_hp(const cplx& s_in, const QuadraticForm& q) {
    ThetaSplitHP lam = lambda_theta_hp(s_in, q);
    hp::qcplx s(s_in);
    hp::qreal rootd = sqrtq(hp::qreal(q.delta));
    hp::qcplx zq = lam.lambda * hp::exp(s * hp::qcplx(logq(2.0 * hp::qpi / rootd))) *
                   hp::recip_gamma(s) / (s * (s - hp::qcplx(hp::qreal(1.0))));
    return static_cast<double>(hp::abs(zq));
}

} // namespace detail

// Completed form evaluated through the quad-precision kernel. Same contract
// as lambda_epstein; rounding noise scales with the 113-bit significand, so
// the value stays resolvable at heights where the double path drowns.
inline EvalResult lambda_epstein_hp(const cplx& s, const QuadraticForm& q) {
    detail::ThetaSplitHP lam = detail::lambda_theta_hp(s, q);
    return {hp::to_double(lam.lambda), lam.abs_err};
}

// Completed form s(s-1) * (sqrt(delta)/(2 pi))^s * Gamma(s) * Z(s), evaluated
// everywhere by the two-sided incomplete-gamma split of the lattice theta
// function. Entire; invariant under s -> 1-s.
inline EvalResult lambda_epstein(const cplx& s, const QuadraticForm& q) {
    const double tstar = 2.0 * pi / std::sqrt(static_cast<double>(q.delta));
    const QuadraticForm dual = q.adjoint();
    const double sig = s.real();
    const cplx one_minus_s = 1.0 - s;

    // The lower-series regime computes Gamma(a) - x^a e^{-x} Sigma, so its
    // rounding scales with |Gamma(a)| rather than with the (often far
    // smaller) result; the noise tally needs that scale whenever the series
    // branch can fire. Lazy: Gamma is finite here because the near-pole
    // regime takes over within distance 1/4 of each pole.
    const double as1 = std::abs(s);
    const double as2 = std::abs(one_minus_s);
    double k1 = std::round(s.real());
    double k2 = std::round(one_minus_s.real());
    const bool ser1_possible = !(k1 <= 0.0 && std::abs(s - cplx(k1, 0.0)) <= 0.25);
    const bool ser2_possible = !(k2 <= 0.0 && std::abs(one_minus_s - cplx(k2, 0.0)) <= 0.25);
    double g1 = -1.0, g2 = -1.0;

    cplx sum(0.0, 0.0);
    double mag = 0.0;
    double noise = 0.0;
    double last_shell = 0.0;
    int quiet = 0;

    for (int r = 1; r <= 64; ++r) {
        double shell_mag = 0.0;
        auto visit = [&](long long n, long long m) {
            double x1 = tstar * q.value(n, m);
            double x2 = tstar * dual.value(n, m);
            cplx t1 = std::exp(-s * std::log(x1)) * detail::upper_gamma(s, x1);
            cplx t2 =
                std::exp((s - 1.0) * std::log(x2)) * detail::upper_gamma(one_minus_s, x2);
            sum += t1 + t2;
            double m1 = std::abs(t1);
            double m2 = std::abs(t2);
            shell_mag += m1 + m2;
            noise += 3e-16 * (m1 + m2 +
                              std::exp(-x1) * (std::pow(x1, -sig) + std::pow(x1, sig - 1.0)) +
                              std::exp(-x2) * (std::pow(x2, -sig) + std::pow(x2, sig - 1.0)));
            if (ser1_possible && x1 < as1 + 4.0) {
                if (g1 < 0.0) g1 = std::abs(complex_gamma(s).value);
                noise += 1.2e-15 * g1 * std::pow(x1, -sig);
            }
            if (ser2_possible && x2 < as2 + 4.0) {
                if (g2 < 0.0) g2 = std::abs(complex_gamma(one_minus_s).value);
                noise += 1.2e-15 * g2 * std::pow(x2, sig - 1.0);
            }
        };
        for (long long n = -r; n <= r; ++n) {
            visit(n, -r);
            visit(n, r);
        }
        for (long long m = -r + 1; m <= r - 1; ++m) {
            visit(-r, m);
            visit(r, m);
        }
        mag += shell_mag;
        last_shell = shell_mag;
        if (r >= 3 && shell_mag <= 1e-17 * (1.0 + mag)) {
            if (++quiet >= 2) break;
        } else {
            quiet = 0;
        }
    }

    cplx pref = s * (s - 1.0);
    cplx v = 1.0 + pref * sum;
    // shells decay like exp(-t* lambda_min r^2); one extra shell dominates
    // the truncated tail by a wide margin
    double err = std::abs(pref) * (noise + 4.0 * last_shell) + 2e-16 * (1.0 + std::abs(v));
    return {v, err};
}

// Z(s) recovered from the completed form. Simple pole at s = 1; s = 0 is
// outside this route's contract (0/0 against the prefactor).
inline EvalResult epstein_continued(const cplx& s, const QuadraticForm& q) {
    if (std::abs(s - 1.0) < 1e-10)
        throw pole_error("epstein_continued: simple pole at s = 1");
    if (std::abs(s) < 1e-10)
        throw precondition_error("epstein_continued: s = 0 not covered by the prefactor split");
    EvalResult lam = lambda_epstein(s, q);
    const double rootd = std::sqrt(static_cast<double>(q.delta));
    cplx pref =
        std::exp(s * std::log(2.0 * pi / rootd)) * detail::recip_gamma(s) / (s * (s - 1.0));
    cplx v = lam.value * pref;
    double err = (lam.abs_err + 1e-13 * std::abs(lam.value)) * std::abs(pref);
    return {v, err + 1e-15 * std::abs(v)};
}

// Truncated lattice sum over the square max(|n|,|m|) <= radius, with the
// annulus comparison tail folded into abs_err. Convergence gate Re(s) > 1.1.
inline EvalResult epstein_direct(const cplx& s, const QuadraticForm& q, long long radius) {
    if (radius < 1)
        throw precondition_error("epstein_direct: radius must be >= 1");
    if (!(s.real() > 1.1))
        throw convergence_region_error("epstein_direct: requires Re(s) > 1.1");

    cplx sum(0.0, 0.0);
    cplx comp(0.0, 0.0);
    double mag = 0.0;
    for (long long r = 1; r <= radius; ++r) {
        auto visit = [&](long long n, long long m) {
            // compensated: late terms fall below one ulp of the running sum
            cplx y = std::exp(-s * std::log(q.value(n, m))) - comp;
            cplx t = sum + y;
            comp = (t - sum) - y;
            sum = t;
            mag += std::abs(y);
        };
        for (long long n = -r; n <= r; ++n) {
            visit(n, -r);
            visit(n, r);
        }
        for (long long m = -r + 1; m <= r - 1; ++m) {
            visit(-r, m);
            visit(r, m);
        }
    }
    double sig = s.real();
    double lam = q.min_eigenvalue();
    double tail = 8.0 * std::pow(lam, -sig) *
                  std::pow(static_cast<double>(radius), 2.0 - 2.0 * sig) / (2.0 * sig - 2.0);
    return {sum, tail + 2e-16 * mag};
}

// Count of reduced positive definite forms of discriminant -delta:
// |b| <= a <= c with b >= 0 whenever |b| = a or a = c.
inline long long class_number(long long delta) {
    if (delta <= 0)
        throw precondition_error("class_number: delta must be positive");
    long long rem = delta % 4;
    if (rem != 0 && rem != 3)
        throw precondition_error("class_number: -delta must be 0 or 1 mod 4");
    long long count = 0;
    for (long long bb = (rem == 0) ? 0 : 1; 3 * bb * bb <= delta; bb += 2) {
        long long ac = (delta + bb * bb) / 4;
        for (long long a = std::max<long long>(1, bb); a * a <= ac; ++a) {
            if (ac % a != 0) continue;
            long long c = ac / a;
            ++count;                                  // b = +bb
            if (bb != 0 && bb != a && a != c) ++count; // b = -bb also reduced
        }
    }
    return count;
}

struct RefinedZero {
    cplx location;
    double z_magnitude = 0.0; // |Z| at the refined point
};

struct WindingReport {
    long long winding = 0;
    std::vector<RefinedZero> zeros;
};

namespace detail {

struct WindingOutcome {
    long long count = 0;
    bool too_coarse = false;
    bool boundary_hit = false;
};

template <class F>
inline double arg_delta(F& f, const cplx& a, const cplx& b, const cplx& fa, const cplx& fb,
                        int depth, int max_depth, bool& too_coarse, bool& boundary_hit) {
    double d = std::arg(fb / fa);
    if (std::abs(d) < 0.5 * pi) return d;
    if (depth >= max_depth) {
        too_coarse = true;
        return d;
    }
    cplx m = 0.5 * (a + b);
    EvalResult fm = f(m);
    if (std::abs(fm.value) < 4.0 * fm.abs_err + 1e-290) {
        boundary_hit = true;
        return d;
    }
    return arg_delta(f, a, m, fa, fm.value, depth + 1, max_depth, too_coarse, boundary_hit) +
           arg_delta(f, m, b, fm.value, fb, depth + 1, max_depth, too_coarse, boundary_hit);
}

template <class F>
inline WindingOutcome boundary_winding(F& f, const RectangleRegion& r, double step,
                                       int max_rounds) {
    WindingOutcome out;
    cplx corners[5] = {cplx(r.sigma_lo, r.t_lo), cplx(r.sigma_hi, r.t_lo),
                       cplx(r.sigma_hi, r.t_hi), cplx(r.sigma_lo, r.t_hi),
                       cplx(r.sigma_lo, r.t_lo)};
    std::vector<cplx> path;
    for (int e = 0; e < 4; ++e) {
        cplx d = corners[e + 1] - corners[e];
        int n = std::max(2, static_cast<int>(std::ceil(std::abs(d) / step)));
        for (int k = 0; k < n; ++k)
            path.push_back(corners[e] + d * (static_cast<double>(k) / n));
    }
    path.push_back(corners[0]);

    std::vector<cplx> vals(path.size());
    for (std::size_t i = 0; i < path.size(); ++i) {
        if (std::abs(path[i]) < 1e-6 || std::abs(path[i] - 1.0) < 1e-6) {
            out.boundary_hit = true;
            return out;
        }
        EvalResult fv = f(path[i]);
        if (std::abs(fv.value) < 4.0 * fv.abs_err + 1e-290) {
            out.boundary_hit = true;
            return out;
        }
        vals[i] = fv.value;
    }

    double total = 0.0;
    for (std::size_t i = 0; i + 1 < path.size(); ++i) {
        total += arg_delta(f, path[i], path[i + 1], vals[i], vals[i + 1], 0, max_rounds,
                           out.too_coarse, out.boundary_hit);
        if (out.boundary_hit) return out;
    }
    double turns = total / (2.0 * pi);
    out.count = std::llround(turns);
    if (std::abs(turns - static_cast<double>(out.count)) > 0.2) out.too_coarse = true;
    return out;
}

template <class F>
inline cplx newton_refine(F& f, cplx z) {
    for (int it = 0; it < 80; ++it) {
        EvalResult fz = f(z);
        if (std::abs(fz.value) <= 2.0 * fz.abs_err) break;
        double h = 1e-6 * std::max(1.0, std::abs(z));
        cplx fp = (f(z + cplx(h, 0.0)).value - f(z - cplx(h, 0.0)).value) / (2.0 * h);
        if (std::abs(fp) < 1e-280) break;
        cplx step = fz.value / fp;
        double damp = 1.0;
        cplx znew = z - step;
        while (damp > 1.0 / 64.0 && std::abs(f(znew).value) > std::abs(fz.value)) {
            damp *= 0.5;
            znew = z - damp * step;
        }
        if (std::abs(znew - z) < 1e-14 * std::max(1.0, std::abs(z))) {
            z = znew;
            break;
        }
        z = znew;
    }
    return z;
}

} // namespace detail

// Argument-principle zero count and refinement for Z inside a rectangle.
// Winds the entire completed form (same zeros, no pole at s = 1), shrinking
// the boundary deterministically when a sample lands on a zero or on s = 0, 1.
// Boundary samples and refinement run through the quad-precision kernel:
// the completed form shrinks like exp(-pi t / 2) while theta-sum rounding
// stays flat, and 53-bit noise already swamps |Z| ~ 1e-9 near t = 10.
inline WindingReport zero_search_rectangle(const QuadraticForm& q, const RectangleRegion& region,
                                           double grid_step) {
    if (!(grid_step > 0.0))
        throw precondition_error("zero_search_rectangle: grid_step must be positive");

    std::map<std::pair<double, double>, EvalResult> memo;
    auto f = [&](const cplx& z) -> EvalResult {
        auto key = std::make_pair(z.real(), z.imag());
        auto it = memo.find(key);
        if (it != memo.end()) return it->second;
        EvalResult r = lambda_epstein_hp(z, q);
        memo.emplace(key, r);
        return r;
    };

    RectangleRegion outer = region;
    detail::WindingOutcome top;
    bool settled = false;
    for (int attempt = 0; attempt < 4 && !settled; ++attempt) {
        top = detail::boundary_winding(f, outer, grid_step, 2);
        if (top.boundary_hit) {
            // asymmetric shrink: equal insets would keep a problem point at
            // the region's center stuck under every retry
            double d = 0.23 * grid_step * (attempt + 1);
            if (2.2 * d >= outer.width() || 2.2 * d >= outer.height())
                throw precondition_error("zero_search_rectangle: region collapsed while "
                                         "jittering away from boundary zeros");
            outer = RectangleRegion(outer.sigma_lo + d, outer.sigma_hi - 0.63 * d,
                                    outer.t_lo + 0.87 * d, outer.t_hi - 1.19 * d);
            continue;
        }
        if (top.too_coarse)
            throw boundary_too_coarse_error(
                "zero_search_rectangle: phase step >= pi/2 after two refinement rounds");
        settled = true;
    }
    if (!settled)
        throw boundary_too_coarse_error(
            "zero_search_rectangle: boundary kept hitting zero neighborhoods");

    WindingReport report;
    report.winding = top.count;
    if (top.count <= 0) return report;

    static const double fracs[5] = {0.5, 0.543, 0.461, 0.527, 0.479};
    std::vector<std::pair<RectangleRegion, long long>> work;
    work.emplace_back(outer, top.count);
    std::vector<cplx> found;

    while (!work.empty()) {
        auto [cell, w] = work.back();
        work.pop_back();
        if (w <= 0) continue;
        double diag = std::hypot(cell.width(), cell.height());
        if (w == 1 && diag < 0.08) {
            cplx z = detail::newton_refine(
                f, cplx(0.5 * (cell.sigma_lo + cell.sigma_hi), 0.5 * (cell.t_lo + cell.t_hi)));
            found.push_back(z);
            continue;
        }
        if (w > 1 && diag < 1e-5)
            throw evaluation_error("zero_search_rectangle: unresolved zero cluster");
        bool split_ok = false;
        for (double frac : fracs) {
            double sm = cell.sigma_lo + frac * cell.width();
            double tm = cell.t_lo + frac * cell.height();
            RectangleRegion kids[4] = {
                RectangleRegion(cell.sigma_lo, sm, cell.t_lo, tm),
                RectangleRegion(sm, cell.sigma_hi, cell.t_lo, tm),
                RectangleRegion(cell.sigma_lo, sm, tm, cell.t_hi),
                RectangleRegion(sm, cell.sigma_hi, tm, cell.t_hi)};
            long long sum = 0;
            bool bad = false;
            long long kw[4];
            for (int k = 0; k < 4 && !bad; ++k) {
                double st = std::min(grid_step, std::hypot(kids[k].width(), kids[k].height()) / 12.0);
                detail::WindingOutcome o = detail::boundary_winding(f, kids[k], st, 8);
                if (o.boundary_hit || o.too_coarse || o.count < 0) {
                    bad = true;
                    break;
                }
                kw[k] = o.count;
                sum += o.count;
            }
            if (bad || sum != w) continue;
            for (int k = 0; k < 4; ++k)
                if (kw[k] > 0) work.emplace_back(kids[k], kw[k]);
            split_ok = true;
            break;
        }
        if (!split_ok)
            throw evaluation_error("zero_search_rectangle: could not split a cell cleanly");
    }

    std::sort(found.begin(), found.end(), [](const cplx& u, const cplx& v) {
        return u.imag() != v.imag() ? u.imag() < v.imag() : u.real() < v.real();
    });
    for (const cplx& z : found) {
        bool dup = false;
        for (const RefinedZero& kept : report.zeros)
            if (std::abs(kept.location - z) < 1e-7) dup = true;
        if (dup) continue;
        if (!region.contains(z, 1e-9))
            throw evaluation_error("zero_search_rectangle: refined zero escaped the region");
        double zmag = detail::z_magnitude_hp(z, q);
        if (zmag >= 1e-9)
            throw evaluation_error("zero_search_rectangle: refined zero magnitude above 1e-9");
        report.zeros.push_back({z, zmag});
    }
    return report;
}

} // namespace critline
