#pragma once

// Quadruple zero hypotheses off the critical line, the closed-form arctan
// phase term in both printed variants, and denominator scans. The direct
// four-factor product is the audit reference; variant agreement is recorded,
// never assumed.

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include <critline/errors.hpp>
#include <critline/eval.hpp>

namespace critline {

// A hypothetical zero quadruple {sigma+i tau, 1-sigma-i tau, sigma-i tau,
// 1-sigma+i tau}. Constraint: 0 < sigma < 1/2, tau > 0.
struct QuadrupleHypothesis {
    double sigma;
    double tau;
    double alpha; // (1/2 - sigma)^2, fixed at construction

    QuadrupleHypothesis(double sigma_, double tau_)
        : sigma(sigma_), tau(tau_), alpha((0.5 - sigma_) * (0.5 - sigma_)) {
        if (!(sigma > 0.0 && sigma < 0.5)) {
            throw precondition_error("quadruple hypothesis requires 0 < sigma < 1/2");
        }
        if (!(tau > 0.0)) {
            throw precondition_error("quadruple hypothesis requires tau > 0");
        }
    }
};

// Denominator variant of the closed-form phase term. The printed formula
// carries a cubic t-power that is dimensionally odd next to the degree-4
// neighbours; both readings are always computed.
enum class PhaseVariant { as_printed, t_squared };

inline const char* variant_label(PhaseVariant v) {
    return v == PhaseVariant::as_printed ? "as-printed" : "t-squared";
}

// prod_{i=1..4} (1 - (1/2+it)/rho_i) by direct complex multiplication.
inline cplx quadruple_factor_product(double t, const QuadrupleHypothesis& h) {
    const cplx s{0.5, t};
    const std::array<cplx, 4> rho{cplx{h.sigma, h.tau}, cplx{1.0 - h.sigma, -h.tau},
                                  cplx{h.sigma, -h.tau}, cplx{1.0 - h.sigma, h.tau}};
    cplx prod{1.0, 0.0};
    for (const cplx& r : rho) prod *= cplx{1.0, 0.0} - s / r;
    return prod;
}

namespace detail {

inline double phase_term_denominator(double t, double alpha, double tau, PhaseVariant v) {
    double tt = t * t + tau * tau;
    double tk = (v == PhaseVariant::as_printed) ? 3.0 * t * t * t : 3.0 * t * t;
    return tt * tt + alpha * (alpha - tk - tau * tau);
}

} // namespace detail

// Closed-form arctan term: atan( 2t(1-2s)(t^2-tau^2-a) / ((t^2+tau^2)^2 +
// a(a - 3t^k - tau^2)) ), k = 3 as printed, k = 2 for the substituted
// variant. Single-argument principal arctangent by design; deviation from
// the product argument is the audited quantity.
inline double phase_term(double t, const QuadrupleHypothesis& h, PhaseVariant v) {
    double num = 2.0 * t * (1.0 - 2.0 * h.sigma) * (t * t - h.tau * h.tau - h.alpha);
    double den = detail::phase_term_denominator(t, h.alpha, h.tau, v);
    double tt = t * t + h.tau * h.tau;
    if (std::abs(den) < 1e-14 * tt * tt) {
        throw denominator_zero_error("phase term denominator vanishes");
    }
    return std::atan(num / den);
}

inline double phase_sum(double t, const std::vector<QuadrupleHypothesis>& hs, PhaseVariant v) {
    double sum = 0.0;
    for (const auto& h : hs) sum += phase_term(t, h, v);
    return sum;
}

// Audit companion: argument of the product of all quadruple products,
// reduced to (-pi, pi]. Arguments are accumulated per factor so the
// magnitude never leaves double range.
inline double direct_phase_sum(double t, const std::vector<QuadrupleHypothesis>& hs) {
    double sum = 0.0;
    for (const auto& h : hs) sum += std::arg(quadruple_factor_product(t, h));
    double r = std::remainder(sum, 2.0 * pi);
    if (r <= -pi) r += 2.0 * pi;
    return r;
}

// min over k in {-2..2} of |a - b - k pi|; the phase identity is stated
// modulo integer multiples of pi.
inline double residual_mod_pi(double a, double b) {
    double best = std::numeric_limits<double>::infinity();
    for (int k = -2; k <= 2; ++k) {
        best = std::min(best, std::abs(a - b - k * pi));
    }
    return best;
}

// D(sigma,tau) = sigma^4 + sigma^2(1-2 sigma+2 tau^2) + tau^2(1-2 sigma) + tau^4,
// evaluated exactly as printed.
inline double d_denominator(double sigma, double tau) {
    double s2 = sigma * sigma;
    double u2 = tau * tau;
    return s2 * s2 + s2 * (1.0 - 2.0 * sigma + 2.0 * u2) + u2 * (1.0 - 2.0 * sigma) + u2 * u2;
}

// z(sigma,tau,t): the arctan denominator with alpha tied to sigma.
inline double z_denominator(double sigma, double tau, double t,
                            PhaseVariant v = PhaseVariant::as_printed) {
    double alpha = (0.5 - sigma) * (0.5 - sigma);
    return detail::phase_term_denominator(t, alpha, tau, v);
}

// Hand-differentiated partials (dD/dsigma, dD/dtau).
inline std::array<double, 2> d_gradient(double sigma, double tau) {
    double s2 = sigma * sigma;
    double u2 = tau * tau;
    double ds = 4.0 * sigma * s2 + 2.0 * sigma - 6.0 * s2 + 4.0 * sigma * u2 - 2.0 * u2;
    double du = 2.0 * tau * (2.0 * s2 - 2.0 * sigma + 1.0 + 2.0 * u2);
    return {ds, du};
}

// Hand-differentiated partials (dz/dsigma, dz/dtau, dz/dt).
inline std::array<double, 3> z_gradient(double sigma, double tau, double t,
                                        PhaseVariant v = PhaseVariant::as_printed) {
    double alpha = (0.5 - sigma) * (0.5 - sigma);
    double tt = t * t + tau * tau;
    bool cubic = (v == PhaseVariant::as_printed);
    double tk = cubic ? 3.0 * t * t * t : 3.0 * t * t;
    double dtk_dt = cubic ? 9.0 * t * t : 6.0 * t;
    double ds = (2.0 * alpha - tk - tau * tau) * (2.0 * sigma - 1.0);
    double du = 4.0 * tau * tt - 2.0 * alpha * tau;
    double dt = 4.0 * t * tt - alpha * dtk_dt;
    return {ds, du, dt};
}

struct GridSpec {
    double sigma_lo = 0.005, sigma_hi = 0.995, sigma_step = 0.01;
    double tau_lo = 0.1, tau_hi = 50.0, tau_step = 0.1;
    double t_lo = 0.1, t_hi = 50.0, t_step = 0.1; // ignored for D
};

enum class ScanTarget { d_poly, z_poly };

// Scan evidence only: grid minima of |grad f| (central differences, step
// 1e-5) and of |f|, with locations. t slot is NaN for the D target.
struct CriticalPointReport {
    ScanTarget target = ScanTarget::d_poly;
    double min_grad_norm = 0.0;
    std::array<double, 3> grad_argmin{0.0, 0.0, 0.0};
    double min_abs_value = 0.0;
    std::array<double, 3> value_argmin{0.0, 0.0, 0.0};
    std::size_t cells = 0;
};

namespace detail {

inline std::size_t grid_count(double lo, double hi, double step) {
    if (!(lo > 0.0) || !(hi > lo) || !(step > 0.0)) {
        throw precondition_error("grid bounds must satisfy 0 < lo < hi, step > 0");
    }
    return static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
}

} // namespace detail

inline CriticalPointReport critical_point_scan(ScanTarget target, const GridSpec& grid = {},
                                               PhaseVariant v = PhaseVariant::as_printed) {
    constexpr double fd = 1e-5;
    const double nan = std::numeric_limits<double>::quiet_NaN();
    CriticalPointReport rep;
    rep.target = target;
    rep.min_grad_norm = std::numeric_limits<double>::infinity();
    rep.min_abs_value = std::numeric_limits<double>::infinity();

    std::size_t ns = detail::grid_count(grid.sigma_lo, grid.sigma_hi, grid.sigma_step);
    std::size_t nu = detail::grid_count(grid.tau_lo, grid.tau_hi, grid.tau_step);

    if (target == ScanTarget::d_poly) {
        for (std::size_t i = 0; i < ns; ++i) {
            double sg = grid.sigma_lo + static_cast<double>(i) * grid.sigma_step;
            for (std::size_t j = 0; j < nu; ++j) {
                double ta = grid.tau_lo + static_cast<double>(j) * grid.tau_step;
                double gs = (d_denominator(sg + fd, ta) - d_denominator(sg - fd, ta)) / (2 * fd);
                double gu = (d_denominator(sg, ta + fd) - d_denominator(sg, ta - fd)) / (2 * fd);
                double gn = std::hypot(gs, gu);
                double av = std::abs(d_denominator(sg, ta));
                ++rep.cells;
                if (gn < rep.min_grad_norm) {
                    rep.min_grad_norm = gn;
                    rep.grad_argmin = {sg, ta, nan};
                }
                if (av < rep.min_abs_value) {
                    rep.min_abs_value = av;
                    rep.value_argmin = {sg, ta, nan};
                }
            }
        }
        return rep;
    }

    std::size_t nt = detail::grid_count(grid.t_lo, grid.t_hi, grid.t_step);
    for (std::size_t i = 0; i < ns; ++i) {
        double sg = grid.sigma_lo + static_cast<double>(i) * grid.sigma_step;
        for (std::size_t j = 0; j < nu; ++j) {
            double ta = grid.tau_lo + static_cast<double>(j) * grid.tau_step;
            for (std::size_t m = 0; m < nt; ++m) {
                double t = grid.t_lo + static_cast<double>(m) * grid.t_step;
                double gs = (z_denominator(sg + fd, ta, t, v) - z_denominator(sg - fd, ta, t, v)) / (2 * fd);
                double gu = (z_denominator(sg, ta + fd, t, v) - z_denominator(sg, ta - fd, t, v)) / (2 * fd);
                double gt = (z_denominator(sg, ta, t + fd, v) - z_denominator(sg, ta, t - fd, v)) / (2 * fd);
                double gn = std::sqrt(gs * gs + gu * gu + gt * gt);
                double av = std::abs(z_denominator(sg, ta, t, v));
                ++rep.cells;
                if (gn < rep.min_grad_norm) {
                    rep.min_grad_norm = gn;
                    rep.grad_argmin = {sg, ta, t};
                }
                if (av < rep.min_abs_value) {
                    rep.min_abs_value = av;
                    rep.value_argmin = {sg, ta, t};
                }
            }
        }
    }
    return rep;
}

// One ledger record per (t, hypothesis, variant). Agreement with direct_arg
// is a recorded finding; nothing here asserts which variant wins.
struct PhaseLedgerRow {
    double t = 0.0;
    double sigma = 0.0;
    double tau = 0.0;
    PhaseVariant variant = PhaseVariant::as_printed;
    double term = 0.0;
    double direct_arg = 0.0;
    double residual = 0.0;
};

inline std::vector<PhaseLedgerRow> build_phase_ledger(const std::vector<double>& ts,
                                                      const std::vector<QuadrupleHypothesis>& hs) {
    std::vector<PhaseLedgerRow> rows;
    rows.reserve(ts.size() * hs.size() * 2);
    for (double t : ts) {
        for (const auto& h : hs) {
            double direct = std::arg(quadruple_factor_product(t, h));
            for (PhaseVariant v : {PhaseVariant::as_printed, PhaseVariant::t_squared}) {
                PhaseLedgerRow row;
                row.t = t;
                row.sigma = h.sigma;
                row.tau = h.tau;
                row.variant = v;
                row.term = phase_term(t, h, v);
                row.direct_arg = direct;
                row.residual = residual_mod_pi(row.term, direct);
                rows.push_back(row);
            }
        }
    }
    return rows;
}

} // namespace critline
