#pragma once

#include <cmath>
#include <complex>
#include <cstddef>

#include "critline/bernoulli.hpp"
#include "critline/errors.hpp"
#include "critline/eval.hpp"
#include "critline/gamma.hpp"
#include "critline/zerolist.hpp"

namespace critline {

namespace detail {

// real_base^(-s) for real_base > 0 via exp/log; cheaper and better
// conditioned than complex pow.
inline cplx pow_neg(double base, const cplx& s) {
    return std::exp(-s * std::log(base));
}

// Euler-Maclaurin evaluation of the Hurwitz series sum (n+a)^-s, n >= 0,
// a in (0,1].  The correction tail makes the formula an analytic
// continuation valid for Re(s) > 1 - 2*bernoulli_terms; abs_err carries
// the first neglected correction term as the truncation bound.
// subtract_pole removes 1/(s-1) analytically, leaving the function that is
// regular at s = 1; character sums whose coefficients cancel the pole need
// this form to stay finite near 1.
inline EvalResult hurwitz_em(const cplx& s, double a, const EMParams& p,
                             bool subtract_pole = false) {
    if (!(a > 0.0) || a > 1.0)
        throw precondition_error("hurwitz_em: a must lie in (0, 1]");
    if (!subtract_pole && std::abs(s - cplx(1.0, 0.0)) < 1e-12)
        throw pole_error("hurwitz_em: pole at s = 1");
    const int J = p.bernoulli_terms;
    const int N = std::max(p.cutoff_n, 2);
    const auto& B = bernoulli_table(); // B_{2j} = B[j]
    if (J < 1 || J + 1 >= static_cast<int>(B.size()))
        throw precondition_error("hurwitz_em: bernoulli_terms out of range");
    if (s.real() <= 1.0 - 2.0 * J)
        throw precondition_error("hurwitz_em: s too far left for configured tail");

    cplx acc(0.0, 0.0);
    double mag = 0.0;
    for (int n = 0; n < N; ++n) {
        cplx term = pow_neg(n + a, s);
        acc += term;
        mag += std::abs(term);
    }

    const double M = N + a;
    const cplx Ms = pow_neg(M, s); // M^-s
    cplx pole_term;
    if (subtract_pole) {
        // (M^(1-s) - 1)/(s - 1) = -ln(M) * (e^w - 1)/w with w = (1-s) ln M
        const double lm = std::log(M);
        const cplx w = (1.0 - s) * lm;
        cplx phi1;
        if (std::abs(w) < 1e-4)
            phi1 = 1.0 + w * (0.5 + w * (1.0 / 6.0 + w / 24.0));
        else
            phi1 = (std::exp(w) - 1.0) / w;
        pole_term = -lm * phi1;
    } else {
        pole_term = Ms * M / (s - 1.0);
    }
    acc += pole_term;
    acc += 0.5 * Ms;

    // sum_j B_2j/(2j)! * s(s+1)...(s+2j-2) * M^(-s-2j+1)
    cplx rising = s;        // (s)_1
    double fact = 2.0;      // (2j)! at j=1
    cplx mp = Ms / M;       // M^(-s-1)
    const double inv_M2 = 1.0 / (M * M);
    for (int j = 1; j <= J; ++j) {
        acc += (B[j] / fact) * rising * mp;
        rising *= (s + (2.0 * j - 1.0)) * (s + 2.0 * j);
        fact *= (2.0 * j + 1.0) * (2.0 * j + 2.0);
        mp *= inv_M2;
    }
    // first neglected term, inflated by the standard |s+2J+1|/(sigma+2J+1) factor
    double tail = std::abs(B[J + 1] / fact) * std::abs(rising) * std::abs(mp) *
                  (std::abs(s + (2.0 * J + 1.0)) / (s.real() + 2.0 * J + 1.0));
    double rounding = 2e-16 * (2.0 + std::abs(s.imag())) * (mag + std::abs(pole_term));
    return {acc, tail + rounding};
}

// Direct Euler-Maclaurin zeta without the reflection split; used where an
// audit needs the two sides of the functional equation computed
// independently.
inline EvalResult zeta_em_direct(const cplx& s, const EMParams& p) {
    return hurwitz_em(s, 1.0, p);
}

inline cplx reflection_chain(const cplx& s) {
    // 2^s pi^(s-1) sin(pi s/2) Gamma(1-s)
    return std::pow(cplx(2.0, 0.0), s) * std::pow(cplx(pi, 0.0), s - 1.0) *
           std::sin(0.5 * pi * s) * complex_gamma(1.0 - s).value;
}

} // namespace detail

inline EvalResult zeta(const cplx& s, const EMParams& p) {
    if (std::abs(s - cplx(1.0, 0.0)) < 1e-12)
        throw pole_error("zeta: pole at s = 1");
    if (s.real() >= 0.5)
        return detail::hurwitz_em(s, 1.0, p);
    // The reflection chain is 0 * inf at s = 0 although zeta itself is
    // regular there; inside a small ball the direct Euler-Maclaurin tail
    // is already an analytic continuation, so use it.
    if (std::abs(s) < 1e-2)
        return detail::hurwitz_em(s, 1.0, p);
    EMParams pr = p;
    pr.cutoff_n = std::max(p.cutoff_n, default_em_params(1.0 - s).cutoff_n);
    EvalResult z = detail::hurwitz_em(1.0 - s, 1.0, pr);
    cplx chain = detail::reflection_chain(s);
    cplx v = chain * z.value;
    double err = std::abs(chain) * z.abs_err + std::abs(v) * 3e-13 +
                 std::abs(z.value) * 1e-15 * (1.0 + std::abs(s)); // sin/gamma phase noise
    return {v, err};
}

inline EvalResult zeta(const cplx& s) { return zeta(s, default_em_params(s)); }

inline double functional_equation_residual(const cplx& s) {
    if (std::abs(s) < 1e-12 || std::abs(s - cplx(1.0, 0.0)) < 1e-12)
        throw pole_error("functional_equation_residual: s in {0, 1}");
    EvalResult lhs = detail::zeta_em_direct(s, default_em_params(s));
    EvalResult rhs_z = detail::zeta_em_direct(1.0 - s, default_em_params(1.0 - s));
    cplx rhs = detail::reflection_chain(s) * rhs_z.value;
    return std::abs(lhs.value - rhs) / std::max(std::abs(lhs.value), 1.0);
}

// Completed function Gamma(s/2) pi^(-s/2) zeta(s); symmetric under
// s -> 1-s.  Assembled in log space so the Gamma decay cannot underflow
// prematurely; the zeta factor stays linear so its zeros come through.
inline EvalResult completed_zeta(const cplx& s) {
    if (std::abs(s) < 1e-12)
        throw pole_error("completed_zeta: pole at s = 0");
    if (std::abs(s - cplx(1.0, 0.0)) < 1e-12)
        throw pole_error("completed_zeta: pole at s = 1");
    EvalResult lg = log_gamma(0.5 * s); // throws on the negative even integers
    EvalResult z = zeta(s);
    cplx envelope = std::exp(lg.value - 0.5 * s * std::log(pi));
    cplx v = envelope * z.value;
    double err = std::abs(envelope) * z.abs_err + std::abs(v) * 3e-13;
    return {v, err};
}

// F(t) = completed_zeta(1/2 + it); real-valued in exact arithmetic.
inline EvalResult critical_line_f(double t) {
    cplx s(0.5, t);
    EvalResult lg = log_gamma(0.5 * s);
    EvalResult z = zeta(s);
    cplx envelope = std::exp(lg.value - 0.5 * s * std::log(pi));
    cplx v = envelope * z.value;
    double err = std::abs(envelope) * z.abs_err + std::abs(v) * 3e-13;
    return {v, err};
}

namespace detail {

// Log-magnitude-with-sign view of F(t) for the zero scanner: sign stays
// reliable far past the point where |F| ~ exp(-pi t / 4) turns denormal.
struct SignedLogF {
    double log_abs;     // natural log of |F(t)|
    int sign;           // +1 / -1
    bool indeterminate; // |F| fell below the error estimate
};

inline SignedLogF critical_line_f_signed(double t) {
    cplx s(0.5, t);
    EvalResult lg = log_gamma(0.5 * s);
    EvalResult z = zeta(s);
    double zmag = std::abs(z.value);
    double rel = (zmag > 0.0) ? z.abs_err / zmag : 1e300;
    cplx w = lg.value - 0.5 * s * std::log(pi);
    double log_abs = w.real() + ((zmag > 0.0) ? std::log(zmag) : -1e300);
    // F real => total phase is ~0 mod pi; cos picks the sign robustly
    double phase = w.imag() + std::arg(z.value);
    int sign = (std::cos(phase) >= 0.0) ? 1 : -1;
    return {log_abs, sign, rel >= 1.0};
}

} // namespace detail

// Truncated Hadamard product for zeta: prefactor pi^(s/2) / (2(s-1)Gamma(1+s/2))
// times one real-coefficient quadratic factor per ordinate pair 1/2 +- i tau.
inline EvalResult hadamard_zeta(const cplx& s, const ZeroList& zeros, std::size_t n_pairs) {
    if (std::abs(s - cplx(1.0, 0.0)) < 1e-12)
        throw pole_error("hadamard_zeta: pole at s = 1");
    if (n_pairs < 1)
        throw precondition_error("hadamard_zeta: n_pairs must be positive");
    if (n_pairs > zeros.ordinates.size())
        throw insufficient_zeros_error("hadamard_zeta: n_pairs exceeds zero list");

    cplx prefactor = std::pow(cplx(pi, 0.0), 0.5 * s) /
                     (2.0 * (s - 1.0) * complex_gamma(1.0 + 0.5 * s).value);
    cplx s_s1 = s * (s - 1.0);
    cplx prod(1.0, 0.0);
    for (std::size_t k = 0; k < n_pairs; ++k) {
        double tau = zeros.ordinates[k];
        prod *= 1.0 + s_s1 / (0.25 + tau * tau);
    }
    cplx v = prefactor * prod;
    double tau_last = zeros.ordinates[n_pairs - 1];
    double tail = std::abs(s_s1) * (std::log(tau_last / (2.0 * pi)) + 1.0) /
                  (2.0 * pi * tau_last);
    double err = std::abs(v) * (tail + 1e-15 * static_cast<double>(n_pairs) + 1e-13);
    return {v, err};
}

// Truncated product over paired zeros of (1 - s/rho) at s = 1/2 + it,
// evaluated as the complex pair product (the real closed form
// prod (tau^2 - t^2)/(1/4 + tau^2) is the test oracle, not the evaluator).
inline EvalResult zero_product(double t, const ZeroList& zeros, std::size_t n_pairs) {
    if (n_pairs < 1)
        throw precondition_error("zero_product: n_pairs must be positive");
    if (n_pairs > zeros.ordinates.size())
        throw insufficient_zeros_error("zero_product: n_pairs exceeds zero list");
    const cplx s(0.5, t);
    cplx prod(1.0, 0.0);
    for (std::size_t k = 0; k < n_pairs; ++k) {
        double tau = zeros.ordinates[k];
        cplx rho(0.5, tau);
        prod *= (1.0 - s / rho) * (1.0 - s / std::conj(rho));
    }
    double tau_last = zeros.ordinates[n_pairs - 1];
    double tail = (0.25 + t * t) * (std::log(tau_last / (2.0 * pi)) + 1.0) /
                  (2.0 * pi * tau_last);
    double err = std::abs(prod) * (tail + 4e-16 * static_cast<double>(n_pairs));
    return {prod, err};
}

} // namespace critline
