#pragma once

#include <cmath>
#include <complex>

#include "critline/errors.hpp"
#include "critline/eval.hpp"

namespace critline {

namespace detail {

// Lanczos rational approximation, g = 607/128, 14 coefficients.
inline constexpr double lanczos_g = 4.7421875;
inline constexpr double lanczos_c0 = 0.999999999999997092;
inline constexpr double lanczos_c[14] = {
    57.1562356658629235,     -59.5979603554754912,
    14.1360979747417471,     -0.491913816097620199,
    0.339946499848118887e-4, 0.465236289270485756e-4,
    -0.983744753048795646e-4, 0.158088703224912494e-3,
    -0.210264441724104883e-3, 0.217439618115212643e-3,
    -0.164318106536763890e-3, 0.844182239838527433e-4,
    -0.261908384015814087e-4, 0.368991826595316234e-5,
};

inline cplx lanczos_series(const cplx& z) {
    cplx ser(lanczos_c0, 0.0);
    for (int j = 0; j < 14; ++j) ser += lanczos_c[j] / (z + static_cast<double>(j + 1));
    return ser;
}

inline bool near_nonpositive_integer(const cplx& s, double tol) {
    double k = std::round(s.real());
    return k <= 0.0 && std::abs(s.real() - k) <= tol && std::abs(s.imag()) <= tol;
}

// Valid for Re(z) >= 0.5.
inline cplx gamma_right_half(const cplx& z) {
    cplx t = z + (lanczos_g + 0.5);
    return std::sqrt(2.0 * pi) * std::exp((z + 0.5) * std::log(t) - t) *
           lanczos_series(z) / z;
}

} // namespace detail

inline EvalResult complex_gamma(const cplx& s) {
    if (detail::near_nonpositive_integer(s, 1e-14))
        throw pole_error("complex_gamma: pole at non-positive integer");

    cplx v;
    double rel = 2e-13;
    if (s.real() < 0.5) {
        cplx reflected = detail::gamma_right_half(1.0 - s);
        cplx sin_pis = std::sin(pi * s);
        v = pi / (sin_pis * reflected);
        // accuracy degrades approaching the pole lattice
        double dist = std::abs(s - cplx(std::round(s.real()), 0.0));
        if (dist < 1.0) rel *= 1.0 + 1e-2 / std::max(dist, 1e-13);
    } else {
        v = detail::gamma_right_half(s);
    }
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
        throw evaluation_error("complex_gamma: overflow; use log_gamma");
    return {v, std::abs(v) * rel};
}

// Principal branch for Re(s) >= 0.5, extended left by the recurrence
// log Gamma(s) = log Gamma(s+m) - sum log(s+k).  Continuous along vertical
// lines in Re(s) > 0; for Re(s) <= 0 the branch is whatever the recurrence
// produces (still exp-consistent with complex_gamma).
inline EvalResult log_gamma(const cplx& s) {
    if (detail::near_nonpositive_integer(s, 1e-14))
        throw pole_error("log_gamma: pole at non-positive integer");

    cplx shift(0.0, 0.0);
    cplx w = s;
    while (w.real() < 0.5) {
        shift += std::log(w);
        w += 1.0;
    }
    cplx t = w + (detail::lanczos_g + 0.5);
    cplx v = 0.5 * std::log(2.0 * pi) + (w + 0.5) * std::log(t) - t +
             std::log(detail::lanczos_series(w)) - std::log(w) - shift;
    return {v, 1e-13 * (3.0 + std::abs(v))};
}

} // namespace critline
