#pragma once

#include <algorithm>
#include <cmath>
#include <complex>

namespace critline {

using cplx = std::complex<double>;

inline constexpr double pi = 3.14159265358979323846264338327950288;

// Every evaluator returns its value together with an estimated (not proven)
// absolute error bound; audits compare residuals against the larger of the
// accumulated estimates and the configured tolerance.
struct EvalResult {
    cplx value{0.0, 0.0};
    double abs_err = 0.0;
};

// Euler-Maclaurin truncation knobs shared by the zeta/Hurwitz evaluators.
struct EMParams {
    int cutoff_n = 30;        // direct terms before the tail correction
    int bernoulli_terms = 12; // B_2..B_{2k} correction terms
};

// Default cutoff grows with |Im s|; 1.3*|t| keeps the tail bound below
// ~1e-12 across the ordinate ranges the zero scanner visits.
inline EMParams default_em_params(const cplx& s) {
    EMParams p;
    p.cutoff_n = std::max(30, static_cast<int>(std::ceil(1.3 * std::abs(s.imag()))));
    p.bernoulli_terms = 12;
    return p;
}

} // namespace critline
