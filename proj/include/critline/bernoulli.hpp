#pragma once

#include <cmath>
#include <vector>

#include "critline/errors.hpp"
#include "critline/eval.hpp"

namespace critline {

// Even-index Bernoulli numbers B_0, B_2, ..., B_{2(count-1)}.
//
// Small indices come from exact rationals; from B_10 on we use
// B_{2n} = (-1)^{n+1} * 2 * (2n)! / (2pi)^{2n} * sum_k k^{-2n},
// which keeps full relative precision where the defining recurrence
// loses digits to cancellation.  count is capped at 60: B_118 ~ 1e100
// still fits a double, the next entries start to strain it.
inline std::vector<double> bernoulli_numbers(int count) {
    if (count < 1)
        throw precondition_error("bernoulli_numbers: count must be positive");
    if (count > 60)
        throw precondition_error("bernoulli_numbers: count exceeds double-precision range (max 60)");

    static const double small[] = {
        1.0,         // B_0
        1.0 / 6.0,   // B_2
        -1.0 / 30.0, // B_4
        1.0 / 42.0,  // B_6
        -1.0 / 30.0, // B_8
    };

    std::vector<double> b;
    b.reserve(count);
    for (int i = 0; i < count && i < 5; ++i) b.push_back(small[i]);

    const double four_pi_sq = 4.0 * pi * pi;
    // ratio = (2n)! / (2pi)^{2n}, advanced iteratively
    double ratio = 1.0;
    for (int n = 1; n <= 4; ++n) ratio *= (2.0 * n - 1.0) * (2.0 * n) / four_pi_sq;

    for (int n = 5; n < count; ++n) {
        ratio *= (2.0 * n - 1.0) * (2.0 * n) / four_pi_sq;
        double zeta_2n = 1.0;
        for (int k = 2;; ++k) {
            double term = std::pow(static_cast<double>(k), -2.0 * n);
            zeta_2n += term;
            if (term < 1e-20 * zeta_2n) break;
        }
        double mag = 2.0 * ratio * zeta_2n;
        b.push_back((n % 2 == 1) ? mag : -mag);
    }
    return b;
}

namespace detail {

// Shared read-only table used by the Euler-Maclaurin kernels.
inline const std::vector<double>& bernoulli_table() {
    static const std::vector<double> table = bernoulli_numbers(40);
    return table;
}

} // namespace detail

} // namespace critline
