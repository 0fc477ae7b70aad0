#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <vector>

#include "critline/errors.hpp"
#include "critline/zeta.hpp"

namespace critline {

struct Bracket {
    double lo = 0.0;
    double hi = 0.0;
    bool widened = false; // an endpoint sample was sign-indeterminate
};

struct ZeroRecord {
    std::size_t index = 0; // 1-based ordinal, 0 when unattached
    double t = 0.0;
    double t_lo = 0.0;
    double t_hi = 0.0;
    double tol = 0.0;
};

namespace detail {

struct RealSample {
    int sign;
    bool indeterminate;
};

using sign_fn = std::function<RealSample(double)>;

inline RealSample sample_critical_f(double t) {
    SignedLogF f = critical_line_f_signed(t);
    return {f.sign, f.indeterminate};
}

// Generic sign-change scanner over a real-valued function; shared by the
// zeta-zero scanner and the Dirichlet L zero search.
inline std::vector<Bracket> scan_real_sign_changes(const sign_fn& fn, double t_lo,
                                                   double t_hi, double step) {
    if (!(t_lo >= 0.0) || !(t_lo < t_hi))
        throw precondition_error("scan: need 0 <= t_lo < t_hi");
    if (!(step > 0.0))
        throw precondition_error("scan: step must be positive");

    const std::size_t n_steps = static_cast<std::size_t>(std::floor((t_hi - t_lo) / step + 1e-9));
    std::vector<RealSample> samples(n_steps + 1);
    for (std::size_t k = 0; k <= n_steps; ++k) samples[k] = fn(t_lo + k * step);

    std::vector<Bracket> out;
    for (std::size_t k = 0; k < n_steps; ++k) {
        if (samples[k].sign == samples[k + 1].sign) continue;
        Bracket b;
        b.lo = t_lo + k * step;
        b.hi = t_lo + (k + 1) * step;
        if (samples[k].indeterminate) {
            b.lo = std::max(t_lo, b.lo - step);
            b.widened = true;
        }
        if (samples[k + 1].indeterminate) {
            b.hi = std::min(t_hi, b.hi + step);
            b.widened = true;
        }
        out.push_back(b);
    }
    return out;
}

inline ZeroRecord refine_real_zero(const sign_fn& fn, Bracket bracket, double tol) {
    if (!(tol > 0.0))
        throw precondition_error("refine_zero: tol must be positive");
    double lo = bracket.lo, hi = bracket.hi;
    int s_lo = fn(lo).sign;
    int s_hi = fn(hi).sign;
    if (s_lo == s_hi)
        throw precondition_error("refine_zero: no sign change across bracket");
    for (int iter = 0; iter < 200 && (hi - lo) > 2.0 * tol; ++iter) {
        double mid = 0.5 * (lo + hi);
        if (fn(mid).sign == s_lo)
            lo = mid;
        else
            hi = mid;
    }
    ZeroRecord rec;
    rec.t = 0.5 * (lo + hi);
    rec.t_lo = lo;
    rec.t_hi = hi;
    rec.tol = tol;
    return rec;
}

} // namespace detail

inline std::vector<Bracket> scan_sign_changes(double t_lo, double t_hi, double step) {
    return detail::scan_real_sign_changes(detail::sample_critical_f, t_lo, t_hi, step);
}

inline ZeroRecord refine_zero(const Bracket& bracket, double tol) {
    return detail::refine_real_zero(detail::sample_critical_f, bracket, tol);
}

// First `count` ordinates, scanned with the default 0.05 step over
// geometrically growing windows and bisected to tol.
inline ZeroList build_zero_list(std::size_t count, double tol) {
    if (count < 1)
        throw precondition_error("build_zero_list: count must be positive");
    if (count > 500)
        throw precondition_error("build_zero_list: count exceeds desk scale (500)");
    if (!(tol > 0.0))
        throw precondition_error("build_zero_list: tol must be positive");

    const double step = 0.05;
    ZeroList list;
    double window_lo = 0.0, window_hi = 50.0;
    const double window_cap = 1600.0;
    while (list.ordinates.size() < count) {
        if (window_lo >= window_cap)
            throw scan_exhausted_error("build_zero_list: scan window heuristic exhausted");
        for (const Bracket& b : scan_sign_changes(window_lo, window_hi, step)) {
            if (list.ordinates.size() >= count) break;
            ZeroRecord rec = refine_zero(b, tol);
            list.ordinates.push_back(rec.t);
            list.tolerances.push_back(tol);
        }
        window_lo = window_hi;
        window_hi = std::min(window_cap, 2.0 * window_hi);
    }
    list.source = ZeroList::Source::computed;
    list.validate();
    return list;
}

} // namespace critline
