#pragma once

#include <complex>
#include <quadmath.h>

#include "errors.hpp"

// Minimal quad-precision complex kernel. Double rounding noise in the theta
// sums caps reliable winding near t ~ 22 and |Z| refinement near t ~ 10; the
// 113-bit significand moves those ceilings past every height this project
// searches. Only the operations the zero search needs are provided.

namespace critline {
namespace hp {

using qreal = __float128;

struct qcplx {
    qreal re = 0.0;
    qreal im = 0.0;

    qcplx() = default;
    qcplx(qreal r, qreal i) : re(r), im(i) {}
    explicit qcplx(qreal r) : re(r), im(0.0) {}
    explicit qcplx(const std::complex<double>& z) : re(z.real()), im(z.imag()) {}
};

inline qcplx operator+(const qcplx& u, const qcplx& v) { return {u.re + v.re, u.im + v.im}; }
inline qcplx operator-(const qcplx& u, const qcplx& v) { return {u.re - v.re, u.im - v.im}; }
inline qcplx operator-(const qcplx& u) { return {-u.re, -u.im}; }
inline qcplx operator*(const qcplx& u, const qcplx& v) {
    return {u.re * v.re - u.im * v.im, u.re * v.im + u.im * v.re};
}
inline qcplx operator*(qreal a, const qcplx& v) { return {a * v.re, a * v.im}; }
inline qcplx operator/(const qcplx& u, const qcplx& v) {
    qreal den = v.re * v.re + v.im * v.im;
    return {(u.re * v.re + u.im * v.im) / den, (u.im * v.re - u.re * v.im) / den};
}
inline qcplx operator/(const qcplx& u, qreal a) { return {u.re / a, u.im / a}; }
inline qcplx& operator+=(qcplx& u, const qcplx& v) {
    u.re += v.re;
    u.im += v.im;
    return u;
}
inline qcplx& operator*=(qcplx& u, const qcplx& v) {
    u = u * v;
    return u;
}

inline qreal abs(const qcplx& z) { return hypotq(z.re, z.im); }
inline qreal arg(const qcplx& z) { return atan2q(z.im, z.re); }
inline qcplx conj(const qcplx& z) { return {z.re, -z.im}; }
inline qcplx exp(const qcplx& z) {
    qreal m = expq(z.re);
    return {m * cosq(z.im), m * sinq(z.im)};
}
inline qcplx log(const qcplx& z) { return {logq(abs(z)), arg(z)}; }
inline qcplx sin(const qcplx& z) {
    return {sinq(z.re) * coshq(z.im), cosq(z.re) * sinhq(z.im)};
}

inline std::complex<double> to_double(const qcplx& z) {
    return {static_cast<double>(z.re), static_cast<double>(z.im)};
}

inline const qreal qpi = 2.0 * acosq(0.0);

// Gamma(s) by Spouge's expansion; a = 41 keeps the relative truncation near
// 1e-33, far below every tolerance the callers check. Reflection covers the
// left half-plane, where the expansion itself is invalid.
inline qcplx gamma(const qcplx& s) {
    constexpr int a = 41;
    static qreal coef[a];
    static bool init = false;
    if (!init) {
        coef[0] = sqrtq(2.0 * qpi);
        qreal fact = 1.0;
        for (int k = 1; k < a; ++k) {
            qreal ak = static_cast<qreal>(a - k);
            coef[k] = powq(ak, static_cast<qreal>(k) - 0.5) * expq(ak) / fact;
            if (k % 2 == 0) coef[k] = -coef[k];
            fact *= static_cast<qreal>(k);
        }
        init = true;
    }
    if (s.re < 0.5) {
        qcplx one_minus(1.0 - s.re, -s.im);
        return qpi * (qcplx(1.0) / (sin(qpi * s) * gamma(one_minus)));
    }
    qcplx acc(coef[0]);
    for (int k = 1; k < a; ++k) acc += coef[k] * (qcplx(1.0) / (s + qcplx(static_cast<qreal>(k - 1))));
    qcplx base = s + qcplx(static_cast<qreal>(a) - 1.0);
    return exp((s - qcplx(0.5)) * log(base) - base) * acc;
}

inline qcplx recip_gamma(const qcplx& s) {
    if (s.re >= 0.5) return qcplx(1.0) / gamma(s);
    qcplx one_minus(1.0 - s.re, -s.im);
    return sin(qpi * s) * gamma(one_minus) / qpi;
}

// Gauss-Legendre nodes and weights on [-1, 1], generated once by Newton's
// method on the Legendre recurrence so no decimal literals limit precision.
template <int N>
struct gauss_legendre {
    qreal x[N];
    qreal w[N];

    gauss_legendre() {
        for (int i = 0; i < N; ++i) {
            qreal xi = cosq(qpi * (static_cast<qreal>(i) + 0.75) /
                            (static_cast<qreal>(N) + 0.5));
            qreal dp = 0.0;
            for (int it = 0; it < 100; ++it) {
                qreal p0 = 1.0, p1 = xi;
                for (int k = 2; k <= N; ++k) {
                    qreal pk = ((2.0 * k - 1.0) * xi * p1 - (k - 1.0) * p0) /
                               static_cast<qreal>(k);
                    p0 = p1;
                    p1 = pk;
                }
                dp = static_cast<qreal>(N) * (xi * p1 - p0) / (xi * xi - 1.0);
                qreal step = p1 / dp;
                xi -= step;
                if (fabsq(step) < qreal(1e-36)) break;
            }
            x[i] = xi;
            w[i] = 2.0 / ((1.0 - xi * xi) * dp * dp);
        }
    }
};

inline const gauss_legendre<32>& gl32() {
    static const gauss_legendre<32> table;
    return table;
}

} // namespace hp
} // namespace critline
