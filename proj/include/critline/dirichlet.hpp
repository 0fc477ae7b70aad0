#pragma once

// Dirichlet characters built from the unit-group decomposition, L-functions
// through the Hurwitz kernel, Gauss sums, the completed Lambda with its
// reflection, the real-valued line function F(t,chi), and the two audit
// records (principal-character closed form, logarithmic-derivative constant).

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <map>
#include <mutex>
#include <numeric>
#include <utility>
#include <vector>

#include <critline/errors.hpp>
#include <critline/eval.hpp>
#include <critline/gamma.hpp>
#include <critline/zeros.hpp>
#include <critline/zeta.hpp>

namespace critline {

struct DirichletCharacter {
    int q = 1;
    std::vector<cplx> values; // index n -> chi(n mod q)
    int label = 1;            // 1 = principal
    bool primitive = true;
    int parity = 0; // (1 - chi(-1))/2

    cplx at(long long n) const {
        long long r = n % q;
        if (r < 0) r += q;
        return values[static_cast<std::size_t>(r)];
    }
    bool is_principal() const { return label == 1; }
};

namespace detail {

inline std::vector<std::pair<long long, int>> factorize(long long n) {
    std::vector<std::pair<long long, int>> out;
    for (long long p = 2; p * p <= n; ++p) {
        if (n % p) continue;
        int e = 0;
        while (n % p == 0) {
            n /= p;
            ++e;
        }
        out.push_back({p, e});
    }
    if (n > 1) out.push_back({n, 1});
    return out;
}

inline long long euler_phi(long long n) {
    long long phi = n;
    for (auto [p, e] : factorize(n)) phi -= phi / p;
    return phi;
}

inline long long pow_mod(long long b, long long e, long long m) {
    long long r = 1;
    b %= m;
    while (e > 0) {
        if (e & 1) r = r * b % m;
        b = b * b % m;
        e >>= 1;
    }
    return r;
}

inline long long primitive_root_odd_prime_power(long long p, int e) {
    long long phi_p = p - 1;
    auto fac = factorize(phi_p);
    long long g = 2;
    for (;; ++g) {
        bool ok = true;
        for (auto [f, fe] : fac) {
            if (pow_mod(g, phi_p / f, p) == 1) {
                ok = false;
                break;
            }
        }
        if (ok) break;
    }
    // lift: g generates mod p^e unless g^(p-1) = 1 mod p^2
    if (e > 1 && pow_mod(g, p - 1, p * p) == 1) g += p;
    return g;
}

// One cyclic factor of the unit group; exps maps a residue (mod piece) to
// its exponent on this factor, -1 for non-units. The 2^e piece with e >= 3
// contributes two factors over the same piece.
struct UnitComponent {
    long long piece = 1;
    long long order = 1;
    std::vector<int> exps;
};

inline std::vector<UnitComponent> unit_components(int q) {
    std::vector<UnitComponent> comps;
    for (auto [p, e] : factorize(q)) {
        long long piece = 1;
        for (int i = 0; i < e; ++i) piece *= p;
        if (p == 2) {
            if (e == 1) continue;
            if (e == 2) {
                UnitComponent c;
                c.piece = piece;
                c.order = 2;
                c.exps.assign(piece, -1);
                c.exps[1] = 0;
                c.exps[3] = 1;
                comps.push_back(std::move(c));
                continue;
            }
            UnitComponent sign;
            sign.piece = piece;
            sign.order = 2;
            sign.exps.assign(piece, -1);
            UnitComponent five;
            five.piece = piece;
            five.order = piece / 4;
            five.exps.assign(piece, -1);
            long long r = 1;
            for (long long k = 0; k < five.order; ++k) {
                five.exps[r] = static_cast<int>(k);
                sign.exps[r] = 0;
                long long neg = piece - r;
                five.exps[neg] = static_cast<int>(k);
                sign.exps[neg] = 1;
                r = r * 5 % piece;
            }
            comps.push_back(std::move(sign));
            comps.push_back(std::move(five));
            continue;
        }
        UnitComponent c;
        c.piece = piece;
        c.order = euler_phi(piece);
        c.exps.assign(piece, -1);
        long long g = primitive_root_odd_prime_power(p, e);
        long long r = 1;
        for (long long k = 0; k < c.order; ++k) {
            c.exps[r] = static_cast<int>(k);
            r = r * g % piece;
        }
        comps.push_back(std::move(c));
    }
    return comps;
}

inline bool factors_through_divisor(const DirichletCharacter& chi, int d) {
    // chi is induced from modulus d exactly when its kernel contains every
    // unit n = 1 (mod d)
    for (int n = 1; n < chi.q; ++n) {
        if (std::gcd(n, chi.q) != 1) continue;
        if (n % d != 1 % d) continue;
        if (std::abs(chi.values[n] - cplx(1.0, 0.0)) > 1e-9) return false;
    }
    return true;
}

inline std::vector<DirichletCharacter> build_characters(int q) {
    auto comps = unit_components(q);
    long long phi = euler_phi(q);
    std::vector<DirichletCharacter> out;
    out.reserve(static_cast<std::size_t>(phi));

    std::vector<long long> digits(comps.size(), 0);
    for (long long j = 1; j <= phi; ++j) {
        DirichletCharacter chi;
        chi.q = q;
        chi.label = static_cast<int>(j);
        chi.values.assign(q == 0 ? 1 : q, cplx(0.0, 0.0));
        for (int n = 0; n < q; ++n) {
            if (std::gcd(n, q) != 1 && q != 1) continue;
            double frac = 0.0;
            for (std::size_t c = 0; c < comps.size(); ++c) {
                long long l = comps[c].exps[n % comps[c].piece];
                frac += static_cast<double>(digits[c] * l % comps[c].order) /
                        static_cast<double>(comps[c].order);
            }
            chi.values[n] = std::polar(1.0, 2.0 * pi * frac);
        }
        if (q == 1) chi.values[0] = cplx(1.0, 0.0);

        double re_minus1 = chi.values[(q - 1) % q].real();
        chi.parity = re_minus1 > 0.0 ? 0 : 1;

        chi.primitive = true;
        for (int d = 1; d < q; ++d) {
            if (q % d) continue;
            if (factors_through_divisor(chi, d)) {
                chi.primitive = false;
                break;
            }
        }
        out.push_back(std::move(chi));

        // advance mixed-radix exponent vector, most significant digit first,
        // so labels follow lexicographic order with j = 1 principal
        for (std::size_t c = comps.size(); c-- > 0;) {
            if (++digits[c] < comps[c].order) break;
            digits[c] = 0;
        }
    }
    return out;
}

inline bool character_is_real(const DirichletCharacter& chi) {
    for (const cplx& v : chi.values) {
        if (std::abs(v.imag()) > 1e-12) return false;
    }
    return true;
}

inline double principal_angle(double x) {
    double r = std::remainder(x, 2.0 * pi);
    if (r <= -pi) r += 2.0 * pi;
    return r;
}

inline EMParams hurwitz_params(const cplx& s) {
    EMParams p = default_em_params(s);
    if (s.real() < 0.5) {
        // Left of the strip the Bernoulli corrections carry the whole
        // continuation; favor them over direct terms, whose growth against
        // the cancelling corrections amplifies rounding. The cutoff still
        // must keep the asymptotic correction series inside its decreasing
        // range, |s + 2J| < 2 pi M.
        int j_acc = 14 + static_cast<int>(std::ceil(0.75 * (0.5 - s.real())));
        int j_valid = static_cast<int>(std::ceil((1.0 - s.real()) / 2.0)) + 3;
        p.bernoulli_terms = std::min(36, std::max(j_acc, j_valid));
        int n_asym = static_cast<int>(
            std::ceil((std::abs(s.imag()) + 2.0 * p.bernoulli_terms + 4.0) / 6.0));
        p.cutoff_n =
            std::max({12, n_asym, static_cast<int>(std::ceil(1.3 * std::abs(s.imag())))});
    }
    return p;
}

} // namespace detail

inline const std::vector<DirichletCharacter>& enumerate_characters(int q) {
    if (q < 1 || q > 1000) throw precondition_error("enumerate_characters: modulus out of range");
    static std::map<int, std::vector<DirichletCharacter>> cache;
    static std::mutex mtx;
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(q);
    if (it == cache.end()) it = cache.emplace(q, detail::build_characters(q)).first;
    return it->second;
}

inline const DirichletCharacter& conjugate_character(const DirichletCharacter& chi) {
    const auto& table = enumerate_characters(chi.q);
    for (const auto& cand : table) {
        bool match = true;
        for (int n = 0; n < chi.q; ++n) {
            if (std::abs(cand.values[n] - std::conj(chi.values[n])) > 1e-10) {
                match = false;
                break;
            }
        }
        if (match) return cand;
    }
    throw evaluation_error("conjugate_character: no table match");
}

inline EvalResult hurwitz_zeta(const cplx& s, double a) {
    if (!(a > 0.0) || a > 1.0) throw precondition_error("hurwitz_zeta: a must lie in (0, 1]");
    if (std::abs(s - cplx(1.0, 0.0)) < 1e-12) throw pole_error("hurwitz_zeta: pole at s = 1");
    EMParams p = detail::hurwitz_params(s);
    if (s.real() <= 1.0 - 2.0 * p.bernoulli_terms)
        throw convergence_region_error("hurwitz_zeta: Re(s) below supported continuation range");
    return detail::hurwitz_em(s, a, p);
}

// q^(-s) sum_a chi(a) zeta(s, a/q). Near s = 1 a non-principal character
// cancels the simple pole exactly, so the pole-subtracted kernel is summed
// instead; the omitted sum chi(a)/(s-1) is identically zero.
inline EvalResult l_function(const cplx& s, const DirichletCharacter& chi) {
    const bool principal = chi.is_principal();
    if (principal && std::abs(s - cplx(1.0, 0.0)) < 1e-12)
        throw pole_error("l_function: principal character pole at s = 1");
    const bool regularized = !principal && std::abs(s - cplx(1.0, 0.0)) < 0.25;
    EMParams p = detail::hurwitz_params(s);
    if (s.real() <= 1.0 - 2.0 * p.bernoulli_terms)
        throw convergence_region_error("l_function: Re(s) below supported continuation range");

    cplx acc(0.0, 0.0);
    double err = 0.0;
    for (int a = 1; a <= chi.q; ++a) {
        cplx c = chi.values[a % chi.q];
        if (c == cplx(0.0, 0.0)) continue;
        EvalResult h = detail::hurwitz_em(s, static_cast<double>(a) / chi.q, p, regularized);
        acc += c * h.value;
        err += h.abs_err;
    }
    cplx qs = detail::pow_neg(static_cast<double>(chi.q), s);
    cplx v = qs * acc;
    return {v, std::abs(qs) * err + 1e-15 * std::abs(v)};
}

struct GaussSumPolar {
    double magnitude = 0.0;
    double theta = 0.0;       // arg of the raw sum
    double theta_prime = 0.0; // theta - parity*pi/2, reduced to (-pi, pi]
    cplx raw{0.0, 0.0};
};

inline GaussSumPolar gauss_sum(const DirichletCharacter& chi) {
    cplx tau(0.0, 0.0);
    for (int n = 1; n <= chi.q; ++n) {
        tau += chi.values[n % chi.q] * std::polar(1.0, 2.0 * pi * n / chi.q);
    }
    GaussSumPolar g;
    g.raw = tau;
    g.magnitude = std::abs(tau);
    g.theta = std::arg(tau);
    g.theta_prime = detail::principal_angle(g.theta - chi.parity * 0.5 * pi);
    return g;
}

// (q/pi)^((s+a)/2) Gamma((s+a)/2) L(s,chi); entire for primitive
// non-principal chi. Modulus 1 is the completed zeta itself.
inline EvalResult lambda_completed(const cplx& s, const DirichletCharacter& chi) {
    if (chi.q == 1) return completed_zeta(s);
    if (chi.is_principal())
        throw precondition_error("lambda_completed: principal character with modulus > 1");
    cplx e = 0.5 * (s + static_cast<double>(chi.parity));
    EvalResult g = complex_gamma(e);
    cplx pw = std::exp(e * std::log(chi.q / pi));
    EvalResult L = l_function(s, chi);
    cplx v = pw * g.value * L.value;
    double err = std::abs(pw) * (std::abs(g.value) * L.abs_err + g.abs_err * std::abs(L.value)) +
                 2e-15 * std::abs(v);
    return {v, err};
}

// |Lambda(1-s, conj chi) - (i^a sqrt(q)/tau) Lambda(s, chi)| scaled by the
// larger side; both sides evaluated independently.
inline double functional_residual_L(const cplx& s, const DirichletCharacter& chi) {
    if (!chi.primitive)
        throw not_primitive_error("functional_residual_L: character must be primitive");
    cplx lhs = lambda_completed(1.0 - s, conjugate_character(chi)).value;
    GaussSumPolar g = gauss_sum(chi);
    cplx root_factor = (chi.parity ? cplx(0.0, 1.0) : cplx(1.0, 0.0)) *
                       std::sqrt(static_cast<double>(chi.q)) / g.raw;
    cplx rhs = root_factor * lambda_completed(s, chi).value;
    return std::abs(lhs - rhs) / std::max({std::abs(lhs), std::abs(rhs), 1e-300});
}

// Lambda(1/2+it, chi) e^(-i theta'/2); real up to rounding for primitive
// chi, the half-angle fixes the rotation from the root factor.
inline EvalResult f_real_chi(double t, const DirichletCharacter& chi) {
    if (!chi.primitive) throw not_primitive_error("f_real_chi: character must be primitive");
    GaussSumPolar g = gauss_sum(chi);
    EvalResult lam = lambda_completed(cplx(0.5, t), chi);
    cplx v = lam.value * std::polar(1.0, -0.5 * g.theta_prime);
    return {v, lam.abs_err};
}

inline std::vector<Bracket> scan_l_sign_changes(const DirichletCharacter& chi, double t_lo,
                                                double t_hi, double step) {
    auto fn = [&chi](double t) -> detail::RealSample {
        EvalResult f = f_real_chi(t, chi);
        return {f.value.real() >= 0.0 ? 1 : -1, f.abs_err >= std::abs(f.value)};
    };
    return detail::scan_real_sign_changes(fn, t_lo, t_hi, step);
}

inline ZeroRecord refine_l_zero(const DirichletCharacter& chi, const Bracket& bracket,
                                double tol) {
    auto fn = [&chi](double t) -> detail::RealSample {
        EvalResult f = f_real_chi(t, chi);
        return {f.value.real() >= 0.0 ? 1 : -1, f.abs_err >= std::abs(f.value)};
    };
    return detail::refine_real_zero(fn, bracket, tol);
}

// First `count` positive ordinates of F(t,chi) sign changes, refined to
// tol. The search stays below t = 50.
inline std::vector<double> find_l_zero_ordinates(const DirichletCharacter& chi,
                                                 std::size_t count, double tol) {
    std::vector<double> out;
    if (count == 0) return out;
    const double step = 0.05;
    for (double hi : {12.5, 25.0, 50.0}) {
        auto brackets = scan_l_sign_changes(chi, 0.0, hi, step);
        if (brackets.size() < count && hi < 50.0) continue;
        for (const auto& b : brackets) {
            out.push_back(refine_l_zero(chi, b, tol).t);
            if (out.size() == count) return out;
        }
        break;
    }
    throw scan_exhausted_error("find_l_zero_ordinates: fewer sign changes than requested below t = 50");
}

struct PrincipalIdentityAudit {
    int q = 0;
    cplx via_character{0.0, 0.0}; // L(s, principal chi) through the Hurwitz route
    cplx via_euler{0.0, 0.0};     // zeta(s) * prod_(p|q) (1 - p^-s)
    cplx via_printed{0.0, 0.0};   // q^-s [q^s + np - 1 - sum p^s] zeta(s)
    double residual_euler = 0.0;  // |via_character - via_euler|
    double residual_printed = 0.0;
};

inline PrincipalIdentityAudit principal_identity_audit(const cplx& s, int q) {
    if (q < 2 || q > 1000) throw precondition_error("principal_identity_audit: q out of range");
    if (std::abs(s - cplx(1.0, 0.0)) < 1e-12)
        throw pole_error("principal_identity_audit: pole at s = 1");

    PrincipalIdentityAudit rec;
    rec.q = q;
    rec.via_character = l_function(s, enumerate_characters(q).front()).value;

    cplx z = zeta(s).value;
    cplx euler(1.0, 0.0);
    cplx printed_bracket = std::exp(s * std::log(static_cast<double>(q)));
    int np = 0;
    for (auto [p, e] : detail::factorize(q)) {
        euler *= cplx(1.0, 0.0) - detail::pow_neg(static_cast<double>(p), s);
        printed_bracket -= std::exp(s * std::log(static_cast<double>(p)));
        ++np;
    }
    printed_bracket += static_cast<double>(np - 1);
    rec.via_euler = z * euler;
    rec.via_printed = detail::pow_neg(static_cast<double>(q), s) * printed_bracket * z;
    rec.residual_euler = std::abs(rec.via_character - rec.via_euler);
    rec.residual_printed = std::abs(rec.via_character - rec.via_printed);
    return rec;
}

struct BChiAudit {
    cplx derivative_ratio{0.0, 0.0}; // Lambda'/Lambda at 0 via Richardson differences
    double zero_sum = 0.0;           // -1/2 sum 1/(1/4 + gamma^2) over located ordinates
    double gap = 0.0;
    std::size_t zeros_each_side = 0;
    double max_ordinate = 0.0;
    double tail_estimate = 0.0; // density-model bound on the discarded remainder
};

// Compares the logarithmic derivative of Lambda at 0 against the truncated
// sum over located line zeros, using the positive ordinates of chi and of
// conj chi as the two halves of the zero set.
inline BChiAudit b_chi_audit(const DirichletCharacter& chi, std::size_t n_zeros) {
    if (!chi.primitive) throw not_primitive_error("b_chi_audit: character must be primitive");
    EvalResult l0 = l_function(cplx(0.0, 0.0), chi);
    if (std::abs(l0.value) <= std::max(1e-8, 10.0 * l0.abs_err))
        throw precondition_error("b_chi_audit: L(0) vanishes for this character");

    auto log_lambda = [&chi](double x) { return std::log(lambda_completed(cplx(x, 0.0), chi).value); };
    const double h = 1e-5;
    cplx d1 = (log_lambda(h) - log_lambda(-h)) / (2.0 * h);
    cplx d2 = (log_lambda(0.5 * h) - log_lambda(-0.5 * h)) / h;
    BChiAudit rec;
    rec.derivative_ratio = (4.0 * d2 - d1) / 3.0;
    rec.zeros_each_side = n_zeros;

    if (n_zeros > 0) {
        std::vector<double> plus = find_l_zero_ordinates(chi, n_zeros, 1e-9);
        std::vector<double> minus = detail::character_is_real(chi)
                                        ? plus
                                        : find_l_zero_ordinates(conjugate_character(chi),
                                                                n_zeros, 1e-9);
        double sum = 0.0;
        for (double g : plus) sum += 1.0 / (0.25 + g * g);
        for (double g : minus) sum += 1.0 / (0.25 + g * g);
        rec.zero_sum = -0.5 * sum;
        rec.max_ordinate = std::max(plus.back(), minus.back());
        auto tail = [this_q = chi.q](double gmax) {
            return (std::log(this_q * gmax / (2.0 * pi)) + 1.0) / (2.0 * pi * gmax);
        };
        rec.tail_estimate = tail(plus.back()) + tail(minus.back());
    } else {
        rec.tail_estimate = std::numeric_limits<double>::infinity();
    }
    rec.gap = std::abs(rec.derivative_ratio - cplx(rec.zero_sum, 0.0));
    return rec;
}

} // namespace critline
