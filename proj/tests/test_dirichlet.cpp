#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <numeric>
#include <random>
#include <vector>

#include <critline/dirichlet.hpp>
#include <critline/zeta.hpp>

using critline::cplx;
using critline::DirichletCharacter;
using critline::pi;

namespace {

double rel_diff(const cplx& a, const cplx& b) {
    return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300});
}

long long naive_phi(long long q) {
    long long c = 0;
    for (long long n = 1; n <= q; ++n)
        if (std::gcd(n, q) == 1) ++c;
    return c;
}

int naive_mobius(long long q) {
    int primes = 0;
    for (long long p = 2; p * p <= q; ++p) {
        if (q % p) continue;
        q /= p;
        if (q % p == 0) return 0;
        ++primes;
    }
    if (q > 1) ++primes;
    return primes % 2 == 0 ? 1 : -1;
}

const DirichletCharacter& character(int q, int label) {
    return critline::enumerate_characters(q)[static_cast<std::size_t>(label - 1)];
}

const DirichletCharacter& odd_character_mod4() { return character(4, 2); }
const DirichletCharacter& nonprincipal_mod3() { return character(3, 2); }

} // namespace

TEST_CASE("character tables are complete homomorphism sets") {
    for (int q : {1, 4, 5, 8, 12, 15, 16, 21, 24}) {
        const auto& chars = critline::enumerate_characters(q);
        REQUIRE(static_cast<long long>(chars.size()) == naive_phi(q));
        // distinct
        for (std::size_t i = 0; i < chars.size(); ++i) {
            for (std::size_t j = i + 1; j < chars.size(); ++j) {
                double d = 0.0;
                for (int n = 0; n < q; ++n)
                    d = std::max(d, std::abs(chars[i].values[n] - chars[j].values[n]));
                CHECK(d > 1e-6);
            }
        }
        for (const auto& chi : chars) {
            for (int n = 0; n < q; ++n) {
                if (std::gcd(n, q) != 1 && q != 1) {
                    CHECK(chi.values[n] == cplx(0.0, 0.0));
                } else {
                    CHECK(std::abs(std::abs(chi.values[n]) - 1.0) < 1e-12);
                }
            }
            // exhaustive multiplicativity pins the table as exactly the
            // homomorphisms from the unit group
            for (int m = 1; m < std::max(q, 2); ++m) {
                for (int n = m; n < std::max(q, 2); ++n) {
                    CHECK(std::abs(chi.at(static_cast<long long>(m) * n) -
                                   chi.at(m) * chi.at(n)) < 1e-12);
                }
            }
        }
    }
}

TEST_CASE("pinned small tables") {
    const auto& mod1 = critline::enumerate_characters(1);
    REQUIRE(mod1.size() == 1);
    CHECK(mod1[0].values[0] == cplx(1.0, 0.0));
    CHECK(mod1[0].primitive);

    const auto& mod4 = critline::enumerate_characters(4);
    REQUIRE(mod4.size() == 2);
    CHECK(mod4[0].is_principal());
    CHECK(std::abs(mod4[0].values[1] - cplx(1.0, 0.0)) < 1e-15);
    CHECK(mod4[0].values[2] == cplx(0.0, 0.0));
    CHECK(std::abs(mod4[1].values[3] - cplx(-1.0, 0.0)) < 1e-12);
    CHECK(mod4[1].parity == 1);
    CHECK(mod4[1].primitive);
    CHECK_FALSE(mod4[0].primitive);

    const auto& mod5 = critline::enumerate_characters(5);
    REQUIRE(mod5.size() == 4);
    std::vector<cplx> at2;
    for (const auto& chi : mod5) at2.push_back(chi.values[2]);
    for (const cplx& root : {cplx(1, 0), cplx(0, 1), cplx(-1, 0), cplx(0, -1)}) {
        int hits = 0;
        for (const cplx& v : at2)
            if (std::abs(v - root) < 1e-12) ++hits;
        CHECK(hits == 1);
    }
}

TEST_CASE("primitive counts match the divisor-sum oracle") {
    for (int q = 1; q <= 60; ++q) {
        long long expected = 0;
        for (int d = 1; d <= q; ++d) {
            if (q % d) continue;
            expected += naive_mobius(q / d) * naive_phi(d);
        }
        long long got = 0;
        for (const auto& chi : critline::enumerate_characters(q))
            if (chi.primitive) ++got;
        CHECK(got == expected);
    }
}

TEST_CASE("modulus gates") {
    CHECK_THROWS_AS(critline::enumerate_characters(0), critline::precondition_error);
    CHECK_THROWS_AS(critline::enumerate_characters(1001), critline::precondition_error);
}

TEST_CASE("orthogonality") {
    for (int q = 1; q <= 20; ++q) {
        const auto& chars = critline::enumerate_characters(q);
        for (std::size_t j = 0; j < chars.size(); ++j) {
            for (std::size_t k = 0; k < chars.size(); ++k) {
                cplx sum(0.0, 0.0);
                for (int n = 1; n <= q; ++n)
                    sum += chars[j].values[n % q] * std::conj(chars[k].values[n % q]);
                cplx expected = (j == k) ? cplx(static_cast<double>(naive_phi(q)), 0.0)
                                         : cplx(0.0, 0.0);
                CHECK(std::abs(sum - expected) < 1e-10);
            }
        }
    }
}

TEST_CASE("multiplicativity on random pairs") {
    std::mt19937 rng(777);
    for (int q : {12, 15, 16, 20}) {
        for (const auto& chi : critline::enumerate_characters(q)) {
            std::uniform_int_distribution<long long> pick(1, static_cast<long long>(q) * q);
            for (int i = 0; i < 200; ++i) {
                long long m = pick(rng), n = pick(rng);
                CHECK(std::abs(chi.at(m * n) - chi.at(m) * chi.at(n)) < 1e-12);
            }
        }
    }
}

TEST_CASE("conjugate character lookup") {
    const auto& mod5 = critline::enumerate_characters(5);
    for (const auto& chi : mod5) {
        const auto& bar = critline::conjugate_character(chi);
        for (int n = 0; n < 5; ++n)
            CHECK(std::abs(bar.values[n] - std::conj(chi.values[n])) < 1e-10);
        CHECK(bar.primitive == chi.primitive);
        CHECK(bar.parity == chi.parity);
    }
    CHECK(critline::conjugate_character(nonprincipal_mod3()).label ==
          nonprincipal_mod3().label);
}

TEST_CASE("hurwitz zeta reduces to zeta at a=1") {
    for (const cplx& s : {cplx(2, 0), cplx(0.5, 3.0), cplx(-1.5, 0.0), cplx(3.0, -2.0)}) {
        CHECK(rel_diff(critline::hurwitz_zeta(s, 1.0).value, critline::zeta(s).value) < 1e-11);
    }
}

TEST_CASE("hurwitz zeta at a=1/2 matches partial sums and the closed form") {
    const int N = 1000000;
    double partial = 0.0;
    for (int n = N - 1; n >= 0; --n) partial += 1.0 / ((n + 0.5) * (n + 0.5));
    double oracle = partial + 1.0 / N;
    auto hz = critline::hurwitz_zeta({2.0, 0.0}, 0.5);
    CHECK(std::abs(hz.value.real() - oracle) < 1e-10);
    CHECK(rel_diff(hz.value, {pi * pi / 2.0, 0.0}) < 1e-12);
    for (const cplx& s : {cplx(2, 0), cplx(3, 0), cplx(0.5, 2.0)}) {
        cplx lhs = critline::hurwitz_zeta(s, 0.5).value;
        cplx rhs = (std::pow(cplx(2.0, 0.0), s) - 1.0) * critline::zeta(s).value;
        CHECK(rel_diff(lhs, rhs) < 1e-11);
    }
}

TEST_CASE("hurwitz zeta gates") {
    CHECK_THROWS_AS(critline::hurwitz_zeta({1.0, 0.0}, 0.3), critline::pole_error);
    CHECK_THROWS_AS(critline::hurwitz_zeta({2.0, 0.0}, 0.0), critline::precondition_error);
    CHECK_THROWS_AS(critline::hurwitz_zeta({2.0, 0.0}, 1.5), critline::precondition_error);
    CHECK_THROWS_AS(critline::hurwitz_zeta({-80.0, 0.0}, 0.5),
                    critline::convergence_region_error);
    CHECK(std::isfinite(critline::hurwitz_zeta({-30.0, 0.5}, 0.5).abs_err));
}

TEST_CASE("L at s=2 for the odd character mod 4 matches the alternating series") {
    const auto& chi = odd_character_mod4();
    double partial = 0.0;
    for (int k = 999999; k >= 0; --k) {
        double term = 1.0 / ((2.0 * k + 1.0) * (2.0 * k + 1.0));
        partial += (k % 2 == 0) ? term : -term;
    }
    auto L = critline::l_function({2.0, 0.0}, chi);
    CHECK(std::abs(L.value.real() - partial) < 1e-10);
    CHECK(rel_diff(L.value, {0.91596559417721901505, 0.0}) < 1e-11);
}

TEST_CASE("L reduces to zeta at modulus 1") {
    CHECK(rel_diff(critline::l_function({2.0, 0.0}, character(1, 1)).value,
                   critline::zeta({2.0, 0.0}).value) < 1e-12);
}

TEST_CASE("principal L pole") {
    CHECK_THROWS_AS(critline::l_function({1.0, 0.0}, character(3, 1)), critline::pole_error);
    CHECK_THROWS_AS(critline::l_function({1.0, 1e-13}, character(3, 1)), critline::pole_error);
    CHECK(std::abs(critline::l_function({1.0 + 1e-9, 0.0}, character(3, 1)).value) > 1e8);
}

TEST_CASE("non-principal L is regular at s=1 with classical values") {
    auto l4 = critline::l_function({1.0, 0.0}, odd_character_mod4());
    CHECK(rel_diff(l4.value, {pi / 4.0, 0.0}) < 1e-10);
    auto l3 = critline::l_function({1.0, 0.0}, nonprincipal_mod3());
    CHECK(rel_diff(l3.value, {pi / (3.0 * std::sqrt(3.0)), 0.0}) < 1e-10);
}

TEST_CASE("L is smooth across the regularized window boundary") {
    const auto& chi = odd_character_mod4();
    for (double s0 : {0.76, 1.24}) {
        cplx a = critline::l_function({s0 - 0.011, 0.0}, chi).value;
        cplx b = critline::l_function({s0 + 0.011, 0.0}, chi).value;
        CHECK(std::abs(a - b) < 1e-2);
    }
    // independent series check inside the window (Re > 1 so the series converges)
    cplx direct(0.0, 0.0);
    for (int n = 2000000; n >= 1; --n)
        direct += odd_character_mod4().at(n) * std::pow(static_cast<double>(n), -1.1);
    CHECK(std::abs(critline::l_function({1.1, 0.0}, odd_character_mod4()).value - direct) < 1e-5);
}

TEST_CASE("direct series agreement for Re(s) > 1") {
    const auto& chi = character(5, 2);
    cplx s{2.5, 0.0};
    cplx direct(0.0, 0.0);
    for (int n = 100000; n >= 1; --n)
        direct += chi.at(n) * std::pow(static_cast<double>(n), -2.5);
    CHECK(std::abs(critline::l_function(s, chi).value - direct) < 1e-7);
}

TEST_CASE("gauss sums") {
    auto g1 = critline::gauss_sum(character(1, 1));
    CHECK(std::abs(g1.magnitude - 1.0) < 1e-12);

    auto g4 = critline::gauss_sum(odd_character_mod4());
    CHECK(std::abs(g4.magnitude - 2.0) < 1e-12);
    CHECK(std::abs(g4.raw - cplx(0.0, 2.0)) < 1e-12);
    CHECK(std::abs(g4.theta - pi / 2.0) < 1e-12);
    CHECK(std::abs(g4.theta_prime) < 1e-12);

    auto g3 = critline::gauss_sum(nonprincipal_mod3());
    CHECK(std::abs(g3.raw - cplx(0.0, std::sqrt(3.0))) < 1e-12);

    auto g4p = critline::gauss_sum(character(4, 1)); // imprimitive: magnitude is not sqrt(q)
    CHECK(g4p.magnitude < 1e-12);
}

TEST_CASE("gauss sum magnitude is sqrt(q) for every primitive character") {
    for (int q = 1; q <= 50; ++q) {
        for (const auto& chi : critline::enumerate_characters(q)) {
            if (!chi.primitive) continue;
            auto g = critline::gauss_sum(chi);
            CHECK(std::abs(g.magnitude - std::sqrt(static_cast<double>(q))) <
                  1e-9 * std::sqrt(static_cast<double>(q)));
        }
    }
}

TEST_CASE("completed Lambda composition") {
    CHECK(critline::lambda_completed({2.0, 0.5}, character(1, 1)).value ==
          critline::completed_zeta({2.0, 0.5}).value);
    CHECK_THROWS_AS(critline::lambda_completed({2.0, 0.0}, character(4, 1)),
                    critline::precondition_error);

    // even character: exponent reduces to s/2
    const auto& even5 = [&]() -> const DirichletCharacter& {
        for (const auto& chi : critline::enumerate_characters(5)) {
            if (!chi.is_principal() && chi.parity == 0) return chi;
        }
        throw std::runtime_error("expected an even character mod 5");
    }();
    cplx s{1.3, 0.7};
    cplx manual = std::exp(0.5 * s * std::log(5.0 / pi)) *
                  critline::complex_gamma(0.5 * s).value *
                  critline::l_function(s, even5).value;
    CHECK(rel_diff(critline::lambda_completed(s, even5).value, manual) < 1e-12);
}

TEST_CASE("functional equation residuals at pinned points") {
    for (const auto& chi : critline::enumerate_characters(5)) {
        if (!chi.primitive) continue;
        CHECK(critline::functional_residual_L({0.3, 2.0}, chi) < 1e-8);
    }
    CHECK(critline::functional_residual_L({0.4, 1.0}, nonprincipal_mod3()) < 1e-8);
    CHECK(critline::functional_residual_L({0.5, 0.0}, nonprincipal_mod3()) < 1e-9);
    CHECK_THROWS_AS(critline::functional_residual_L({0.4, 1.0}, character(4, 1)),
                    critline::not_primitive_error);
}

TEST_CASE("functional equation residual grid over primitive characters") {
    for (int q = 1; q <= 20; ++q) {
        for (const auto& chi : critline::enumerate_characters(q)) {
            if (!chi.primitive) continue;
            for (double sigma : {0.2, 0.5, 0.8}) {
                for (double t : {0.0, 1.0, 5.0}) {
                    CHECK(critline::functional_residual_L({sigma, t}, chi) < 1e-8);
                }
            }
        }
    }
}

TEST_CASE("line function realness") {
    auto f3 = critline::f_real_chi(0.0, nonprincipal_mod3());
    CHECK(std::abs(f3.value.imag()) / std::abs(f3.value) < 1e-9);
    auto f4 = critline::f_real_chi(5.0, odd_character_mod4());
    CHECK(std::abs(f4.value.imag()) / std::abs(f4.value) < 1e-8);
    CHECK_THROWS_AS(critline::f_real_chi(1.0, character(4, 1)), critline::not_primitive_error);

    for (int q = 1; q <= 12; ++q) {
        for (const auto& chi : critline::enumerate_characters(q)) {
            if (!chi.primitive) continue;
            for (int t = 0; t <= 20; ++t) {
                auto f = critline::f_real_chi(static_cast<double>(t), chi);
                CHECK(std::abs(f.value.imag()) / std::abs(f.value) < 1e-8);
            }
        }
    }
}

TEST_CASE("line function supports sign-change scanning") {
    auto brackets = critline::scan_l_sign_changes(odd_character_mod4(), 0.0, 15.0, 0.05);
    CHECK(brackets.size() >= 1);
    auto dense = critline::scan_l_sign_changes(odd_character_mod4(), 0.0, 15.0, 0.01);
    CHECK(dense.size() == brackets.size());
    auto rec = critline::refine_l_zero(odd_character_mod4(), brackets[0], 1e-8);
    auto fv = critline::f_real_chi(rec.t, odd_character_mod4());
    CHECK(std::abs(fv.value.real()) < 1e-6);
}

TEST_CASE("principal identity audit: euler route") {
    auto a6 = critline::principal_identity_audit({2.0, 0.0}, 6);
    CHECK(a6.residual_euler < 1e-10);
    auto a2 = critline::principal_identity_audit({3.0, 0.0}, 2);
    CHECK(rel_diff(a2.via_euler, (1.0 - std::pow(2.0, -3.0)) * critline::zeta({3.0, 0.0}).value) <
          1e-13);
    CHECK(a2.residual_euler < 1e-10);

    for (int q = 2; q <= 50; ++q) {
        for (const cplx& s : {cplx(2, 0), cplx(3, 0), cplx(0.5, 2.0)}) {
            CHECK(critline::principal_identity_audit(s, q).residual_euler < 1e-9);
        }
    }
}

TEST_CASE("principal identity audit: printed route findings") {
    // prime modulus: the printed bracket cancels to zero exactly
    auto a2 = critline::principal_identity_audit({2.0, 0.0}, 2);
    CHECK(std::abs(a2.via_printed) < 1e-13);
    CHECK(a2.residual_printed > 0.5);

    // squarefree with two prime factors and squares of primes both agree
    CHECK(critline::principal_identity_audit({2.0, 0.0}, 6).residual_printed < 1e-9);
    CHECK(critline::principal_identity_audit({2.0, 0.0}, 4).residual_printed < 1e-9);
    CHECK(critline::principal_identity_audit({0.5, 2.0}, 15).residual_printed < 1e-9);
    CHECK(critline::principal_identity_audit({3.0, 0.0}, 9).residual_printed < 1e-9);

    // higher prime powers and three prime factors disagree
    CHECK(critline::principal_identity_audit({2.0, 0.0}, 8).residual_printed > 0.1);
    CHECK(critline::principal_identity_audit({2.0, 0.0}, 30).residual_printed > 0.1);

    CHECK_THROWS_AS(critline::principal_identity_audit({2.0, 0.0}, 1),
                    critline::precondition_error);
    CHECK_THROWS_AS(critline::principal_identity_audit({1.0, 0.0}, 6), critline::pole_error);
}

TEST_CASE("log-derivative audit for the odd character mod 4") {
    auto a0 = critline::b_chi_audit(odd_character_mod4(), 0);
    CHECK(a0.gap == std::abs(a0.derivative_ratio));
    CHECK(std::abs(a0.derivative_ratio.imag()) < 1e-8);

    auto a5 = critline::b_chi_audit(odd_character_mod4(), 5);
    auto a10 = critline::b_chi_audit(odd_character_mod4(), 10);
    auto a20 = critline::b_chi_audit(odd_character_mod4(), 20);
    CHECK(a5.gap < a0.gap);
    CHECK(a10.gap < a5.gap);
    CHECK(a20.gap < a10.gap);
    CHECK(a20.gap < 0.05);
    CHECK(a20.max_ordinate > a10.max_ordinate);
    CHECK(a20.tail_estimate < a10.tail_estimate);
}

TEST_CASE("log-derivative audit gates and odd mod 3") {
    auto a = critline::b_chi_audit(nonprincipal_mod3(), 10);
    CHECK(std::isfinite(a.gap));
    CHECK(a.gap < 0.1);

    CHECK_THROWS_AS(critline::b_chi_audit(character(4, 1), 5), critline::not_primitive_error);

    // even primitive characters have L(0) = 0 and are rejected
    bool found_even = false;
    for (const auto& chi : critline::enumerate_characters(5)) {
        if (chi.is_principal() || chi.parity != 0) continue;
        found_even = true;
        CHECK_THROWS_AS(critline::b_chi_audit(chi, 5), critline::precondition_error);
    }
    CHECK(found_even);
}
