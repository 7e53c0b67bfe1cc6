#include <catch_amalgamated.hpp>

#include <cmath>

#include "comp_isac/errors.hpp"
#include "comp_isac/specfun.hpp"
#include "support/oracles.hpp"

using namespace comp_isac::specfun;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

// Reference values computed once with 40-digit mpmath and frozen here.
namespace frozen {
constexpr double q3_3_5 = 0.087345798309451251;
constexpr double gamma3_5 = 0.12465201948308114;
constexpr double q2_30_305 = 0.32620989874920469;
constexpr double delta_l3_1e6 = 19.129168188604843;
constexpr double delta_l3_1e3 = 11.228872242412663;
constexpr double q1_1_1 = 0.73287980379682022;
constexpr double a_l3_p07 = 6.3078145955826640;
constexpr double a_l1_b1_p09 = 1.8702800674294957;
}  // namespace frozen

TEST_CASE("ln_gamma matches factorials and the half-integer value")
{
    CHECK_THAT(ln_gamma(1.0), WithinAbs(0.0, 1e-14));
    CHECK_THAT(ln_gamma(5.0), WithinRel(std::log(24.0), 1e-14));
    CHECK_THAT(ln_gamma(0.5), WithinRel(0.5 * std::log(M_PI), 1e-13));
    CHECK_THAT(ln_gamma(171.5), WithinRel(std::lgamma(171.5), 1e-13));
    CHECK_THROWS_AS(ln_gamma(0.0), comp_isac::DomainError);
}

TEST_CASE("upper incomplete gamma, trivial values")
{
    CHECK(upper_gamma_regularized(1, 0.0) == 1.0);
    CHECK_THAT(upper_gamma_regularized(1, 1.0), WithinAbs(std::exp(-1.0), 1e-15));
    CHECK_THAT(upper_gamma_regularized(2, 1.0), WithinAbs(2.0 * std::exp(-1.0), 1e-15));
    CHECK(upper_gamma_regularized(3, 1e4) == 0.0);
    CHECK_THROWS_AS(upper_gamma_regularized(0, 1.0), comp_isac::DomainError);
    CHECK_THROWS_AS(upper_gamma_regularized(2, -1.0), comp_isac::DomainError);
}

TEST_CASE("upper incomplete gamma agrees with the naive finite sum")
{
    for (int order : {1, 2, 3, 5, 8, 20}) {
        for (double x : {0.01, 0.5, 1.0, 3.0, 7.5, 15.0, 30.0, 60.0}) {
            CHECK_THAT(upper_gamma_regularized(order, x),
                       WithinAbs(oracle::upper_gamma_sum(order, x), 1e-14));
        }
    }
}

TEST_CASE("upper incomplete gamma inverse")
{
    CHECK_THAT(inv_upper_gamma_regularized(1, std::exp(-1.0)), WithinRel(1.0, 1e-13));
    CHECK_THAT(inv_upper_gamma_regularized(3, frozen::gamma3_5), WithinRel(5.0, 1e-12));
    CHECK_THAT(inv_upper_gamma_regularized(3, 1e-6), WithinRel(frozen::delta_l3_1e6, 1e-12));
    CHECK_THAT(inv_upper_gamma_regularized(3, 1e-3), WithinRel(frozen::delta_l3_1e3, 1e-12));
    for (int order : {1, 2, 3, 5}) {
        for (double p : {1e-10, 1e-6, 1e-3, 0.1, 0.5, 0.9, 0.999}) {
            const double x = inv_upper_gamma_regularized(order, p);
            CHECK_THAT(x, WithinRel(oracle::inv_upper_gamma_bisect(order, p), 1e-10));
            CHECK_THAT(upper_gamma_regularized(order, x), WithinRel(p, 1e-10));
        }
    }
    CHECK_THROWS_AS(inv_upper_gamma_regularized(3, 0.0), comp_isac::DomainError);
    CHECK_THROWS_AS(inv_upper_gamma_regularized(3, 1.0), comp_isac::DomainError);
}

TEST_CASE("Marcum-Q trivial and frozen values")
{
    CHECK(marcum_q(3, 1.0, 0.0) == 1.0);
    CHECK_THAT(marcum_q(3, 0.0, std::sqrt(2.0 * frozen::delta_l3_1e6)), WithinRel(1e-6, 1e-9));
    CHECK_THAT(marcum_q(1, 1.0, 1.0), WithinAbs(frozen::q1_1_1, 1e-14));
    CHECK_THAT(marcum_q(3, 3.0, 5.0), WithinAbs(frozen::q3_3_5, 1e-14));
    // a = 0 reduces to the central tail for every order.
    for (int order : {1, 2, 4}) {
        CHECK_THAT(marcum_q(order, 0.0, 2.0), WithinAbs(upper_gamma_regularized(order, 2.0), 1e-15));
    }
    CHECK_THROWS_AS(marcum_q(0, 1.0, 1.0), comp_isac::DomainError);
    CHECK_THROWS_AS(marcum_q(1, -1.0, 1.0), comp_isac::DomainError);
}

TEST_CASE("Marcum-Q against the quadrature oracle")
{
    for (int order : {1, 2, 3, 5}) {
        for (double a = 0.1; a <= 5.0 + 1e-9; a += 0.7) {
            for (double b = 0.1; b <= 5.0 + 1e-9; b += 0.7) {
                CHECK_THAT(marcum_q(order, a, b), WithinAbs(oracle::marcum_q_quadrature(order, a, b), 1e-10));
            }
        }
    }
}

TEST_CASE("Marcum-Q satisfies the order recurrence")
{
    // Q_{L+1}(a,b) - Q_L(a,b) = (b/a)^L e^{-(a^2+b^2)/2} I_L(ab)
    for (int order : {1, 2, 3, 6}) {
        for (double a : {0.5, 2.0, 4.0}) {
            for (double b : {0.5, 3.0, 6.0}) {
                const double lhs = marcum_q(order + 1, a, b) - marcum_q(order, a, b);
                const double rhs = std::pow(b / a, order) * std::exp(-(a * a + b * b) / 2.0) *
                                   std::cyl_bessel_i(static_cast<double>(order), a * b);
                CHECK_THAT(lhs, WithinAbs(rhs, 1e-13));
            }
        }
    }
}

TEST_CASE("Marcum-Q is monotone in a and b")
{
    double previous = 0.0;
    for (double a = 0.0; a < 15.0; a += 0.25) {
        const double q = marcum_q(3, a, 6.0);
        CHECK(q >= previous - 1e-13);  // rounding once the tail is within 1e-13 of one
        previous = q;
    }
    previous = 1.0;
    for (double b = 0.0; b < 15.0; b += 0.25) {
        const double q = marcum_q(2, 3.0, b);
        CHECK(q <= previous);
        previous = q;
    }
}

TEST_CASE("Marcum-Q handles large noncentrality")
{
    // Far into the bulk the tail is ~1, well below it ~0.
    CHECK_THAT(marcum_q(3, 60.0, 10.0), WithinAbs(1.0, 1e-14));
    CHECK(marcum_q(3, 10.0, 60.0) < 1e-100);
    CHECK_THAT(marcum_q(2, 30.0, 30.5), WithinAbs(frozen::q2_30_305, 1e-12));
}

TEST_CASE("Marcum-Q inverse in a")
{
    CHECK_THAT(inv_marcum_q_a(3, 5.0, frozen::q3_3_5), WithinRel(3.0, 1e-10));
    const double b = std::sqrt(2.0 * frozen::delta_l3_1e6);
    CHECK_THAT(inv_marcum_q_a(3, b, 0.7), WithinRel(frozen::a_l3_p07, 1e-10));
    CHECK_THAT(inv_marcum_q_a(1, 1.0, 0.9), WithinRel(frozen::a_l1_b1_p09, 1e-10));
    for (int order : {1, 2, 3, 5}) {
        for (double bb : {0.5, 2.0, 5.0}) {
            for (double p : {0.5, 0.9, 0.99, 0.999999}) {
                if (p <= marcum_q(order, 0.0, bb)) continue;
                const double a = inv_marcum_q_a(order, bb, p);
                CHECK_THAT(marcum_q(order, a, bb), WithinAbs(p, 1e-10));
            }
        }
    }
    CHECK_THROWS_AS(inv_marcum_q_a(3, 1.0, 0.5), comp_isac::InfeasibleError);
    CHECK_THROWS_AS(inv_marcum_q_a(3, 5.0, 1.0), comp_isac::DomainError);
}
