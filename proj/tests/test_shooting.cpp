#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "igi/numerics.hpp"
#include "igi/shooting.hpp"

using namespace igi;
using igi::testing::two_state;

namespace {

// Residual of the limiting binding constraint (independent oracle for nu_inf).
double d2_residual(const EconomyParams& p, double nu) {
    const double b = p.prefs.beta, d = p.prefs.delta, pi = p.endowments.probs[0];
    const double s1 = p.endowments.shares[0], s2 = p.endowments.shares[1];
    const double ups2 =
        std::log(s2) + b * (pi * std::log(1.0 - s1) + (1.0 - pi) * std::log(1.0 - s2));
    return std::log(d / (b + d)) +
           b * (pi * std::log(b * nu / (b * nu + d)) + (1.0 - pi) * std::log(b / (b + d))) -
           ups2;
}

// Residual of the binding constraint along the ladder at rung n.
double d1_residual(const EconomyParams& p, const NuLadder& lad, int n) {
    const double b = p.prefs.beta, d = p.prefs.delta, pi = p.endowments.probs[0];
    const double s1 = p.endowments.shares[0], s2 = p.endowments.shares[1];
    const double ups2 =
        std::log(s2) + b * (pi * std::log(1.0 - s1) + (1.0 - pi) * std::log(1.0 - s2));
    const double nm = lad.nu_at(n - 1), nc = lad.nu_at(n), nn = lad.nu_at(n + 1);
    return std::log(d * nc / (b * nm + d * nc)) +
           b * (pi * std::log(b * nc / (b * nc + d)) +
                (1.0 - pi) * std::log(b * nc / (b * nc + d * nn))) -
           ups2;
}

}  // namespace

TEST_CASE("nu_infinity satisfies the limiting constraint") {
    auto p = two_state();
    const double ninf = nu_infinity(p);
    CHECK(std::fabs(d2_residual(p, ninf)) < 1e-12);
    // closed form against direct bisection of the limiting constraint
    const double root = bisect([&](double v) { return d2_residual(p, v); }, 1.0, 10.0, 1e-13);
    CHECK(ninf == doctest::Approx(root).epsilon(1e-10));
    CHECK(ninf == doctest::Approx(1.459028126474).epsilon(1e-9));
}

TEST_CASE("shooting ladder") {
    auto p = two_state();
    auto lad = shoot(p);
    REQUIRE(lad.rungs >= 20);
    CHECK(std::fabs(lad.nu.back() - lad.nu_inf) < 1e-10);

    SUBCASE("first rung at beta = delta") {
        CHECK(lad.c1[0] == doctest::Approx(0.5).epsilon(1e-12));  // delta/(beta+delta)
        CHECK(lad.nu0 == doctest::Approx(1.15980584).epsilon(1e-6));
    }
    SUBCASE("binding constraint holds along the ladder") {
        for (int n = 0; n + 1 < lad.rungs; ++n)
            CHECK(std::fabs(d1_residual(p, lad, n)) < 1e-8);
    }
    SUBCASE("monotone ladders") {
        for (int n = 1; n < lad.rungs; ++n) {
            CHECK(lad.nu_at(n) >= lad.nu_at(n - 1) - 1e-12);
            CHECK(lad.c2[n] <= lad.c2[n - 1] + 1e-9);
        }
        CHECK(lad.c2[0] == doctest::Approx(0.53699542).epsilon(1e-6));
    }
    SUBCASE("state-2 consumption approaches the first-best share") {
        CHECK(lad.c2.back() == doctest::Approx(0.5).epsilon(1e-8));
        CHECK(lad.d2.back() == doctest::Approx(1.0 - 0.5 / 0.7).epsilon(1e-7));
    }
    SUBCASE("perturbed starts leave the saddle path") {
        const double tol = 1e-10;
        for (double s0 : {lad.nu0 + 10 * tol, lad.nu0 - 10 * tol}) {
            double prev = 1.0, cur = s0;
            bool diverged = false;
            for (int k = 0; k < 200; ++k) {
                const double nxt = nu_step(p, lad.nu_inf, prev, cur);
                prev = cur;
                cur = nxt;
                if (!std::isfinite(cur) || cur <= 0.9 || cur > lad.nu_inf + 1e-4) {
                    diverged = true;
                    break;
                }
            }
            CHECK(diverged);
        }
    }
}

TEST_CASE("closed-form bound matches the ladder limit") {
    auto p = two_state();
    auto cu = chi_upsilon(p);
    CHECK(cu.chi == doctest::Approx(0.593335273707).epsilon(1e-9));
    CHECK(cu.upsilon == doctest::Approx(std::log(nu_infinity(p))).epsilon(1e-12));
    CHECK(cu.upsilon == doctest::Approx(0.377770547267).epsilon(1e-9));
    // beta = delta: the discount-ratio term vanishes
    CHECK(cu.upsilon == doctest::Approx(-std::log(1.0 / cu.chi - 1.0)).epsilon(1e-12));
}

TEST_CASE("small risk makes the first best sustainable and the bound zero") {
    // kappa = 3/5 with epsilon = 0.01 (below the critical spread)
    EconomyParams p;
    p.endowments.shares = {0.59, 0.61};
    p.endowments.probs = {0.5, 0.5};
    p.prefs.beta = p.prefs.delta = std::exp(-1.0 / 75.0);
    auto cu = chi_upsilon(p);
    CHECK(cu.upsilon == 0.0);
}

TEST_CASE("tightness checks for the debt ladder assumptions") {
    auto p = two_state();
    auto lad = shoot(p);
    auto rep = check_assumption5(p, lad);
    CHECK(rep.pass);
    CHECK(rep.d_star2 == doctest::Approx(1.0 - 0.5 / 0.7).epsilon(1e-12));
    CHECK(rep.margin_limit > 0.0);
    CHECK(rep.margin_reset > 0.0);
    CHECK(rep.b1_at_dstar2 == doctest::Approx(0.1866705474).epsilon(1e-8));
    CHECK(rep.d_c == doctest::Approx(0.192734).epsilon(1e-4));
}

TEST_CASE("degenerate spread keeps debts inside the bounds") {
    EconomyParams p;
    p.endowments.shares = {0.6 - 1e-9, 0.6 + 1e-9};
    p.endowments.probs = {0.5, 0.5};
    p.prefs.beta = p.prefs.delta = std::exp(-1.0 / 75.0);
    // first best is sustainable here; the bound collapses to zero
    CHECK(chi_upsilon(p).upsilon == 0.0);
}
