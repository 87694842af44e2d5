#include <doctest.h>

#include <cmath>
#include <vector>

#include "helpers.hpp"
#include "igi/numerics.hpp"
#include "igi/planner.hpp"
#include "igi/shooting.hpp"

using namespace igi;
using igi::testing::three_state;
using igi::testing::two_state;

namespace {

const PlannerSolution& solved_two_state() {
    static PlannerSolution sol = solve(igi::testing::two_state());
    return sol;
}

const PlannerSolution& solved_three_state() {
    static PlannerSolution sol = solve(igi::testing::three_state());
    return sol;
}

}  // namespace

TEST_CASE("solver converges quickly at the default tolerance") {
    const auto& sol = solved_two_state();
    CHECK(sol.sweeps <= 30);
    CHECK(sol.final_diff < 1e-6);
    CHECK(sol.grid.gp == 200);
}

TEST_CASE("contraction iterates start at the first-best frontier and fall") {
    auto p = two_state();
    SolveOptions opts;
    opts.gp = 60;
    opts.accelerate = false;
    opts.max_iters = 8;
    opts.tol = 0.0;  // force all 8 sweeps
    std::vector<std::vector<std::vector<double>>> iterates;
    opts.observer = [&](int, const std::vector<std::vector<double>>& V) {
        iterates.push_back(V);
    };
    try {
        solve(p, opts);
    } catch (const NumericalError&) {
        // tol = 0 never converges; the observer has captured the iterates
    }
    REQUIRE(iterates.size() >= 6);
    auto fb = first_best(p);
    auto a = autarky(p);
    for (int s = 0; s < 2; ++s) {
        auto nodes = chebyshev_nodes(a.omega_min[s], a.omega_max[s], 60);
        for (int k = 0; k < 60; ++k)
            CHECK(iterates[0][s][k] == doctest::Approx(fb.value(s, nodes[k])).epsilon(1e-12));
    }
    for (size_t n = 1; n < iterates.size(); ++n)
        for (int s = 0; s < 2; ++s)
            for (int k = 0; k < 60; ++k)
                CHECK(iterates[n][s][k] <= iterates[n - 1][s][k] + 1e-7);
}

TEST_CASE("non-convergence raises a diagnostic error") {
    auto p = two_state();
    SolveOptions opts;
    opts.gp = 60;
    opts.accelerate = false;
    opts.max_iters = 3;
    CHECK_THROWS_AS(solve(p, opts), NumericalError);
}

TEST_CASE("reset multipliers by state") {
    const auto& sol = solved_two_state();
    const auto lo = sol.policy(0, sol.omega0[0]);
    const auto hi = sol.policy(1, sol.omega0[1]);
    CHECK(lo.mu == doctest::Approx(0.0).epsilon(1e-10));
    CHECK(hi.mu > 0.0);
    // cross-solver oracle: the reset tightness matches the ladder's first rung
    auto lad = shoot(two_state());
    CHECK(hi.mu == doctest::Approx(lad.nu0 - 1.0).epsilon(1e-4));
}

TEST_CASE("consumption ladder matches the saddle path") {
    const auto& sol = solved_two_state();
    auto lad = shoot(two_state());
    // promises after n consecutive high states starting from the reset point
    double om = sol.policy(0, sol.omega0[0]).promises[1];
    for (int n = 0; n <= 10; ++n) {
        const auto pe = sol.policy(1, om);
        CHECK(std::fabs(pe.c - lad.c2[n]) < 1e-3);
        om = pe.promises[1];
    }
}

TEST_CASE("reset levels and orderings") {
    const auto& sol = solved_two_state();
    CHECK(sol.omega0[0] == doctest::Approx(sol.aut.omega_min[0]).epsilon(1e-10));
    CHECK(sol.omega0[1] < sol.omega0[0]);   // decreasing in the state
    CHECK(sol.c0[1] > sol.c0[0]);           // consumption at reset increases
    CHECK(sol.omega0[1] == doctest::Approx(-0.770022).epsilon(1e-4));
    CHECK(sol.omega_c > sol.omega0[0]);
    // inside the slack range of the lowest state every promise resets
    const double mid = 0.5 * (sol.omega0[0] + sol.omega_c);
    const auto pe = sol.policy(0, mid);
    CHECK(pe.mu == doctest::Approx(0.0));
    for (int r = 0; r < 2; ++r)
        CHECK(pe.promises[r] == doctest::Approx(sol.omega0[r]).epsilon(1e-12));
}

TEST_CASE("policies below the reset promise are flat") {
    const auto& sol = solved_three_state();
    const int s = 2;  // highest state has omega0 above omega_min
    REQUIRE(sol.omega0[s] > sol.omega_min(s) + 1e-4);
    const double w1 = sol.omega_min(s) + 0.1 * (sol.omega0[s] - sol.omega_min(s));
    const double w2 = sol.omega_min(s) + 0.6 * (sol.omega0[s] - sol.omega_min(s));
    const auto p1 = sol.policy(s, w1), p2 = sol.policy(s, w2);
    CHECK(p1.c == doctest::Approx(1.0 - std::exp(sol.omega0[s])).epsilon(1e-10));
    CHECK(p2.c == doctest::Approx(p1.c).epsilon(1e-12));
    for (int r = 0; r < 3; ++r)
        CHECK(p1.promises[r] == doctest::Approx(p2.promises[r]).epsilon(1e-12));
}

TEST_CASE("fixed points deliver first-best consumption when interior") {
    const auto& sol = solved_two_state();
    for (int s = 0; s < 2; ++s) {
        if (sol.omega_f[s] < sol.omega_max(s) - 1e-9) {
            const auto pe = sol.policy(s, sol.omega_f[s]);
            CHECK(pe.c == doctest::Approx(sol.fb.c_star[s]).epsilon(5e-6));
            CHECK(pe.promises[s] == doctest::Approx(sol.omega_f[s]).epsilon(5e-5));
        }
    }
}

TEST_CASE("policy monotonicity across states and promises") {
    const auto& sol = solved_three_state();
    const int I = 3;
    // promises increasing in the current promise; consumption decreasing
    for (int s = 0; s < I; ++s) {
        double prev_c = 2.0;
        std::vector<double> prev_g(I, -10.0);
        for (int k = 0; k < sol.grid.regular; k += 7) {
            CHECK(sol.c_pol[s][k] <= prev_c + 1e-9);
            prev_c = sol.c_pol[s][k];
            for (int r = 0; r < I; ++r) {
                CHECK(sol.g_pol[s][k][r] >= prev_g[r] - 1e-9);
                prev_g[r] = sol.g_pol[s][k][r];
            }
        }
    }
    // g_r increasing in the current state, decreasing in the next state
    bool strict_state = false, strict_next = false;
    for (double frac : {0.3, 0.5, 0.7, 0.9}) {
        for (int i = 1; i < I; ++i) {
            const double lo = std::max(sol.omega_min(i - 1), sol.omega_min(i));
            const double hi = std::min(sol.omega_max(i - 1), sol.omega_max(i));
            const double om = lo + frac * (hi - lo);
            const auto a = sol.policy(i - 1, om), b = sol.policy(i, om);
            for (int r = 0; r < I; ++r) {
                CHECK(b.promises[r] >= a.promises[r] - 1e-8);
                if (b.promises[r] > a.promises[r] + 1e-6) strict_state = true;
            }
        }
        for (int s = 0; s < I; ++s) {
            const double om = sol.omega_min(s) + frac * (sol.omega_max(s) - sol.omega_min(s));
            const auto pe = sol.policy(s, om);
            for (int r = 1; r < I; ++r) {
                CHECK(pe.promises[r] <= pe.promises[r - 1] + 1e-8);
                if (pe.promises[r] < pe.promises[r - 1] - 1e-6) strict_next = true;
            }
        }
    }
    CHECK(strict_state);
    CHECK(strict_next);
}

TEST_CASE("single crossing of the same-state promise map") {
    const auto& sol = solved_two_state();
    for (int s = 0; s < 2; ++s) {
        int sign_changes = 0;
        double prev = 0.0;
        for (int k = 0; k < sol.grid.regular; ++k) {
            const double gap = sol.g_pol[s][k][s] - sol.grid.nodes[s][k];
            if (std::fabs(gap) < 1e-10) continue;
            if (prev != 0.0 && (gap > 0) != (prev > 0)) ++sign_changes;
            prev = gap;
        }
        CHECK(sign_changes <= 1);
        // sign pattern: positive below the fixed point, negative above
        CHECK(sol.g_pol[s][0][s] - sol.grid.nodes[s][0] > -1e-10);
        CHECK(sol.g_pol[s][sol.grid.regular - 1][s] -
                  sol.grid.nodes[s][sol.grid.regular - 1] <
              1e-10);
    }
}

TEST_CASE("value tables are nonincreasing and concave") {
    const auto& sol = solved_three_state();
    for (int s = 0; s < 3; ++s) {
        const auto& x = sol.grid.nodes[s];
        const auto& v = sol.V[s];
        for (int k = 1; k < sol.grid.gp; ++k) CHECK(v[k] <= v[k - 1] + 1e-10);
        double prev_slope = 1e300;
        for (int k = 1; k < sol.grid.regular; ++k) {
            const double slope = (v[k] - v[k - 1]) / (x[k] - x[k - 1]);
            CHECK(slope <= prev_slope + 1e-8);
            prev_slope = slope;
        }
    }
}

TEST_CASE("first-order and envelope residuals at interior points") {
    const auto& sol = solved_two_state();
    const double beta = sol.params.prefs.beta, delta = sol.params.prefs.delta;
    for (int s = 0; s < 2; ++s) {
        for (double frac : {0.35, 0.55, 0.8}) {
            const double om =
                sol.omega0[s] + frac * (sol.grid.nodes[s][sol.grid.regular - 4] - sol.omega0[s]);
            const auto pe = sol.policy(s, om);
            // consumption condition
            const double want = std::min(
                delta * (1.0 + pe.mu) / (beta * (1.0 + pe.lambda) + delta * (1.0 + pe.mu)),
                sol.params.endowments.shares[s]);
            CHECK(std::fabs(pe.c - want) < 1e-6);
            // envelope
            CHECK(std::fabs(sol.value_derivative(s, om) + (beta / delta) * pe.lambda) < 1e-6);
            for (int r = 0; r < 2; ++r) {
                // promise condition
                const double lhs = sol.value_derivative(r, pe.promises[r]);
                const double rhs = -(beta / delta) * (pe.mu - pe.xi[r] + pe.eta[r]);
                CHECK(std::fabs(lhs - rhs) < 1e-6);
                // updating rule: next period's promise-keeping multiplier
                const auto nxt = sol.policy(r, pe.promises[r]);
                CHECK(std::fabs(nxt.lambda - (pe.mu - pe.xi[r] + pe.eta[r])) < 1e-6);
            }
        }
    }
}

TEST_CASE("initial promise selection") {
    const auto& sol = solved_two_state();
    CHECK(initial_promise(sol, 0, std::nullopt) == doctest::Approx(sol.omega0[0]));
    CHECK(initial_promise(sol, 0, sol.omega_min(0)) == doctest::Approx(sol.omega0[0]));
    const double target = 0.5 * (sol.omega0[0] + sol.omega_max(0));
    CHECK(initial_promise(sol, 0, target) == doctest::Approx(target));
    CHECK_THROWS_AS(initial_promise(sol, 0, sol.omega_max(0) + 0.1), InfeasibleTarget);
}

TEST_CASE("queries outside the promise domain fail") {
    const auto& sol = solved_two_state();
    CHECK_THROWS_AS(sol.policy(0, sol.omega_min(0) - 0.01), DomainError);
    CHECK_THROWS_AS(sol.value(1, 0.01), DomainError);
}

TEST_CASE("solver rejects invalid setups") {
    auto p = two_state();
    SolveOptions opts;
    opts.gp = 30;
    CHECK_THROWS_AS(solve(p, opts), InvalidParameters);
    EconomyParams bad = two_state();
    bad.endowments.shares = {0.05, 0.1};  // sustainability fails
    CHECK_THROWS_AS(solve(bad), AssumptionViolation);
}
