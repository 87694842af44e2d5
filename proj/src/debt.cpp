#include "igi/debt.hpp"

#include <algorithm>
#include <cmath>

#include "igi/numerics.hpp"

namespace igi {

double omega_to_debt(double share, double omega) {
    return (std::exp(omega) - 1.0 + share) / share;
}

double debt_to_omega(double share, double debt) {
    return std::log(1.0 - share + share * debt);
}

double debt_limit(const EconomyParams& params) {
    EconomyParams p = params;
    p.check_and_normalize();
    const auto& e = p.endowments;
    const double beta = p.prefs.beta;
    auto f = [&](double d) {
        double acc = std::log(1.0 - d);
        for (int r = 0; r < e.size(); ++r)
            acc += beta * e.probs[r] *
                   (std::log(1.0 - e.shares[r] + e.shares[r] * d) - std::log(1.0 - e.shares[r]));
        return acc;
    };
    // exclude the trivial root d = 0: start the bracket where f is still positive
    double lo = 1e-6;
    if (f(lo) <= 0.0) throw NoNontrivialBound("debt limit: only the trivial root exists");
    return bisect(f, lo, 1.0 - 1e-12, 1e-15);
}

std::vector<double> DebtSystem::policy(double d) const {
    if (d < -1e-12 || d > d_max + 1e-12)
        throw DomainError("debt policy: d outside [0, d_max]");
    d = std::clamp(d, 0.0, d_max);
    const auto& sol = *sol_;
    const auto& e = sol.params.endowments;
    const double beta = sol.params.prefs.beta;
    const int I = e.size();

    std::vector<double> g(I);
    auto promises = [&](double mu) {
        for (int r = 0; r < I; ++r)
            g[r] = (mu <= 0.0) ? sol.omega0[r] : sol.promise_from_multiplier(r, mu);
    };
    auto pc = [&](double mu) {
        promises(mu);
        double acc = std::log(1.0 - d);
        for (int r = 0; r < I; ++r)
            acc += beta * e.probs[r] * (g[r] - std::log(1.0 - e.shares[r]));
        return acc;
    };
    double lo = 0.0, flo = pc(0.0);
    if (flo < 0.0) {
        double hi = 1.0, fhi = pc(hi);
        while (fhi < 0.0 && hi < sol.lambda_cap) {
            hi *= 2.0;
            fhi = pc(hi);
        }
        if (fhi < 0.0) {
            promises(hi);  // saturated at the working region's top
        } else {
            const double mu = bisect_with(pc, lo, hi, flo, fhi, 1e-14);
            promises(mu);
        }
    } else {
        promises(0.0);
    }
    std::vector<double> b(I);
    for (int r = 0; r < I; ++r) b[r] = omega_to_debt(e.shares[r], g[r]);
    return b;
}

double DebtSystem::bond_revenue(double d) const {
    const auto& e = sol_->params.endowments;
    const double beta = sol_->params.prefs.beta;
    const auto b = policy(d);
    double acc = 0.0;
    for (int r = 0; r < e.size(); ++r)
        acc += e.probs[r] * (1.0 - d) / (1.0 - e.shares[r] * (1.0 - b[r])) * e.shares[r] * b[r];
    return beta * acc;
}

double DebtSystem::fiscal_reaction(double d) const { return d - bond_revenue(d); }

DebtSystem build_debt_system(const PlannerSolution& sol, int grid_points) {
    DebtSystem sys;
    sys.sol_ = &sol;
    const auto& e = sol.params.endowments;
    const double beta = sol.params.prefs.beta;
    const int I = e.size();

    sys.d0.resize(I);
    for (int r = 0; r < I; ++r) sys.d0[r] = omega_to_debt(e.shares[r], sol.omega0[r]);
    sys.d_star = sol.fb.d_star;
    sys.d_min = *std::min_element(sys.d0.begin(), sys.d0.end());

    double acc = 0.0;
    for (int r = 0; r < I; ++r)
        acc += e.probs[r] * (std::log(1.0 - e.shares[r] + e.shares[r] * sys.d0[r]) -
                             std::log(1.0 - e.shares[r]));
    sys.d_c = 1.0 - std::exp(-beta * acc);
    sys.d_max = debt_limit(sol.params);

    // fixed points of the policy maps
    sys.d_f.resize(I);
    for (int r = 0; r < I; ++r) {
        auto F = [&](double d) { return sys.policy(d)[r] - d; };
        if (sys.d0[r] <= 1e-14) {
            sys.d_f[r] = 0.0;
            continue;
        }
        double hi = sys.d_max * (1.0 - 1e-9), lo = 0.0;
        if (F(hi) >= 0.0) {
            sys.d_f[r] = sys.d_max;  // bound case: min{d*, d_max} = d_max
            continue;
        }
        sys.d_f[r] = bisect(F, lo, hi, 1e-14);
    }

    // tabulated curves
    sys.d_grid.resize(grid_points);
    sys.b_table.assign(I, std::vector<double>(grid_points));
    sys.br_table.resize(grid_points);
    sys.tau_table.resize(grid_points);
    for (int k = 0; k < grid_points; ++k) {
        const double d = sys.d_max * k / (grid_points - 1);
        sys.d_grid[k] = d;
        const auto b = sys.policy(d);
        for (int r = 0; r < I; ++r) sys.b_table[r][k] = b[r];
        double br = 0.0;
        for (int r = 0; r < I; ++r)
            br += e.probs[r] * (1.0 - d) / (1.0 - e.shares[r] * (1.0 - b[r])) * e.shares[r] * b[r];
        sys.br_table[k] = beta * br;
        sys.tau_table[k] = d - sys.br_table[k];
    }

    // balanced budget: tau is negative at zero debt (bond revenue is positive)
    if (sys.tau_table.front() < 0.0 && sys.tau_table.back() > 0.0) {
        sys.d_bal = bisect([&](double d) { return sys.fiscal_reaction(d); }, 0.0,
                           sys.d_max * (1.0 - 1e-12), 1e-14);
    }
    return sys;
}

}  // namespace igi
