#pragma once

#include <optional>
#include <vector>

#include "igi/planner.hpp"

namespace igi {

// Debt is the transfer to the old relative to the endowment of the young:
// omega = log(1 - s + s d).
double omega_to_debt(double share, double omega);
double debt_to_omega(double share, double debt);

// Largest nontrivial root of
//   log(1 - d) + beta sum_r pi(r) (log(1 - r + r d) - log(1 - r)) = 0.
// Pure algebra on the primitives; d = 0 is the trivial root.
double debt_limit(const EconomyParams& params);

// Debt-space view of the planner solution. The debt policy is independent of
// the current endowment share: the participation constraint reads
//   log(1-d) + beta sum_r pi(r) (omega_r - log(1-r)) >= 0,
// so the multiplier, and hence the promises, depend on d only.
class DebtSystem {
public:
    std::vector<double> d0;      // reset debts by next-period state
    std::vector<double> d_star;  // first-best debts
    std::vector<double> d_f;     // fixed points of the policy maps
    double d_min = 0.0;
    double d_c = 0.0;    // flat-region threshold
    double d_max = 0.0;  // debt limit
    std::optional<double> d_bal;  // balanced-budget debt, tau(d_bal) = 0

    // grid tables for CSV output and downstream pricing
    std::vector<double> d_grid;
    std::vector<std::vector<double>> b_table;  // [r][k]
    std::vector<double> br_table, tau_table;

    // b_r(d) for every r, via the scalar multiplier root. Throws DomainError
    // outside [0, d_max].
    std::vector<double> policy(double d) const;
    double policy(double d, int r) const { return policy(d)[r]; }

    double bond_revenue(double d) const;    // BR(d), independent of s
    double fiscal_reaction(double d) const; // tau(d) = d - BR(d)

    const PlannerSolution* solution() const { return sol_; }

private:
    friend DebtSystem build_debt_system(const PlannerSolution&, int);
    const PlannerSolution* sol_ = nullptr;
};

DebtSystem build_debt_system(const PlannerSolution& sol, int grid_points = 2000);

}  // namespace igi
