#pragma once

#include <vector>

#include "igi/economy.hpp"

namespace igi {

// Full-enforcement benchmark: consumption shares of the young are constant at
// min{delta/(beta+delta), s}; used both as the solver's starting frontier and
// as an oracle for pricing and welfare.
struct FirstBest {
    std::vector<double> c_star;      // per state
    std::vector<double> omega_star;  // max{log(1-s), log(beta/(beta+delta))}
    std::vector<double> v_star;      // planner per-period payoff
    double v_bar = 0.0;              // pi-weighted v_star
    double V_bar = 0.0;              // v_bar / (1 - delta)
    std::vector<double> d_star;      // 1 - c_star/s

    double beta = 0.0, delta = 0.0;

    // V*(s, omega): flat up to omega_star(s), then (beta/delta) omega + log(1-e^omega) + delta V_bar
    double value(int s, double omega) const;
    double value_derivative(int s, double omega) const;
};

FirstBest first_best(const EconomyParams& params);

// No-risk economy with a single share s. The policy has a flat section at
// omega_star and a strictly increasing branch above the critical promise.
struct DeterministicSolution {
    double s = 0.0, beta = 0.0, delta = 0.0;
    double upsilon_hat = 0.0;
    double c_min = 0.0;          // lowest stationary sustainable share of the young
    double omega_min = 0.0;      // log(1-s)
    double omega_max = 0.0;      // log(1-c_min)
    double omega_star = 0.0;     // log(beta/(beta+delta))
    double omega_c = 0.0;        // critical promise
    double c_star = 0.0;         // delta/(beta+delta)
    bool first_best_sustainable = false;  // c_star > c_min

    double policy(double omega) const;  // g(omega)
    double value(double omega) const;   // lazy ladder evaluation
    // Path of promises from omega0 until it hits the stationary point; includes
    // both endpoints. Throws NumericalError if the start is omega_max exactly
    // (the promise then never falls).
    std::vector<double> descend(double omega0, int max_steps = 100000) const;
};

// Requires the Samuelson condition s > 1/(1+beta); otherwise autarky is the
// only stationary arrangement and an AssumptionViolation is thrown.
DeterministicSolution deterministic_solve(double share, const Preferences& prefs);

}  // namespace igi
