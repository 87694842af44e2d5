#include "igi/benchmarks.hpp"

#include <cmath>

#include "igi/numerics.hpp"

namespace igi {

double FirstBest::value(int s, double omega) const {
    if (omega <= omega_star[s]) return v_star[s] + delta * V_bar;
    return (beta / delta) * omega + std::log1p(-std::exp(omega)) + delta * V_bar;
}

double FirstBest::value_derivative(int s, double omega) const {
    if (omega < omega_star[s]) return 0.0;
    const double e = std::exp(omega);
    return beta / delta - e / (1.0 - e);
}

FirstBest first_best(const EconomyParams& params) {
    EconomyParams p = params;
    p.check_and_normalize();
    const auto& e = p.endowments;
    const double beta = p.prefs.beta, delta = p.prefs.delta;
    const int n = e.size();

    FirstBest fb;
    fb.beta = beta;
    fb.delta = delta;
    fb.c_star.resize(n);
    fb.omega_star.resize(n);
    fb.v_star.resize(n);
    fb.d_star.resize(n);
    const double cbar = delta / (beta + delta);
    const double omega_bar = std::log(beta / (beta + delta));
    for (int s = 0; s < n; ++s) {
        fb.c_star[s] = std::min(cbar, e.shares[s]);
        fb.omega_star[s] = std::max(std::log(1.0 - e.shares[s]), omega_bar);
        fb.v_star[s] = std::log(fb.c_star[s]) + (beta / delta) * std::log(1.0 - fb.c_star[s]);
        fb.d_star[s] = 1.0 - fb.c_star[s] / e.shares[s];
        fb.v_bar += e.probs[s] * fb.v_star[s];
    }
    fb.V_bar = fb.v_bar / (1.0 - delta);
    return fb;
}

DeterministicSolution deterministic_solve(double share, const Preferences& prefs) {
    prefs.check();
    if (!(share > 0.0 && share < 1.0))
        throw InvalidParameters("deterministic_solve: share must lie in (0,1)");
    const double beta = prefs.beta, delta = prefs.delta;
    if (!(share > 1.0 / (1.0 + beta)))
        throw AssumptionViolation("deterministic economy: Samuelson condition fails, autarky only");

    DeterministicSolution d;
    d.s = share;
    d.beta = beta;
    d.delta = delta;
    d.upsilon_hat = std::log(share) + beta * std::log(1.0 - share);
    d.omega_min = std::log(1.0 - share);
    d.omega_star = std::log(beta / (beta + delta));
    d.c_star = delta / (beta + delta);

    // c_min is the root of log(c) + beta log(1-c) = upsilon_hat below the
    // trivial root c = s. The LHS peaks at c = 1/(1+beta) < s, so the bracket
    // (tiny, 1/(1+beta)) contains exactly one root.
    const double tiny = 1e-12;
    auto pc = [&](double c) { return std::log(c) + beta * std::log(1.0 - c) - d.upsilon_hat; };
    d.c_min = bisect(pc, tiny, 1.0 / (1.0 + beta), 1e-15);
    d.omega_max = std::log(1.0 - d.c_min);
    d.first_best_sustainable = d.c_star > d.c_min;

    const double omega_f = std::min(d.omega_star, d.omega_max);
    d.omega_c = std::log(1.0 - std::exp(d.upsilon_hat - beta * omega_f));
    return d;
}

double DeterministicSolution::policy(double omega) const {
    if (omega < omega_min - 1e-12 || omega > omega_max + 1e-12)
        throw DomainError("deterministic policy: promise outside [omega_min, omega_max]");
    const double omega_f = std::min(omega_star, omega_max);
    if (omega <= omega_c) return omega_f;
    return (upsilon_hat - std::log1p(-std::exp(omega))) / beta;
}

double DeterministicSolution::value(double omega) const {
    const double omega_f = std::min(omega_star, omega_max);
    const double v_point = std::log1p(-std::exp(omega_f)) + (beta / delta) * omega_f;
    double acc = 0.0, disc = 1.0;
    double w = omega;
    for (int t = 0; t < 100000; ++t) {
        if (w <= omega_f + 1e-15) return acc + disc * v_point / (1.0 - delta);
        acc += disc * (std::log1p(-std::exp(w)) + (beta / delta) * w);
        disc *= delta;
        w = policy(w);
    }
    throw NumericalError("deterministic value: ladder did not reach the stationary point");
}

std::vector<double> DeterministicSolution::descend(double omega0, int max_steps) const {
    const double omega_f = std::min(omega_star, omega_max);
    std::vector<double> path{omega0};
    double w = omega0;
    for (int t = 0; t < max_steps; ++t) {
        if (std::fabs(w - omega_f) < 1e-14) return path;
        const double next = policy(w);
        if (next >= w - 1e-15 && w > omega_f)
            throw NumericalError("deterministic descent: promise failed to fall");
        path.push_back(next);
        w = next;
    }
    throw NumericalError("deterministic descent: no convergence within step limit");
}

}  // namespace igi
