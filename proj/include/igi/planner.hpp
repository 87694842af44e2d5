#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <optional>
#include <vector>

#include "igi/benchmarks.hpp"
#include "igi/economy.hpp"
#include "igi/spline.hpp"

namespace igi {

struct SolveOptions {
    int gp = 200;            // interpolation nodes per state (>= 50)
    double tol = 1e-6;       // sup-norm between successive value iterates
    int max_iters = 500;
    double lambda_cap = 1e8; // cap on queried multipliers near omega_max
    double damping = 1.0;    // 1.0 = undamped sweeps
    int edge_nodes = -1;     // corner boundary-layer width; -1 picks max(2, gp/25)
    bool accelerate = true;  // policy-evaluation (Howard) sweeps after warmup
    int warmup_sweeps = 3;   // contraction sweeps before acceleration kicks in
    int threads = 0;         // 0 = hardware concurrency

    // Called after every sweep with (sweep index, per-state value tables).
    std::function<void(int, const std::vector<std::vector<double>>&)> observer{};
};

struct PromiseGrid {
    int gp = 0;
    int regular = 0;  // iterated nodes per state; the rest form the corner layer
    std::vector<std::vector<double>> nodes;
};

// Value interpolant of one state in three pieces: exactly flat left of the
// reset junction; closed form on the band where the participation constraint
// is slack (consumption tracks the promise, continuation is the reset value);
// a clamped-slope cubic spline above. The splits keep the curvature kinks at
// the regime boundaries out of the spline fit.
struct StateInterp {
    double junction = 0.0;  // reset promise
    double wc = 0.0;        // top of the slack band (= junction when empty)
    double flat = 0.0;      // value at the reset point
    double kcont = 0.0;     // delta * expected reset continuation
    double bod = 0.0;       // beta/delta
    int k_flat = 0;         // table node representing the flat value
    int k_start = 0;        // first table node used in the spline piece
    CubicSpline right;

    double band_value(double q) const {
        return bod * q + std::log1p(-std::exp(q)) + kcont;
    }
    double band_deriv(double q) const {
        const double e = std::exp(q);
        return bod - e / (1.0 - e);
    }
    double value(double q) const {
        if (q <= junction) return flat;
        if (q <= wc) return band_value(q);
        return right.value(q);
    }
    double deriv(double q) const {
        if (q <= junction) return 0.0;
        if (q <= wc) return band_deriv(q);
        return right.deriv(q);
    }
};

struct PolicyEval {
    double c = 0.0;
    std::vector<double> promises;  // omega_r' per next-period state
    double mu = 0.0;               // participation constraint of the young
    double lambda = 0.0;           // promise-keeping
    std::vector<double> xi;        // upper-bound multipliers
    std::vector<double> eta;       // lower-bound multipliers
};

// Value and policy tables of the recursive insurance problem plus the derived
// reset levels and fixed points. Immutable after solve(); safe to share.
class PlannerSolution {
public:
    EconomyParams params;
    AutarkyData aut;
    FirstBest fb;
    PromiseGrid grid;

    std::vector<std::vector<double>> V;      // [s][node]
    std::vector<std::vector<double>> c_pol;  // consumption policy at nodes
    std::vector<std::vector<double>> mu;     // participation multiplier at nodes
    std::vector<std::vector<double>> lam;    // promise-keeping multiplier at nodes
    std::vector<std::vector<std::vector<double>>> g_pol;  // [s][node][r]

    std::vector<double> omega0;   // reset promises
    std::vector<double> mu0;      // participation multiplier at the reset point
    std::vector<double> c0;       // f(s, omega0(s))
    std::vector<double> omega_f;  // fixed points min{omega*, omega_max}
    double omega_c = 0.0;         // largest omega with mu(lowest state, omega) = 0

    int sweeps = 0;
    double final_diff = 0.0;
    std::vector<double> diff_history;
    double lambda_cap = 1e8;

    double omega_min(int s) const { return aut.omega_min[s]; }
    double omega_max(int s) const { return aut.omega_max[s]; }
    int n_states() const { return params.n_states(); }

    double value(int s, double omega) const;
    double value_derivative(int s, double omega) const;

    // Re-solves the node problem at an arbitrary admissible promise.
    PolicyEval policy(int s, double omega) const;

    // Inverse of the promise first-order condition: the omega at which the
    // (scaled) value derivative equals mu, clamped to the working region.
    double promise_from_multiplier(int r, double mu) const;

    // Rebuilds interpolation caches from the tables (used after deserializing).
    void rebuild_caches();

private:
    friend PlannerSolution solve(const EconomyParams&, const SolveOptions&);
    std::vector<StateInterp> interp_;          // flat-junction split interpolants
    std::vector<std::array<double, 8>> fill_;  // corner-layer hermite pieces
};

PlannerSolution solve(const EconomyParams& params, const SolveOptions& opts = {});

PolicyEval policy_eval(const PlannerSolution& sol, int s, double omega);

// max{omega0(s0), target}; throws InfeasibleTarget when the target exceeds
// omega_max(s0).
double initial_promise(const PlannerSolution& sol, int s0, std::optional<double> target);

}  // namespace igi
