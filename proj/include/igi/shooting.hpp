#pragma once

#include <vector>

#include "igi/economy.hpp"

namespace igi {

// Saddle-path solution of the two-state economy: nu(n) = 1 + mu(n) is the
// constraint tightness after n consecutive high-endowment states.
struct NuLadder {
    std::vector<double> nu;   // nu[0] = nu^(-1) = 1, then nu^(0), nu^(1), ...
    double nu_inf = 0.0;
    double nu0 = 0.0;         // chosen by the shooting search
    std::vector<double> c1, c2;  // consumption ladders, index n = 0,1,...
    std::vector<double> d1, d2;  // debt ladders
    int rungs = 0;               // entries in c1/c2 (>= requested N)

    double nu_at(int n) const { return nu[n + 1]; }  // n = -1, 0, 1, ...
};

// Closed-form limit of the tightness ladder. Requires two endowment states.
double nu_infinity(const EconomyParams& params);

// Forward shooting on the second-order tightness recursion with bisection on
// nu^(0); rungs are appended until both n >= N and |nu^(n) - nu_inf| < tol.
NuLadder shoot(const EconomyParams& params, int N = 20, double tol = 1e-10);

// One step of the tightness recursion (exposed for divergence diagnostics).
double nu_step(const EconomyParams& params, double nu_inf, double nu_prev, double nu_cur);

struct ChiUpsilon {
    double chi = 0.0;
    double upsilon = 0.0;  // log of the extreme eigenvector ratio; 0 if first best sustainable
};

// Closed-form Martin-Ross bound for the two-state economy.
ChiUpsilon chi_upsilon(const EconomyParams& params);

struct Assumption5Report {
    bool pass = false;
    double d_star2 = 0.0, d_max = 0.0, d_c = 0.0, b1_at_dstar2 = 0.0;
    double margin_limit = 0.0;  // d_max - d*(2)
    double margin_reset = 0.0;  // d_c - b_1(d*(2))
};

// Checks d*(2) < d_max and b_1(d*(2)) < d_c using the ladder's reset levels
// and the closed-form binding-constraint equation.
Assumption5Report check_assumption5(const EconomyParams& params, const NuLadder& ladder);

}  // namespace igi
