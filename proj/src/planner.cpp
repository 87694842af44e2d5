#include "igi/planner.hpp"

#include <algorithm>
#include <array>
#include <cassert>
#include <cmath>
#include <limits>
#include <sstream>
#include <thread>

#include "igi/numerics.hpp"

namespace igi {

namespace {

// Monotone cubic hermite piece for the corner layer: slopes from the standard
// shape-preserving rules on three points.
std::array<double, 8> corner_fill_piece(double xa, double ya, double xb, double yb,
                                        double xc, double yc) {
    const double h0 = xb - xa, h1 = xc - xb;
    const double d0 = (yb - ya) / h0, d1 = (yc - yb) / h1;
    double mb = 0.0;
    if (d0 * d1 > 0.0) {
        const double w1 = 2.0 * h1 + h0, w2 = h1 + 2.0 * h0;
        mb = (w1 + w2) / (w1 / d0 + w2 / d1);
    }
    double mc = ((2.0 * h1 + h0) * d1 - h1 * d0) / (h0 + h1);
    if (mc * d1 <= 0.0)
        mc = 0.0;
    else if (d0 * d1 <= 0.0 && std::fabs(mc) > 3.0 * std::fabs(d1))
        mc = 3.0 * d1;
    return {xb, yb, mb, xc, yc, mc, 0.0, 0.0};
}

double hermite_value(const std::array<double, 8>& p, double x) {
    const double h = p[3] - p[0];
    const double t = (x - p[0]) / h;
    const double t2 = t * t, t3 = t2 * t;
    return (2 * t3 - 3 * t2 + 1) * p[1] + (t3 - 2 * t2 + t) * h * p[2] +
           (-2 * t3 + 3 * t2) * p[4] + (t3 - t2) * h * p[5];
}

double hermite_deriv(const std::array<double, 8>& p, double x) {
    const double h = p[3] - p[0];
    const double t = (x - p[0]) / h;
    const double t2 = t * t;
    return ((6 * t2 - 6 * t) * p[1] + (3 * t2 - 4 * t + 1) * h * p[2] +
            (-6 * t2 + 6 * t) * p[4] + (3 * t2 - 2 * t) * h * p[5]) /
           h;
}

void parallel_nodes(int count, int threads, const std::function<void(int)>& body) {
    if (threads <= 1 || count < 32) {
        for (int k = 0; k < count; ++k) body(k);
        return;
    }
    std::vector<std::thread> pool;
    const int chunk = (count + threads - 1) / threads;
    for (int t = 0; t < threads; ++t) {
        const int lo = t * chunk, hi = std::min(count, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([&, lo, hi] {
            for (int k = lo; k < hi; ++k) body(k);
        });
    }
    for (auto& th : pool) th.join();
}

StateInterp make_state_interp(const std::vector<double>& nodes, const std::vector<double>& v,
                              int m, double junction, double slope) {
    StateInterp si;
    si.junction = junction;
    si.slope = slope;
    int k = 0;
    while (k < m && nodes[k] <= junction) ++k;
    si.k_flat = std::max(0, k - 1);
    si.flat = v[si.k_flat];
    // skip a node that nearly coincides with the junction knot
    if (k < m - 1 && nodes[k] - junction < 0.25 * (nodes[k + 1] - nodes[k])) ++k;
    si.k_start = k;
    if (m - k < 3) throw NumericalError("value interpolant: junction too close to the top");
    std::vector<double> xs, ys;
    xs.reserve(m - k + 1);
    ys.reserve(m - k + 1);
    xs.push_back(junction);
    ys.push_back(si.flat);
    for (int j = k; j < m; ++j) {
        xs.push_back(nodes[j]);
        ys.push_back(v[j]);
    }
    si.right = CubicSpline(xs, ys, slope);
    return si;
}

// Node problem: given the value interpolants and reset targets, find the
// scalar multiplier on the young participation constraint and the implied
// consumption and promises.
struct InnerSolver {
    const EconomyParams* p = nullptr;
    const AutarkyData* aut = nullptr;
    const std::vector<StateInterp>* interp = nullptr;
    std::vector<double> hi_node;  // promise queries clamp here (last regular node)
    std::vector<double> omega0;
    std::vector<double> mu0;  // multiplier at the reset point, by state
    double lambda_cap = 1e8;

    double beta() const { return p->prefs.beta; }
    double delta() const { return p->prefs.delta; }
    int n() const { return p->n_states(); }

    double D(int r, double om) const {
        const double v = -(delta() / beta()) * (*interp)[r].deriv(om);
        return std::min(v, lambda_cap);
    }

    double h_inv(int r, double mu_val) const {
        const double lo = (*interp)[r].junction, hi = hi_node[r];
        const double flo = D(r, lo) - mu_val;
        if (flo >= 0.0) return lo;
        const double fhi = D(r, hi) - mu_val;
        if (fhi <= 0.0) return hi;
        return bisect_with([&](double om) { return D(r, om) - mu_val; }, lo, hi, flo, fhi,
                           1e-15);
    }

    double c_of(double mu_val, double cap) const {
        const double un = delta() * (1.0 + mu_val) / (beta() + delta() * (1.0 + mu_val));
        return std::min(un, cap);
    }

    // Participation-constraint slack as a function of mu (increasing).
    double slack(int s, double mu_val, double cap, std::vector<double>& g) const {
        const double c = c_of(mu_val, cap);
        double acc = std::log(c);
        for (int r = 0; r < n(); ++r) {
            g[r] = (mu_val <= 0.0) ? omega0[r] : h_inv(r, mu_val);
            acc += beta() * p->endowments.probs[r] * g[r];
        }
        return acc - aut->upsilon_hat[s];
    }

    PolicyEval solve(int s, double omega) const {
        PolicyEval out;
        const int I = n();
        out.xi.assign(I, 0.0);
        out.eta.assign(I, 0.0);
        const double cap = std::min(p->endowments.shares[s], 1.0 - std::exp(omega));

        std::vector<double> g(I);
        double mu_val = 0.0;
        const double s0 = slack(s, 0.0, cap, g);
        if (s0 < 0.0) {
            double hi = 1.0, shi = slack(s, hi, cap, g);
            while (shi < 0.0 && hi < lambda_cap) {
                hi *= 2.0;
                shi = slack(s, hi, cap, g);
            }
            if (shi < 0.0) {
                mu_val = lambda_cap;  // promises saturated at the working region's top
            } else {
                mu_val = bisect_with([&](double m) { return slack(s, m, cap, g); }, 0.0, hi,
                                     s0, shi, 1e-12);
            }
        }
        out.mu = mu_val;
        out.c = c_of(mu_val, cap);
        slack(s, mu_val, cap, g);  // refresh promises at the root
        out.promises = g;

        // Promise-keeping multiplier from the consumption condition; zero when
        // the unconstrained (or transfer-bound) branch is active.
        const double un = delta() * (1.0 + mu_val) / (beta() + delta() * (1.0 + mu_val));
        if (out.c < un && cap == 1.0 - std::exp(omega)) {
            out.lambda = delta() * (1.0 + mu_val) * (1.0 - out.c) / (beta() * out.c) - 1.0;
            out.lambda = std::min(std::max(out.lambda, 0.0), lambda_cap);
        } else {
            out.lambda = 0.0;
        }
        for (int r = 0; r < I; ++r) {
            const double Dg = D(r, g[r]);
            if (g[r] >= hi_node[r]) out.xi[r] = std::max(0.0, mu_val - Dg);
            if (g[r] <= omega0[r]) out.eta[r] = std::max(0.0, Dg - mu_val);
        }
        return out;
    }

    // Self-consistent reset promises: at the reset point the promise-keeping
    // constraint is just binding and consumption solves the constraint-only
    // problem. States with a slack constraint reset at the first-best promise.
    void refresh_omega0() {
        const int I = n();
        for (int round = 0; round < 100; ++round) {
            std::vector<double> next(I), next_mu(I);
            std::vector<double> g(I);
            for (int s = 0; s < I; ++s) {
                const double cap = p->endowments.shares[s];
                double m0 = 0.0;
                const double s0 = slack(s, 0.0, cap, g);
                if (s0 < 0.0) {
                    double hi = 1.0, shi = slack(s, hi, cap, g);
                    while (shi < 0.0 && hi < 1e14) {
                        hi *= 2.0;
                        shi = slack(s, hi, cap, g);
                    }
                    m0 = bisect_with([&](double m) { return slack(s, m, cap, g); }, 0.0, hi,
                                     s0, shi, 1e-13);
                }
                next_mu[s] = m0;
                next[s] = std::log(1.0 - c_of(m0, cap));
            }
            double moved = 0.0;
            for (int s = 0; s < I; ++s) moved = std::max(moved, std::fabs(next[s] - omega0[s]));
            omega0 = std::move(next);
            mu0 = std::move(next_mu);
            if (moved < 1e-13) return;
        }
    }

    // slope of the value function at the reset junction (envelope condition)
    double junction_slope(int s) const {
        const double c0 = c_of(mu0[s], p->endowments.shares[s]);
        const double lam0 =
            std::max(0.0, delta() * (1.0 + mu0[s]) * (1.0 - c0) / (beta() * c0) - 1.0);
        return -(beta() / delta()) * lam0;
    }
};

}  // namespace

double PlannerSolution::value(int s, double omega) const {
    const auto& x = grid.nodes[s];
    if (omega < omega_min(s) - 1e-12 || omega > omega_max(s) + 1e-12)
        throw DomainError("value: promise outside [omega_min, omega_max]");
    omega = std::clamp(omega, x.front(), x.back());
    if (omega <= x[grid.regular - 1]) return interp_[s].value(omega);
    return hermite_value(fill_[s], omega);
}

double PlannerSolution::value_derivative(int s, double omega) const {
    const auto& x = grid.nodes[s];
    if (omega < omega_min(s) - 1e-12 || omega > omega_max(s) + 1e-12)
        throw DomainError("value_derivative: promise outside [omega_min, omega_max]");
    omega = std::clamp(omega, x.front(), x.back());
    if (omega <= x[grid.regular - 1]) return interp_[s].deriv(omega);
    return hermite_deriv(fill_[s], omega);
}

void PlannerSolution::rebuild_caches() {
    const int I = n_states();
    interp_.clear();
    fill_.clear();
    const double beta = params.prefs.beta, delta = params.prefs.delta;
    for (int s = 0; s < I; ++s) {
        const auto& x = grid.nodes[s];
        const double c0v = 1.0 - std::exp(omega0[s]);
        const double lam0 =
            std::max(0.0, delta * (1.0 + mu0[s]) * (1.0 - c0v) / (beta * c0v) - 1.0);
        interp_.push_back(
            make_state_interp(x, V[s], grid.regular, omega0[s], -(beta / delta) * lam0));
        fill_.push_back(corner_fill_piece(x[grid.regular - 2], V[s][grid.regular - 2],
                                          x[grid.regular - 1], V[s][grid.regular - 1],
                                          x[grid.gp - 1], V[s][grid.gp - 1]));
    }
}

PolicyEval PlannerSolution::policy(int s, double omega) const {
    if (omega < omega_min(s) - 1e-12 || omega > omega_max(s) + 1e-12)
        throw DomainError("policy: promise outside [omega_min, omega_max]");
    const int I = n_states();
    if (omega >= omega_max(s) - 1e-14) {
        // forced corner: the bound system pins consumption and every promise
        PolicyEval out;
        out.c = 1.0 - std::exp(omega_max(s));
        out.promises = aut.omega_max;
        out.mu = lambda_cap;
        out.lambda = lambda_cap;
        out.xi.assign(I, 0.0);
        out.eta.assign(I, 0.0);
        return out;
    }
    InnerSolver inner;
    inner.p = &params;
    inner.aut = &aut;
    inner.interp = &interp_;
    inner.lambda_cap = lambda_cap;
    inner.omega0 = omega0;
    inner.mu0 = mu0;
    inner.hi_node.resize(I);
    for (int r = 0; r < I; ++r) inner.hi_node[r] = grid.nodes[r][grid.regular - 1];
    return inner.solve(s, std::clamp(omega, grid.nodes[s].front(), grid.nodes[s].back()));
}

PolicyEval policy_eval(const PlannerSolution& sol, int s, double omega) {
    return sol.policy(s, omega);
}

double PlannerSolution::promise_from_multiplier(int r, double mu_val) const {
    const double beta = params.prefs.beta, delta = params.prefs.delta;
    const double lo = interp_[r].junction;
    const double hi = grid.nodes[r][grid.regular - 1];
    auto D = [&](double om) {
        return std::min(-(delta / beta) * interp_[r].deriv(om), lambda_cap);
    };
    const double flo = D(lo) - mu_val;
    if (flo >= 0.0) return lo;
    const double fhi = D(hi) - mu_val;
    if (fhi <= 0.0) return hi;
    return bisect_with([&](double om) { return D(om) - mu_val; }, lo, hi, flo, fhi, 1e-15);
}

double initial_promise(const PlannerSolution& sol, int s0, std::optional<double> target) {
    if (s0 < 0 || s0 >= sol.n_states()) throw InvalidParameters("initial_promise: bad state");
    if (!target) return sol.omega0[s0];
    if (*target > sol.omega_max(s0) + 1e-12)
        throw InfeasibleTarget("initial target exceeds omega_max in the initial state");
    return std::max(sol.omega0[s0], *target);
}

PlannerSolution solve(const EconomyParams& params, const SolveOptions& opts) {
    PlannerSolution sol;
    sol.params = params;
    sol.params.check_and_normalize();
    const auto rep = validate(sol.params);
    if (!rep.pass) {
        std::ostringstream msg;
        msg << "solve: assumption screening failed:";
        for (const auto& c : rep.checks)
            if (!c.pass) msg << " [" << c.name << "]";
        throw AssumptionViolation(msg.str());
    }
    if (sol.params.n_states() < 2)
        throw InvalidParameters("solve: at least two endowment states required");
    if (opts.gp < 50) throw InvalidParameters("solve: gp must be at least 50");

    const int I = sol.params.n_states();
    const double beta = sol.params.prefs.beta, delta = sol.params.prefs.delta;
    sol.aut = autarky(sol.params);
    sol.fb = first_best(sol.params);
    sol.lambda_cap = opts.lambda_cap;

    const int edge = opts.edge_nodes >= 2 ? opts.edge_nodes : std::max(2, opts.gp / 25);
    if (opts.gp - 1 - edge < 12) throw InvalidParameters("solve: grid too small for edge layer");
    sol.grid.gp = opts.gp;
    sol.grid.regular = opts.gp - 1 - edge;
    sol.grid.nodes.resize(I);
    for (int s = 0; s < I; ++s)
        sol.grid.nodes[s] = chebyshev_nodes(sol.aut.omega_min[s], sol.aut.omega_max[s], opts.gp);
    const int m = sol.grid.regular;

    // exact corner values: at omega_max the constraint set is a singleton, so
    // the corner block solves a closed linear system
    std::vector<double> u_corner(I), v_corner(I);
    double u_bar = 0.0;
    for (int s = 0; s < I; ++s) {
        const double c = 1.0 - std::exp(sol.aut.omega_max[s]);
        u_corner[s] = std::log(c) + (beta / delta) * std::log(1.0 - c);
        u_bar += sol.params.endowments.probs[s] * u_corner[s];
    }
    for (int s = 0; s < I; ++s) v_corner[s] = u_corner[s] + delta * u_bar / (1.0 - delta);

    // iterate 0: the first-best frontier
    sol.V.assign(I, {});
    for (int s = 0; s < I; ++s) {
        sol.V[s].resize(opts.gp);
        for (int k = 0; k < opts.gp; ++k) sol.V[s][k] = sol.fb.value(s, sol.grid.nodes[s][k]);
    }
    if (opts.observer) opts.observer(0, sol.V);

    InnerSolver inner;
    inner.p = &sol.params;
    inner.aut = &sol.aut;
    inner.lambda_cap = opts.lambda_cap;
    inner.omega0 = sol.fb.omega_star;
    inner.mu0.assign(I, 0.0);
    inner.hi_node.resize(I);
    for (int r = 0; r < I; ++r) inner.hi_node[r] = sol.grid.nodes[r][m - 1];

    int threads = opts.threads > 0 ? opts.threads
                                   : static_cast<int>(std::thread::hardware_concurrency());
    threads = std::clamp(threads, 1, 16);

    std::vector<StateInterp> interp(I);
    auto fit = [&] {
        for (int s = 0; s < I; ++s)
            interp[s] = make_state_interp(sol.grid.nodes[s], sol.V[s], m, inner.omega0[s],
                                          inner.junction_slope(s));
        inner.interp = &interp;
    };

    auto fill_layer = [&](std::vector<std::vector<double>>& tab) {
        for (int s = 0; s < I; ++s) {
            tab[s][opts.gp - 1] = v_corner[s];
            const auto piece =
                corner_fill_piece(sol.grid.nodes[s][m - 2], tab[s][m - 2],
                                  sol.grid.nodes[s][m - 1], tab[s][m - 1],
                                  sol.grid.nodes[s][opts.gp - 1], v_corner[s]);
            for (int k = m; k < opts.gp - 1; ++k)
                tab[s][k] = hermite_value(piece, sol.grid.nodes[s][k]);
        }
    };

    bool converged = false;
    int howard_cooldown = 0;
    double prev_diff = std::numeric_limits<double>::infinity();
    for (int sweep = 1; sweep <= opts.max_iters; ++sweep) {
        fit();
        inner.refresh_omega0();
        const bool howard =
            opts.accelerate && sweep > opts.warmup_sweeps && howard_cooldown == 0;

        std::vector<std::vector<double>> newV = sol.V;
        std::vector<std::vector<PolicyEval>> pol(I, std::vector<PolicyEval>(m));
        for (int s = 0; s < I; ++s) {
            parallel_nodes(m, threads, [&, s](int k) {
                pol[s][k] = inner.solve(s, sol.grid.nodes[s][k]);
            });
        }
        if (!howard) {
            for (int s = 0; s < I; ++s) {
                parallel_nodes(m, threads, [&, s](int k) {
                    const auto& pe = pol[s][k];
                    double cont = 0.0;
                    for (int r = 0; r < I; ++r)
                        cont += sol.params.endowments.probs[r] *
                                interp[r].value(std::min(pe.promises[r], inner.hi_node[r]));
                    const double t = std::log(pe.c) +
                                     (beta / delta) * std::log(1.0 - pe.c) + delta * cont;
                    newV[s][k] = sol.V[s][k] + opts.damping * (t - sol.V[s][k]);
                });
            }
        } else {
            // policy evaluation: solve the linear fixed point of the frozen
            // policies through the interpolation weights
            std::vector<SplineBasis> basis(I);
            for (int r = 0; r < I; ++r) {
                const auto& si = interp[r];
                std::vector<double> xs;
                xs.push_back(si.junction);
                for (int j = si.k_start; j < m; ++j) xs.push_back(sol.grid.nodes[r][j]);
                basis[r] = SplineBasis(xs, si.slope);
            }
            const int n = I * m;
            std::vector<double> U(n, 0.0), W(static_cast<size_t>(n) * n, 0.0);
            for (int s = 0; s < I; ++s) {
                parallel_nodes(m, threads, [&, s](int k) {
                    const auto& pe = pol[s][k];
                    const int row = s * m + k;
                    U[row] = std::log(pe.c) + (beta / delta) * std::log(1.0 - pe.c);
                    double* wrow = &W[static_cast<size_t>(row) * n];
                    for (int r = 0; r < I; ++r) {
                        const auto& si = interp[r];
                        const double scale = delta * sol.params.endowments.probs[r];
                        const double q = std::min(pe.promises[r], inner.hi_node[r]);
                        if (q <= si.junction) {
                            wrow[r * m + si.k_flat] += scale;
                            continue;
                        }
                        const int nb = basis[r].size();
                        std::vector<double> wloc(nb, 0.0);
                        basis[r].accumulate_weight_row(q, 1.0, wloc);
                        U[row] += scale * basis[r].affine_term(q);
                        wrow[r * m + si.k_flat] += scale * wloc[0];
                        for (int j = 1; j < nb; ++j)
                            wrow[r * m + si.k_start + j - 1] += scale * wloc[j];
                    }
                });
            }
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) {
                    double& a = W[static_cast<size_t>(i) * n + j];
                    a = (i == j ? 1.0 : 0.0) - a;
                }
            lu_solve_inplace(W, U, n);
            for (int s = 0; s < I; ++s)
                for (int k = 0; k < m; ++k) newV[s][k] = U[s * m + k];
        }
        fill_layer(newV);

        double diff = 0.0;
        for (int s = 0; s < I; ++s)
            for (int k = 0; k < opts.gp; ++k)
                diff = std::max(diff, std::fabs(newV[s][k] - sol.V[s][k]));
        if (!std::isfinite(diff)) throw NumericalError("solve: iteration diverged");
        sol.V = std::move(newV);
        sol.diff_history.push_back(diff);
        sol.sweeps = sweep;
        sol.final_diff = diff;
        if (opts.observer) opts.observer(sweep, sol.V);

        if (howard && diff > 4.0 * prev_diff && diff > opts.tol) {
            howard_cooldown = 3;  // evaluation misbehaved; contract for a few sweeps
        } else if (howard_cooldown > 0) {
            --howard_cooldown;
        }
        prev_diff = diff;
        if (diff < opts.tol) {
            converged = true;
            break;
        }
    }
    if (!converged) {
        std::ostringstream msg;
        msg << "solve: no convergence after " << opts.max_iters << " sweeps; residuals:";
        const size_t h = sol.diff_history.size();
        for (size_t i = h > 8 ? h - 8 : 0; i < h; ++i) msg << " " << sol.diff_history[i];
        throw NumericalError(msg.str());
    }

    fit();
    inner.refresh_omega0();
    sol.omega0 = inner.omega0;
    sol.mu0 = inner.mu0;
    fit();  // align the interpolant junctions with the final reset targets

    // final tables
    sol.c_pol.assign(I, std::vector<double>(opts.gp));
    sol.mu.assign(I, std::vector<double>(opts.gp));
    sol.lam.assign(I, std::vector<double>(opts.gp));
    sol.g_pol.assign(I, std::vector<std::vector<double>>(opts.gp, std::vector<double>(I)));
    for (int s = 0; s < I; ++s) {
        for (int k = 0; k < opts.gp - 1; ++k) {
            const auto pe = inner.solve(s, sol.grid.nodes[s][k]);
            sol.c_pol[s][k] = pe.c;
            sol.mu[s][k] = pe.mu;
            sol.lam[s][k] = pe.lambda;
            sol.g_pol[s][k] = pe.promises;
        }
        sol.c_pol[s][opts.gp - 1] = 1.0 - std::exp(sol.aut.omega_max[s]);
        sol.mu[s][opts.gp - 1] = opts.lambda_cap;
        sol.lam[s][opts.gp - 1] = opts.lambda_cap;
        sol.g_pol[s][opts.gp - 1] = sol.aut.omega_max;
    }
    sol.c0.resize(I);
    sol.omega_f.resize(I);
    for (int s = 0; s < I; ++s) {
        sol.c0[s] = 1.0 - std::exp(sol.omega0[s]);
        sol.omega_f[s] = std::min(sol.fb.omega_star[s], sol.aut.omega_max[s]);
    }
    // largest promise in the lowest state with a slack participation constraint
    {
        double acc = 0.0;
        for (int r = 0; r < I; ++r) acc += sol.params.endowments.probs[r] * sol.omega0[r];
        sol.omega_c = std::log(1.0 - std::exp(sol.aut.upsilon_hat[0] - beta * acc));
    }
    sol.rebuild_caches();
    return sol;
}

}  // namespace igi
