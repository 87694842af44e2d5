#include "igi/shooting.hpp"

#include <cmath>
#include <limits>

#include "igi/debt.hpp"
#include "igi/numerics.hpp"

namespace igi {

namespace {

struct TwoState {
    double beta, delta, pi, s1, s2;
};

TwoState unpack(const EconomyParams& params) {
    EconomyParams p = params;
    p.check_and_normalize();
    if (p.n_states() != 2)
        throw InvalidParameters("two-state machinery requires exactly two endowment states");
    return {p.prefs.beta, p.prefs.delta, p.endowments.probs[0], p.endowments.shares[0],
            p.endowments.shares[1]};
}

double chi_of(const TwoState& t) {
    const double b = t.beta, d = t.delta, pi = t.pi;
    return std::pow(d / b, (1.0 - pi) / pi) *
           std::pow((b + d) / d, (1.0 + b * (1.0 - pi)) / (b * pi)) *
           std::pow(t.s2, 1.0 / (b * pi)) * std::pow(1.0 - t.s2, (1.0 - pi) / pi) *
           (1.0 - t.s1);
}

}  // namespace

double nu_infinity(const EconomyParams& params) {
    const auto t = unpack(params);
    const double chi = chi_of(t);
    if (!(chi > 0.0 && chi < 1.0))
        throw AssumptionViolation("nu_infinity: closed form outside (0,1)");
    const double v = (t.delta / t.beta) / (1.0 / chi - 1.0);
    if (!(v > 0.0)) throw AssumptionViolation("nu_infinity: nonpositive limit");
    return v;
}

double nu_step(const EconomyParams& params, double nu_inf, double nu_prev, double nu_cur) {
    const auto t = unpack(params);
    const double b = t.beta, d = t.delta, pi = t.pi;
    const double term = std::pow(b * nu_cur / (b * nu_cur + d), pi / (1.0 - pi)) *
                        std::pow((b * nu_inf + d) / (b * nu_inf), pi / (1.0 - pi)) *
                        std::pow((b + d) / d, 1.0 / (b * (1.0 - pi))) * ((b + d) / b) *
                        std::pow(1.0 + (b / d) * nu_prev / nu_cur, -1.0 / (b * (1.0 - pi)));
    return (b / d) * nu_cur * (term - 1.0);
}

NuLadder shoot(const EconomyParams& params, int N, double tol) {
    if (N < 1) throw InvalidParameters("shoot: N must be positive");
    const auto t = unpack(params);
    const double ninf = nu_infinity(params);

    // classify a candidate rung value by running the recursion ahead:
    // trajectories off the saddle path either collapse below 1 or cross the
    // limit and explode
    auto classify_high = [&](double prev, double cur, int steps) {
        double a = prev, b = cur;
        for (int k = 0; k < steps; ++k) {
            if (b >= ninf) return true;
            if (!(b > 0.99) || !std::isfinite(b)) return false;
            const double nxt = nu_step(params, ninf, a, b);
            a = b;
            b = nxt;
        }
        return b >= ninf;
    };
    // next saddle rung after `cur`, resolved by bisection between cur and the
    // limit; the deep lookahead keeps the exponential sensitivity harmless
    const int lookahead = 300;
    auto next_rung = [&](double cur) {
        double lo = cur, hi = ninf;
        if (classify_high(cur, lo, lookahead)) return ninf;
        for (int iter = 0; iter < 120; ++iter) {
            const double mid = 0.5 * (lo + hi);
            if (classify_high(cur, mid, lookahead))
                hi = mid;
            else
                lo = mid;
        }
        return 0.5 * (lo + hi);
    };

    NuLadder lad;
    lad.nu_inf = ninf;
    lad.nu.push_back(1.0);  // nu^(-1)
    if (!classify_high(1.0, ninf, lookahead) || classify_high(1.0, 1.0, lookahead))
        throw NumericalError("shoot: could not bracket nu^(0) in [1, nu_inf]");
    double cur = next_rung(1.0);
    lad.nu0 = cur;
    lad.nu.push_back(cur);

    // stable contraction factor of the linearized recursion at the fixed point
    const double h = 1e-7 * ninf;
    const double Fa = (nu_step(params, ninf, ninf, ninf + h) -
                       nu_step(params, ninf, ninf, ninf - h)) /
                      (2.0 * h);
    const double Fb = (nu_step(params, ninf, ninf + h, ninf) -
                       nu_step(params, ninf, ninf - h, ninf)) /
                      (2.0 * h);
    const double disc = std::sqrt(Fa * Fa + 4.0 * Fb);
    double lam_stable = 0.5 * (Fa - disc);
    if (!(lam_stable > 0.0 && lam_stable < 1.0)) lam_stable = 0.5 * (Fa + disc);
    if (!(lam_stable > 0.0 && lam_stable < 1.0))
        throw NumericalError("shoot: no stable eigenvalue at the fixed point");

    const int max_rungs = 4000;
    const double tail_switch = 1e-6;
    for (int n = 1; n <= max_rungs; ++n) {
        double next;
        if (ninf - cur < tail_switch) {
            // linearized tail: bisection cannot resolve the saddle here
            next = ninf - lam_stable * (ninf - cur);
            if (ninf - next < tol) next = ninf;
        } else {
            next = next_rung(cur);
        }
        cur = std::min(next, ninf);
        lad.nu.push_back(cur);
        if (n >= N && std::fabs(cur - ninf) < tol) break;
        if (n == max_rungs)
            throw NumericalError("shoot: ladder did not reach nu_inf within the rung limit");
    }

    lad.rungs = static_cast<int>(lad.nu.size()) - 1;
    lad.c1.resize(lad.rungs);
    lad.c2.resize(lad.rungs);
    lad.d1.resize(lad.rungs);
    lad.d2.resize(lad.rungs);
    for (int n = 0; n < lad.rungs; ++n) {
        const double np = lad.nu_at(n - 1), nc = lad.nu_at(n);
        lad.c1[n] = t.delta / (t.beta * np + t.delta);
        lad.c2[n] = t.delta * nc / (t.beta * np + t.delta * nc);
        lad.d1[n] = 1.0 - lad.c1[n] / t.s1;
        lad.d2[n] = 1.0 - lad.c2[n] / t.s2;
    }
    return lad;
}

ChiUpsilon chi_upsilon(const EconomyParams& params) {
    const auto t = unpack(params);
    ChiUpsilon out;
    out.chi = chi_of(t);
    const auto rep = validate(params);
    if (rep.fb_gap >= 0.0) {
        out.upsilon = 0.0;  // first best sustainable: flat yield curve
        return out;
    }
    if (!(out.chi > 0.0 && out.chi < 1.0))
        throw AssumptionViolation("chi_upsilon: chi outside (0,1)");
    out.upsilon = std::log(t.delta / t.beta) - std::log(1.0 / out.chi - 1.0);
    return out;
}

Assumption5Report check_assumption5(const EconomyParams& params, const NuLadder& ladder) {
    const auto t = unpack(params);
    Assumption5Report rep;
    rep.d_star2 = 1.0 - (t.delta / (t.beta + t.delta)) / t.s2;
    rep.d_max = debt_limit(params);

    // reset debts from the ladder; d0(1) = 0 under the low-state assumption
    const double d0_1 = 1.0 - ladder.c1[0] / t.s1;
    const double d0_2 = 1.0 - ladder.c2[0] / t.s2;
    double acc = t.pi * (std::log(1.0 - t.s1 + t.s1 * d0_1) - std::log(1.0 - t.s1)) +
                 (1.0 - t.pi) * (std::log(1.0 - t.s2 + t.s2 * d0_2) - std::log(1.0 - t.s2));
    rep.d_c = 1.0 - std::exp(-t.beta * acc);

    // b_1(d*(2)) from the binding participation constraint at the fixed point
    const double rhs = t.beta * (t.pi * std::log(1.0 - t.s1) +
                                 (1.0 - t.pi) * std::log(1.0 - t.s2)) -
                       std::log(1.0 - rep.d_star2) -
                       t.beta * (1.0 - t.pi) * std::log(1.0 - t.s2 + t.s2 * rep.d_star2);
    const double inner = std::exp(rhs / (t.beta * t.pi));
    rep.b1_at_dstar2 = (inner - 1.0 + t.s1) / t.s1;

    rep.margin_limit = rep.d_max - rep.d_star2;
    rep.margin_reset = rep.d_c - rep.b1_at_dstar2;
    rep.pass = rep.margin_limit > 0.0 && rep.margin_reset > 0.0;
    return rep;
}

}  // namespace igi
