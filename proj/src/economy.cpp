#include "igi/economy.hpp"

#include <cmath>
#include <numeric>

#include "igi/numerics.hpp"

namespace igi {

namespace {

constexpr double kProbTol = 1e-12;

void check_probs(std::vector<double>& probs, const char* what) {
    if (probs.empty()) throw InvalidParameters(std::string(what) + ": empty probability vector");
    double sum = 0.0;
    for (double p : probs) {
        if (!(p > 0.0 && p < 1.0 + kProbTol))
            throw InvalidParameters(std::string(what) + ": probabilities must lie in (0,1)");
        sum += p;
    }
    if (std::fabs(sum - 1.0) > kProbTol)
        throw InvalidParameters(std::string(what) + ": probabilities must sum to 1 within 1e-12");
    for (double& p : probs) p /= sum;  // config files carry decimal round-off
}

}  // namespace

void EndowmentProcess::check_and_normalize() {
    if (shares.empty()) throw InvalidParameters("endowments: no states");
    if (shares.size() != probs.size())
        throw InvalidParameters("endowments: shares/probs length mismatch");
    for (size_t i = 0; i < shares.size(); ++i) {
        if (!(shares[i] > 0.0 && shares[i] < 1.0))
            throw InvalidParameters("endowments: shares must lie in (0,1)");
        if (i > 0 && !(shares[i] > shares[i - 1]))
            throw InvalidParameters("endowments: shares must be strictly ascending");
    }
    check_probs(probs, "endowments");
}

void GrowthProcess::check_and_normalize() {
    if (factors.empty()) throw InvalidParameters("growth: no states");
    if (factors.size() != probs.size())
        throw InvalidParameters("growth: factors/probs length mismatch");
    for (double g : factors)
        if (!(g > 0.0)) throw InvalidParameters("growth: factors must be positive");
    check_probs(probs, "growth");
}

double GrowthProcess::harmonic_mean() const {
    double inv = 0.0;
    for (size_t j = 0; j < factors.size(); ++j) inv += probs[j] / factors[j];
    return 1.0 / inv;
}

double GrowthProcess::arithmetic_mean() const {
    double m = 0.0;
    for (size_t j = 0; j < factors.size(); ++j) m += probs[j] * factors[j];
    return m;
}

bool GrowthProcess::degenerate() const {
    for (double g : factors)
        if (g != factors[0]) return false;
    return true;
}

void Preferences::check() const {
    if (!(beta > 0.0 && beta <= 1.0)) throw InvalidParameters("prefs: beta must lie in (0,1]");
    if (!(delta > 0.0 && delta < 1.0)) throw InvalidParameters("prefs: delta must lie in (0,1)");
}

void EconomyParams::check_and_normalize() {
    endowments.check_and_normalize();
    growth.check_and_normalize();
    prefs.check();
    if (initial_state < 0 || initial_state >= n_states())
        throw InvalidParameters("initial_state out of range");
    if (initial_target) {
        const double lo = std::log(1.0 - endowments.shares[initial_state]);
        if (!(*initial_target >= lo && *initial_target < 0.0))
            throw InvalidParameters("initial_target must lie in [log(1-s0), 0)");
    }
}

double upsilon_hat_of(const EconomyParams& params, int state) {
    const auto& e = params.endowments;
    double tail = 0.0;
    for (int r = 0; r < e.size(); ++r) tail += e.probs[r] * std::log(1.0 - e.shares[r]);
    return std::log(e.shares[state]) + params.prefs.beta * tail;
}

QhatMatrix qhat_matrix(const EconomyParams& params) {
    EconomyParams p = params;
    p.check_and_normalize();
    const auto& e = p.endowments;
    const int n = e.size();
    QhatMatrix out;
    out.n = n;
    out.q.resize(static_cast<size_t>(n) * n);
    double trace = 0.0;
    for (int s = 0; s < n; ++s) {
        for (int r = 0; r < n; ++r) {
            const double q = e.probs[r] * p.prefs.beta * e.shares[s] / (1.0 - e.shares[r]);
            out.q[static_cast<size_t>(s) * n + r] = q;
            if (s == r) trace += q;
        }
    }
    // Q has rank one under i.i.d. shocks, so the Perron root is the trace.
    out.perron_root = trace;
    return out;
}

AutarkyData autarky(const EconomyParams& params) {
    EconomyParams p = params;
    p.check_and_normalize();
    const auto& e = p.endowments;
    const double beta = p.prefs.beta;
    const int n = e.size();

    AutarkyData out;
    out.gamma_bar = p.growth.harmonic_mean();
    out.upsilon_hat.resize(n);
    out.omega_min.resize(n);
    for (int s = 0; s < n; ++s) {
        out.upsilon_hat[s] = upsilon_hat_of(p, s);
        out.omega_min[s] = std::log(1.0 - e.shares[s]);
    }

    // Bound system in one unknown: with D = sum_r pi(r)(omega_max(r)-omega_min(r))
    // each bound is omega_max(s) = log(1 - s exp(-beta D)); the fixed point of
    //   G(D) = sum_r pi(r) log((1 - s(r) exp(-beta D)) / (1 - s(r)))
    // at D > 0 is the nontrivial solution. G is concave with G(0)=0 and
    // G'(0) = trace(Qhat), so a positive root exists iff the trace exceeds 1.
    auto G = [&](double D) {
        double acc = 0.0;
        for (int r = 0; r < n; ++r)
            acc += e.probs[r] *
                   (std::log(1.0 - e.shares[r] * std::exp(-beta * D)) - out.omega_min[r]);
        return acc;
    };
    double hi = 1.0;
    while (G(hi) > hi && hi < 1e3) hi *= 2.0;
    const double probe = 1e-9;
    if (G(probe) <= probe)
        throw NoNontrivialBound("promise-bound system has only the trivial root Dvarpi = 0");
    out.delta_varpi = bisect([&](double D) { return G(D) - D; }, probe, hi, 1e-15);

    out.omega_max.resize(n);
    for (int s = 0; s < n; ++s)
        out.omega_max[s] = std::log(1.0 - e.shares[s] * std::exp(-beta * out.delta_varpi));
    return out;
}

ValidationReport validate(const EconomyParams& params) {
    EconomyParams p = params;
    p.check_and_normalize();
    const auto& e = p.endowments;
    const double beta = p.prefs.beta, delta = p.prefs.delta;
    const int n = e.size();

    ValidationReport rep;
    rep.trace_qhat = qhat_matrix(p).perron_root;
    rep.gamma_bar = p.growth.harmonic_mean();
    rep.ls_slack = delta / (beta + delta) - e.shares[0];

    // first-best lifetime utility of the top state vs autarky
    const double cbar = delta / (beta + delta);
    auto c_star = [&](int r) { return std::min(cbar, e.shares[r]); };
    double fb = std::log(c_star(n - 1));
    double aut = std::log(e.shares[n - 1]);
    for (int r = 0; r < n; ++r) {
        fb += beta * e.probs[r] * std::log(1.0 - c_star(r));
        aut += beta * e.probs[r] * std::log(1.0 - e.shares[r]);
    }
    rep.fb_gap = fb - aut;

    rep.checks.push_back({"sustainability: trace(Qhat) > gamma_bar",
                          rep.trace_qhat > rep.gamma_bar, rep.trace_qhat - rep.gamma_bar});
    rep.checks.push_back({"low state: s(1) <= delta/(beta+delta)", rep.ls_slack >= 0.0,
                          rep.ls_slack});
    rep.checks.push_back({"first best unsustainable in top state", rep.fb_gap < 0.0,
                          rep.fb_gap});
    rep.pass = true;
    for (const auto& c : rep.checks) rep.pass = rep.pass && c.pass;
    return rep;
}

}  // namespace igi
