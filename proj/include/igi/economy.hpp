#pragma once

#include <optional>
#include <string>
#include <vector>

#include "igi/errors.hpp"

namespace igi {

// Endowment-share process of the young: shares s(i) in (0,1), strictly
// ascending, with i.i.d. probabilities pi(i). Utilities are in nats; shares
// and debt are dimensionless throughout the library.
struct EndowmentProcess {
    std::vector<double> shares;
    std::vector<double> probs;

    int size() const { return static_cast<int>(shares.size()); }
    void check_and_normalize();  // throws InvalidParameters; renormalizes probs
};

// Aggregate growth factors with i.i.d. probabilities. Policies never depend on
// growth; only diagnostics (gamma_bar, unadjusted yields, MRP*) do.
struct GrowthProcess {
    std::vector<double> factors{1.0};
    std::vector<double> probs{1.0};

    int size() const { return static_cast<int>(factors.size()); }
    void check_and_normalize();
    double harmonic_mean() const;    // gamma_bar
    double arithmetic_mean() const;  // E_gamma gamma
    bool degenerate() const;
};

struct Preferences {
    double beta = 0.9;   // generational discount factor, (0, 1]
    double delta = 0.9;  // planner discount factor, (0, 1)

    void check() const;
};

struct EconomyParams {
    EndowmentProcess endowments;
    GrowthProcess growth;
    Preferences prefs;
    int initial_state = 0;                      // index into shares, 0-based
    std::optional<double> initial_target{};     // omega_bar_0, log-consumption units

    int n_states() const { return endowments.size(); }
    void check_and_normalize();
};

// Per-state autarky quantities and the promise bounds.
struct AutarkyData {
    std::vector<double> upsilon_hat;  // lifetime endowment utility by state
    std::vector<double> omega_min;    // log(1 - s)
    std::vector<double> omega_max;    // nontrivial upper promise bound
    double gamma_bar = 1.0;
    double delta_varpi = 0.0;         // pi-weighted bound range, > 0
};

struct AssumptionCheck {
    std::string name;
    bool pass = false;
    double margin = 0.0;  // signed; >= 0 (or < 0 where the assumption needs it) means pass
};

struct ValidationReport {
    bool pass = false;
    double trace_qhat = 0.0;
    double gamma_bar = 1.0;
    double ls_slack = 0.0;  // delta/(beta+delta) - s(1), Assumption on low state
    double fb_gap = 0.0;    // first-best lifetime utility in state I minus autarky
    std::vector<AssumptionCheck> checks;
};

struct QhatMatrix {
    int n = 0;
    std::vector<double> q;  // row-major n*n, q(s,r) = pi(r) beta s/(1-r)
    double perron_root = 0.0;
};

// Assumption screening: sustainability (trace of Qhat vs gamma_bar), the
// low-state share bound, and unsustainability of the first best in the top
// state. Structural violations throw; assumption failures are reported.
ValidationReport validate(const EconomyParams& params);

QhatMatrix qhat_matrix(const EconomyParams& params);

// upsilon_hat, promise bounds (unique nontrivial root of the bound system) and
// the harmonic mean growth factor. Throws NoNontrivialBound when only the
// trivial root exists.
AutarkyData autarky(const EconomyParams& params);

double upsilon_hat_of(const EconomyParams& params, int state);

}  // namespace igi
