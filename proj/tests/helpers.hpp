#pragma once

#include <cmath>

#include "igi/economy.hpp"

namespace igi::testing {

// delta = beta = exp(-1/75), pi = 1/2, shares 0.5/0.7
inline EconomyParams two_state() {
    EconomyParams p;
    p.endowments.shares = {0.5, 0.7};
    p.endowments.probs = {0.5, 0.5};
    p.prefs.beta = p.prefs.delta = std::exp(-1.0 / 75.0);
    return p;
}

// shares 0.5/0.625/0.8125 with probabilities 0.5/0.25/0.25
inline EconomyParams three_state() {
    EconomyParams p;
    p.endowments.shares = {0.5, 0.625, 0.8125};
    p.endowments.probs = {0.5, 0.25, 0.25};
    p.prefs.beta = p.prefs.delta = std::exp(-1.0 / 75.0);
    return p;
}

inline EconomyParams with_growth(EconomyParams p) {
    p.growth.factors = {0.8, 1.28};
    p.growth.probs = {0.5, 0.5};
    return p;
}

}  // namespace igi::testing
