#pragma once

#include <cstdint>

#include "twochoice/random_source.hpp"

namespace twochoice {

// Bernstein-type bound exp(-z^2 / (2V + (2/3) b z)) for sums of independent
// variables with Z_k - E[Z_k] >= -b and total variance V.
double bernstein_bound(double variance, double offset_bound, double z);

// Generalized +/-1/0 walk parameters.
//   hitting:  up-step prob >= 2p, down-step prob <= p, start r0, budget m,
//             target r1; requires 0 <= p <= 1/3 and p*m >= 2(r1 - r0).
//   crossing: up-step prob <= p, down-step prob >= q (q > p), start 0,
//             absorbing barriers at -1 and a.
struct WalkParams {
    double p = 0.0;
    double q = 0.0;
    std::uint32_t a = 1;
    std::uint64_t m = 1;
    std::int64_t r0 = 0;
    std::int64_t r1 = 1;
};

// P(the walk never reaches r1 within m steps) <= exp(-p*m/28).
// Throws std::invalid_argument naming the violated precondition.
double hitting_bound(const WalkParams& params);

// Exact probability that the homogeneous walk (up p, down q, stay 1-p-q)
// started at 0 hits a before -1, via the absorption linear system; equals the
// gambler's-ruin value (1 - rho) / (1 - rho^{a+1}) with rho = q/p when p > 0.
double crossing_exact(double p, double q, std::uint32_t a);

enum class WalkMode : std::uint8_t { crossing, hitting };

struct WalkStats {
    double frequency = 0.0;  // crossing: P(hit a first); hitting: P(miss r1)
    double se = 0.0;
    std::uint64_t trials = 0;
};

// Monte Carlo for either walk; crossing uses (p, q, a), hitting uses
// (p, m, r0, r1) with up-probability exactly 2p and down-probability p.
WalkStats walk_simulate(const WalkParams& params, WalkMode mode, std::uint64_t trials,
                        RandomSource& rng);

} // namespace twochoice
