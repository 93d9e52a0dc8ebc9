#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace twochoice {

// Model parameters. Total arrival rate is lambda * n; the time unit is the
// mean ball lifetime.
struct SimParams {
    std::uint32_t n = 1;     // bin count
    std::uint32_t d = 2;     // choices per ball (with replacement)
    double lambda = 1.0;     // arrival rate per bin
    std::uint64_t seed = 0;  // reproducibility key
    double horizon = 0.0;    // simulated time

    void validate() const {
        if (n < 1) throw std::invalid_argument("SimParams: n must be >= 1");
        if (d < 1) throw std::invalid_argument("SimParams: d must be >= 1");
        if (!(lambda > 0.0)) throw std::invalid_argument("SimParams: lambda must be > 0");
        if (!(horizon >= 0.0)) throw std::invalid_argument("SimParams: horizon must be >= 0");
    }

    double arrival_rate() const { return lambda * static_cast<double>(n); }
};

// Burn-in from empty that drives the Wasserstein bound (lambda*n) * e^{-t}
// below 1e-3 for desk-scale lambda (plus slack).
inline double default_burn_in(std::uint32_t n) {
    return 3.0 * std::log(static_cast<double>(n)) + 10.0;
}

} // namespace twochoice
