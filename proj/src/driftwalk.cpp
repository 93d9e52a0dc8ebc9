#include "twochoice/driftwalk.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace twochoice {

double bernstein_bound(double variance, double offset_bound, double z) {
    if (variance < 0.0 || offset_bound < 0.0 || z < 0.0)
        throw std::invalid_argument("bernstein_bound: arguments must be nonnegative");
    if (z == 0.0) return 1.0;
    return std::exp(-(z * z) / (2.0 * variance + (2.0 / 3.0) * offset_bound * z));
}

double hitting_bound(const WalkParams& params) {
    if (!(params.p >= 0.0 && params.p <= 1.0 / 3.0))
        throw std::invalid_argument("hitting_bound: requires 0 <= p <= 1/3");
    if (params.r0 >= params.r1)
        throw std::invalid_argument("hitting_bound: requires r0 < r1");
    const double gap = static_cast<double>(params.r1 - params.r0);
    if (!(params.p * static_cast<double>(params.m) >= 2.0 * gap))
        throw std::invalid_argument("hitting_bound: requires p*m >= 2*(r1 - r0)");
    return std::exp(-params.p * static_cast<double>(params.m) / 28.0);
}

double crossing_exact(double p, double q, std::uint32_t a) {
    if (!(q > p && p >= 0.0)) throw std::invalid_argument("crossing_exact: requires q > p >= 0");
    if (!(p + q <= 1.0)) throw std::invalid_argument("crossing_exact: requires p + q <= 1");
    if (a < 1) throw std::invalid_argument("crossing_exact: requires a >= 1");
    if (p == 0.0) return 0.0;

    // h(x) = P(hit a before -1 | start x) for x = 0..a-1, with h(-1) = 0 and
    // h(a) = 1:  p h(x+1) - (p+q) h(x) + q h(x-1) = 0. Thomas algorithm.
    const std::size_t n = a;
    std::vector<double> diag(n, -(p + q)), upper(n, p), lower(n, q), rhs(n, 0.0);
    rhs[n - 1] = -p;  // p * h(a) moved to the right side
    for (std::size_t i = 1; i < n; ++i) {
        const double w = lower[i] / diag[i - 1];
        diag[i] -= w * upper[i - 1];
        rhs[i] -= w * rhs[i - 1];
    }
    std::vector<double> h(n, 0.0);
    h[n - 1] = rhs[n - 1] / diag[n - 1];
    for (std::size_t i = n - 1; i-- > 0;) h[i] = (rhs[i] - upper[i] * h[i + 1]) / diag[i];
    return h[0];
}

WalkStats walk_simulate(const WalkParams& params, WalkMode mode, std::uint64_t trials,
                        RandomSource& rng) {
    if (trials < 1) throw std::invalid_argument("walk_simulate: trials must be >= 1");
    std::uint64_t hits = 0;

    if (mode == WalkMode::crossing) {
        if (!(params.q > params.p && params.p >= 0.0 && params.p + params.q <= 1.0))
            throw std::invalid_argument("walk_simulate: crossing requires q > p >= 0, p + q <= 1");
        if (params.a < 1) throw std::invalid_argument("walk_simulate: crossing requires a >= 1");
        for (std::uint64_t t = 0; t < trials; ++t) {
            if (params.p == 0.0) break;  // can never move up; frequency is exactly 0
            std::int64_t r = 0;
            while (true) {
                const double u = rng.uniform();
                if (u < params.p) {
                    ++r;
                } else if (u < params.p + params.q) {
                    --r;
                }
                if (r == static_cast<std::int64_t>(params.a)) {
                    ++hits;
                    break;
                }
                if (r == -1) break;
            }
        }
    } else {
        // Worst-case homogeneous walk of the hitting lemma: up 2p, down p.
        (void)hitting_bound(params);  // validates the preconditions
        for (std::uint64_t t = 0; t < trials; ++t) {
            std::int64_t r = params.r0;
            bool reached = r >= params.r1;
            for (std::uint64_t s = 0; s < params.m && !reached; ++s) {
                const double u = rng.uniform();
                if (u < 2.0 * params.p) {
                    ++r;
                } else if (u < 3.0 * params.p) {
                    --r;
                }
                reached = r >= params.r1;
            }
            if (!reached) ++hits;  // a "miss" of the target
        }
    }

    WalkStats st;
    st.trials = trials;
    st.frequency = static_cast<double>(hits) / static_cast<double>(trials);
    st.se = std::sqrt(st.frequency * (1.0 - st.frequency) / static_cast<double>(trials));
    return st;
}

} // namespace twochoice
