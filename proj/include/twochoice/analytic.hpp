#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "twochoice/tail_profile.hpp"

namespace twochoice {

// P(Po(mu) >= i), absolute error <= 1e-12: complemented partial sums below
// the mean, direct upper-tail summation above it.
double poisson_tail(double mu, std::uint64_t i);

double poisson_log_pmf(double mu, std::uint64_t k);
double poisson_pmf(double mu, std::uint64_t k);

// Two-sided Chernoff-type bound P(|X - mu| >= eps*mu) <= 2 exp(-eps^2 mu / 3),
// valid for 0 <= eps <= 1.
double poisson_deviation_bound(double mu, double eps);

// Upper-tail bound P(X >= k) <= mu^k / k! (log-safe evaluation).
double poisson_upper_factorial_bound(double mu, std::uint64_t k);

enum class LevelKind : std::uint8_t { d1_m, jstar };

struct LevelPrediction {
    std::uint32_t level = 1;
    LevelKind kind = LevelKind::d1_m;
    double threshold = 0.0;
};

// d = 1: the least positive i with n * p_{i+1} <= 1 / ln ln n. Requires
// n >= 16 so that ln ln n > 0.
LevelPrediction d1_levels(double n, double lambda);

// The proven envelope around the d=1 maximum load:
//   P(M >= i) <= n * p_i      and      P(M <= i) = (1 - p_{i+1})^n <= e^{-n p_{i+1}}.
double d1_prob_max_ge_bound(double n, double lambda, std::uint32_t i);
double d1_prob_max_le_exact(double n, double lambda, std::uint32_t i);
double d1_prob_max_le_bound(double n, double lambda, std::uint32_t i);

enum class OdeVariant : std::uint8_t {
    continuous,  // dv_k/dt = lambda (v_{k-1}^d - v_k^d) - k (v_k - v_{k+1})
    sequential,  // dv_k/dt = lambda (v_{k-1}^d - v_k^d); lambda = 1 is the
                 // sequential-throw normalization (time = balls per bin)
};

struct OdeSolution {
    std::vector<double> times;
    std::vector<TailProfile> profiles;
    std::uint32_t d = 2;
    double lambda = 1.0;
    std::size_t k_max = 64;
    OdeVariant variant = OdeVariant::continuous;

    const TailProfile& final_profile() const { return profiles.back(); }
};

struct TruncationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Adaptive embedded Runge-Kutta integration of the truncated system with
// v(t, k_max+1) := 0 and a per-step monotonicity projection. Throws
// TruncationError if mass reaches the truncation boundary.
OdeSolution ode_solve(std::uint32_t d, double lambda, const TailProfile& initial, double t_end,
                      std::size_t k_max, OdeVariant variant);

struct FixedPointError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Solves lambda * v(i-1)^d = i * v(i) + sum_{k >= i+1} v(k) for all i >= 1
// with v(0) = 1, by a damped sweep (omega = 0.5). k_max doubles automatically
// while the truncation tail exceeds 1e-14. An optional starting profile
// replaces the all-zero initialization (the solution must not depend on it).
TailProfile fixed_point(std::uint32_t d, double lambda, std::size_t k_max = 64, double tol = 1e-12,
                        const TailProfile* initial = nullptr);

// Sup-norm residual of the summed stationarity relation along a profile.
double fixed_point_residual(const TailProfile& v, std::uint32_t d, double lambda);

struct Bracket {
    double lower = 0.0;
    double upper = 0.0;
    bool lower_valid = true;  // the lower bound needs i >= ceil(2*lambda) - 1
};

// One-step recurrence bracket: lambda*u^d/(i+1) <= u(i) <= 2*lambda*u^d/i.
Bracket recurrence_bracket(double u_prev, std::uint32_t i, std::uint32_t d, double lambda);

struct JstarPrediction {
    std::uint32_t jstar = 1;
    std::uint32_t support_lo = 1;
    std::uint32_t support_hi = 2;
    double threshold = 0.0;
};

// j*(n): least positive i with u(i) < n^{-1/2} ln^3 n, scanned along the given
// profile. Predicted two-point support is {j*, j*+1} for d = 2 and
// {j*-1, j*} for d >= 3.
JstarPrediction jstar_predict(double n, std::uint32_t d, double lambda, const TailProfile& profile);

// Same, with the profile taken from the mean-field fixed point.
JstarPrediction jstar_predict(double n, std::uint32_t d, double lambda);

} // namespace twochoice
