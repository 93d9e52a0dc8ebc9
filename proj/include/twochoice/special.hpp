#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace twochoice {

// Regularized incomplete gamma functions P(a,x) and Q(a,x) = 1 - P(a,x),
// series for x < a+1 and continued fraction otherwise.
double gamma_p(double a, double x);
double gamma_q(double a, double x);

// Survival function of the chi-square distribution: P(X >= stat | dof).
double chi_square_sf(double stat, double dof);

// Kolmogorov distribution survival Q_KS(z) = 2 * sum_{k>=1} (-1)^{k-1} e^{-2 k^2 z^2}.
double kolmogorov_sf(double z);

struct GofResult {
    double stat = 0.0;
    double dof = 0.0;
    double p_value = 1.0;
};

// Chi-square goodness of fit of counts against expected probabilities.
// Categories are pooled from the tail until every expected count is at least
// min_expected.
GofResult chi_square_gof(std::span<const std::uint64_t> counts, std::span<const double> probs,
                         double min_expected = 5.0);

// Chi-square independence test on a two-way contingency table. Rows/columns
// with small expected mass are pooled.
GofResult chi_square_independence(const std::vector<std::vector<std::uint64_t>>& table,
                                  double min_expected = 5.0);

struct KsResult {
    double d = 0.0;
    double p_value = 1.0;
};

// One-sample KS test of values against the uniform law on [0,1).
KsResult ks_test_uniform(std::span<const double> values);

// Two-sample KS test (asymptotic p-value; conservative under ties).
KsResult ks_test_two_sample(std::span<const double> a, std::span<const double> b);

// Solves A x = b by Gaussian elimination with partial pivoting (dense, small).
std::vector<double> solve_dense(std::vector<std::vector<double>> a, std::vector<double> b);

} // namespace twochoice
