#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "twochoice/engine.hpp"
#include "twochoice/random_source.hpp"
#include "twochoice/sim_params.hpp"
#include "twochoice/tail_profile.hpp"

namespace twochoice {

// Sample mean with a standard error inflated by the lag-1 autocorrelation
// factor sqrt((1 + rho) / (1 - rho)), rho floored at 0.
struct SeriesStats {
    double mean = 0.0;
    double se = 0.0;
    double variance = 0.0;
    double rho1 = 0.0;
    std::size_t count = 0;
};
SeriesStats series_stats(std::span<const double> values);

struct ProfileEstimate {
    TailProfile mean;
    std::vector<double> se;  // per level, autocorrelation-corrected
    std::size_t samples = 0;
};

// Mean empirical tail profile u(i) = tail_counts[i] / n over snapshots.
ProfileEstimate empirical_profile(std::span<const Snapshot> samples, std::uint32_t n);

struct ResidualEstimate {
    double value = 0.0;
    double se = 0.0;
    std::size_t samples = 0;
};

// Empirical residual of the stationarity identity
//   lambda E[u(i-1,X)^d] - i u(i) - sum_{k>=i+1} u(k) = 0.
ResidualEstimate balance_residual(std::span<const Snapshot> samples, std::uint32_t n,
                                  std::uint32_t i, std::uint32_t d, double lambda);

struct MaxLoadDistribution {
    std::map<std::uint32_t, double> pmf;
    std::uint32_t best_pair_lo = 0;  // best two consecutive values {lo, lo+1}
    double best_pair_mass = 0.0;
    std::size_t samples = 0;
};
MaxLoadDistribution maxload_distribution(std::span<const Snapshot> samples);

// Total variation distance (1/2) sum |a - b| between mass functions on a
// common countable support; rejects inputs that do not sum to 1 within 1e-9.
double tv_estimate(const std::map<std::int64_t, double>& a, const std::map<std::int64_t, double>& b);

// TV between an empirical histogram (integer-valued, subnormalized by
// `samples`) and Po(mu), accounting for Poisson mass outside the histogram.
double tv_vs_poisson(const std::map<std::int64_t, double>& hist, double mu);

struct ChaosResult {
    double tv = 0.0;
    double truncation_mass = 0.0;  // joint mass beyond the k_cut grid
    std::uint32_t r = 2;
    std::uint32_t k_cut = 10;
    std::size_t samples = 0;
};

// TV between the empirical joint law of bins 0..r-1 and the product of their
// empirical marginals, both truncated to {0..k_cut}^r. Snapshots must carry
// full load vectors.
ChaosResult chaoticity_tv(std::span<const Snapshot> samples, std::uint32_t r, std::uint32_t k_cut = 10);

// Estimation-noise floor for chaoticity_tv: the TV the same estimator reports
// on synthetic samples drawn from the product of the empirical marginals.
double chaoticity_noise_floor(std::span<const Snapshot> samples, std::uint32_t r,
                              std::uint32_t k_cut, std::size_t repetitions, RandomSource& rng);

// Pair (r = 2) variant that pools all ordered pairs of distinct bins instead
// of two fixed indices. Bin loads are exchangeable, so this estimates the same
// two-bin joint law with a far lower noise floor; only level counts are
// needed, which the tail counts already carry.
ChaosResult chaoticity_tv_pairs(std::span<const Snapshot> samples, std::uint32_t k_cut = 10);

// Matching noise floor: synthetic snapshots of n i.i.d. loads drawn from the
// pooled marginal, pushed through the same all-pairs estimator.
double chaoticity_pairs_noise_floor(std::span<const Snapshot> samples, std::uint32_t k_cut,
                                    std::size_t repetitions, RandomSource& rng);

struct MixingPoint {
    double t = 0.0;
    double mean_total = 0.0;
    double se = 0.0;
    double expected_total = 0.0;  // lambda * n * (1 - e^{-t})
    double tv_po = 0.0;           // plug-in TV(total-load histogram, Po(lambda n))
};

// Monte Carlo mean of |X_t| and plug-in TV against Po(lambda n) on a time
// grid, every trial started from the empty state on its own substream.
std::vector<MixingPoint> mixing_curve(const SimParams& params, std::span<const double> t_grid,
                                      std::uint64_t trials, const RandomSource& rng,
                                      unsigned threads = 1);

// Noise floor of the plug-in TV: expected TV between a histogram of `samples`
// i.i.d. Po(mu) draws and Po(mu) itself, averaged over repetitions.
double mixing_tv_noise_floor(double mu, std::size_t samples, std::size_t repetitions,
                             RandomSource& rng);

// Poisson variate (inversion below 30, PTRS otherwise).
std::uint64_t poisson_sample(double mu, RandomSource& rng);

// Exact extrema of the max load over [t0, t1], from a run recorded with
// track_max_curve. M changes only at jumps, so jump tracking is exact.
struct Extrema {
    std::uint32_t min = 0;
    std::uint32_t max = 0;
};
Extrema interval_extrema(const RunRecord& record, double t0, double t1);

// Time-weighted median of the max load over [t0, t1] from the same curve.
std::uint32_t median_max_load(const RunRecord& record, double t0, double t1);

// Exact stationary distribution of the two-bin chain with per-bin loads capped
// at `cap` (outflow at the cap is dropped, i.e. reflecting truncation).
// Brute-force oracle for the balance identity.
class TwoBinExact {
public:
    TwoBinExact(double lambda, std::uint32_t d, std::uint32_t cap);

    double pi(std::uint32_t a, std::uint32_t b) const;
    // Residual of the summed stationarity identity under the exact law.
    double balance_residual(std::uint32_t i) const;
    // Bound on the stationary mass perturbed by the cap: n * P(Po(lambda d) > cap).
    double truncation_error_bound() const;

private:
    double lambda_;
    std::uint32_t d_;
    std::uint32_t cap_;
    std::vector<double> pi_;
    std::size_t idx(std::uint32_t a, std::uint32_t b) const { return a * (cap_ + 1ull) + b; }
};

} // namespace twochoice
