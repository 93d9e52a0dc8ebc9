#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "twochoice/load_state.hpp"
#include "twochoice/random_source.hpp"
#include "twochoice/sim_params.hpp"

namespace twochoice {

struct SnapshotOptions {
    bool full_vectors = false;   // copy per-bin loads into each snapshot
    bool track_max_curve = false;  // record (time, max_load) at every change
};

struct Snapshot {
    double time = 0.0;
    std::uint64_t total = 0;
    std::uint32_t max_load = 0;
    std::vector<std::uint64_t> tail_counts;
    std::vector<std::uint32_t> loads;  // empty unless full_vectors
};

struct MaxCurvePoint {
    double time;
    std::uint32_t max_load;
};

// One experiment's samples plus full provenance.
struct RunRecord {
    SimParams params;
    std::uint64_t stream = 0;  // substream index of the generating trial
    double t_begin = 0.0;
    double t_end = 0.0;
    std::vector<double> schedule;  // requested sample times
    std::vector<Snapshot> snapshots;
    std::vector<MaxCurvePoint> max_curve;  // present iff track_max_curve
};

// One jump of the competing-exponentials construction: the clock advances by
// Exp(lambda*n + total), the jump is an arrival with probability
// lambda*n / (lambda*n + total), else a uniform ball dies.
EventRecord next_event(LoadState& state, RandomSource& rng, const SimParams& params);

// Runs jumps until the next one would pass t_end, then sets clock = t_end.
// sample_times must be sorted and >= state.clock(); each time <= t_end
// produces a snapshot of the state at that instant (sampling consumes no
// randomness; times beyond t_end are ignored).
void simulate_until(LoadState& state, RandomSource& rng, const SimParams& params, double t_end,
                    std::span<const double> sample_times, const SnapshotOptions& options,
                    RunRecord& out);

// From the empty state: burn_in time units, then count snapshots spaced by
// `spacing`. For spacing of a few time units the snapshots are close to
// independent draws from the stationary law.
RunRecord equilibrium_sample(const SimParams& params, RandomSource& rng, double burn_in,
                             std::size_t count, double spacing, const SnapshotOptions& options = {});

// No-death variant: ball_count balls thrown one by one, each via d uniform
// choices with replacement.
LoadState sequential_throw_run(std::uint32_t n, std::uint32_t d, std::uint64_t ball_count,
                               RandomSource& rng);

// Places `count` balls by d-choice arrivals (used to build initial states).
void seed_arrivals(LoadState& state, std::uint64_t count, std::uint32_t d, RandomSource& rng);

} // namespace twochoice
