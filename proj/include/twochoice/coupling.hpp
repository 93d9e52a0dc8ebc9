#pragma once

#include <cstdint>
#include <vector>

#include "twochoice/engine.hpp"
#include "twochoice/load_state.hpp"
#include "twochoice/random_source.hpp"
#include "twochoice/sim_params.hpp"

namespace twochoice {

// One jump of the coupled pair. Arrivals share the choices and may land in
// different bins; deaths hit a single (bin, height) slot in whichever process
// has a ball there (one or both).
struct CoupledEvent {
    double time = 0.0;
    EventKind kind = EventKind::arrival;
    std::uint32_t bin_x = 0, bin_y = 0;  // deaths: bin_x == bin_y
    std::uint32_t height = 0;            // deaths: the slot height k
    std::uint32_t height_after_x = 0, height_after_y = 0;  // arrivals
    bool died_x = false, died_y = false;
    int delta_distance = 0;
};

// Two trajectories driven by the same arrivals, the same d choices and shared
// height-indexed death slots. The L1 distance between the load vectors is
// maintained incrementally and must never increase; every step checks that.
//
// Death slots are drawn uniformly among the S = sum_j max(x_j, y_j) occupied
// slots. Unoccupied slots would produce no deaths, so restricting the slot
// family to occupied slots leaves the jump law unchanged while keeping the
// bookkeeping finite.
class CoupledState {
public:
    CoupledState(LoadState x, LoadState y);

    const LoadState& x() const { return x_; }
    const LoadState& y() const { return y_; }
    double clock() const { return x_.clock(); }
    std::uint64_t l1_distance() const { return l1_; }
    std::uint64_t occupied_slots() const { return slots_; }

    CoupledEvent step(RandomSource& rng, const SimParams& params);

    // Recomputes distance and slot structures from scratch; throws on mismatch.
    void validate() const;

private:
    LoadState x_, y_;
    std::uint64_t l1_ = 0;
    std::uint64_t slots_ = 0;
    std::vector<std::uint64_t> fen_;  // Fenwick over per-bin max loads
    std::uint32_t fen_mask_ = 0;

    std::uint32_t bin_max(std::uint32_t j) const;
    void fen_add(std::uint32_t bin, std::int64_t delta);
    struct SlotRef {
        std::uint32_t bin;
        std::uint32_t height;
    };
    SlotRef fen_find(std::uint64_t slot_index) const;
    // Refreshes distance/slot bookkeeping for one bin around a mutation.
    template <typename Mutate>
    void apply(std::uint32_t bin, Mutate&& m);
};

struct DecayPoint {
    double t = 0.0;
    double mean = 0.0;
    double se = 0.0;
    double bound = 0.0;  // r0 * e^{-t}
};

struct DecayResult {
    std::vector<DecayPoint> points;
    std::uint64_t trials = 0;
    bool within_bound = false;  // mean <= bound + 3*se at every grid point
};

// Monte Carlo mean L1 distance at each grid time, X_0 empty and Y_0 built by
// r0 d-choice arrivals. Trials use independent substreams of `rng`.
DecayResult coupling_decay_experiment(const SimParams& params, std::uint64_t r0,
                                      std::span<const double> t_grid, std::uint64_t trials,
                                      const RandomSource& rng, unsigned threads = 1);

// Runs the coupling from x0 <= y0 to t_end, checking coordinatewise dominance
// after every jump. Returns true iff it never broke (a break throws: it
// signals an implementation bug, not a valid outcome).
bool dominance_run(const SimParams& params, LoadState x0, LoadState y0, RandomSource& rng,
                   double t_end);

} // namespace twochoice
