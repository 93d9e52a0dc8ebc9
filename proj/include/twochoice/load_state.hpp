#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "twochoice/sim_params.hpp"

namespace twochoice {

enum class EventKind : std::uint8_t { arrival, death };

// One jump of a trajectory. For arrivals, height is the number of balls in
// the bin including the new one; for deaths it is the height slot the removed
// ball occupied in the canonical (bin-major, height-minor) enumeration.
struct EventRecord {
    double time = 0.0;
    EventKind kind = EventKind::arrival;
    std::uint32_t bin = 0;
    std::uint32_t height = 0;
};

// Per-bin loads with incrementally maintained occupancy tail counts
// (tail_counts[i] = number of bins with load >= i, kept for 0..max_load),
// total ball count and the simulation clock.
//
// A Fenwick tree over the loads supports O(log n) uniform-ball selection in
// the canonical enumeration, which is what the death jumps need.
class LoadState {
public:
    explicit LoadState(std::uint32_t n);
    LoadState(std::uint32_t n, std::span<const std::uint32_t> initial_loads);

    std::uint32_t n() const { return static_cast<std::uint32_t>(loads_.size()); }
    std::uint64_t total() const { return total_; }
    double clock() const { return clock_; }
    void set_clock(double t) { clock_ = t; }

    std::uint32_t load(std::uint32_t bin) const { return loads_[bin]; }
    const std::vector<std::uint32_t>& loads() const { return loads_; }
    const std::vector<std::uint64_t>& tail_counts() const { return tail_counts_; }
    std::uint32_t max_load() const { return static_cast<std::uint32_t>(tail_counts_.size() - 1); }

    // First least-loaded bin among the choices, without mutating.
    std::uint32_t resolve_choice(std::span<const std::uint32_t> choices) const;

    // Places a ball into the first least-loaded bin among the choices
    // (drawn with replacement by the caller); returns the receiving bin.
    std::uint32_t place_ball(std::span<const std::uint32_t> choices);

    // Removes the ball_index-th ball (0-based) in the canonical enumeration:
    // bins in index order, balls within a bin counted by height.
    struct BallRef {
        std::uint32_t bin;
        std::uint32_t height;
    };
    BallRef remove_ball(std::uint64_t ball_index);

    // Direct single-bin mutations (the coupling's height-slot deaths land here).
    void add_to_bin(std::uint32_t bin);
    void remove_from_bin(std::uint32_t bin);

    // Recomputes all derived structures from the loads and throws
    // std::logic_error on any mismatch. Test aid.
    void validate() const;

private:
    std::vector<std::uint32_t> loads_;
    std::vector<std::uint64_t> tail_counts_;  // tail_counts_[0] == n always
    std::vector<std::uint64_t> fen_;          // 1-based Fenwick over loads
    std::uint64_t total_ = 0;
    double clock_ = 0.0;
    std::uint32_t fen_mask_ = 0;  // highest power of two <= n

    void fen_add(std::uint32_t bin, std::int64_t delta);
    BallRef fen_find(std::uint64_t ball_index) const;
};

// Builds a state from explicit loads; rejects a length mismatch with params.n.
LoadState build_state(const SimParams& params, std::span<const std::uint32_t> initial_loads);

} // namespace twochoice
