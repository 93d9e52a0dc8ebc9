#include "twochoice/engine.hpp"

#include <algorithm>
#include <stdexcept>

namespace twochoice {

namespace {

constexpr std::size_t kInlineChoices = 16;

// Draws d uniform bins with replacement into a stack buffer when possible.
struct ChoiceBuffer {
    std::uint32_t inline_buf[kInlineChoices];
    std::vector<std::uint32_t> heap_buf;

    std::span<const std::uint32_t> draw(RandomSource& rng, std::uint32_t d, std::uint32_t n) {
        std::uint32_t* out = inline_buf;
        if (d > kInlineChoices) {
            heap_buf.resize(d);
            out = heap_buf.data();
        }
        for (std::uint32_t i = 0; i < d; ++i)
            out[i] = static_cast<std::uint32_t>(rng.uniform_below(n));
        return {out, d};
    }
};

} // namespace

EventRecord next_event(LoadState& state, RandomSource& rng, const SimParams& params) {
    const double arrival_rate = params.arrival_rate();
    const double rate = arrival_rate + static_cast<double>(state.total());
    const double t = state.clock() + rng.exponential(rate);

    EventRecord ev;
    ev.time = t;
    if (rng.uniform() * rate < arrival_rate) {
        ChoiceBuffer buf;
        const auto choices = buf.draw(rng, params.d, params.n);
        ev.kind = EventKind::arrival;
        ev.bin = state.place_ball(choices);
        ev.height = state.load(ev.bin);
    } else {
        const auto ref = state.remove_ball(rng.uniform_below(state.total()));
        ev.kind = EventKind::death;
        ev.bin = ref.bin;
        ev.height = ref.height;
    }
    state.set_clock(t);
    return ev;
}

void simulate_until(LoadState& state, RandomSource& rng, const SimParams& params, double t_end,
                    std::span<const double> sample_times, const SnapshotOptions& options,
                    RunRecord& out) {
    if (t_end < state.clock()) throw std::invalid_argument("simulate_until: t_end before clock");

    const double arrival_rate = params.arrival_rate();
    ChoiceBuffer buf;
    std::size_t si = 0;

    auto take_snapshot = [&](double at) {
        Snapshot s;
        s.time = at;
        s.total = state.total();
        s.max_load = state.max_load();
        s.tail_counts = state.tail_counts();
        if (options.full_vectors) s.loads = state.loads();
        out.snapshots.push_back(std::move(s));
    };

    if (options.track_max_curve && out.max_curve.empty())
        out.max_curve.push_back({state.clock(), state.max_load()});

    while (true) {
        const double rate = arrival_rate + static_cast<double>(state.total());
        const double t_next = state.clock() + rng.exponential(rate);
        const double sample_limit = std::min(t_next, t_end);
        while (si < sample_times.size() && sample_times[si] <= sample_limit) {
            take_snapshot(sample_times[si]);
            ++si;
        }
        if (t_next > t_end) {
            state.set_clock(t_end);
            break;
        }
        const std::uint32_t max_before = state.max_load();
        if (rng.uniform() * rate < arrival_rate) {
            state.place_ball(buf.draw(rng, params.d, params.n));
        } else {
            state.remove_ball(rng.uniform_below(state.total()));
        }
        state.set_clock(t_next);
        if (options.track_max_curve && state.max_load() != max_before)
            out.max_curve.push_back({t_next, state.max_load()});
    }
    out.t_end = t_end;
}

RunRecord equilibrium_sample(const SimParams& params, RandomSource& rng, double burn_in,
                             std::size_t count, double spacing, const SnapshotOptions& options) {
    params.validate();
    if (!(burn_in >= 0.0)) throw std::invalid_argument("equilibrium_sample: burn_in must be >= 0");
    if (!(spacing > 0.0)) throw std::invalid_argument("equilibrium_sample: spacing must be > 0");

    RunRecord rec;
    rec.params = params;
    rec.stream = rng.stream();
    if (count == 0) return rec;

    rec.schedule.reserve(count);
    for (std::size_t k = 0; k < count; ++k)
        rec.schedule.push_back(burn_in + static_cast<double>(k) * spacing);

    LoadState state(params.n);
    rec.t_begin = 0.0;
    simulate_until(state, rng, params, rec.schedule.back(), rec.schedule, options, rec);
    return rec;
}

void seed_arrivals(LoadState& state, std::uint64_t count, std::uint32_t d, RandomSource& rng) {
    ChoiceBuffer buf;
    for (std::uint64_t i = 0; i < count; ++i)
        state.place_ball(buf.draw(rng, d, state.n()));
}

LoadState sequential_throw_run(std::uint32_t n, std::uint32_t d, std::uint64_t ball_count,
                               RandomSource& rng) {
    if (n < 1 || d < 1) throw std::invalid_argument("sequential_throw_run: n and d must be >= 1");
    LoadState state(n);
    seed_arrivals(state, ball_count, d, rng);
    return state;
}

} // namespace twochoice
