#include "twochoice/coupling.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <stdexcept>

#include "twochoice/parallel.hpp"

namespace twochoice {

CoupledState::CoupledState(LoadState x, LoadState y) : x_(std::move(x)), y_(std::move(y)) {
    if (x_.n() != y_.n()) throw std::invalid_argument("CoupledState: bin counts differ");
    if (x_.clock() != y_.clock()) throw std::invalid_argument("CoupledState: clocks differ");
    const std::uint32_t n = x_.n();
    fen_.assign(static_cast<std::size_t>(n) + 1, 0);
    fen_mask_ = 1;
    while ((fen_mask_ << 1) <= n) fen_mask_ <<= 1;
    for (std::uint32_t j = 0; j < n; ++j) {
        const std::uint32_t xl = x_.load(j), yl = y_.load(j);
        l1_ += xl > yl ? xl - yl : yl - xl;
        slots_ += std::max(xl, yl);
        fen_add(j, std::max(xl, yl));
    }
}

std::uint32_t CoupledState::bin_max(std::uint32_t j) const {
    return std::max(x_.load(j), y_.load(j));
}

void CoupledState::fen_add(std::uint32_t bin, std::int64_t delta) {
    if (delta == 0) return;
    const std::uint32_t n = x_.n();
    for (std::uint32_t i = bin + 1; i <= n; i += i & (0u - i)) {
        fen_[i] = static_cast<std::uint64_t>(static_cast<std::int64_t>(fen_[i]) + delta);
    }
}

CoupledState::SlotRef CoupledState::fen_find(std::uint64_t slot_index) const {
    std::uint64_t remaining = slot_index + 1;
    std::uint32_t pos = 0;
    const std::uint32_t n = x_.n();
    for (std::uint32_t pw = fen_mask_; pw != 0; pw >>= 1) {
        const std::uint32_t next = pos + pw;
        if (next <= n && fen_[next] < remaining) {
            pos = next;
            remaining -= fen_[next];
        }
    }
    return SlotRef{pos, static_cast<std::uint32_t>(remaining)};
}

template <typename Mutate>
void CoupledState::apply(std::uint32_t bin, Mutate&& m) {
    const std::int64_t old_diff =
        std::abs(static_cast<std::int64_t>(x_.load(bin)) - static_cast<std::int64_t>(y_.load(bin)));
    const std::int64_t old_max = bin_max(bin);
    m();
    const std::int64_t new_diff =
        std::abs(static_cast<std::int64_t>(x_.load(bin)) - static_cast<std::int64_t>(y_.load(bin)));
    const std::int64_t new_max = bin_max(bin);
    l1_ = static_cast<std::uint64_t>(static_cast<std::int64_t>(l1_) + (new_diff - old_diff));
    slots_ = static_cast<std::uint64_t>(static_cast<std::int64_t>(slots_) + (new_max - old_max));
    fen_add(bin, new_max - old_max);
}

CoupledEvent CoupledState::step(RandomSource& rng, const SimParams& params) {
    const double arrival_rate = params.arrival_rate();
    const double rate = arrival_rate + static_cast<double>(slots_);
    const double t = clock() + rng.exponential(rate);
    const std::uint64_t dist_before = l1_;

    CoupledEvent ev;
    ev.time = t;
    if (rng.uniform() * rate < arrival_rate) {
        std::uint32_t inline_buf[16];
        std::vector<std::uint32_t> heap_buf;
        std::uint32_t* cb = inline_buf;
        if (params.d > 16) {
            heap_buf.resize(params.d);
            cb = heap_buf.data();
        }
        for (std::uint32_t i = 0; i < params.d; ++i)
            cb[i] = static_cast<std::uint32_t>(rng.uniform_below(params.n));
        const std::span<const std::uint32_t> choices{cb, params.d};

        ev.kind = EventKind::arrival;
        const std::uint32_t bx = x_.resolve_choice(choices);
        const std::uint32_t by = y_.resolve_choice(choices);
        ev.bin_x = bx;
        ev.bin_y = by;
        if (bx == by) {
            apply(bx, [&] {
                x_.add_to_bin(bx);
                y_.add_to_bin(by);
            });
        } else {
            apply(bx, [&] { x_.add_to_bin(bx); });
            apply(by, [&] { y_.add_to_bin(by); });
        }
        ev.height_after_x = x_.load(bx);
        ev.height_after_y = y_.load(by);
    } else {
        const SlotRef slot = fen_find(rng.uniform_below(slots_));
        ev.kind = EventKind::death;
        ev.bin_x = ev.bin_y = slot.bin;
        ev.height = slot.height;
        const bool dx = slot.height <= x_.load(slot.bin);
        const bool dy = slot.height <= y_.load(slot.bin);
        if (!dx && !dy) throw std::logic_error("coupled death hit an unoccupied slot");
        ev.died_x = dx;
        ev.died_y = dy;
        apply(slot.bin, [&] {
            if (dx) x_.remove_from_bin(slot.bin);
            if (dy) y_.remove_from_bin(slot.bin);
        });
    }
    x_.set_clock(t);
    y_.set_clock(t);

    const std::int64_t delta = static_cast<std::int64_t>(l1_) - static_cast<std::int64_t>(dist_before);
    if (delta > 0 || delta < -2)
        throw std::logic_error("coupled step changed the L1 distance by " + std::to_string(delta));
    ev.delta_distance = static_cast<int>(delta);
    return ev;
}

void CoupledState::validate() const {
    std::uint64_t l1 = 0, slots = 0;
    for (std::uint32_t j = 0; j < x_.n(); ++j) {
        const std::uint32_t xl = x_.load(j), yl = y_.load(j);
        l1 += xl > yl ? xl - yl : yl - xl;
        slots += std::max(xl, yl);
    }
    if (l1 != l1_) throw std::logic_error("CoupledState: l1 distance mismatch");
    if (slots != slots_) throw std::logic_error("CoupledState: slot count mismatch");
    if (x_.clock() != y_.clock()) throw std::logic_error("CoupledState: clocks diverged");
}

DecayResult coupling_decay_experiment(const SimParams& params, std::uint64_t r0,
                                      std::span<const double> t_grid, std::uint64_t trials,
                                      const RandomSource& rng, unsigned threads) {
    params.validate();
    if (t_grid.empty()) throw std::invalid_argument("coupling_decay_experiment: empty time grid");
    if (trials == 0) throw std::invalid_argument("coupling_decay_experiment: trials must be >= 1");

    const std::size_t g = t_grid.size();
    std::vector<std::vector<double>> dist(trials, std::vector<double>(g, 0.0));

    parallel_for_index(trials, threads, [&](std::size_t trial) {
        RandomSource r = rng.substream(trial);
        LoadState x(params.n);
        LoadState y(params.n);
        seed_arrivals(y, r0, params.d, r);
        CoupledState cs(std::move(x), std::move(y));
        // Distance is a step function of time: grid times falling before the
        // next jump read the pre-jump value (recovered via the step's delta).
        std::size_t gi = 0;
        while (gi < g) {
            const CoupledEvent ev = cs.step(r, params);
            while (gi < g && t_grid[gi] < ev.time) {
                dist[trial][gi] =
                    static_cast<double>(cs.l1_distance()) - static_cast<double>(ev.delta_distance);
                ++gi;
            }
        }
    });

    DecayResult res;
    res.trials = trials;
    res.points.resize(g);
    bool ok = true;
    for (std::size_t j = 0; j < g; ++j) {
        double mean = 0.0;
        for (std::uint64_t i = 0; i < trials; ++i) mean += dist[i][j];
        mean /= static_cast<double>(trials);
        double var = 0.0;
        for (std::uint64_t i = 0; i < trials; ++i) {
            const double dev = dist[i][j] - mean;
            var += dev * dev;
        }
        var = trials > 1 ? var / static_cast<double>(trials - 1) : 0.0;
        const double se = std::sqrt(var / static_cast<double>(trials));
        const double bound = static_cast<double>(r0) * std::exp(-t_grid[j]);
        res.points[j] = DecayPoint{t_grid[j], mean, se, bound};
        if (mean > bound + 3.0 * se) ok = false;
    }
    res.within_bound = ok;
    return res;
}

bool dominance_run(const SimParams& params, LoadState x0, LoadState y0, RandomSource& rng,
                   double t_end) {
    params.validate();
    for (std::uint32_t j = 0; j < x0.n(); ++j) {
        if (x0.load(j) > y0.load(j))
            throw std::invalid_argument("dominance_run: x0 <= y0 required coordinatewise");
    }
    CoupledState cs(std::move(x0), std::move(y0));
    while (true) {
        const CoupledEvent ev = cs.step(rng, params);
        if (ev.time > t_end) break;
        // Dominance can only break at the touched bins.
        for (const std::uint32_t b : {ev.bin_x, ev.bin_y}) {
            if (cs.x().load(b) > cs.y().load(b))
                throw std::logic_error("dominance_run: X exceeded Y at bin " + std::to_string(b));
        }
    }
    return true;
}

} // namespace twochoice
