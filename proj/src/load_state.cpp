#include "twochoice/load_state.hpp"

#include <limits>
#include <sstream>
#include <stdexcept>

namespace twochoice {

LoadState::LoadState(std::uint32_t n) {
    if (n < 1) throw std::invalid_argument("LoadState: n must be >= 1");
    loads_.assign(n, 0);
    tail_counts_.assign(1, n);
    fen_.assign(static_cast<std::size_t>(n) + 1, 0);
    fen_mask_ = 1;
    while ((fen_mask_ << 1) <= n) fen_mask_ <<= 1;
}

LoadState::LoadState(std::uint32_t n, std::span<const std::uint32_t> initial_loads) : LoadState(n) {
    if (initial_loads.size() != n)
        throw std::invalid_argument("LoadState: initial_loads length must equal n");
    for (std::uint32_t j = 0; j < n; ++j) {
        for (std::uint32_t k = 0; k < initial_loads[j]; ++k) add_to_bin(j);
    }
}

void LoadState::fen_add(std::uint32_t bin, std::int64_t delta) {
    for (std::uint32_t i = bin + 1; i <= n(); i += i & (0u - i)) {
        fen_[i] = static_cast<std::uint64_t>(static_cast<std::int64_t>(fen_[i]) + delta);
    }
}

LoadState::BallRef LoadState::fen_find(std::uint64_t ball_index) const {
    // Smallest bin whose prefix load sum exceeds ball_index; the remainder is
    // the 1-based height within that bin.
    std::uint64_t remaining = ball_index + 1;
    std::uint32_t pos = 0;
    for (std::uint32_t pw = fen_mask_; pw != 0; pw >>= 1) {
        const std::uint32_t next = pos + pw;
        if (next <= n() && fen_[next] < remaining) {
            pos = next;
            remaining -= fen_[next];
        }
    }
    return BallRef{pos, static_cast<std::uint32_t>(remaining)};
}

void LoadState::add_to_bin(std::uint32_t bin) {
    const std::uint32_t new_load = ++loads_[bin];
    ++total_;
    fen_add(bin, +1);
    if (new_load < tail_counts_.size()) {
        ++tail_counts_[new_load];
    } else {
        tail_counts_.push_back(1);
    }
}

void LoadState::remove_from_bin(std::uint32_t bin) {
    if (loads_[bin] == 0) throw std::invalid_argument("LoadState: bin is empty");
    const std::uint32_t old_load = loads_[bin]--;
    --total_;
    fen_add(bin, -1);
    if (--tail_counts_[old_load] == 0 && old_load + 1 == tail_counts_.size()) {
        tail_counts_.pop_back();
    }
}

std::uint32_t LoadState::resolve_choice(std::span<const std::uint32_t> choices) const {
    if (choices.empty()) throw std::invalid_argument("place_ball: empty choice list");
    std::uint32_t best = choices[0];
    if (best >= n()) throw std::out_of_range("place_ball: bin index out of range");
    std::uint32_t best_load = loads_[best];
    for (std::size_t i = 1; i < choices.size(); ++i) {
        const std::uint32_t c = choices[i];
        if (c >= n()) throw std::out_of_range("place_ball: bin index out of range");
        if (loads_[c] < best_load) {  // ties keep the first chosen
            best = c;
            best_load = loads_[c];
        }
    }
    return best;
}

std::uint32_t LoadState::place_ball(std::span<const std::uint32_t> choices) {
    const std::uint32_t best = resolve_choice(choices);
    add_to_bin(best);
    return best;
}

LoadState::BallRef LoadState::remove_ball(std::uint64_t ball_index) {
    if (total_ == 0) throw std::invalid_argument("remove_ball: no balls present");
    if (ball_index >= total_) throw std::invalid_argument("remove_ball: ball_index out of range");
    const BallRef ref = fen_find(ball_index);
    remove_from_bin(ref.bin);
    return ref;
}

void LoadState::validate() const {
    std::uint64_t total = 0;
    std::uint32_t max_load = 0;
    for (const auto l : loads_) {
        total += l;
        if (l > max_load) max_load = l;
    }
    auto fail = [](const std::string& what) { throw std::logic_error("LoadState invariant violated: " + what); };
    if (total != total_) fail("total");
    if (tail_counts_.size() != static_cast<std::size_t>(max_load) + 1) fail("tail_counts length");
    std::vector<std::uint64_t> expect(static_cast<std::size_t>(max_load) + 1, 0);
    for (const auto l : loads_)
        for (std::uint32_t i = 0; i <= l; ++i) ++expect[i];
    for (std::size_t i = 0; i < expect.size(); ++i)
        if (expect[i] != tail_counts_[i]) fail("tail_counts content");
    std::uint64_t tail_sum = 0;
    for (std::size_t i = 1; i < tail_counts_.size(); ++i) tail_sum += tail_counts_[i];
    if (tail_sum != total_) fail("tail_counts sum");
    if (tail_counts_[0] != n()) fail("tail_counts[0]");
    // Fenwick prefix sums against direct prefix sums.
    std::uint64_t prefix = 0;
    for (std::uint32_t j = 0; j < n(); ++j) {
        prefix += loads_[j];
        std::uint64_t fsum = 0;
        for (std::uint32_t i = j + 1; i > 0; i -= i & (0u - i)) fsum += fen_[i];
        if (fsum != prefix) fail("fenwick prefix");
    }
}

LoadState build_state(const SimParams& params, std::span<const std::uint32_t> initial_loads) {
    params.validate();
    if (initial_loads.size() != params.n) {
        std::ostringstream os;
        os << "build_state: expected " << params.n << " loads, got " << initial_loads.size();
        throw std::invalid_argument(os.str());
    }
    return LoadState(params.n, initial_loads);
}

} // namespace twochoice
