#include <doctest.h>

#include <cmath>
#include <vector>

#include "twochoice/analytic.hpp"
#include "twochoice/engine.hpp"
#include "twochoice/special.hpp"
#include "twochoice/stats.hpp"

using namespace twochoice;

namespace {

SimParams make_params(std::uint32_t n, std::uint32_t d, double lambda, std::uint64_t seed) {
    SimParams p;
    p.n = n;
    p.d = d;
    p.lambda = lambda;
    p.seed = seed;
    return p;
}

} // namespace

TEST_SUITE("engine") {

TEST_CASE("empty state can only produce arrivals") {
    const SimParams p = make_params(4, 2, 0.5, 1);
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        RandomSource rng(seed);
        LoadState s(p.n);
        const EventRecord ev = next_event(s, rng, p);
        CHECK(ev.kind == EventKind::arrival);
        CHECK(s.total() == 1);
    }
}

TEST_CASE("arrival fraction at equilibrium is the rate ratio") {
    // At equilibrium |X| concentrates at lambda*n, so the arrival probability
    // per jump is close to 1/2; 1e5 jumps pin the fraction within 3 SE.
    const SimParams p = make_params(1000, 2, 1.0, 7);
    RandomSource rng(p.seed);
    LoadState s(p.n);
    RunRecord warm;
    simulate_until(s, rng, p, default_burn_in(p.n), {}, {}, warm);
    const int events = 100000;
    int arrivals = 0;
    for (int i = 0; i < events; ++i)
        arrivals += next_event(s, rng, p).kind == EventKind::arrival ? 1 : 0;
    const double frac = static_cast<double>(arrivals) / events;
    const double se = std::sqrt(0.25 / events);
    CHECK(std::abs(frac - 0.5) <= 3.0 * se + 1.0 / (8.0 * p.n));
}

TEST_CASE("simulate_until honors the horizon and the snapshot schedule") {
    const SimParams p = make_params(10, 2, 1.0, 3);
    RandomSource rng(p.seed);
    LoadState s(p.n);
    RunRecord rec;

    SUBCASE("zero-length horizon leaves the state unchanged") {
        simulate_until(s, rng, p, 0.0, {}, {}, rec);
        CHECK(s.total() == 0);
        CHECK(s.clock() == 0.0);
    }

    SUBCASE("observer times produce exactly those snapshots") {
        const std::vector<double> times{0.5, 1.0};
        simulate_until(s, rng, p, 1.0, times, {}, rec);
        REQUIRE(rec.snapshots.size() == 2);
        CHECK(rec.snapshots[0].time == 0.5);
        CHECK(rec.snapshots[1].time == 1.0);
        CHECK(s.clock() == 1.0);
    }

    SUBCASE("going backwards is rejected") {
        s.set_clock(2.0);
        CHECK_THROWS_AS(simulate_until(s, rng, p, 1.0, {}, {}, rec), std::invalid_argument);
    }
}

TEST_CASE("growth from empty matches lambda*n*(1-e^-t)") {
    // E|X_t| = lambda n (1 - e^{-t}) exactly; X_t is Poisson so the spread is
    // known too. 50 runs at n=1e4, t=2.
    const SimParams p = make_params(10000, 2, 1.0, 11);
    const double expect = 1e4 * (1.0 - std::exp(-2.0));  // 8646.647...
    const int runs = 50;
    double acc = 0.0;
    RandomSource master(p.seed);
    for (int r = 0; r < runs; ++r) {
        RandomSource rng = master.substream(r);
        LoadState s(p.n);
        RunRecord rec;
        simulate_until(s, rng, p, 2.0, {}, {}, rec);
        acc += static_cast<double>(s.total());
    }
    const double mean = acc / runs;
    const double se = std::sqrt(expect / runs);  // sd = sqrt(mu) for Poisson
    CHECK(std::abs(mean - expect) <= 3.0 * se);
}

TEST_CASE("equilibrium_sample hits Poisson total-load moments at desk scale") {
    const SimParams p = make_params(200, 2, 1.0, 5);
    RandomSource rng(p.seed);

    SUBCASE("count of zero gives an empty record") {
        const RunRecord rec = equilibrium_sample(p, rng, 10.0, 0, 1.0);
        CHECK(rec.snapshots.empty());
        CHECK(rec.schedule.empty());
    }

    SUBCASE("mean and dispersion") {
        const std::size_t count = 1500;
        const RunRecord rec = equilibrium_sample(p, rng, default_burn_in(p.n), count, 2.0);
        REQUIRE(rec.snapshots.size() == count);
        std::vector<double> totals;
        totals.reserve(count);
        for (const auto& s : rec.snapshots) totals.push_back(static_cast<double>(s.total));
        const SeriesStats st = series_stats(totals);
        const double mu = 200.0;
        CHECK(std::abs(st.mean - mu) <= 4.0 * std::sqrt(mu / count) + 3.0 * st.se);
        CHECK(st.variance / st.mean > 0.85);
        CHECK(st.variance / st.mean < 1.15);
    }
}

TEST_CASE("per-bin loads are Poisson(lambda) and independent when d = 1") {
    const SimParams p = make_params(400, 1, 1.0, 17);
    RandomSource rng(p.seed);
    SnapshotOptions opts;
    opts.full_vectors = true;
    const RunRecord rec = equilibrium_sample(p, rng, default_burn_in(p.n), 1200, 3.0, opts);

    // Histogram of the final snapshot: n i.i.d. Po(lambda) values.
    const auto& last = rec.snapshots.back();
    std::vector<std::uint64_t> counts(12, 0);
    for (const auto l : last.loads) counts[std::min<std::uint32_t>(l, 11)]++;
    std::vector<double> probs(12);
    for (std::size_t k = 0; k < 11; ++k) probs[k] = poisson_pmf(1.0, k);
    probs[11] = poisson_tail(1.0, 11);
    const GofResult gof = chi_square_gof(counts, probs);
    CHECK(gof.p_value > 0.001);

    // Independence of two fixed bins across well-spaced snapshots.
    std::vector<std::vector<std::uint64_t>> table(6, std::vector<std::uint64_t>(6, 0));
    for (const auto& s : rec.snapshots)
        table[std::min<std::uint32_t>(s.loads[0], 5)][std::min<std::uint32_t>(s.loads[1], 5)]++;
    const GofResult ind = chi_square_independence(table);
    CHECK(ind.p_value > 0.001);
}

TEST_CASE("inter-event waits in a fixed-total segment are Exp(lambda*n + total)") {
    const SimParams p = make_params(100, 2, 1.0, 23);
    RandomSource rng(p.seed);
    LoadState s(p.n);
    RunRecord warm;
    simulate_until(s, rng, p, default_burn_in(p.n), {}, {}, warm);

    const std::uint64_t pivot = 100;  // condition on total == lambda*n
    const double rate = p.arrival_rate() + static_cast<double>(pivot);
    std::vector<double> u;
    while (u.size() < 3000) {
        const double before = s.clock();
        const std::uint64_t tot = s.total();
        next_event(s, rng, p);
        if (tot == pivot) u.push_back(-std::expm1(-rate * (s.clock() - before)));
    }
    const KsResult ks = ks_test_uniform(u);
    CHECK(ks.p_value > 0.001);
}

TEST_CASE("total load stays within 20 percent of lambda*n over long windows") {
    const SimParams p = make_params(1000, 2, 1.0, 29);
    const int runs = 100;
    int ok = 0;
    RandomSource master(p.seed);
    for (int r = 0; r < runs; ++r) {
        RandomSource rng = master.substream(r);
        LoadState s(p.n);
        RunRecord warm;
        simulate_until(s, rng, p, default_burn_in(p.n), {}, {}, warm);
        bool inside = true;
        const double t_end = s.clock() + 100.0;
        while (s.clock() < t_end) {
            next_event(s, rng, p);
            if (s.total() < 800 || s.total() > 1200) inside = false;
        }
        ok += inside ? 1 : 0;
    }
    CHECK(ok >= 99);
}

TEST_CASE("identical seeds give identical event streams and run records") {
    const SimParams p = make_params(50, 2, 1.5, 31);
    auto run = [&](std::uint64_t stream) {
        RandomSource rng = RandomSource(p.seed).substream(stream);
        LoadState s(p.n);
        std::vector<EventRecord> evs;
        for (int i = 0; i < 5000; ++i) evs.push_back(next_event(s, rng, p));
        return evs;
    };
    const auto a = run(4);
    const auto b = run(4);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].time == b[i].time);
        CHECK(a[i].kind == b[i].kind);
        CHECK(a[i].bin == b[i].bin);
        CHECK(a[i].height == b[i].height);
        if (i > 0) CHECK(a[i].time >= a[i - 1].time);
    }

    RandomSource r1 = RandomSource(p.seed).substream(9);
    RandomSource r2 = RandomSource(p.seed).substream(9);
    const RunRecord ra = equilibrium_sample(p, r1, 5.0, 50, 0.5);
    const RunRecord rb = equilibrium_sample(p, r2, 5.0, 50, 0.5);
    REQUIRE(ra.snapshots.size() == rb.snapshots.size());
    for (std::size_t i = 0; i < ra.snapshots.size(); ++i) {
        CHECK(ra.snapshots[i].total == rb.snapshots[i].total);
        CHECK(ra.snapshots[i].tail_counts == rb.snapshots[i].tail_counts);
    }
}

TEST_CASE("sequential throws") {
    RandomSource rng(37);
    SUBCASE("zero balls") {
        const LoadState s = sequential_throw_run(5, 2, 0, rng);
        CHECK(s.total() == 0);
    }
    SUBCASE("single bin") {
        const LoadState s = sequential_throw_run(1, 3, 7, rng);
        CHECK(s.loads() == std::vector<std::uint32_t>{7});
    }
    SUBCASE("ball conservation") {
        const LoadState s = sequential_throw_run(100, 2, 1234, rng);
        CHECK(s.total() == 1234);
    }
}

} // TEST_SUITE
