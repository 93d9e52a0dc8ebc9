// Acceptance suite: every headline property checked at its stated tolerance,
// one pass/fail line per criterion. Exits with the number of failed criteria.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "twochoice/analytic.hpp"
#include "twochoice/cli.hpp"
#include "twochoice/coupling.hpp"
#include "twochoice/driftwalk.hpp"
#include "twochoice/engine.hpp"
#include "twochoice/parallel.hpp"
#include "twochoice/special.hpp"
#include "twochoice/stats.hpp"

using namespace twochoice;
namespace fs = std::filesystem;

namespace {

constexpr std::uint64_t kSeedBase = 0x5EED2026ULL;

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.4g", v);
    return buf;
}

struct Outcome {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string& what) {
        pass = pass && ok;
        if (!detail.empty()) detail += "; ";
        detail += what + (ok ? "" : " [VIOLATED]");
    }
};

SimParams make_params(std::uint32_t n, std::uint32_t d, double lambda, std::uint64_t seed) {
    SimParams p;
    p.n = n;
    p.d = d;
    p.lambda = lambda;
    p.seed = seed;
    return p;
}

// --- 1. Poisson equilibrium of the total load --------------------------------

Outcome criterion_poisson_equilibrium() {
    Outcome out;
    const SimParams p = make_params(1000, 1, 1.0, kSeedBase + 1);
    RandomSource rng(p.seed);
    const RunRecord rec = equilibrium_sample(p, rng, default_burn_in(p.n), 2000, 1.0);

    std::vector<double> totals;
    totals.reserve(rec.snapshots.size());
    for (const auto& s : rec.snapshots) totals.push_back(static_cast<double>(s.total));
    const SeriesStats st = series_stats(totals);
    const double band = 4.0 * std::sqrt(1000.0 / 2000.0);
    out.require(std::abs(st.mean - 1000.0) <= band,
                "mean |X| = " + fmt(st.mean) + " within 1000 +/- " + fmt(band));
    const double vm = st.variance / st.mean;
    out.require(vm >= 0.85 && vm <= 1.15, "variance/mean = " + fmt(vm) + " in [0.85, 1.15]");

    const auto& tc = rec.snapshots.back().tail_counts;
    std::vector<std::uint64_t> counts(tc.size() + 1, 0);
    for (std::size_t k = 0; k < tc.size(); ++k)
        counts[k] = tc[k] - (k + 1 < tc.size() ? tc[k + 1] : 0);
    std::vector<double> probs(counts.size());
    for (std::size_t k = 0; k + 1 < counts.size(); ++k) probs[k] = poisson_pmf(1.0, k);
    probs[counts.size() - 1] = poisson_tail(1.0, counts.size() - 1);
    const GofResult gof = chi_square_gof(counts, probs);
    out.require(gof.p_value > 0.001, "per-bin chi-square vs Po(1): p = " + fmt(gof.p_value));
    return out;
}

// --- 2. Coupling decay -------------------------------------------------------

Outcome criterion_coupling_decay() {
    Outcome out;
    const SimParams p = make_params(100, 2, 1.0, kSeedBase + 2);
    const std::vector<double> grid{0.5, 1.0, 2.0, 3.0, 5.0};
    // Every coupled step asserts the per-event nonincrease internally.
    const DecayResult res =
        coupling_decay_experiment(p, 200, grid, 200, RandomSource(p.seed), default_threads());
    for (const auto& pt : res.points) {
        out.require(pt.mean <= pt.bound + 3.0 * pt.se,
                    "t=" + fmt(pt.t) + ": mean " + fmt(pt.mean) + " <= " + fmt(pt.bound) + "+3se");
    }
    return out;
}

// --- 3. Mixing curve ---------------------------------------------------------

Outcome criterion_mixing_curve() {
    Outcome out;
    const SimParams p = make_params(10000, 2, 1.0, kSeedBase + 3);
    const std::vector<double> grid{0.5, 1.0, 2.0, 3.0, 5.0, 15.0};
    const std::uint64_t trials = 20000;
    const auto curve = mixing_curve(p, grid, trials, RandomSource(p.seed), default_threads());
    for (const auto& pt : curve) {
        out.require(std::abs(pt.mean_total - pt.expected_total) <= 3.0 * pt.se,
                    "t=" + fmt(pt.t) + ": mean " + fmt(pt.mean_total) + " vs " +
                        fmt(pt.expected_total) + " (3se=" + fmt(3.0 * pt.se) + ")");
    }
    out.require(curve[2].tv_po >= 0.9, "TV at t=2 is " + fmt(curve[2].tv_po) + " >= 0.9");
    out.require(curve[5].tv_po <= 0.1, "TV at t=15 is " + fmt(curve[5].tv_po) + " <= 0.1");
    RandomSource floor_rng = RandomSource(p.seed).substream(1u << 20);
    const double floor = mixing_tv_noise_floor(1e4, trials, 10, floor_rng);
    out.detail += "; plug-in noise floor ~" + fmt(floor);
    return out;
}

// --- 4. d = 1 two-point concentration ----------------------------------------

Outcome criterion_d1_two_point() {
    Outcome out;
    const SimParams p = make_params(100000, 1, 1.0, kSeedBase + 4);
    RandomSource rng(p.seed);
    const RunRecord rec = equilibrium_sample(p, rng, default_burn_in(p.n), 200, 1.0);
    const LevelPrediction lp = d1_levels(1e5, 1.0);
    const MaxLoadDistribution ml = maxload_distribution(rec.snapshots);

    double two_point = 0.0;
    for (const auto& [v, mass] : ml.pmf)
        if (v + 1 == lp.level || v == lp.level) two_point += mass;
    out.require(two_point >= 0.75, "mass on {m-1, m} = {" + std::to_string(lp.level - 1) + "," +
                                       std::to_string(lp.level) + "} is " + fmt(two_point));

    // The proven envelope, allowing 3 SE of sampling slack per level. Plug-in
    // binomial SEs collapse at frequencies 0 and 1, so the SE gets an
    // Agresti-Coull floor.
    const std::size_t count = rec.snapshots.size();
    auto adjusted_se = [&](const SeriesStats& st) {
        const double k = st.mean * static_cast<double>(count);
        const double pt = (k + 2.0) / (static_cast<double>(count) + 4.0);
        const double ac = std::sqrt(pt * (1.0 - pt) / (static_cast<double>(count) + 4.0));
        return std::max(st.se, ac);
    };
    bool bounds_ok = true;
    for (std::uint32_t i = 1; i <= lp.level + 4; ++i) {
        std::vector<double> ge(count), le(count);
        for (std::size_t s = 0; s < count; ++s) {
            ge[s] = rec.snapshots[s].max_load >= i ? 1.0 : 0.0;
            le[s] = rec.snapshots[s].max_load <= i ? 1.0 : 0.0;
        }
        const SeriesStats sge = series_stats(ge), sle = series_stats(le);
        if (sge.mean > d1_prob_max_ge_bound(1e5, 1.0, i) + 3.0 * adjusted_se(sge)) bounds_ok = false;
        if (sle.mean > d1_prob_max_le_bound(1e5, 1.0, i) + 3.0 * adjusted_se(sle)) bounds_ok = false;
    }
    out.require(bounds_ok, "frequency envelope n*p_i / e^{-n p_{i+1}} never violated beyond 3se");
    return out;
}

// --- 5. d = 2 two-point concentration ----------------------------------------

Outcome criterion_d2_two_point() {
    Outcome out;
    const SimParams p = make_params(100000, 2, 1.0, kSeedBase + 5);
    RandomSource rng(p.seed);
    const RunRecord rec = equilibrium_sample(p, rng, default_burn_in(p.n), 200, 1.0);
    const MaxLoadDistribution ml = maxload_distribution(rec.snapshots);
    out.require(ml.best_pair_mass >= 0.75,
                "best consecutive pair {" + std::to_string(ml.best_pair_lo) + "," +
                    std::to_string(ml.best_pair_lo + 1) + "} carries " + fmt(ml.best_pair_mass));

    const JstarPrediction jp = jstar_predict(1e5, 2, 1.0);
    const bool overlap = (ml.best_pair_lo <= jp.support_hi && ml.best_pair_lo + 1 >= jp.support_lo);
    out.require(overlap, "best pair overlaps predicted {" + std::to_string(jp.support_lo) + "," +
                             std::to_string(jp.support_hi) + "} (threshold " + fmt(jp.threshold) +
                             " exceeds every tail value below level 1, so j* degenerates to 1 at "
                             "this n while the observed maximum sits near 4; the j*-based "
                             "support only becomes informative once n^{-1/2} ln^3 n falls below "
                             "the occupied tail levels, far beyond desk scale)");

    std::vector<double> ms;
    ms.reserve(rec.snapshots.size());
    for (const auto& s : rec.snapshots) ms.push_back(s.max_load);
    std::sort(ms.begin(), ms.end());
    const double median = ms[ms.size() / 2];
    const double target = std::log(std::log(1e5)) / std::log(2.0);
    out.require(std::abs(median - target) <= 2.0,
                "median M = " + fmt(median) + " within 2 of lnln(n)/ln2 = " + fmt(target));
    return out;
}

// --- 6. Balance identity -----------------------------------------------------

Outcome criterion_balance_identity() {
    Outcome out;
    // (a) exact two-bin oracle
    const TwoBinExact oracle(0.5, 2, 8);
    const double trunc = oracle.truncation_error_bound();
    double worst = 0.0;
    for (std::uint32_t i = 1; i <= 5; ++i)
        worst = std::max(worst, std::abs(oracle.balance_residual(i)));
    out.require(worst <= 1e-8 + trunc, "exact 2-bin residual " + fmt(worst) + " <= 1e-8 + " +
                                           fmt(trunc) + " (truncation bound)");

    // (b) empirical residuals across independent trajectories
    const SimParams p = make_params(10000, 2, 1.0, kSeedBase + 6);
    const std::size_t n_traj = 12, samples = 30000;
    const double spacing = 0.25;
    std::vector<std::vector<double>> per_traj(n_traj, std::vector<double>(5, 0.0));
    parallel_for_index(n_traj, default_threads(), [&](std::size_t t) {
        RandomSource rng = RandomSource(p.seed).substream(t);
        const RunRecord rec = equilibrium_sample(p, rng, default_burn_in(p.n), samples, spacing);
        for (std::uint32_t i = 1; i <= 5; ++i)
            per_traj[t][i - 1] = balance_residual(rec.snapshots, p.n, i, p.d, p.lambda).value;
    });
    for (std::uint32_t i = 1; i <= 5; ++i) {
        std::vector<double> vals(n_traj);
        for (std::size_t t = 0; t < n_traj; ++t) vals[t] = per_traj[t][i - 1];
        double mean = 0.0;
        for (const double v : vals) mean += v;
        mean /= static_cast<double>(n_traj);
        double var = 0.0;
        for (const double v : vals) var += (v - mean) * (v - mean);
        const double se = std::sqrt(var / (n_traj - 1) / n_traj);
        out.require(std::abs(mean) <= 3.0 * se,
                    "i=" + std::to_string(i) + ": residual " + fmt(mean) + " (3se " + fmt(3.0 * se) + ")");
    }
    return out;
}

// --- 7. Mean-field closed forms ----------------------------------------------

Outcome criterion_meanfield_closed_forms() {
    Outcome out;
    {
        const TailProfile v = fixed_point(1, 1.0, 64, 1e-12);
        double sup = 0.0;
        for (std::size_t i = 0; i < v.values.size(); ++i)
            sup = std::max(sup, std::abs(v.values[i] - poisson_tail(1.0, i)));
        out.require(sup <= 1e-10, "d=1 fixed point vs Po(1) tails: sup " + fmt(sup) + " <= 1e-10");
    }
    {
        const OdeSolution sol =
            ode_solve(1, 1.0, TailProfile::empty_initial(48), 1.0, 48, OdeVariant::continuous);
        const double mu = 1.0 - std::exp(-1.0);
        double sup = 0.0;
        for (std::size_t k = 0; k <= 48; ++k)
            sup = std::max(sup, std::abs(sol.final_profile().at(k) - poisson_tail(mu, k)));
        out.require(sup <= 1e-6, "d=1 ODE at t=1 vs Po(1-1/e) tails: sup " + fmt(sup) + " <= 1e-6");
    }
    {
        const TailProfile fp = fixed_point(2, 1.0, 64, 1e-13);
        const OdeSolution sol =
            ode_solve(2, 1.0, TailProfile::empty_initial(64), 50.0, 64, OdeVariant::continuous);
        double sup = 0.0;
        for (std::size_t k = 0; k <= 64; ++k)
            sup = std::max(sup, std::abs(sol.final_profile().at(k) - fp.at(k)));
        out.require(sup <= 1e-8, "d=2 ODE at t=50 vs fixed point: sup " + fmt(sup) + " <= 1e-8");
    }
    return out;
}

// --- 8. ODE against the simulators -------------------------------------------

Outcome criterion_ode_vs_simulation() {
    Outcome out;
    const std::uint32_t n = 10000, d = 2;
    const std::size_t runs = 20;

    std::vector<double> mean_profile(32, 0.0);
    const SimParams p = make_params(n, d, 1.0, kSeedBase + 8);
    for (std::size_t r = 0; r < runs; ++r) {
        RandomSource rng = RandomSource(p.seed).substream(r);
        LoadState s(n);
        RunRecord rec;
        simulate_until(s, rng, p, 1.0, {}, {}, rec);
        const auto& tc = s.tail_counts();
        for (std::size_t i = 0; i < tc.size() && i < mean_profile.size(); ++i)
            mean_profile[i] += static_cast<double>(tc[i]) / n / runs;
    }
    const OdeSolution cont =
        ode_solve(d, 1.0, TailProfile::empty_initial(48), 1.0, 48, OdeVariant::continuous);
    double sup = 0.0;
    for (std::size_t i = 0; i < mean_profile.size(); ++i)
        sup = std::max(sup, std::abs(mean_profile[i] - cont.final_profile().at(i)));
    out.require(sup <= 0.02, "continuous process at t=1: sup gap " + fmt(sup) + " <= 0.02");

    std::vector<double> seq_profile(32, 0.0);
    for (std::size_t r = 0; r < runs; ++r) {
        RandomSource rng = RandomSource(p.seed + 1).substream(r);
        const LoadState s = sequential_throw_run(n, d, n, rng);
        const auto& tc = s.tail_counts();
        for (std::size_t i = 0; i < tc.size() && i < seq_profile.size(); ++i)
            seq_profile[i] += static_cast<double>(tc[i]) / n / runs;
    }
    const OdeSolution seq =
        ode_solve(d, 1.0, TailProfile::empty_initial(48), 1.0, 48, OdeVariant::sequential);
    double sup_seq = 0.0;
    for (std::size_t i = 0; i < seq_profile.size(); ++i)
        sup_seq = std::max(sup_seq, std::abs(seq_profile[i] - seq.final_profile().at(i)));
    out.require(sup_seq <= 0.02, "sequential throws at t=1: sup gap " + fmt(sup_seq) + " <= 0.02");
    return out;
}

// --- 9. Drift-walk bounds ----------------------------------------------------

Outcome criterion_drift_walk() {
    Outcome out;
    bool grid_ok = true;
    for (double p = 0.05; p <= 0.301; p += 0.05) {
        const double q = 2.0 * p;
        for (std::uint32_t a = 1; a <= 10; ++a) {
            if (crossing_exact(p, q, a) > std::pow(0.5, static_cast<double>(a)) + 1e-15)
                grid_ok = false;
        }
    }
    out.require(grid_ok, "crossing_exact <= (p/q)^a on the whole grid");

    RandomSource rng(kSeedBase + 9);
    WalkParams cp;
    cp.p = 0.1;
    cp.q = 0.2;
    cp.a = 3;
    const WalkStats cross = walk_simulate(cp, WalkMode::crossing, 1000000, rng);
    out.require(std::abs(cross.frequency - 1.0 / 15.0) <= 3.0 * cross.se,
                "crossing MC " + fmt(cross.frequency) + " vs exact 1/15 within 3se");

    WalkParams hp;
    hp.p = 0.1;
    hp.m = 560;
    hp.r0 = 0;
    hp.r1 = 10;
    const WalkStats miss = walk_simulate(hp, WalkMode::hitting, 100000, rng);
    out.require(miss.frequency <= std::exp(-2.0) + 3.0 * miss.se,
                "hitting miss frequency " + fmt(miss.frequency) + " <= e^-2 + 3se");
    return out;
}

// --- 10. Chaoticity ----------------------------------------------------------

Outcome criterion_chaoticity() {
    Outcome out;
    // The two-bin joint law is the same for every pair of distinct bins
    // (exchangeability), so the estimator pools all ordered pairs; with two
    // fixed indices the dependence signal at this n sits under the noise
    // floor no matter how the snapshots are spent.
    const std::size_t reps = 10, samples = 20000;
    std::vector<double> tv100(reps), tv1000(reps), corrected(reps);
    parallel_for_index(reps, default_threads(), [&](std::size_t k) {
        {
            const SimParams p = make_params(100, 2, 1.0, kSeedBase + 10);
            RandomSource rng = RandomSource(p.seed).substream(2 * k);
            const RunRecord rec = equilibrium_sample(p, rng, default_burn_in(p.n), samples, 1.0);
            tv100[k] = chaoticity_tv_pairs(rec.snapshots, 10).tv;
        }
        {
            const SimParams p = make_params(1000, 2, 1.0, kSeedBase + 10);
            RandomSource rng = RandomSource(p.seed).substream(2 * k + 1);
            const RunRecord rec = equilibrium_sample(p, rng, default_burn_in(p.n), samples, 1.0);
            const double tv = chaoticity_tv_pairs(rec.snapshots, 10).tv;
            RandomSource floor_rng = RandomSource(p.seed).substream(9000 + k);
            const double floor = chaoticity_pairs_noise_floor(rec.snapshots, 10, 3, floor_rng);
            tv1000[k] = tv;
            corrected[k] = tv - floor;
        }
    });
    auto median = [](std::vector<double> v) {
        std::sort(v.begin(), v.end());
        return v[v.size() / 2];
    };
    const double m100 = median(tv100), m1000 = median(tv1000), mcorr = median(corrected);
    out.require(m1000 < m100, "median TV: n=1000 gives " + fmt(m1000) + " < n=100 gives " + fmt(m100));
    out.require(mcorr < 0.05, "median TV minus noise floor at n=1000: " + fmt(mcorr) + " < 0.05");
    return out;
}

// --- 11. Interval stability of the maximum load -------------------------------

Outcome criterion_interval_stability() {
    Outcome out;
    const SimParams p = make_params(10000, 2, 1.0, kSeedBase + 11);
    const std::size_t runs = 100;
    const double burn = default_burn_in(p.n), window = 100.0;
    std::vector<int> ok(runs, 0);
    parallel_for_index(runs, default_threads(), [&](std::size_t r) {
        RandomSource rng = RandomSource(p.seed).substream(r);
        LoadState state(p.n);
        RunRecord rec;
        SnapshotOptions opts;
        opts.track_max_curve = true;
        simulate_until(state, rng, p, burn + window, {}, opts, rec);
        const Extrema ex = interval_extrema(rec, burn, burn + window);
        const std::uint32_t med = median_max_load(rec, burn, burn + window);
        ok[r] = (ex.max <= med + 3 && ex.min + 3 >= med) ? 1 : 0;
    });
    int good = 0;
    for (const int v : ok) good += v;
    out.require(good >= 95, "extrema within +/-3 of the window median in " + std::to_string(good) +
                                "/100 runs (>= 95 required)");
    return out;
}

// --- 12. Determinism of artifacts --------------------------------------------

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

Outcome criterion_determinism() {
    Outcome out;
    const fs::path base = fs::temp_directory_path() / "twochoice_acceptance_det";
    fs::remove_all(base);
    auto run = [&](const std::string& tag, const std::string& threads) {
        const fs::path dir = base / tag;
        const std::vector<std::string> args{
            "mixing",   "--n",  "100",     "--d",       "2",   "--lambda", "1",
            "--t-grid", "0.5,2", "--trials", "16",       "--seed", "777",
            "--threads", threads, "--noise-reps", "2",   "--out", dir.string()};
        if (twochoice::cli::run_cli(args) != 0) throw std::runtime_error("cli run failed");
        return dir;
    };
    const fs::path d1 = run("t1", "1");
    const fs::path d2 = run("t2", "2");
    const fs::path d3 = run("t1b", "1");
    out.require(slurp(d1 / "raw.jsonl") == slurp(d2 / "raw.jsonl"),
                "raw artifacts identical across thread counts");
    out.require(slurp(d1 / "raw.jsonl") == slurp(d3 / "raw.jsonl"),
                "raw artifacts identical across reruns");
    out.require(slurp(d1 / "summary.csv") == slurp(d2 / "summary.csv"),
                "summaries identical across thread counts");
    return out;
}

} // namespace

int main(int argc, char** argv) {
    int only = 0;
    for (int i = 1; i < argc; ++i) {
        const std::string arg = argv[i];
        if (arg == "--only" && i + 1 < argc) only = std::atoi(argv[++i]);
    }

    struct Entry {
        int id;
        const char* name;
        Outcome (*fn)();
    };
    const std::vector<Entry> entries{
        {1, "poisson equilibrium", criterion_poisson_equilibrium},
        {2, "coupling decay", criterion_coupling_decay},
        {3, "mixing curve", criterion_mixing_curve},
        {4, "d=1 two-point concentration", criterion_d1_two_point},
        {5, "d=2 two-point concentration", criterion_d2_two_point},
        {6, "balance identity", criterion_balance_identity},
        {7, "mean-field closed forms", criterion_meanfield_closed_forms},
        {8, "ODE vs simulation", criterion_ode_vs_simulation},
        {9, "drift-walk bounds", criterion_drift_walk},
        {10, "chaoticity", criterion_chaoticity},
        {11, "interval stability", criterion_interval_stability},
        {12, "determinism", criterion_determinism},
    };

    int failures = 0;
    for (const auto& e : entries) {
        if (only != 0 && e.id != only) continue;
        Outcome res;
        try {
            res = e.fn();
        } catch (const std::exception& ex) {
            res.pass = false;
            res.detail = std::string("exception: ") + ex.what();
        }
        std::cout << (res.pass ? "[PASS]" : "[FAIL]") << " criterion " << e.id << " (" << e.name
                  << "): " << res.detail << "\n"
                  << std::flush;
        failures += res.pass ? 0 : 1;
    }
    return failures;
}
