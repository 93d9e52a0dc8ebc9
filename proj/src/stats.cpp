#include "twochoice/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "twochoice/analytic.hpp"
#include "twochoice/parallel.hpp"
#include "twochoice/special.hpp"

namespace twochoice {

SeriesStats series_stats(std::span<const double> values) {
    SeriesStats st;
    st.count = values.size();
    if (values.empty()) return st;
    double mean = 0.0;
    for (const double v : values) mean += v;
    mean /= static_cast<double>(values.size());
    double var = 0.0, cov1 = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        const double dev = values[i] - mean;
        var += dev * dev;
        if (i + 1 < values.size()) cov1 += dev * (values[i + 1] - mean);
    }
    st.mean = mean;
    if (values.size() < 2) return st;
    st.variance = var / static_cast<double>(values.size() - 1);
    const double rho = var > 0.0 ? std::max(0.0, cov1 / var) : 0.0;
    st.rho1 = rho;
    st.se = std::sqrt(st.variance / static_cast<double>(values.size())) *
            std::sqrt((1.0 + rho) / (1.0 - rho));
    return st;
}

ProfileEstimate empirical_profile(std::span<const Snapshot> samples, std::uint32_t n) {
    if (samples.empty()) throw std::invalid_argument("empirical_profile: no snapshots");
    std::size_t levels = 1;
    for (const auto& s : samples) {
        if (s.tail_counts.empty() || s.tail_counts[0] != n)
            throw std::invalid_argument("empirical_profile: snapshots disagree on n");
        levels = std::max(levels, s.tail_counts.size());
    }
    ProfileEstimate est;
    est.samples = samples.size();
    est.mean.values.resize(levels, 0.0);
    est.se.resize(levels, 0.0);
    std::vector<double> series(samples.size());
    for (std::size_t i = 0; i < levels; ++i) {
        for (std::size_t s = 0; s < samples.size(); ++s) {
            const auto& tc = samples[s].tail_counts;
            series[s] = i < tc.size() ? static_cast<double>(tc[i]) / static_cast<double>(n) : 0.0;
        }
        const SeriesStats st = series_stats(series);
        est.mean.values[i] = st.mean;
        est.se[i] = st.se;
    }
    return est;
}

ResidualEstimate balance_residual(std::span<const Snapshot> samples, std::uint32_t n,
                                  std::uint32_t i, std::uint32_t d, double lambda) {
    if (i < 1) throw std::invalid_argument("balance_residual: i must be >= 1");
    if (samples.empty()) throw std::invalid_argument("balance_residual: no snapshots");
    std::vector<double> series(samples.size());
    const double nd = static_cast<double>(n);
    for (std::size_t s = 0; s < samples.size(); ++s) {
        const auto& tc = samples[s].tail_counts;
        auto u = [&](std::uint32_t k) {
            return k < tc.size() ? static_cast<double>(tc[k]) / nd : 0.0;
        };
        double tail = 0.0;
        for (std::uint32_t k = i + 1; k < tc.size(); ++k) tail += u(k);
        series[s] = lambda * std::pow(u(i - 1), static_cast<double>(d)) -
                    static_cast<double>(i) * u(i) - tail;
    }
    const SeriesStats st = series_stats(series);
    return ResidualEstimate{st.mean, st.se, samples.size()};
}

MaxLoadDistribution maxload_distribution(std::span<const Snapshot> samples) {
    if (samples.empty()) throw std::invalid_argument("maxload_distribution: no snapshots");
    MaxLoadDistribution dist;
    dist.samples = samples.size();
    for (const auto& s : samples) dist.pmf[s.max_load] += 1.0;
    for (auto& [value, mass] : dist.pmf) mass /= static_cast<double>(samples.size());
    double best = -1.0;
    for (const auto& [value, mass] : dist.pmf) {
        const auto next = dist.pmf.find(value + 1);
        const double pair = mass + (next != dist.pmf.end() ? next->second : 0.0);
        if (pair > best) {
            best = pair;
            dist.best_pair_lo = value;
        }
    }
    dist.best_pair_mass = best;
    return dist;
}

double tv_estimate(const std::map<std::int64_t, double>& a, const std::map<std::int64_t, double>& b) {
    auto check = [](const std::map<std::int64_t, double>& h, const char* name) {
        double sum = 0.0;
        for (const auto& [k, v] : h) {
            if (v < 0.0) throw std::invalid_argument(std::string("tv_estimate: negative mass in ") + name);
            sum += v;
        }
        if (std::abs(sum - 1.0) > 1e-9)
            throw std::invalid_argument(std::string("tv_estimate: ") + name + " does not sum to 1");
    };
    check(a, "first argument");
    check(b, "second argument");
    double acc = 0.0;
    auto ia = a.begin();
    auto ib = b.begin();
    while (ia != a.end() || ib != b.end()) {
        if (ib == b.end() || (ia != a.end() && ia->first < ib->first)) {
            acc += ia->second;
            ++ia;
        } else if (ia == a.end() || ib->first < ia->first) {
            acc += ib->second;
            ++ib;
        } else {
            acc += std::abs(ia->second - ib->second);
            ++ia;
            ++ib;
        }
    }
    return 0.5 * acc;
}

double tv_vs_poisson(const std::map<std::int64_t, double>& hist, double mu) {
    double acc = 0.0;
    double covered = 0.0;
    for (const auto& [k, mass] : hist) {
        const double p = k >= 0 ? poisson_pmf(mu, static_cast<std::uint64_t>(k)) : 0.0;
        acc += std::abs(mass - p);
        covered += p;
    }
    acc += std::max(0.0, 1.0 - covered);  // Poisson mass the histogram never saw
    return 0.5 * acc;
}

namespace {

std::map<std::int64_t, double> joint_key_counts(std::span<const Snapshot> samples, std::uint32_t r,
                                                std::uint32_t k_cut) {
    std::map<std::int64_t, double> joint;
    const double w = 1.0 / static_cast<double>(samples.size());
    for (const auto& s : samples) {
        std::int64_t key = 0;
        bool keep = true;
        for (std::uint32_t c = 0; c < r; ++c) {
            const std::uint32_t v = s.loads[c];
            if (v > k_cut) {
                keep = false;
                break;
            }
            key = key * (static_cast<std::int64_t>(k_cut) + 1) + v;
        }
        if (keep) joint[key] += w;
    }
    return joint;
}

ChaosResult chaos_from_counts(const std::map<std::int64_t, double>& joint,
                              const std::vector<std::vector<double>>& marginals, std::uint32_t r,
                              std::uint32_t k_cut, std::size_t samples) {
    // Walk the full truncated grid; both measures are subnormalized by the
    // total snapshot count.
    const std::uint64_t cells = [&] {
        std::uint64_t c = 1;
        for (std::uint32_t i = 0; i < r; ++i) c *= k_cut + 1;
        return c;
    }();
    double acc = 0.0;
    double joint_mass = 0.0;
    for (std::uint64_t cell = 0; cell < cells; ++cell) {
        double prod = 1.0;
        std::uint64_t rest = cell;
        for (std::uint32_t c = r; c-- > 0;) {
            prod *= marginals[c][rest % (k_cut + 1)];
            rest /= (k_cut + 1);
        }
        const auto it = joint.find(static_cast<std::int64_t>(cell));
        const double jm = it != joint.end() ? it->second : 0.0;
        joint_mass += jm;
        acc += std::abs(jm - prod);
    }
    ChaosResult res;
    res.tv = 0.5 * acc;
    res.truncation_mass = 1.0 - joint_mass;
    res.r = r;
    res.k_cut = k_cut;
    res.samples = samples;
    return res;
}

} // namespace

ChaosResult chaoticity_tv(std::span<const Snapshot> samples, std::uint32_t r, std::uint32_t k_cut) {
    if (samples.empty()) throw std::invalid_argument("chaoticity_tv: no snapshots");
    if (r < 2) throw std::invalid_argument("chaoticity_tv: r must be >= 2");
    for (const auto& s : samples) {
        if (s.loads.size() < r)
            throw std::invalid_argument("chaoticity_tv: snapshots lack full load vectors");
    }
    std::vector<std::vector<double>> marginals(r, std::vector<double>(k_cut + 1, 0.0));
    const double w = 1.0 / static_cast<double>(samples.size());
    for (const auto& s : samples) {
        for (std::uint32_t c = 0; c < r; ++c) {
            if (s.loads[c] <= k_cut) marginals[c][s.loads[c]] += w;
        }
    }
    return chaos_from_counts(joint_key_counts(samples, r, k_cut), marginals, r, k_cut,
                             samples.size());
}

double chaoticity_noise_floor(std::span<const Snapshot> samples, std::uint32_t r,
                              std::uint32_t k_cut, std::size_t repetitions, RandomSource& rng) {
    if (repetitions == 0) throw std::invalid_argument("chaoticity_noise_floor: repetitions >= 1");
    // Empirical marginal of each tracked coordinate, then synthetic
    // independent resamples pushed through the same estimator.
    std::vector<std::vector<double>> marginals(r, std::vector<double>(k_cut + 1, 0.0));
    const double w = 1.0 / static_cast<double>(samples.size());
    for (const auto& s : samples)
        for (std::uint32_t c = 0; c < r; ++c)
            if (s.loads[c] <= k_cut) marginals[c][s.loads[c]] += w;

    std::vector<std::vector<double>> cdf(r, std::vector<double>(k_cut + 1, 0.0));
    std::vector<double> mass(r, 0.0);
    for (std::uint32_t c = 0; c < r; ++c) {
        double acc = 0.0;
        for (std::uint32_t k = 0; k <= k_cut; ++k) {
            acc += marginals[c][k];
            cdf[c][k] = acc;
        }
        mass[c] = acc;
    }

    double floor_sum = 0.0;
    for (std::size_t rep = 0; rep < repetitions; ++rep) {
        std::vector<Snapshot> synth(samples.size());
        for (auto& s : synth) {
            s.loads.resize(r);
            for (std::uint32_t c = 0; c < r; ++c) {
                const double u = rng.uniform() * mass[c];
                std::uint32_t k = 0;
                while (k < k_cut && cdf[c][k] < u) ++k;
                s.loads[c] = k;
            }
        }
        floor_sum += chaoticity_tv(synth, r, k_cut).tv;
    }
    return floor_sum / static_cast<double>(repetitions);
}

namespace {

// Level counts c[v] = #bins with load exactly v for v <= k_cut, plus the
// overflow count, recovered from the tail counts.
void level_counts(const Snapshot& s, std::uint32_t k_cut, std::vector<double>& c, double& over) {
    const auto& tc = s.tail_counts;
    for (std::uint32_t v = 0; v <= k_cut; ++v) {
        const double ge_v = v < tc.size() ? static_cast<double>(tc[v]) : 0.0;
        const double ge_v1 = v + 1 < tc.size() ? static_cast<double>(tc[v + 1]) : 0.0;
        c[v] = ge_v - ge_v1;
    }
    over = k_cut + 1 < tc.size() ? static_cast<double>(tc[k_cut + 1]) : 0.0;
}

ChaosResult pairs_tv_from_counts(const std::vector<std::vector<double>>& per_snapshot_counts,
                                 double n, std::uint32_t k_cut) {
    const std::size_t cells = k_cut + 1;
    std::vector<double> joint(cells * cells, 0.0), marg(cells, 0.0);
    for (const auto& c : per_snapshot_counts) {
        for (std::size_t a = 0; a < cells; ++a) {
            marg[a] += c[a];
            for (std::size_t b = 0; b < cells; ++b)
                joint[a * cells + b] += c[a] * c[b] - (a == b ? c[a] : 0.0);
        }
    }
    const double snaps = static_cast<double>(per_snapshot_counts.size());
    const double pair_norm = snaps * n * (n - 1.0);
    const double marg_norm = snaps * n;
    double acc = 0.0, joint_mass = 0.0;
    for (std::size_t a = 0; a < cells; ++a) {
        for (std::size_t b = 0; b < cells; ++b) {
            const double jm = joint[a * cells + b] / pair_norm;
            const double pm = (marg[a] / marg_norm) * (marg[b] / marg_norm);
            joint_mass += jm;
            acc += std::abs(jm - pm);
        }
    }
    ChaosResult res;
    res.tv = 0.5 * acc;
    res.truncation_mass = 1.0 - joint_mass;
    res.r = 2;
    res.k_cut = k_cut;
    res.samples = per_snapshot_counts.size();
    return res;
}

} // namespace

ChaosResult chaoticity_tv_pairs(std::span<const Snapshot> samples, std::uint32_t k_cut) {
    if (samples.empty()) throw std::invalid_argument("chaoticity_tv_pairs: no snapshots");
    const double n = static_cast<double>(samples[0].tail_counts.at(0));
    if (n < 2) throw std::invalid_argument("chaoticity_tv_pairs: need n >= 2");
    std::vector<std::vector<double>> counts(samples.size(), std::vector<double>(k_cut + 1, 0.0));
    double over = 0.0;
    for (std::size_t s = 0; s < samples.size(); ++s) level_counts(samples[s], k_cut, counts[s], over);
    return pairs_tv_from_counts(counts, n, k_cut);
}

double chaoticity_pairs_noise_floor(std::span<const Snapshot> samples, std::uint32_t k_cut,
                                    std::size_t repetitions, RandomSource& rng) {
    if (samples.empty() || repetitions == 0)
        throw std::invalid_argument("chaoticity_pairs_noise_floor: need samples and repetitions");
    const std::size_t n = static_cast<std::size_t>(samples[0].tail_counts.at(0));

    // Pooled marginal with an explicit overflow category so that truncation
    // behaves exactly as in the measured estimator.
    std::vector<double> cdf(k_cut + 2, 0.0);
    {
        std::vector<double> c(k_cut + 1, 0.0);
        std::vector<double> mass(k_cut + 2, 0.0);
        double over_total = 0.0;
        for (const auto& s : samples) {
            double over = 0.0;
            level_counts(s, k_cut, c, over);
            for (std::uint32_t v = 0; v <= k_cut; ++v) mass[v] += c[v];
            over_total += over;
        }
        mass[k_cut + 1] = over_total;
        double acc = 0.0, total = 0.0;
        for (const double m : mass) total += m;
        for (std::size_t v = 0; v < mass.size(); ++v) {
            acc += mass[v] / total;
            cdf[v] = acc;
        }
    }

    double floor_acc = 0.0;
    std::vector<std::vector<double>> counts(samples.size(), std::vector<double>(k_cut + 1, 0.0));
    for (std::size_t rep = 0; rep < repetitions; ++rep) {
        for (auto& c : counts) {
            std::fill(c.begin(), c.end(), 0.0);
            for (std::size_t j = 0; j < n; ++j) {
                const double u = rng.uniform();
                std::uint32_t v = 0;
                while (v <= k_cut && cdf[v] < u) ++v;
                if (v <= k_cut) c[v] += 1.0;  // overflow draws stay out of the grid
            }
        }
        floor_acc += pairs_tv_from_counts(counts, static_cast<double>(n), k_cut).tv;
    }
    return floor_acc / static_cast<double>(repetitions);
}

std::uint64_t poisson_sample(double mu, RandomSource& rng) {
    if (mu < 0.0) throw std::invalid_argument("poisson_sample: mu must be >= 0");
    if (mu == 0.0) return 0;
    if (mu < 30.0) {
        // Inversion by multiplication of uniforms.
        const double limit = std::exp(-mu);
        double prod = rng.uniform();
        std::uint64_t k = 0;
        while (prod > limit) {
            prod *= rng.uniform();
            ++k;
        }
        return k;
    }
    // Hormann's PTRS transformed rejection.
    const double smu = std::sqrt(mu);
    const double b = 0.931 + 2.53 * smu;
    const double a = -0.059 + 0.02483 * b;
    const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
    const double v_r = 0.9277 - 3.6224 / (b - 2.0);
    while (true) {
        const double u = rng.uniform() - 0.5;
        const double v = rng.uniform();
        const double us = 0.5 - std::abs(u);
        const double kd = std::floor((2.0 * a / us + b) * u + mu + 0.43);
        if (us >= 0.07 && v <= v_r) return static_cast<std::uint64_t>(kd);
        if (kd < 0.0 || (us < 0.013 && v > us)) continue;
        const double lhs = std::log(v * inv_alpha / (a / (us * us) + b));
        const double rhs = -mu + kd * std::log(mu) - std::lgamma(kd + 1.0);
        if (lhs <= rhs) return static_cast<std::uint64_t>(kd);
    }
}

std::vector<MixingPoint> mixing_curve(const SimParams& params, std::span<const double> t_grid,
                                      std::uint64_t trials, const RandomSource& rng,
                                      unsigned threads) {
    params.validate();
    if (t_grid.empty()) throw std::invalid_argument("mixing_curve: empty time grid");
    if (trials == 0) throw std::invalid_argument("mixing_curve: trials must be >= 1");
    for (std::size_t i = 1; i < t_grid.size(); ++i)
        if (t_grid[i] < t_grid[i - 1]) throw std::invalid_argument("mixing_curve: grid must be sorted");

    const std::size_t g = t_grid.size();
    std::vector<std::uint64_t> totals(trials * g, 0);
    parallel_for_index(trials, threads, [&](std::size_t trial) {
        RandomSource r = rng.substream(trial);
        LoadState state(params.n);
        RunRecord rec;
        simulate_until(state, r, params, t_grid.back(), t_grid, SnapshotOptions{}, rec);
        for (std::size_t j = 0; j < g; ++j) totals[trial * g + j] = rec.snapshots[j].total;
    });

    const double mu = params.arrival_rate();
    std::vector<MixingPoint> out(g);
    for (std::size_t j = 0; j < g; ++j) {
        double mean = 0.0;
        std::map<std::int64_t, double> hist;
        const double w = 1.0 / static_cast<double>(trials);
        for (std::uint64_t i = 0; i < trials; ++i) {
            const auto v = totals[i * g + j];
            mean += static_cast<double>(v);
            hist[static_cast<std::int64_t>(v)] += w;
        }
        mean *= w;
        double var = 0.0;
        for (std::uint64_t i = 0; i < trials; ++i) {
            const double dev = static_cast<double>(totals[i * g + j]) - mean;
            var += dev * dev;
        }
        var = trials > 1 ? var / static_cast<double>(trials - 1) : 0.0;
        MixingPoint p;
        p.t = t_grid[j];
        p.mean_total = mean;
        p.se = std::sqrt(var / static_cast<double>(trials));
        p.expected_total = mu * (1.0 - std::exp(-t_grid[j]));
        p.tv_po = tv_vs_poisson(hist, mu);
        out[j] = p;
    }
    return out;
}

double mixing_tv_noise_floor(double mu, std::size_t samples, std::size_t repetitions,
                             RandomSource& rng) {
    if (samples == 0 || repetitions == 0)
        throw std::invalid_argument("mixing_tv_noise_floor: need samples and repetitions >= 1");
    double acc = 0.0;
    for (std::size_t rep = 0; rep < repetitions; ++rep) {
        std::map<std::int64_t, double> hist;
        const double w = 1.0 / static_cast<double>(samples);
        for (std::size_t i = 0; i < samples; ++i)
            hist[static_cast<std::int64_t>(poisson_sample(mu, rng))] += w;
        acc += tv_vs_poisson(hist, mu);
    }
    return acc / static_cast<double>(repetitions);
}

Extrema interval_extrema(const RunRecord& record, double t0, double t1) {
    if (record.max_curve.empty())
        throw std::invalid_argument("interval_extrema: record lacks a max-load curve");
    if (!(t0 <= t1)) throw std::invalid_argument("interval_extrema: t0 must be <= t1");
    if (t0 < record.max_curve.front().time || t1 > record.t_end)
        throw std::invalid_argument("interval_extrema: window outside the trajectory");

    std::uint32_t current = record.max_curve.front().max_load;
    Extrema ex{};
    bool seeded = false;
    for (const auto& pt : record.max_curve) {
        if (pt.time > t1) break;
        if (pt.time <= t0) {
            current = pt.max_load;
            continue;
        }
        if (!seeded) {
            ex.min = ex.max = current;  // value carried into the window at t0
            seeded = true;
        }
        current = pt.max_load;
        ex.min = std::min(ex.min, current);
        ex.max = std::max(ex.max, current);
    }
    if (!seeded) ex.min = ex.max = current;  // no jumps inside the window
    return ex;
}

std::uint32_t median_max_load(const RunRecord& record, double t0, double t1) {
    if (record.max_curve.empty())
        throw std::invalid_argument("median_max_load: record lacks a max-load curve");
    if (!(t0 < t1)) throw std::invalid_argument("median_max_load: t0 must be < t1");
    std::map<std::uint32_t, double> duration;
    std::uint32_t current = record.max_curve.front().max_load;
    double cursor = t0;
    for (const auto& pt : record.max_curve) {
        if (pt.time <= t0) {
            current = pt.max_load;
            continue;
        }
        if (pt.time > t1) break;
        duration[current] += pt.time - cursor;
        cursor = pt.time;
        current = pt.max_load;
    }
    duration[current] += t1 - cursor;
    const double half = 0.5 * (t1 - t0);
    double acc = 0.0;
    for (const auto& [value, dur] : duration) {
        acc += dur;
        if (acc >= half) return value;
    }
    return duration.rbegin()->first;
}

TwoBinExact::TwoBinExact(double lambda, std::uint32_t d, std::uint32_t cap)
    : lambda_(lambda), d_(d), cap_(cap) {
    if (!(lambda > 0.0)) throw std::invalid_argument("TwoBinExact: lambda must be > 0");
    if (d < 1 || d > 16) throw std::invalid_argument("TwoBinExact: d must be in [1, 16]");
    if (cap < 1) throw std::invalid_argument("TwoBinExact: cap must be >= 1");

    const std::size_t states = (cap + 1ull) * (cap + 1ull);
    std::vector<std::vector<double>> gen(states, std::vector<double>(states, 0.0));

    const double arrival_rate = 2.0 * lambda;
    const std::uint32_t sequences = 1u << d;  // all choice vectors over two bins
    const double seq_prob = 1.0 / static_cast<double>(sequences);
    for (std::uint32_t a = 0; a <= cap_; ++a) {
        for (std::uint32_t b = 0; b <= cap_; ++b) {
            const std::size_t s = idx(a, b);
            double to_first = 0.0;
            for (std::uint32_t mask = 0; mask < sequences; ++mask) {
                // bit i of mask = bin chosen at attempt i; first least-loaded wins
                std::uint32_t best_bin = mask & 1u;
                std::uint32_t best_load = best_bin == 0 ? a : b;
                for (std::uint32_t i = 1; i < d_; ++i) {
                    const std::uint32_t bin = (mask >> i) & 1u;
                    const std::uint32_t load = bin == 0 ? a : b;
                    if (load < best_load) {
                        best_bin = bin;
                        best_load = load;
                    }
                }
                if (best_bin == 0) to_first += seq_prob;
            }
            if (a < cap_) gen[s][idx(a + 1, b)] += arrival_rate * to_first;
            if (b < cap_) gen[s][idx(a, b + 1)] += arrival_rate * (1.0 - to_first);
            if (a > 0) gen[s][idx(a - 1, b)] += static_cast<double>(a);
            if (b > 0) gen[s][idx(a, b - 1)] += static_cast<double>(b);
        }
    }
    for (std::size_t s = 0; s < states; ++s) {
        double out = 0.0;
        for (std::size_t t = 0; t < states; ++t)
            if (t != s) out += gen[s][t];
        gen[s][s] = -out;
    }

    // pi Q = 0 with sum(pi) = 1: transpose, replace the last equation.
    std::vector<std::vector<double>> a_mat(states, std::vector<double>(states, 0.0));
    std::vector<double> rhs(states, 0.0);
    for (std::size_t r = 0; r < states; ++r)
        for (std::size_t c = 0; c < states; ++c) a_mat[r][c] = gen[c][r];
    for (std::size_t c = 0; c < states; ++c) a_mat[states - 1][c] = 1.0;
    rhs[states - 1] = 1.0;
    pi_ = solve_dense(std::move(a_mat), std::move(rhs));
}

double TwoBinExact::pi(std::uint32_t a, std::uint32_t b) const {
    if (a > cap_ || b > cap_) return 0.0;
    return pi_[idx(a, b)];
}

double TwoBinExact::balance_residual(std::uint32_t i) const {
    if (i < 1) throw std::invalid_argument("TwoBinExact::balance_residual: i must be >= 1");
    auto u = [&](std::uint32_t a, std::uint32_t b, std::uint32_t k) {
        return 0.5 * (static_cast<double>(a >= k) + static_cast<double>(b >= k));
    };
    double e_ud = 0.0, e_ui = 0.0, e_tail = 0.0;
    for (std::uint32_t a = 0; a <= cap_; ++a) {
        for (std::uint32_t b = 0; b <= cap_; ++b) {
            const double p = pi_[idx(a, b)];
            e_ud += p * std::pow(u(a, b, i - 1), static_cast<double>(d_));
            e_ui += p * u(a, b, i);
            for (std::uint32_t k = i + 1; k <= cap_; ++k) e_tail += p * u(a, b, k);
        }
    }
    return lambda_ * e_ud - static_cast<double>(i) * e_ui - e_tail;
}

double TwoBinExact::truncation_error_bound() const {
    return 2.0 * poisson_tail(lambda_ * static_cast<double>(d_), cap_ + 1ull);
}

} // namespace twochoice
