#include "twochoice/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace twochoice {

double poisson_log_pmf(double mu, std::uint64_t k) {
    if (mu < 0.0) throw std::invalid_argument("poisson_log_pmf: mu must be >= 0");
    if (mu == 0.0) return k == 0 ? 0.0 : -std::numeric_limits<double>::infinity();
    const double kd = static_cast<double>(k);
    return -mu + kd * std::log(mu) - std::lgamma(kd + 1.0);
}

double poisson_pmf(double mu, std::uint64_t k) { return std::exp(poisson_log_pmf(mu, k)); }

double poisson_tail(double mu, std::uint64_t i) {
    if (mu < 0.0) throw std::invalid_argument("poisson_tail: mu must be >= 0");
    if (i == 0) return 1.0;
    if (mu == 0.0) return 0.0;
    if (static_cast<double>(i) <= mu) {
        // 1 - P(X < i); the lower sum runs over at most ~mu terms.
        double sum = 0.0;
        double term = std::exp(-mu);  // pmf(0); recurrence avoids lgamma per term
        if (term == 0.0) {
            for (std::uint64_t k = 0; k < i; ++k) sum += poisson_pmf(mu, k);
            return std::max(0.0, 1.0 - sum);
        }
        for (std::uint64_t k = 0; k < i; ++k) {
            sum += term;
            term *= mu / static_cast<double>(k + 1);
        }
        return std::max(0.0, 1.0 - sum);
    }
    // Upper-tail summation; terms decay geometrically beyond the mean.
    double term = poisson_pmf(mu, i);
    double sum = term;
    for (std::uint64_t k = i + 1;; ++k) {
        term *= mu / static_cast<double>(k);
        sum += term;
        if (term < sum * 1e-18 || term < 1e-320) break;
    }
    return sum;
}

double poisson_deviation_bound(double mu, double eps) {
    if (!(eps >= 0.0 && eps <= 1.0)) throw std::invalid_argument("poisson_deviation_bound: eps in [0,1]");
    return std::min(1.0, 2.0 * std::exp(-eps * eps * mu / 3.0));
}

double poisson_upper_factorial_bound(double mu, std::uint64_t k) {
    if (k == 0) return 1.0;
    const double kd = static_cast<double>(k);
    return std::exp(kd * std::log(mu) - std::lgamma(kd + 1.0));
}

LevelPrediction d1_levels(double n, double lambda) {
    if (!(n >= 16.0))
        throw std::invalid_argument("d1_levels: n must be >= 16 so that ln ln n is positive");
    if (!(lambda > 0.0)) throw std::invalid_argument("d1_levels: lambda must be > 0");
    const double omega = std::log(std::log(n));
    const double threshold = 1.0 / omega;
    std::uint32_t i = 1;
    while (n * poisson_tail(lambda, i + 1) > threshold) {
        ++i;
        if (i > 100000) throw std::runtime_error("d1_levels: scan failed to terminate");
    }
    return LevelPrediction{i, LevelKind::d1_m, threshold};
}

double d1_prob_max_ge_bound(double n, double lambda, std::uint32_t i) {
    return std::min(1.0, n * poisson_tail(lambda, i));
}

double d1_prob_max_le_exact(double n, double lambda, std::uint32_t i) {
    const double p = poisson_tail(lambda, static_cast<std::uint64_t>(i) + 1);
    return std::exp(n * std::log1p(-p));
}

double d1_prob_max_le_bound(double n, double lambda, std::uint32_t i) {
    return std::exp(-n * poisson_tail(lambda, static_cast<std::uint64_t>(i) + 1));
}

namespace {

constexpr double kTailEps = 1e-14;

// Right-hand side over y[0..k_max] with y[0] == 1 held fixed.
void rhs(OdeVariant variant, std::uint32_t d, double lambda, const std::vector<double>& y,
         std::vector<double>& dy) {
    const std::size_t kmax = y.size() - 1;
    dy[0] = 0.0;
    const double dd = static_cast<double>(d);
    auto powd = [dd, d](double v) {
        if (d == 1) return v;
        if (d == 2) return v * v;
        if (d == 3) return v * v * v;
        return std::pow(v, dd);
    };
    double prev_pow = 1.0;  // y[0]^d
    for (std::size_t k = 1; k <= kmax; ++k) {
        const double cur_pow = powd(y[k]);
        double v = lambda * (prev_pow - cur_pow);
        if (variant == OdeVariant::continuous) {
            const double up = k < kmax ? y[k + 1] : 0.0;
            v -= static_cast<double>(k) * (y[k] - up);
        }
        dy[k] = v;
        prev_pow = cur_pow;
    }
}

// Clip to [0,1] and enforce the nonincreasing shape.
void project(std::vector<double>& y) {
    double cap = 1.0;
    for (std::size_t k = 1; k < y.size(); ++k) {
        y[k] = std::clamp(y[k], 0.0, cap);
        cap = y[k];
    }
}

} // namespace

OdeSolution ode_solve(std::uint32_t d, double lambda, const TailProfile& initial, double t_end,
                      std::size_t k_max, OdeVariant variant) {
    if (d < 1) throw std::invalid_argument("ode_solve: d must be >= 1");
    if (!(lambda > 0.0)) throw std::invalid_argument("ode_solve: lambda must be > 0");
    if (!(t_end >= 0.0)) throw std::invalid_argument("ode_solve: t_end must be >= 0");
    initial.validate(1e-12);
    if (initial.at(k_max) >= kTailEps) {
        std::ostringstream os;
        os << "ode_solve: initial profile carries mass " << initial.at(k_max) << " at k_max=" << k_max;
        throw TruncationError(os.str());
    }

    std::vector<double> y(k_max + 1, 0.0);
    y[0] = 1.0;
    for (std::size_t k = 1; k <= k_max; ++k) y[k] = initial.at(k);

    OdeSolution sol;
    sol.d = d;
    sol.lambda = lambda;
    sol.k_max = k_max;
    sol.variant = variant;
    auto record = [&](double t) {
        sol.times.push_back(t);
        TailProfile p;
        p.values = y;
        sol.profiles.push_back(std::move(p));
    };
    record(0.0);
    if (t_end == 0.0) return sol;

    // Dormand-Prince 5(4) coefficients.
    static constexpr double A[7][6] = {
        {},
        {1.0 / 5},
        {3.0 / 40, 9.0 / 40},
        {44.0 / 45, -56.0 / 15, 32.0 / 9},
        {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729},
        {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176, -5103.0 / 18656},
        {35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84},
    };
    static constexpr double B5[7] = {35.0 / 384,     0.0,  500.0 / 1113, 125.0 / 192,
                                     -2187.0 / 6784, 11.0 / 84, 0.0};
    static constexpr double B4[7] = {5179.0 / 57600,  0.0,           7571.0 / 16695, 393.0 / 640,
                                     -92097.0 / 339200, 187.0 / 2100, 1.0 / 40};

    const double atol = 1e-12, rtol = 1e-10;
    std::vector<std::vector<double>> k_stages(7, std::vector<double>(k_max + 1, 0.0));
    std::vector<double> y_stage(k_max + 1, 0.0), y5(k_max + 1, 0.0), y4(k_max + 1, 0.0);

    double t = 0.0;
    double h = std::min(1e-3, t_end);
    std::size_t steps = 0;
    while (t < t_end) {
        if (++steps > 50'000'000) throw std::runtime_error("ode_solve: step limit exceeded");
        h = std::min(h, t_end - t);
        rhs(variant, d, lambda, y, k_stages[0]);
        for (int s = 1; s < 7; ++s) {
            y_stage = y;
            for (int j = 0; j < s; ++j) {
                const double a = A[s][j] * h;
                if (a == 0.0) continue;
                for (std::size_t k = 1; k <= k_max; ++k) y_stage[k] += a * k_stages[j][k];
            }
            rhs(variant, d, lambda, y_stage, k_stages[s]);
        }
        double err = 0.0;
        for (std::size_t k = 1; k <= k_max; ++k) {
            double v5 = y[k], v4 = y[k];
            for (int s = 0; s < 7; ++s) {
                v5 += h * B5[s] * k_stages[s][k];
                v4 += h * B4[s] * k_stages[s][k];
            }
            y5[k] = v5;
            y4[k] = v4;
            const double scale = atol + rtol * std::max(std::abs(y[k]), std::abs(v5));
            err = std::max(err, std::abs(v5 - v4) / scale);
        }
        if (err <= 1.0) {
            t += h;
            for (std::size_t k = 1; k <= k_max; ++k) y[k] = y5[k];
            project(y);
            if (y[k_max] >= kTailEps) {
                std::ostringstream os;
                os << "ode_solve: tail mass " << y[k_max] << " reached k_max=" << k_max << " at t=" << t;
                throw TruncationError(os.str());
            }
            record(t);
        }
        const double factor = err > 0.0 ? 0.9 * std::pow(err, -0.2) : 5.0;
        h *= std::clamp(factor, 0.2, 5.0);
        h = std::max(h, 1e-12);
    }
    return sol;
}

double fixed_point_residual(const TailProfile& v, std::uint32_t d, double lambda) {
    double worst = 0.0;
    const std::size_t kmax = v.k_max();
    std::vector<double> suffix_at(kmax + 2, 0.0);  // suffix_at[i] = sum_{k >= i} v(k)
    for (std::size_t i = kmax; i >= 1; --i) suffix_at[i] = suffix_at[i + 1] + v.at(i);
    for (std::size_t i = 1; i <= kmax; ++i) {
        const double r = lambda * std::pow(v.at(i - 1), static_cast<double>(d)) -
                         static_cast<double>(i) * v.at(i) - suffix_at[i + 1];
        worst = std::max(worst, std::abs(r));
    }
    return worst;
}

TailProfile fixed_point(std::uint32_t d, double lambda, std::size_t k_max, double tol,
                        const TailProfile* initial) {
    if (d < 1) throw std::invalid_argument("fixed_point: d must be >= 1");
    if (!(lambda > 0.0)) throw std::invalid_argument("fixed_point: lambda must be > 0");
    if (!(tol > 0.0)) throw std::invalid_argument("fixed_point: tol must be > 0");

    constexpr double kOmega = 0.5;  // damping; the raw map can oscillate for d >= 2
    constexpr std::size_t kMaxSweeps = 200000;
    constexpr std::size_t kMaxK = 4096;

    std::size_t kmax = std::max<std::size_t>(k_max, 8);
    while (true) {
        std::vector<double> v(kmax + 1, 0.0);
        v[0] = 1.0;
        if (initial != nullptr) {
            initial->validate(1e-12);
            for (std::size_t i = 1; i <= kmax; ++i) v[i] = initial->at(i);
        }
        double resid = std::numeric_limits<double>::infinity();
        for (std::size_t sweep = 0; sweep < kMaxSweeps; ++sweep) {
            for (std::size_t i = 1; i <= kmax; ++i) {
                double suffix = 0.0;
                for (std::size_t k = kmax; k > i; --k) suffix += v[k];
                double target =
                    (lambda * std::pow(v[i - 1], static_cast<double>(d)) - suffix) / static_cast<double>(i);
                target = std::clamp(target, 0.0, v[i - 1]);
                v[i] = (1.0 - kOmega) * v[i] + kOmega * target;
            }
            TailProfile p;
            p.values = v;
            resid = fixed_point_residual(p, d, lambda);
            if (resid < tol) break;
        }
        if (!(resid < tol)) {
            std::ostringstream os;
            os << "fixed_point: no convergence (residual " << resid << " after " << kMaxSweeps
               << " sweeps, k_max " << kmax << ")";
            throw FixedPointError(os.str());
        }
        if (v[kmax] < kTailEps) {
            // Trim trailing dead levels but keep at least the requested k_max.
            TailProfile p;
            p.values = std::move(v);
            return p;
        }
        if (kmax >= kMaxK) {
            throw FixedPointError("fixed_point: truncation tail persists at k_max cap");
        }
        kmax *= 2;
    }
}

Bracket recurrence_bracket(double u_prev, std::uint32_t i, std::uint32_t d, double lambda) {
    if (!(u_prev >= 0.0 && u_prev <= 1.0))
        throw std::invalid_argument("recurrence_bracket: u_prev must be in [0,1]");
    if (i < 1) throw std::invalid_argument("recurrence_bracket: i must be >= 1");
    const double ud = std::pow(u_prev, static_cast<double>(d));
    Bracket b;
    b.lower = lambda * ud / (static_cast<double>(i) + 1.0);
    b.upper = 2.0 * lambda * ud / static_cast<double>(i);
    const double a = std::ceil(2.0 * lambda) - 1.0;
    b.lower_valid = static_cast<double>(i) >= a;
    return b;
}

JstarPrediction jstar_predict(double n, std::uint32_t d, double lambda, const TailProfile& profile) {
    if (!(n >= 16.0)) throw std::invalid_argument("jstar_predict: n must be >= 16");
    if (d < 2) throw std::invalid_argument("jstar_predict: d must be >= 2 (use d1_levels for d = 1)");
    (void)lambda;
    const double ln = std::log(n);
    const double threshold = ln * ln * ln / std::sqrt(n);
    std::uint32_t j = 1;
    while (true) {
        if (j >= profile.values.size())
            throw std::invalid_argument("jstar_predict: profile truncated before the threshold crossing");
        if (profile.values[j] < threshold) break;
        ++j;
    }
    JstarPrediction p;
    p.jstar = j;
    p.threshold = threshold;
    if (d == 2) {
        p.support_lo = j;
        p.support_hi = j + 1;
    } else {
        p.support_lo = j > 0 ? j - 1 : 0;
        p.support_hi = j;
    }
    return p;
}

JstarPrediction jstar_predict(double n, std::uint32_t d, double lambda) {
    return jstar_predict(n, d, lambda, fixed_point(d, lambda));
}

} // namespace twochoice
