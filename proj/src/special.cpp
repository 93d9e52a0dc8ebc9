#include "twochoice/special.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace twochoice {

namespace {

double gamma_p_series(double a, double x) {
    double ap = a;
    double sum = 1.0 / a;
    double del = sum;
    for (int i = 0; i < 10000; ++i) {
        ap += 1.0;
        del *= x / ap;
        sum += del;
        if (std::abs(del) < std::abs(sum) * 1e-16) break;
    }
    return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

double gamma_q_cf(double a, double x) {
    const double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < 10000; ++i) {
        const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < 1e-16) break;
    }
    return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

} // namespace

double gamma_p(double a, double x) {
    if (x < 0.0 || a <= 0.0) throw std::invalid_argument("gamma_p: need x >= 0, a > 0");
    if (x == 0.0) return 0.0;
    return x < a + 1.0 ? gamma_p_series(a, x) : 1.0 - gamma_q_cf(a, x);
}

double gamma_q(double a, double x) {
    if (x < 0.0 || a <= 0.0) throw std::invalid_argument("gamma_q: need x >= 0, a > 0");
    if (x == 0.0) return 1.0;
    return x < a + 1.0 ? 1.0 - gamma_p_series(a, x) : gamma_q_cf(a, x);
}

double chi_square_sf(double stat, double dof) {
    if (dof <= 0.0) return 1.0;
    return gamma_q(dof / 2.0, stat / 2.0);
}

double kolmogorov_sf(double z) {
    if (z <= 0.0) return 1.0;
    double sum = 0.0;
    double sign = 1.0;
    for (int k = 1; k <= 100; ++k) {
        const double term = std::exp(-2.0 * k * k * z * z);
        sum += sign * term;
        if (term < 1e-16) break;
        sign = -sign;
    }
    return std::clamp(2.0 * sum, 0.0, 1.0);
}

GofResult chi_square_gof(std::span<const std::uint64_t> counts, std::span<const double> probs,
                         double min_expected) {
    if (counts.size() != probs.size() || counts.empty())
        throw std::invalid_argument("chi_square_gof: size mismatch");
    std::uint64_t n = 0;
    for (const auto c : counts) n += c;
    if (n == 0) throw std::invalid_argument("chi_square_gof: empty sample");

    // Pool from the right until every expected count clears the floor.
    std::vector<double> exp_pooled;
    std::vector<double> obs_pooled;
    double exp_acc = 0.0, obs_acc = 0.0;
    for (std::size_t i = 0; i < counts.size(); ++i) {
        exp_acc += probs[i] * static_cast<double>(n);
        obs_acc += static_cast<double>(counts[i]);
        if (exp_acc >= min_expected) {
            exp_pooled.push_back(exp_acc);
            obs_pooled.push_back(obs_acc);
            exp_acc = obs_acc = 0.0;
        }
    }
    if (exp_acc > 0.0 || obs_acc > 0.0) {
        if (!exp_pooled.empty()) {
            exp_pooled.back() += exp_acc;
            obs_pooled.back() += obs_acc;
        } else {
            exp_pooled.push_back(exp_acc);
            obs_pooled.push_back(obs_acc);
        }
    }
    if (exp_pooled.size() < 2) throw std::invalid_argument("chi_square_gof: too few categories");

    double stat = 0.0;
    for (std::size_t i = 0; i < exp_pooled.size(); ++i) {
        const double dev = obs_pooled[i] - exp_pooled[i];
        stat += dev * dev / exp_pooled[i];
    }
    GofResult r;
    r.stat = stat;
    r.dof = static_cast<double>(exp_pooled.size() - 1);
    r.p_value = chi_square_sf(stat, r.dof);
    return r;
}

GofResult chi_square_independence(const std::vector<std::vector<std::uint64_t>>& table,
                                  double min_expected) {
    if (table.empty() || table[0].empty())
        throw std::invalid_argument("chi_square_independence: empty table");
    const std::size_t rows = table.size(), cols = table[0].size();
    std::vector<double> row_sum(rows, 0.0), col_sum(cols, 0.0);
    double n = 0.0;
    for (std::size_t i = 0; i < rows; ++i) {
        if (table[i].size() != cols) throw std::invalid_argument("chi_square_independence: ragged table");
        for (std::size_t j = 0; j < cols; ++j) {
            row_sum[i] += static_cast<double>(table[i][j]);
            col_sum[j] += static_cast<double>(table[i][j]);
            n += static_cast<double>(table[i][j]);
        }
    }
    if (n == 0.0) throw std::invalid_argument("chi_square_independence: empty sample");

    // Greedily merge trailing rows/columns whose marginal mass is too small
    // for the expected-count floor.
    auto pool_indices = [&](const std::vector<double>& sums) {
        std::vector<std::size_t> group(sums.size());
        std::size_t g = 0;
        double acc = 0.0;
        for (std::size_t i = 0; i < sums.size(); ++i) {
            group[i] = g;
            acc += sums[i];
            if (acc >= min_expected && i + 1 < sums.size()) {
                ++g;
                acc = 0.0;
            }
        }
        return group;
    };
    const auto rg = pool_indices(row_sum);
    const auto cg = pool_indices(col_sum);
    const std::size_t prows = rg.back() + 1, pcols = cg.back() + 1;
    std::vector<std::vector<double>> pooled(prows, std::vector<double>(pcols, 0.0));
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j)
            pooled[rg[i]][cg[j]] += static_cast<double>(table[i][j]);

    std::vector<double> pr(prows, 0.0), pc(pcols, 0.0);
    for (std::size_t i = 0; i < prows; ++i)
        for (std::size_t j = 0; j < pcols; ++j) {
            pr[i] += pooled[i][j];
            pc[j] += pooled[i][j];
        }
    double stat = 0.0;
    for (std::size_t i = 0; i < prows; ++i)
        for (std::size_t j = 0; j < pcols; ++j) {
            const double expd = pr[i] * pc[j] / n;
            if (expd <= 0.0) continue;
            const double dev = pooled[i][j] - expd;
            stat += dev * dev / expd;
        }
    GofResult r;
    r.stat = stat;
    r.dof = static_cast<double>((prows - 1) * (pcols - 1));
    r.p_value = r.dof > 0 ? chi_square_sf(stat, r.dof) : 1.0;
    return r;
}

KsResult ks_test_uniform(std::span<const double> values) {
    if (values.empty()) throw std::invalid_argument("ks_test_uniform: empty sample");
    std::vector<double> v(values.begin(), values.end());
    std::sort(v.begin(), v.end());
    const double n = static_cast<double>(v.size());
    double d = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const double cdf = v[i];
        d = std::max(d, std::abs(static_cast<double>(i + 1) / n - cdf));
        d = std::max(d, std::abs(cdf - static_cast<double>(i) / n));
    }
    const double sn = std::sqrt(n);
    KsResult r;
    r.d = d;
    r.p_value = kolmogorov_sf((sn + 0.12 + 0.11 / sn) * d);
    return r;
}

KsResult ks_test_two_sample(std::span<const double> a, std::span<const double> b) {
    if (a.empty() || b.empty()) throw std::invalid_argument("ks_test_two_sample: empty sample");
    std::vector<double> x(a.begin(), a.end()), y(b.begin(), b.end());
    std::sort(x.begin(), x.end());
    std::sort(y.begin(), y.end());
    const double na = static_cast<double>(x.size()), nb = static_cast<double>(y.size());
    double d = 0.0;
    std::size_t i = 0, j = 0;
    while (i < x.size() && j < y.size()) {
        const double v = std::min(x[i], y[j]);
        while (i < x.size() && x[i] <= v) ++i;
        while (j < y.size() && y[j] <= v) ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
    }
    const double ne = std::sqrt(na * nb / (na + nb));
    KsResult r;
    r.d = d;
    r.p_value = kolmogorov_sf((ne + 0.12 + 0.11 / ne) * d);
    return r;
}

std::vector<double> solve_dense(std::vector<std::vector<double>> a, std::vector<double> b) {
    const std::size_t n = a.size();
    if (n == 0 || b.size() != n) throw std::invalid_argument("solve_dense: bad dimensions");
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
        if (std::abs(a[piv][col]) < 1e-300) throw std::runtime_error("solve_dense: singular matrix");
        std::swap(a[piv], a[col]);
        std::swap(b[piv], b[col]);
        for (std::size_t r = col + 1; r < n; ++r) {
            const double f = a[r][col] / a[col][col];
            if (f == 0.0) continue;
            for (std::size_t c = col; c < n; ++c) a[r][c] -= f * a[col][c];
            b[r] -= f * b[col];
        }
    }
    std::vector<double> x(n, 0.0);
    for (std::size_t r = n; r-- > 0;) {
        double s = b[r];
        for (std::size_t c = r + 1; c < n; ++c) s -= a[r][c] * x[c];
        x[r] = s / a[r][r];
    }
    return x;
}

} // namespace twochoice
