#include <doctest.h>

#include <cmath>
#include <vector>

#include "twochoice/analytic.hpp"
#include "twochoice/special.hpp"

using namespace twochoice;

TEST_SUITE("analytic") {

TEST_CASE("poisson_tail pins the hand-derived values") {
    CHECK(poisson_tail(1.0, 0) == 1.0);
    CHECK(poisson_tail(1.0, 1) == doctest::Approx(0.6321205588285577).epsilon(1e-12));
    CHECK(poisson_tail(2.0, 3) == doctest::Approx(0.3233235838169365).epsilon(1e-12));
    CHECK(poisson_tail(0.0, 0) == 1.0);
    CHECK(poisson_tail(0.0, 3) == 0.0);
    CHECK_THROWS_AS(poisson_tail(-1.0, 0), std::invalid_argument);
}

TEST_CASE("poisson_tail agrees with the incomplete-gamma route") {
    // P(Po(mu) >= i) equals the lower regularized gamma P(i, mu): an
    // independent evaluation path (continued fraction / series).
    for (const double mu : {0.3, 1.0, 4.5, 25.0, 10000.0}) {
        for (const std::uint64_t i :
             {std::uint64_t{1}, std::uint64_t{2}, std::uint64_t{5}, std::uint64_t{30},
              static_cast<std::uint64_t>(mu), static_cast<std::uint64_t>(mu) + 50}) {
            if (i == 0) continue;
            const double via_gamma = gamma_p(static_cast<double>(i), mu);
            CHECK(poisson_tail(mu, i) == doctest::Approx(via_gamma).epsilon(1e-9).scale(1.0));
        }
    }
}

TEST_CASE("poisson_tail is monotone and its increments sum to one") {
    for (const double mu : {0.5, 1.0, 3.0, 20.0}) {
        double prev = 1.0;
        double mass = 0.0;
        for (std::uint64_t i = 0; i <= 200; ++i) {
            const double t = poisson_tail(mu, i);
            CHECK(t <= prev + 1e-15);
            mass += t - poisson_tail(mu, i + 1);
            prev = t;
        }
        CHECK(mass == doctest::Approx(1.0).epsilon(1e-12));
        // nondecreasing in mu
        CHECK(poisson_tail(mu, 3) <= poisson_tail(mu * 1.5, 3) + 1e-15);
    }
}

TEST_CASE("tail inequalities hold numerically") {
    // Two-sided deviation bound and the mu^k/k! upper bound.
    for (const double mu : {1.0, 5.0, 40.0}) {
        for (const double eps : {0.1, 0.3, 0.7, 1.0}) {
            const std::uint64_t lo = static_cast<std::uint64_t>(std::ceil(mu * (1.0 + eps)));
            const double upper_tail = poisson_tail(mu, lo);
            const double lower_mass = 1.0 - poisson_tail(mu, static_cast<std::uint64_t>(
                                                                  std::floor(mu * (1.0 - eps))) +
                                                                  1);
            CHECK(upper_tail + lower_mass <= poisson_deviation_bound(mu, eps) + 1e-12);
        }
        for (std::uint64_t k = 1; k <= 60; k += 7)
            CHECK(poisson_tail(mu, k) <= poisson_upper_factorial_bound(mu, k) + 1e-15);
    }
}

TEST_CASE("restricted-mean identity: E[X 1(X>=k)] = mu P(X >= k-1)") {
    for (const double mu : {0.7, 2.0, 9.0}) {
        for (std::uint64_t k = 1; k <= 25; ++k) {
            double lhs = 0.0;
            for (std::uint64_t x = k; x < k + 400; ++x)
                lhs += static_cast<double>(x) * poisson_pmf(mu, x);
            CHECK(lhs == doctest::Approx(mu * poisson_tail(mu, k - 1)).epsilon(1e-10));
        }
    }
}

TEST_CASE("d1_levels reproduces the frozen scan values") {
    CHECK(d1_levels(1e5, 1.0).level == 8);
    CHECK(d1_levels(1e6, 1.0).level == 9);
    CHECK_THROWS_AS(d1_levels(10.0, 1.0), std::invalid_argument);

    // frozen grid m(10^4..10^12) and the slow drift of m * lnln / ln toward 1
    const std::vector<std::pair<double, std::uint32_t>> grid{
        {1e4, 7}, {1e6, 9}, {1e8, 11}, {1e10, 13}, {1e12, 14}};
    std::uint32_t prev = 0;
    for (const auto& [n, expect] : grid) {
        const LevelPrediction lp = d1_levels(n, 1.0);
        CHECK(lp.level == expect);
        CHECK(lp.level >= prev);
        const double ratio = lp.level * std::log(std::log(n)) / std::log(n);
        CHECK(ratio > 1.0);
        CHECK(ratio < 2.0);
        prev = lp.level;
    }
}

TEST_CASE("d1 bound functions bracket the exact law") {
    const double n = 1e5, lambda = 1.0;
    for (std::uint32_t i = 1; i <= 12; ++i) {
        const double exact_le = d1_prob_max_le_exact(n, lambda, i);
        CHECK(exact_le <= d1_prob_max_le_bound(n, lambda, i) + 1e-15);
        const double exact_ge = 1.0 - d1_prob_max_le_exact(n, lambda, i - 1);
        CHECK(exact_ge <= d1_prob_max_ge_bound(n, lambda, i) + 1e-15);
    }
}

TEST_CASE("ode_solve reproduces the d=1 closed form") {
    const OdeSolution sol =
        ode_solve(1, 1.0, TailProfile::empty_initial(40), 1.0, 40, OdeVariant::continuous);
    const double mu = 1.0 - std::exp(-1.0);
    double sup = 0.0;
    const TailProfile& v = sol.final_profile();
    for (std::size_t k = 0; k < v.values.size(); ++k)
        sup = std::max(sup, std::abs(v.values[k] - poisson_tail(mu, k)));
    CHECK(sup <= 1e-8);
}

TEST_CASE("ode_solve pins the independently computed d=2 profiles") {
    SUBCASE("t_end zero returns the initial data") {
        const TailProfile init = TailProfile::empty_initial(16);
        const OdeSolution sol = ode_solve(2, 1.0, init, 0.0, 16, OdeVariant::continuous);
        CHECK(sol.final_profile().values == init.values);
    }
    SUBCASE("continuous system at t=1") {
        const OdeSolution sol =
            ode_solve(2, 1.0, TailProfile::empty_initial(40), 1.0, 40, OdeVariant::continuous);
        const TailProfile& v = sol.final_profile();
        // reference values from an independent high-order integration
        CHECK(v.values[1] == doctest::Approx(0.5487883532315).epsilon(1e-8));
        CHECK(v.values[2] == doctest::Approx(0.08238185658576).epsilon(1e-7));
        CHECK(v.values[3] == doctest::Approx(9.502815142029e-4).epsilon(1e-6));
        CHECK(v.values[4] == doctest::Approx(6.749711718170e-8).epsilon(1e-5));

        // the recorded solution is a continuous path of valid profiles, with
        // v(t,0) pinned at 1 and per-step changes bounded by the derivative cap
        const double deriv_cap = 1.0 + 40.0;  // |dv_k| <= lambda + k
        for (std::size_t s = 0; s < sol.profiles.size(); ++s) {
            CHECK(sol.profiles[s].values[0] == 1.0);
            sol.profiles[s].validate(1e-12);
            if (s == 0) continue;
            const double dt = sol.times[s] - sol.times[s - 1];
            CHECK(dt > 0.0);
            for (std::size_t k = 0; k <= 40; ++k) {
                CHECK(std::abs(sol.profiles[s].at(k) - sol.profiles[s - 1].at(k)) <=
                      dt * deriv_cap + 1e-12);
            }
        }
    }
    SUBCASE("sequential system at t=1") {
        const OdeSolution sol =
            ode_solve(2, 1.0, TailProfile::empty_initial(40), 1.0, 40, OdeVariant::sequential);
        const TailProfile& v = sol.final_profile();
        // level 1 solves dv/dt = 1 - v^2 exactly: tanh(t)
        CHECK(v.values[1] == doctest::Approx(std::tanh(1.0)).epsilon(1e-9));
        CHECK(v.values[2] == doctest::Approx(0.2295045384961).epsilon(1e-8));
        CHECK(v.values[3] == doctest::Approx(8.895258291040e-3).epsilon(1e-7));
        CHECK(v.values[4] == doctest::Approx(6.047255802769e-6).epsilon(1e-5));
    }
}

TEST_CASE("ode_solve reports truncation starvation") {
    CHECK_THROWS_AS(
        ode_solve(1, 2.0, TailProfile::empty_initial(2), 5.0, 2, OdeVariant::continuous),
        TruncationError);
}

TEST_CASE("long-time ODE integration lands on the fixed point") {
    const TailProfile fp = fixed_point(2, 1.0, 64, 1e-13);
    const OdeSolution sol =
        ode_solve(2, 1.0, TailProfile::empty_initial(64), 50.0, 64, OdeVariant::continuous);
    double sup = 0.0;
    for (std::size_t k = 0; k < 64; ++k)
        sup = std::max(sup, std::abs(sol.final_profile().at(k) - fp.at(k)));
    CHECK(sup <= 1e-8);
}

TEST_CASE("fixed point equals Poisson tails when d = 1") {
    for (const double lambda : {0.5, 1.0, 2.0}) {
        const TailProfile v = fixed_point(1, lambda, 64, 1e-13);
        double sup = 0.0;
        for (std::size_t i = 0; i < v.values.size(); ++i)
            sup = std::max(sup, std::abs(v.values[i] - poisson_tail(lambda, i)));
        CHECK(sup <= 1e-10);
    }
}

TEST_CASE("fixed point pins the independently computed d=2 profile") {
    const TailProfile v = fixed_point(2, 1.0, 64, 1e-13);
    CHECK(fixed_point_residual(v, 2, 1.0) <= 1e-13);
    CHECK(v.values[1] == doctest::Approx(0.7258705212750495).epsilon(1e-8));
    CHECK(v.values[2] == doctest::Approx(0.2527585349311610).epsilon(1e-8));
    CHECK(v.values[3] == doctest::Approx(0.02125796659337827).epsilon(1e-8));
    CHECK(v.values[4] == doctest::Approx(1.129746477577442e-4).epsilon(1e-7));
    CHECK(v.values[5] == doctest::Approx(2.552654206979927e-9).epsilon(1e-6));
}

TEST_CASE("fixed point vanishes as lambda -> 0 and decays doubly exponentially") {
    const TailProfile tiny = fixed_point(2, 1e-8, 16, 1e-15);
    CHECK(tiny.values[1] <= 1e-7);

    const TailProfile v = fixed_point(2, 1.0, 64, 1e-13);
    // log(-log v) growth factor approaches d = 2 once v is small
    for (std::size_t i = 4; i + 1 < v.values.size(); ++i) {
        if (v.values[i] > 1e-10 || v.values[i + 1] < 1e-250) continue;
        const double ratio = std::log(v.values[i + 1]) / std::log(v.values[i]);
        CHECK(ratio > 1.9);
        CHECK(ratio < 2.1);
    }
}

TEST_CASE("fixed point is insensitive to the starting profile") {
    const double tol = 1e-12;
    const TailProfile a = fixed_point(2, 1.0, 64, tol);
    TailProfile init;  // start from Poisson tails instead of zeros
    init.values.resize(65);
    for (std::size_t i = 0; i <= 64; ++i) init.values[i] = poisson_tail(1.0, i);
    const TailProfile b = fixed_point(2, 1.0, 64, tol, &init);
    double gap = 0.0;
    for (std::size_t i = 0; i < 64; ++i) gap = std::max(gap, std::abs(a.at(i) - b.at(i)));
    CHECK(gap < 10.0 * tol);
}

TEST_CASE("recurrence brackets evaluate and contain the fixed point") {
    const Bracket b = recurrence_bracket(0.5, 2, 2, 1.0);
    CHECK(b.lower == doctest::Approx(0.25 / 3.0).epsilon(1e-12));
    CHECK(b.upper == doctest::Approx(0.125 * 2.0).epsilon(1e-12));
    CHECK(b.lower_valid);

    const Bracket z = recurrence_bracket(0.0, 1, 2, 1.0);
    CHECK(z.lower == 0.0);
    CHECK(z.upper == 0.0);

    // lower bound validity flag: i < ceil(2 lambda) - 1 is flagged
    CHECK(!recurrence_bracket(0.5, 1, 2, 1.5).lower_valid);
    CHECK(recurrence_bracket(0.5, 2, 2, 1.5).lower_valid);

    const TailProfile v = fixed_point(2, 1.0, 64, 1e-13);
    for (std::uint32_t i = 1; i < 32; ++i) {
        const Bracket br = recurrence_bracket(v.at(i - 1), i, 2, 1.0);
        CHECK(v.at(i) <= br.upper + 1e-12);
        if (br.lower_valid) CHECK(v.at(i) >= br.lower - 1e-12);
    }
}

TEST_CASE("jstar scan and two-point supports") {
    const TailProfile v = fixed_point(2, 1.0, 64, 1e-13);

    // n = 100: the threshold 9.77 exceeds 1, so the scan stops at i = 1.
    const JstarPrediction tinyn = jstar_predict(100.0, 2, 1.0, v);
    CHECK(tinyn.jstar == 1);
    CHECK(tinyn.threshold == doctest::Approx(9.766457).epsilon(1e-6));
    CHECK(tinyn.support_lo == 1);
    CHECK(tinyn.support_hi == 2);

    // frozen crossings along the fixed-point profile
    CHECK(jstar_predict(1e5, 2, 1.0, v).jstar == 1);
    CHECK(jstar_predict(1e8, 2, 1.0, v).jstar == 2);
    CHECK(jstar_predict(1e10, 2, 1.0, v).jstar == 3);
    CHECK(jstar_predict(1e12, 2, 1.0, v).jstar == 4);

    // d >= 3 support is {j*-1, j*}
    const TailProfile v3 = fixed_point(3, 1.0, 64, 1e-13);
    const JstarPrediction p3 = jstar_predict(1e10, 3, 1.0, v3);
    CHECK(p3.support_hi == p3.jstar);
    CHECK(p3.support_lo + 1 == p3.jstar);

    // j* - lnln n / ln d stays inside a narrow band across nine decades
    double lo = 1e9, hi = -1e9;
    for (double n = 1e3; n <= 1e12 + 1.0; n *= 10.0) {
        const double off =
            jstar_predict(n, 2, 1.0, v).jstar - std::log(std::log(n)) / std::log(2.0);
        lo = std::min(lo, off);
        hi = std::max(hi, off);
    }
    CHECK(hi - lo <= 2.5);
    CHECK(lo > -3.2);
    CHECK(hi < 0.5);

    // truncated profile -> explicit failure
    TailProfile stub;
    stub.values = {1.0, 0.9, 0.8};
    CHECK_THROWS_AS(jstar_predict(1e12, 2, 1.0, stub), std::invalid_argument);
    CHECK_THROWS_AS(jstar_predict(1e5, 1, 1.0, v), std::invalid_argument);
}

} // TEST_SUITE
