#include <doctest.h>

#include <cmath>

#include "families.hpp"
#include "oracles.hpp"
#include "rotdev/deviations.hpp"
#include "rotdev/errors.hpp"
#include "rotdev/invariants.hpp"

using namespace rotdev;

TEST_SUITE("deviations") {

TEST_CASE("offset grid and checkpoints") {
    const auto g = offset_grid(4);
    REQUIRE(g.size() == 16);
    CHECK(g.front() == Vec2{0.125, 0.125});
    CHECK(g.back() == Vec2{0.875, 0.875});
    const auto c = default_checkpoints(10000);
    CHECK(c.front() == 1);
    CHECK(c.back() == 10000);
    CHECK(std::is_sorted(c.begin(), c.end()));
    CHECK(default_checkpoints(300).back() == 300);
}

TEST_CASE("translation deviation vanishes") {
    const auto map = fam::translation().instantiate();
    const auto p = deviation_profile(map, {0.0, 1.0}, 0.7, 32, 10000);
    double worst = 0.0;
    for (long n = -p.horizon; n <= p.horizon; ++n) worst = std::max({worst, std::fabs(p.at(n)), std::fabs(p.at_minus(n))});
    CHECK(worst == 0.0);
    CHECK(p.running_max == 0.0);
    CHECK(p.verdict == Verdict::bounded);
}

TEST_CASE("coboundary profile matches the telescoped oracle") {
    const auto map = fam::coboundary().instantiate();
    const long double a = golden_mean();
    const int res = 64;
    const auto p = deviation_profile(map, {0.0, 1.0}, 0.0, res, 2000);
    double worst = 0.0;
    for (long n = -p.horizon; n <= p.horizon; n += 7) {
        const long double ref = oracle::grid_max(res, [&](long double x) { return oracle::coboundary_sum(x, a, n); });
        const long double ref_m = oracle::grid_max(res, [&](long double x) { return -oracle::coboundary_sum(x, a, n); });
        worst = std::max({worst, std::fabs(p.at(n) - static_cast<double>(ref)), std::fabs(p.at_minus(n) - static_cast<double>(ref_m))});
    }
    CHECK(worst < 1e-10);
    CHECK(p.running_max <= 2.0);
    CHECK(p.verdict == Verdict::bounded);
}

TEST_CASE("liouville profile matches the closed form and direct sums") {
    const auto map = fam::liouville().instantiate();
    const double a = liouville_number(6);
    const int res = 32;
    const auto p = deviation_profile(map, {0.0, 1.0}, 0.0, res, 10000);
    for (long n : {1L, 2L, 99L, 100L, 1234L, 10000L, -1L, -5000L}) {
        CAPTURE(n);
        const long double closed = oracle::grid_max(res, [&](long double x) {
            // negative n: S_n(x) = -S_{|n|}(x + n a)
            return n >= 0 ? oracle::sin_sum(x, a, n) : -oracle::sin_sum(x + n * static_cast<long double>(a), a, -n);
        });
        const long double direct = oracle::grid_max(res, [&](long double x) {
            return oracle::birkhoff([](long double s) { return std::sin(2 * oracle::kPi * s); }, a, x, n);
        });
        CHECK(std::fabs(p.at(n) - static_cast<double>(closed)) < 1e-9);
        CHECK(std::fabs(p.at(n) - static_cast<double>(direct)) < 1e-9);
    }
    // |S_n| <= 1 / sin(pi a) for every n
    CHECK(p.running_max <= 1.0 / std::sin(M_PI * a) + 1e-9);
}

TEST_CASE("running max is monotone and lift independent") {
    const auto map = fam::generic().instantiate();
    const auto p = deviation_profile(map, {1.0, 0.0}, 0.25, 16, 1000);
    CHECK(check_horizon_monotone(p).value == 0.0);
    for (std::size_t k = 0; k < p.checkpoints.size(); ++k)
        CHECK(p.checkpoints[k].running_max == p.running_max_at(p.checkpoints[k].horizon));
    const auto li = check_lift_independence(map, {1.0, 0.0}, 0.25, 16, 500);
    CAPTURE(li.value);
    CHECK(li.passed);
}

TEST_CASE("sqrt2 sandwich on every family") {
    struct Case {
        MapFamilySpec spec;
        Vec2 v;
        double alpha;
    };
    const Case cases[] = {{fam::translation(), {0.0, 1.0}, 0.7}, {fam::skew(), {1.0, 0.0}, 0.5},
                          {fam::coboundary(), {0.0, 1.0}, 0.0}, {fam::liouville(), {0.0, 1.0}, 0.0},
                          {fam::generic(), {1.0, 0.0}, 0.25}};
    for (const auto& c : cases) {
        const auto map = c.spec.instantiate();
        const SymmetryGap g = symmetry_gap(map, c.v, c.alpha, 32, 2000);
        CAPTURE(to_string(c.spec.tag));
        CHECK(std::fabs(g.gap_plus - g.gap_minus) <= g.bound);
        CHECK(g.bound == kSandwichConstant + default_slack(map, 2000));
    }
}

TEST_CASE("sandwich violation is reported") {
    // a hand-made profile with a large one-sided gap
    std::vector<double> dp(21, 0.0), dm(21, 0.0);
    dp[15] = 5.0;
    const auto p = profile_from_values({0.0, 1.0}, 0.0, 4, 10, dp, dm);
    CHECK_THROWS_AS(symmetry_gap(p, 0.1), SandwichViolated);
    CHECK_FALSE(check_sandwich(p, 0.1).passed);
}

TEST_CASE("verdict on synthetic profiles") {
    const long N = 10000;
    std::vector<double> flat(2 * N + 1), log_growth(2 * N + 1), zero(2 * N + 1, 0.0);
    for (long n = -N; n <= N; ++n) {
        flat[n + N] = n == 0 ? 0.0 : 1.0;
        log_growth[n + N] = n == 0 ? 0.0 : std::log10(static_cast<double>(std::labs(n))) * 2.0;
    }
    const auto pb = profile_from_values({0.0, 1.0}, 0.0, 8, N, flat, zero);
    CHECK(pb.verdict == Verdict::bounded);
    CHECK(pb.running_max == 1.0);
    const auto pg = profile_from_values({0.0, 1.0}, 0.0, 8, N, log_growth, zero);
    CHECK(pg.verdict == Verdict::growing);
    CHECK(pg.growth == doctest::Approx(2.0).epsilon(0.05));
}

TEST_CASE("bad arguments are rejected") {
    const auto map = fam::translation().instantiate();
    CHECK_THROWS_AS(deviation_profile(map, {1.0, 1.0}, 0.0, 8, 10), PreconditionError);
    CHECK_THROWS_AS(deviation_profile(map, {1.0, 0.0}, 0.0, 8, 0), PreconditionError);
}

} // TEST_SUITE
