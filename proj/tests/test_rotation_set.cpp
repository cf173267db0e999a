#include <doctest.h>

#include <random>

#include "families.hpp"
#include "oracles.hpp"
#include "rotdev/convex_hull.hpp"
#include "rotdev/errors.hpp"
#include "rotdev/rotation_set.hpp"

using namespace rotdev;

TEST_SUITE("rotation_set") {

TEST_CASE("hull agrees with brute force on random clouds") {
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<int> coarse(-4, 4);
    std::uniform_real_distribution<double> fine(-1.0, 1.0);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<Vec2> pts;
        std::vector<std::pair<double, double>> ref;
        const int n = 3 + trial % 25;
        for (int k = 0; k < n; ++k) {
            // half the trials on a coarse lattice to force collinear and repeated points
            const Vec2 p = trial % 2 ? Vec2{static_cast<double>(coarse(rng)), static_cast<double>(coarse(rng))}
                                     : Vec2{fine(rng), fine(rng)};
            pts.push_back(p);
            ref.push_back({p.x, p.y});
        }
        auto hull = convex_hull(pts);
        std::vector<std::pair<double, double>> got;
        for (auto p : hull) got.push_back({p.x, p.y});
        std::sort(got.begin(), got.end());
        CHECK(got == oracle::brute_hull(ref));
        // counter-clockwise, strictly convex
        if (hull.size() >= 3)
            for (std::size_t i = 0; i < hull.size(); ++i)
                CHECK(orient2d_sign(hull[i], hull[(i + 1) % hull.size()], hull[(i + 2) % hull.size()]) > 0);
    }
}

TEST_CASE("orientation is exact near degeneracy") {
    const Vec2 a{0.5, 0.5}, b{12.0, 12.0};
    CHECK(orient2d_sign(a, b, {24.0, 24.0}) == 0);
    CHECK(orient2d_sign(a, b, {24.0, std::nextafter(24.0, 25.0)}) == 1);
    CHECK(orient2d_sign(a, b, {24.0, std::nextafter(24.0, 23.0)}) == -1);
}

TEST_CASE("translation rotation set is the point alpha") {
    const auto est = estimate_rotation_set(fam::translation().instantiate(), 64, {100, 1000});
    CHECK(est.classification == Classification::point);
    CHECK(norm(est.centroid() - Vec2{0.3, 0.7}) < 1e-12);
    REQUIRE(est.carrier);
    CHECK(est.carrier->v == Vec2{0.0, 1.0});
}

TEST_CASE("coboundary hull is a point within 2/N of (a, 0)") {
    const long N = 10000;
    const auto est = estimate_rotation_set(fam::coboundary().instantiate(), 64, {1000, N});
    for (const Vec2& p : est.hull) CHECK(norm(p - Vec2{golden_mean(), 0.0}) <= 2.0 / N);
}

TEST_CASE("resonant skew gives a vertical segment") {
    // cos(4 pi x) along x -> x + 1/2 is invariant, so averages cover [-1, 1]
    const auto est = estimate_rotation_set(fam::skew().instantiate(), 64, {100, 1000});
    CHECK(est.classification == Classification::segment);
    CHECK(est.diameter == doctest::Approx(2.0).epsilon(1e-3));
    REQUIRE(est.carrier);
    CHECK(est.carrier->v == Vec2{1.0, 0.0});
    CHECK(est.carrier->alpha == doctest::Approx(0.5));
}

TEST_CASE("fit_direction rejects a fat hull") {
    RotationSetEstimate est;
    est.hull = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
    est.diameter = std::sqrt(2.0);
    est.min_width = 1.0;
    est.classification = classify(est, 1e-4, 1e-4);
    CHECK(est.classification == Classification::interior);
    CHECK_THROWS_AS(fit_direction(est), NotLineLike);
}

TEST_CASE("canonical direction is lexicographically non-negative") {
    CHECK(canonical_direction({-1.0, 0.0}) == Vec2{1.0, 0.0});
    CHECK(canonical_direction({0.0, -1.0}) == Vec2{0.0, 1.0});
    CHECK(canonical_direction({-0.6, 0.8}) == Vec2{0.6, -0.8});
}

} // TEST_SUITE
