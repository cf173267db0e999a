#include <doctest.h>

#include <cmath>

#include "families.hpp"
#include "oracles.hpp"
#include "rotdev/errors.hpp"
#include "rotdev/invariants.hpp"
#include "rotdev/marching_squares.hpp"
#include "rotdev/pseudofoliation.hpp"

using namespace rotdev;

namespace {

struct CoboundaryChart {
    CentralizedSkewProduct sp;
    LevelFunctionChart chart;
};

// built once; the chart is the expensive part of this suite
const CoboundaryChart& coboundary_chart() {
    static const CoboundaryChart c = [] {
        auto sp = CentralizedSkewProduct::build(fam::coboundary().instantiate(), {golden_mean(), 0.0});
        auto chart = level_function(sp, {}, {0.0, 1.0}, Window{{}, 8.0, 256}, 1000, 2.0);
        return CoboundaryChart{std::move(sp), std::move(chart)};
    }();
    return c;
}

std::vector<double> interior_levels(const LevelFunctionChart& chart, int count) {
    std::vector<double> out;
    for (int k = 1; k <= count; ++k) out.push_back(chart.r_lo + (chart.r_hi - chart.r_lo) * k / (count + 1));
    return out;
}

} // namespace

TEST_SUITE("pseudofoliation") {

TEST_CASE("marching squares on a linear field") {
    const int w = 20, hgt = 12;
    const double h = 0.5;
    std::vector<double> vals(w * hgt);
    for (int j = 0; j < hgt; ++j)
        for (int i = 0; i < w; ++i) vals[j * w + i] = 1.0 + h * i;
    const auto lines = contour_lines(vals, w, hgt, {1.0, -3.0}, h, 4.3);
    REQUIRE(lines.size() == 1);
    CHECK(lines[0].size() == static_cast<std::size_t>(hgt));
    for (Vec2 p : lines[0]) CHECK(std::fabs(p.x - 4.3) < 1e-12);
    CHECK(contour_lines(vals, w, hgt, {}, h, 100.0).empty());
}

TEST_CASE("marching squares closes a loop around a bump") {
    const int n = 21;
    std::vector<double> vals(n * n);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) vals[j * n + i] = -std::hypot(i - 10.0, j - 10.0);
    const auto lines = contour_lines(vals, n, n, {}, 1.0, -5.0);
    REQUIRE(lines.size() == 1);
    CHECK(lines[0].front() == lines[0].back());
    for (Vec2 p : lines[0]) CHECK(std::fabs(std::hypot(p.x - 10.0, p.y - 10.0) - 5.0) < 0.2);
}

TEST_CASE("slope type") {
    CHECK(slope_type({0.0, 1.0}).rational);
    const auto r = slope_type(Vec2{3.0, 4.0} / 5.0);
    CHECK(r.rational);
    CHECK(r.p == 4);
    CHECK(r.q == 3);
    CHECK_FALSE(slope_type(Vec2{1.0, golden_mean()} / std::hypot(1.0, golden_mean())).rational);
}

TEST_CASE("coboundary leaves are graphs of sin(2 pi x) + c") {
    const auto& c = coboundary_chart();
    const auto& chart = c.chart;
    CHECK(chart.resolved_fraction() >= 0.9);
    const double h = chart.window.h();
    const auto leaves = extract_leaves(chart, interior_levels(chart, 5));
    REQUIRE(leaves.size() == 5);
    for (const auto& leaf : leaves) {
        CHECK(leaf.points() > 0);
        std::vector<std::pair<double, double>> pts;
        for (const auto& pl : leaf.polylines)
            for (Vec2 p : pl) pts.push_back({p.x, p.y});
        CAPTURE(leaf.level);
        CHECK(oracle::sine_graph_sup_distance(pts) <= 2.0 * h + chart.eps_r);
        CHECK(leaf.width <= 2.0 + 2.0 * h + chart.eps_r);
    }
}

TEST_CASE("coboundary certificate") {
    const auto& c = coboundary_chart();
    const auto leaves = extract_leaves(c.chart, interior_levels(c.chart, 5));
    const auto cert = certify(c.chart, leaves, c.sp.map(), c.sp.rho_tilde(), 200);
    CAPTURE(cert.separation.detail);
    CAPTURE(cert.empty_interior.detail);
    CAPTURE(cert.disjointness.detail);
    CAPTURE(cert.equivariance.detail);
    CAPTURE(cert.strip_confinement.detail);
    CHECK(cert.all_passed());
    CHECK(cert.slope.rational);
    // at 256^2 a few samples on the steep flanks miss 2 eps + 2h; the full
    // 512^2 run in the acceptance suite has none
    CHECK(cert.equivariance_within_bound >= 0.9);
    CHECK(check_chart_integer_translation(c.chart).passed);
}

TEST_CASE("level function is monotone along v") {
    const auto& chart = coboundary_chart().chart;
    const int n = chart.window.resolution;
    std::size_t bad = 0;
    for (int j = 1; j < n; ++j)
        for (int i = 0; i < n; ++i)
            bad += chart.H[chart.window.index(i, j)] < chart.H[chart.window.index(i, j - 1)];
    CHECK(bad == 0);
}

TEST_CASE("out of range levels and unresolved charts") {
    const auto& chart = coboundary_chart().chart;
    CHECK_THROWS_AS(extract_leaves(chart, {chart.r_hi + 1.0}), LevelOutOfRange);
    CHECK_THROWS_AS(extract_leaves(chart, {chart.r_lo}), LevelOutOfRange);
    LevelFunctionChart bad = chart;
    std::fill(bad.status.begin(), bad.status.end(), CellStatus::saturated_low);
    CHECK_THROWS_AS(extract_leaves(bad, {0.5 * (chart.r_lo + chart.r_hi)}), PreconditionError);
}

TEST_CASE("U_r sits between the seed and Lambda_r") {
    const auto& c = coboundary_chart();
    const auto field = fiber_minimum_field(c.sp, {}, {0.0, 1.0}, 1000, c.chart.window, Sidedness::two_sided);
    const auto U = build_U_r(field, 0.0, 2.0);
    const auto L = stable_set(field, 0.0).component;
    CHECK(is_subset(U, L));
    CHECK(is_subset(U, level_region(field, 0.0, 2.0)));
    CHECK(is_subset(level_region(field, 0.0, 2.0), L));
    CHECK(is_subset(level_region(field, 1.0, 2.0), level_region(field, 0.0, 2.0)));
    CHECK_THROWS_AS(build_U_r(field, 50.0, 2.0), SeedEmpty);
}

} // TEST_SUITE
