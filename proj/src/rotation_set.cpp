#include "rotdev/rotation_set.hpp"

#include <algorithm>
#include <cmath>

#include "rotdev/convex_hull.hpp"
#include "rotdev/errors.hpp"
#include "rotdev/parallel.hpp"

namespace rotdev {

std::string to_string(Classification c) {
    switch (c) {
    case Classification::point: return "point";
    case Classification::segment: return "segment";
    case Classification::interior: return "interior";
    case Classification::inconclusive: return "inconclusive";
    }
    return "unknown";
}

Vec2 RotationSetEstimate::centroid() const { return polygon_centroid(hull); }

Vec2 birkhoff_rotation_vector(const LiftedTorusMap& map, Vec2 z0, long n) {
    if (n < 1) throw PreconditionError("birkhoff_rotation_vector needs n >= 1");
    return map.iterate_displacement(z0, n) / static_cast<double>(n);
}

RotationSetEstimate estimate_rotation_set(const LiftedTorusMap& map, int grid_res,
                                          const std::vector<long>& horizons,
                                          const RotationSetOptions& opts) {
    if (grid_res < 1) throw PreconditionError("grid_res must be positive");
    if (horizons.empty()) throw PreconditionError("at least one horizon is required");
    for (std::size_t i = 0; i < horizons.size(); ++i) {
        if (horizons[i] < 1) throw PreconditionError("horizons must be positive");
        if (i > 0 && horizons[i] <= horizons[i - 1]) throw PreconditionError("horizons must increase");
    }
    const long n_max = horizons.back();
    map.check_horizon(n_max);

    std::vector<Vec2> grid;
    grid.reserve(static_cast<std::size_t>(grid_res) * grid_res);
    for (int j = 0; j < grid_res; ++j)
        for (int i = 0; i < grid_res; ++i)
            grid.push_back({static_cast<double>(i) / grid_res, static_cast<double>(j) / grid_res});
    const OrbitClasses classes = orbit_classes(map, grid);
    const std::size_t reps = classes.representatives.size();
    const std::size_t nh = horizons.size();

    std::vector<Vec2> averages(reps * nh);
    parallel_for(reps, [&](std::size_t b, std::size_t e, int) {
        for (std::size_t r = b; r < e; ++r) {
            TorusOrbit orbit(map, classes.representatives[r]);
            CompensatedSum2 sum;
            std::size_t next = 0;
            for (long n = 1; n <= n_max; ++n) {
                sum.add(orbit.forward());
                if (n == horizons[next]) {
                    averages[r * nh + next] = sum.value() / static_cast<double>(n);
                    ++next;
                }
            }
        }
    });

    RotationSetEstimate est;
    est.grid_res = grid_res;
    est.horizon = n_max;
    std::vector<Vec2> pts(reps);
    for (std::size_t h = 0; h < nh; ++h) {
        for (std::size_t r = 0; r < reps; ++r) pts[r] = averages[r * nh + h];
        std::vector<Vec2> hull = convex_hull(pts);
        est.trend.push_back({horizons[h], polygon_diameter(hull)});
        if (h + 1 == nh) est.hull = std::move(hull);
    }
    est.diameter = polygon_diameter(est.hull);
    est.min_width = polygon_min_width(est.hull);
    est.classification = classify(est, opts.point_tol, opts.line_tol);
    if (est.classification == Classification::point || est.classification == Classification::segment)
        est.carrier = fit_direction(est, opts);
    return est;
}

Classification classify(const RotationSetEstimate& est, double point_tol, double line_tol) {
    const double diameter = polygon_diameter(est.hull);
    if (diameter <= point_tol) return Classification::point;
    const double width = polygon_min_width(est.hull);
    if (width <= line_tol) return Classification::segment;
    if (width > 10.0 * line_tol) return Classification::interior;
    return Classification::inconclusive;
}

Vec2 canonical_direction(Vec2 v) {
    if (v.x < 0.0 || (v.x == 0.0 && v.y < 0.0)) return -v;
    return v;
}

Carrier fit_direction(const RotationSetEstimate& est, const RotationSetOptions& opts) {
    const Classification c = classify(est, opts.point_tol, opts.line_tol);
    if (c != Classification::point && c != Classification::segment)
        throw NotLineLike("rotation set estimate is classified '" + to_string(c) + "'");
    const Vec2 centroid = est.centroid();
    Vec2 v;
    if (c == Classification::point) {
        const double len = norm(opts.point_direction);
        if (!(len > 0.0)) throw PreconditionError("point_direction must be nonzero");
        v = opts.point_direction / len;
    } else {
        double sxx = 0.0, sxy = 0.0, syy = 0.0;
        for (const Vec2& p : est.hull) {
            const Vec2 d = p - centroid;
            sxx += d.x * d.x;
            sxy += d.x * d.y;
            syy += d.y * d.y;
        }
        const double theta = 0.5 * std::atan2(2.0 * sxy, sxx - syy);
        Vec2 axis{std::cos(theta), std::sin(theta)};
        // Snap exact axis-aligned cases so that v comes out exactly (1,0)/(0,1).
        if (sxy == 0.0) axis = sxx >= syy ? Vec2{1.0, 0.0} : Vec2{0.0, 1.0};
        v = perp(axis);
    }
    v = canonical_direction(v);
    Carrier carrier{v, dot(centroid, v)};
    for (const Vec2& p : est.hull) {
        if (std::fabs(dot(p, v) - carrier.alpha) > opts.line_tol)
            throw NotLineLike("hull vertex farther than line_tol from the fitted carrier");
    }
    return carrier;
}

} // namespace rotdev
