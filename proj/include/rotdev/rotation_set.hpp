#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rotdev/torus_map.hpp"

namespace rotdev {

enum class Classification { point, segment, interior, inconclusive };
std::string to_string(Classification c);

/// Carrier line l_alpha^v = alpha v + R v^perp.
struct Carrier {
    Vec2 v;
    double alpha = 0.0;
};

struct HorizonDiameter {
    long horizon = 0;
    double diameter = 0.0;
};

struct RotationSetEstimate {
    std::vector<Vec2> hull; ///< CCW
    long horizon = 0;
    int grid_res = 0;
    double diameter = 0.0;
    double min_width = 0.0;
    std::vector<HorizonDiameter> trend;
    Classification classification = Classification::inconclusive;
    std::optional<Carrier> carrier;

    /// Selected rotation vector: centroid of the hull.
    Vec2 centroid() const;
};

struct RotationSetOptions {
    double point_tol = 1e-4;
    double line_tol = 1e-4;
    /// Direction used when the estimate is a single point.
    Vec2 point_direction{0.0, 1.0};
};

/// Hull of Delta^{(n)}(z)/n over the grid_res x grid_res lattice {(i,j)/grid_res}
/// at the largest horizon; smaller horizons contribute only to the diameter trend.
/// Classification and, when line-like, the carrier are filled in.
RotationSetEstimate estimate_rotation_set(const LiftedTorusMap& map, int grid_res,
                                          const std::vector<long>& horizons,
                                          const RotationSetOptions& opts = {});

/// Delta^{(n)}(z0)/n.
Vec2 birkhoff_rotation_vector(const LiftedTorusMap& map, Vec2 z0, long n);

Classification classify(const RotationSetEstimate& est, double point_tol, double line_tol);

/// Principal-axis fit of the hull: v is the unit normal of the axis, made
/// lexicographically non-negative, and alpha = <centroid, v>. Throws
/// NotLineLike unless the estimate is a point or a segment, or when a vertex
/// lies farther than line_tol from the fitted line.
Carrier fit_direction(const RotationSetEstimate& est, const RotationSetOptions& opts = {});

/// Makes v lexicographically non-negative (first nonzero coordinate > 0).
Vec2 canonical_direction(Vec2 v);

} // namespace rotdev
