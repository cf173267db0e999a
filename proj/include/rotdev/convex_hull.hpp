#pragma once

#include <span>
#include <vector>

#include "rotdev/vec2.hpp"

namespace rotdev {

/// Exact sign of the orientation determinant of (a, b, c): +1 for a
/// counter-clockwise turn, -1 clockwise, 0 collinear. Evaluated with a
/// floating-point filter and an exact expansion fallback.
int orient2d_sign(Vec2 a, Vec2 b, Vec2 c);

/// Convex hull by Andrew's monotone chain. Returns vertices in CCW order with
/// collinear points removed; a single point or a segment (2 vertices) for
/// degenerate inputs.
std::vector<Vec2> convex_hull(std::span<const Vec2> points);

double polygon_diameter(std::span<const Vec2> hull);

/// Minimal width over edge directions (0 for points and segments).
double polygon_min_width(std::span<const Vec2> hull);

double polygon_area(std::span<const Vec2> hull);

/// Area centroid; falls back to the vertex mean for degenerate polygons.
Vec2 polygon_centroid(std::span<const Vec2> hull);

} // namespace rotdev
