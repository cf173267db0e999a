#pragma once

#include <vector>

#include "rotdev/vec2.hpp"

namespace rotdev {

using Polyline = std::vector<Vec2>;

/// Contours of a scalar field sampled at the points origin + h (i, j) of a
/// width x height lattice, at `level`. A sample counts as inside when its
/// value is >= level. Saddles are resolved with the mean of the four corners.
/// Segments are joined into polylines; closed loops repeat their first point.
std::vector<Polyline> contour_lines(const std::vector<double>& values, int width, int height, Vec2 origin,
                                    double h, double level);

} // namespace rotdev
