#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rotdev/grid.hpp"
#include "rotdev/pseudofoliation.hpp"
#include "rotdev/rotation_set.hpp"

namespace rotdev {

struct SvgStyle {
    int size = 640;
    std::string ink = "#1b2a49";
    std::string accent = "#c0392b";
    std::string fill = "#7fa7d9";
    std::string shade = "#f4d03f";
};

/// Hull polygon with vertex markers and, when known, the carrier line.
std::string svg_hull(const std::vector<Vec2>& hull, const std::optional<Carrier>& carrier,
                     const SvgStyle& style = {});

/// D(n) against n, with the running maximum M(|n|).
std::string svg_profile(const std::vector<long>& n, const std::vector<double>& d, const std::vector<double>& m,
                        const SvgStyle& style = {});

/// Mask cells as row runs, the far cap shaded and the lines <z,v> = r drawn.
std::string svg_mask(const BoolGrid& mask, const Window& window, Vec2 v, double cap_fraction,
                     const std::vector<double>& line_levels, const SvgStyle& style = {});

/// Leaves, their strip envelopes and an arrow along v^perp.
std::string svg_leaves(const std::vector<PseudoLeaf>& leaves, const Window& window, Vec2 v,
                       const SvgStyle& style = {});

} // namespace rotdev
