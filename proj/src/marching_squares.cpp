#include "rotdev/marching_squares.hpp"

#include <cstdint>
#include <unordered_map>

namespace rotdev {

namespace {

// Lattice edges are numbered 2*(j*width + i) for the horizontal edge from
// (i,j) to (i+1,j) and 2*(j*width + i) + 1 for the vertical edge to (i,j+1).
struct Segment {
    std::int64_t a;
    std::int64_t b;
};

} // namespace

std::vector<Polyline> contour_lines(const std::vector<double>& values, int width, int height, Vec2 origin,
                                    double h, double level) {
    auto val = [&](int i, int j) { return values[static_cast<std::size_t>(j) * width + i]; };
    auto hedge = [&](int i, int j) { return 2 * (static_cast<std::int64_t>(j) * width + i); };
    auto vedge = [&](int i, int j) { return 2 * (static_cast<std::int64_t>(j) * width + i) + 1; };

    auto edge_point = [&](std::int64_t e) {
        const bool vertical = e & 1;
        const std::int64_t cell = e / 2;
        const int i = static_cast<int>(cell % width), j = static_cast<int>(cell / width);
        const double v0 = val(i, j);
        const double v1 = vertical ? val(i, j + 1) : val(i + 1, j);
        const double s = (level - v0) / (v1 - v0);
        const Vec2 p0 = origin + h * Vec2{static_cast<double>(i), static_cast<double>(j)};
        return vertical ? p0 + Vec2{0.0, h * s} : p0 + Vec2{h * s, 0.0};
    };

    std::vector<Segment> segs;
    for (int j = 0; j + 1 < height; ++j) {
        for (int i = 0; i + 1 < width; ++i) {
            const double a = val(i, j), b = val(i + 1, j), c = val(i + 1, j + 1), d = val(i, j + 1);
            const int code = (a >= level) | (b >= level) << 1 | (c >= level) << 2 | (d >= level) << 3;
            if (code == 0 || code == 15) continue;
            const std::int64_t bottom = hedge(i, j), right = vedge(i + 1, j), top = hedge(i, j + 1),
                               left = vedge(i, j);
            switch (code) {
            case 1: case 14: segs.push_back({left, bottom}); break;
            case 2: case 13: segs.push_back({bottom, right}); break;
            case 3: case 12: segs.push_back({left, right}); break;
            case 4: case 11: segs.push_back({right, top}); break;
            case 6: case 9: segs.push_back({bottom, top}); break;
            case 7: case 8: segs.push_back({left, top}); break;
            case 5: case 10: {
                const bool centre_in = 0.25 * (a + b + c + d) >= level;
                // code 5: a and c inside.
                if ((code == 5) == centre_in) {
                    segs.push_back({left, top});
                    segs.push_back({bottom, right});
                } else {
                    segs.push_back({left, bottom});
                    segs.push_back({right, top});
                }
                break;
            }
            default: break;
            }
        }
    }

    // Each lattice edge is shared by at most two segments.
    std::unordered_map<std::int64_t, std::vector<std::size_t>> at_edge;
    for (std::size_t s = 0; s < segs.size(); ++s) {
        at_edge[segs[s].a].push_back(s);
        at_edge[segs[s].b].push_back(s);
    }
    std::vector<std::uint8_t> used(segs.size(), 0);
    auto other_segment = [&](std::int64_t edge, std::size_t from) -> std::ptrdiff_t {
        for (std::size_t s : at_edge[edge])
            if (s != from && !used[s]) return static_cast<std::ptrdiff_t>(s);
        return -1;
    };
    auto walk = [&](std::size_t s, std::int64_t from_edge, std::vector<std::int64_t>& chain) {
        std::int64_t edge = from_edge;
        while (true) {
            used[s] = 1;
            const std::int64_t next = segs[s].a == edge ? segs[s].b : segs[s].a;
            chain.push_back(next);
            const std::ptrdiff_t ns = other_segment(next, s);
            if (ns < 0) return;
            s = static_cast<std::size_t>(ns);
            edge = next;
        }
    };

    std::vector<Polyline> out;
    // Open chains first, started from edges used once, then the loops.
    for (int pass = 0; pass < 2; ++pass) {
        for (std::size_t s = 0; s < segs.size(); ++s) {
            if (used[s]) continue;
            std::int64_t start;
            if (pass == 0) {
                if (at_edge[segs[s].a].size() == 1) start = segs[s].a;
                else if (at_edge[segs[s].b].size() == 1) start = segs[s].b;
                else continue;
            } else {
                start = segs[s].a;
            }
            std::vector<std::int64_t> chain{start};
            walk(s, start, chain);
            Polyline line;
            line.reserve(chain.size());
            for (std::int64_t e : chain) line.push_back(edge_point(e));
            out.push_back(std::move(line));
        }
    }
    return out;
}

} // namespace rotdev
