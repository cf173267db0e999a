#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rotdev/vec2.hpp"

namespace rotdev {

/// Square planar window [center - W, center + W]^2 split into resolution^2 cells.
struct Window {
    Vec2 center;
    double half_width = 8.0;
    int resolution = 512;

    double h() const { return 2.0 * half_width / resolution; }
    std::size_t cells() const { return static_cast<std::size_t>(resolution) * resolution; }
    std::size_t index(int i, int j) const { return static_cast<std::size_t>(j) * resolution + i; }
    Vec2 cell_center(int i, int j) const {
        const double step = h();
        return {center.x + step * (i + 0.5) - half_width, center.y + step * (j + 0.5) - half_width};
    }
    Vec2 cell_center(std::size_t idx) const {
        return cell_center(static_cast<int>(idx % resolution), static_cast<int>(idx / resolution));
    }
    /// Same cells moved by `shift`; the shift must be a whole number of cells.
    Window translated(Vec2 shift) const { return {center + shift, half_width, resolution}; }

    /// Throws PreconditionError unless W > 0 and resolution >= 16.
    void validate() const;
};

/// Row-major boolean raster, one byte per cell.
struct BoolGrid {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> cells;

    BoolGrid() = default;
    BoolGrid(int w, int hgt, bool value = false)
        : width(w), height(hgt), cells(static_cast<std::size_t>(w) * hgt, value ? 1 : 0) {}
    static BoolGrid like(const Window& win, bool value = false) {
        return BoolGrid(win.resolution, win.resolution, value);
    }

    bool at(int i, int j) const { return cells[static_cast<std::size_t>(j) * width + i] != 0; }
    void set(int i, int j, bool v) { cells[static_cast<std::size_t>(j) * width + i] = v ? 1 : 0; }
    bool operator[](std::size_t k) const { return cells[k] != 0; }

    std::size_t count() const;
    bool empty() const { return count() == 0; }
    friend bool operator==(const BoolGrid&, const BoolGrid&) = default;
};

BoolGrid operator&(const BoolGrid& a, const BoolGrid& b);
BoolGrid operator|(const BoolGrid& a, const BoolGrid& b);
/// Cells set in a but not in b.
std::size_t count_difference(const BoolGrid& a, const BoolGrid& b);
std::size_t count_symmetric_difference(const BoolGrid& a, const BoolGrid& b);
bool is_subset(const BoolGrid& a, const BoolGrid& b);

enum class Connectivity { four = 4, eight = 8 };

struct Labels {
    std::vector<std::int32_t> label; ///< -1 for background
    int count = 0;
};

/// Connected components, labelled in row-major order of their first cell.
Labels label_components(const BoolGrid& mask, Connectivity conn);

/// Union of the components of mask that meet seeds.
BoolGrid components_touching(const BoolGrid& mask, const BoolGrid& seeds, Connectivity conn,
                             int* touched_components = nullptr);

/// Cells of mask whose in-window 8-neighbours are all in mask. Neighbours
/// outside the window are ignored, so the window edge does not erode.
BoolGrid erode8(const BoolGrid& mask);
/// Cells of mask or with an 8-neighbour in mask.
BoolGrid dilate8(const BoolGrid& mask);

/// Binary PGM (P5), 0/255, first row written is the top of the window (largest j).
std::string to_pgm(const BoolGrid& mask);

} // namespace rotdev
