#include "rotdev/grid.hpp"

#include <algorithm>
#include <numeric>

#include "rotdev/errors.hpp"

namespace rotdev {

void Window::validate() const {
    if (!(half_width > 0.0)) throw PreconditionError("window half-width must be positive");
    if (resolution < 16) throw PreconditionError("window resolution must be at least 16");
}

std::size_t BoolGrid::count() const {
    return static_cast<std::size_t>(std::count(cells.begin(), cells.end(), std::uint8_t{1}));
}

namespace {

void require_same_shape(const BoolGrid& a, const BoolGrid& b) {
    if (a.width != b.width || a.height != b.height) throw PreconditionError("grid shapes differ");
}

} // namespace

BoolGrid operator&(const BoolGrid& a, const BoolGrid& b) {
    require_same_shape(a, b);
    BoolGrid out(a.width, a.height);
    for (std::size_t k = 0; k < a.cells.size(); ++k) out.cells[k] = a.cells[k] & b.cells[k];
    return out;
}

BoolGrid operator|(const BoolGrid& a, const BoolGrid& b) {
    require_same_shape(a, b);
    BoolGrid out(a.width, a.height);
    for (std::size_t k = 0; k < a.cells.size(); ++k) out.cells[k] = a.cells[k] | b.cells[k];
    return out;
}

std::size_t count_difference(const BoolGrid& a, const BoolGrid& b) {
    require_same_shape(a, b);
    std::size_t n = 0;
    for (std::size_t k = 0; k < a.cells.size(); ++k) n += (a.cells[k] && !b.cells[k]);
    return n;
}

std::size_t count_symmetric_difference(const BoolGrid& a, const BoolGrid& b) {
    require_same_shape(a, b);
    std::size_t n = 0;
    for (std::size_t k = 0; k < a.cells.size(); ++k) n += (a.cells[k] != b.cells[k]);
    return n;
}

bool is_subset(const BoolGrid& a, const BoolGrid& b) { return count_difference(a, b) == 0; }

Labels label_components(const BoolGrid& mask, Connectivity conn) {
    const int w = mask.width, hgt = mask.height;
    Labels out;
    out.label.assign(mask.cells.size(), -1);
    std::vector<std::size_t> stack;
    const int nbr = conn == Connectivity::eight ? 8 : 4;
    static const int dx[8] = {1, -1, 0, 0, 1, 1, -1, -1};
    static const int dy[8] = {0, 0, 1, -1, 1, -1, 1, -1};
    for (std::size_t start = 0; start < mask.cells.size(); ++start) {
        if (!mask.cells[start] || out.label[start] >= 0) continue;
        const int id = out.count++;
        out.label[start] = id;
        stack.push_back(start);
        while (!stack.empty()) {
            const std::size_t k = stack.back();
            stack.pop_back();
            const int i = static_cast<int>(k % w), j = static_cast<int>(k / w);
            for (int d = 0; d < nbr; ++d) {
                const int ni = i + dx[d], nj = j + dy[d];
                if (ni < 0 || nj < 0 || ni >= w || nj >= hgt) continue;
                const std::size_t nk = static_cast<std::size_t>(nj) * w + ni;
                if (mask.cells[nk] && out.label[nk] < 0) {
                    out.label[nk] = id;
                    stack.push_back(nk);
                }
            }
        }
    }
    return out;
}

BoolGrid components_touching(const BoolGrid& mask, const BoolGrid& seeds, Connectivity conn,
                             int* touched_components) {
    require_same_shape(mask, seeds);
    const Labels labels = label_components(mask, conn);
    std::vector<std::uint8_t> keep(labels.count, 0);
    for (std::size_t k = 0; k < mask.cells.size(); ++k)
        if (seeds.cells[k] && labels.label[k] >= 0) keep[labels.label[k]] = 1;
    BoolGrid out(mask.width, mask.height);
    for (std::size_t k = 0; k < mask.cells.size(); ++k)
        out.cells[k] = labels.label[k] >= 0 && keep[labels.label[k]];
    if (touched_components)
        *touched_components = static_cast<int>(std::accumulate(keep.begin(), keep.end(), 0));
    return out;
}

BoolGrid erode8(const BoolGrid& mask) {
    const int w = mask.width, hgt = mask.height;
    BoolGrid out(w, hgt);
    for (int j = 0; j < hgt; ++j) {
        for (int i = 0; i < w; ++i) {
            if (!mask.at(i, j)) continue;
            bool inside = true;
            for (int b = std::max(0, j - 1); b <= std::min(hgt - 1, j + 1) && inside; ++b)
                for (int a = std::max(0, i - 1); a <= std::min(w - 1, i + 1); ++a)
                    if (!mask.at(a, b)) { inside = false; break; }
            out.set(i, j, inside);
        }
    }
    return out;
}

BoolGrid dilate8(const BoolGrid& mask) {
    const int w = mask.width, hgt = mask.height;
    BoolGrid out(w, hgt);
    for (int j = 0; j < hgt; ++j) {
        for (int i = 0; i < w; ++i) {
            if (!mask.at(i, j)) continue;
            for (int b = std::max(0, j - 1); b <= std::min(hgt - 1, j + 1); ++b)
                for (int a = std::max(0, i - 1); a <= std::min(w - 1, i + 1); ++a) out.set(a, b, true);
        }
    }
    return out;
}

std::string to_pgm(const BoolGrid& mask) {
    std::string out = "P5\n" + std::to_string(mask.width) + " " + std::to_string(mask.height) + "\n255\n";
    out.reserve(out.size() + mask.cells.size());
    for (int j = mask.height - 1; j >= 0; --j)
        for (int i = 0; i < mask.width; ++i) out.push_back(mask.at(i, j) ? static_cast<char>(255) : 0);
    return out;
}

} // namespace rotdev
