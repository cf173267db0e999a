#pragma once

// Reference computations written independently of the library: naive long
// double sums, closed forms and brute force geometry. Tests compare against
// these rather than against other library code paths.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <functional>
#include <utility>
#include <vector>

namespace oracle {

constexpr long double kPi = 3.141592653589793238462643383279502884L;

inline long double frac(long double x) { return x - std::floor(x); }

/// sum_{k=0}^{n-1} phi(x + k a), or -sum_{k=1}^{|n|} phi(x - k a) for n < 0.
inline long double birkhoff(const std::function<long double(long double)>& phi, long double a, long double x,
                            long n) {
    long double s = 0;
    if (n >= 0)
        for (long k = 0; k < n; ++k) s += phi(frac(x + k * a));
    else
        for (long k = 1; k <= -n; ++k) s -= phi(frac(x - k * a));
    return s;
}

/// sum_{k=0}^{n-1} sin(2 pi (x + k a)) in closed form.
inline long double sin_sum(long double x, long double a, long n) {
    return std::sin(kPi * n * a) / std::sin(kPi * a) * std::sin(2 * kPi * x + kPi * (n - 1) * a);
}

/// Telescoped Birkhoff sum of psi(x + a) - psi(x) with psi = sin(2 pi x).
inline long double coboundary_sum(long double x, long double a, long n) {
    return std::sin(2 * kPi * (x + n * a)) - std::sin(2 * kPi * x);
}

/// max over x in {(i + 1/2)/res} of sum(x, n).
inline long double grid_max(int res, const std::function<long double(long double)>& at_x) {
    long double best = -1e300L;
    for (int i = 0; i < res; ++i) best = std::max(best, at_x((i + 0.5L) / res));
    return best;
}

/// Vertices of the convex hull by checking every ordered pair as a candidate
/// edge (all other points weakly to the left). O(n^3).
inline std::vector<std::pair<double, double>> brute_hull(const std::vector<std::pair<double, double>>& pts) {
    auto cross = [](std::pair<double, double> o, std::pair<double, double> a, std::pair<double, double> b) {
        return (static_cast<long double>(a.first) - o.first) * (static_cast<long double>(b.second) - o.second) -
               (static_cast<long double>(a.second) - o.second) * (static_cast<long double>(b.first) - o.first);
    };
    std::vector<std::pair<double, double>> verts;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        for (std::size_t j = 0; j < pts.size(); ++j) {
            if (pts[i] == pts[j]) continue;
            bool edge = true;
            for (std::size_t k = 0; k < pts.size() && edge; ++k) {
                const long double c = cross(pts[i], pts[j], pts[k]);
                if (c < 0) edge = false;
                // collinear points outside the segment disqualify it too
                if (c == 0) {
                    const long double t = (static_cast<long double>(pts[k].first) - pts[i].first) *
                                              (static_cast<long double>(pts[j].first) - pts[i].first) +
                                          (static_cast<long double>(pts[k].second) - pts[i].second) *
                                              (static_cast<long double>(pts[j].second) - pts[i].second);
                    const long double len = (static_cast<long double>(pts[j].first) - pts[i].first) *
                                                (static_cast<long double>(pts[j].first) - pts[i].first) +
                                            (static_cast<long double>(pts[j].second) - pts[i].second) *
                                                (static_cast<long double>(pts[j].second) - pts[i].second);
                    if (t < 0 || t > len) edge = false;
                }
            }
            if (edge) {
                verts.push_back(pts[i]);
                verts.push_back(pts[j]);
            }
        }
    }
    std::sort(verts.begin(), verts.end());
    verts.erase(std::unique(verts.begin(), verts.end()), verts.end());
    return verts;
}

/// Euclidean distance from p to the graph y = sin(2 pi x) + c, searched over
/// |x - p.x| <= reach (the distance is at most the vertical gap, so reach
/// only has to exceed that).
inline double distance_to_sine(double px, double py, double c, double reach = 0.25) {
    auto d2 = [&](double x) {
        const double dy = std::sin(2.0 * static_cast<double>(kPi) * x) + c - py;
        return (x - px) * (x - px) + dy * dy;
    };
    const int steps = 128;
    const double step = 2.0 * reach / steps;
    double best = px, best_d = d2(px);
    for (int i = 0; i <= steps; ++i) {
        const double x = px - reach + i * step;
        if (const double d = d2(x); d < best_d) {
            best_d = d;
            best = x;
        }
    }
    double lo = best - step, hi = best + step;
    for (int it = 0; it < 40; ++it) {
        const double m1 = lo + (hi - lo) / 3, m2 = hi - (hi - lo) / 3;
        if (d2(m1) < d2(m2)) hi = m2;
        else lo = m1;
    }
    return std::sqrt(std::min(best_d, d2(0.5 * (lo + hi))));
}

/// min over c of the largest distance from the points to y = sin(2 pi x) + c.
/// Points above the graph get closer as c grows and points below get farther,
/// so the objective is unimodal in c.
inline double sine_graph_sup_distance(const std::vector<std::pair<double, double>>& pts) {
    if (pts.empty()) return 0.0;
    double lo = 1e300, hi = -1e300;
    for (auto [x, y] : pts) {
        const double c = y - std::sin(2.0 * static_cast<double>(kPi) * x);
        lo = std::min(lo, c);
        hi = std::max(hi, c);
    }
    const double reach = (hi - lo) + 1e-3;
    auto worst = [&](double c) {
        double w = 0.0;
        for (auto [x, y] : pts) w = std::max(w, distance_to_sine(x, y, c, reach));
        return w;
    };
    for (int it = 0; it < 40; ++it) {
        const double m1 = lo + (hi - lo) / 3, m2 = hi - (hi - lo) / 3;
        if (worst(m1) < worst(m2)) hi = m2;
        else lo = m1;
    }
    return worst(0.5 * (lo + hi));
}

/// Component count by breadth-first search.
inline int count_components(const std::vector<std::uint8_t>& cells, int w, int h, bool eight) {
    std::vector<int> seen(cells.size(), 0);
    int count = 0;
    for (int j0 = 0; j0 < h; ++j0)
        for (int i0 = 0; i0 < w; ++i0) {
            const auto k0 = static_cast<std::size_t>(j0) * w + i0;
            if (!cells[k0] || seen[k0]) continue;
            ++count;
            std::deque<std::pair<int, int>> q{{i0, j0}};
            seen[k0] = 1;
            while (!q.empty()) {
                auto [i, j] = q.front();
                q.pop_front();
                for (int dj = -1; dj <= 1; ++dj)
                    for (int di = -1; di <= 1; ++di) {
                        if (!di && !dj) continue;
                        if (!eight && di && dj) continue;
                        const int a = i + di, b = j + dj;
                        if (a < 0 || b < 0 || a >= w || b >= h) continue;
                        const auto k = static_cast<std::size_t>(b) * w + a;
                        if (cells[k] && !seen[k]) {
                            seen[k] = 1;
                            q.push_back({a, b});
                        }
                    }
            }
        }
    return count;
}

} // namespace oracle
