#include "rotdev/convex_hull.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace rotdev {

namespace {

void two_sum(double a, double b, double& s, double& e) {
    s = a + b;
    const double bv = s - a;
    const double av = s - bv;
    e = (a - av) + (b - bv);
}

// Shewchuk's grow-expansion with zero elimination. Components stay
// non-overlapping and ordered by increasing magnitude.
void grow(std::vector<double>& e, double b) {
    std::vector<double> out;
    out.reserve(e.size() + 1);
    double q = b;
    for (double ei : e) {
        double s, h;
        two_sum(q, ei, s, h);
        q = s;
        if (h != 0.0) out.push_back(h);
    }
    if (q != 0.0) out.push_back(q);
    e.swap(out);
}

int exact_orient(Vec2 a, Vec2 b, Vec2 c) {
    const double prods[6][2] = {{b.x, c.y}, {-b.x, a.y}, {-a.x, c.y},
                                {-b.y, c.x}, {b.y, a.x}, {a.y, c.x}};
    std::vector<double> e;
    for (const auto& pr : prods) {
        const double p = pr[0] * pr[1];
        const double err = std::fma(pr[0], pr[1], -p);
        grow(e, err);
        grow(e, p);
    }
    for (auto it = e.rbegin(); it != e.rend(); ++it)
        if (*it != 0.0) return *it > 0.0 ? 1 : -1;
    return 0;
}

} // namespace

int orient2d_sign(Vec2 a, Vec2 b, Vec2 c) {
    const double left = (a.x - c.x) * (b.y - c.y);
    const double right = (a.y - c.y) * (b.x - c.x);
    const double det = left - right;
    constexpr double eps = std::numeric_limits<double>::epsilon() / 2.0;
    constexpr double bound_a = (3.0 + 16.0 * eps) * eps;
    const double bound = bound_a * (std::fabs(left) + std::fabs(right));
    if (det > bound) return 1;
    if (-det > bound) return -1;
    return exact_orient(a, b, c);
}

std::vector<Vec2> convex_hull(std::span<const Vec2> points) {
    std::vector<Vec2> pts(points.begin(), points.end());
    std::sort(pts.begin(), pts.end(), [](Vec2 p, Vec2 q) { return p.x < q.x || (p.x == q.x && p.y < q.y); });
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    if (pts.size() <= 2) return pts;

    std::vector<Vec2> hull(2 * pts.size());
    std::size_t k = 0;
    for (const Vec2& p : pts) {
        while (k >= 2 && orient2d_sign(hull[k - 2], hull[k - 1], p) <= 0) --k;
        hull[k++] = p;
    }
    const std::size_t lower = k + 1;
    for (std::size_t i = pts.size() - 1; i-- > 0;) {
        const Vec2& p = pts[i];
        while (k >= lower && orient2d_sign(hull[k - 2], hull[k - 1], p) <= 0) --k;
        hull[k++] = p;
    }
    hull.resize(k - 1);
    return hull;
}

double polygon_diameter(std::span<const Vec2> hull) {
    double d = 0.0;
    for (std::size_t i = 0; i < hull.size(); ++i)
        for (std::size_t j = i + 1; j < hull.size(); ++j) d = std::max(d, norm(hull[i] - hull[j]));
    return d;
}

double polygon_min_width(std::span<const Vec2> hull) {
    if (hull.size() < 3) return 0.0;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < hull.size(); ++i) {
        const Vec2 a = hull[i];
        const Vec2 b = hull[(i + 1) % hull.size()];
        const double len = norm(b - a);
        if (len == 0.0) continue;
        const Vec2 n = perp(b - a) / len;
        double lo = 0.0, hi = 0.0;
        for (const Vec2& p : hull) {
            const double s = dot(p - a, n);
            lo = std::min(lo, s);
            hi = std::max(hi, s);
        }
        best = std::min(best, hi - lo);
    }
    return best;
}

double polygon_area(std::span<const Vec2> hull) {
    if (hull.size() < 3) return 0.0;
    double a = 0.0;
    for (std::size_t i = 0; i < hull.size(); ++i) {
        const Vec2 p = hull[i];
        const Vec2 q = hull[(i + 1) % hull.size()];
        a += p.x * q.y - q.x * p.y;
    }
    return 0.5 * a;
}

Vec2 polygon_centroid(std::span<const Vec2> hull) {
    if (hull.empty()) return {};
    Vec2 mean;
    for (const Vec2& p : hull) mean += p;
    mean = mean / static_cast<double>(hull.size());
    const double area = polygon_area(hull);
    const double scale = polygon_diameter(hull);
    if (hull.size() < 3 || !(std::fabs(area) > 1e-12 * scale * scale)) return mean;
    // Shift to the vertex mean for conditioning.
    double cx = 0.0, cy = 0.0, a2 = 0.0;
    for (std::size_t i = 0; i < hull.size(); ++i) {
        const Vec2 p = hull[i] - mean;
        const Vec2 q = hull[(i + 1) % hull.size()] - mean;
        const double cr = p.x * q.y - q.x * p.y;
        a2 += cr;
        cx += (p.x + q.x) * cr;
        cy += (p.y + q.y) * cr;
    }
    return mean + Vec2{cx / (3.0 * a2), cy / (3.0 * a2)};
}

} // namespace rotdev
