#include "rotdev/pseudofoliation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "rotdev/errors.hpp"

namespace rotdev {

std::string to_string(CellStatus s) {
    switch (s) {
    case CellStatus::resolved: return "resolved";
    case CellStatus::saturated_low: return "saturated_low";
    case CellStatus::saturated_high: return "saturated_high";
    }
    return "unknown";
}

namespace {

std::vector<double> heights(const Window& window, Vec2 v) {
    std::vector<double> out(window.cells());
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = dot(window.cell_center(k), v);
    return out;
}

struct RegionBuilder {
    const FiberMinimumField& field;
    double m_bound;
    std::vector<double> height;
    BoolGrid cap;

    RegionBuilder(const FiberMinimumField& f, double m)
        : field(f), m_bound(m), height(heights(f.window, f.v)), cap(far_cap(f.window, f.v)) {}

    // Returns U_r and stores Lambda_r in lambda.
    BoolGrid u_r(double r, BoolGrid* lambda = nullptr) const {
        BoolGrid stable = components_touching(field.threshold(r), cap, Connectivity::eight);
        const BoolGrid interior = erode8(stable);
        const double seed_level = r + m_bound + field.window.h();
        BoolGrid seed = BoolGrid::like(field.window);
        bool any = false;
        for (std::size_t k = 0; k < seed.cells.size(); ++k) {
            seed.cells[k] = height[k] >= seed_level && interior.cells[k];
            any = any || seed.cells[k];
        }
        if (!any) {
            char buf[160];
            std::snprintf(buf, sizeof buf, "no seed cell with <z,v> >= %.6g inside the stable set at r = %.6g",
                          seed_level, r);
            throw SeedEmpty(buf);
        }
        if (lambda) *lambda = std::move(stable);
        return components_touching(interior, seed, Connectivity::eight);
    }

    BoolGrid region(double r) const {
        BoolGrid stable;
        const BoolGrid u = u_r(r, &stable);
        return dilate8(u) & stable;
    }
};

} // namespace

BoolGrid build_U_r(const FiberMinimumField& field, double r, double m_bound) {
    return RegionBuilder(field, m_bound).u_r(r);
}

BoolGrid build_U_r(const CentralizedSkewProduct& sp, Vec2 t, double r, Vec2 v, long horizon,
                   const Window& window, double m_bound) {
    return build_U_r(fiber_minimum_field(sp, t, v, horizon, window, Sidedness::two_sided), r, m_bound);
}

BoolGrid level_region(const FiberMinimumField& field, double r, double m_bound) {
    return RegionBuilder(field, m_bound).region(r);
}

double LevelFunctionChart::resolved_fraction() const {
    if (status.empty()) return 0.0;
    const auto n = std::count(status.begin(), status.end(), CellStatus::resolved);
    return static_cast<double>(n) / static_cast<double>(status.size());
}

std::optional<double> LevelFunctionChart::interpolate(Vec2 z) const {
    const double h = window.h();
    const Vec2 origin = window.cell_center(0, 0);
    const double sx = (z.x - origin.x) / h, sy = (z.y - origin.y) / h;
    const double fx = std::floor(sx), fy = std::floor(sy);
    const int i = static_cast<int>(fx), j = static_cast<int>(fy);
    const int res = window.resolution;
    if (!(fx >= 0.0 && fy >= 0.0) || i + 1 >= res || j + 1 >= res) return std::nullopt;
    const std::size_t k00 = window.index(i, j), k10 = window.index(i + 1, j), k01 = window.index(i, j + 1),
                      k11 = window.index(i + 1, j + 1);
    for (std::size_t k : {k00, k10, k01, k11})
        if (status[k] != CellStatus::resolved) return std::nullopt;
    const double a = sx - fx, b = sy - fy;
    return (1 - a) * (1 - b) * H[k00] + a * (1 - b) * H[k10] + (1 - a) * b * H[k01] + a * b * H[k11];
}

LevelFunctionChart level_function(const CentralizedSkewProduct& sp, Vec2 t, Vec2 v, const Window& window,
                                  long horizon, double m_bound, const LevelFunctionOptions& opts) {
    return level_function(sp, fiber_minimum_field(sp, t, v, horizon, window, Sidedness::two_sided), m_bound, opts);
}

LevelFunctionChart level_function(const CentralizedSkewProduct& sp, const FiberMinimumField& field, double m_bound,
                                  const LevelFunctionOptions& opts) {
    if (field.sidedness != Sidedness::two_sided) throw PreconditionError("the level function needs a two-sided field");
    const Window& window = field.window;
    const Vec2 v = field.v;
    const RegionBuilder builder(field, m_bound);
    const double h = window.h();

    LevelFunctionChart chart;
    chart.window = window;
    chart.v = v;
    chart.alpha = dot(sp.rho_tilde(), v);
    chart.t = field.t;
    chart.horizon = field.horizon;
    chart.m_bound = m_bound;
    chart.eps_r = opts.eps_r > 0.0 ? opts.eps_r : 0.5 * h;
    const double top = *std::max_element(builder.height.begin(), builder.height.end());
    const double lowest = *std::min_element(field.q.begin(), field.q.end());
    chart.r_lo = opts.r_lo.value_or(lowest - chart.eps_r);
    const double r_hi = opts.r_hi.value_or(top - m_bound - 2.0 * h);
    if (!(r_hi > chart.r_lo)) throw PreconditionError("level range is empty");
    const long steps = static_cast<long>(std::floor((r_hi - chart.r_lo) / chart.eps_r));
    auto level = [&](long k) { return chart.r_lo + static_cast<double>(k) * chart.eps_r; };
    chart.r_hi = level(steps);

    const std::size_t n = window.cells();
    chart.H.assign(n, 0.0);
    chart.status.assign(n, CellStatus::resolved);
    std::vector<long> sampled;

    const BoolGrid low = builder.region(level(0));
    const BoolGrid high = builder.region(level(steps));
    sampled.push_back(0);
    sampled.push_back(steps);
    std::vector<std::size_t> open;
    for (std::size_t k = 0; k < n; ++k) {
        if (!low.cells[k]) {
            chart.status[k] = CellStatus::saturated_low;
            chart.H[k] = chart.r_lo;
        } else if (high.cells[k]) {
            chart.status[k] = CellStatus::saturated_high;
            chart.H[k] = chart.r_hi;
        } else {
            open.push_back(k);
        }
    }

    // Invariant: every cell of `cells` lies in region(lo) and not in region(hi).
    struct Task {
        long lo, hi;
        std::vector<std::size_t> cells;
    };
    std::vector<Task> stack;
    stack.push_back({0, steps, std::move(open)});
    while (!stack.empty()) {
        Task task = std::move(stack.back());
        stack.pop_back();
        if (task.cells.empty()) continue;
        if (task.hi - task.lo <= 1) {
            for (std::size_t k : task.cells) chart.H[k] = level(task.lo);
            continue;
        }
        const long mid = task.lo + (task.hi - task.lo) / 2;
        const BoolGrid region = builder.region(level(mid));
        sampled.push_back(mid);
        Task below{task.lo, mid, {}}, above{mid, task.hi, {}};
        for (std::size_t k : task.cells) (region.cells[k] ? above : below).cells.push_back(k);
        stack.push_back(std::move(below));
        stack.push_back(std::move(above));
    }
    std::sort(sampled.begin(), sampled.end());
    sampled.erase(std::unique(sampled.begin(), sampled.end()), sampled.end());
    for (long k : sampled) chart.r_samples.push_back(level(k));
    return chart;
}

std::size_t PseudoLeaf::points() const {
    std::size_t n = 0;
    for (const auto& p : polylines) n += p.size();
    return n;
}

std::vector<PseudoLeaf> extract_leaves(const LevelFunctionChart& chart, const std::vector<double>& levels) {
    if (chart.resolved_fraction() < 0.9) throw PreconditionError("chart is resolved on fewer than 90% of cells");
    std::vector<PseudoLeaf> out;
    const Vec2 origin = chart.window.cell_center(0, 0);
    for (double c : levels) {
        if (!(c > chart.r_lo && c < chart.r_hi)) {
            char buf[160];
            std::snprintf(buf, sizeof buf, "level %.6g outside the resolved range (%.6g, %.6g)", c, chart.r_lo,
                          chart.r_hi);
            throw LevelOutOfRange(buf);
        }
        PseudoLeaf leaf;
        leaf.level = c;
        leaf.direction = perp(chart.v);
        leaf.polylines = contour_lines(chart.H, chart.window.resolution, chart.window.resolution, origin,
                                       chart.window.h(), c);
        double lo = std::numeric_limits<double>::infinity(), hi = -lo;
        for (const auto& line : leaf.polylines)
            for (const Vec2& p : line) {
                lo = std::min(lo, dot(p, chart.v));
                hi = std::max(hi, dot(p, chart.v));
            }
        leaf.width = leaf.points() ? hi - lo : 0.0;
        out.push_back(std::move(leaf));
    }
    return out;
}

SlopeType slope_type(Vec2 v, long long max_q) {
    SlopeType st;
    if (v.x == 0.0) {
        st.rational = true;
        st.p = 1;
        st.q = 0;
        return st;
    }
    const double target = v.y / v.x;
    double x = target;
    long long h1 = 1, h2 = 0, k1 = 0, k2 = 1;
    // A few ulps only: every real lies within ~1/q^2 of a convergent, so a
    // looser tolerance would call everything rational once q reaches 1e6.
    for (int iter = 0; iter < 64; ++iter) {
        const double a = std::floor(x);
        const long long ai = static_cast<long long>(a);
        const long long hn = ai * h1 + h2, kn = ai * k1 + k2;
        if (kn > max_q) break;
        h2 = h1; h1 = hn;
        k2 = k1; k1 = kn;
        if (std::fabs(target - static_cast<double>(h1) / static_cast<double>(k1)) <=
            8.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::fabs(target))) {
            st.rational = true;
            st.p = h1;
            st.q = k1;
            return st;
        }
        const double frac = x - a;
        if (frac <= 0.0) break;
        x = 1.0 / frac;
    }
    return st;
}

namespace {

double point_segment_distance(Vec2 p, Vec2 a, Vec2 b) {
    const Vec2 d = b - a;
    const double len2 = dot(d, d);
    double s = len2 > 0.0 ? dot(p - a, d) / len2 : 0.0;
    s = std::clamp(s, 0.0, 1.0);
    return norm(p - (a + s * d));
}

double leaf_distance(const PseudoLeaf& a, const PseudoLeaf& b) {
    double best = std::numeric_limits<double>::infinity();
    auto scan = [&](const PseudoLeaf& from, const PseudoLeaf& to) {
        for (const auto& la : from.polylines)
            for (const Vec2& p : la)
                for (const auto& lb : to.polylines) {
                    if (lb.size() == 1) best = std::min(best, norm(p - lb[0]));
                    for (std::size_t k = 0; k + 1 < lb.size(); ++k)
                        best = std::min(best, point_segment_distance(p, lb[k], lb[k + 1]));
                }
    };
    scan(a, b);
    scan(b, a);
    return best;
}

} // namespace

FoliationCertificate certify(const LevelFunctionChart& chart, const std::vector<PseudoLeaf>& leaves,
                             const LiftedTorusMap& map, Vec2 rho_tilde, long n_checks) {
    FoliationCertificate cert;
    const Window& win = chart.window;
    const int res = win.resolution;
    const double h = win.h();
    const double eps = chart.eps_r;
    cert.slope = slope_type(chart.v);

    // (a) the complement of each leaf has exactly one component on each side.
    {
        int worst = 2;
        bool ok = true;
        for (const PseudoLeaf& leaf : leaves) {
            BoolGrid above = BoolGrid::like(win), below = BoolGrid::like(win);
            for (std::size_t k = 0; k < chart.H.size(); ++k) {
                above.cells[k] = chart.H[k] >= leaf.level;
                below.cells[k] = !above.cells[k];
            }
            const int parts = label_components(above, Connectivity::eight).count +
                              label_components(below, Connectivity::four).count;
            worst = std::max(worst, parts);
            ok = ok && parts == 2;
        }
        cert.separation = {ok, static_cast<double>(worst), 2.0, "window components on the two sides of a leaf"};
    }

    // (b) cells with H in [c, c + eps) form bands at most 3 cells thick along v.
    {
        const bool along_j = std::fabs(chart.v.y) >= std::fabs(chart.v.x);
        int worst = 0;
        for (const PseudoLeaf& leaf : leaves) {
            auto in_band = [&](int i, int j) {
                const double value = chart.H[win.index(i, j)];
                return value >= leaf.level && value < leaf.level + eps;
            };
            for (int a = 0; a < res; ++a) {
                int run = 0;
                for (int b = 0; b < res; ++b) {
                    const bool in = along_j ? in_band(a, b) : in_band(b, a);
                    run = in ? run + 1 : 0;
                    worst = std::max(worst, run);
                }
            }
        }
        cert.empty_interior = {worst <= 3, static_cast<double>(worst), 3.0, "longest level band run in cells"};
    }

    // (c) leaves at distinct levels stay at least h apart.
    {
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t a = 0; a < leaves.size(); ++a)
            for (std::size_t b = a + 1; b < leaves.size(); ++b)
                if (leaves[a].level != leaves[b].level) best = std::min(best, leaf_distance(leaves[a], leaves[b]));
        if (std::isinf(best))
            cert.disjointness = {true, 0.0, h, "fewer than two distinct levels"};
        else
            cert.disjointness = {best >= h, best, h, "minimum distance between distinct leaves"};
    }

    // (d) H(f^n z) - H(z) - n <rho~, v>, with H extended by H(w) = H(w - p) + <p,v>.
    {
        const double bound = 2.0 * eps + 2.0 * h;
        const double drift = dot(rho_tilde, chart.v);
        const int stride = std::max(1, res / 64);
        const double margin = 0.5 + 2.0 * h;
        CompensatedSum sq;
        std::size_t samples = 0, within = 0;
        for (int j = 0; j < res; j += stride) {
            for (int i = 0; i < res; i += stride) {
                const std::size_t k = win.index(i, j);
                if (chart.status[k] != CellStatus::resolved) continue;
                const Vec2 z = win.cell_center(i, j);
                if (std::fabs(z.x - win.center.x) > win.half_width - margin ||
                    std::fabs(z.y - win.center.y) > win.half_width - margin)
                    continue;
                LiftPoint w = LiftPoint::from(z);
                const LiftPoint start = w;
                for (long n = 1; n <= n_checks; ++n) {
                    w = map.apply(w);
                    const Vec2 moved = to_vec2(w.cell - start.cell) + (w.frac - start.frac);
                    const Vec2 p{std::round(moved.x), std::round(moved.y)};
                    const auto hw = chart.interpolate(z + (moved - p));
                    if (!hw) continue;
                    const double e = *hw + dot(p, chart.v) - chart.H[k] - static_cast<double>(n) * drift;
                    sq.add(e * e);
                    ++samples;
                    within += std::fabs(e) <= bound;
                }
            }
        }
        cert.equivariance_samples = samples;
        const double rms = samples ? std::sqrt(sq.value() / static_cast<double>(samples)) : 0.0;
        cert.equivariance_within_bound = samples ? static_cast<double>(within) / static_cast<double>(samples) : 0.0;
        cert.equivariance = {samples > 0 && rms <= bound, rms, bound,
                             samples ? "rms of H(f^n z) - H(z) - n <rho,v>" : "no usable samples"};
    }

    // (e) every leaf fits in a strip not much wider than the global one.
    {
        double lo = std::numeric_limits<double>::infinity(), hi = -lo;
        for (std::size_t k = 0; k < chart.H.size(); ++k) {
            if (chart.status[k] != CellStatus::resolved) continue;
            const double d = dot(win.cell_center(k), chart.v) - chart.H[k];
            lo = std::min(lo, d);
            hi = std::max(hi, d);
        }
        cert.global_width = hi >= lo ? hi - lo : 0.0;
        double worst = 0.0;
        for (const PseudoLeaf& leaf : leaves) worst = std::max(worst, leaf.width);
        const double bound = cert.global_width + 4.0 * h;
        cert.strip_confinement = {worst <= bound, worst, bound, "widest leaf strip"};
    }
    return cert;
}

} // namespace rotdev
