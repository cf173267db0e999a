#include "rotdev/stable_sets.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "rotdev/errors.hpp"
#include "rotdev/parallel.hpp"

namespace rotdev {

std::string to_string(Sidedness s) { return s == Sidedness::two_sided ? "two_sided" : "forward"; }

std::string to_string(EquivarianceProperty p) {
    switch (p) {
    case EquivarianceProperty::i: return "i";
    case EquivarianceProperty::ii: return "ii";
    case EquivarianceProperty::iii: return "iii";
    case EquivarianceProperty::iv: return "iv";
    }
    return "unknown";
}

namespace {

void check_inputs(const CentralizedSkewProduct& sp, Vec2 v, long horizon, const Window& window) {
    window.validate();
    if (horizon < 0) throw PreconditionError("horizon must be non-negative");
    if (std::fabs(norm(v) - 1.0) > 1e-12) throw PreconditionError("v must be a unit vector");
    sp.map().check_horizon(horizon);
}

// Cells grouped by the torus point t + pi(z). pi(z) is exact, so cells that
// differ by integer vectors share a class and get bitwise identical orbits.
struct CellClasses {
    OrbitClasses orbits;
    std::vector<double> height; ///< <z,v> per cell
    std::vector<double> top;    ///< max height per class
};

CellClasses cell_classes(const CentralizedSkewProduct& sp, Vec2 t, Vec2 v, const Window& window) {
    const std::size_t n = window.cells();
    const Vec2 t0 = wrap(t);
    std::vector<Vec2> points(n);
    CellClasses cc;
    cc.height.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        const Vec2 z = window.cell_center(k);
        points[k] = wrap(wrap(z) + t0);
        cc.height[k] = dot(z, v);
    }
    cc.orbits = orbit_classes(sp.map(), points);
    cc.top.assign(cc.orbits.representatives.size(), -std::numeric_limits<double>::infinity());
    for (std::size_t k = 0; k < n; ++k) {
        double& m = cc.top[cc.orbits.class_of[k]];
        m = std::max(m, cc.height[k]);
    }
    return cc;
}

} // namespace

BoolGrid FiberMinimumField::threshold(double r) const {
    BoolGrid out = BoolGrid::like(window);
    for (std::size_t k = 0; k < q.size(); ++k) out.cells[k] = q[k] >= r;
    return out;
}

FiberMinimumField fiber_minimum_field(const CentralizedSkewProduct& sp, Vec2 t, Vec2 v, long horizon,
                                      const Window& window, Sidedness sidedness) {
    check_inputs(sp, v, horizon, window);
    const CellClasses cc = cell_classes(sp, t, v, window);
    const std::size_t reps = cc.orbits.representatives.size();
    std::vector<double> minima(reps, 0.0);
    parallel_for(reps, [&](std::size_t b, std::size_t e, int) {
        for (std::size_t r = b; r < e; ++r) {
            double m = 0.0;
            CenteredOrbit fwd(sp, cc.orbits.representatives[r], v);
            for (long n = 1; n <= horizon; ++n) m = std::min(m, fwd.forward());
            if (sidedness == Sidedness::two_sided) {
                CenteredOrbit bwd(sp, cc.orbits.representatives[r], v);
                for (long n = 1; n <= horizon; ++n) m = std::min(m, bwd.backward());
            }
            minima[r] = m;
        }
    });
    FiberMinimumField f;
    f.window = window;
    f.v = v;
    f.t = t;
    f.horizon = horizon;
    f.sidedness = sidedness;
    f.q.resize(window.cells());
    // fl(<z,v> + min_n g_n) = min_n fl(<z,v> + g_n) since rounding is monotone.
    for (std::size_t k = 0; k < f.q.size(); ++k) f.q[k] = cc.height[k] + minima[cc.orbits.class_of[k]];
    return f;
}

BoolGrid qualifying_set(const CentralizedSkewProduct& sp, Vec2 t, double r, Vec2 v, long horizon,
                        const Window& window, Sidedness sidedness) {
    check_inputs(sp, v, horizon, window);
    const CellClasses cc = cell_classes(sp, t, v, window);
    const std::size_t reps = cc.orbits.representatives.size();
    std::vector<double> minima(reps, 0.0);
    std::vector<std::uint8_t> failed(reps, 0);
    parallel_for(reps, [&](std::size_t b, std::size_t e, int) {
        for (std::size_t c = b; c < e; ++c) {
            const double top = cc.top[c];
            double m = 0.0;
            bool dead = top + m < r;
            CenteredOrbit fwd(sp, cc.orbits.representatives[c], v);
            CenteredOrbit bwd(sp, cc.orbits.representatives[c], v);
            for (long n = 1; n <= horizon && !dead; ++n) {
                m = std::min(m, fwd.forward());
                if (top + m < r) { dead = true; break; }
                if (sidedness == Sidedness::two_sided) {
                    m = std::min(m, bwd.backward());
                    dead = top + m < r;
                }
            }
            minima[c] = m;
            failed[c] = dead;
        }
    });
    BoolGrid out = BoolGrid::like(window);
    for (std::size_t k = 0; k < out.cells.size(); ++k) {
        const auto c = cc.orbits.class_of[k];
        out.cells[k] = !failed[c] && cc.height[k] + minima[c] >= r;
    }
    return out;
}

BoolGrid far_cap(const Window& window, Vec2 v, double cap_fraction) {
    const double level = dot(window.center, v) + (1.0 - cap_fraction) * window.half_width;
    BoolGrid out = BoolGrid::like(window);
    for (std::size_t k = 0; k < out.cells.size(); ++k) out.cells[k] = dot(window.cell_center(k), v) >= level;
    return out;
}

InfinityComponent infinity_component(const BoolGrid& mask, Vec2 v, const Window& window, double cap_fraction) {
    InfinityComponent out;
    out.mask = components_touching(mask, far_cap(window, v, cap_fraction), Connectivity::eight,
                                   &out.far_cap_components);
    out.touched_far_cap = out.far_cap_components > 0;
    return out;
}

FiniteHorizonStableSet stable_set(const CentralizedSkewProduct& sp, Vec2 t, double r, Vec2 v, long horizon,
                                  const Window& window, Sidedness sidedness) {
    FiniteHorizonStableSet s;
    s.r = r;
    s.v = v;
    s.t = t;
    s.horizon = horizon;
    s.sidedness = sidedness;
    s.window = window;
    s.qualifying = qualifying_set(sp, t, r, v, horizon, window, sidedness);
    InfinityComponent inf = infinity_component(s.qualifying, v, window);
    s.component = std::move(inf.mask);
    s.touched_far_cap = inf.touched_far_cap;
    s.far_cap_components = inf.far_cap_components;
    return s;
}

FiniteHorizonStableSet stable_set(const FiberMinimumField& field, double r, double cap_fraction) {
    FiniteHorizonStableSet s;
    s.r = r;
    s.v = field.v;
    s.t = field.t;
    s.horizon = field.horizon;
    s.sidedness = field.sidedness;
    s.window = field.window;
    s.qualifying = field.threshold(r);
    InfinityComponent inf = infinity_component(s.qualifying, field.v, field.window, cap_fraction);
    s.component = std::move(inf.mask);
    s.touched_far_cap = inf.touched_far_cap;
    s.far_cap_components = inf.far_cap_components;
    return s;
}

namespace {

// Number of cells a shift spans; throws unless it is a whole number of cells.
IVec2 cell_shift(Vec2 shift, const Window& window) {
    const double h = window.h();
    const double sx = shift.x / h, sy = shift.y / h;
    const double rx = std::round(sx), ry = std::round(sy);
    if (std::fabs(sx - rx) > 1e-9 || std::fabs(sy - ry) > 1e-9)
        throw PreconditionError("witness shift is not a whole number of cells");
    return {static_cast<std::int64_t>(rx), static_cast<std::int64_t>(ry)};
}

} // namespace

double equivariance_residual(const CentralizedSkewProduct& sp, Vec2 t, double r, Vec2 v, long horizon,
                             const Window& window, EquivarianceProperty which,
                             const EquivarianceWitness& witness) {
    const double layers = static_cast<double>(window.resolution);
    switch (which) {
    case EquivarianceProperty::i: {
        if (!(witness.s < r)) throw PreconditionError("property (i) needs s < r");
        const FiberMinimumField f = fiber_minimum_field(sp, t, v, horizon, window, Sidedness::two_sided);
        const auto upper = stable_set(f, r);
        const auto lower = stable_set(f, witness.s);
        return count_difference(upper.component, lower.component) / layers;
    }
    case EquivarianceProperty::ii: {
        if (!(witness.s < r)) throw PreconditionError("property (ii) needs s < r");
        const FiberMinimumField f = fiber_minimum_field(sp, t, v, horizon, window, Sidedness::two_sided);
        return count_symmetric_difference(stable_set(f, r).component, stable_set(f, witness.s).component) / layers;
    }
    case EquivarianceProperty::iii: {
        // Lambda_{r + <t~,v>}(t - pi(t~)) = T_{t~}(Lambda_r(t)); the right side is
        // evaluated on the window moved by t~ so cells correspond one to one.
        cell_shift(witness.t_lift, window);
        const auto rhs = stable_set(sp, t, r, v, horizon, window);
        const auto lhs = stable_set(sp, t - witness.t_lift, r + dot(witness.t_lift, v), v, horizon,
                                    window.translated(witness.t_lift));
        return count_symmetric_difference(lhs.component, rhs.component) / layers;
    }
    case EquivarianceProperty::iv: {
        // T_p(Lambda_r(t)) against Lambda_{r + <p,v>}(t) on the same window,
        // compared where both the cell and its preimage under T_p lie inside.
        const Vec2 p = to_vec2(witness.p);
        const IVec2 d = cell_shift(p, window);
        const auto base = stable_set(sp, t, r, v, horizon, window);
        const auto moved = stable_set(sp, t, r + dot(p, v), v, horizon, window);
        const int res = window.resolution;
        std::size_t diff = 0;
        for (int j = 0; j < res; ++j) {
            for (int i = 0; i < res; ++i) {
                const std::int64_t si = i - d.x, sj = j - d.y;
                if (si < 0 || sj < 0 || si >= res || sj >= res) continue;
                diff += base.component.at(static_cast<int>(si), static_cast<int>(sj)) != moved.component.at(i, j);
            }
        }
        return diff / layers;
    }
    }
    return 0.0;
}

NonemptinessReport nonemptiness_check(const CentralizedSkewProduct& sp, double r, Vec2 v, long horizon,
                                      const Window& window, const std::vector<Vec2>& t_samples) {
    NonemptinessReport rep;
    rep.all_nonempty = true;
    for (const Vec2& t : t_samples) {
        const auto s = stable_set(sp, t, r, v, horizon, window);
        NonemptinessEntry e;
        e.t = t;
        e.component_cells = s.component.count();
        e.nonempty = e.component_cells > 0;
        e.touched_far_cap = s.touched_far_cap;
        rep.all_nonempty = rep.all_nonempty && e.nonempty;
        rep.entries.push_back(e);
    }
    if (!rep.all_nonempty) rep.retry_half_width = 2.0 * window.half_width;
    return rep;
}

StripEscapeReport strip_escape_check(const BoolGrid& component, Vec2 v, const Window& window,
                                     const std::vector<double>& s_values, Verdict verdict) {
    StripEscapeReport rep;
    rep.applicable = verdict == Verdict::growing;
    if (!rep.applicable) return rep;
    for (double s : s_values) {
        StripEscapeEntry e;
        e.s = s;
        bool window_reaches = false;
        for (std::size_t k = 0; k < component.cells.size(); ++k) {
            const bool outside = std::fabs(dot(window.cell_center(k), v)) >= s;
            window_reaches = window_reaches || outside;
            if (outside && component.cells[k]) {
                e.escaped = true;
                break;
            }
        }
        e.window_limited = !window_reaches;
        rep.entries.push_back(e);
    }
    return rep;
}

double coverage_fraction(const CentralizedSkewProduct& sp, Vec2 v, long horizon, const Window& window,
                         double r_min, Vec2 t) {
    if (r_min > -2.0 * window.half_width) throw PreconditionError("coverage_fraction needs r_min <= -2W");
    const auto s = stable_set(sp, t, r_min, v, horizon, window);
    return static_cast<double>(s.component.count()) / static_cast<double>(window.cells());
}

double interior_area(const BoolGrid& component, const Window& window) {
    const double h = window.h();
    return static_cast<double>(erode8(component).count()) * h * h;
}

} // namespace rotdev
