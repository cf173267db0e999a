#include "rotdev/invariants.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "rotdev/errors.hpp"

namespace rotdev {

CheckResult make_check(std::string name, double value, double bound, std::string detail) {
    CheckResult c;
    c.name = std::move(name);
    c.value = value;
    c.bound = bound;
    c.passed = value <= bound;
    c.detail = std::move(detail);
    return c;
}

namespace {

// Points spread over [lo, lo + span)^2 without sitting on grid lines.
Vec2 sample_point(int a, int b, int n, double lo, double span) {
    return {lo + span * (a + 0.3) / n, lo + span * (b + 0.6) / n};
}

long sample_horizon(int c, int samples, long n_max) {
    if (samples <= 1) return n_max;
    const double u = -1.0 + 2.0 * c / (samples - 1);
    long n = std::lround(u * static_cast<double>(n_max));
    return n == 0 ? 1 : n;
}

std::string fmt(const char* f, double a) {
    char buf[96];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

} // namespace

CheckResult check_integer_equivariance(const LiftedTorusMap& map, int grid) {
    const IVec2 shifts[] = {{1, 0}, {0, 1}, {-3, 7}, {1000, -1000}};
    double bad = 0;
    for (int a = 0; a < grid; ++a)
        for (int b = 0; b < grid; ++b) {
            const LiftPoint z = LiftPoint::from(sample_point(a, b, grid, -2.0, 4.0));
            const LiftPoint fz = map.apply(z);
            const LiftPoint gz = map.apply_inverse(z);
            for (IVec2 p : shifts) {
                bad += !(map.apply(z + p) == fz + p);
                bad += !(map.apply_inverse(z + p) == gz + p);
            }
        }
    return make_check("integer_equivariance", bad, 0.0, "violating samples");
}

CheckResult check_cocycle_law(const LiftedTorusMap& map, int grid) {
    const long steps[] = {1, 7, -5, 100, -100};
    double worst = 0.0;
    for (int a = 0; a < grid; ++a)
        for (int b = 0; b < grid; ++b) {
            const Vec2 z = sample_point(a, b, grid, 0.0, 1.0);
            for (long m : steps)
                for (long n : steps) {
                    const Vec2 dm = map.iterate_displacement(z, m);
                    const Vec2 lhs = map.iterate_displacement(z, m + n);
                    const Vec2 rhs = dm + map.iterate_displacement(wrap(z + dm), n);
                    worst = std::max(worst, norm(lhs - rhs));
                }
        }
    return make_check("cocycle_law", worst, 1e-8);
}

CheckResult check_inversion_round_trip(const LiftedTorusMap& map, int grid) {
    double worst = 0.0;
    for (int a = 0; a < grid; ++a)
        for (int b = 0; b < grid; ++b) {
            const Vec2 z = sample_point(a, b, grid, -1.0, 3.0);
            worst = std::max(worst, norm(map.apply_inverse(map.apply(z)) - z));
        }
    return make_check("inversion_round_trip", worst, 1e-10, to_string(map.inverse_mode()));
}

CheckResult check_conjugation(const LiftedTorusMap& map, int grid) {
    double worst = 0.0;
    for (int a = 0; a < grid; ++a) {
        const Vec2 t = sample_point(a, (a * 5) % grid, grid, 0.0, 1.0);
        const LiftedTorusMap g = map.conjugate(t);
        for (int b = 0; b < grid; ++b) {
            const Vec2 z = sample_point(b, (b * 3 + 1) % grid, grid, -2.0, 4.0);
            worst = std::max(worst, norm(g.eval_displacement(z) - map.eval_displacement(z + t)));
        }
    }
    return make_check("conjugation", worst, 1e-12);
}

CheckResult check_path_equivalence(const CentralizedSkewProduct& sp, int samples, long n_max, double tol,
                                   bool condition_aware) {
    constexpr double eps = 2.220446049250313e-16;
    constexpr double step = 1e-6;
    double worst = 0.0, worst_raw = 0.0;
    for (int a = 0; a < samples; ++a) {
        const Vec2 t = sample_point(a, (a * 7) % samples, samples, 0.0, 1.0);
        for (int b = 0; b < samples; ++b) {
            const Vec2 z = sample_point(b, (b * 11 + 3) % samples, samples, -3.0, 6.0);
            for (int c = 0; c < samples; ++c) {
                const long n = sample_horizon(c, samples, n_max);
                const Vec2 p = sp.fiber_cocycle(t, z, n, CocyclePath::closed_form);
                const Vec2 q = sp.fiber_cocycle(t, z, n, CocyclePath::stepwise);
                const double r = norm(p - q);
                worst_raw = std::max(worst_raw, r);
                if (!condition_aware) {
                    worst = worst_raw;
                    continue;
                }
                const Vec2 px = sp.fiber_cocycle(t, z + Vec2{step, 0.0}, n, CocyclePath::closed_form);
                const Vec2 py = sp.fiber_cocycle(t, z + Vec2{0.0, step}, n, CocyclePath::closed_form);
                const double jac = (norm(px - p) + norm(py - p)) / step;
                const double allowance = tol + 4.0 * eps * static_cast<double>(std::labs(n)) * jac;
                worst = std::max(worst, r / allowance);
            }
        }
    }
    if (!condition_aware) return make_check("path_equivalence", worst, tol);
    char buf[96];
    std::snprintf(buf, sizeof buf, "residual / allowance; largest raw residual %.3g", worst_raw);
    return make_check("path_equivalence", worst, 1.0, buf);
}

CheckResult check_displacement_identity(const CentralizedSkewProduct& sp, int samples, long n_max) {
    double worst = 0.0;
    for (int a = 0; a < samples; ++a) {
        const Vec2 t = sample_point((a * 3) % samples, a, samples, 0.0, 1.0);
        for (int b = 0; b < samples; ++b) {
            const Vec2 z = sample_point(b, (b * 5 + 2) % samples, samples, -3.0, 6.0);
            for (int c = 0; c < samples; ++c)
                worst = std::max(worst, sp.displacement_identity_residual(t, z, sample_horizon(c, samples, n_max)));
        }
    }
    return make_check("displacement_identity", worst, 1e-10);
}

CheckResult check_self_test(const CentralizedSkewProduct& sp) {
    return make_check("skew_product_self_test", sp.self_test_residual(), 1e-12);
}

CheckResult check_sandwich(const DeviationProfile& profile, double slack) {
    const double plus = profile.running_max_at(profile.horizon);
    const double minus = profile.gap_minus();
    CheckResult c = make_check("sqrt2_sandwich", std::fabs(plus - minus), kSandwichConstant + slack);
    char buf[128];
    std::snprintf(buf, sizeof buf, "gap_plus=%.6g gap_minus=%.6g slack=%.3g", plus, minus, slack);
    c.detail = buf;
    return c;
}

CheckResult check_horizon_monotone(const DeviationProfile& profile) {
    double bad = 0;
    for (std::size_t k = 1; k < profile.checkpoints.size(); ++k)
        bad += profile.checkpoints[k].running_max < profile.checkpoints[k - 1].running_max;
    return make_check("running_max_monotone", bad, 0.0, "decreasing checkpoints");
}

CheckResult check_lift_independence(const LiftedTorusMap& map, Vec2 v, double alpha, int grid_res, long horizon) {
    const IVec2 p{2, -1};
    const DeviationProfile a = deviation_profile(map, v, alpha, grid_res, horizon);
    const DeviationProfile b =
        deviation_profile(map.translated_lift(p), v, alpha + dot(to_vec2(p), v), grid_res, horizon);
    double worst = 0.0;
    for (std::size_t k = 0; k < a.d_plus.size(); ++k) {
        worst = std::max(worst, std::fabs(a.d_plus[k] - b.d_plus[k]));
        worst = std::max(worst, std::fabs(a.d_minus[k] - b.d_minus[k]));
    }
    return make_check("lift_independence", worst, 1e-9);
}

CheckResult check_r_monotone(const FiberMinimumField& field, double r) {
    const BoolGrid top = stable_set(field, r).component;
    double bad = 0;
    for (double s : {r - 0.5, r - 2.0})
        bad += static_cast<double>(count_difference(top, stable_set(field, s).component));
    return make_check("r_monotone", bad, 0.0, "cells of Lambda_r outside Lambda_s, s < r");
}

CheckResult check_horizon_shrinkage(const CentralizedSkewProduct& sp, Vec2 t, double r, Vec2 v, long horizon,
                                    const Window& window) {
    const long longer = std::min(2 * horizon, sp.map().horizon_cap());
    const auto a = stable_set(sp, t, r, v, horizon, window);
    const auto b = stable_set(sp, t, r, v, longer, window);
    const double bad = static_cast<double>(count_difference(b.qualifying, a.qualifying) +
                                           count_difference(b.component, a.component));
    return make_check("horizon_monotone", bad, 0.0, "cells gained by a longer horizon");
}

CheckResult check_forward_contains(const CentralizedSkewProduct& sp, Vec2 t, double r, Vec2 v, long horizon,
                                   const Window& window) {
    const auto two = stable_set(sp, t, r, v, horizon, window, Sidedness::two_sided);
    const auto fwd = stable_set(sp, t, r, v, horizon, window, Sidedness::forward);
    const double bad = static_cast<double>(count_difference(two.component, fwd.component));
    return make_check("forward_contains_two_sided", bad, 0.0);
}

CheckResult check_translation_equivariance(const CentralizedSkewProduct& sp, Vec2 t, double r, Vec2 v, long horizon,
                                           const Window& window, EquivarianceProperty which, double bound) {
    const double h = window.h();
    double worst = 0.0;
    for (double level : {r - 1.0, r, r + 1.0})
        for (int a = -1; a <= 1; ++a)
            for (int b = -1; b <= 1; ++b) {
                EquivarianceWitness w;
                w.t_lift = {3.0 * a * h, 5.0 * b * h};
                w.p = {a, b};
                worst = std::max(worst, equivariance_residual(sp, t, level, v, horizon, window, which, w));
            }
    return make_check("equivariance_" + to_string(which), worst, bound, "cell layers");
}

CheckResult check_half_plane_bounds(const FiniteHorizonStableSet& set, double m_bound) {
    const double h = set.window.h();
    double missing = 0, below = 0;
    for (std::size_t k = 0; k < set.component.cells.size(); ++k) {
        const double height = dot(set.window.cell_center(k), set.v);
        if (height >= set.r + m_bound + h && !set.component.cells[k]) ++missing;
        if (height < set.r && set.component.cells[k]) ++below;
    }
    return make_check("half_plane_bounds", missing + below, 0.0,
                      fmt("missing above r+M+h: %.0f", missing) + fmt(", below r: %.0f", below));
}

CheckResult check_chart_integer_translation(const LevelFunctionChart& chart) {
    const Window& w = chart.window;
    const double cells_per_unit = 1.0 / w.h();
    const long step = std::lround(cells_per_unit);
    if (std::fabs(cells_per_unit - static_cast<double>(step)) > 1e-9 || step >= w.resolution)
        return make_check("chart_integer_translation", 0.0, 0.01, "not applicable: unit shift is not cell aligned");
    const double tol = 2.0 * chart.eps_r;
    std::size_t pairs = 0, off = 0;
    const int res = w.resolution;
    for (int dir = 0; dir < 2; ++dir) {
        const int di = dir == 0 ? static_cast<int>(step) : 0;
        const int dj = dir == 1 ? static_cast<int>(step) : 0;
        const double expected = dir == 0 ? chart.v.x : chart.v.y;
        for (int j = 0; j + dj < res; ++j)
            for (int i = 0; i + di < res; ++i) {
                const std::size_t k0 = w.index(i, j), k1 = w.index(i + di, j + dj);
                if (chart.status[k0] != CellStatus::resolved || chart.status[k1] != CellStatus::resolved) continue;
                ++pairs;
                off += std::fabs(chart.H[k1] - chart.H[k0] - expected) > tol;
            }
    }
    const double frac = pairs ? static_cast<double>(off) / static_cast<double>(pairs) : 0.0;
    char buf[96];
    std::snprintf(buf, sizeof buf, "%zu resolved pairs, tolerance %.3g", pairs, tol);
    return make_check("chart_integer_translation", frac, 0.01, buf);
}

bool all_passed(const std::vector<CheckResult>& checks) {
    return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

} // namespace rotdev
