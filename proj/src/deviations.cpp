#include "rotdev/deviations.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "rotdev/errors.hpp"
#include "rotdev/parallel.hpp"

namespace rotdev {

std::string to_string(Verdict v) {
    switch (v) {
    case Verdict::bounded: return "bounded";
    case Verdict::growing: return "growing";
    case Verdict::inconclusive: return "inconclusive";
    }
    return "unknown";
}

std::vector<Vec2> offset_grid(int grid_res) {
    std::vector<Vec2> grid;
    grid.reserve(static_cast<std::size_t>(grid_res) * grid_res);
    for (int j = 0; j < grid_res; ++j)
        for (int i = 0; i < grid_res; ++i)
            grid.push_back({(i + 0.5) / grid_res, (j + 0.5) / grid_res});
    return grid;
}

std::vector<long> default_checkpoints(long horizon) {
    std::vector<long> out;
    for (long decade = 1; decade <= horizon; decade *= 10) {
        for (long m : {1L, 2L, 5L}) {
            const long c = m * decade;
            if (c <= horizon) out.push_back(c);
        }
        if (decade > horizon / 10) break;
    }
    if (out.empty() || out.back() != horizon) out.push_back(horizon);
    return out;
}

double DeviationProfile::running_max_at(long horizon_limit) const {
    const long lim = std::min(horizon_limit, horizon);
    double m = -std::numeric_limits<double>::infinity();
    for (long n = -lim; n <= lim; ++n) m = std::max(m, at(n));
    return m;
}

double DeviationProfile::gap_minus() const {
    return *std::max_element(d_minus.begin(), d_minus.end());
}

DeviationProfile deviation_profile(const LiftedTorusMap& map, Vec2 v, double alpha, int grid_res,
                                   long horizon, const VerdictThresholds& thresholds) {
    if (grid_res < 1) throw PreconditionError("grid_res must be positive");
    if (horizon < 1) throw PreconditionError("horizon must be positive");
    if (std::fabs(norm(v) - 1.0) > 1e-12) throw PreconditionError("v must be a unit vector");
    map.check_horizon(horizon);

    const std::vector<Vec2> grid = offset_grid(grid_res);
    const OrbitClasses classes = orbit_classes(map, grid);
    const std::size_t reps = classes.representatives.size();
    const std::size_t len = static_cast<std::size_t>(2 * horizon + 1);
    const int workers = worker_count();
    constexpr double inf = std::numeric_limits<double>::infinity();
    std::vector<std::vector<double>> hi(workers, std::vector<double>(len, -inf));
    std::vector<std::vector<double>> lo(workers, std::vector<double>(len, inf));

    parallel_for(reps, [&](std::size_t b, std::size_t e, int w) {
        auto& whi = hi[w];
        auto& wlo = lo[w];
        for (std::size_t r = b; r < e; ++r) {
            const Vec2 z = classes.representatives[r];
            whi[horizon] = std::max(whi[horizon], 0.0);
            wlo[horizon] = std::min(wlo[horizon], 0.0);
            {
                TorusOrbit orbit(map, z);
                CompensatedSum sum;
                for (long n = 1; n <= horizon; ++n) {
                    sum.add(dot(orbit.forward(), v) - alpha);
                    const double g = sum.value();
                    const std::size_t k = static_cast<std::size_t>(horizon + n);
                    whi[k] = std::max(whi[k], g);
                    wlo[k] = std::min(wlo[k], g);
                }
            }
            {
                TorusOrbit orbit(map, z);
                CompensatedSum sum;
                for (long n = 1; n <= horizon; ++n) {
                    sum.add(alpha - dot(orbit.backward(), v));
                    const double g = sum.value();
                    const std::size_t k = static_cast<std::size_t>(horizon - n);
                    whi[k] = std::max(whi[k], g);
                    wlo[k] = std::min(wlo[k], g);
                }
            }
        }
    });

    std::vector<double> d_plus(len, -inf), d_minus(len, -inf);
    for (int w = 0; w < workers; ++w) {
        for (std::size_t k = 0; k < len; ++k) {
            d_plus[k] = std::max(d_plus[k], hi[w][k]);
            d_minus[k] = std::max(d_minus[k], -lo[w][k]);
        }
    }
    return profile_from_values(v, alpha, grid_res, horizon, std::move(d_plus), std::move(d_minus), thresholds);
}

DeviationProfile profile_from_values(Vec2 v, double alpha, int grid_res, long horizon, std::vector<double> d_plus,
                                     std::vector<double> d_minus, const VerdictThresholds& thresholds) {
    const std::size_t len = static_cast<std::size_t>(2 * horizon + 1);
    if (d_plus.size() != len || d_minus.size() != len) throw PreconditionError("profile arrays have the wrong length");
    DeviationProfile p;
    p.v = v;
    p.alpha = alpha;
    p.horizon = horizon;
    p.grid_res = grid_res;
    p.d_plus = std::move(d_plus);
    p.d_minus = std::move(d_minus);
    // D(0) = 0 by definition; -0.0 from the negation is normalised here.
    p.d_plus[horizon] = 0.0;
    p.d_minus[horizon] = 0.0;

    double running = 0.0;
    long reached = 0;
    for (long c : default_checkpoints(horizon)) {
        for (long n = reached + 1; n <= c; ++n) running = std::max({running, p.at(n), p.at(-n)});
        reached = c;
        p.checkpoints.push_back({c, running});
    }
    p.running_max = running;
    p.growth = growth_statistic(p);
    p.verdict = boundedness_verdict(p, thresholds);
    return p;
}

double growth_statistic(const DeviationProfile& profile) {
    const auto& cps = profile.checkpoints;
    if (cps.size() < 2) return 0.0;
    const std::size_t start = cps.size() / 2;
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    std::size_t n = 0;
    for (std::size_t i = start; i < cps.size(); ++i) {
        const double x = std::log10(static_cast<double>(cps[i].horizon));
        const double y = cps[i].running_max;
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++n;
    }
    const double denom = n * sxx - sx * sx;
    if (n < 2 || denom <= 0.0) return 0.0;
    return (n * sxy - sx * sy) / denom;
}

Verdict boundedness_verdict(const DeviationProfile& profile, const VerdictThresholds& thresholds) {
    const auto& cps = profile.checkpoints;
    if (cps.size() < 3) throw PreconditionError("verdict needs at least 3 horizon checkpoints");
    const double first = cps[cps.size() / 2].running_max;
    const double last = cps.back().running_max;
    const double scale = std::max(std::fabs(first), 1e-9);
    const double relative_increase = (last - first) / scale;
    if (relative_increase < thresholds.plateau) return Verdict::bounded;
    if (growth_statistic(profile) > thresholds.slope) return Verdict::growing;
    return Verdict::inconclusive;
}

double default_slack(const LiftedTorusMap& map, long horizon, double factor) {
    return factor * map.sup_norm_bound() / std::sqrt(static_cast<double>(horizon));
}

SymmetryGap symmetry_gap(const DeviationProfile& profile, double slack) {
    SymmetryGap g;
    g.gap_plus = profile.running_max_at(profile.horizon);
    g.gap_minus = profile.gap_minus();
    g.slack = slack;
    g.bound = kSandwichConstant + slack;
    if (std::fabs(g.gap_plus - g.gap_minus) > g.bound) {
        char buf[200];
        std::snprintf(buf, sizeof buf, "sqrt(2) sandwich violated: gap_plus=%.17g gap_minus=%.17g bound=%.17g",
                      g.gap_plus, g.gap_minus, g.bound);
        throw SandwichViolated(buf);
    }
    return g;
}

SymmetryGap symmetry_gap(const LiftedTorusMap& map, Vec2 v, double alpha, int grid_res, long horizon,
                         double slack_factor) {
    const DeviationProfile p = deviation_profile(map, v, alpha, grid_res, horizon);
    return symmetry_gap(p, default_slack(map, horizon, slack_factor));
}

} // namespace rotdev
