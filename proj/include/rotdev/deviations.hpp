#pragma once

#include <string>
#include <vector>

#include "rotdev/torus_map.hpp"

namespace rotdev {

enum class Verdict { bounded, growing, inconclusive };
std::string to_string(Verdict v);

struct VerdictThresholds {
    /// Relative increase of M over the last half of the checkpoints below
    /// which the profile counts as a plateau.
    double plateau = 0.01;
    /// Least-squares slope of M against log10(horizon) above which the
    /// profile counts as growing.
    double slope = 0.05;
};

struct Checkpoint {
    long horizon = 0;
    double running_max = 0.0; ///< M(horizon) = max_{|n| <= horizon} D(n)
};

/// Directional deviation profile over a grid of the fundamental domain.
struct DeviationProfile {
    Vec2 v;
    double alpha = 0.0;
    long horizon = 0;
    int grid_res = 0;
    /// D(n) = max_z <Delta^{(n)}(z), v> - n alpha, stored at index n + horizon.
    std::vector<double> d_plus;
    /// The same quantity for (-v, -alpha).
    std::vector<double> d_minus;
    std::vector<Checkpoint> checkpoints;
    double running_max = 0.0;
    Verdict verdict = Verdict::inconclusive;
    double growth = 0.0;

    double at(long n) const { return d_plus[static_cast<std::size_t>(n + horizon)]; }
    double at_minus(long n) const { return d_minus[static_cast<std::size_t>(n + horizon)]; }
    /// M(N') for N' <= horizon.
    double running_max_at(long horizon_limit) const;
    double gap_minus() const;
};

/// Grid of (i+1/2, j+1/2)/grid_res points.
std::vector<Vec2> offset_grid(int grid_res);

/// Checkpoints 1, 2, 5, 10, 20, 50, ... up to and including the horizon.
std::vector<long> default_checkpoints(long horizon);

DeviationProfile deviation_profile(const LiftedTorusMap& map, Vec2 v, double alpha, int grid_res,
                                   long horizon, const VerdictThresholds& thresholds = {});

/// Assembles a profile (checkpoints, running maximum, verdict) from stored
/// D values; used for cached profiles.
DeviationProfile profile_from_values(Vec2 v, double alpha, int grid_res, long horizon, std::vector<double> d_plus,
                                     std::vector<double> d_minus, const VerdictThresholds& thresholds = {});

/// Least-squares slope of M against log10 of the horizon over the last half of
/// the checkpoints.
double growth_statistic(const DeviationProfile& profile);

/// Heuristic evidence, not a proof: bounded when M plateaus, growing when the
/// slope test fires, inconclusive otherwise.
Verdict boundedness_verdict(const DeviationProfile& profile, const VerdictThresholds& thresholds = {});

struct SymmetryGap {
    double gap_plus = 0.0;
    double gap_minus = 0.0;
    double slack = 0.0;
    /// sqrt(2) + slack
    double bound = 0.0;
};

inline constexpr double kSandwichConstant = 1.4142135623730951; // sqrt(2)

/// slack(N) = factor * sup|Delta| / sqrt(N)
double default_slack(const LiftedTorusMap& map, long horizon, double factor = 2.0);

/// Sup deviations in directions v and -v over the same horizon. Throws
/// SandwichViolated when |gap_plus - gap_minus| exceeds sqrt(2) + slack.
SymmetryGap symmetry_gap(const LiftedTorusMap& map, Vec2 v, double alpha, int grid_res, long horizon,
                         double slack_factor = 2.0);
SymmetryGap symmetry_gap(const DeviationProfile& profile, double slack);

} // namespace rotdev
