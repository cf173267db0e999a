#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rotdev/deviations.hpp"
#include "rotdev/json_out.hpp"
#include "rotdev/map_family.hpp"
#include "rotdev/stable_sets.hpp"

namespace rotdev {

enum class CachePolicy { off, read, read_write };
std::string to_string(CachePolicy p);

/// Everything a run needs, read from a line-oriented key=value file with
/// [section] headers. See README.md for the grammar.
struct RunConfig {
    std::string name;
    MapFamilySpec map;
    long horizon_cap = kDefaultHorizonCap;

    int rot_grid_res = 256;
    std::vector<long> rot_horizons{100, 1000, 10000};
    double point_tol = 1e-4;
    double line_tol = 1e-4;
    Vec2 point_direction{0.0, 1.0};

    int dev_grid_res = 256;
    long dev_horizon = 10000;
    std::optional<Vec2> v_override;
    std::optional<double> alpha_override;
    VerdictThresholds thresholds;
    double slack_factor = 2.0;

    long ss_horizon = 1000;
    double r = 0.0;
    std::optional<double> half_width;
    int resolution = 512;
    Vec2 center;
    Vec2 t;
    Sidedness sidedness = Sidedness::two_sided;
    int t_samples = 16;
    std::vector<double> s_values{2.0};
    double r_min = -100.0;
    double cap_fraction = kDefaultFarCapFraction;

    double eps_r = 0.0;
    std::vector<double> levels;
    int level_count = 5;
    long n_checks = 200;

    std::vector<std::string> render_artifacts{"hull", "deviation", "mask", "leaves"};

    CachePolicy cache = CachePolicy::off;

    /// Resolved parameters in a stable order, for the manifest and cache keys.
    Json to_json() const;
};

/// Throws ConfigError with the offending line number.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

/// A real number or one of the keywords golden, liouville(n), optionally negated.
double parse_real(const std::string& token);

} // namespace rotdev
