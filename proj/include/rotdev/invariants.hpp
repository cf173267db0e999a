#pragma once

#include <string>
#include <vector>

#include "rotdev/deviations.hpp"
#include "rotdev/pseudofoliation.hpp"
#include "rotdev/skew_product.hpp"
#include "rotdev/stable_sets.hpp"

namespace rotdev {

/// One executable property check. value is the measured residual (or count
/// of violations); passed means value <= bound unless detail says otherwise.
struct CheckResult {
    std::string name;
    bool passed = false;
    double value = 0.0;
    double bound = 0.0;
    std::string detail;
};

CheckResult make_check(std::string name, double value, double bound, std::string detail = {});

// torus maps

/// f(z + p) == f(z) + p bit for bit on the cell + fraction representation.
CheckResult check_integer_equivariance(const LiftedTorusMap& map, int grid = 32);
/// Delta^{(m+n)}(z) = Delta^{(m)}(z) + Delta^{(n)}(f^m(z)).
CheckResult check_cocycle_law(const LiftedTorusMap& map, int grid = 8);
/// f^{-1}(f(z)) = z on a grid x grid sample.
CheckResult check_inversion_round_trip(const LiftedTorusMap& map, int grid = 64);
/// Delta of Ad_t(f) at z equals Delta(z + t).
CheckResult check_conjugation(const LiftedTorusMap& map, int grid = 16);

// skew product

/// Closed form against stepwise composition over samples^3 (t, z, n) triples
/// with |n| <= n_max, within tol. With condition_aware each sample may also
/// differ by 4 eps |n| |D_z H^{(n)}|, the roundoff a position error of one
/// ulp per step can cause; value is then the worst residual / allowance.
CheckResult check_path_equivalence(const CentralizedSkewProduct& sp, int samples = 16, long n_max = 1000,
                                   double tol = 1e-10, bool condition_aware = false);
CheckResult check_displacement_identity(const CentralizedSkewProduct& sp, int samples = 16, long n_max = 1000);
CheckResult check_self_test(const CentralizedSkewProduct& sp);

// deviations

CheckResult check_sandwich(const DeviationProfile& profile, double slack);
/// M(N) is non-decreasing along the checkpoints.
CheckResult check_horizon_monotone(const DeviationProfile& profile);
/// D computed for the lift T_p o f with alpha + <p,v> matches D for f.
CheckResult check_lift_independence(const LiftedTorusMap& map, Vec2 v, double alpha, int grid_res, long horizon);

// stable sets

/// Property (i) at r and two lower levels: 0 violating cells.
CheckResult check_r_monotone(const FiberMinimumField& field, double r);
/// Lambda at horizon 2N inside Lambda at horizon N: 0 violating cells.
CheckResult check_horizon_shrinkage(const CentralizedSkewProduct& sp, Vec2 t, double r, Vec2 v, long horizon,
                                    const Window& window);
/// The forward-only set contains the two-sided one.
CheckResult check_forward_contains(const CentralizedSkewProduct& sp, Vec2 t, double r, Vec2 v, long horizon,
                                   const Window& window);
/// Worst residual of (iii) over a 3 x 3 sample of cell-aligned lifts and of
/// (iv) over p in {-1,0,1}^2, each at r - 1, r, r + 1.
CheckResult check_translation_equivariance(const CentralizedSkewProduct& sp, Vec2 t, double r, Vec2 v, long horizon,
                                           const Window& window, EquivarianceProperty which, double bound = 1.5);
/// The component contains every cell with <z,v> >= r + M + h and no cell
/// with <z,v> < r.
CheckResult check_half_plane_bounds(const FiniteHorizonStableSet& set, double m_bound);

// level function

/// H(z + p) = H(z) + <p,v> within 2 eps_r for p = (1,0), (0,1), over pairs of
/// resolved cells. value is the fraction of pairs outside; bound 1%.
CheckResult check_chart_integer_translation(const LevelFunctionChart& chart);

bool all_passed(const std::vector<CheckResult>& checks);

} // namespace rotdev
