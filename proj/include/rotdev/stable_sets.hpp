#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rotdev/deviations.hpp"
#include "rotdev/grid.hpp"
#include "rotdev/skew_product.hpp"

namespace rotdev {

enum class Sidedness { two_sided, forward };
std::string to_string(Sidedness s);

/// Per cell, q(z) = min over the horizon range of <H_t^{(n)}(z), v>.
/// A cell qualifies at level r iff q(z) >= r, so one field answers every r.
struct FiberMinimumField {
    Window window;
    Vec2 v;
    Vec2 t;
    long horizon = 0;
    Sidedness sidedness = Sidedness::two_sided;
    std::vector<double> q;

    BoolGrid threshold(double r) const;
};

FiberMinimumField fiber_minimum_field(const CentralizedSkewProduct& sp, Vec2 t, Vec2 v, long horizon,
                                      const Window& window, Sidedness sidedness);

/// Cells whose centre z satisfies <H_t^{(n)}(z), v> >= r for every n in the
/// horizon range. The scan runs n = 0, 1, -1, 2, -2, ... and stops at the
/// first violation.
BoolGrid qualifying_set(const CentralizedSkewProduct& sp, Vec2 t, double r, Vec2 v, long horizon,
                        const Window& window, Sidedness sidedness);

inline constexpr double kDefaultFarCapFraction = 0.1;

/// Cells with <z,v> >= <center,v> + (1 - cap_fraction) W.
BoolGrid far_cap(const Window& window, Vec2 v, double cap_fraction = kDefaultFarCapFraction);

struct InfinityComponent {
    BoolGrid mask;
    bool touched_far_cap = false;
    /// Number of distinct 8-components meeting the far cap (merged into mask).
    int far_cap_components = 0;
};

InfinityComponent infinity_component(const BoolGrid& mask, Vec2 v, const Window& window,
                                     double cap_fraction = kDefaultFarCapFraction);

struct FiniteHorizonStableSet {
    double r = 0.0;
    Vec2 v;
    Vec2 t;
    long horizon = 0;
    Sidedness sidedness = Sidedness::two_sided;
    Window window;
    BoolGrid qualifying;
    BoolGrid component;
    bool touched_far_cap = false;
    int far_cap_components = 0;
};

FiniteHorizonStableSet stable_set(const CentralizedSkewProduct& sp, Vec2 t, double r, Vec2 v, long horizon,
                                  const Window& window, Sidedness sidedness = Sidedness::two_sided);
FiniteHorizonStableSet stable_set(const FiberMinimumField& field, double r,
                                  double cap_fraction = kDefaultFarCapFraction);

enum class EquivarianceProperty { i, ii, iii, iv };
std::string to_string(EquivarianceProperty p);

struct EquivarianceWitness {
    double s = 0.0;       ///< (i), (ii): a level below r
    Vec2 t_lift;          ///< (iii): a lift t~ in R^2, cell aligned
    IVec2 p;              ///< (iv)
};

/// Grid-cell-normalised discrepancy between the two sides of the equivariance
/// identity: cells / resolution, i.e. in boundary cell layers. Inclusions
/// report only the violating cells.
double equivariance_residual(const CentralizedSkewProduct& sp, Vec2 t, double r, Vec2 v, long horizon,
                             const Window& window, EquivarianceProperty which,
                             const EquivarianceWitness& witness);

struct NonemptinessEntry {
    Vec2 t;
    bool nonempty = false;
    std::size_t component_cells = 0;
    bool touched_far_cap = false;
};

struct NonemptinessReport {
    std::vector<NonemptinessEntry> entries;
    bool all_nonempty = false;
    /// Suggested half-width for a retry when some fibre came out empty.
    std::optional<double> retry_half_width;
};

NonemptinessReport nonemptiness_check(const CentralizedSkewProduct& sp, double r, Vec2 v, long horizon,
                                      const Window& window, const std::vector<Vec2>& t_samples);

struct StripEscapeEntry {
    double s = 0.0;
    bool escaped = false;
    /// The whole window lies inside the strip, so escape cannot be observed.
    bool window_limited = false;
};

struct StripEscapeReport {
    bool applicable = false;
    std::vector<StripEscapeEntry> entries;
};

/// Whether the component leaves A_s^v = {|<z,v>| < s} inside the window.
/// Only meaningful when the deviation verdict for v is growing.
StripEscapeReport strip_escape_check(const BoolGrid& component, Vec2 v, const Window& window,
                                     const std::vector<double>& s_values, Verdict verdict);

/// Fraction of window cells in the infinity component at r_min (r_min <= -2W).
double coverage_fraction(const CentralizedSkewProduct& sp, Vec2 v, long horizon, const Window& window,
                         double r_min, Vec2 t = {});

/// Area of the cells whose in-window 8-neighbourhood lies in the component.
double interior_area(const BoolGrid& component, const Window& window);

} // namespace rotdev
