#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rotdev/marching_squares.hpp"
#include "rotdev/stable_sets.hpp"

namespace rotdev {

enum class CellStatus : std::uint8_t { resolved, saturated_low, saturated_high };
std::string to_string(CellStatus s);

/// U_r: the component of the grid interior of Lambda_r^v(t) that contains the
/// seed {<z,v> >= r + M + h}. Throws SeedEmpty when no seed cell survives.
BoolGrid build_U_r(const FiberMinimumField& field, double r, double m_bound);
BoolGrid build_U_r(const CentralizedSkewProduct& sp, Vec2 t, double r, Vec2 v, long horizon,
                   const Window& window, double m_bound);

/// dilate(U_r) restricted to Lambda_r^v(t): U_r with the erosion layer given
/// back. Nested in r like U_r; the level function is read off this family.
BoolGrid level_region(const FiberMinimumField& field, double r, double m_bound);

struct LevelFunctionOptions {
    /// Bisection step; 0 selects h/2.
    double eps_r = 0.0;
    /// Lattice range; unset ends are derived from the window and the field.
    std::optional<double> r_lo;
    std::optional<double> r_hi;
};

struct LevelFunctionChart {
    Window window;
    Vec2 v;
    double alpha = 0.0; ///< <rho~, v>
    Vec2 t;
    long horizon = 0;
    double m_bound = 0.0;
    double eps_r = 0.0;
    double r_lo = 0.0;
    double r_hi = 0.0;
    std::vector<double> r_samples; ///< lattice levels evaluated, ascending
    std::vector<double> H;
    std::vector<CellStatus> status;

    double resolved_fraction() const;
    /// Bilinear interpolation of H between cell centres; nullopt outside the
    /// window or when a corner is not resolved.
    std::optional<double> interpolate(Vec2 z) const;
};

LevelFunctionChart level_function(const CentralizedSkewProduct& sp, Vec2 t, Vec2 v, const Window& window,
                                  long horizon, double m_bound, const LevelFunctionOptions& opts = {});
/// Same, from a precomputed two-sided fiber minimum field.
LevelFunctionChart level_function(const CentralizedSkewProduct& sp, const FiberMinimumField& field, double m_bound,
                                  const LevelFunctionOptions& opts = {});

struct PseudoLeaf {
    double level = 0.0;
    std::vector<Polyline> polylines;
    Vec2 direction; ///< v^perp
    /// Spread of <p,v> over the leaf: the width of the thinnest strip A^v
    /// (recentred) that contains it.
    double width = 0.0;
    std::size_t points() const;
};

/// Throws PreconditionError when fewer than 90% of the cells are resolved
/// and LevelOutOfRange for a level outside (r_lo, r_hi).
std::vector<PseudoLeaf> extract_leaves(const LevelFunctionChart& chart, const std::vector<double>& levels);

struct AxiomResult {
    bool passed = false;
    double value = 0.0;
    double bound = 0.0;
    std::string detail;
};

struct SlopeType {
    bool rational = false;
    long long p = 0;
    long long q = 0;
};

/// Continued-fraction test of the slope of v with denominators up to max_q.
SlopeType slope_type(Vec2 v, long long max_q = 1000000);

struct FoliationCertificate {
    AxiomResult separation;       ///< (a)
    AxiomResult empty_interior;   ///< (b)
    AxiomResult disjointness;     ///< (c)
    AxiomResult equivariance;     ///< (d)
    AxiomResult strip_confinement;///< (e)
    double global_width = 0.0;
    /// Fraction of equivariance samples within 2 eps_r + 2h.
    double equivariance_within_bound = 0.0;
    std::size_t equivariance_samples = 0;
    SlopeType slope;

    bool all_passed() const {
        return separation.passed && empty_interior.passed && disjointness.passed && equivariance.passed &&
               strip_confinement.passed;
    }
};

FoliationCertificate certify(const LevelFunctionChart& chart, const std::vector<PseudoLeaf>& leaves,
                             const LiftedTorusMap& map, Vec2 rho_tilde, long n_checks);

} // namespace rotdev
