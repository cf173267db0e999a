#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "rotdev/trig_poly.hpp"
#include "rotdev/vec2.hpp"

namespace rotdev {

enum class InverseMode {
    exact_translation, ///< constant displacement
    exact_triangular,  ///< (x,y) -> (x+a, y+phi(x))
    newton,            ///< damped fixed-point inversion, needs contraction_bound < 1
};

std::string to_string(InverseMode m);

struct InversionOptions {
    int max_iterations = 200;
    double tolerance = 1e-12;
    double damping = 1.0;
};

inline constexpr long kDefaultHorizonCap = 100000;

/// A lift f = id + Delta of a torus homeomorphism isotopic to the identity,
/// with Delta a Z^2-periodic trigonometric polynomial.
///
/// Instances are immutable and safe to share between threads.
class LiftedTorusMap {
public:
    static LiftedTorusMap translation(Vec2 alpha);
    /// (x,y) -> (x + base, y + forcing(x)); forcing is read from the second
    /// component and must not depend on y.
    static LiftedTorusMap skew(double base, const TrigPoly2& forcing);
    /// General displacement; inverted numerically.
    static LiftedTorusMap generic(const TrigPoly2& displacement);

    const TrigPoly2& displacement_field() const { return disp_; }
    InverseMode inverse_mode() const { return mode_; }
    /// Lipschitz bound of the zero-mean part of the displacement.
    double contraction_bound() const { return contraction_; }
    long horizon_cap() const { return horizon_cap_; }
    LiftedTorusMap with_horizon_cap(long cap) const;
    LiftedTorusMap with_inversion(InversionOptions opts) const;
    /// T_p o f, another lift of the same torus map.
    LiftedTorusMap translated_lift(IVec2 p) const;

    /// Delta(pi(z)).
    Vec2 eval_displacement(Vec2 z) const { return disp_(z); }
    Vec2 displacement_reduced(Vec2 frac) const { return disp_.eval_reduced(frac); }

    /// z + Delta(pi(z)).
    Vec2 apply(Vec2 z) const { return z + disp_(z); }
    /// Same, on the exact integer+fraction representation.
    LiftPoint apply(const LiftPoint& z) const;

    Vec2 apply_inverse(Vec2 w) const;
    LiftPoint apply_inverse(const LiftPoint& w) const;

    /// For a reduced point theta returns Delta(f^{-1}(theta)), so that the
    /// preimage is theta - result (as lift points near theta).
    Vec2 inverse_displacement_reduced(Vec2 frac) const;

    /// Delta^{(n)}(z) = f^n(z) - z as a compensated Birkhoff sum along the
    /// torus orbit, forward index order.
    Vec2 iterate_displacement(Vec2 z, long n) const;

    /// Ad_t(f) = T_t^{-1} o f o T_t.
    LiftedTorusMap conjugate(Vec2 t) const;

    double sup_norm_bound() const { return disp_.sup_norm_bound(); }

    /// Base rotation a of a triangular (skew) map, or alpha.x of a translation.
    double base_rotation() const { return disp_.constant_term().x; }

    void check_horizon(long n) const;

private:
    LiftedTorusMap(TrigPoly2 disp, InverseMode mode);
    Vec2 solve_preimage(Vec2 w) const;

    TrigPoly2 disp_;
    InverseMode mode_ = InverseMode::exact_translation;
    double contraction_ = 0.0;
    long horizon_cap_ = kDefaultHorizonCap;
    InversionOptions inversion_;
};

/// Orbit of a torus point, tracked as a reduced point with Kahan compensation
/// and accompanied by the compensated Birkhoff sum of the displacement.
class TorusOrbit {
public:
    TorusOrbit(const LiftedTorusMap& map, Vec2 start)
        : map_(&map), point_(wrap(start)) {}

    /// Advances one step forward; returns the displacement used.
    Vec2 forward() {
        const Vec2 d = map_->displacement_reduced(point_);
        move(d);
        return d;
    }

    /// Steps backward; returns Delta at the new point (the preimage).
    Vec2 backward() {
        const Vec2 d = map_->inverse_displacement_reduced(point_);
        move(-d);
        return d;
    }

    Vec2 point() const { return point_; }

private:
    void move(Vec2 d) {
        const Vec2 y = d - comp_;
        const Vec2 t = point_ + y;
        comp_ = (t - point_) - y;
        point_ = wrap(t);
    }

    const LiftedTorusMap* map_;
    Vec2 point_;
    Vec2 comp_;
};

/// Partition of reduced torus points into classes whose orbit computations are
/// bitwise identical: coordinates the displacement never reads are ignored and
/// equal points are merged. Representatives are the first member in index order.
struct OrbitClasses {
    std::vector<Vec2> representatives;
    std::vector<std::uint32_t> class_of;
};

OrbitClasses orbit_classes(const LiftedTorusMap& map, std::span<const Vec2> reduced_points);

} // namespace rotdev
