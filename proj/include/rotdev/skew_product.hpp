#pragma once

#include "rotdev/torus_map.hpp"

namespace rotdev {

enum class CocyclePath { closed_form, stepwise };

/// F(t, z) = (t + rho, H_t(z)) on T^2 x R^2 with
/// H_t(z) = z + Delta(t + pi(z)) - rho_tilde.
class CentralizedSkewProduct {
public:
    /// Assembles F and runs the n = 1 self-test on a 16 x 16 (t, z) sample.
    static CentralizedSkewProduct build(const LiftedTorusMap& map, Vec2 rho_tilde);

    const LiftedTorusMap& map() const { return map_; }
    Vec2 rho_tilde() const { return rho_tilde_; }
    Vec2 rho() const { return rho_; }
    /// Largest |fiber_map - closed form at n = 1| seen by build().
    double self_test_residual() const { return self_test_residual_; }

    Vec2 fiber_map(Vec2 t, Vec2 z) const;
    LiftPoint fiber_map(Vec2 t, const LiftPoint& z) const;
    /// H_s^{-1}(w) = f^{-1}(w + s + rho_tilde) - s.
    Vec2 fiber_map_inverse(Vec2 s, Vec2 w) const;

    /// H_t^{(n)}(z). closed_form follows one lift orbit of z + t; stepwise
    /// composes the fiber maps H_{t + k rho}.
    Vec2 fiber_cocycle(Vec2 t, Vec2 z, long n, CocyclePath path = CocyclePath::closed_form) const;
    LiftPoint fiber_cocycle(Vec2 t, const LiftPoint& z, long n) const;

    /// |H_t^{(n)}(z) - z - (Delta^{(n)}(pi(z) + t) - n rho_tilde)|, the two
    /// sides evaluated by independent code paths.
    double displacement_identity_residual(Vec2 t, Vec2 z, long n) const;

private:
    CentralizedSkewProduct(LiftedTorusMap map, Vec2 rho_tilde);
    Vec2 closed_form(Vec2 t, Vec2 z, long n) const;
    Vec2 stepwise(Vec2 t, Vec2 z, long n) const;

    LiftedTorusMap map_;
    Vec2 rho_tilde_;
    Vec2 rho_;
    double self_test_residual_ = 0.0;
};

/// Streams g_n(w) = <H_t^{(n)}(z) - z, v> for w = t + pi(z), in either time
/// direction, along one torus orbit with compensated summation.
class CenteredOrbit {
public:
    CenteredOrbit(const CentralizedSkewProduct& sp, Vec2 w, Vec2 v)
        : orbit_(sp.map(), w), v_(v), drift_(dot(sp.rho_tilde(), v)) {}

    /// g_{k+1} after the k-th call.
    double forward() {
        sum_.add(dot(orbit_.forward(), v_) - drift_);
        return sum_.value();
    }
    /// g_{-(k+1)} after the k-th call.
    double backward() {
        sum_.add(drift_ - dot(orbit_.backward(), v_));
        return sum_.value();
    }

private:
    TorusOrbit orbit_;
    Vec2 v_;
    double drift_;
    CompensatedSum sum_;
};

} // namespace rotdev
