#include "rotdev/skew_product.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

namespace rotdev {

CentralizedSkewProduct::CentralizedSkewProduct(LiftedTorusMap map, Vec2 rho_tilde)
    : map_(std::move(map)), rho_tilde_(rho_tilde), rho_(wrap(rho_tilde)) {}

CentralizedSkewProduct CentralizedSkewProduct::build(const LiftedTorusMap& map, Vec2 rho_tilde) {
    CentralizedSkewProduct sp(map, rho_tilde);
    double worst = 0.0;
    for (int a = 0; a < 16; ++a) {
        const Vec2 t{(a + 0.25) / 16.0, (15 - a + 0.5) / 16.0};
        for (int b = 0; b < 16; ++b) {
            const Vec2 z{-2.0 + b * 0.25 + 0.03125, 1.5 - b * 0.1875};
            worst = std::max(worst, norm(sp.fiber_map(t, z) - sp.closed_form(t, z, 1)));
        }
    }
    sp.self_test_residual_ = worst;
    return sp;
}

Vec2 CentralizedSkewProduct::fiber_map(Vec2 t, Vec2 z) const {
    return z + map_.eval_displacement(wrap(t) + z) - rho_tilde_;
}

LiftPoint CentralizedSkewProduct::fiber_map(Vec2 t, const LiftPoint& z) const {
    LiftPoint out = z;
    out.frac += map_.displacement_reduced(wrap(wrap(t) + z.frac)) - rho_tilde_;
    out.normalize();
    return out;
}

Vec2 CentralizedSkewProduct::fiber_map_inverse(Vec2 s, Vec2 w) const {
    const Vec2 d = map_.inverse_displacement_reduced(wrap(w + wrap(s) + rho_tilde_));
    return w + rho_tilde_ - d;
}

namespace {

// Kahan step on a cell + fraction point; comp carries the lost low-order bits.
void compensated_move(LiftPoint& p, Vec2& comp, Vec2 d) {
    const Vec2 y = d - comp;
    const Vec2 s = p.frac + y;
    comp = (s - p.frac) - y;
    p.frac = s;
    p.normalize();
}

void compensated_add(Vec2& z, Vec2& comp, Vec2 d) {
    const Vec2 y = d - comp;
    const Vec2 s = z + y;
    comp = (s - z) - y;
    z = s;
}

// frac(k * a) with the rounding error of the product folded back in.
double frac_multiple(long k, double a) {
    const double kd = static_cast<double>(k);
    const double p = kd * a;
    const double e = std::fma(kd, a, -p);
    return (p - std::floor(p)) + e;
}

} // namespace

Vec2 CentralizedSkewProduct::closed_form(Vec2 t, Vec2 z, long n) const {
    // f^n(z + t) - (z + t) on the cell + fraction representation.
    LiftPoint p = LiftPoint::from(z);
    p.frac += wrap(t);
    p.normalize();
    const LiftPoint start = p;
    Vec2 comp;
    if (n > 0) {
        for (long k = 0; k < n; ++k) compensated_move(p, comp, map_.displacement_reduced(p.frac));
    } else {
        for (long k = 0; k < -n; ++k) compensated_move(p, comp, -map_.inverse_displacement_reduced(p.frac));
    }
    const Vec2 moved = to_vec2(p.cell - start.cell) + ((p.frac - start.frac) - comp);
    return z + moved - static_cast<double>(n) * rho_tilde_;
}

Vec2 CentralizedSkewProduct::stepwise(Vec2 t, Vec2 z, long n) const {
    // Composes H_{t_k} one fibre at a time; only the increments are summed
    // with compensation.
    const Vec2 t0 = wrap(t);
    auto base_point = [&](long k) {
        return wrap(t0 + Vec2{frac_multiple(k, rho_.x), frac_multiple(k, rho_.y)});
    };
    Vec2 comp;
    if (n >= 0) {
        for (long k = 0; k < n; ++k)
            compensated_add(z, comp, map_.displacement_reduced(wrap(base_point(k) + wrap(z - comp))) - rho_tilde_);
    } else {
        for (long k = 1; k <= -n; ++k) {
            const Vec2 d =
                map_.inverse_displacement_reduced(wrap(base_point(-k) + wrap(wrap(z - comp) + wrap(rho_tilde_))));
            compensated_add(z, comp, rho_tilde_ - d);
        }
    }
    return z - comp;
}

Vec2 CentralizedSkewProduct::fiber_cocycle(Vec2 t, Vec2 z, long n, CocyclePath path) const {
    map_.check_horizon(n);
    if (n == 0) return z;
    return path == CocyclePath::closed_form ? closed_form(t, z, n) : stepwise(t, z, n);
}

LiftPoint CentralizedSkewProduct::fiber_cocycle(Vec2 t, const LiftPoint& z, long n) const {
    map_.check_horizon(n);
    LiftPoint p = z;
    p.frac += wrap(t);
    p.normalize();
    const LiftPoint start = p;
    if (n > 0) {
        for (long k = 0; k < n; ++k) p = map_.apply(p);
    } else {
        for (long k = 0; k < -n; ++k) p = map_.apply_inverse(p);
    }
    LiftPoint out = z;
    out.cell = out.cell + (p.cell - start.cell);
    out.frac += (p.frac - start.frac) - static_cast<double>(n) * rho_tilde_;
    out.normalize();
    return out;
}

double CentralizedSkewProduct::displacement_identity_residual(Vec2 t, Vec2 z, long n) const {
    const Vec2 lhs = fiber_cocycle(t, z, n, CocyclePath::closed_form) - z;
    const Vec2 rhs = map_.iterate_displacement(wrap(wrap(z) + wrap(t)), n) - static_cast<double>(n) * rho_tilde_;
    return norm(lhs - rhs);
}

} // namespace rotdev
