#include <doctest.h>

#include "families.hpp"
#include "rotdev/invariants.hpp"
#include "rotdev/skew_product.hpp"

using namespace rotdev;

namespace {

CentralizedSkewProduct make(const MapFamilySpec& spec, Vec2 rho_tilde) {
    return CentralizedSkewProduct::build(spec.instantiate(), rho_tilde);
}

} // namespace

TEST_SUITE("skew_product") {

TEST_CASE("n = 1 matches the fibre map") {
    const auto sp = make(fam::generic(), {0.25, golden_mean()});
    CHECK(sp.self_test_residual() <= 1e-12);
    CHECK(sp.rho() == wrap(sp.rho_tilde()));
    const Vec2 t{0.2, 0.9}, z{-3.4, 1.25};
    CHECK(norm(sp.fiber_cocycle(t, z, 1) - sp.fiber_map(t, z)) <= 1e-12);
    CHECK(sp.fiber_cocycle(t, z, 0) == z);
}

TEST_CASE("fibre inverse undoes the fibre map") {
    for (const auto& spec : {fam::skew(), fam::coboundary(), fam::generic()}) {
        const auto sp = make(spec, spec.instantiate().displacement_field().constant_term());
        for (double a : {0.0, 0.3, 0.71})
            for (double b : {-2.5, 0.1, 7.9}) {
                const Vec2 t{a, 1.0 - a}, z{b, -b};
                const Vec2 w = sp.fiber_map(t, z);
                CHECK(norm(sp.fiber_map_inverse(t, w) - z) <= 1e-10);
            }
    }
}

TEST_CASE("translation cocycle is the identity") {
    const auto sp = make(fam::translation(), {0.3, 0.7});
    const Vec2 z{1.5, -2.25};
    for (long n : {1L, 10L, 1000L, -1000L}) CHECK(norm(sp.fiber_cocycle({0.4, 0.1}, z, n) - z) <= 1e-12);
}

TEST_CASE("closed form and stepwise paths agree") {
    struct Case {
        MapFamilySpec spec;
        Vec2 rho;
    };
    const Case cases[] = {{fam::translation(), {0.3, 0.7}},
                          {fam::skew(), {0.5, 0.0}},
                          {fam::coboundary(), {golden_mean(), 0.0}},
                          {fam::liouville(), {liouville_number(6), 0.0}},
                          {fam::generic(), {0.25, golden_mean()}}};
    for (const auto& c : cases) {
        const auto sp = make(c.spec, c.rho);
        CAPTURE(to_string(c.spec.tag));
        const auto pe = check_path_equivalence(sp, 6, 1000);
        CAPTURE(pe.value);
        CHECK(pe.passed);
        const auto di = check_displacement_identity(sp, 6, 1000);
        CAPTURE(di.value);
        CHECK(di.passed);
    }
}

TEST_CASE("lift point cocycle commutes with deck translations") {
    const auto sp = make(fam::generic(), {0.25, golden_mean()});
    const LiftPoint z = LiftPoint::from({0.3, 0.6});
    const IVec2 p{5, -3};
    const LiftPoint a = sp.fiber_cocycle({0.1, 0.2}, z, 37);
    const LiftPoint b = sp.fiber_cocycle({0.1, 0.2}, z + p, 37);
    CHECK(b == a + p);
}

TEST_CASE("centered orbit streams the projected cocycle") {
    const auto sp = make(fam::coboundary(), {golden_mean(), 0.0});
    const Vec2 v{0.0, 1.0};
    const Vec2 w{0.37, 0.0};
    CenteredOrbit fwd(sp, w, v), bwd(sp, w, v);
    for (long n = 1; n <= 300; ++n) {
        const double gf = fwd.forward();
        const double gb = bwd.backward();
        if (n % 50) continue;
        CHECK(std::fabs(gf - dot(sp.fiber_cocycle(w, Vec2{}, n), v)) <= 1e-9);
        CHECK(std::fabs(gb - dot(sp.fiber_cocycle(w, Vec2{}, -n), v)) <= 1e-9);
    }
}

} // TEST_SUITE
