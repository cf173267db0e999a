#include <doctest.h>

#include <random>

#include "families.hpp"
#include "oracles.hpp"
#include "rotdev/errors.hpp"
#include "rotdev/invariants.hpp"
#include "rotdev/torus_map.hpp"

using namespace rotdev;

TEST_SUITE("torus_maps") {

TEST_CASE("trig poly is periodic and its sup bound holds") {
    const TrigTerm terms[] = {{1, 0, {0.3, -0.2}, {0.1, 0.4}}, {2, -1, {0.05, 0.0}, {0.0, 0.25}}, {0, 0, {1.0, 2.0}, {}}};
    const TrigPoly2 p(terms);
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-5.0, 5.0);
    double seen = 0.0;
    for (int k = 0; k < 2000; ++k) {
        const Vec2 z{u(rng), u(rng)};
        const Vec2 a = p(z);
        seen = std::max(seen, norm(a));
        // shifting by an integer leaves the reduced point unchanged
        CHECK(p.eval_reduced(wrap(z)) == a);
    }
    CHECK(seen <= p.sup_norm_bound());
    // constant plus per-frequency sigma_max is never looser than the coefficient sum
    double coef_sum = std::hypot(1.0, 2.0);
    coef_sum += std::hypot(0.3, -0.2) + std::hypot(0.1, 0.4) + 0.05 + 0.25;
    CHECK(p.sup_norm_bound() <= coef_sum + 1e-15);
}

TEST_CASE("k and -k fold into one canonical term") {
    const TrigTerm a[] = {{1, 2, {1.0, 0.0}, {0.0, 1.0}}, {-1, -2, {1.0, 0.0}, {0.0, 1.0}}};
    const TrigTerm b[] = {{1, 2, {2.0, 0.0}, {0.0, 0.0}}};
    CHECK(TrigPoly2(a).canonical_string() == TrigPoly2(b).canonical_string());
}

TEST_CASE("integer equivariance is exact on every family") {
    for (const auto& spec : {fam::translation(), fam::skew(), fam::coboundary(), fam::liouville(), fam::generic()}) {
        const auto c = check_integer_equivariance(spec.instantiate());
        CAPTURE(to_string(spec.tag));
        CHECK(c.value == 0.0);
    }
}

TEST_CASE("inverse round trip and inverse modes") {
    CHECK(fam::translation().instantiate().inverse_mode() == InverseMode::exact_translation);
    CHECK(fam::coboundary().instantiate().inverse_mode() == InverseMode::exact_triangular);
    CHECK(fam::generic().instantiate().inverse_mode() == InverseMode::newton);
    for (const auto& spec : {fam::translation(), fam::skew(), fam::coboundary(), fam::generic()}) {
        const auto c = check_inversion_round_trip(spec.instantiate(), 64);
        CAPTURE(c.value);
        CHECK(c.passed);
    }
}

TEST_CASE("newton inversion refuses a non-contraction") {
    auto spec = fam::generic();
    spec.periodic = {{0, 1, {0.0, 0.0}, {0.2, 0.0}}}; // Lipschitz 0.4 pi > 1
    CHECK_THROWS_AS(spec.instantiate(), ContractionViolated);
}

TEST_CASE("cocycle law") {
    for (const auto& spec : {fam::skew(), fam::coboundary(), fam::generic()}) {
        const auto c = check_cocycle_law(spec.instantiate(), 6);
        CAPTURE(c.value);
        CHECK(c.passed);
    }
}

TEST_CASE("Birkhoff sums match direct summation") {
    const auto map = fam::liouville().instantiate();
    const long double a = rotdev::liouville_number(6);
    for (double x : {0.0, 0.125, 0.37, 0.9}) {
        for (long n : {1L, 10L, 999L, -500L}) {
            const Vec2 d = map.iterate_displacement({x, 0.25}, n);
            const long double ref = oracle::birkhoff([](long double t) { return std::sin(2 * oracle::kPi * t); }, a, x, n);
            CHECK(std::fabs(d.y - static_cast<double>(ref)) < 1e-11);
            CHECK(std::fabs(d.x - static_cast<double>(n * a)) < 1e-11);
        }
    }
}

TEST_CASE("coboundary sums telescope") {
    const auto map = fam::coboundary().instantiate();
    const long double a = golden_mean();
    for (double x : {0.01, 0.33, 0.5, 0.77}) {
        for (long n : {3L, 100L, 10000L, -7L}) {
            const double ref = static_cast<double>(oracle::coboundary_sum(x, a, n));
            CHECK(std::fabs(map.iterate_displacement({x, 0.0}, n).y - ref) < 1e-10);
        }
    }
}

TEST_CASE("conjugation shifts the displacement") {
    CHECK(check_conjugation(fam::generic().instantiate()).passed);
    CHECK(check_conjugation(fam::coboundary().instantiate()).passed);
}

TEST_CASE("horizon cap is enforced") {
    const auto map = fam::skew().instantiate().with_horizon_cap(50);
    CHECK_NOTHROW(map.iterate_displacement({0.1, 0.1}, 50));
    CHECK_THROWS_AS(map.iterate_displacement({0.1, 0.1}, 51), PreconditionError);
}

TEST_CASE("orbit classes merge points the displacement cannot tell apart") {
    const auto map = fam::skew().instantiate();
    std::vector<Vec2> pts{{0.25, 0.1}, {0.25, 0.9}, {0.5, 0.1}};
    const auto c = orbit_classes(map, pts);
    CHECK(c.representatives.size() == 2);
    CHECK(c.class_of[0] == c.class_of[1]);
    CHECK(c.class_of[0] != c.class_of[2]);
}

} // TEST_SUITE
