#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rotdev/torus_map.hpp"

namespace rotdev {

enum class FamilyTag { translation, skew, coboundary_skew, generic };

std::string to_string(FamilyTag tag);
FamilyTag parse_family_tag(const std::string& s);

/// One term k of a scalar trigonometric polynomial of x:
/// cos_coef cos(2 pi k x) + sin_coef sin(2 pi k x).
struct ScalarTerm {
    int k = 0;
    double cos_coef = 0.0;
    double sin_coef = 0.0;
};

/// Declarative description of a bundled map family.
///
///  translation      Delta = alpha
///  skew             (x,y) -> (x + base, y + forcing(x))
///  coboundary_skew  forcing = psi(x + base) - psi(x), psi the transfer function
///  generic          Delta = alpha + periodic(z), inverted numerically
struct MapFamilySpec {
    FamilyTag tag = FamilyTag::translation;
    Vec2 alpha;
    double base = 0.0;
    std::vector<ScalarTerm> forcing;
    std::vector<ScalarTerm> transfer;
    std::vector<TrigTerm> periodic;

    /// Throws ContractionViolated for a generic family whose periodic part is
    /// not a contraction.
    LiftedTorusMap instantiate() const;

    /// Scalar forcing as a TrigPoly2 (second component).
    TrigPoly2 forcing_poly() const;

    /// Stable textual description used for content hashing.
    std::string canonical_string() const;
    std::uint64_t hash() const;
};

TrigPoly2 scalar_poly(const std::vector<ScalarTerm>& terms);

/// sum_{k=1}^{terms} 10^{-k!}
double liouville_number(int terms);
double golden_mean();

/// FNV-1a 64-bit.
std::uint64_t fnv1a(const void* data, std::size_t size, std::uint64_t seed = 0xcbf29ce484222325ULL);
std::uint64_t fnv1a(const std::string& s);

} // namespace rotdev
