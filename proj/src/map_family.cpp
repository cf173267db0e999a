#include "rotdev/map_family.hpp"

#include <cmath>
#include <cstdio>

#include "rotdev/errors.hpp"

namespace rotdev {

std::string to_string(FamilyTag tag) {
    switch (tag) {
    case FamilyTag::translation: return "translation";
    case FamilyTag::skew: return "skew";
    case FamilyTag::coboundary_skew: return "coboundary-skew";
    case FamilyTag::generic: return "generic";
    }
    return "unknown";
}

FamilyTag parse_family_tag(const std::string& s) {
    if (s == "translation") return FamilyTag::translation;
    if (s == "skew") return FamilyTag::skew;
    if (s == "coboundary-skew") return FamilyTag::coboundary_skew;
    if (s == "generic") return FamilyTag::generic;
    throw ConfigError("unknown map family '" + s + "'");
}

TrigPoly2 scalar_poly(const std::vector<ScalarTerm>& terms) {
    std::vector<TrigTerm> out;
    out.reserve(terms.size());
    for (const ScalarTerm& t : terms) out.push_back({t.k, 0, {0.0, t.cos_coef}, {0.0, t.sin_coef}});
    return TrigPoly2(out);
}

TrigPoly2 MapFamilySpec::forcing_poly() const {
    switch (tag) {
    case FamilyTag::skew:
        return scalar_poly(forcing);
    case FamilyTag::coboundary_skew: {
        const TrigPoly2 psi = scalar_poly(transfer);
        std::vector<TrigTerm> diff = psi.shifted({base, 0.0}).terms();
        for (const TrigTerm& t : psi.terms()) diff.push_back({t.kx, t.ky, -t.cos_coef, -t.sin_coef});
        return TrigPoly2(diff);
    }
    default:
        return {};
    }
}

LiftedTorusMap MapFamilySpec::instantiate() const {
    switch (tag) {
    case FamilyTag::translation:
        return LiftedTorusMap::translation(alpha);
    case FamilyTag::skew:
    case FamilyTag::coboundary_skew:
        return LiftedTorusMap::skew(base, forcing_poly());
    case FamilyTag::generic: {
        std::vector<TrigTerm> terms = periodic;
        terms.push_back({0, 0, alpha, {}});
        LiftedTorusMap map = LiftedTorusMap::generic(TrigPoly2(terms));
        if (map.inverse_mode() == InverseMode::newton && map.contraction_bound() >= 1.0) {
            char buf[128];
            std::snprintf(buf, sizeof buf, "generic family has contraction bound %.6g >= 1",
                          map.contraction_bound());
            throw ContractionViolated(buf);
        }
        return map;
    }
    }
    throw ConfigError("unhandled family");
}

std::string MapFamilySpec::canonical_string() const {
    std::string s = to_string(tag);
    char buf[256];
    std::snprintf(buf, sizeof buf, "|alpha=%.17g,%.17g|base=%.17g", alpha.x, alpha.y, base);
    s += buf;
    auto scalars = [&](const char* name, const std::vector<ScalarTerm>& v) {
        s += "|";
        s += name;
        for (const ScalarTerm& t : v) {
            std::snprintf(buf, sizeof buf, ";%d %.17g %.17g", t.k, t.cos_coef, t.sin_coef);
            s += buf;
        }
    };
    scalars("forcing", forcing);
    scalars("transfer", transfer);
    s += "|periodic";
    for (const TrigTerm& t : periodic) {
        std::snprintf(buf, sizeof buf, ";%d %d %.17g %.17g %.17g %.17g", t.kx, t.ky, t.cos_coef.x,
                      t.cos_coef.y, t.sin_coef.x, t.sin_coef.y);
        s += buf;
    }
    return s;
}

std::uint64_t MapFamilySpec::hash() const { return fnv1a(canonical_string()); }

double liouville_number(int terms) {
    double sum = 0.0;
    double fact = 1.0;
    for (int k = 1; k <= terms; ++k) {
        fact *= k;
        // 10^{-k!} underflows to 0 for k >= 7, which is harmless.
        sum += std::pow(10.0, -fact);
    }
    return sum;
}

double golden_mean() { return (std::sqrt(5.0) - 1.0) / 2.0; }

std::uint64_t fnv1a(const void* data, std::size_t size, std::uint64_t seed) {
    const auto* p = static_cast<const unsigned char*>(data);
    std::uint64_t h = seed;
    for (std::size_t i = 0; i < size; ++i) {
        h ^= p[i];
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::uint64_t fnv1a(const std::string& s) { return fnv1a(s.data(), s.size()); }

} // namespace rotdev
