#include "rotdev/torus_map.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <unordered_map>

#include "rotdev/errors.hpp"

namespace rotdev {

std::string to_string(InverseMode m) {
    switch (m) {
    case InverseMode::exact_translation: return "exact-translation";
    case InverseMode::exact_triangular: return "exact-triangular";
    case InverseMode::newton: return "newton";
    }
    return "unknown";
}

LiftedTorusMap::LiftedTorusMap(TrigPoly2 disp, InverseMode mode)
    : disp_(std::move(disp)), mode_(mode), contraction_(disp_.lipschitz_bound()) {}

LiftedTorusMap LiftedTorusMap::translation(Vec2 alpha) {
    return LiftedTorusMap(TrigPoly2::constant(alpha), InverseMode::exact_translation);
}

LiftedTorusMap LiftedTorusMap::skew(double base, const TrigPoly2& forcing) {
    std::vector<TrigTerm> terms;
    terms.push_back({0, 0, {base, forcing.constant_term().y}, {}});
    for (const TrigTerm& t : forcing.terms()) {
        if (t.ky != 0)
            throw PreconditionError("skew forcing must depend on x only");
        terms.push_back({t.kx, 0, {0.0, t.cos_coef.y}, {0.0, t.sin_coef.y}});
    }
    TrigPoly2 disp(terms);
    if (!disp.depends_on_x())
        return LiftedTorusMap(std::move(disp), InverseMode::exact_translation);
    return LiftedTorusMap(std::move(disp), InverseMode::exact_triangular);
}

LiftedTorusMap LiftedTorusMap::generic(const TrigPoly2& displacement) {
    if (displacement.terms().empty())
        return LiftedTorusMap(displacement, InverseMode::exact_translation);
    return LiftedTorusMap(displacement, InverseMode::newton);
}

LiftedTorusMap LiftedTorusMap::with_horizon_cap(long cap) const {
    LiftedTorusMap out = *this;
    out.horizon_cap_ = cap;
    return out;
}

LiftedTorusMap LiftedTorusMap::with_inversion(InversionOptions opts) const {
    LiftedTorusMap out = *this;
    out.inversion_ = opts;
    return out;
}

LiftedTorusMap LiftedTorusMap::translated_lift(IVec2 p) const {
    LiftedTorusMap out = *this;
    out.disp_ = disp_ + TrigPoly2::constant(to_vec2(p));
    return out;
}

void LiftedTorusMap::check_horizon(long n) const {
    if (std::labs(n) > horizon_cap_) {
        char buf[128];
        std::snprintf(buf, sizeof buf, "iterate %ld exceeds horizon cap %ld", n, horizon_cap_);
        throw PreconditionError(buf);
    }
}

LiftPoint LiftedTorusMap::apply(const LiftPoint& z) const {
    LiftPoint out = z;
    out.frac += disp_.eval_reduced(z.frac);
    out.normalize();
    return out;
}

Vec2 LiftedTorusMap::solve_preimage(Vec2 w) const {
    if (contraction_ >= 1.0) {
        char buf[160];
        std::snprintf(buf, sizeof buf,
                      "numerical inversion needs contraction bound < 1, got %.6g", contraction_);
        throw ContractionViolated(buf);
    }
    // z = w - Delta(z) is a contraction with constant contraction_.
    Vec2 z = w - disp_(w);
    for (int it = 0; it < inversion_.max_iterations; ++it) {
        const Vec2 next = (1.0 - inversion_.damping) * z + inversion_.damping * (w - disp_(z));
        const double step = norm(next - z);
        z = next;
        if (step <= inversion_.tolerance) return z;
    }
    throw NoConvergence("fixed-point inversion did not converge within the iteration cap");
}

Vec2 LiftedTorusMap::inverse_displacement_reduced(Vec2 frac) const {
    switch (mode_) {
    case InverseMode::exact_translation:
        return disp_.constant_term();
    case InverseMode::exact_triangular: {
        const double a = disp_.constant_term().x;
        return disp_.eval_reduced({wrap_unit(frac.x - a), 0.0});
    }
    case InverseMode::newton: {
        const Vec2 z = solve_preimage(frac);
        return disp_(z);
    }
    }
    return {};
}

Vec2 LiftedTorusMap::apply_inverse(Vec2 w) const {
    switch (mode_) {
    case InverseMode::exact_translation:
        return w - disp_.constant_term();
    case InverseMode::exact_triangular: {
        const double x = w.x - disp_.constant_term().x;
        return {x, w.y - disp_({x, 0.0}).y};
    }
    case InverseMode::newton:
        return solve_preimage(w);
    }
    return w;
}

LiftPoint LiftedTorusMap::apply_inverse(const LiftPoint& w) const {
    LiftPoint out = w;
    out.frac = apply_inverse(w.frac);
    out.normalize();
    return out;
}

Vec2 LiftedTorusMap::iterate_displacement(Vec2 z, long n) const {
    check_horizon(n);
    CompensatedSum2 sum;
    TorusOrbit orbit(*this, z);
    if (n > 0) {
        for (long j = 0; j < n; ++j) sum.add(orbit.forward());
    } else {
        for (long j = 0; j < -n; ++j) sum.add(-orbit.backward());
    }
    return sum.value();
}

LiftedTorusMap LiftedTorusMap::conjugate(Vec2 t) const {
    LiftedTorusMap out = *this;
    out.disp_ = disp_.shifted(t);
    out.contraction_ = out.disp_.lipschitz_bound();
    return out;
}

namespace {

struct KeyHash {
    std::size_t operator()(const std::pair<std::uint64_t, std::uint64_t>& k) const {
        return std::hash<std::uint64_t>{}(k.first * 0x9e3779b97f4a7c15ULL ^ k.second);
    }
};

std::uint64_t bits(double v) {
    std::uint64_t b;
    std::memcpy(&b, &v, sizeof b);
    return b;
}

} // namespace

OrbitClasses orbit_classes(const LiftedTorusMap& map, std::span<const Vec2> reduced_points) {
    const bool use_x = map.displacement_field().depends_on_x();
    const bool use_y = map.displacement_field().depends_on_y();
    OrbitClasses out;
    out.class_of.resize(reduced_points.size());
    std::unordered_map<std::pair<std::uint64_t, std::uint64_t>, std::uint32_t, KeyHash> index;
    for (std::size_t i = 0; i < reduced_points.size(); ++i) {
        const Vec2 p = reduced_points[i];
        const std::pair<std::uint64_t, std::uint64_t> key{use_x ? bits(p.x + 0.0) : 0,
                                                          use_y ? bits(p.y + 0.0) : 0};
        auto [it, fresh] = index.try_emplace(key, static_cast<std::uint32_t>(out.representatives.size()));
        if (fresh) out.representatives.push_back(p);
        out.class_of[i] = it->second;
    }
    return out;
}

} // namespace rotdev
