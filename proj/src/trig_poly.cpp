#include "rotdev/trig_poly.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <utility>

namespace rotdev {

double sigma_max(Vec2 c, Vec2 s) {
    // Eigenvalues of the Gram matrix [[c.c, c.s], [c.s, s.s]].
    const double a = dot(c, c);
    const double b = dot(c, s);
    const double d = dot(s, s);
    const double half_tr = 0.5 * (a + d);
    const double disc = std::sqrt(0.25 * (a - d) * (a - d) + b * b);
    return std::sqrt(std::max(0.0, half_tr + disc));
}

TrigPoly2::TrigPoly2(std::span<const TrigTerm> terms) { canonicalize(terms); }

TrigPoly2 TrigPoly2::constant(Vec2 c) {
    const TrigTerm t{0, 0, c, {}};
    return TrigPoly2(std::span<const TrigTerm>(&t, 1));
}

void TrigPoly2::canonicalize(std::span<const TrigTerm> terms) {
    std::map<std::pair<int, int>, TrigTerm> merged;
    constant_ = {};
    for (TrigTerm t : terms) {
        if (t.kx == 0 && t.ky == 0) {
            // sin(0) = 0
            constant_ += t.cos_coef;
            continue;
        }
        if (t.kx < 0 || (t.kx == 0 && t.ky < 0)) {
            t.kx = -t.kx;
            t.ky = -t.ky;
            t.sin_coef = -t.sin_coef;
        }
        auto [it, fresh] = merged.try_emplace({t.kx, t.ky}, t);
        if (!fresh) {
            it->second.cos_coef += t.cos_coef;
            it->second.sin_coef += t.sin_coef;
        }
    }
    terms_.clear();
    degree_ = 0;
    depends_x_ = depends_y_ = false;
    for (const auto& [k, t] : merged) {
        if (t.cos_coef == Vec2{} && t.sin_coef == Vec2{}) continue;
        terms_.push_back(t);
        degree_ = std::max(degree_, std::max(std::abs(t.kx), std::abs(t.ky)));
        depends_x_ |= t.kx != 0;
        depends_y_ |= t.ky != 0;
    }
}

Vec2 TrigPoly2::eval_reduced(Vec2 z) const {
    Vec2 acc = constant_;
    for (const TrigTerm& t : terms_) {
        const double phase = kTwoPi * (t.kx * z.x + t.ky * z.y);
        const double c = std::cos(phase);
        const double s = std::sin(phase);
        acc.x += t.cos_coef.x * c + t.sin_coef.x * s;
        acc.y += t.cos_coef.y * c + t.sin_coef.y * s;
    }
    return acc;
}

double TrigPoly2::sup_norm_bound() const {
    double bound = norm(constant_);
    for (const TrigTerm& t : terms_) bound += sigma_max(t.cos_coef, t.sin_coef);
    return bound;
}

double TrigPoly2::lipschitz_bound() const {
    double bound = 0.0;
    for (const TrigTerm& t : terms_)
        bound += kTwoPi * std::hypot(double(t.kx), double(t.ky)) * sigma_max(t.cos_coef, t.sin_coef);
    return bound;
}

TrigPoly2 TrigPoly2::shifted(Vec2 shift) const {
    std::vector<TrigTerm> out;
    out.reserve(terms_.size() + 1);
    out.push_back({0, 0, constant_, {}});
    for (const TrigTerm& t : terms_) {
        // cos(a+b) = cos a cos b - sin a sin b ; sin(a+b) = sin a cos b + cos a sin b
        const double b = kTwoPi * (t.kx * wrap_unit(shift.x) + t.ky * wrap_unit(shift.y));
        const double cb = std::cos(b);
        const double sb = std::sin(b);
        out.push_back({t.kx, t.ky, t.cos_coef * cb + t.sin_coef * sb, t.sin_coef * cb - t.cos_coef * sb});
    }
    return TrigPoly2(out);
}

TrigPoly2 TrigPoly2::zero_mean() const {
    TrigPoly2 out = *this;
    out.constant_ = {};
    return out;
}

TrigPoly2 TrigPoly2::operator+(const TrigPoly2& o) const {
    std::vector<TrigTerm> all = terms_;
    all.insert(all.end(), o.terms_.begin(), o.terms_.end());
    all.push_back({0, 0, constant_ + o.constant_, {}});
    return TrigPoly2(all);
}

std::string TrigPoly2::canonical_string() const {
    std::string out;
    char buf[256];
    std::snprintf(buf, sizeof buf, "0 0 %.17g %.17g 0 0", constant_.x, constant_.y);
    out += buf;
    for (const TrigTerm& t : terms_) {
        std::snprintf(buf, sizeof buf, "; %d %d %.17g %.17g %.17g %.17g", t.kx, t.ky, t.cos_coef.x,
                      t.cos_coef.y, t.sin_coef.x, t.sin_coef.y);
        out += buf;
    }
    return out;
}

} // namespace rotdev
