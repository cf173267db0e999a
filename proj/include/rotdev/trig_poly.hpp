#pragma once

#include <span>
#include <string>
#include <vector>

#include "rotdev/vec2.hpp"

namespace rotdev {

/// One frequency of a real trigonometric polynomial T^2 -> R^2:
///   cos_coef * cos(2 pi <k,z>) + sin_coef * sin(2 pi <k,z>).
struct TrigTerm {
    int kx = 0;
    int ky = 0;
    Vec2 cos_coef;
    Vec2 sin_coef;
};

/// Finite real trigonometric polynomial T^2 -> R^2.
///
/// Terms are kept in a canonical form: frequencies k and -k are folded
/// together, duplicates are merged and the zero frequency is stored as a
/// constant. Evaluation only ever sees integer frequencies, so it is
/// Z^2-periodic by construction.
class TrigPoly2 {
public:
    TrigPoly2() = default;
    explicit TrigPoly2(std::span<const TrigTerm> terms);

    static TrigPoly2 constant(Vec2 c);

    /// Value at z (any real point). z is reduced to [0,1)^2 first, so points
    /// that differ by an exactly representable p in Z^2 give identical values.
    Vec2 operator()(Vec2 z) const { return eval_reduced(wrap(z)); }

    /// Value at a point already reduced to [0,1)^2.
    Vec2 eval_reduced(Vec2 frac) const;

    const std::vector<TrigTerm>& terms() const { return terms_; }
    Vec2 constant_term() const { return constant_; }
    int degree() const { return degree_; }

    /// Rigorous bound >= sup_z |P(z)|: the constant norm plus, per frequency,
    /// the exact sup of |c cos + s sin| (largest singular value of [c s]).
    double sup_norm_bound() const;

    /// Lipschitz bound of the non-constant part, sum of 2 pi |k| sigma_max([c s]).
    double lipschitz_bound() const;

    /// z -> P(z + shift).
    TrigPoly2 shifted(Vec2 shift) const;

    /// The same polynomial without its constant term.
    TrigPoly2 zero_mean() const;

    /// True when some term has a nonzero x (resp. y) frequency.
    bool depends_on_x() const { return depends_x_; }
    bool depends_on_y() const { return depends_y_; }

    TrigPoly2 operator+(const TrigPoly2& o) const;

    /// Canonical text form "kx ky cx cy sx sy; ..." with 17 significant digits.
    std::string canonical_string() const;

private:
    void canonicalize(std::span<const TrigTerm> terms);

    std::vector<TrigTerm> terms_;
    Vec2 constant_;
    int degree_ = 0;
    bool depends_x_ = false;
    bool depends_y_ = false;
};

/// Largest singular value of the 2x2 matrix with columns c and s.
double sigma_max(Vec2 c, Vec2 s);

} // namespace rotdev
