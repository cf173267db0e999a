#pragma once

#include <cmath>
#include <cstdint>

namespace rotdev {

/// Point or vector of the plane.
struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    constexpr Vec2() = default;
    constexpr Vec2(double x_, double y_) : x(x_), y(y_) {}

    constexpr Vec2& operator+=(Vec2 o) { x += o.x; y += o.y; return *this; }
    constexpr Vec2& operator-=(Vec2 o) { x -= o.x; y -= o.y; return *this; }
    constexpr Vec2& operator*=(double s) { x *= s; y *= s; return *this; }
    friend constexpr Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
    friend constexpr Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
    friend constexpr Vec2 operator-(Vec2 a) { return {-a.x, -a.y}; }
    friend constexpr Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
    friend constexpr Vec2 operator*(Vec2 a, double s) { return {s * a.x, s * a.y}; }
    friend constexpr Vec2 operator/(Vec2 a, double s) { return {a.x / s, a.y / s}; }
    friend constexpr bool operator==(Vec2, Vec2) = default;
};

inline constexpr double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }
/// v^perp = (-b, a) for v = (a, b).
inline constexpr Vec2 perp(Vec2 v) { return {-v.y, v.x}; }

/// Integer vector, used for deck translations p in Z^2.
struct IVec2 {
    std::int64_t x = 0;
    std::int64_t y = 0;
    friend constexpr bool operator==(IVec2, IVec2) = default;
    friend constexpr IVec2 operator+(IVec2 a, IVec2 b) { return {a.x + b.x, a.y + b.y}; }
    friend constexpr IVec2 operator-(IVec2 a, IVec2 b) { return {a.x - b.x, a.y - b.y}; }
};

inline constexpr Vec2 to_vec2(IVec2 p) {
    return {static_cast<double>(p.x), static_cast<double>(p.y)};
}

/// Reduces a real number to [0,1). The subtraction of the floor is exact.
inline double wrap_unit(double a) {
    double r = a - std::floor(a);
    return r >= 1.0 ? 0.0 : r;
}

/// Canonical representative of pi(z) in [0,1)^2.
inline Vec2 wrap(Vec2 z) { return {wrap_unit(z.x), wrap_unit(z.y)}; }

/// A point of the plane stored as integer cell plus fractional part in [0,1)^2.
/// Deck translations act on the integer part only, so f(z+p) = f(z)+p holds exactly.
struct LiftPoint {
    IVec2 cell;
    Vec2 frac;

    static LiftPoint from(Vec2 z) {
        const double fx = std::floor(z.x);
        const double fy = std::floor(z.y);
        LiftPoint p{{static_cast<std::int64_t>(fx), static_cast<std::int64_t>(fy)},
                    {z.x - fx, z.y - fy}};
        p.normalize();
        return p;
    }

    Vec2 to_vec2() const { return rotdev::to_vec2(cell) + frac; }

    /// Moves whole units from frac into cell so that frac lands in [0,1)^2.
    void normalize() {
        const double fx = std::floor(frac.x);
        const double fy = std::floor(frac.y);
        cell.x += static_cast<std::int64_t>(fx);
        cell.y += static_cast<std::int64_t>(fy);
        frac.x -= fx;
        frac.y -= fy;
        if (frac.x >= 1.0) { frac.x = 0.0; cell.x += 1; }
        if (frac.y >= 1.0) { frac.y = 0.0; cell.y += 1; }
    }

    friend LiftPoint operator+(LiftPoint a, IVec2 p) { a.cell = a.cell + p; return a; }
    friend bool operator==(const LiftPoint&, const LiftPoint&) = default;
};

/// Neumaier-compensated running sum.
class CompensatedSum {
public:
    void add(double v) {
        const double t = sum_ + v;
        if (std::fabs(sum_) >= std::fabs(v))
            comp_ += (sum_ - t) + v;
        else
            comp_ += (v - t) + sum_;
        sum_ = t;
    }
    double value() const { return sum_ + comp_; }
    void reset() { sum_ = 0.0; comp_ = 0.0; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

class CompensatedSum2 {
public:
    void add(Vec2 v) { x_.add(v.x); y_.add(v.y); }
    Vec2 value() const { return {x_.value(), y_.value()}; }

private:
    CompensatedSum x_;
    CompensatedSum y_;
};

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

} // namespace rotdev
