#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace rproj {

/// Planar vector / point.
struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    constexpr Vec2 operator+(Vec2 o) const noexcept { return {x + o.x, y + o.y}; }
    constexpr Vec2 operator-(Vec2 o) const noexcept { return {x - o.x, y - o.y}; }
    constexpr Vec2 operator*(double s) const noexcept { return {x * s, y * s}; }
    constexpr bool operator==(const Vec2&) const = default;

    double norm() const noexcept { return std::hypot(x, y); }
    constexpr double dot(Vec2 o) const noexcept { return x * o.x + y * o.y; }
    constexpr double cross(Vec2 o) const noexcept { return x * o.y - y * o.x; }
};

inline double distance(Vec2 a, Vec2 b) noexcept { return (a - b).norm(); }

inline Vec2 unit_vector(double angle) noexcept { return {std::cos(angle), std::sin(angle)}; }

/// A point z = (x1, x2, r) of R^3. When r > 0 it also names the planar
/// circle S((x1, x2), r). Coordinates are always finite.
class Point3 {
public:
    constexpr Point3() = default;

    Point3(double x1, double x2, double r) : x1_(x1), x2_(x2), r_(r) {
        if (!std::isfinite(x1) || !std::isfinite(x2) || !std::isfinite(r))
            throw std::invalid_argument("Point3: non-finite coordinate");
    }

    constexpr double x1() const noexcept { return x1_; }
    constexpr double x2() const noexcept { return x2_; }
    constexpr double r() const noexcept { return r_; }
    constexpr Vec2 x() const noexcept { return {x1_, x2_}; }

    /// |x| = sqrt(x1^2 + x2^2), the planar part only.
    double planar_norm() const noexcept { return std::hypot(x1_, x2_); }
    double norm() const noexcept { return std::hypot(x1_, x2_, r_); }

    constexpr double dot(const Point3& o) const noexcept {
        return x1_ * o.x1_ + x2_ * o.x2_ + r_ * o.r_;
    }

    Point3 operator-(const Point3& o) const { return {x1_ - o.x1_, x2_ - o.x2_, r_ - o.r_}; }
    Point3 operator+(const Point3& o) const { return {x1_ + o.x1_, x2_ + o.x2_, r_ + o.r_}; }
    Point3 operator*(double s) const { return {x1_ * s, x2_ * s, r_ * s}; }

    bool operator==(const Point3&) const = default;

    bool is_zero() const noexcept { return x1_ == 0.0 && x2_ == 0.0 && r_ == 0.0; }

private:
    double x1_ = 0.0;
    double x2_ = 0.0;
    double r_ = 0.0;
};

inline double distance(const Point3& a, const Point3& b) { return (a - b).norm(); }

} // namespace rproj
