#pragma once

#include "rproj/curve.hpp"
#include "rproj/point.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <vector>

namespace rproj {

/// Planar circle S(center, radius), radius > 0.
class Circle {
public:
    Circle(Vec2 center, double radius) : center_(center), radius_(radius) {
        if (!(radius > 0.0) || !std::isfinite(radius) || !std::isfinite(center.x) || !std::isfinite(center.y))
            throw std::invalid_argument("Circle: radius must be positive and finite");
    }

    /// The circle S(x, r) named by z = (x, r).
    explicit Circle(const Point3& z) : Circle(z.x(), z.r()) {}

    Vec2 center() const noexcept { return center_; }
    double radius() const noexcept { return radius_; }
    Point3 as_point() const { return {center_.x, center_.y, radius_}; }

    Vec2 point_at(double angle) const noexcept { return center_ + unit_vector(angle) * radius_; }

    /// Signed offset |p - center| - radius.
    double radial_offset(Vec2 p) const noexcept { return distance(p, center_) - radius_; }

    /// Membership in the delta-annulus S^delta.
    bool annulus_contains(Vec2 p, double delta) const noexcept { return std::abs(radial_offset(p)) <= delta; }

    bool operator==(const Circle&) const = default;

private:
    Vec2 center_;
    double radius_;
};

/// The parameter region B0 = {|x| <= 1/4, 1/2 <= r <= 2}.
inline bool in_B0(const Point3& z) noexcept {
    return z.planar_norm() <= 0.25 && z.r() >= 0.5 && z.r() <= 2.0;
}

struct IncidenceParams {
    double t;           ///< |z1 - z2| in R^3
    double delta_prime; ///< ||x1 - x2| - |r1 - r2||
};

inline IncidenceParams incidence_params(const Point3& z1, const Point3& z2) {
    if (z1 == z2) throw std::invalid_argument("incidence_params: identical points");
    const Point3 d = z1 - z2;
    return {d.norm(), delta_prime(d)};
}

inline IncidenceParams incidence_params(const Circle& c1, const Circle& c2) {
    return incidence_params(c1.as_point(), c2.as_point());
}

/// delta-incidence / internal tangency up to `tol`: Delta' <= tol.
inline bool internally_tangent(const Circle& c1, const Circle& c2, double tol) {
    if (tol < 0.0) throw std::invalid_argument("internally_tangent: negative tolerance");
    return delta_prime(c1.as_point() - c2.as_point()) <= tol;
}

/// zeta(x1, x2) = x1 + sgn(r1 - r2) r1 (x2 - x1)/|x2 - x1|: the point of c1
/// where near-internally-tangent annuli meet.
inline Vec2 zeta_point(const Circle& c1, const Circle& c2) {
    const Vec2 d = c2.center() - c1.center();
    const double len = d.norm();
    if (len == 0.0) throw std::domain_error("zeta_point: coincident centres");
    if (c1.radius() == c2.radius()) throw std::domain_error("zeta_point: equal radii, sign undefined");
    const double sgn = c1.radius() > c2.radius() ? 1.0 : -1.0;
    return c1.center() + d * (sgn * c1.radius() / len);
}

/// Uniform point of the annulus S^delta(c).
template <class Rng>
Vec2 sample_annulus(const Circle& c, double delta, Rng& rng) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double inner = std::max(0.0, c.radius() - delta);
    const double outer = c.radius() + delta;
    const double angle = two_pi * unit(rng);
    const double rad = std::sqrt(inner * inner + (outer * outer - inner * inner) * unit(rng));
    return c.center() + unit_vector(angle) * rad;
}

/// Draws n uniform points of S^delta(c1) and keeps those also in S^delta(c2).
/// Brute-force oracle for the annulus-intersection geometry.
template <class Rng>
std::vector<Vec2> annulus_intersection_samples(const Circle& c1, const Circle& c2, double delta, std::size_t n,
                                               Rng& rng) {
    if (!(delta > 0.0) || n == 0) throw std::invalid_argument("annulus_intersection_samples: need delta > 0, n >= 1");
    std::vector<Vec2> kept;
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2 p = sample_annulus(c1, delta, rng);
        if (c2.annulus_contains(p, delta)) kept.push_back(p);
    }
    return kept;
}

/// Sample count resolving features of width delta: (perimeter / delta) * oversampling.
inline std::size_t annulus_sample_count(const Circle& c, double delta, double oversampling = 8.0) {
    return static_cast<std::size_t>(std::ceil(two_pi * c.radius() / delta * oversampling));
}

/// Shape statistics of a sampled annulus intersection, in the units of the
/// circle-intersection bounds.
struct IntersectionShape {
    std::size_t kept = 0;
    double max_dist_to_zeta = 0.0; ///< max |p - zeta| over kept points
    double max_lobe_arc = 0.0;     ///< max over the two lobes of (angular extent on c2) * r2
    double area = 0.0;             ///< kept fraction * |S^delta(c1)|
};

/// Splits the kept points into the two lobes on either side of the line
/// through the centres and measures each lobe's angular extent on c2.
inline IntersectionShape intersection_shape(const Circle& c1, const Circle& c2, double delta,
                                            const std::vector<Vec2>& kept, std::size_t drawn) {
    IntersectionShape s;
    s.kept = kept.size();
    if (kept.empty()) return s;
    const Vec2 zeta = zeta_point(c1, c2);
    const Vec2 axis = c2.center() - c1.center();
    const double axis_angle = std::atan2(axis.y, axis.x);
    double lo[2] = {std::numbers::pi, std::numbers::pi};
    double hi[2] = {-std::numbers::pi, -std::numbers::pi};
    for (const Vec2& p : kept) {
        s.max_dist_to_zeta = std::max(s.max_dist_to_zeta, distance(p, zeta));
        const Vec2 rel = p - c2.center();
        const double a = angle_diff(std::atan2(rel.y, rel.x), axis_angle);
        const int side = axis.cross(p - c1.center()) >= 0.0 ? 0 : 1;
        // angles of one lobe live in [0, pi] (or [-pi, 0]); fold the seam at +-pi
        const double folded = side == 0 ? (a < -0.5 * std::numbers::pi ? a + two_pi : a)
                                        : (a > 0.5 * std::numbers::pi ? a - two_pi : a);
        lo[side] = std::min(lo[side], folded);
        hi[side] = std::max(hi[side], folded);
    }
    for (int side = 0; side < 2; ++side)
        if (hi[side] >= lo[side]) s.max_lobe_arc = std::max(s.max_lobe_arc, (hi[side] - lo[side]) * c2.radius());
    const double inner = std::max(0.0, c1.radius() - delta);
    const double outer = c1.radius() + delta;
    const double annulus_area = std::numbers::pi * (outer * outer - inner * inner);
    s.area = annulus_area * static_cast<double>(kept.size()) / static_cast<double>(drawn);
    return s;
}

} // namespace rproj
