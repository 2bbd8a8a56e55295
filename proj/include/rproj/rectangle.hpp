#pragma once

// (delta, t)-rectangles: delta-neighbourhoods of circular arcs of length
// sqrt(delta / t), anchored on a parent circle.

#include "rproj/circle.hpp"
#include "rproj/cloud.hpp"
#include "rproj/theta_interval.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

namespace rproj {

/// Default tangency / comparability constant C0.
inline constexpr double default_C0 = 4.0;

/// Interior samples per arc in the containment predicates (plus the two endpoints).
inline constexpr int default_arc_samples = 33;

namespace detail {
inline constexpr double containment_slack = 1e-12;
}

class DeltaTRect {
public:
    DeltaTRect(Circle parent, double anchor, double delta, double t)
        : parent_(parent), anchor_(wrap_angle(anchor)), delta_(delta), t_(t) {
        if (!(delta > 0.0) || !(delta <= t) || !(t <= 1.0))
            throw std::invalid_argument("DeltaTRect: need 0 < delta <= t <= 1");
    }

    const Circle& parent() const noexcept { return parent_; }
    double anchor() const noexcept { return anchor_; }
    double delta() const noexcept { return delta_; }
    double t() const noexcept { return t_; }

    double arc_length() const noexcept { return std::sqrt(delta_ / t_); }
    /// Angular half-width of the core arc on the parent.
    double half_angle() const noexcept { return arc_length() / (2.0 * parent_.radius()); }

    Vec2 midpoint() const noexcept { return parent_.point_at(anchor_); }

    /// Core-arc points: both endpoints and `interior` equally spaced points between.
    std::vector<Vec2> arc_samples(int interior = default_arc_samples) const {
        std::vector<Vec2> out;
        const int n = interior + 2;
        out.reserve(n);
        const double h = half_angle();
        for (int i = 0; i < n; ++i) out.push_back(parent_.point_at(anchor_ - h + 2.0 * h * i / (n - 1)));
        return out;
    }

    /// Membership in the rectangle (the delta-neighbourhood of the core arc).
    bool contains(Vec2 p) const noexcept;

    bool operator==(const DeltaTRect&) const = default;

private:
    Circle parent_;
    double anchor_;
    double delta_;
    double t_;
};

namespace detail {

/// Neighbourhood of radius `width` of an arc on a circle; the shape of a
/// (C delta, t)-rectangle used as a comparability witness.
struct ArcNeighbourhood {
    Vec2 center;
    double radius;
    double anchor;
    double half_angle;
    double width;

    double distance_to_arc(Vec2 q) const noexcept {
        const Vec2 rel = q - center;
        const double beta = std::atan2(rel.y, rel.x);
        if (std::abs(angle_diff(beta, anchor)) <= half_angle) return std::abs(rel.norm() - radius);
        const Vec2 e1 = center + unit_vector(anchor - half_angle) * radius;
        const Vec2 e2 = center + unit_vector(anchor + half_angle) * radius;
        return std::min(distance(q, e1), distance(q, e2));
    }
};

inline double circular_mean(double a, double b) noexcept {
    return std::atan2(std::sin(a) + std::sin(b), std::cos(a) + std::cos(b));
}

inline double angle_from(Vec2 center, Vec2 p) noexcept {
    const Vec2 d = p - center;
    return std::atan2(d.y, d.x);
}

/// Algebraic least-squares circle fit; nullopt for (near) collinear input.
inline std::optional<std::pair<Vec2, double>> fit_circle(const std::vector<Vec2>& pts) {
    if (pts.size() < 3) return std::nullopt;
    Vec2 mean{};
    for (const Vec2& p : pts) mean = mean + p;
    mean = mean * (1.0 / static_cast<double>(pts.size()));
    double suu = 0, svv = 0, suv = 0, suuu = 0, svvv = 0, suvv = 0, svuu = 0;
    for (const Vec2& p : pts) {
        const double u = p.x - mean.x;
        const double v = p.y - mean.y;
        suu += u * u;
        svv += v * v;
        suv += u * v;
        suuu += u * u * u;
        svvv += v * v * v;
        suvv += u * v * v;
        svuu += v * u * u;
    }
    const double det = suu * svv - suv * suv;
    const double scale = (suu + svv) * (suu + svv);
    if (!(std::abs(det) > 1e-14 * scale)) return std::nullopt;
    const double b1 = 0.5 * (suuu + suvv);
    const double b2 = 0.5 * (svvv + svuu);
    const double uc = (b1 * svv - b2 * suv) / det;
    const double vc = (suu * b2 - suv * b1) / det;
    const double n = static_cast<double>(pts.size());
    const double radius = std::sqrt(uc * uc + vc * vc + (suu + svv) / n);
    if (!std::isfinite(radius) || radius <= 0.0) return std::nullopt;
    return std::make_pair(Vec2{uc + mean.x, vc + mean.y}, radius);
}

} // namespace detail

inline bool DeltaTRect::contains(Vec2 p) const noexcept {
    const detail::ArcNeighbourhood self{parent_.center(), parent_.radius(), anchor_, half_angle(), delta_};
    return self.distance_to_arc(p) <= delta_;
}

/// C-tangency: S^{C delta}(c) contains R.
///
/// R is the delta-neighbourhood of its core arc, so the containment holds iff
/// every core-arc point lies within (C - 1) delta of c. The core arc is
/// checked at its endpoints and `interior` equally spaced points.
inline bool is_tangent(const Circle& c, const DeltaTRect& R, double C = default_C0,
                       int interior = default_arc_samples) {
    const double allowed = (C - 1.0) * R.delta() + detail::containment_slack;
    for (const Vec2& q : R.arc_samples(interior))
        if (std::abs(c.radial_offset(q)) > allowed) return false;
    return true;
}

namespace detail {

/// Witness of half-width C delta and core half-angle `half` centred at
/// `center`, with the radius and anchor that best fit `samples`: the radius
/// halves the spread of distances and the anchor bisects the angular span.
/// Returns the worst sample-to-arc distance.
inline double witness_error(Vec2 center, const std::vector<Vec2>& samples, double witness_arc, double width) {
    double dmin = INFINITY, dmax = 0.0;
    const double ref = angle_from(center, samples.front());
    double amin = 0.0, amax = 0.0;
    for (const Vec2& q : samples) {
        const double d = distance(q, center);
        dmin = std::min(dmin, d);
        dmax = std::max(dmax, d);
        const double a = angle_diff(angle_from(center, q), ref);
        amin = std::min(amin, a);
        amax = std::max(amax, a);
    }
    const double radius = 0.5 * (dmin + dmax);
    if (!(radius > 0.0)) return INFINITY;
    const ArcNeighbourhood w{center, radius, ref + 0.5 * (amin + amax), witness_arc / (2.0 * radius), width};
    double worst = 0.0;
    for (const Vec2& q : samples) worst = std::max(worst, w.distance_to_arc(q));
    return worst;
}

} // namespace detail

/// C-comparability: some (C delta, t)-rectangle contains both R1 and R2.
///
/// R_i lies in a (C delta, t)-rectangle W iff its core arc lies within
/// (C - 1) delta of W's core arc, which is checked on arc samples. Pairs
/// whose arcs spread wider than any witness can reach are rejected at once.
/// Otherwise witness centres are tried at both parents' centres and the
/// fitted circle's centre, then refined by a pattern search; for each centre
/// the radius and anchor are the best fit to the samples. A `true` is always
/// backed by an explicit witness; a `false` may miss an exotic one. Symmetric
/// by construction (inputs are put in a canonical order first).
inline bool comparable(const DeltaTRect& R1, const DeltaTRect& R2, double C = default_C0,
                       int interior = default_arc_samples) {
    if (R1.delta() != R2.delta() || R1.t() != R2.t())
        throw std::invalid_argument("comparable: rectangles must share (delta, t)");
    if (R1 == R2) return true;

    auto key = [](const DeltaTRect& R) {
        return std::array<double, 4>{R.parent().center().x, R.parent().center().y, R.parent().radius(), R.anchor()};
    };
    const bool swap = key(R2) < key(R1);
    const DeltaTRect& A = swap ? R2 : R1;
    const DeltaTRect& B = swap ? R1 : R2;

    const double delta = A.delta();
    const double witness_arc = std::sqrt(C * delta / A.t());
    const double allowed = (C - 1.0) * delta + detail::containment_slack;

    std::vector<Vec2> samples = A.arc_samples(interior);
    const std::vector<Vec2> more = B.arc_samples(interior);
    samples.insert(samples.end(), more.begin(), more.end());

    // any two points within `allowed` of a witness arc are at most this far apart
    const double reach = witness_arc + 2.0 * allowed;
    for (const Vec2& p : {samples.front(), samples[interior + 1]})
        for (const Vec2& q : more)
            if (distance(p, q) > reach) return false;

    auto error = [&](Vec2 c) { return detail::witness_error(c, samples, witness_arc, C * delta); };
    std::vector<Vec2> starts{A.parent().center(), B.parent().center()};
    const std::vector<Vec2> ea = A.arc_samples(1);
    const std::vector<Vec2> eb = B.arc_samples(1);
    std::vector<Vec2> anchors(ea.begin(), ea.end());
    anchors.insert(anchors.end(), eb.begin(), eb.end());
    if (const auto fit = detail::fit_circle(anchors)) starts.push_back(fit->first);

    Vec2 best = starts.front();
    double best_err = INFINITY;
    for (const Vec2& c : starts) {
        const double e = error(c);
        if (e <= allowed) return true;
        if (e < best_err) best = c, best_err = e;
    }
    // compass search on the centre
    const double scale = 0.5 * (A.parent().radius() + B.parent().radius());
    for (double step = 0.25 * scale; step > 1e-3 * delta;) {
        bool moved = false;
        for (const Vec2 d : {Vec2{1, 0}, Vec2{-1, 0}, Vec2{0, 1}, Vec2{0, -1}}) {
            const Vec2 c = best + d * step;
            const double e = error(c);
            if (e <= allowed) return true;
            if (e < best_err) {
                best = c, best_err = e, moved = true;
                break;
            }
        }
        if (!moved) step *= 0.5;
    }
    return false;
}

/// Rectangle witnessing the tangency of two delta-incident circles: on c1,
/// anchored at the direction of zeta(c1, c2), with t = |z1 - z2| unless an
/// explicit scale is given.
inline DeltaTRect rect_from_incident_pair(const Circle& c1, const Circle& c2, double delta,
                                          std::optional<double> t_override = std::nullopt) {
    const IncidenceParams p = incidence_params(c1.as_point(), c2.as_point());
    if (!(p.delta_prime <= delta)) throw std::invalid_argument("rect_from_incident_pair: circles not delta-incident");
    const double t = t_override.value_or(p.t);
    if (!(t >= delta)) throw std::invalid_argument("rect_from_incident_pair: t < delta");
    const Vec2 zeta = zeta_point(c1, c2);
    return DeltaTRect(c1, detail::angle_from(c1.center(), zeta), delta, t);
}

/// Greedy pass in input order: keep a rectangle iff it is C-incomparable with
/// every rectangle kept so far.
inline std::vector<DeltaTRect> max_incomparable_family(const std::vector<DeltaTRect>& rects,
                                                       double C = default_C0) {
    std::vector<DeltaTRect> kept;
    for (const DeltaTRect& R : rects) {
        const bool clash =
            std::any_of(kept.begin(), kept.end(), [&](const DeltaTRect& K) { return comparable(K, R, C); });
        if (!clash) kept.push_back(R);
    }
    return kept;
}

/// Masses of the W- and B-circles that are C-tangent to R.
inline std::pair<double, double> rect_type(const DeltaTRect& R, const WeightedCloud& W, const WeightedCloud& B,
                                           double C = default_C0) {
    auto tangent_mass = [&](const WeightedCloud& cloud) {
        double m = 0.0;
        for (std::size_t i = 0; i < cloud.size(); ++i)
            if (cloud.point(i).r() > 0.0 && is_tangent(Circle(cloud.point(i)), R, C)) m += cloud.weight(i);
        return m;
    };
    return {tangent_mass(W), tangent_mass(B)};
}

} // namespace rproj
