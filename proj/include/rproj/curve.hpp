#pragma once

// Analytic geometry of the curve gamma(theta) = (cos theta, sin theta, 1)/sqrt(2)
// and of the projections rho_theta(z) = gamma(theta) . z it induces.
//
// Every quantity here is a sinusoid in theta, so minima and sublevel sets are
// solved in closed form. Grids appear only in the tests, as oracles.

#include "rproj/point.hpp"
#include "rproj/theta_interval.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <utility>

namespace rproj {

inline constexpr double inv_sqrt2 = 1.0 / std::numbers::sqrt2;

/// Which projection family to use. `degenerate` is the planar curve
/// (cos theta, sin theta, 0), kept as a control: it fails the curvature
/// condition and collapses the r-axis to a point.
enum class CurveKind { special, degenerate };

inline Point3 gamma(double theta) {
    return {std::cos(theta) * inv_sqrt2, std::sin(theta) * inv_sqrt2, inv_sqrt2};
}

inline Point3 gamma_dot(double theta) {
    return {-std::sin(theta) * inv_sqrt2, std::cos(theta) * inv_sqrt2, 0.0};
}

/// eta(theta) = gamma x gamma_dot = -(cos theta, sin theta, -1)/2; spans V_theta^perp.
inline Point3 eta(double theta) { return {-0.5 * std::cos(theta), -0.5 * std::sin(theta), 0.5}; }

inline double rho(double theta, const Point3& z) noexcept {
    return (z.x1() * std::cos(theta) + z.x2() * std::sin(theta) + z.r()) * inv_sqrt2;
}

inline double project(CurveKind kind, double theta, const Point3& z) noexcept {
    if (kind == CurveKind::degenerate) return z.x1() * std::cos(theta) + z.x2() * std::sin(theta);
    return rho(theta, z);
}

inline double rho_dot(double theta, const Point3& z) noexcept {
    return (-z.x1() * std::sin(theta) + z.x2() * std::cos(theta)) * inv_sqrt2;
}

/// |pi_{V_theta}(z)| in the orthonormal basis {gamma, gamma_dot} of V_theta.
inline double pi_V_norm(double theta, const Point3& z) noexcept {
    return std::hypot(rho(theta, z), rho_dot(theta, z));
}

/// Circle-tangency defect ||x| - |r||.
inline double delta_prime(const Point3& z) noexcept {
    return std::abs(z.planar_norm() - std::abs(z.r()));
}

/// rho_theta(z) written as amplitude * cos(theta - phase) + offset.
struct AmplitudePhase {
    double amplitude; ///< |x|/sqrt(2)
    double phase;     ///< polar angle of x (0 when x = 0)
    double offset;    ///< r/sqrt(2)

    double operator()(double theta) const noexcept { return amplitude * std::cos(theta - phase) + offset; }
};

inline AmplitudePhase amplitude_phase(const Point3& z) noexcept {
    const double a = z.planar_norm();
    const double phase = a > 0.0 ? wrap_angle(std::atan2(z.x2(), z.x1())) : 0.0;
    return {a * inv_sqrt2, phase, z.r() * inv_sqrt2};
}

/// The graph theta -> rho_theta(z), a "sine wave" generated by z.
class SineWave {
public:
    explicit SineWave(const Point3& origin) : origin_(origin), form_(amplitude_phase(origin)) {}

    const Point3& origin() const noexcept { return origin_; }
    const AmplitudePhase& form() const noexcept { return form_; }
    double operator()(double theta) const noexcept { return rho(theta, origin_); }

private:
    Point3 origin_;
    AmplitudePhase form_;
};

struct TangencyMinimum {
    double theta; ///< a minimiser of |pi_{V_theta}(z)| over the window
    double value; ///< Delta_J(z)
};

/// Exact minimum of |pi_{V_theta}(z)| over J.
///
/// 2|pi_V(z)|^2 = |x|^2 + r^2 + 2 r |x| cos(theta - phi_x), so the
/// unconstrained minimiser is phi_x + pi when r > 0 and phi_x when r < 0. If J
/// misses it the minimum sits on an endpoint; ties go to lo.
inline TangencyMinimum tangency_minimum(const Point3& z, const ThetaInterval& J) {
    const double a = z.planar_norm();
    const double r = z.r();
    if (a == 0.0 || r == 0.0) {
        const double v = std::hypot(a, r) * inv_sqrt2;
        return {J.lo(), v};
    }
    const double phi = wrap_angle(std::atan2(z.x2(), z.x1()));
    const double target = wrap_angle(r > 0.0 ? phi + std::numbers::pi : phi);
    if (J.contains(target)) return {target, std::abs(a - std::abs(r)) * inv_sqrt2};
    const double at_lo = pi_V_norm(J.lo(), z);
    const double at_hi = pi_V_norm(J.hi(), z);
    if (at_hi < at_lo) return {J.hi(), at_hi};
    return {J.lo(), at_lo};
}

/// Tangency parameter Delta_J(z) = min over J of |pi_{V_theta}(z)|.
inline double delta_J(const Point3& z, const ThetaInterval& J) { return tangency_minimum(z, J).value; }

namespace detail {

// Intersects the circular arc [s, e] (e - s <= 2pi, unwrapped) with the
// linear window [lo, hi] and appends the pieces.
inline void clip_circular_arc(double s, double e, double lo, double hi, std::vector<Arc>& out) {
    const double base = std::floor(s / two_pi) * two_pi;
    s -= base;
    e -= base;
    for (int k = -1; k <= 1; ++k) {
        const double a = std::max(s + k * two_pi, lo);
        const double b = std::min(e + k * two_pi, hi);
        if (a <= b) out.push_back({a, b});
    }
}

} // namespace detail

/// {theta in window : |rho_theta(z)| <= delta}, in closed form.
inline IntervalSet sublevel_set(const Point3& z, double delta, const ThetaInterval& window) {
    if (!(delta > 0.0)) throw std::invalid_argument("sublevel_set: delta must be positive");
    const AmplitudePhase f = amplitude_phase(z);
    if (f.amplitude == 0.0) {
        if (std::abs(f.offset) <= delta) return IntervalSet::from_pieces({{window.lo(), window.hi()}});
        return {};
    }
    // -delta <= A cos(a) + c <= delta  <=>  cos(a) in [lower, upper]
    const double lower = (-delta - f.offset) / f.amplitude;
    const double upper = (delta - f.offset) / f.amplitude;
    if (lower > 1.0 || upper < -1.0) return {};
    const double outer = lower <= -1.0 ? std::numbers::pi : std::acos(lower);
    const double inner = upper >= 1.0 ? 0.0 : std::acos(upper);

    std::vector<Arc> pieces;
    detail::clip_circular_arc(f.phase + inner, f.phase + outer, window.lo(), window.hi(), pieces);
    detail::clip_circular_arc(f.phase - outer, f.phase - inner, window.lo(), window.hi(), pieces);
    return IntervalSet::from_pieces(std::move(pieces));
}

/// E_delta(z) = {theta in J/2 : |gamma(theta) . z| <= delta}.
inline IntervalSet e_delta_set(const Point3& z, double delta, const ThetaInterval& J) {
    return sublevel_set(z, delta, J.half());
}

/// Zeros of theta -> gamma_dot(theta) . z, i.e. phi_x and phi_x + pi. Empty
/// when x = 0 (the derivative vanishes identically).
inline std::optional<std::array<double, 2>> critical_points(const Point3& z) {
    if (z.planar_norm() == 0.0) return std::nullopt;
    const double phi = wrap_angle(std::atan2(z.x2(), z.x1()));
    return std::array<double, 2>{phi, wrap_angle(phi + std::numbers::pi)};
}

/// Number of solutions of rho_theta(z) = 0 with theta in I.
inline int zero_count(const Point3& z, const ThetaInterval& I) {
    if (z.is_zero()) throw std::domain_error("zero_count: z = 0, rho vanishes identically");
    const double a = z.planar_norm();
    if (a == 0.0) return 0;
    const double q = -z.r() / a;
    if (std::abs(q) > 1.0) return 0;
    const double phi = wrap_angle(std::atan2(z.x2(), z.x1()));
    const double alpha = std::acos(q);
    std::array<double, 2> roots{phi + alpha, phi - alpha};
    const int classes = std::abs(q) == 1.0 ? 1 : 2;

    int count = 0;
    for (int i = 0; i < classes; ++i) {
        if (I.is_full()) {
            ++count;
            continue;
        }
        const double w = wrap_angle(roots[i]);
        for (double cand : {w, w + two_pi})
            if (cand >= I.lo() && cand <= I.hi()) ++count;
    }
    return count;
}

/// Membership of w = (theta, y) in Gamma^delta(z) = {|rho_theta(z) - y| <= delta}.
inline bool wave_neighborhood_contains(const Point3& z, double delta, double theta, double y) noexcept {
    return std::abs(rho(theta, z) - y) <= delta;
}

/// As above, with the wave restricted to the window J/2.
inline bool wave_neighborhood_contains(const Point3& z, double delta, double theta, double y,
                                       const ThetaInterval& J) noexcept {
    return J.half().contains(theta) && wave_neighborhood_contains(z, delta, theta, y);
}

} // namespace rproj
