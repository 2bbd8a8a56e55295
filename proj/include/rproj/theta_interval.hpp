#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace rproj {

inline constexpr double two_pi = 2.0 * std::numbers::pi;

/// Reduces an angle into [0, 2pi).
inline double wrap_angle(double a) noexcept {
    double w = std::fmod(a, two_pi);
    if (w < 0.0) w += two_pi;
    if (w >= two_pi) w = 0.0;
    return w;
}

/// Signed angular difference a - b reduced into (-pi, pi].
inline double angle_diff(double a, double b) noexcept { return std::remainder(a - b, two_pi); }

/// A closed parameter window J = [lo, hi] inside [0, 2pi], or the full
/// circle [0, 2pi) as a distinguished variant.
///
/// J/2 is the concentric window of half the length and 2J the concentric
/// window of twice the length clipped to [0, 2pi]. The full circle has no
/// centre, so its half and double are the full circle again.
class ThetaInterval {
public:
    ThetaInterval(double lo, double hi) : lo_(lo), hi_(hi) {
        if (!(lo >= 0.0 && lo < hi && hi <= two_pi))
            throw std::invalid_argument("ThetaInterval: need 0 <= lo < hi <= 2pi");
    }

    static ThetaInterval full_circle() { return ThetaInterval(); }

    /// Window of the given length centred at `centre` (which must keep it inside [0, 2pi]).
    static ThetaInterval centred(double centre, double length) {
        return ThetaInterval(centre - 0.5 * length, centre + 0.5 * length);
    }

    double lo() const noexcept { return lo_; }
    double hi() const noexcept { return hi_; }
    double length() const noexcept { return hi_ - lo_; }
    double centre() const noexcept { return 0.5 * (lo_ + hi_); }
    bool is_full() const noexcept { return full_; }

    /// The short-interval regime, |J| <= pi, where the sublevel-set lemmas apply.
    bool is_short() const noexcept { return !full_ && length() <= std::numbers::pi; }

    ThetaInterval half() const {
        if (full_) return *this;
        return centred(centre(), 0.5 * length());
    }

    ThetaInterval doubled() const {
        if (full_) return *this;
        const double c = centre();
        const double l = length();
        return ThetaInterval(std::max(0.0, c - l), std::min(two_pi, c + l));
    }

    bool contains(double theta) const noexcept {
        if (full_) return true;
        const double w = wrap_angle(theta);
        return (w >= lo_ && w <= hi_) || (w + two_pi <= hi_);
    }

    bool operator==(const ThetaInterval&) const = default;

private:
    ThetaInterval() : lo_(0.0), hi_(two_pi), full_(true) {}

    double lo_;
    double hi_;
    bool full_ = false;
};

/// Closed subinterval [lo, hi] of [0, 2pi].
struct Arc {
    double lo;
    double hi;
    double length() const noexcept { return hi - lo; }
    bool operator==(const Arc&) const = default;
};

/// Ordered list of disjoint, nonempty closed subintervals of [0, 2pi].
class IntervalSet {
public:
    IntervalSet() = default;

    /// Sorts and merges overlapping or touching pieces; drops reversed ones.
    static IntervalSet from_pieces(std::vector<Arc> pieces) {
        std::erase_if(pieces, [](const Arc& a) { return !(a.hi >= a.lo); });
        std::sort(pieces.begin(), pieces.end(),
                  [](const Arc& a, const Arc& b) { return a.lo < b.lo || (a.lo == b.lo && a.hi < b.hi); });
        IntervalSet out;
        for (const Arc& a : pieces) {
            if (!out.arcs_.empty() && a.lo <= out.arcs_.back().hi)
                out.arcs_.back().hi = std::max(out.arcs_.back().hi, a.hi);
            else
                out.arcs_.push_back(a);
        }
        return out;
    }

    const std::vector<Arc>& components() const noexcept { return arcs_; }
    std::size_t size() const noexcept { return arcs_.size(); }
    bool empty() const noexcept { return arcs_.empty(); }

    double measure() const noexcept {
        double m = 0.0;
        for (const Arc& a : arcs_) m += a.length();
        return m;
    }

    double max_component_length() const noexcept {
        double m = 0.0;
        for (const Arc& a : arcs_) m = std::max(m, a.length());
        return m;
    }

    bool contains(double theta) const noexcept {
        return std::any_of(arcs_.begin(), arcs_.end(),
                           [theta](const Arc& a) { return theta >= a.lo && theta <= a.hi; });
    }

    /// Component count when 0 and 2pi are identified (a piece touching 0 and
    /// a piece touching 2pi form one arc of the circle).
    std::size_t circular_size() const noexcept {
        if (arcs_.size() >= 2 && arcs_.front().lo == 0.0 && arcs_.back().hi == two_pi)
            return arcs_.size() - 1;
        return arcs_.size();
    }

private:
    std::vector<Arc> arcs_;
};

} // namespace rproj
