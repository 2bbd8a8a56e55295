#pragma once

// Multiplicity functions of circle and sine-wave families, bipartite
// families and (delta, t)-rectangle counting, and the finite double-counting
// inequality.

#include "rproj/circle.hpp"
#include "rproj/cloud.hpp"
#include "rproj/curve.hpp"
#include "rproj/parallel.hpp"
#include "rproj/rectangle.hpp"
#include "rproj/spatial_index.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace rproj {

enum class Family { circle, wave };

inline const char* to_string(Family f) { return f == Family::circle ? "circle" : "wave"; }

/// w in S^delta(z'), i.e. | |w - x'| - r' | <= delta.
inline bool circle_hit(Vec2 w, const Point3& z, double delta) noexcept {
    return std::abs(distance(w, z.x()) - z.r()) <= delta;
}

/// (theta, y) in Gamma^delta(z').
inline bool wave_hit(double theta, double y, const Point3& z, double delta) noexcept {
    return std::abs(y - rho(theta, z)) <= delta;
}

/// m(w) = mu{z' : w in S^delta(z')}, summed in index order.
inline double multiplicity_circle(Vec2 w, const WeightedCloud& mu, double delta) {
    if (!(delta > 0.0)) throw std::invalid_argument("multiplicity_circle: delta must be positive");
    double m = 0.0;
    for (std::size_t i = 0; i < mu.size(); ++i)
        if (circle_hit(w, mu.point(i), delta)) m += mu.weight(i);
    return m;
}

/// m(w) = mu{z' : w in Gamma^delta(z')} for w = (theta, y), summed in index order.
inline double multiplicity_wave(double theta, double y, const WeightedCloud& mu, double delta) {
    if (!(delta > 0.0)) throw std::invalid_argument("multiplicity_wave: delta must be positive");
    double m = 0.0;
    for (std::size_t i = 0; i < mu.size(); ++i)
        if (wave_hit(theta, y, mu.point(i), delta)) m += mu.weight(i);
    return m;
}

/// Indexed fast path for the multiplicity functions. Candidates are pruned
/// through a kd-tree, then tested with the same predicate as the brute-force
/// sums and added in ascending index order, so results agree bit for bit.
class MultiplicityIndex {
public:
    explicit MultiplicityIndex(const WeightedCloud& mu) : mu_(&mu), tree_(mu) {}

    double circle(Vec2 w, double delta) const {
        const double slack = delta + prune_margin;
        const auto hits = tree_.collect(
            [&](const Box3& b) {
                const double gx = std::max({0.0, b.lo[0] - w.x, w.x - b.hi[0]});
                const double gy = std::max({0.0, b.lo[1] - w.y, w.y - b.hi[1]});
                const double fx = std::max(std::abs(w.x - b.lo[0]), std::abs(w.x - b.hi[0]));
                const double fy = std::max(std::abs(w.y - b.lo[1]), std::abs(w.y - b.hi[1]));
                const double dmin = std::hypot(gx, gy);
                const double dmax = std::hypot(fx, fy);
                if (dmin - b.hi[2] > slack || dmax - b.lo[2] < -slack) return BoxRelation::outside;
                return BoxRelation::straddles;
            },
            [&](std::size_t i) { return circle_hit(w, mu_->point(i), delta); });
        return sum(hits);
    }

    double wave(double theta, double y, double delta) const {
        const double c = std::cos(theta) * inv_sqrt2;
        const double s = std::sin(theta) * inv_sqrt2;
        const double slack = delta + prune_margin;
        const auto hits = tree_.collect(
            [&](const Box3& b) {
                const double lo = std::min(c * b.lo[0], c * b.hi[0]) + std::min(s * b.lo[1], s * b.hi[1]) +
                                  b.lo[2] * inv_sqrt2;
                const double hi = std::max(c * b.lo[0], c * b.hi[0]) + std::max(s * b.lo[1], s * b.hi[1]) +
                                  b.hi[2] * inv_sqrt2;
                if (lo - y > slack || y - hi > slack) return BoxRelation::outside;
                return BoxRelation::straddles;
            },
            [&](std::size_t i) { return wave_hit(theta, y, mu_->point(i), delta); });
        return sum(hits);
    }

private:
    static constexpr double prune_margin = 1e-9;

    double sum(const std::vector<std::size_t>& idx) const {
        double m = 0.0;
        for (std::size_t i : idx) m += mu_->weight(i);
        return m;
    }

    const WeightedCloud* mu_;
    KdTree tree_;
};

namespace detail {

// Angles psi with cos(psi - centre) in [lower, upper], as up to two unwrapped arcs.
inline std::vector<Arc> cos_band(double centre, double lower, double upper) {
    if (lower > 1.0 || upper < -1.0 || lower > upper) return {};
    const double outer = lower <= -1.0 ? std::numbers::pi : std::acos(lower);
    const double inner = upper >= 1.0 ? 0.0 : std::acos(upper);
    if (inner == 0.0) return {{centre - outer, centre + outer}};
    return {{centre + inner, centre + outer}, {centre - outer, centre - inner}};
}

// Index range [first, last] of cell-centred samples psi_i = (i + 0.5) * step
// on [0, 2pi) that fall in the unwrapped arc.
inline void mark_periodic(const Arc& a, double step, std::size_t n, std::vector<std::pair<std::size_t, std::size_t>>& out) {
    if (a.hi - a.lo >= two_pi) {
        out.emplace_back(0, n - 1);
        return;
    }
    const double base = std::floor(a.lo / two_pi) * two_pi;
    const double lo = a.lo - base;
    const double hi = a.hi - base;
    auto emit = [&](double l, double h) {
        const double first = std::ceil(l / step - 0.5);
        const double last = std::floor(h / step - 0.5);
        const double f = std::max(first, 0.0);
        const double g = std::min(last, static_cast<double>(n) - 1.0);
        if (f <= g) out.emplace_back(static_cast<std::size_t>(f), static_cast<std::size_t>(g));
    };
    emit(lo, std::min(hi, two_pi));
    if (hi > two_pi) emit(0.0, hi - two_pi);
}

} // namespace detail

/// Stratified sample of a delta-neighbourhood: cell-centred nodes with
/// spacing delta / divisor along the curve and across it, each carrying its
/// area weight.
struct NeighbourhoodGrid {
    std::size_t along = 0;
    std::size_t across = 0;
    std::vector<double> multiplicity; ///< along-major
    std::vector<double> area_weight;  ///< per across-offset
};

/// Evaluates m^mu_delta on the grid of S^delta(z) (circle family) or
/// Gamma^delta(z) over J/2 (wave family). Contributions are accumulated
/// point by point in index order, which reproduces the brute-force sums.
inline NeighbourhoodGrid neighbourhood_multiplicity(const Point3& z, const WeightedCloud& mu, double delta,
                                                   Family family, const ThetaInterval& J, double divisor = 4.0) {
    if (!(delta > 0.0) || !(divisor >= 1.0)) throw std::invalid_argument("neighbourhood_multiplicity: bad delta");
    const double h = delta / divisor;
    NeighbourhoodGrid g;
    g.across = static_cast<std::size_t>(std::ceil(2.0 * delta / h));
    std::vector<double> offsets(g.across);
    for (std::size_t k = 0; k < g.across; ++k) offsets[k] = -delta + (k + 0.5) * (2.0 * delta / g.across);
    const double margin = 2.0 * delta + 1e-9;
    std::vector<std::pair<std::size_t, std::size_t>> ranges;

    if (family == Family::circle) {
        if (!(z.r() > 0.0)) throw std::invalid_argument("neighbourhood_multiplicity: circle needs r > 0");
        const double r = z.r();
        g.along = static_cast<std::size_t>(std::ceil(two_pi * r / h));
        const double step = two_pi / g.along;
        g.multiplicity.assign(g.along * g.across, 0.0);
        g.area_weight.resize(g.across);
        for (std::size_t k = 0; k < g.across; ++k) g.area_weight[k] = r + offsets[k];
        std::vector<Vec2> dirs(g.along);
        for (std::size_t i = 0; i < g.along; ++i) dirs[i] = unit_vector((i + 0.5) * step);

        for (std::size_t j = 0; j < mu.size(); ++j) {
            const Point3& q = mu.point(j);
            const Vec2 rel = z.x() - q.x();
            const double D = rel.norm();
            ranges.clear();
            // |x + r u(psi) - x'|^2 = D^2 + r^2 + 2 r D cos(psi - beta) must lie in
            // [(r' - 2 delta)^2, (r' + 2 delta)^2] for any node on the segment to hit.
            const double dlo = std::max(0.0, q.r() - margin);
            const double dhi = q.r() + margin;
            if (D == 0.0) {
                if (r >= dlo && r <= dhi) ranges.emplace_back(0, g.along - 1);
            } else {
                const double beta = std::atan2(rel.y, rel.x);
                const double base = D * D + r * r;
                for (const Arc& a : detail::cos_band(beta, (dlo * dlo - base) / (2 * r * D), (dhi * dhi - base) / (2 * r * D)))
                    detail::mark_periodic(a, step, g.along, ranges);
            }
            for (const auto& [first, last] : ranges)
                for (std::size_t i = first; i <= last; ++i)
                    for (std::size_t k = 0; k < g.across; ++k) {
                        const Vec2 w = z.x() + dirs[i] * (r + offsets[k]);
                        if (circle_hit(w, q, delta)) g.multiplicity[i * g.across + k] += mu.weight(j);
                    }
        }
        return g;
    }

    const ThetaInterval window = J.half();
    g.along = static_cast<std::size_t>(std::ceil(window.length() / h));
    const double step = window.length() / g.along;
    g.multiplicity.assign(g.along * g.across, 0.0);
    g.area_weight.assign(g.across, 1.0);
    std::vector<double> thetas(g.along), base(g.along);
    for (std::size_t i = 0; i < g.along; ++i) {
        thetas[i] = window.lo() + (i + 0.5) * step;
        base[i] = rho(thetas[i], z);
    }
    for (std::size_t j = 0; j < mu.size(); ++j) {
        const Point3& q = mu.point(j);
        // a column can only hit when |rho_theta(z - z')| <= 2 delta
        const IntervalSet cols = sublevel_set(z - q, margin, window);
        for (const Arc& a : cols.components()) {
            const double first = std::max(0.0, std::ceil((a.lo - window.lo()) / step - 0.5));
            const double last = std::min(static_cast<double>(g.along) - 1.0, std::floor((a.hi - window.lo()) / step - 0.5));
            if (first > last) continue;
            for (auto i = static_cast<std::size_t>(first); i <= static_cast<std::size_t>(last); ++i)
                for (std::size_t k = 0; k < g.across; ++k)
                    if (wave_hit(thetas[i], base[i] + offsets[k], q, delta))
                        g.multiplicity[i * g.across + k] += mu.weight(j);
        }
    }
    return g;
}

/// Threshold A^s lambda^{-2s} delta^s of the high-multiplicity set.
inline double schlag_threshold(double A, double lambda, double s, double delta) {
    return std::pow(A, s) * std::pow(lambda, -2.0 * s) * std::pow(delta, s);
}

struct GoodSetReport {
    std::vector<double> fractions;      ///< per cloud point
    std::vector<double> peak;           ///< per cloud point, max multiplicity on its grid
    double threshold = 0.0;
    double exceptional_mass = 0.0; ///< mu-mass of points with fraction > lambda
    double allowed_mass = 0.0;     ///< A^{-s/3}
};

inline double grid_fraction(const NeighbourhoodGrid& g, double threshold) {
    double hit = 0.0, total = 0.0;
    for (std::size_t i = 0; i < g.along; ++i)
        for (std::size_t k = 0; k < g.across; ++k) {
            total += g.area_weight[k];
            if (g.multiplicity[i * g.across + k] >= threshold) hit += g.area_weight[k];
        }
    return total > 0.0 ? hit / total : 0.0;
}

/// Measures, for every z in spt mu, the fraction of its neighbourhood with
/// high multiplicity, and the mu-mass of the points where it exceeds lambda.
inline GoodSetReport good_set_report(const WeightedCloud& mu, double delta, double A, double lambda, double s,
                                     Family family, const ThetaInterval& J, double divisor = 4.0) {
    mu.require_scale(delta, "good_set_report");
    GoodSetReport rep;
    rep.threshold = schlag_threshold(A, lambda, s, delta);
    rep.allowed_mass = std::pow(A, -s / 3.0);
    rep.fractions.assign(mu.size(), 0.0);
    rep.peak.assign(mu.size(), 0.0);
    parallel_for(mu.size(), [&](std::size_t i) {
        const NeighbourhoodGrid g = neighbourhood_multiplicity(mu.point(i), mu, delta, family, J, divisor);
        rep.fractions[i] = grid_fraction(g, rep.threshold);
        rep.peak[i] = *std::max_element(g.multiplicity.begin(), g.multiplicity.end());
    });
    for (std::size_t i = 0; i < mu.size(); ++i)
        if (rep.fractions[i] > lambda) rep.exceptional_mass += mu.weight(i);
    return rep;
}

/// Area fraction of S^delta(z) (or Gamma^delta(z)) on which m^mu_delta >= threshold.
inline double high_multiplicity_fraction(const Point3& z, const WeightedCloud& mu, double delta, double threshold,
                                         Family family, const ThetaInterval& J = ThetaInterval::full_circle(),
                                         double divisor = 4.0) {
    return grid_fraction(neighbourhood_multiplicity(z, mu, delta, family, J, divisor), threshold);
}

/// A t-bipartite pair: max(diam W, diam B) <= t <= dist(W, B), checked exactly.
class BipartitePair {
public:
    BipartitePair(WeightedCloud W, WeightedCloud B, double t) : W_(std::move(W)), B_(std::move(B)), t_(t) {
        if (W_.empty() || B_.empty()) throw std::invalid_argument("BipartitePair: empty side");
        const double diam = std::max(W_.diameter(), B_.diameter());
        const double dist = cloud_distance(W_, B_);
        if (!(diam <= t_ && t_ <= dist))
            throw std::invalid_argument("BipartitePair: need max(diam W, diam B) <= t <= dist(W, B)");
    }

    const WeightedCloud& W() const noexcept { return W_; }
    const WeightedCloud& B() const noexcept { return B_; }
    double t() const noexcept { return t_; }

private:
    WeightedCloud W_;
    WeightedCloud B_;
    double t_;
};

struct WolffCount {
    std::size_t candidates = 0; ///< rectangles from delta-incident cross pairs
    std::size_t typed = 0;      ///< of which type (>= m, >= n)
    std::size_t family = 0;     ///< pairwise incomparable survivors
    double bound = 0.0;
    double ratio = 0.0;         ///< family / bound
};

/// C_eps (m n delta)^{-eps} ((mu(W) mu(B) / (m n))^{3/4} + mu(W)/m + mu(B)/n).
inline double wolff_bound(double muW, double muB, double delta, double m, double n, double eps, double C_eps) {
    return C_eps * std::pow(m * n * delta, -eps) * (std::pow(muW * muB / (m * n), 0.75) + muW / m + muB / n);
}

/// Candidate (delta, t)-rectangles, one per delta-incident cross pair (w, b),
/// on the W-circle, at the pair's bipartite scale t. Pairs with equal radii
/// (no tangency point defined) are skipped.
inline std::vector<DeltaTRect> incident_rectangles(const BipartitePair& pair, double delta) {
    std::vector<DeltaTRect> out;
    for (const Point3& w : pair.W().points())
        for (const Point3& b : pair.B().points()) {
            if (w.r() == b.r() || w.x() == b.x()) continue;
            if (!(delta_prime(w - b) <= delta)) continue;
            out.push_back(rect_from_incident_pair(Circle(w), Circle(b), delta, pair.t()));
        }
    return out;
}

/// Counts pairwise incomparable rectangles of type (>= m, >= n) and compares
/// the count with the incidence bound.
inline WolffCount wolff_count(const BipartitePair& pair, double delta, double m, double n, double eps, double C_eps,
                              double C0 = default_C0) {
    if (!(delta > 0.0 && delta <= pair.t() && pair.t() < 1.0))
        throw std::invalid_argument("wolff_count: need 0 < delta <= t < 1");
    for (const WeightedCloud* side : {&pair.W(), &pair.B()})
        for (const Point3& p : side->points())
            if (!in_B0(p)) throw std::invalid_argument("wolff_count: cloud leaves B0");
    WolffCount out;
    const std::vector<DeltaTRect> candidates = incident_rectangles(pair, delta);
    out.candidates = candidates.size();
    std::vector<DeltaTRect> typed;
    for (const DeltaTRect& R : candidates) {
        const auto [mw, mb] = rect_type(R, pair.W(), pair.B(), C0);
        if (mw >= m && mb >= n) typed.push_back(R);
    }
    out.typed = typed.size();
    out.family = max_incomparable_family(typed, C0).size();
    out.bound = wolff_bound(pair.W().mass(), pair.B().mass(), delta, m, n, eps, C_eps);
    out.ratio = static_cast<double>(out.family) / out.bound;
    return out;
}

inline double wolff_bound_ratio(const BipartitePair& pair, double delta, double m, double n, double eps,
                                double C_eps, double C0 = default_C0) {
    return wolff_count(pair, delta, m, n, eps, C_eps, C0).ratio;
}

/// Raised when a double-counting precondition fails; names the offending element.
class PreconditionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Finite double counting: if every omega1 in pi1(E) has a mu2-fibre of mass
/// >= C2 and every omega2 in pi2(E) a mu1-fibre of mass <= C1, then
/// mu2(pi2(E)) >= (C2 / C1) mu1(pi1(E)). Verifies the preconditions (throwing
/// PreconditionError on the first violation) and evaluates the inequality.
inline bool double_count_check(const std::vector<std::pair<std::size_t, std::size_t>>& E,
                               const std::vector<double>& mu1, const std::vector<double>& mu2, double C1, double C2) {
    const std::set<std::pair<std::size_t, std::size_t>> edges(E.begin(), E.end());
    std::map<std::size_t, double> fibre1; // omega1 -> mu2 mass of its fibre
    std::map<std::size_t, double> fibre2; // omega2 -> mu1 mass of its fibre
    for (const auto& [a, b] : edges) {
        if (a >= mu1.size() || b >= mu2.size()) throw PreconditionError("double_count_check: edge index out of range");
        fibre1[a] += mu2[b];
        fibre2[b] += mu1[a];
    }
    const double tol = 1e-12;
    for (const auto& [a, mass] : fibre1)
        if (mass < C2 * (1.0 - tol))
            throw PreconditionError("double_count_check: fibre of omega1 = " + std::to_string(a) + " has mu2-mass " +
                                    std::to_string(mass) + " < C2");
    for (const auto& [b, mass] : fibre2)
        if (mass > C1 * (1.0 + tol))
            throw PreconditionError("double_count_check: fibre of omega2 = " + std::to_string(b) + " has mu1-mass " +
                                    std::to_string(mass) + " > C1");
    double left = 0.0, right = 0.0;
    for (const auto& [b, mass] : fibre2) left += mu2[b];
    for (const auto& [a, mass] : fibre1) right += mu1[a];
    return C1 * left >= C2 * right * (1.0 - tol);
}

} // namespace rproj
