#pragma once

// Bipartite families used to calibrate and regress the incidence-count bound:
// pencils of internally tangent circles, random clusters, and Cantor-weighted
// clusters. All families lie in B0.

#include "rproj/fractal.hpp"
#include "rproj/incidence.hpp"

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <string>
#include <vector>

namespace rproj {

struct CorpusCase {
    std::string name;
    BipartitePair pair;
    double delta;
    double m;
    double n;
};

namespace detail {

// Circles internally tangent at the common point p = centre + r n: centre
// (c0 - r) n rotated by `turn`, for radii in [r_lo, r_hi].
inline std::vector<Point3> pencil(double c0, double turn, double r_lo, double r_hi, std::size_t k) {
    std::vector<Point3> out;
    const Vec2 n = unit_vector(turn);
    for (std::size_t i = 0; i < k; ++i) {
        const double r = k == 1 ? r_lo : r_lo + (r_hi - r_lo) * static_cast<double>(i) / static_cast<double>(k - 1);
        const Vec2 x = n * (c0 - r);
        out.emplace_back(x.x, x.y, r);
    }
    return out;
}

inline double diameter_of(const std::vector<Point3>& p) {
    double d = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i)
        for (std::size_t j = i + 1; j < p.size(); ++j) d = std::max(d, distance(p[i], p[j]));
    return d;
}

inline double gap_of(const std::vector<Point3>& a, const std::vector<Point3>& b) {
    double d = INFINITY;
    for (const Point3& p : a)
        for (const Point3& q : b) d = std::min(d, distance(p, q));
    return d;
}

inline WeightedCloud with_weights(std::vector<Point3> pts, double w) {
    std::vector<double> ws(pts.size(), w);
    return WeightedCloud(std::move(pts), std::move(ws));
}

} // namespace detail

/// Pencil adversary: `hotspots` pencils turned `spread` radians apart, k
/// circles per side in each. W takes radii in [0.8, 0.8 + span], B the same
/// span after a gap, widened until dist(W, B) >= t = max diameter. Centres
/// sit on the line through the origin, so |x| stays below 1/4.
inline CorpusCase pencil_case(std::size_t hotspots, std::size_t k, double span, double spread, double delta,
                              double weight, double m, double n) {
    auto build = [&](double r_lo, double r_hi, double c0) {
        std::vector<Point3> out;
        for (std::size_t h = 0; h < hotspots; ++h)
            for (const Point3& p : detail::pencil(c0, spread * static_cast<double>(h), r_lo, r_hi, k)) out.push_back(p);
        return out;
    };
    const double r0 = 0.8;
    for (double gap = span; gap < 10.0 * span; gap += 0.05 * span) {
        const double c0 = r0 + span + 0.5 * gap; // tangency point radius at the middle of the radius range
        std::vector<Point3> W = build(r0, r0 + span, c0);
        std::vector<Point3> B = build(r0 + span + gap, r0 + 2 * span + gap, c0);
        const double t = std::max(detail::diameter_of(W), detail::diameter_of(B));
        if (detail::gap_of(W, B) >= t)
            return {"pencil h=" + std::to_string(hotspots) + " k=" + std::to_string(k),
                    BipartitePair(detail::with_weights(W, weight), detail::with_weights(B, weight), t), delta, m, n};
    }
    throw std::invalid_argument("pencil_case: no admissible gap");
}

/// Random W in a ball of radius t/2, and B = W + v + noise where v = (s u, s)
/// lies on the cone with |v| = 2t, so each w is delta-incident to its partner.
inline CorpusCase translate_case(std::uint64_t seed, std::size_t k, double t, double delta, double weight, double m,
                                 double n) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    const double dir = std::numbers::pi * U(rng);
    const double s = std::numbers::sqrt2 * t;
    const Point3 v(s * std::cos(dir), s * std::sin(dir), s);
    const Point3 cw(-0.5 * v.x1(), -0.5 * v.x2(), 1.0);
    std::vector<Point3> W, B;
    while (W.size() < k) {
        const Point3 d(U(rng), U(rng), U(rng));
        if (d.norm() > 1.0) continue;
        // noise keeps diam B <= t and the partner delta-incident
        const Point3 w = cw + d * (0.5 * t - delta);
        const Point3 noise(0.0, 0.0, 0.5 * delta * U(rng));
        const Point3 b = w + v + noise;
        if (!in_B0(w) || !in_B0(b)) continue;
        W.push_back(w);
        B.push_back(b);
    }
    const double tt = std::max(detail::diameter_of(W), detail::diameter_of(B));
    return {"translate seed=" + std::to_string(seed),
            BipartitePair(detail::with_weights(W, weight), detail::with_weights(B, weight), tt), delta, m, n};
}

/// W and B from the first and last first-level cells of a Cantor cloud
/// (opposite corners), carrying its weights.
inline CorpusCase cantor_case(double s, int depth, double delta, double m, double n) {
    const IFSSpec spec = cantor_preset(s, depth);
    const WeightedCloud mu = generate_cantor(spec);
    const std::size_t quarter = mu.size() / static_cast<std::size_t>(std::pow(spec.maps, spec.axes.size()));
    std::vector<std::size_t> wi, bi;
    for (std::size_t i = 0; i < quarter; ++i) wi.push_back(i);
    for (std::size_t i = mu.size() - quarter; i < mu.size(); ++i) bi.push_back(i);
    WeightedCloud W = mu.subset(wi), B = mu.subset(bi);
    const double t = std::max(W.diameter(), B.diameter());
    return {"cantor s=" + std::to_string(s), BipartitePair(std::move(W), std::move(B), t), delta, m, n};
}

/// The fixed calibration corpus: pencils with 1 to 3 hotspots (unit and
/// normalised weights), cone-translated random clusters, and a Cantor-weighted pair.
inline std::vector<CorpusCase> calibration_corpus() {
    std::vector<CorpusCase> out;
    const double delta = std::ldexp(1.0, -8);
    for (std::size_t h : {1u, 2u, 3u})
        for (std::size_t k : {8u, 16u}) {
            const double spread = 0.5;
            out.push_back(pencil_case(h, k, 0.1, spread, delta, 1.0, static_cast<double>(k), static_cast<double>(k)));
            const double w = 1.0 / static_cast<double>(h * k);
            out.push_back(pencil_case(h, k, 0.1, spread, delta, w, k * w, k * w));
        }
    for (std::uint64_t seed = 0; seed < 10; ++seed)
        out.push_back(translate_case(seed, 24, 0.1, std::ldexp(1.0, -7), 1.0, 1.0, 1.0));
    out.push_back(cantor_case(1.5, 3, std::ldexp(1.0, -6), 1.0 / 512, 1.0 / 512));
    return out;
}

} // namespace rproj
