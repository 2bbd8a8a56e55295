#pragma once

// Self-similar test sets: strongly separated Cantor products placed in a
// box of parameter space, plus a cone cloud and Frostman-constant estimates.

#include "rproj/cloud.hpp"
#include "rproj/fit.hpp"
#include "rproj/parallel.hpp"
#include "rproj/spatial_index.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace rproj {

enum class Axis { x1 = 0, x2 = 1, r = 2 };

/// Axis-aligned cube {corner + side * u : u in [0,1]^3}.
struct Frame {
    Point3 corner{-0.175, -0.175, 1.0};
    double side = 0.35;

    /// Default frame; |x| <= 0.175 * sqrt(2) < 1/4 and r in [1, 1.35], inside B0.
    static Frame in_B0() { return {}; }
    static Frame unit() { return {Point3(0.0, 0.0, 0.0), 1.0}; }
};

struct IFSSpec {
    double lambda = 0.25;
    int maps = 2; ///< N, maps per axis
    std::vector<Axis> axes{Axis::r};
    int depth = 8;
    Frame frame = Frame::in_B0();

    double similarity_dimension() const {
        return static_cast<double>(axes.size()) * std::log(static_cast<double>(maps)) / std::log(1.0 / lambda);
    }

    std::uint64_t point_count() const {
        long double n = std::pow(static_cast<long double>(maps), static_cast<long double>(axes.size() * depth));
        return n > 1e18L ? UINT64_MAX : static_cast<std::uint64_t>(n);
    }

    /// Smallest distance between distinct output points: sibling cells at the last level.
    double min_separation() const {
        return (1.0 - lambda) / (maps - 1) * std::pow(lambda, depth - 1) * frame.side;
    }

    double resolution() const { return std::pow(lambda, depth) * frame.side; }

    void validate() const {
        if (!(lambda > 0.0 && lambda <= 0.5)) throw std::invalid_argument("IFSSpec: lambda must be in (0, 1/2]");
        if (maps != 2 && maps != 3) throw std::invalid_argument("IFSSpec: maps per axis must be 2 or 3");
        if (!(lambda * maps <= 0.5 + 1e-15))
            throw std::invalid_argument("IFSSpec: strong separation needs lambda * N <= 1/2");
        if (axes.empty() || axes.size() > 3) throw std::invalid_argument("IFSSpec: need 1 to 3 axes");
        for (std::size_t i = 0; i < axes.size(); ++i)
            for (std::size_t j = i + 1; j < axes.size(); ++j)
                if (axes[i] == axes[j]) throw std::invalid_argument("IFSSpec: repeated axis");
        if (depth < 0) throw std::invalid_argument("IFSSpec: negative depth");
        if (!(frame.side > 0.0)) throw std::invalid_argument("IFSSpec: frame side must be positive");
    }

    /// Key=value block recorded alongside generated clouds.
    std::string describe() const {
        std::ostringstream os;
        os.precision(17);
        os << "generator = cantor\nlambda = " << lambda << "\nmaps = " << maps << "\naxes = ";
        for (Axis a : axes) os << (a == Axis::x1 ? "x1" : a == Axis::x2 ? "x2" : "r");
        os << "\ndepth = " << depth << "\nframe_corner = " << frame.corner.x1() << ',' << frame.corner.x2() << ','
           << frame.corner.r() << "\nframe_side = " << frame.side << "\nsimilarity_dimension = "
           << similarity_dimension() << '\n';
        return os.str();
    }
};

/// Spec with similarity dimension s: ceil(2s) axes, two maps each. One axis
/// uses r, two use the horizontal pair (x1, x2), three use all.
inline IFSSpec cantor_preset(double s, int depth, Frame frame = Frame::in_B0()) {
    if (!(s > 0.0 && s <= 1.5)) throw std::invalid_argument("cantor_preset: s must be in (0, 1.5]");
    IFSSpec spec;
    const int a = std::max(1, static_cast<int>(std::ceil(2.0 * s - 1e-12)));
    spec.axes = a == 1 ? std::vector<Axis>{Axis::r}
              : a == 2 ? std::vector<Axis>{Axis::x1, Axis::x2}
                       : std::vector<Axis>{Axis::x1, Axis::x2, Axis::r};
    spec.lambda = std::pow(2.0, -static_cast<double>(a) / s);
    spec.depth = depth;
    spec.frame = frame;
    return spec;
}

/// Depth-d iterate of the IFS u -> lambda u + b_k, b_k = k (1 - lambda)/(N - 1),
/// sampled at cell centres, uniform weights. Points are in lexicographic
/// order of their branch codes (level-major, axes in x1, x2, r order).
inline WeightedCloud generate_cantor(const IFSSpec& spec) {
    spec.validate();
    const std::uint64_t count = spec.point_count();
    if (count > 10'000'000ull) throw std::invalid_argument("generate_cantor: more than 1e7 points");

    std::vector<Axis> axes = spec.axes;
    std::sort(axes.begin(), axes.end());
    const std::size_t k = axes.size();
    const auto base = static_cast<std::uint64_t>(std::pow(spec.maps, static_cast<double>(k)));
    const double step = (1.0 - spec.lambda) / (spec.maps - 1);
    const double half_cell = 0.5 * std::pow(spec.lambda, spec.depth);

    std::vector<Point3> pts(count);
    parallel_for(count, [&](std::size_t idx) {
        double u[3] = {0.5, 0.5, 0.5};
        for (std::size_t a = 0; a < k; ++a) u[static_cast<int>(axes[a])] = half_cell;
        std::uint64_t code = idx;
        std::vector<std::uint64_t> digits(static_cast<std::size_t>(spec.depth));
        for (int level = spec.depth - 1; level >= 0; --level) {
            digits[static_cast<std::size_t>(level)] = code % base;
            code /= base;
        }
        double scale = 1.0;
        for (int level = 0; level < spec.depth; ++level) {
            std::uint64_t d = digits[static_cast<std::size_t>(level)];
            // most significant per-level digit belongs to the first axis
            for (std::size_t a = k; a-- > 0;) {
                u[static_cast<int>(axes[a])] += scale * step * static_cast<double>(d % spec.maps);
                d /= spec.maps;
            }
            scale *= spec.lambda;
        }
        const Frame& f = spec.frame;
        pts[idx] = Point3(f.corner.x1() + f.side * u[0], f.corner.x2() + f.side * u[1], f.corner.r() + f.side * u[2]);
    });
    return WeightedCloud::uniform(std::move(pts), spec.resolution());
}

/// n points on the cone |x| = r, with r uniform in [1/2, 2] and a uniform
/// direction. Not in B0; used for tangency checks only.
inline WeightedCloud cone_cloud(std::size_t n, std::uint64_t seed) {
    if (n == 0) throw std::invalid_argument("cone_cloud: n must be >= 1");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> radius(0.5, 2.0), angle(0.0, 2.0 * std::numbers::pi);
    std::vector<Point3> pts;
    pts.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double r = radius(rng);
        const double a = angle(rng);
        double x1 = r * std::cos(a), x2 = r * std::sin(a);
        // |x| = r must hold exactly in floating point
        const double h = std::hypot(x1, x2);
        pts.emplace_back(x1, x2, h);
    }
    return WeightedCloud::uniform(std::move(pts));
}

struct FrostmanEstimate {
    double s = 0.0;
    double C = 0.0;
    std::vector<double> scales;
    std::vector<double> max_mass;
};

/// Fits log max_z mu(B(z, r)) against log r over the given scales.
inline FrostmanEstimate frostman_estimate(const WeightedCloud& cloud, std::vector<double> scales) {
    if (scales.size() < 3) throw std::invalid_argument("frostman_estimate: need at least 3 scales");
    if (cloud.empty()) throw std::invalid_argument("frostman_estimate: empty cloud");
    for (double r : scales) {
        if (!(r > 0.0)) throw std::invalid_argument("frostman_estimate: scales must be positive");
        cloud.require_scale(r, "frostman_estimate");
    }
    std::sort(scales.begin(), scales.end());
    const KdTree tree(cloud);
    FrostmanEstimate out;
    out.scales = scales;
    out.max_mass.assign(scales.size(), 0.0);
    std::vector<std::vector<double>> per_point(cloud.size());
    parallel_for(cloud.size(), [&](std::size_t i) {
        per_point[i].resize(scales.size());
        for (std::size_t k = 0; k < scales.size(); ++k) per_point[i][k] = tree.ball_mass(cloud.point(i), scales[k]);
    });
    for (const auto& row : per_point)
        for (std::size_t k = 0; k < scales.size(); ++k) out.max_mass[k] = std::max(out.max_mass[k], row[k]);
    std::vector<double> lx, ly;
    for (std::size_t k = 0; k < scales.size(); ++k) {
        lx.push_back(std::log(scales[k]));
        ly.push_back(std::log(out.max_mass[k]));
    }
    const LineFit f = least_squares(lx, ly);
    out.s = f.slope;
    out.C = std::exp(f.intercept);
    return out;
}

} // namespace rproj
