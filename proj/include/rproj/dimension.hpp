#pragma once

// Box-counting dimension of projections, wave unions and circle unions.
// Box dimension stands in for Hausdorff dimension; the two agree on the
// strongly separated self-similar clouds this library generates.

#include "rproj/circle.hpp"
#include "rproj/cloud.hpp"
#include "rproj/curve.hpp"
#include "rproj/fit.hpp"
#include "rproj/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace rproj {

/// Half-open bin [k delta, (k + 1) delta) containing v.
inline std::int64_t bin_of(double v, double delta) noexcept {
    return static_cast<std::int64_t>(std::floor(v / delta));
}

/// Number of distinct delta-bins hit by the values.
inline std::size_t box_count_1d(std::vector<double> values, double delta) {
    if (!(delta > 0.0)) throw std::invalid_argument("box_count_1d: delta must be positive");
    if (values.empty()) throw std::invalid_argument("box_count_1d: empty input");
    std::sort(values.begin(), values.end());
    std::size_t count = 0;
    std::int64_t last = 0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        const std::int64_t b = bin_of(values[i], delta);
        if (i == 0 || b != last) ++count;
        last = b;
    }
    return count;
}

/// Distinct bins of already sorted values; identical to box_count_1d.
inline std::size_t box_count_sorted(const std::vector<double>& sorted, double delta) {
    std::size_t count = 0;
    std::int64_t last = 0;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        const std::int64_t b = bin_of(sorted[i], delta);
        if (i == 0 || b != last) ++count;
        last = b;
    }
    return count;
}

struct ScaleCount {
    double delta;
    std::size_t count;
};

struct DimEstimate {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 1.0;
    double delta_min = 0.0;
    double delta_max = 0.0;
    std::vector<ScaleCount> counts; ///< the fitted counts, largest delta first
};

/// Least-squares slope of log N_delta against log(1/delta). Needs >= 3 scales
/// spanning >= 2 octaves, and N_delta must not decrease as delta shrinks.
inline DimEstimate dim_fit(std::vector<ScaleCount> counts) {
    std::sort(counts.begin(), counts.end(), [](const ScaleCount& a, const ScaleCount& b) { return a.delta > b.delta; });
    if (counts.size() < 3) throw std::invalid_argument("dim_fit: need at least 3 scales");
    if (!(counts.front().delta >= 4.0 * counts.back().delta * (1.0 - 1e-12)))
        throw std::invalid_argument("dim_fit: scales must span at least 2 octaves");
    std::vector<double> x, y;
    for (std::size_t i = 0; i < counts.size(); ++i) {
        if (!(counts[i].delta > 0.0) || counts[i].count == 0) throw std::invalid_argument("dim_fit: bad scale or count");
        if (i > 0 && counts[i].delta == counts[i - 1].delta) throw std::invalid_argument("dim_fit: repeated scale");
        if (i > 0 && counts[i].count < counts[i - 1].count)
            throw std::domain_error("dim_fit: count decreased as delta shrank");
        x.push_back(std::log(1.0 / counts[i].delta));
        y.push_back(std::log(static_cast<double>(counts[i].count)));
    }
    const LineFit f = least_squares(x, y);
    DimEstimate d;
    d.slope = f.slope;
    d.intercept = f.intercept;
    d.r_squared = f.r_squared;
    d.delta_max = counts.front().delta;
    d.delta_min = counts.back().delta;
    d.counts = std::move(counts);
    return d;
}

/// Dyadic ladder 2^-coarse ... 2^-fine, dropping scales below the resolution.
inline std::vector<double> dyadic_ladder(int coarse = 4, int fine = 12, std::optional<double> resolution = std::nullopt) {
    std::vector<double> out;
    for (int k = coarse; k <= fine; ++k) {
        const double d = std::ldexp(1.0, -k);
        if (!resolution || d >= *resolution) out.push_back(d);
    }
    return out;
}

/// Counts at every scale of the ladder; the fit uses all but the two extreme scales.
inline DimEstimate fit_interior(const std::vector<ScaleCount>& all) {
    std::vector<ScaleCount> sorted = all;
    std::sort(sorted.begin(), sorted.end(), [](const ScaleCount& a, const ScaleCount& b) { return a.delta > b.delta; });
    if (sorted.size() < 5) throw std::invalid_argument("fit_interior: need at least 5 scales");
    return dim_fit(std::vector<ScaleCount>(sorted.begin() + 1, sorted.end() - 1));
}

inline void check_ladder(const WeightedCloud& cloud, const std::vector<double>& scales, const char* what) {
    if (scales.empty()) throw std::invalid_argument(std::string(what) + ": empty scale ladder");
    for (double d : scales) {
        if (!(d > 0.0)) throw std::invalid_argument(std::string(what) + ": scales must be positive");
        cloud.require_scale(d, what);
    }
}

struct ProjectionScan {
    double theta;
    std::vector<ScaleCount> counts;
    DimEstimate fit;
};

/// Box dimension of the projection theta -> {proj_theta(z)} for each theta.
inline std::vector<ProjectionScan> projection_dim_scan(const WeightedCloud& cloud, const std::vector<double>& thetas,
                                                       const std::vector<double>& scales,
                                                       CurveKind kind = CurveKind::special) {
    check_ladder(cloud, scales, "projection_dim_scan");
    if (cloud.empty()) throw std::invalid_argument("projection_dim_scan: empty cloud");
    std::vector<ProjectionScan> out(thetas.size());
    parallel_for(thetas.size(), [&](std::size_t i) {
        std::vector<double> v(cloud.size());
        for (std::size_t j = 0; j < cloud.size(); ++j) v[j] = project(kind, thetas[i], cloud.point(j));
        std::sort(v.begin(), v.end());
        out[i].theta = thetas[i];
        for (double d : scales) out[i].counts.push_back({d, box_count_sorted(v, d)});
        out[i].fit = fit_interior(out[i].counts);
    });
    return out;
}

/// Uniform grid of n angles k * 2pi / n.
inline std::vector<double> theta_grid(std::size_t n = 720) {
    std::vector<double> out(n);
    for (std::size_t k = 0; k < n; ++k) out[k] = two_pi * static_cast<double>(k) / static_cast<double>(n);
    return out;
}

/// Number of delta-boxes hit by the column theta = i delta of the wave union:
/// the 1D box count of the projection at that angle.
inline std::size_t wave_column_count(const WeightedCloud& cloud, double theta, double delta) {
    std::vector<double> v(cloud.size());
    for (std::size_t j = 0; j < cloud.size(); ++j) v[j] = rho(theta, cloud.point(j));
    return box_count_1d(std::move(v), delta);
}

/// Box count of the union of the graphs theta -> rho_theta(z), theta in
/// [0, 2pi), sampled on the grid theta_i = i delta: boxes are
/// (i, floor(rho_{theta_i}(z) / delta)). Dyadic scales give nested grids.
inline std::size_t wave_union_count(const WeightedCloud& cloud, double delta) {
    const auto columns = static_cast<std::size_t>(std::ceil(two_pi / delta));
    std::vector<std::size_t> per(columns);
    parallel_for(columns, [&](std::size_t i) { per[i] = wave_column_count(cloud, static_cast<double>(i) * delta, delta); });
    std::size_t total = 0;
    for (std::size_t c : per) total += c;
    return total;
}

inline DimEstimate union_wave_dim(const WeightedCloud& cloud, const std::vector<double>& scales) {
    check_ladder(cloud, scales, "union_wave_dim");
    if (cloud.empty()) throw std::invalid_argument("union_wave_dim: empty cloud");
    std::vector<ScaleCount> counts;
    for (double d : scales) counts.push_back({d, wave_union_count(cloud, d)});
    return fit_interior(counts);
}

/// Box count of the union of circles, each sampled at angular points
/// 2pi k / n with n the smallest power of two giving arc spacing <= delta / 2,
/// so the samples at delta / 2 contain those at delta.
inline std::size_t circle_union_count(const WeightedCloud& cloud, double delta) {
    double xmin = INFINITY, xmax = -INFINITY, ymin = INFINITY, ymax = -INFINITY;
    for (const Point3& z : cloud.points()) {
        if (!(z.r() > 0.0)) throw std::invalid_argument("circle_union_count: radii must be positive");
        xmin = std::min(xmin, z.x1() - z.r());
        xmax = std::max(xmax, z.x1() + z.r());
        ymin = std::min(ymin, z.x2() - z.r());
        ymax = std::max(ymax, z.x2() + z.r());
    }
    const std::int64_t bx0 = bin_of(xmin, delta) - 1, by0 = bin_of(ymin, delta) - 1;
    const auto width = static_cast<std::size_t>(bin_of(xmax, delta) - bx0 + 2);
    const auto height = static_cast<std::size_t>(bin_of(ymax, delta) - by0 + 2);

    auto samples_for = [&](double r) {
        std::size_t n = 8;
        while (two_pi * r / static_cast<double>(n) > delta / 2.0) n *= 2;
        return n;
    };
    auto box_index = [&](const Point3& z, std::size_t k, std::size_t n) {
        const double a = two_pi * static_cast<double>(k) / static_cast<double>(n);
        const auto bx = static_cast<std::size_t>(bin_of(z.x1() + z.r() * std::cos(a), delta) - bx0);
        const auto by = static_cast<std::size_t>(bin_of(z.x2() + z.r() * std::sin(a), delta) - by0);
        return by * width + bx;
    };

    std::vector<std::uint64_t> bits((width * height + 63) / 64, 0);
    for (const Point3& z : cloud.points()) {
        const std::size_t n = samples_for(z.r());
        for (std::size_t k = 0; k < n; ++k) {
            const std::size_t b = box_index(z, k, n);
            bits[b >> 6] |= std::uint64_t{1} << (b & 63);
        }
    }
    std::size_t total = 0;
    for (std::uint64_t w : bits) total += static_cast<std::size_t>(__builtin_popcountll(w));
    return total;
}

inline DimEstimate union_circle_dim(const WeightedCloud& cloud, const std::vector<double>& scales) {
    check_ladder(cloud, scales, "union_circle_dim");
    if (cloud.empty()) throw std::invalid_argument("union_circle_dim: empty cloud");
    for (const Point3& z : cloud.points())
        if (!in_B0(z)) throw std::invalid_argument("union_circle_dim: cloud must lie in B0");
    std::vector<ScaleCount> counts;
    for (double d : scales) counts.push_back({d, circle_union_count(cloud, d)});
    return fit_interior(counts);
}

} // namespace rproj
