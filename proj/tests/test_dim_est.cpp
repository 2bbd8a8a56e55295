#include "rproj/dimension.hpp"
#include "rproj/fractal.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <set>

using namespace rproj;

TEST(BoxCount, MatchesSetOfBins) {
    std::mt19937_64 rng(51);
    std::uniform_real_distribution<double> U(-3.0, 3.0);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<double> v(1 + rng() % 500);
        for (double& x : v) x = U(rng);
        const double delta = std::ldexp(1.0, -static_cast<int>(rng() % 10));
        std::set<std::int64_t> bins;
        for (double x : v) bins.insert(static_cast<std::int64_t>(std::floor(x / delta)));
        EXPECT_EQ(box_count_1d(v, delta), bins.size());
        std::sort(v.begin(), v.end());
        EXPECT_EQ(box_count_sorted(v, delta), bins.size());
    }
}

TEST(BoxCount, BinsAreHalfOpen) {
    EXPECT_EQ(bin_of(0.5, 0.25), 2);
    EXPECT_EQ(bin_of(-0.25, 0.25), -1);
    EXPECT_EQ(box_count_1d({0.0, 0.25, 0.4999}, 0.25), 2u);
    EXPECT_THROW(box_count_1d({}, 0.1), std::invalid_argument);
    EXPECT_THROW(box_count_1d({1.0}, 0.0), std::invalid_argument);
}

TEST(Fit, LeastSquaresOnExactLine) {
    const LineFit f = least_squares({0, 1, 2, 3}, {1, 3, 5, 7});
    EXPECT_NEAR(f.slope, 2.0, 1e-14);
    EXPECT_NEAR(f.intercept, 1.0, 1e-14);
    EXPECT_NEAR(f.r_squared, 1.0, 1e-14);
}

TEST(Fit, DimFitRecoversPowerLaw) {
    std::vector<ScaleCount> counts;
    // N = delta^-1.5 exactly on even exponents
    for (int k = 2; k <= 10; k += 2) counts.push_back({std::ldexp(1.0, -k), std::size_t{1} << (3 * k / 2)});
    const DimEstimate e = dim_fit(counts);
    EXPECT_NEAR(e.slope, 1.5, 1e-12);
    EXPECT_NEAR(e.r_squared, 1.0, 1e-12);
    EXPECT_EQ(e.delta_max, 0.25);
    EXPECT_EQ(e.delta_min, std::ldexp(1.0, -10));
    const DimEstimate inner = fit_interior(counts);
    EXPECT_EQ(inner.counts.size(), counts.size() - 2);
    EXPECT_EQ(inner.delta_max, 1.0 / 16);
}

TEST(Fit, Preconditions) {
    EXPECT_THROW(dim_fit({{0.5, 2}, {0.25, 4}}), std::invalid_argument);
    EXPECT_THROW(dim_fit({{0.5, 2}, {0.4, 3}, {0.3, 4}}), std::invalid_argument); // under 2 octaves
    EXPECT_THROW(dim_fit({{0.5, 2}, {0.25, 1}, {0.125, 4}}), std::domain_error);
    EXPECT_THROW(dim_fit({{0.5, 0}, {0.25, 1}, {0.125, 4}}), std::invalid_argument);
    EXPECT_THROW(fit_interior({{0.5, 2}, {0.25, 4}, {0.125, 8}, {0.0625, 16}}), std::invalid_argument);
}

TEST(Ladder, DyadicAndClipped) {
    const auto l = dyadic_ladder(4, 12);
    ASSERT_EQ(l.size(), 9u);
    EXPECT_EQ(l.front(), 1.0 / 16);
    EXPECT_EQ(l.back(), 1.0 / 4096);
    const auto c = dyadic_ladder(4, 12, 1e-3);
    EXPECT_EQ(c.back(), 1.0 / 512);
}

// A single-axis Cantor cloud projects to an affine copy of itself, so every
// angle sees the similarity dimension.
TEST(Projection, AffineCantorImageKeepsTheDimension) {
    const IFSSpec spec = cantor_preset(0.5, 10, Frame::unit());
    const WeightedCloud c = generate_cantor(spec);
    const auto scan = projection_dim_scan(c, theta_grid(16), dyadic_ladder(2, 14, c.resolution()));
    for (const ProjectionScan& p : scan) EXPECT_NEAR(p.fit.slope, 0.5, 0.05) << p.theta;
}

TEST(Projection, SegmentHasDimensionOne) {
    std::vector<Point3> pts;
    for (int i = 0; i < 100000; ++i) pts.emplace_back(0.0, 0.0, 0.5 + 1.5 * i / 99999.0);
    const WeightedCloud c = WeightedCloud::uniform(pts);
    const auto scan = projection_dim_scan(c, {0.0, 1.0, 2.0}, dyadic_ladder(4, 12));
    for (const ProjectionScan& p : scan) EXPECT_NEAR(p.fit.slope, 1.0, 0.02);
    // the degenerate curve flattens the segment to a point
    const auto flat = projection_dim_scan(c, {0.0, 1.0}, dyadic_ladder(4, 12), CurveKind::degenerate);
    for (const ProjectionScan& p : flat) EXPECT_NEAR(p.fit.slope, 0.0, 1e-12);
}

TEST(Projection, RejectsScalesBelowResolution) {
    const WeightedCloud c = generate_cantor(cantor_preset(0.5, 4));
    EXPECT_THROW(projection_dim_scan(c, {0.0}, dyadic_ladder(4, 12)), std::invalid_argument);
}

TEST(Projection, ThetaGrid) {
    const auto g = theta_grid(720);
    ASSERT_EQ(g.size(), 720u);
    EXPECT_EQ(g[0], 0.0);
    EXPECT_NEAR(g[360], std::numbers::pi, 1e-15);
}

// Slice consistency: the union count is the sum of its columns.
TEST(WaveUnion, SliceConsistency) {
    const WeightedCloud c = generate_cantor(cantor_preset(0.5, 6));
    for (double delta : {1.0 / 16, 1.0 / 64, 1.0 / 256}) {
        const auto columns = static_cast<std::size_t>(std::ceil(two_pi / delta));
        std::size_t sum = 0;
        for (std::size_t i = 0; i < columns; ++i) sum += wave_column_count(c, i * delta, delta);
        EXPECT_EQ(wave_union_count(c, delta), sum);
    }
}

TEST(WaveUnion, SingleWaveIsACurve) {
    const WeightedCloud c = WeightedCloud::counting({Point3(0.2, 0.1, 1.0)});
    const DimEstimate e = union_wave_dim(c, dyadic_ladder(4, 12));
    EXPECT_NEAR(e.slope, 1.0, 0.05);
}

TEST(CircleUnion, CountsGrowAsDeltaShrinks) {
    const WeightedCloud c = generate_cantor(cantor_preset(0.5, 6));
    std::size_t prev = 0;
    for (int k = 3; k <= 10; ++k) {
        const std::size_t n = circle_union_count(c, std::ldexp(1.0, -k));
        EXPECT_GE(n, prev);
        prev = n;
    }
}

// Oracle: boxes hit by a much denser sampling of the same circles.
TEST(CircleUnion, AgreesWithDenseSampling) {
    const WeightedCloud c = WeightedCloud::counting({Point3(0.1, -0.05, 1.0), Point3(-0.2, 0.1, 0.7)});
    for (double delta : {1.0 / 32, 1.0 / 128}) {
        std::set<std::pair<std::int64_t, std::int64_t>> dense;
        for (const Point3& z : c.points()) {
            const std::size_t n = static_cast<std::size_t>(200 * two_pi * z.r() / delta);
            for (std::size_t k = 0; k < n; ++k) {
                const double a = two_pi * k / n;
                dense.insert({bin_of(z.x1() + z.r() * std::cos(a), delta), bin_of(z.x2() + z.r() * std::sin(a), delta)});
            }
        }
        const std::size_t fast = circle_union_count(c, delta);
        EXPECT_LE(fast, dense.size() + 4);
        EXPECT_GE(static_cast<double>(fast), 0.9 * dense.size());
    }
}

TEST(CircleUnion, SingleCircleIsACurveAndB0IsEnforced) {
    const WeightedCloud c = WeightedCloud::counting({Point3(0.0, 0.0, 1.0)});
    EXPECT_NEAR(union_circle_dim(c, dyadic_ladder(4, 12)).slope, 1.0, 0.05);
    EXPECT_THROW(union_circle_dim(WeightedCloud::counting({Point3(1.0, 0.0, 1.0)}), dyadic_ladder(4, 12)),
                 std::invalid_argument);
}
