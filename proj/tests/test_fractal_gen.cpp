#include "rproj/csv.hpp"
#include "rproj/fractal.hpp"
#include "rproj/spatial_index.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

using namespace rproj;

namespace {

double min_pairwise(const WeightedCloud& c) {
    double d = INFINITY;
    for (std::size_t i = 0; i < c.size(); ++i)
        for (std::size_t j = i + 1; j < c.size(); ++j) d = std::min(d, distance(c.point(i), c.point(j)));
    return d;
}

} // namespace

TEST(Cantor, PresetsHitTheRequestedDimension) {
    for (double s : {0.25, 0.5, 0.75, 1.0, 1.25, 1.5}) {
        const IFSSpec spec = cantor_preset(s, 4);
        EXPECT_NEAR(spec.similarity_dimension(), s, 1e-12) << s;
        EXPECT_NO_THROW(spec.validate());
        EXPECT_EQ(spec.axes.size(), static_cast<std::size_t>(std::ceil(2 * s - 1e-12)));
    }
    EXPECT_THROW(cantor_preset(0.0, 4), std::invalid_argument);
    EXPECT_THROW(cantor_preset(2.0, 4), std::invalid_argument);
}

TEST(Cantor, ValidateRejectsOverlap) {
    IFSSpec spec;
    spec.lambda = 0.3;
    EXPECT_THROW(spec.validate(), std::invalid_argument);
    spec.lambda = 0.25;
    spec.axes = {Axis::r, Axis::r};
    EXPECT_THROW(spec.validate(), std::invalid_argument);
    spec.axes = {Axis::r};
    spec.maps = 4;
    EXPECT_THROW(spec.validate(), std::invalid_argument);
    spec.maps = 3;
    spec.lambda = 1.0 / 6.0;
    EXPECT_NO_THROW(spec.validate());
}

TEST(Cantor, CountSeparationAndFrame) {
    for (const IFSSpec& spec : {cantor_preset(0.5, 6), cantor_preset(0.75, 4), cantor_preset(1.5, 3)}) {
        const WeightedCloud c = generate_cantor(spec);
        ASSERT_EQ(c.size(), spec.point_count());
        EXPECT_TRUE(c.is_probability());
        EXPECT_NEAR(min_pairwise(c), spec.min_separation(), 1e-12);
        ASSERT_TRUE(c.resolution().has_value());
        EXPECT_DOUBLE_EQ(*c.resolution(), spec.resolution());
        for (const Point3& p : c.points()) {
            EXPECT_TRUE(in_B0(p));
            EXPECT_GE(p.x1(), spec.frame.corner.x1());
            EXPECT_LE(p.r(), spec.frame.corner.r() + spec.frame.side);
        }
    }
}

TEST(Cantor, ThreeMapsPerAxis) {
    IFSSpec spec;
    spec.maps = 3;
    spec.lambda = 1.0 / 6.0;
    spec.depth = 4;
    const WeightedCloud c = generate_cantor(spec);
    EXPECT_EQ(c.size(), 81u);
    EXPECT_NEAR(min_pairwise(c), spec.min_separation(), 1e-12);
}

TEST(Cantor, DepthZeroIsTheFrameCentre) {
    IFSSpec spec = cantor_preset(0.5, 0, Frame::unit());
    const WeightedCloud c = generate_cantor(spec);
    ASSERT_EQ(c.size(), 1u);
    EXPECT_EQ(c.point(0), Point3(0.5, 0.5, 0.5));
}

// Lexicographic branch-code order: along the single axis the points increase.
TEST(Cantor, PointsFollowBranchCodeOrder) {
    const WeightedCloud c = generate_cantor(cantor_preset(0.5, 5, Frame::unit()));
    for (std::size_t i = 1; i < c.size(); ++i) EXPECT_LT(c.point(i - 1).r(), c.point(i).r());
    // first-level halves: the first half of the list lies in the first subinterval
    const double lambda = cantor_preset(0.5, 5).lambda;
    for (std::size_t i = 0; i < c.size() / 2; ++i) EXPECT_LT(c.point(i).r(), lambda);
}

TEST(Cantor, IndependentOfThreadCount) {
    const IFSSpec spec = cantor_preset(1.5, 3);
    thread_count() = 1;
    const WeightedCloud a = generate_cantor(spec);
    thread_count() = 4;
    const WeightedCloud b = generate_cantor(spec);
    thread_count() = 0;
    EXPECT_EQ(a.points(), b.points());
}

TEST(Cantor, SizeGuard) {
    EXPECT_THROW(generate_cantor(cantor_preset(1.5, 9)), std::invalid_argument);
}

TEST(Frostman, RecoversTheExponent) {
    const IFSSpec spec = cantor_preset(0.5, 10);
    const WeightedCloud c = generate_cantor(spec);
    std::vector<double> scales;
    for (int k = 1; k <= 6; ++k) scales.push_back(spec.frame.side * std::pow(spec.lambda, k));
    const FrostmanEstimate f = frostman_estimate(c, scales);
    EXPECT_NEAR(f.s, 0.5, 0.05);
    EXPECT_GT(f.C, 0.0);
    EXPECT_THROW(frostman_estimate(c, {0.1, 0.2}), std::invalid_argument);
    EXPECT_THROW(frostman_estimate(c, {1e-9, 0.1, 0.2}), std::invalid_argument);
}

TEST(Cone, PointsAreExactlyOnTheCone) {
    const WeightedCloud c = cone_cloud(1000, 5);
    for (const Point3& p : c.points()) EXPECT_EQ(delta_prime(p), 0.0);
    EXPECT_EQ(cone_cloud(10, 5).points(), cone_cloud(10, 5).points());
    EXPECT_NE(cone_cloud(10, 5).points(), cone_cloud(10, 6).points());
    EXPECT_THROW(cone_cloud(0, 1), std::invalid_argument);
}

TEST(Cloud, Validation) {
    EXPECT_THROW(WeightedCloud({Point3(0, 0, 1)}, {}), std::invalid_argument);
    EXPECT_THROW(WeightedCloud({Point3(0, 0, 1)}, {0.0}), std::invalid_argument);
    EXPECT_THROW(WeightedCloud::probability({Point3(0, 0, 1)}, {0.5}), std::invalid_argument);
    const WeightedCloud c({Point3(0, 0, 1), Point3(0, 0, 2)}, {2.0, 3.0}, 0.01);
    EXPECT_EQ(c.mass(), 5.0);
    EXPECT_FALSE(c.is_probability());
    EXPECT_EQ(c.diameter(), 1.0);
    EXPECT_THROW(c.require_scale(0.001, "test"), std::invalid_argument);
    EXPECT_NO_THROW(c.require_scale(0.01, "test"));
    const WeightedCloud s = c.subset({1});
    EXPECT_EQ(s.size(), 1u);
    EXPECT_EQ(s.weight(0), 3.0);
    EXPECT_EQ(s.resolution(), c.resolution());
}

// Oracle: brute-force ball masses and region queries.
TEST(KdTreeTest, BallMassMatchesBruteForce) {
    std::mt19937_64 rng(41);
    std::uniform_real_distribution<double> U(-1.0, 1.0), W(0.1, 2.0);
    std::vector<Point3> pts;
    std::vector<double> w;
    for (int i = 0; i < 5000; ++i) {
        pts.emplace_back(U(rng), U(rng), U(rng));
        w.push_back(W(rng));
    }
    const WeightedCloud c(pts, w);
    const KdTree tree(c);
    for (int q = 0; q < 500; ++q) {
        const Point3 z(U(rng), U(rng), U(rng));
        const double r = 0.5 * std::abs(U(rng));
        double brute = 0.0;
        for (std::size_t i = 0; i < c.size(); ++i)
            if (distance(c.point(i), z) <= r) brute += c.weight(i);
        EXPECT_NEAR(tree.ball_mass(z, r), brute, 1e-9);
        const auto hits = tree.collect([](const Box3&) { return BoxRelation::straddles; },
                                       [&](std::size_t i) { return c.point(i).r() > z.r(); });
        std::size_t expect = 0;
        for (const Point3& p : c.points()) expect += p.r() > z.r();
        ASSERT_EQ(hits.size(), expect);
        EXPECT_TRUE(std::is_sorted(hits.begin(), hits.end()));
    }
    const WeightedCloud empty;
    EXPECT_EQ(KdTree(empty).ball_mass(Point3(0, 0, 0), 1.0), 0.0);
}

TEST(CloudCsv, RoundTripIsExact) {
    const IFSSpec spec = cantor_preset(0.75, 3);
    const WeightedCloud c = generate_cantor(spec);
    std::stringstream ss;
    write_cloud(ss, c, spec.describe());
    const std::string text = ss.str();
    EXPECT_NE(text.find("# generator = cantor"), std::string::npos);
    const WeightedCloud back = read_cloud(ss);
    EXPECT_EQ(back.points(), c.points());
    EXPECT_EQ(back.weights(), c.weights());
    EXPECT_EQ(back.resolution(), c.resolution());
    std::stringstream again;
    write_cloud(again, back, spec.describe());
    EXPECT_EQ(again.str(), text);
}

TEST(CloudCsv, MalformedInputThrowsFormatError) {
    std::stringstream a("x1,x2,r\n1,2,3\n");
    EXPECT_THROW(read_cloud(a), FormatError);
    std::stringstream b("x1,x2,r,weight\n1,2,3\n");
    EXPECT_THROW(read_cloud(b), FormatError);
    std::stringstream c("x1,x2,r,weight\n1,2,x,1\n");
    EXPECT_THROW(read_cloud(c), FormatError);
    std::stringstream d("x1,x2,r,weight\n1,2,3,-1\n");
    EXPECT_THROW(read_cloud(d), FormatError);
    std::stringstream e("");
    EXPECT_THROW(read_cloud(e), FormatError);
    EXPECT_THROW(read_cloud_file("/nonexistent/cloud.csv"), std::ios_base::failure);
}
