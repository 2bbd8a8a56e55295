#pragma once

// Seeded empirical studies of the geometric estimates. Every sample draws
// from its own generator (seeded by mix_seed(seed, index)), samples run in
// parallel into indexed slots, and results are folded in index order, so the
// output depends only on the seed.

#include "rproj/corpus.hpp"
#include "rproj/curve.hpp"
#include "rproj/dimension.hpp"
#include "rproj/incidence.hpp"
#include "rproj/rectangle.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

namespace rproj {

/// The incidence-bound constant fixed by calibrating on calibration_corpus()
/// with eps = 0.05: the largest family / bound ratio observed at C_eps = 1.
inline constexpr double wolff_reference_C_eps = 0.43933982822017875;
inline constexpr double wolff_eps = 0.05;

struct StabilityGate {
    double max = 0.0;
    double median = 0.0;
    bool stable = false;
};

/// Constant K measured per scale is stable when its maximum is within twice its median.
inline StabilityGate stability(std::vector<double> per_scale) {
    StabilityGate g;
    if (per_scale.empty()) return g;
    std::sort(per_scale.begin(), per_scale.end());
    const std::size_t n = per_scale.size();
    g.median = n % 2 ? per_scale[n / 2] : 0.5 * (per_scale[n / 2 - 1] + per_scale[n / 2]);
    g.max = per_scale.back();
    g.stable = g.max <= 2.0 * g.median;
    return g;
}

inline std::vector<double> dyadic_scales(int k_lo, int k_hi) {
    std::vector<double> out;
    for (int k = k_lo; k <= k_hi; ++k) out.push_back(std::ldexp(1.0, -k));
    return out;
}

// ---------------------------------------------------------------------------

struct TangencyIdentityStudy {
    std::size_t samples = 0;
    double max_rel_error = 0.0;
    std::size_t sandwich_violations = 0;
    bool pass(double tol = 1e-9) const { return max_rel_error <= tol && sandwich_violations == 0; }
};

/// Delta over the full circle against Delta' on z uniform in [-2, 2]^3.
inline TangencyIdentityStudy tangency_identity_study(std::uint64_t seed, std::size_t n) {
    std::vector<double> err(n);
    std::vector<char> bad(n);
    parallel_for(n, [&](std::size_t i) {
        std::mt19937_64 rng(mix_seed(seed, i));
        std::uniform_real_distribution<double> U(-2.0, 2.0);
        const Point3 z(U(rng), U(rng), U(rng));
        const double D = delta_J(z, ThetaInterval::full_circle());
        const double Dp = delta_prime(z);
        const double a = D * std::numbers::sqrt2;
        const double scale = std::max(std::abs(a), std::abs(Dp));
        err[i] = scale > 0.0 ? std::abs(a - Dp) / scale : 0.0;
        bad[i] = !(D <= Dp && Dp <= 2.0 * D) && !(D == 0.0 && Dp == 0.0);
    });
    TangencyIdentityStudy s;
    s.samples = n;
    for (std::size_t i = 0; i < n; ++i) {
        s.max_rel_error = std::max(s.max_rel_error, err[i]);
        s.sandwich_violations += bad[i];
    }
    return s;
}

// ---------------------------------------------------------------------------

struct EdeltaRow {
    double delta = 0.0;
    std::size_t samples = 0;
    std::size_t nonempty = 0;
    std::size_t max_components = 0;
    double K_component = 0.0; ///< max of length * sqrt((Delta + delta)|z|) / delta
    double K_envelope = 0.0;  ///< max of (max distance to theta0) / sqrt((Delta + delta)/|z|)
};

struct EdeltaStudy {
    std::vector<EdeltaRow> rows;
    StabilityGate component;
    StabilityGate envelope;
    std::size_t max_components = 0;
    bool pass() const { return max_components <= 2 && component.stable && envelope.stable; }
};

/// Draws (z, delta) with |z| >= 100 delta: half uniform in [-2, 2]^3, half
/// within a log-uniform distance of the cone with the tangency minimiser in J/2.
inline EdeltaStudy edelta_study(std::uint64_t seed, std::size_t total, int k_lo = 6, int k_hi = 14,
                                ThetaInterval J = ThetaInterval::centred(0.5 * std::numbers::pi, 0.5)) {
    const std::vector<double> deltas = dyadic_scales(k_lo, k_hi);
    struct Sample {
        std::size_t components = 0;
        bool nonempty = false;
        double kc = 0.0, ke = 0.0;
    };
    std::vector<Sample> out(total);
    const ThetaInterval half = J.half();
    parallel_for(total, [&](std::size_t i) {
        std::mt19937_64 rng(mix_seed(seed, i));
        std::uniform_real_distribution<double> U(0.0, 1.0);
        const double d = deltas[i % deltas.size()];
        Point3 z;
        do {
            if ((i / deltas.size()) % 2 == 0) {
                z = Point3(4 * U(rng) - 2, 4 * U(rng) - 2, 4 * U(rng) - 2);
            } else {
                const double a = 0.05 + 1.95 * U(rng);
                const double th = half.lo() + half.length() * U(rng);
                const double phi = th + std::numbers::pi; // minimiser is phi + pi for r > 0
                const double dp = d * std::pow(10.0, 4.0 * U(rng) - 2.0);
                double r = a + (U(rng) < 0.5 ? dp : -dp);
                if (r <= 0.0) r = a + dp;
                z = Point3(a * std::cos(phi), a * std::sin(phi), r);
            }
        } while (z.norm() < 100.0 * d);
        const IntervalSet E = e_delta_set(z, d, J);
        const double D = delta_J(z, J);
        const double n = z.norm();
        Sample s;
        s.components = E.size();
        s.nonempty = !E.empty();
        for (const Arc& c : E.components()) s.kc = std::max(s.kc, c.length() * std::sqrt((D + d) * n) / d);
        if (s.nonempty) {
            const auto cps = *critical_points(z);
            double best = INFINITY;
            for (double t0 : cps) {
                double far = 0.0;
                for (const Arc& c : E.components())
                    far = std::max({far, std::abs(angle_diff(c.lo, t0)), std::abs(angle_diff(c.hi, t0))});
                best = std::min(best, far);
            }
            s.ke = best / std::sqrt((D + d) / n);
        }
        out[i] = s;
    });
    EdeltaStudy st;
    st.rows.resize(deltas.size());
    for (std::size_t k = 0; k < deltas.size(); ++k) st.rows[k].delta = deltas[k];
    for (std::size_t i = 0; i < total; ++i) {
        EdeltaRow& r = st.rows[i % deltas.size()];
        const Sample& s = out[i];
        ++r.samples;
        r.nonempty += s.nonempty;
        r.max_components = std::max(r.max_components, s.components);
        r.K_component = std::max(r.K_component, s.kc);
        r.K_envelope = std::max(r.K_envelope, s.ke);
    }
    std::vector<double> kc, ke;
    for (const EdeltaRow& r : st.rows) {
        kc.push_back(r.K_component);
        ke.push_back(r.K_envelope);
        st.max_components = std::max(st.max_components, r.max_components);
    }
    st.component = stability(kc);
    st.envelope = stability(ke);
    return st;
}

// ---------------------------------------------------------------------------

namespace detail {

inline Point3 random_B0_point(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> U(0.0, 1.0);
    const double a = 0.25 * std::sqrt(U(rng));
    const double ph = two_pi * U(rng);
    return {a * std::cos(ph), a * std::sin(ph), 0.5 + 1.5 * U(rng)};
}

// Partner of z1 in B0 with ||x1 - x2| - |r1 - r2|| = |defect| (sign random).
inline Point3 partner_with_defect(const Point3& z1, std::mt19937_64& rng, double defect) {
    std::uniform_real_distribution<double> U(0.0, 1.0);
    while (true) {
        const double r2 = 0.5 + 1.5 * U(rng);
        const double D = std::abs(z1.r() - r2) + (U(rng) < 0.5 ? defect : -defect);
        if (D <= 0.0 || r2 == z1.r()) continue;
        const Vec2 x = z1.x() + unit_vector(two_pi * U(rng)) * D;
        if (x.norm() <= 0.25) return {x.x, x.y, r2};
    }
}

} // namespace detail

struct CircleLemmaRow {
    double delta = 0.0;
    std::size_t pairs = 0;
    std::size_t nonempty = 0;
    double K_zeta = 0.0; ///< max |p - zeta| / sqrt((Delta' + delta)/(t + delta))
    double K_arc = 0.0;  ///< max lobe arc / (delta / sqrt((Delta' + delta)(t + delta)))
    double K_area = 0.0; ///< max area / (delta^2 / sqrt((Delta' + delta)(t + delta)))
};

struct CircleLemmaStudy {
    std::vector<CircleLemmaRow> rows;
    StabilityGate zeta;
    StabilityGate arc;
    bool pass() const { return zeta.stable && arc.stable; }
};

/// B0 pairs, a third each: independent uniform, delta-incident (|Delta'| < delta),
/// and log-uniform Delta' in [1e-4, 10^-0.5]. Intersections are sampled from
/// S^delta(c1) at oversampling 8.
inline CircleLemmaStudy circle_lemma_study(std::uint64_t seed, std::size_t total, int k_lo = 6, int k_hi = 12,
                                           double oversampling = 8.0) {
    const std::vector<double> deltas = dyadic_scales(k_lo, k_hi);
    struct Sample {
        bool valid = false, nonempty = false;
        double kz = 0.0, ka = 0.0, kr = 0.0;
    };
    std::vector<Sample> out(total);
    parallel_for(total, [&](std::size_t i) {
        std::mt19937_64 rng(mix_seed(seed, i));
        std::uniform_real_distribution<double> U(0.0, 1.0);
        const double d = deltas[i % deltas.size()];
        const Point3 z1 = detail::random_B0_point(rng);
        Point3 z2;
        switch ((i / deltas.size()) % 3) {
        case 0: z2 = detail::random_B0_point(rng); break;
        case 1: z2 = detail::partner_with_defect(z1, rng, d * U(rng)); break;
        default: z2 = detail::partner_with_defect(z1, rng, std::pow(10.0, -4.0 + 3.5 * U(rng))); break;
        }
        Sample s;
        if (z1.r() == z2.r() || z1.x() == z2.x()) {
            out[i] = s;
            return;
        }
        s.valid = true;
        const Circle c1(z1), c2(z2);
        const IncidenceParams p = incidence_params(z1, z2);
        const std::size_t n = annulus_sample_count(c1, d, oversampling);
        const auto kept = annulus_intersection_samples(c1, c2, d, n, rng);
        if (!kept.empty()) {
            s.nonempty = true;
            const IntersectionShape sh = intersection_shape(c1, c2, d, kept, n);
            const double root = std::sqrt((p.delta_prime + d) * (p.t + d));
            s.kz = sh.max_dist_to_zeta / std::sqrt((p.delta_prime + d) / (p.t + d));
            s.ka = sh.max_lobe_arc / (d / root);
            s.kr = sh.area / (d * d / root);
        }
        out[i] = s;
    });
    CircleLemmaStudy st;
    st.rows.resize(deltas.size());
    for (std::size_t k = 0; k < deltas.size(); ++k) st.rows[k].delta = deltas[k];
    for (std::size_t i = 0; i < total; ++i) {
        if (!out[i].valid) continue;
        CircleLemmaRow& r = st.rows[i % deltas.size()];
        ++r.pairs;
        r.nonempty += out[i].nonempty;
        r.K_zeta = std::max(r.K_zeta, out[i].kz);
        r.K_arc = std::max(r.K_arc, out[i].ka);
        r.K_area = std::max(r.K_area, out[i].kr);
    }
    std::vector<double> kz, ka;
    for (const CircleLemmaRow& r : st.rows) {
        kz.push_back(r.K_zeta);
        ka.push_back(r.K_arc);
    }
    st.zeta = stability(kz);
    st.arc = stability(ka);
    return st;
}

// ---------------------------------------------------------------------------

struct IncidenceTangencyStudy {
    std::size_t pairs = 0;
    std::vector<double> C;
    std::vector<std::size_t> passed; ///< per C: pairs with both circles C-tangent
};

/// delta-incident B0 pairs with t >= delta, delta cycling over 2^-6..2^-12.
inline IncidenceTangencyStudy incidence_tangency_study(std::uint64_t seed, std::size_t n,
                                                       std::vector<double> Cs = {2.0, 4.0, 8.0}) {
    const std::vector<double> deltas = dyadic_scales(6, 12);
    std::vector<std::vector<char>> ok(n, std::vector<char>(Cs.size(), 0));
    parallel_for(n, [&](std::size_t i) {
        std::mt19937_64 rng(mix_seed(seed, i));
        std::uniform_real_distribution<double> U(0.0, 1.0);
        const double d = deltas[i % deltas.size()];
        Point3 z1, z2;
        do {
            z1 = detail::random_B0_point(rng);
            z2 = detail::partner_with_defect(z1, rng, d * U(rng));
        } while (distance(z1, z2) < d);
        const Circle c1(z1), c2(z2);
        const DeltaTRect R = rect_from_incident_pair(c1, c2, d);
        for (std::size_t k = 0; k < Cs.size(); ++k) ok[i][k] = is_tangent(c1, R, Cs[k]) && is_tangent(c2, R, Cs[k]);
    });
    IncidenceTangencyStudy st;
    st.pairs = n;
    st.C = Cs;
    st.passed.assign(Cs.size(), 0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < Cs.size(); ++k) st.passed[k] += ok[i][k];
    return st;
}

// ---------------------------------------------------------------------------

struct ProjectionStudy {
    std::vector<ProjectionScan> scan;
    double target = 0.0;
    double band = 0.1;
    double fraction_in_band = 0.0;
    double min_slope = 0.0;
    double max_slope = 0.0;
};

inline ProjectionStudy projection_study(const WeightedCloud& cloud, const std::vector<double>& thetas,
                                        const std::vector<double>& ladder, double target, double band = 0.1,
                                        CurveKind kind = CurveKind::special) {
    ProjectionStudy st;
    st.scan = projection_dim_scan(cloud, thetas, ladder, kind);
    st.target = target;
    st.band = band;
    std::size_t in = 0;
    st.min_slope = INFINITY;
    st.max_slope = -INFINITY;
    for (const ProjectionScan& p : st.scan) {
        if (std::abs(p.fit.slope - target) <= band) ++in;
        st.min_slope = std::min(st.min_slope, p.fit.slope);
        st.max_slope = std::max(st.max_slope, p.fit.slope);
    }
    st.fraction_in_band = st.scan.empty() ? 0.0 : static_cast<double>(in) / static_cast<double>(st.scan.size());
    return st;
}

/// Concentric circles of every radius in [1/2, 2] at spacing fine_delta / 2.
inline WeightedCloud radius_family(double fine_delta) {
    const auto n = static_cast<std::size_t>(std::ceil(1.5 / (0.5 * fine_delta))) + 1;
    std::vector<Point3> pts;
    for (std::size_t i = 0; i < n; ++i) pts.emplace_back(0.0, 0.0, 0.5 + 1.5 * static_cast<double>(i) / static_cast<double>(n - 1));
    return WeightedCloud::uniform(std::move(pts));
}

/// Points (0, 0, r_i), r_i in [1/2, 2]: the projection control for the degenerate curve.
inline WeightedCloud vertical_axis_cloud(std::size_t n) {
    std::vector<Point3> pts;
    for (std::size_t i = 0; i < n; ++i)
        pts.emplace_back(0.0, 0.0, 0.5 + 1.5 * static_cast<double>(i) / static_cast<double>(std::max<std::size_t>(n - 1, 1)));
    return WeightedCloud::uniform(std::move(pts));
}

// ---------------------------------------------------------------------------

struct WolffRow {
    std::string name;
    WolffCount count;
};

/// Ratios family / bound over the calibration corpus for the given C_eps.
inline std::vector<WolffRow> wolff_corpus_study(double C_eps, double eps = wolff_eps, double C0 = default_C0) {
    const std::vector<CorpusCase> corpus = calibration_corpus();
    std::vector<WolffRow> rows(corpus.size());
    parallel_for(corpus.size(), [&](std::size_t i) {
        const CorpusCase& c = corpus[i];
        rows[i] = {c.name, wolff_count(c.pair, c.delta, c.m, c.n, eps, C_eps, C0)};
    });
    return rows;
}

// ---------------------------------------------------------------------------

struct FubiniStudy {
    std::size_t trials = 0;
    std::size_t violations = 0;
    double worked_example_kids = 0.0; ///< mu2(pi2(E)) in the 10 x 3 x 2 example
    bool worked_example_holds = false;
};

/// The worked example: 10 parents with 3 kids each, every kid with 2 parents.
inline std::vector<std::pair<std::size_t, std::size_t>> parents_and_kids() {
    std::vector<std::pair<std::size_t, std::size_t>> E;
    for (std::size_t p = 0; p < 10; ++p)
        for (std::size_t j = 0; j < 3; ++j) E.emplace_back(p, (3 * p + j) % 15);
    return E;
}

/// Random bipartite incidence structures with random positive weights; C2 and
/// C1 are set to the tightest values the preconditions allow.
inline FubiniStudy fubini_study(std::uint64_t seed, std::size_t trials) {
    FubiniStudy st;
    st.trials = trials;
    for (std::size_t trial = 0; trial < trials; ++trial) {
        std::mt19937_64 rng(mix_seed(seed, trial));
        std::uniform_int_distribution<std::size_t> size(1, 20);
        std::uniform_real_distribution<double> U(0.0, 1.0);
        const std::size_t n1 = size(rng), n2 = size(rng);
        const double density = U(rng);
        std::vector<double> mu1(n1), mu2(n2);
        for (double& w : mu1) w = 0.05 + U(rng);
        for (double& w : mu2) w = 0.05 + U(rng);
        std::vector<std::pair<std::size_t, std::size_t>> E;
        for (std::size_t a = 0; a < n1; ++a)
            for (std::size_t b = 0; b < n2; ++b)
                if (U(rng) < density) E.emplace_back(a, b);
        if (E.empty()) {
            if (!double_count_check(E, mu1, mu2, 1.0, 1.0)) ++st.violations;
            continue;
        }
        std::vector<double> f1(n1, 0.0), f2(n2, 0.0);
        std::vector<char> in1(n1, 0), in2(n2, 0);
        for (const auto& [a, b] : E) {
            f1[a] += mu2[b];
            f2[b] += mu1[a];
            in1[a] = in2[b] = 1;
        }
        double C2 = INFINITY, C1 = 0.0;
        for (std::size_t a = 0; a < n1; ++a)
            if (in1[a]) C2 = std::min(C2, f1[a]);
        for (std::size_t b = 0; b < n2; ++b)
            if (in2[b]) C1 = std::max(C1, f2[b]);
        if (!double_count_check(E, mu1, mu2, C1, C2)) ++st.violations;
    }
    const auto E = parents_and_kids();
    const std::vector<double> ones1(10, 1.0), ones2(15, 1.0);
    st.worked_example_holds = double_count_check(E, ones1, ones2, 2.0, 3.0);
    std::vector<char> kid(15, 0);
    for (const auto& e : E) kid[e.second] = 1;
    st.worked_example_kids = static_cast<double>(std::count(kid.begin(), kid.end(), 1));
    return st;
}

} // namespace rproj
