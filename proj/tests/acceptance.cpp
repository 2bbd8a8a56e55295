// Acceptance suite: one PASS/FAIL line per criterion, with the tolerance and
// time budget of each check fixed below. Exit status is nonzero on any FAIL.

#include "rproj/experiment.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>

using namespace rproj;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool ok = false;
    std::string detail;
};

int failures = 0;

void criterion(int id, const std::string& name, double budget_s, const std::function<Outcome()>& body) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
        o = body();
    } catch (const std::exception& e) {
        o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = secs <= budget_s;
    const bool pass = o.ok && in_time;
    if (!pass) ++failures;
    std::printf("%s criterion %d: %s | %s | %.1fs of %.0fs%s\n", pass ? "PASS" : "FAIL", id, name.c_str(),
                o.detail.c_str(), secs, budget_s, in_time ? "" : " (over budget)");
    std::fflush(stdout);
}

std::string f3(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.4g", x);
    return buf;
}

std::map<std::string, std::string> snapshot(const fs::path& dir) {
    std::map<std::string, std::string> files;
    for (const auto& e : fs::recursive_directory_iterator(dir)) {
        if (!e.is_regular_file()) continue;
        std::ifstream in(e.path(), std::ios::binary);
        std::stringstream ss;
        ss << in.rdbuf();
        files[fs::relative(e.path(), dir).string()] = ss.str();
    }
    return files;
}

} // namespace

int main() {
    // 1. Tangency identity, Delta over the full circle = Delta' / sqrt 2.
    criterion(1, "tangency identity on 1e5 points", 5.0, [] {
        const TangencyIdentityStudy st = tangency_identity_study(101, 100000);
        return Outcome{st.pass(1e-9), "max rel error " + f3(st.max_rel_error) + ", sandwich violations " +
                                          std::to_string(st.sandwich_violations)};
    });

    // 2. Sublevel sets: at most two components, scale-stable constants.
    criterion(2, "E_delta structure, delta 2^-6..2^-14", 30.0, [] {
        const EdeltaStudy st = edelta_study(20240601, 10000, 6, 14);
        return Outcome{st.pass(), "components <= " + std::to_string(st.max_components) + ", K_comp max/median " +
                                      f3(st.component.max) + "/" + f3(st.component.median) + ", K_env " +
                                      f3(st.envelope.max) + "/" + f3(st.envelope.median)};
    });

    // 3. Intersection of two annuli, constants stable within 2x.
    criterion(3, "circle intersection lemma on 1e4 pairs", 120.0, [] {
        const CircleLemmaStudy st = circle_lemma_study(20240602, 10000, 6, 12);
        return Outcome{st.pass(), "K_zeta max/median " + f3(st.zeta.max) + "/" + f3(st.zeta.median) +
                                      ", K_arc " + f3(st.arc.max) + "/" + f3(st.arc.median)};
    });

    // 4. Every incident pair spans a rectangle tangent to both circles at C0.
    criterion(4, "incident pairs C0-tangent", 60.0, [] {
        const IncidenceTangencyStudy st = incidence_tangency_study(20240603, 10000, {default_C0});
        return Outcome{st.passed[0] == st.pairs,
                       std::to_string(st.passed[0]) + "/" + std::to_string(st.pairs) + " at C0 = " + f3(default_C0)};
    });

    // 5. Restricted projections over 720 angles, plus the degenerate control.
    criterion(5, "projection scans s=0.75, s=1.5, degenerate control", 300.0, [] {
        const auto thetas = theta_grid(720);
        const Generated a = generate_from_spec("cantor:s=0.75,depth=8", std::nullopt);
        const ProjectionStudy pa = projection_study(a.cloud, thetas, dyadic_ladder(4, 12, a.cloud.resolution()), 0.75, 0.1);
        const Generated b = generate_from_spec("cantor:s=1.5,depth=6", std::nullopt);
        const ProjectionStudy pb = projection_study(b.cloud, thetas, dyadic_ladder(4, 12, b.cloud.resolution()), 1.0, 0.1);
        const WeightedCloud axis = vertical_axis_cloud(4097);
        const ProjectionStudy pc =
            projection_study(axis, thetas, dyadic_ladder(4, 12), 0.0, 0.05, CurveKind::degenerate);
        const bool ok = a.cloud.size() >= (1u << 16) && pa.fraction_in_band >= 0.9 && pb.fraction_in_band >= 0.9 &&
                        pc.max_slope <= 0.05;
        return Outcome{ok, "s=0.75 (" + std::to_string(a.cloud.size()) + " pts) in band " + f3(pa.fraction_in_band) +
                               ", s=1.5 in band " + f3(pb.fraction_in_band) + ", degenerate max slope " +
                               f3(pc.max_slope)};
    });

    // 6. Union dimensions.
    criterion(6, "wave/circle unions s=0.5 and the radius family", 300.0, [] {
        const Generated g = generate_from_spec("cantor:s=0.5,depth=8", std::nullopt);
        const auto ladder = dyadic_ladder(4, 12, g.cloud.resolution());
        const double wave = union_wave_dim(g.cloud, ladder).slope;
        const double circ = union_circle_dim(g.cloud, ladder).slope;
        const double fine = std::ldexp(1.0, -12);
        const double full = union_circle_dim(radius_family(fine), dyadic_ladder(4, 12)).slope;
        const bool ok = std::abs(wave - 1.5) <= 0.1 && std::abs(circ - 1.5) <= 0.1 && std::abs(full - 2.0) <= 0.05;
        return Outcome{ok, "wave " + f3(wave) + ", circle " + f3(circ) + ", radius family " + f3(full)};
    });

    // 7. Wolff-type count: regression gate at the calibrated constant.
    criterion(7, "incidence count / bound at calibrated C_eps", 300.0, [] {
        double worst = 0.0;
        std::size_t cases = 0;
        for (const WolffRow& r : wolff_corpus_study(wolff_reference_C_eps)) {
            worst = std::max(worst, r.count.ratio);
            ++cases;
        }
        return Outcome{worst <= 1.0 + 1e-12, std::to_string(cases) + " corpus cases, max ratio " + f3(worst) +
                                                 " at C_eps " + f3(wolff_reference_C_eps)};
    });

    // 8. Good set: exceptional mass <= 3 A^{-s/3}.
    criterion(8, "good set, delta 2^-10, lambda 0.1", 600.0, [] {
        const double delta = std::ldexp(1.0, -10);
        const double A = std::pow(delta, -0.1);
        std::string detail;
        bool ok = true;
        for (const char* spec : {"cantor:s=0.5,depth=8", "cantor:s=0.75,depth=4"}) {
            const Generated g = generate_from_spec(spec, std::nullopt);
            for (Family fam : {Family::circle, Family::wave}) {
                const GoodSetReport rep =
                    good_set_report(g.cloud, delta, A, 0.1, g.dimension, fam, ThetaInterval::full_circle());
                const double allowed = 3.0 * rep.allowed_mass;
                ok = ok && rep.exceptional_mass <= allowed;
                detail += (detail.empty() ? "" : ", ") + std::string("s=") + f3(g.dimension) + " " + to_string(fam) +
                          " " + f3(rep.exceptional_mass) + "<=" + f3(allowed);
            }
        }
        return Outcome{ok, detail};
    });

    // 9. Double counting.
    criterion(9, "double counting on 1e3 structures and the worked example", 1.0, [] {
        const FubiniStudy st = fubini_study(20240604, 1000);
        const bool ok = st.violations == 0 && st.worked_example_holds && st.worked_example_kids >= 15;
        return Outcome{ok, std::to_string(st.violations) + " violations, worked example kids " +
                               f3(st.worked_example_kids)};
    });

    // 10. Reproducibility: every experiment kind, rerun with another thread count.
    criterion(10, "bitwise-identical outputs on reruns", 600.0, [] {
        const std::vector<std::string> configs = {
            "kind = projection-scan\nspec = cantor:s=0.75,depth=5\nthetas = 24\nladder = 4..9\n",
            "kind = wave-union\nspec = cantor:s=0.5,depth=6\nladder = 4..10\n",
            "kind = circle-union\nspec = cantor:s=0.5,depth=6\nladder = 4..10\n",
            "kind = lemma-edelta\nseed = 7\nsamples = 900\n",
            "kind = lemma-circle\nseed = 7\npairs = 700\ndeltas = 6..9\n",
            "kind = incidence-tangency\nseed = 7\npairs = 700\n",
            "kind = wolff-ratio\n",
            "kind = schlag-goodset\nspec = cantor:s=0.5,depth=6\ndelta_exponent = 8\n",
            "kind = fubini\nseed = 7\ntrials = 200\n",
        };
        const fs::path root = fs::temp_directory_path() / "rproj_acceptance_repro";
        fs::remove_all(root);
        std::size_t files = 0;
        std::string mismatch;
        const unsigned saved = thread_count();
        for (std::size_t i = 0; i < configs.size(); ++i) {
            const ExperimentConfig c = ExperimentConfig::parse(configs[i]);
            const fs::path a = root / (std::to_string(i) + "a"), b = root / (std::to_string(i) + "b");
            thread_count() = 1;
            const int ea = run(c, a.string()).exit_code;
            thread_count() = 4;
            const int eb = run(c, b.string()).exit_code;
            if (ea == exit_config || ea == exit_io || ea != eb) mismatch += " " + c.str("kind") + "(exit)";
            const auto sa = snapshot(a), sb = snapshot(b);
            if (sa != sb) mismatch += " " + c.str("kind");
            files += sa.size();
        }
        thread_count() = saved;
        fs::remove_all(root);
        return Outcome{mismatch.empty() && files > 0,
                       std::to_string(configs.size()) + " kinds, " + std::to_string(files) + " files compared" +
                           (mismatch.empty() ? "" : ", differing:" + mismatch)};
    });

    std::printf("%s: %d failing criteria\n", failures ? "ACCEPTANCE FAIL" : "ACCEPTANCE PASS", failures);
    return failures ? 1 : 0;
}
