// rproj: command-line front end.
//
//   rproj gen --spec cantor:s=0.75,depth=8 --out cloud.csv
//   rproj project --in cloud.csv --out scan/
//   rproj boxdim --in cloud.csv --family circle --out union/
//   rproj tangency --point 0.1,0.2,1.0 --delta 0.001
//   rproj incidence --in cloud.csv --delta 0.0009765625 --s 0.5 --out goodset/
//   rproj experiment run configs/projection_s075.cfg

#include "rproj/experiment.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

using namespace rproj;

namespace {

struct Globals {
    std::optional<std::uint64_t> seed;
    std::string out;
    unsigned threads = 0;
};

std::ofstream open_or_throw(const std::filesystem::path& p) {
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
    std::ofstream f(p);
    if (!f) throw std::ios_base::failure("cannot write " + p.string());
    return f;
}

Point3 parse_point(const std::string& s) {
    const auto cells = split(s);
    if (cells.size() != 3) throw ConfigError("--point needs x1,x2,r");
    return {parse_double(cells[0], "x1"), parse_double(cells[1], "x2"), parse_double(cells[2], "r")};
}

ThetaInterval parse_window(const std::string& s) {
    if (s.empty() || s == "full") return ThetaInterval::full_circle();
    const auto cells = split(s);
    if (cells.size() != 2) throw ConfigError("--window needs lo,hi or 'full'");
    return ThetaInterval(parse_double(cells[0], "window lo"), parse_double(cells[1], "window hi"));
}

std::vector<double> ladder_for(const std::string& range, const WeightedCloud& cloud) {
    ExperimentConfig c = ExperimentConfig::parse("kind = none\nladder = " + range + "\n");
    const auto [lo, hi] = c.exponent_range("ladder", {4, 12});
    return dyadic_ladder(lo, hi, cloud.resolution());
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Restricted projections, circle and wave unions, incidence counting"};
    app.require_subcommand(1);
    app.fallthrough();
    Globals g;
    app.add_option("--seed", g.seed, "Run seed (required by randomized generators and experiments)");
    app.add_option("--out", g.out, "Output file or directory");
    app.add_option("--threads", g.threads, "Worker threads (0 = hardware concurrency)");

    std::string spec = "cantor:s=0.75,depth=8";
    auto* gen = app.add_subcommand("gen", "Generate a point cloud and write it as CSV");
    gen->add_option("--spec", spec, "Generator, e.g. cantor:s=0.75,depth=8 or cone:n=1000");

    std::string in, range = "4..12", curve = "special";
    std::size_t thetas = 720;
    auto* project = app.add_subcommand("project", "Box-counting dimension of projections over a theta grid");
    project->add_option("--in", in, "Cloud CSV")->required();
    project->add_option("--thetas", thetas, "Number of grid angles");
    project->add_option("--ladder", range, "Dyadic exponents lo..hi");
    project->add_option("--curve", curve, "special or degenerate");

    std::string family = "circle";
    auto* boxdim = app.add_subcommand("boxdim", "Box-counting dimension of the circle or wave union");
    boxdim->add_option("--in", in, "Cloud CSV")->required();
    boxdim->add_option("--family", family, "circle or wave");
    boxdim->add_option("--ladder", range, "Dyadic exponents lo..hi");

    std::string point, window = "full";
    double delta = 1e-3;
    auto* tangency = app.add_subcommand("tangency", "Tangency parameter and sublevel set of one point");
    tangency->add_option("--point", point, "x1,x2,r")->required();
    tangency->add_option("--delta", delta, "Width of the sublevel set");
    tangency->add_option("--window", window, "lo,hi angle window, or 'full'");

    double A = 0.0, lambda = 0.1, s = 0.5;
    auto* incidence = app.add_subcommand("incidence", "High-multiplicity mass of a cloud");
    incidence->add_option("--in", in, "Cloud CSV")->required();
    incidence->add_option("--delta", delta, "Scale")->required();
    incidence->add_option("--A", A, "Multiplicity constant (default delta^-0.1)");
    incidence->add_option("--lambda", lambda, "Exponent slack");
    incidence->add_option("--s", s, "Frostman exponent of the cloud");
    incidence->add_option("--family", family, "circle or wave");

    std::string config;
    auto* experiment = app.add_subcommand("experiment", "Config-driven experiments");
    experiment->require_subcommand(1);
    auto* run_cmd = experiment->add_subcommand("run", "Run one experiment config");
    run_cmd->add_option("config", config, "Config file")->required();

    CLI11_PARSE(app, argc, argv);
    thread_count() = g.threads;

    try {
        if (*gen) {
            const Generated made = generate_from_spec(spec, g.seed);
            if (g.out.empty()) {
                write_cloud(std::cout, made.cloud, made.provenance);
            } else {
                auto f = open_or_throw(g.out);
                write_cloud(f, made.cloud, made.provenance);
            }
            std::cerr << made.cloud.size() << " points, similarity dimension " << fmt(made.dimension) << '\n';
            return exit_ok;
        }
        if (*project) {
            const WeightedCloud cloud = read_cloud_file(in);
            const CurveKind kind = curve == "degenerate" ? CurveKind::degenerate : CurveKind::special;
            const auto scan = projection_dim_scan(cloud, theta_grid(thetas), ladder_for(range, cloud), kind);
            std::vector<std::vector<double>> rows;
            for (const ProjectionScan& p : scan) rows.push_back({p.theta, p.fit.slope, p.fit.r_squared});
            if (g.out.empty()) {
                write_table(std::cout, {"theta", "slope", "r2"}, rows);
            } else {
                auto f = open_or_throw(std::filesystem::path(g.out) / "theta_scan.csv");
                write_table(f, {"theta", "slope", "r2"}, rows);
            }
            return exit_ok;
        }
        if (*boxdim) {
            const WeightedCloud cloud = read_cloud_file(in);
            if (family != "circle" && family != "wave") throw ConfigError("--family must be circle or wave");
            const bool wave = family == "wave";
            std::vector<ScaleCount> counts;
            for (double d : ladder_for(range, cloud))
                counts.push_back({d, wave ? wave_union_count(cloud, d) : circle_union_count(cloud, d)});
            const DimEstimate fit = fit_interior(counts);
            std::cout << "slope " << fmt(fit.slope) << " r2 " << fmt(fit.r_squared) << '\n';
            if (!g.out.empty()) {
                std::vector<std::vector<double>> rows;
                for (const ScaleCount& c : counts) rows.push_back({c.delta, static_cast<double>(c.count)});
                auto f = open_or_throw(std::filesystem::path(g.out) / "scales.csv");
                write_table(f, {"delta", "count"}, rows);
                auto svg = open_or_throw(std::filesystem::path(g.out) / "fit.svg");
                write_loglog_svg(svg, family + " union", counts, fit);
            }
            return exit_ok;
        }
        if (*tangency) {
            const Point3 z = parse_point(point);
            const ThetaInterval J = parse_window(window);
            const TangencyMinimum tm = tangency_minimum(z, J);
            std::cout << "Delta_J " << fmt(tm.value) << " at theta " << fmt(tm.theta) << '\n';
            std::cout << "Delta' " << fmt(delta_prime(z)) << '\n';
            const IntervalSet E = e_delta_set(z, delta, J);
            if (g.out.empty()) {
                write_intervals(std::cout, E);
            } else {
                auto f = open_or_throw(g.out);
                write_intervals(f, E);
            }
            return exit_ok;
        }
        if (*incidence) {
            const WeightedCloud cloud = read_cloud_file(in);
            if (family != "circle" && family != "wave") throw ConfigError("--family must be circle or wave");
            const Family fam = family == "wave" ? Family::wave : Family::circle;
            if (A <= 0.0) A = std::pow(delta, -0.1);
            const GoodSetReport rep = good_set_report(cloud, delta, A, lambda, s, fam, ThetaInterval::full_circle());
            std::cout << "threshold " << fmt(rep.threshold) << " exceptional mass " << fmt(rep.exceptional_mass)
                      << " allowed " << fmt(rep.allowed_mass) << '\n';
            if (!g.out.empty()) {
                std::vector<std::vector<double>> rows;
                for (std::size_t i = 0; i < cloud.size(); ++i)
                    rows.push_back({cloud.point(i).x1(), cloud.point(i).x2(), cloud.point(i).r(), rep.fractions[i], rep.peak[i]});
                auto f = open_or_throw(std::filesystem::path(g.out) / ("goodset_" + family + ".csv"));
                write_table(f, {"x1", "x2", "r", "fraction", "peak_multiplicity"}, rows);
            }
            return exit_ok;
        }
        if (*run_cmd) {
            ExperimentConfig c = ExperimentConfig::load(config);
            if (g.seed) c.set("seed", std::to_string(*g.seed));
            const RunResult r = run(c, g.out.empty() ? std::nullopt : std::optional<std::string>(g.out));
            std::cerr << r.message << '\n';
            return r.exit_code;
        }
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return exit_config;
    } catch (const std::ios_base::failure& e) {
        std::cerr << "I/O error: " << e.what() << '\n';
        return exit_io;
    } catch (const std::filesystem::filesystem_error& e) {
        std::cerr << "I/O error: " << e.what() << '\n';
        return exit_io;
    } catch (const FormatError& e) {
        std::cerr << "format error: " << e.what() << '\n';
        return exit_io;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid argument: " << e.what() << '\n';
        return exit_config;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_assertion;
    }
    return exit_ok;
}
