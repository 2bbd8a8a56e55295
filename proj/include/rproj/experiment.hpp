#pragma once

// Config-driven experiments. A config is plain text with `key = value` lines,
// `#` comments and optional `[section]` headers (keys inside a section are
// read as `section.key`). Each run writes CSV tables, SVG plots of its
// dimension fits, `summary.csv` and `report.txt` into the output directory.

#include "rproj/csv.hpp"
#include "rproj/studies.hpp"
#include "rproj/svg.hpp"

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace rproj {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum ExitCode { exit_ok = 0, exit_assertion = 1, exit_config = 2, exit_io = 3 };

inline std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return {};
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

class ExperimentConfig {
public:
    static ExperimentConfig parse(const std::string& text) {
        ExperimentConfig c;
        std::istringstream is(text);
        std::string section;
        std::size_t lineno = 0;
        for (std::string raw; std::getline(is, raw);) {
            ++lineno;
            const std::string line = trim(raw.substr(0, raw.find('#')));
            if (line.empty()) continue;
            if (line.front() == '[') {
                if (line.back() != ']') throw ConfigError("line " + std::to_string(lineno) + ": bad section header");
                section = trim(line.substr(1, line.size() - 2));
                continue;
            }
            const auto eq = line.find('=');
            if (eq == std::string::npos) throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
            std::string key = trim(line.substr(0, eq));
            if (key.empty()) throw ConfigError("line " + std::to_string(lineno) + ": empty key");
            if (!section.empty()) key = section + "." + key;
            if (c.values_.count(key)) throw ConfigError("duplicate key '" + key + "'");
            c.values_[key] = trim(line.substr(eq + 1));
        }
        if (c.values_.empty()) throw ConfigError("empty config");
        if (!c.has("kind")) throw ConfigError("missing key 'kind'");
        return c;
    }

    static ExperimentConfig load(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw std::ios_base::failure("cannot open config " + path);
        std::stringstream ss;
        ss << in.rdbuf();
        return parse(ss.str());
    }

    bool has(const std::string& key) const { return values_.count(key) != 0; }
    void set(const std::string& key, const std::string& value) { values_[key] = value; }

    std::string str(const std::string& key, std::optional<std::string> fallback = std::nullopt) const {
        const auto it = values_.find(key);
        if (it != values_.end()) return it->second;
        if (fallback) return *fallback;
        throw ConfigError("missing key '" + key + "'");
    }

    double num(const std::string& key, std::optional<double> fallback = std::nullopt) const {
        if (!has(key)) {
            if (fallback) return *fallback;
            throw ConfigError("missing key '" + key + "'");
        }
        try {
            return parse_double(str(key), key);
        } catch (const FormatError& e) {
            throw ConfigError(e.what());
        }
    }

    std::uint64_t integer(const std::string& key, std::optional<std::uint64_t> fallback = std::nullopt) const {
        if (!has(key)) {
            if (fallback) return *fallback;
            throw ConfigError("missing key '" + key + "'");
        }
        const std::string v = str(key);
        if (v.empty() || v.find_first_not_of("0123456789") != std::string::npos)
            throw ConfigError("key '" + key + "' must be a non-negative integer");
        return std::stoull(v);
    }

    /// Mandatory for randomized experiments.
    std::uint64_t seed() const {
        if (!has("seed")) throw ConfigError("this experiment is randomized: 'seed' is required");
        return integer("seed");
    }

    /// `lo..hi` exponent range, e.g. 4..12 for 2^-4 .. 2^-12.
    std::pair<int, int> exponent_range(const std::string& key, std::pair<int, int> fallback) const {
        if (!has(key)) return fallback;
        const std::string v = str(key);
        const auto dots = v.find("..");
        if (dots == std::string::npos) throw ConfigError("key '" + key + "' must look like 4..12");
        try {
            const int lo = std::stoi(v.substr(0, dots)), hi = std::stoi(v.substr(dots + 2));
            if (lo < 0 || hi < lo || hi > 40) throw ConfigError("key '" + key + "': bad exponent range");
            return {lo, hi};
        } catch (const std::logic_error&) {
            throw ConfigError("key '" + key + "' must look like 4..12");
        }
    }

    const std::map<std::string, std::string>& values() const { return values_; }

private:
    std::map<std::string, std::string> values_;
};

// ---------------------------------------------------------------------------

struct Generated {
    WeightedCloud cloud;
    std::string provenance;
    double dimension = 0.0;
};

inline std::map<std::string, std::string> parse_options(const std::string& body) {
    std::map<std::string, std::string> out;
    for (const std::string& item : split(body)) {
        if (trim(item).empty()) continue;
        const auto eq = item.find('=');
        if (eq == std::string::npos) throw ConfigError("generator option '" + item + "' must be key=value");
        out[trim(item.substr(0, eq))] = trim(item.substr(eq + 1));
    }
    return out;
}

/// Generator strings:
///   cantor:s=0.75,depth=8[,frame=unit]
///   cantor:lambda=0.25,maps=2,axes=x1x2r,depth=6[,frame=unit]
///   cone:n=1000            (uses the seed)
///   radius:delta=0.000244  (concentric circles, every radius at spacing delta/2)
///   axis:n=1000            (points (0, 0, r) for the degenerate-curve control)
inline Generated generate_from_spec(const std::string& spec, std::optional<std::uint64_t> seed) {
    const auto colon = spec.find(':');
    const std::string kind = trim(spec.substr(0, colon));
    const auto opt = parse_options(colon == std::string::npos ? "" : spec.substr(colon + 1));
    auto get = [&](const std::string& k) -> std::optional<std::string> {
        const auto it = opt.find(k);
        return it == opt.end() ? std::nullopt : std::optional<std::string>(it->second);
    };
    auto num = [&](const std::string& k) {
        const auto v = get(k);
        if (!v) throw ConfigError("generator '" + kind + "' needs option '" + k + "'");
        try {
            return parse_double(*v, k);
        } catch (const FormatError& e) {
            throw ConfigError(e.what());
        }
    };
    try {
        if (kind == "cantor") {
            const Frame frame = get("frame").value_or("b0") == "unit" ? Frame::unit() : Frame::in_B0();
            IFSSpec ifs;
            if (get("s")) {
                ifs = cantor_preset(num("s"), static_cast<int>(num("depth")), frame);
            } else {
                ifs.lambda = num("lambda");
                ifs.maps = static_cast<int>(num("maps"));
                ifs.depth = static_cast<int>(num("depth"));
                ifs.frame = frame;
                ifs.axes.clear();
                std::string axes = get("axes").value_or("r");
                for (std::size_t i = 0; i < axes.size();) {
                    if (axes.compare(i, 2, "x1") == 0) ifs.axes.push_back(Axis::x1), i += 2;
                    else if (axes.compare(i, 2, "x2") == 0) ifs.axes.push_back(Axis::x2), i += 2;
                    else if (axes[i] == 'r') ifs.axes.push_back(Axis::r), i += 1;
                    else throw ConfigError("axes must combine x1, x2, r");
                }
            }
            return {generate_cantor(ifs), ifs.describe(), ifs.similarity_dimension()};
        }
        if (kind == "cone") {
            if (!seed) throw ConfigError("generator 'cone' is randomized: a seed is required");
            const auto n = static_cast<std::size_t>(num("n"));
            return {cone_cloud(n, *seed), "generator = cone\nn = " + std::to_string(n) + "\nseed = " + std::to_string(*seed) + "\n", 1.0};
        }
        if (kind == "radius") {
            const double d = num("delta");
            return {radius_family(d), "generator = radius\ndelta = " + fmt(d) + "\n", 1.0};
        }
        if (kind == "axis") {
            const auto n = static_cast<std::size_t>(num("n"));
            return {vertical_axis_cloud(n), "generator = axis\nn = " + std::to_string(n) + "\n", 1.0};
        }
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    throw ConfigError("unknown generator '" + kind + "'");
}

// ---------------------------------------------------------------------------

/// Collects checks and metrics; report.txt only repeats numbers that are also in summary.csv.
class Report {
public:
    void metric(const std::string& name, double value) { metrics_.emplace_back(name, value); }

    void check(const std::string& name, bool ok, const std::string& detail) {
        checks_.push_back({name, ok, detail});
        all_ok_ = all_ok_ && ok;
    }

    bool ok() const { return all_ok_; }

    void write(const std::filesystem::path& dir, const std::string& kind) const {
        std::ofstream s(dir / "summary.csv");
        s << "metric,value\n";
        for (const auto& [k, v] : metrics_) s << k << ',' << fmt(v) << '\n';
        std::ofstream r(dir / "report.txt");
        r << "experiment: " << kind << '\n';
        for (const auto& [k, v] : metrics_) r << "  " << k << " = " << fmt(v) << '\n';
        for (const Check& c : checks_) r << (c.ok ? "PASS " : "FAIL ") << c.name << ": " << c.detail << '\n';
        r << (all_ok_ ? "RESULT PASS" : "RESULT FAIL") << '\n';
        if (!s || !r) throw std::ios_base::failure("cannot write report in " + dir.string());
    }

private:
    struct Check {
        std::string name;
        bool ok;
        std::string detail;
    };
    std::vector<std::pair<std::string, double>> metrics_;
    std::vector<Check> checks_;
    bool all_ok_ = true;
};

namespace detail {

inline std::ofstream open_out(const std::filesystem::path& p) {
    std::ofstream f(p);
    if (!f) throw std::ios_base::failure("cannot write " + p.string());
    return f;
}

inline std::vector<double> ladder_from(const ExperimentConfig& c, const WeightedCloud& cloud) {
    const auto [lo, hi] = c.exponent_range("ladder", {4, 12});
    return dyadic_ladder(lo, hi, cloud.resolution());
}

inline void write_scales(const std::filesystem::path& p, const std::vector<ScaleCount>& counts) {
    std::vector<std::vector<double>> rows;
    for (const ScaleCount& s : counts) rows.push_back({s.delta, static_cast<double>(s.count)});
    auto f = open_out(p);
    write_table(f, {"delta", "count"}, rows);
}

inline std::vector<ScaleCount> all_counts(const WeightedCloud& cloud, const std::vector<double>& ladder, bool wave) {
    std::vector<ScaleCount> out;
    for (double d : ladder) out.push_back({d, wave ? wave_union_count(cloud, d) : circle_union_count(cloud, d)});
    return out;
}

inline std::string describe(double v) { return fmt(v); }

inline Report run_projection(const ExperimentConfig& c, const std::filesystem::path& out) {
    const Generated g = generate_from_spec(c.str("spec"), c.has("seed") ? std::optional(c.seed()) : std::nullopt);
    const CurveKind kind = c.str("curve", "special") == "degenerate" ? CurveKind::degenerate : CurveKind::special;
    const std::vector<double> ladder = ladder_from(c, g.cloud);
    const double target = c.num("target", std::min(g.dimension, 1.0));
    const double band = c.num("band", 0.1);
    const double need = c.num("min_fraction", 0.9);
    const ProjectionStudy st =
        projection_study(g.cloud, theta_grid(c.integer("thetas", 720)), ladder, target, band, kind);

    std::vector<std::vector<double>> rows, scales;
    for (const ProjectionScan& p : st.scan) {
        rows.push_back({p.theta, p.fit.slope, p.fit.r_squared});
        for (const ScaleCount& s : p.counts) scales.push_back({p.theta, s.delta, static_cast<double>(s.count)});
    }
    auto f = open_out(out / "theta_scan.csv");
    write_table(f, {"theta", "slope", "r2"}, rows);
    auto fs = open_out(out / "scales.csv");
    write_table(fs, {"theta", "delta", "count"}, scales);
    std::filesystem::create_directories(out / "plots");
    const std::size_t stride = std::max<std::size_t>(1, st.scan.size() / 8);
    for (std::size_t i = 0; i < st.scan.size(); i += stride) {
        auto svg = open_out(out / "plots" / ("theta_" + std::to_string(i) + ".svg"));
        write_loglog_svg(svg, "theta=" + fmt(st.scan[i].theta), st.scan[i].counts, st.scan[i].fit);
    }

    Report r;
    r.metric("similarity_dimension", g.dimension);
    r.metric("target", target);
    r.metric("fraction_in_band", st.fraction_in_band);
    r.metric("min_slope", st.min_slope);
    r.metric("max_slope", st.max_slope);
    if (c.has("max_slope")) {
        const double cap = c.num("max_slope");
        r.check("slope cap", st.max_slope <= cap, "max slope " + fmt(st.max_slope) + " <= " + fmt(cap));
    } else {
        r.check("slope band", st.fraction_in_band >= need,
                "fraction within +-" + fmt(band) + " of target is " + fmt(st.fraction_in_band) + ", need " + fmt(need));
    }
    return r;
}

inline Report run_union(const ExperimentConfig& c, const std::filesystem::path& out, bool wave) {
    const Generated g = generate_from_spec(c.str("spec"), c.has("seed") ? std::optional(c.seed()) : std::nullopt);
    const std::vector<double> ladder = ladder_from(c, g.cloud);
    const double target = c.num("target", std::min(g.dimension + 1.0, 2.0));
    const double band = c.num("band", 0.1);
    if (!wave)
        for (const Point3& z : g.cloud.points())
            if (!in_B0(z)) throw ConfigError("circle-union needs a cloud in B0");
    const std::vector<ScaleCount> counts = all_counts(g.cloud, ladder, wave);
    const DimEstimate fit = fit_interior(counts);
    write_scales(out / "scales.csv", counts);
    auto svg = open_out(out / "fit.svg");
    write_loglog_svg(svg, wave ? "wave union" : "circle union", counts, fit);

    Report r;
    r.metric("slope", fit.slope);
    r.metric("r2", fit.r_squared);
    r.metric("target", target);
    r.check("union slope", std::abs(fit.slope - target) <= band,
            "slope " + fmt(fit.slope) + " within +-" + fmt(band) + " of " + fmt(target));
    return r;
}

inline Report run_edelta(const ExperimentConfig& c, const std::filesystem::path& out) {
    const auto [lo, hi] = c.exponent_range("deltas", {6, 14});
    const EdeltaStudy st = edelta_study(c.seed(), c.integer("samples", 10000), lo, hi);
    std::vector<std::vector<double>> rows;
    for (const EdeltaRow& e : st.rows)
        rows.push_back({e.delta, double(e.samples), double(e.nonempty), double(e.max_components), e.K_component, e.K_envelope});
    auto f = open_out(out / "edelta.csv");
    write_table(f, {"delta", "samples", "nonempty", "max_components", "K_component", "K_envelope"}, rows);
    Report r;
    r.metric("max_components", double(st.max_components));
    r.metric("K_component_max", st.component.max);
    r.metric("K_component_median", st.component.median);
    r.metric("K_envelope_max", st.envelope.max);
    r.metric("K_envelope_median", st.envelope.median);
    r.check("components", st.max_components <= 2, "at most 2 components");
    r.check("component K stable", st.component.stable, "max within 2x of median");
    r.check("envelope K stable", st.envelope.stable, "max within 2x of median");
    return r;
}

inline Report run_circle_lemma(const ExperimentConfig& c, const std::filesystem::path& out) {
    const auto [lo, hi] = c.exponent_range("deltas", {6, 12});
    const CircleLemmaStudy st =
        circle_lemma_study(c.seed(), c.integer("pairs", 10000), lo, hi, c.num("oversampling", 8.0));
    std::vector<std::vector<double>> rows;
    for (const CircleLemmaRow& e : st.rows)
        rows.push_back({e.delta, double(e.pairs), double(e.nonempty), e.K_zeta, e.K_arc, e.K_area});
    auto f = open_out(out / "circle_lemma.csv");
    write_table(f, {"delta", "pairs", "nonempty", "K_zeta", "K_arc", "K_area"}, rows);
    Report r;
    r.metric("K_zeta_max", st.zeta.max);
    r.metric("K_zeta_median", st.zeta.median);
    r.metric("K_arc_max", st.arc.max);
    r.metric("K_arc_median", st.arc.median);
    r.check("containment K stable", st.zeta.stable, "max within 2x of median");
    r.check("lobe K stable", st.arc.stable, "max within 2x of median");
    return r;
}

inline Report run_incidence_tangency(const ExperimentConfig& c, const std::filesystem::path& out) {
    const double C0 = c.num("C0", default_C0);
    const IncidenceTangencyStudy st = incidence_tangency_study(c.seed(), c.integer("pairs", 10000), {2.0, C0, 8.0});
    std::vector<std::vector<double>> rows;
    for (std::size_t k = 0; k < st.C.size(); ++k)
        rows.push_back({st.C[k], double(st.passed[k]), double(st.pairs)});
    auto f = open_out(out / "tangency.csv");
    write_table(f, {"C", "passed", "pairs"}, rows);
    Report r;
    for (std::size_t k = 0; k < st.C.size(); ++k) r.metric("pass_rate_C" + fmt(st.C[k]), double(st.passed[k]) / double(st.pairs));
    r.check("tangency at C0", st.passed[1] == st.pairs, "both circles C0-tangent for every pair");
    return r;
}

inline Report run_wolff(const ExperimentConfig& c, const std::filesystem::path& out) {
    const double C_eps = c.num("C_eps", wolff_reference_C_eps);
    const auto rows = wolff_corpus_study(C_eps, c.num("eps", wolff_eps), c.num("C0", default_C0));
    std::vector<std::vector<double>> table;
    double worst = 0.0;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const WolffCount& w = rows[i].count;
        table.push_back({double(i), double(w.candidates), double(w.typed), double(w.family), w.bound, w.ratio});
        worst = std::max(worst, w.ratio);
    }
    auto f = open_out(out / "wolff.csv");
    write_table(f, {"case", "candidates", "typed", "family", "bound", "ratio"}, table);
    Report r;
    r.metric("C_eps", C_eps);
    r.metric("max_ratio", worst);
    r.check("incidence bound", worst <= 1.0 + 1e-12, "family / bound <= 1 on every corpus case");
    return r;
}

inline Report run_schlag(const ExperimentConfig& c, const std::filesystem::path& out) {
    const Generated g = generate_from_spec(c.str("spec"), std::nullopt);
    const double delta = std::ldexp(1.0, -static_cast<int>(c.integer("delta_exponent", 10)));
    const double A = c.num("A", std::pow(delta, -0.1));
    const double lambda = c.num("lambda", 0.1);
    const double factor = c.num("factor", 3.0);
    const std::string which = c.str("family", "both");
    Report r;
    r.metric("s", g.dimension);
    r.metric("delta", delta);
    for (Family fam : {Family::circle, Family::wave}) {
        if (which != "both" && which != to_string(fam)) continue;
        const GoodSetReport rep = good_set_report(g.cloud, delta, A, lambda, g.dimension, fam, ThetaInterval::full_circle());
        std::vector<std::vector<double>> rows;
        double peak = 0.0;
        for (std::size_t i = 0; i < g.cloud.size(); ++i) {
            const Point3& z = g.cloud.point(i);
            rows.push_back({z.x1(), z.x2(), z.r(), rep.fractions[i], rep.peak[i]});
            peak = std::max(peak, rep.peak[i]);
        }
        const std::string name = to_string(fam);
        auto f = open_out(out / ("goodset_" + name + ".csv"));
        write_table(f, {"x1", "x2", "r", "fraction", "peak_multiplicity"}, rows);
        r.metric(name + "_threshold", rep.threshold);
        r.metric(name + "_peak_multiplicity", peak);
        r.metric(name + "_exceptional_mass", rep.exceptional_mass);
        r.metric(name + "_allowed_mass", factor * rep.allowed_mass);
        r.check(name + " good set", rep.exceptional_mass <= factor * rep.allowed_mass,
                "exceptional mass " + fmt(rep.exceptional_mass) + " <= " + fmt(factor * rep.allowed_mass));
    }
    return r;
}

inline Report run_fubini(const ExperimentConfig& c, const std::filesystem::path& out) {
    const FubiniStudy st = fubini_study(c.seed(), c.integer("trials", 1000));
    auto f = open_out(out / "fubini.csv");
    write_table(f, {"trials", "violations", "worked_example_kids"},
                {{double(st.trials), double(st.violations), st.worked_example_kids}});
    Report r;
    r.metric("violations", double(st.violations));
    r.metric("worked_example_kids", st.worked_example_kids);
    r.check("random structures", st.violations == 0, "inequality holds on every trial");
    r.check("worked example", st.worked_example_holds && st.worked_example_kids >= 15, "at least 15 kids");
    return r;
}

} // namespace detail

struct RunResult {
    int exit_code = exit_ok;
    std::string message;
};

/// Runs one experiment; returns 0 when every check passes, 1 on a failed
/// check, 2 for config errors and 3 for I/O errors.
inline RunResult run(const ExperimentConfig& c, std::optional<std::string> out_override = std::nullopt) {
    try {
        const std::string kind = c.str("kind");
        const std::filesystem::path out = out_override.value_or(c.str("out", "out/" + kind));
        std::filesystem::create_directories(out);
        Report r;
        if (kind == "projection-scan") r = detail::run_projection(c, out);
        else if (kind == "wave-union") r = detail::run_union(c, out, true);
        else if (kind == "circle-union") r = detail::run_union(c, out, false);
        else if (kind == "lemma-edelta") r = detail::run_edelta(c, out);
        else if (kind == "lemma-circle") r = detail::run_circle_lemma(c, out);
        else if (kind == "incidence-tangency") r = detail::run_incidence_tangency(c, out);
        else if (kind == "wolff-ratio") r = detail::run_wolff(c, out);
        else if (kind == "schlag-goodset") r = detail::run_schlag(c, out);
        else if (kind == "fubini") r = detail::run_fubini(c, out);
        else throw ConfigError("unknown experiment kind '" + kind + "'");
        r.write(out, kind);
        return {r.ok() ? exit_ok : exit_assertion, r.ok() ? "all checks passed" : "a check failed; see report.txt"};
    } catch (const ConfigError& e) {
        return {exit_config, std::string("config error: ") + e.what()};
    } catch (const std::ios_base::failure& e) {
        return {exit_io, std::string("I/O error: ") + e.what()};
    } catch (const std::filesystem::filesystem_error& e) {
        return {exit_io, std::string("I/O error: ") + e.what()};
    } catch (const FormatError& e) {
        return {exit_io, std::string("format error: ") + e.what()};
    } catch (const std::invalid_argument& e) {
        return {exit_config, std::string("invalid parameter: ") + e.what()};
    }
}

} // namespace rproj
