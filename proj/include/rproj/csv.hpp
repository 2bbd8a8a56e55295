#pragma once

// Plain CSV artifacts. Doubles are written with 17 significant digits so that
// a file round-trips exactly and identical runs produce identical bytes.

#include "rproj/cloud.hpp"
#include "rproj/rectangle.hpp"

#include <cstdio>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace rproj {

class FormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

/// Header line, then one comma-separated row per entry.
inline void write_table(std::ostream& os, const std::vector<std::string>& header,
                        const std::vector<std::vector<double>>& rows) {
    for (std::size_t i = 0; i < header.size(); ++i) os << (i ? "," : "") << header[i];
    os << '\n';
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << fmt(row[i]);
        os << '\n';
    }
}

inline std::vector<std::string> split(const std::string& line, char sep = ',') {
    std::vector<std::string> out;
    std::string cell;
    std::istringstream is(line);
    while (std::getline(is, cell, sep)) out.push_back(cell);
    if (!line.empty() && line.back() == sep) out.emplace_back();
    return out;
}

inline double parse_double(const std::string& s, const std::string& what) {
    try {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used != s.size()) throw FormatError(what + ": trailing characters in '" + s + "'");
        return v;
    } catch (const std::logic_error&) {
        throw FormatError(what + ": not a number: '" + s + "'");
    }
}

/// Cloud CSV: provenance as '# key = value' comment lines, then `x1,x2,r,weight`.
/// A `resolution` key, when present, is restored on reading.
inline void write_cloud(std::ostream& os, const WeightedCloud& cloud, const std::string& provenance = {}) {
    std::istringstream prov(provenance);
    for (std::string line; std::getline(prov, line);)
        if (!line.empty()) os << "# " << line << '\n';
    if (cloud.resolution()) os << "# resolution = " << fmt(*cloud.resolution()) << '\n';
    std::vector<std::vector<double>> rows;
    rows.reserve(cloud.size());
    for (std::size_t i = 0; i < cloud.size(); ++i) {
        const Point3& p = cloud.point(i);
        rows.push_back({p.x1(), p.x2(), p.r(), cloud.weight(i)});
    }
    write_table(os, {"x1", "x2", "r", "weight"}, rows);
}

inline WeightedCloud read_cloud(std::istream& is) {
    std::optional<double> resolution;
    std::vector<Point3> pts;
    std::vector<double> w;
    bool header = false;
    std::size_t lineno = 0;
    for (std::string line; std::getline(is, line);) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line[0] == '#') {
            const auto eq = line.find('=');
            if (eq != std::string::npos && line.substr(1, eq - 1).find("resolution") != std::string::npos) {
                std::string v = line.substr(eq + 1);
                v.erase(0, v.find_first_not_of(' '));
                resolution = parse_double(v, "cloud resolution");
            }
            continue;
        }
        if (!header) {
            if (line != "x1,x2,r,weight") throw FormatError("cloud: expected header x1,x2,r,weight");
            header = true;
            continue;
        }
        const auto cells = split(line);
        const std::string where = "cloud line " + std::to_string(lineno);
        if (cells.size() != 4) throw FormatError(where + ": expected 4 fields");
        pts.emplace_back(parse_double(cells[0], where), parse_double(cells[1], where), parse_double(cells[2], where));
        w.push_back(parse_double(cells[3], where));
    }
    if (!header) throw FormatError("cloud: missing header");
    try {
        return WeightedCloud(std::move(pts), std::move(w), resolution);
    } catch (const std::invalid_argument& e) {
        throw FormatError(e.what());
    }
}

inline WeightedCloud read_cloud_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::ios_base::failure("cannot open " + path);
    return read_cloud(in);
}

inline void write_rects(std::ostream& os, const std::vector<DeltaTRect>& rects) {
    std::vector<std::vector<double>> rows;
    for (const DeltaTRect& R : rects)
        rows.push_back({R.parent().center().x, R.parent().center().y, R.parent().radius(), R.anchor(), R.delta(), R.t()});
    write_table(os, {"cx", "cy", "r", "anchor", "delta", "t"}, rows);
}

inline void write_intervals(std::ostream& os, const IntervalSet& set) {
    std::vector<std::vector<double>> rows;
    for (const Arc& a : set.components()) rows.push_back({a.lo, a.hi});
    write_table(os, {"lo", "hi"}, rows);
}

} // namespace rproj
