#pragma once

// Minimal SVG writer for log-log dimension fits.

#include "rproj/csv.hpp"
#include "rproj/dimension.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <string>

namespace rproj {

/// Scatter of (log2(1/delta), log2 N) with the fitted line.
inline void write_loglog_svg(std::ostream& os, const std::string& title, const std::vector<ScaleCount>& counts,
                             const DimEstimate& fit) {
    const double W = 480, H = 360, pad = 48;
    double x0 = INFINITY, x1 = -INFINITY, y0 = INFINITY, y1 = -INFINITY;
    for (const ScaleCount& c : counts) {
        const double x = std::log2(1.0 / c.delta), y = std::log2(static_cast<double>(c.count));
        x0 = std::min(x0, x);
        x1 = std::max(x1, x);
        y0 = std::min(y0, y);
        y1 = std::max(y1, y);
    }
    if (!(x1 > x0)) x1 = x0 + 1;
    if (!(y1 > y0)) y1 = y0 + 1;
    auto px = [&](double x) { return pad + (x - x0) / (x1 - x0) * (W - 2 * pad); };
    auto py = [&](double y) { return H - pad - (y - y0) / (y1 - y0) * (H - 2 * pad); };

    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os << "<text x=\"" << pad << "\" y=\"24\" font-family=\"monospace\" font-size=\"13\">" << title
       << " slope=" << fmt(fit.slope) << "</text>\n";
    os << "<line x1=\"" << pad << "\" y1=\"" << H - pad << "\" x2=\"" << W - pad << "\" y2=\"" << H - pad
       << "\" stroke=\"black\"/>\n";
    os << "<line x1=\"" << pad << "\" y1=\"" << pad << "\" x2=\"" << pad << "\" y2=\"" << H - pad
       << "\" stroke=\"black\"/>\n";
    os << "<text x=\"" << W / 2 << "\" y=\"" << H - 12 << "\" font-family=\"monospace\" font-size=\"11\">log2(1/delta)</text>\n";
    os << "<text x=\"8\" y=\"" << H / 2 << "\" font-family=\"monospace\" font-size=\"11\">log2 N</text>\n";
    for (const ScaleCount& c : counts)
        os << "<circle cx=\"" << px(std::log2(1.0 / c.delta)) << "\" cy=\"" << py(std::log2(static_cast<double>(c.count)))
           << "\" r=\"3\" fill=\"steelblue\"/>\n";
    // the fit is in natural logs; slope is unchanged in base 2
    auto fit_y = [&](double x2) { return fit.slope * x2 + fit.intercept / std::log(2.0); };
    const double fa = std::log2(1.0 / fit.delta_max), fb = std::log2(1.0 / fit.delta_min);
    os << "<line x1=\"" << px(fa) << "\" y1=\"" << py(fit_y(fa)) << "\" x2=\"" << px(fb) << "\" y2=\"" << py(fit_y(fb))
       << "\" stroke=\"firebrick\"/>\n";
    os << "</svg>\n";
}

} // namespace rproj
