#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

namespace rproj {

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 1.0;
};

/// Ordinary least squares y = slope * x + intercept. r^2 is 1 when y is constant.
inline LineFit least_squares(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("least_squares: need >= 2 paired samples");
    const double n = static_cast<double>(x.size());
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (!(sxx > 0.0)) throw std::invalid_argument("least_squares: abscissae are all equal");
    LineFit f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    f.r_squared = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
    return f;
}

} // namespace rproj
