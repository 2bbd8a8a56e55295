#pragma once

#include "rproj/point.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace rproj {

/// Finite discrete measure sum_i w_i delta_{z_i}, standing in for a
/// Frostman measure. Weights are strictly positive; `is_probability()` checks
/// the unit-mass normalisation that most lemma checks require. Clouds built
/// by a generator also record their resolution scale: below it the cloud no
/// longer looks like the set it approximates.
class WeightedCloud {
public:
    WeightedCloud() = default;

    WeightedCloud(std::vector<Point3> points, std::vector<double> weights,
                  std::optional<double> resolution = std::nullopt)
        : points_(std::move(points)), weights_(std::move(weights)), resolution_(resolution) {
        if (points_.size() != weights_.size())
            throw std::invalid_argument("WeightedCloud: points/weights size mismatch");
        for (double w : weights_)
            if (!(w > 0.0) || !std::isfinite(w)) throw std::invalid_argument("WeightedCloud: weights must be positive");
    }

    /// Uniform probability weights 1/n.
    static WeightedCloud uniform(std::vector<Point3> points, std::optional<double> resolution = std::nullopt) {
        const std::size_t n = points.size();
        std::vector<double> w(n, n ? 1.0 / static_cast<double>(n) : 0.0);
        return WeightedCloud(std::move(points), std::move(w), resolution);
    }

    /// Unit weights (the counting measure).
    static WeightedCloud counting(std::vector<Point3> points) {
        std::vector<double> w(points.size(), 1.0);
        return WeightedCloud(std::move(points), std::move(w));
    }

    /// Checked probability cloud: weights must sum to 1 within 1e-9.
    static WeightedCloud probability(std::vector<Point3> points, std::vector<double> weights,
                                     std::optional<double> resolution = std::nullopt) {
        WeightedCloud c(std::move(points), std::move(weights), resolution);
        if (!c.is_probability()) throw std::invalid_argument("WeightedCloud: weights do not sum to 1");
        return c;
    }

    std::size_t size() const noexcept { return points_.size(); }
    bool empty() const noexcept { return points_.empty(); }
    const Point3& point(std::size_t i) const { return points_[i]; }
    double weight(std::size_t i) const { return weights_[i]; }
    const std::vector<Point3>& points() const noexcept { return points_; }
    const std::vector<double>& weights() const noexcept { return weights_; }
    std::optional<double> resolution() const noexcept { return resolution_; }

    double mass() const noexcept { return std::accumulate(weights_.begin(), weights_.end(), 0.0); }
    bool is_probability() const noexcept { return !empty() && std::abs(mass() - 1.0) <= 1e-9; }

    /// Rejects scales below the construction resolution.
    void require_scale(double delta, const char* what) const {
        if (resolution_ && delta < *resolution_ * (1.0 - 1e-12))
            throw std::invalid_argument(std::string(what) + ": scale below the cloud's resolution");
    }

    /// Sub-measure on the given indices (weights kept, not renormalised).
    WeightedCloud subset(const std::vector<std::size_t>& idx) const {
        std::vector<Point3> p;
        std::vector<double> w;
        p.reserve(idx.size());
        w.reserve(idx.size());
        for (std::size_t i : idx) {
            p.push_back(points_.at(i));
            w.push_back(weights_.at(i));
        }
        return WeightedCloud(std::move(p), std::move(w), resolution_);
    }

    /// Largest pairwise distance (exact, quadratic).
    double diameter() const noexcept {
        double d = 0.0;
        for (std::size_t i = 0; i < points_.size(); ++i)
            for (std::size_t j = i + 1; j < points_.size(); ++j) d = std::max(d, distance(points_[i], points_[j]));
        return d;
    }

private:
    std::vector<Point3> points_;
    std::vector<double> weights_;
    std::optional<double> resolution_;
};

/// Smallest distance between the two clouds (exact, quadratic).
inline double cloud_distance(const WeightedCloud& a, const WeightedCloud& b) {
    double d = INFINITY;
    for (const Point3& p : a.points())
        for (const Point3& q : b.points()) d = std::min(d, distance(p, q));
    return d;
}

} // namespace rproj
