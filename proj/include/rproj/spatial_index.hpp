#pragma once

// kd-tree over the support of a WeightedCloud. Serves ball-mass queries
// (Frostman estimates) and the pruned candidate searches behind the
// multiplicity functions.

#include "rproj/cloud.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

namespace rproj {

struct Box3 {
    std::array<double, 3> lo;
    std::array<double, 3> hi;
};

inline std::array<double, 3> coords(const Point3& p) noexcept { return {p.x1(), p.x2(), p.r()}; }

/// Outcome of testing a bounding box against a query region.
enum class BoxRelation { outside, straddles, inside };

class KdTree {
public:
    explicit KdTree(const WeightedCloud& cloud, std::size_t leaf_size = 16) : cloud_(&cloud), leaf_size_(leaf_size) {
        order_.resize(cloud.size());
        std::iota(order_.begin(), order_.end(), std::size_t{0});
        if (!order_.empty()) build(0, order_.size());
    }

    const WeightedCloud& cloud() const noexcept { return *cloud_; }

    /// mu(closed ball B(z, radius)).
    double ball_mass(const Point3& z, double radius) const {
        if (nodes_.empty()) return 0.0;
        const auto c = coords(z);
        const double r2 = radius * radius;
        double total = 0.0;
        visit(
            [&](const Box3& b) {
                double near = 0.0, far = 0.0;
                for (int k = 0; k < 3; ++k) {
                    const double dl = c[k] - b.lo[k];
                    const double dh = b.hi[k] - c[k];
                    const double gap = std::max({0.0, -dl, -dh});
                    near += gap * gap;
                    const double span = std::max(std::abs(dl), std::abs(dh));
                    far += span * span;
                }
                if (near > r2) return BoxRelation::outside;
                if (far <= r2) return BoxRelation::inside;
                return BoxRelation::straddles;
            },
            [&](std::size_t i) {
                const Point3& p = cloud_->point(i);
                const double dx = p.x1() - c[0], dy = p.x2() - c[1], dr = p.r() - c[2];
                return dx * dx + dy * dy + dr * dr <= r2;
            },
            [&](std::size_t i) { total += cloud_->weight(i); },
            [&](std::size_t node) { total += nodes_[node].mass; });
        return total;
    }

    /// Indices (ascending) of points accepted by `test`, visiting only boxes
    /// that `classify` does not rule out. Boxes classified `inside` are
    /// accepted wholesale.
    template <class Classify, class Test>
    std::vector<std::size_t> collect(Classify&& classify, Test&& test) const {
        std::vector<std::size_t> out;
        if (nodes_.empty()) return out;
        visit(classify, test, [&](std::size_t i) { out.push_back(i); },
              [&](std::size_t node) {
                  for (std::size_t k = nodes_[node].begin; k < nodes_[node].end; ++k) out.push_back(order_[k]);
              });
        std::sort(out.begin(), out.end());
        return out;
    }

private:
    struct Node {
        Box3 box;
        std::size_t begin, end;
        double mass;
        std::int64_t left = -1, right = -1;
    };

    std::size_t build(std::size_t begin, std::size_t end) {
        Node node{};
        node.begin = begin;
        node.end = end;
        node.box.lo = {INFINITY, INFINITY, INFINITY};
        node.box.hi = {-INFINITY, -INFINITY, -INFINITY};
        node.mass = 0.0;
        for (std::size_t k = begin; k < end; ++k) {
            const auto c = coords(cloud_->point(order_[k]));
            for (int a = 0; a < 3; ++a) {
                node.box.lo[a] = std::min(node.box.lo[a], c[a]);
                node.box.hi[a] = std::max(node.box.hi[a], c[a]);
            }
            node.mass += cloud_->weight(order_[k]);
        }
        const std::size_t id = nodes_.size();
        nodes_.push_back(node);
        if (end - begin > leaf_size_) {
            int axis = 0;
            double widest = -1.0;
            for (int a = 0; a < 3; ++a) {
                const double w = node.box.hi[a] - node.box.lo[a];
                if (w > widest) {
                    widest = w;
                    axis = a;
                }
            }
            if (widest > 0.0) {
                const std::size_t mid = begin + (end - begin) / 2;
                std::nth_element(order_.begin() + static_cast<std::ptrdiff_t>(begin),
                                 order_.begin() + static_cast<std::ptrdiff_t>(mid),
                                 order_.begin() + static_cast<std::ptrdiff_t>(end), [&](std::size_t a, std::size_t b) {
                                     const double ca = coords(cloud_->point(a))[axis];
                                     const double cb = coords(cloud_->point(b))[axis];
                                     return ca < cb || (ca == cb && a < b);
                                 });
                const std::size_t l = build(begin, mid);
                const std::size_t r = build(mid, end);
                nodes_[id].left = static_cast<std::int64_t>(l);
                nodes_[id].right = static_cast<std::int64_t>(r);
            }
        }
        return id;
    }

    template <class Classify, class Test, class OnPoint, class OnNode>
    void visit(Classify&& classify, Test&& test, OnPoint&& on_point, OnNode&& on_node) const {
        std::vector<std::size_t> stack{0};
        while (!stack.empty()) {
            const std::size_t id = stack.back();
            stack.pop_back();
            const Node& n = nodes_[id];
            const BoxRelation rel = classify(n.box);
            if (rel == BoxRelation::outside) continue;
            if (rel == BoxRelation::inside) {
                on_node(id);
                continue;
            }
            if (n.left < 0) {
                for (std::size_t k = n.begin; k < n.end; ++k)
                    if (test(order_[k])) on_point(order_[k]);
                continue;
            }
            stack.push_back(static_cast<std::size_t>(n.right));
            stack.push_back(static_cast<std::size_t>(n.left));
        }
    }

    const WeightedCloud* cloud_;
    std::size_t leaf_size_;
    std::vector<std::size_t> order_;
    std::vector<Node> nodes_;
};

} // namespace rproj
