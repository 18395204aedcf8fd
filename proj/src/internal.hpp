#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <utility>
#include <vector>

namespace curvo::detail {

// ---- generic 2D convex polygon clipping ----

using Poly = std::vector<Eigen::Vector2d>;

// keep the side a.x <= b
inline void clip_halfplane(Poly& poly, const Eigen::Vector2d& a, double b) {
    if (poly.empty()) return;
    Poly out;
    out.reserve(poly.size() + 1);
    int m = static_cast<int>(poly.size());
    for (int i = 0; i < m; ++i) {
        const Eigen::Vector2d& p = poly[i];
        const Eigen::Vector2d& q = poly[(i + 1) % m];
        double fp = a.dot(p) - b;
        double fq = a.dot(q) - b;
        if (fp <= 0.0) out.push_back(p);
        if ((fp < 0.0 && fq > 0.0) || (fp > 0.0 && fq < 0.0)) {
            double t = fp / (fp - fq);
            out.push_back(p + t * (q - p));
        }
    }
    poly = std::move(out);
}

inline Eigen::Vector2d poly_centroid(const Poly& poly) {
    Eigen::Vector2d c = Eigen::Vector2d::Zero();
    for (auto& p : poly) c += p;
    return c / static_cast<double>(poly.size());
}

inline void build_csr(int n, const std::vector<std::pair<int, int>>& edges,
                      std::vector<int>& offset, std::vector<int>& adj) {
    offset.assign(n + 1, 0);
    for (auto& e : edges) {
        ++offset[e.first + 1];
        ++offset[e.second + 1];
    }
    for (int i = 0; i < n; ++i) offset[i + 1] += offset[i];
    adj.resize(edges.size() * 2);
    std::vector<int> cur(offset.begin(), offset.end() - 1);
    for (auto& e : edges) {
        adj[cur[e.first]++] = e.second;
        adj[cur[e.second]++] = e.first;
    }
    for (int i = 0; i < n; ++i)
        std::sort(adj.begin() + offset[i], adj.begin() + offset[i + 1]);
}

}  // namespace curvo::detail
