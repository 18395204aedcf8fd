#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "curvoronoi/error.hpp"

namespace curvo {

// Incremental 2D Delaunay triangulation (Bowyer-Watson) with a symbolic
// vertex at infinity, so hull adjacency is that of the full-plane Delaunay
// triangulation rather than an artifact of a finite super-triangle.  Points
// are inserted in Hilbert-curve order and located by walking, which keeps the
// expected cost near-linear on Poisson inputs.  Predicates run in long double
// on locally translated coordinates.
class Delaunay2D {
public:
    static constexpr std::int32_t kInfinite = -1;

    void build(const std::vector<double>& xs, const std::vector<double>& ys);

    int num_points() const { return static_cast<int>(xs_.size()); }
    int num_triangles() const { return static_cast<int>(tri_.size() / 3); }

    bool is_ghost(int t) const {
        return tri_[3 * t] == kInfinite || tri_[3 * t + 1] == kInfinite ||
               tri_[3 * t + 2] == kInfinite;
    }
    bool is_dead(int t) const { return dead_[t] != 0; }
    std::int32_t vertex(int t, int i) const { return tri_[3 * t + i]; }
    std::int32_t neighbor(int t, int i) const { return adj_[3 * t + i]; }

    // true if the vertex lies on the convex hull (its cell is unbounded)
    bool on_hull(int v) const { return hull_[v] != 0; }
    // some live triangle incident to v (ghosts possible for hull vertices)
    int incident_triangle(int v) const { return vert_tri_[v]; }

    // undirected edges between real vertices, each listed once
    std::vector<std::pair<std::int32_t, std::int32_t>> edges() const;
    // Every real edge lies in either two real triangles (interior) or one
    // real triangle plus one ghost (hull); emit from the smaller real
    // triangle index, or from the unique real triangle for hull edges.
    template <class F>
    void for_each_edge(F&& f) const {
        for (int t = 0; t < num_triangles(); ++t) {
            if (dead_[t] || is_ghost(t)) continue;
            for (int i = 0; i < 3; ++i) {
                std::int32_t a = tri_[3 * t + ((i + 1) % 3)];
                std::int32_t b = tri_[3 * t + ((i + 2) % 3)];
                int s = adj_[3 * t + i];
                if (s >= 0 && !is_ghost(s) && s < t) continue;
                f(a, b);
            }
        }
    }

    void circumcenter(int t, double& cx, double& cy) const;

    // Real triangles around vertex v in rotational order.  Returns false
    // (and a possibly partial list) when v is on the hull, i.e. its cell is
    // unbounded.
    bool cell_triangles(int v, std::vector<int>& out) const;

    double x(int v) const { return xs_[v]; }
    double y(int v) const { return ys_[v]; }

private:
    int locate(double px, double py, int hint) const;
    bool in_cavity(int t, double px, double py) const;
    int new_triangle(std::int32_t a, std::int32_t b, std::int32_t c);
    void insert_point(int v, int& hint);

    std::vector<double> xs_, ys_;
    std::vector<std::int32_t> tri_, adj_;
    std::vector<std::uint8_t> dead_;
    std::vector<std::uint8_t> hull_;
    std::vector<std::int32_t> vert_tri_;
    std::vector<std::int32_t> free_;
    mutable std::vector<std::int32_t> stamp_;
    mutable std::int32_t cur_stamp_ = 0;
    // scratch buffers for insertion
    std::vector<std::int32_t> cavity_, stack_;
    struct BoundaryEdge {
        std::int32_t u, v, outside;
    };
    std::vector<BoundaryEdge> boundary_;
    std::vector<std::int32_t> scratch_tris_;
};

// Hilbert-curve ordering of 2D points; returns the permutation.
std::vector<std::int32_t> hilbert_order(const std::vector<double>& xs,
                                        const std::vector<double>& ys);

}  // namespace curvo
