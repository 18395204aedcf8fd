#pragma once

#include <Eigen/Dense>
#include <limits>

namespace curvo {

// Exact 1D face computations on bisectors in d=2.  The Voronoi face between
// x and y within a point set V is the set of bisector points at least as
// close to x as to every w in V; each w clips the bisector parameter to a
// half-line, so the face is an interval obtained by intersection.

// Euclidean plane: the bisector of x,y is the line m + t*dir, where m is the
// midpoint and dir the unit perpendicular of y-x.
class BisectorR2 {
public:
    BisectorR2(const Eigen::Vector2d& x, const Eigen::Vector2d& y);

    // restrict to points at least as close to x as to w
    void clip(const Eigen::Vector2d& w);
    bool empty() const { return lo_ > hi_; }
    double lo() const { return lo_; }
    double hi() const { return hi_; }
    Eigen::Vector2d point_at(double t) const { return m_ + t * dir_; }
    // distance from x to the bisector point at parameter t
    double dist_x(double t) const { return std::sqrt(h_ * h_ + t * t); }
    // min distance from x to the clipped face; +inf when empty
    double min_dist_x() const;

private:
    Eigen::Vector2d x_, m_, dir_;
    double h_;
    double lo_ = -std::numeric_limits<double>::infinity();
    double hi_ = std::numeric_limits<double>::infinity();
};

// Unit hyperboloid (curvature -1): the bisector of x,y is the geodesic
// z(t) = cosh(t) u0 + sinh(t) u1 inside the Minkowski-orthogonal complement
// of x-y.  All clipping constraints are linear in z.
class BisectorH2 {
public:
    BisectorH2(const Eigen::Vector3d& x, const Eigen::Vector3d& y);

    void clip(const Eigen::Vector3d& w);
    bool empty() const { return lo_ > hi_; }
    double lo() const { return lo_; }
    double hi() const { return hi_; }
    Eigen::Vector3d point_at(double t) const;
    double dist_x(double t) const;
    double min_dist_x() const;

private:
    Eigen::Vector3d x_, u0_, u1_;
    double P_, Q_;  // -<x,u0>, -<x,u1>
    double lo_ = -std::numeric_limits<double>::infinity();
    double hi_ = std::numeric_limits<double>::infinity();
};

// Circumcenter of three unit-hyperboloid points, i.e. the point equidistant
// from all three.  Returns false when the circumscribed circle is ideal or
// ultra-ideal (no center on the hyperboloid).
bool hyperbolic_circumcenter(const Eigen::Vector3d& x, const Eigen::Vector3d& y,
                             const Eigen::Vector3d& w, Eigen::Vector3d& out);

}  // namespace curvo
