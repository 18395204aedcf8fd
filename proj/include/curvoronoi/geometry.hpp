#pragma once

#include <Eigen/Dense>
#include <limits>

#include "curvoronoi/error.hpp"

namespace curvo {

using Point = Eigen::VectorXd;

// A constant-curvature model space: Euclidean R^d (curvature 0) or the
// hyperboloid model of H^d (curvature c = -1/R^2 < 0).  curvature_bound_K is
// the K used by the normal-coordinate comparison estimates; it must dominate
// |curvature|.  Both models have infinite injectivity radius, so the only
// radius restriction that survives is r <= pi/(2 sqrt(K)) when K > 0.
struct SpaceSpec {
    int dimension = 2;
    double curvature = 0.0;
    double curvature_bound_K = 0.0;

    static SpaceSpec euclidean(int d, double K = 0.0);
    static SpaceSpec hyperbolic(int d, double c = -1.0);

    bool is_euclidean() const { return curvature == 0.0; }
    // R = 1/sqrt(|c|) for hyperbolic spaces
    double model_radius() const;
    int ambient_dim() const { return is_euclidean() ? dimension : dimension + 1; }
    // upper limit for chart radii: pi/(2 sqrt(K)), infinity when K = 0
    double radius_limit() const;
    void validate() const;
    void validate_point(const Point& x) const;
};

// Minkowski form <x,y> = -x0*y0 + sum_i xi*yi on the ambient space of the
// hyperboloid model.
double minkowski_dot(const Point& x, const Point& y);

double distance(const SpaceSpec& space, const Point& x, const Point& y);

// Point at parameter t in [0,1] along the minimizing geodesic from x to y.
Point geodesic_point(const SpaceSpec& space, const Point& x, const Point& y, double t);

// Radius profile of geodesic spheres: r, R sinh(r/R), or R sin(r/R)
// depending on the sign of the curvature.
double s_c(double curvature, double r);

// Volume of a metric ball of radius r in the d-dimensional constant-curvature
// model: omega_d * integral of s_c(t)^(d-1).  Closed forms for c = 0 and for
// d = 2; adaptive quadrature (relative error 1e-10) otherwise.
double ball_volume(double curvature, int d, double r);

// Normal-coordinate chart at a base point.  frame columns are an orthonormal
// basis of the tangent space (Minkowski-orthonormal and orthogonal to the
// base point in the hyperboloid model).
struct Chart {
    SpaceSpec space;
    Point base;
    double radius = 0.0;
    Eigen::MatrixXd frame;  // ambient_dim x dimension
};

Chart normal_chart(const SpaceSpec& space, const Point& base,
                   double radius = std::numeric_limits<double>::infinity());

// exp map in the chart frame: v in R^d with |v| < radius -> point of M
Point chart_forward(const Chart& chart, const Eigen::VectorXd& v);

// log map: point of B_M(base, radius) -> chart coordinates
Eigen::VectorXd chart_inverse(const Chart& chart, const Point& p);

// Density of the pushforward of the Riemannian volume against Lebesgue
// measure at v: (s_c(|v|)/|v|)^(d-1), with limit 1 at v = 0.
double chart_density(const Chart& chart, const Eigen::VectorXd& v);

}  // namespace curvo
